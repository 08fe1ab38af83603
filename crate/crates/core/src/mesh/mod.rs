//! Indexed closed 2-manifold meshes with per-vertex normals.
//!
//! Faces are all triangles or all quads, oriented consistently. Adjacency is
//! built once on construction: halfedge twins, the edge list and, for every
//! vertex, its one-ring of neighbours and faces ordered so that consecutive
//! neighbours `v_i, v_{i+1}` are the two edge-neighbours of `p` in face `f_i`
//! and `(v_i - p) x (v_{i+1} - p)` follows the face orientation.

mod obj;
mod ply;
pub mod primitives;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::exec::{self, Execution};
use crate::geom::{UnitVec3, Vec3};

pub use obj::{load_obj, parse_obj, save_obj, write_obj};
pub use ply::{save_ply, write_ply, PlyFormat};

/// Allowed norm deviation of input normals that are silently renormalized.
pub const NORMAL_RENORMALIZE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("faces of arity {0} are not supported (only triangles or quads)")]
    UnsupportedArity(usize),
    #[error("mesh mixes faces of arity {first} and {other}")]
    MixedFaceArity { first: usize, other: usize },
    #[error("face {face} references vertex {index}, but there are {len} vertices")]
    IndexOutOfRange { face: usize, index: usize, len: usize },
    #[error("mesh is not a 2-manifold: {0}")]
    NonManifold(String),
    #[error("edge ({0}, {1}) has only one incident face")]
    OpenBoundary(usize, usize),
    #[error("vertex {0} is not used by any face")]
    IsolatedVertex(usize),
    #[error("mesh has no faces")]
    Empty,
    #[error("{normals} normals given for {vertices} vertices")]
    NormalCountMismatch { normals: usize, vertices: usize },
    #[error("normal of vertex {vertex} has norm {norm}")]
    NonUnitNormal { vertex: usize, norm: f64 },
    #[error("corner at vertex {vertex} is degenerate (zero cross product)")]
    DegenerateCorner { vertex: usize },
    #[error("naive normal at vertex {vertex} vanishes")]
    VanishingNormal { vertex: usize },
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Connectivity derived from the face list.
#[derive(Debug, Clone)]
pub struct Topology {
    arity: usize,
    twin: Vec<usize>,
    halfedge_edge: Vec<usize>,
    edges: Vec<[usize; 2]>,
    edge_halfedge: Vec<usize>,
    ring_offsets: Vec<usize>,
    ring_vertices: Vec<usize>,
    ring_faces: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<Vec3>,
    normals: Option<Vec<UnitVec3>>,
    arity: usize,
    indices: Vec<usize>,
    topology: Arc<Topology>,
}

impl Mesh {
    /// Builds a mesh from polygon index lists. All faces must have the same
    /// arity, 3 or 4.
    pub fn new(vertices: Vec<Vec3>, faces: &[Vec<usize>]) -> Result<Mesh, MeshError> {
        let first = faces.first().ok_or(MeshError::Empty)?.len();
        if let Some(f) = faces.iter().find(|f| f.len() != first) {
            if matches!(first, 3 | 4) && matches!(f.len(), 3 | 4) {
                return Err(MeshError::MixedFaceArity { first, other: f.len() });
            }
        }
        let bad = faces.iter().map(Vec::len).find(|n| !matches!(n, 3 | 4));
        if let Some(n) = bad {
            return Err(MeshError::UnsupportedArity(n));
        }
        let indices = faces.iter().flatten().copied().collect();
        Mesh::from_flat(vertices, first, indices)
    }

    /// Builds a mesh from a flat index buffer with `arity` indices per face.
    pub fn from_flat(vertices: Vec<Vec3>, arity: usize, indices: Vec<usize>) -> Result<Mesh, MeshError> {
        if !matches!(arity, 3 | 4) {
            return Err(MeshError::UnsupportedArity(arity));
        }
        if indices.is_empty() {
            return Err(MeshError::Empty);
        }
        debug_assert_eq!(indices.len() % arity, 0);
        let topology = Topology::build(vertices.len(), arity, &indices)?;
        Ok(Mesh {
            vertices,
            normals: None,
            arity,
            indices,
            topology: Arc::new(topology),
        })
    }

    /// Attaches per-vertex normals. Norms within
    /// [`NORMAL_RENORMALIZE_TOLERANCE`] of one are renormalized.
    pub fn with_normals(self, normals: Vec<Vec3>) -> Result<Mesh, MeshError> {
        if normals.len() != self.vertices.len() {
            return Err(MeshError::NormalCountMismatch {
                normals: normals.len(),
                vertices: self.vertices.len(),
            });
        }
        let normals = normals
            .into_iter()
            .enumerate()
            .map(|(vertex, n)| {
                let norm = n.norm();
                if (norm - 1.0).abs() > NORMAL_RENORMALIZE_TOLERANCE || !norm.is_finite() {
                    Err(MeshError::NonUnitNormal { vertex, norm })
                } else {
                    Ok(UnitVec3::new_unchecked(n / norm))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Mesh {
            normals: Some(normals),
            ..self
        })
    }

    pub fn with_unit_normals(self, normals: Vec<UnitVec3>) -> Result<Mesh, MeshError> {
        if normals.len() != self.vertices.len() {
            return Err(MeshError::NormalCountMismatch {
                normals: normals.len(),
                vertices: self.vertices.len(),
            });
        }
        Ok(Mesh {
            normals: Some(normals),
            ..self
        })
    }

    pub fn without_normals(self) -> Mesh {
        Mesh { normals: None, ..self }
    }

    /// Same connectivity, new positions.
    pub fn with_vertices(&self, vertices: Vec<Vec3>) -> Mesh {
        assert_eq!(vertices.len(), self.vertices.len());
        Mesh {
            vertices,
            normals: None,
            arity: self.arity,
            indices: self.indices.clone(),
            topology: Arc::clone(&self.topology),
        }
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn normals(&self) -> Option<&[UnitVec3]> {
        self.normals.as_deref()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_faces(&self) -> usize {
        self.indices.len() / self.arity
    }

    pub fn num_edges(&self) -> usize {
        self.topology.edges.len()
    }

    pub fn face(&self, f: usize) -> &[usize] {
        &self.indices[f * self.arity..(f + 1) * self.arity]
    }

    pub fn faces(&self) -> impl ExactSizeIterator<Item = &[usize]> + '_ {
        self.indices.chunks_exact(self.arity)
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    /// Edges as vertex pairs `[a, b]` with `a < b`, in order of first
    /// appearance in the face list.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.topology.edges
    }

    /// Ordered neighbours of `v`.
    pub fn ring(&self, v: usize) -> &[usize] {
        self.topology.ring(v)
    }

    /// Faces around `v`; face `i` lies between `ring(v)[i]` and `ring(v)[i+1]`.
    pub fn ring_faces(&self, v: usize) -> &[usize] {
        self.topology.ring_faces(v)
    }

    pub fn valence(&self, v: usize) -> usize {
        self.ring(v).len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    /// Largest absolute coordinate.
    pub fn extent(&self) -> f64 {
        self.vertices.iter().fold(0.0, |m, p| m.max(p.max_abs()))
    }

    /// Uniformly scaled copy (normals preserved).
    pub fn scaled(&self, s: f64) -> Mesh {
        let mut m = self.with_vertices(self.vertices.iter().map(|p| *p * s).collect());
        m.normals = self.normals.clone();
        m
    }
}

impl Topology {
    fn build(num_vertices: usize, arity: usize, indices: &[usize]) -> Result<Topology, MeshError> {
        let nh = indices.len();
        let from = |h: usize| indices[h];
        let to = |h: usize| {
            let f = h / arity;
            indices[f * arity + (h % arity + 1) % arity]
        };

        let mut incident = vec![0usize; num_vertices];
        for (h, &v) in indices.iter().enumerate() {
            if v >= num_vertices {
                return Err(MeshError::IndexOutOfRange {
                    face: h / arity,
                    index: v,
                    len: num_vertices,
                });
            }
            incident[v] += 1;
        }
        for f in 0..nh / arity {
            let face = &indices[f * arity..(f + 1) * arity];
            for i in 0..arity {
                if face[i + 1..].contains(&face[i]) {
                    return Err(MeshError::NonManifold(format!("face {f} repeats vertex {}", face[i])));
                }
            }
        }
        if let Some(v) = incident.iter().position(|&c| c == 0) {
            return Err(MeshError::IsolatedVertex(v));
        }

        let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(nh);
        let mut outgoing = vec![usize::MAX; num_vertices];
        for h in 0..nh {
            if directed.insert((from(h), to(h)), h).is_some() {
                return Err(MeshError::NonManifold(format!(
                    "directed edge ({}, {}) used by two faces (inconsistent orientation or more than two faces)",
                    from(h),
                    to(h)
                )));
            }
            if outgoing[from(h)] == usize::MAX {
                outgoing[from(h)] = h;
            }
        }

        let mut twin = vec![0usize; nh];
        let mut halfedge_edge = vec![usize::MAX; nh];
        let mut edges = Vec::with_capacity(nh / 2);
        let mut edge_halfedge = Vec::with_capacity(nh / 2);
        for h in 0..nh {
            let (a, b) = (from(h), to(h));
            let t = *directed.get(&(b, a)).ok_or(MeshError::OpenBoundary(a, b))?;
            twin[h] = t;
            if halfedge_edge[h] == usize::MAX {
                let e = edges.len();
                edges.push([a.min(b), a.max(b)]);
                edge_halfedge.push(h);
                halfedge_edge[h] = e;
                halfedge_edge[t] = e;
            }
        }

        let prev = |h: usize| {
            let f = h / arity;
            f * arity + (h % arity + arity - 1) % arity
        };
        let mut ring_offsets = Vec::with_capacity(num_vertices + 1);
        let mut ring_vertices = Vec::with_capacity(nh);
        let mut ring_faces = Vec::with_capacity(nh);
        ring_offsets.push(0);
        for v in 0..num_vertices {
            let start = outgoing[v];
            let mut h = start;
            let mut count = 0;
            loop {
                ring_vertices.push(to(h));
                ring_faces.push(h / arity);
                count += 1;
                // The halfedge entering v in this face; its twin leaves v in
                // the next face around.
                h = twin[prev(h)];
                if h == start || count > incident[v] {
                    break;
                }
            }
            if count != incident[v] {
                return Err(MeshError::NonManifold(format!(
                    "faces around vertex {v} do not form a single fan"
                )));
            }
            ring_offsets.push(ring_vertices.len());
        }

        Ok(Topology {
            arity,
            twin,
            halfedge_edge,
            edges,
            edge_halfedge,
            ring_offsets,
            ring_vertices,
            ring_faces,
        })
    }

    pub fn ring(&self, v: usize) -> &[usize] {
        &self.ring_vertices[self.ring_offsets[v]..self.ring_offsets[v + 1]]
    }

    pub fn ring_faces(&self, v: usize) -> &[usize] {
        &self.ring_faces[self.ring_offsets[v]..self.ring_offsets[v + 1]]
    }

    pub fn twin(&self, h: usize) -> usize {
        self.twin[h]
    }

    pub fn edge_of(&self, h: usize) -> usize {
        self.halfedge_edge[h]
    }

    /// A halfedge of edge `e` (the first one met in face order).
    pub fn edge_halfedge(&self, e: usize) -> usize {
        self.edge_halfedge[e]
    }

    pub fn face_of(&self, h: usize) -> usize {
        h / self.arity
    }

    pub fn next(&self, h: usize) -> usize {
        let f = h / self.arity;
        f * self.arity + (h % self.arity + 1) % self.arity
    }

    pub fn prev(&self, h: usize) -> usize {
        let f = h / self.arity;
        f * self.arity + (h % self.arity + self.arity - 1) % self.arity
    }
}

/// Wedge `(v_i - p, v_{i+1} - p)` of face `f_i` at `p`: edge vectors, unit
/// normal and angle.
pub(crate) struct Wedge {
    pub left: Vec3,
    pub right: Vec3,
    pub angle: f64,
}

pub(crate) fn wedges(mesh: &Mesh, v: usize) -> impl Iterator<Item = Wedge> + '_ {
    let p = mesh.vertices[v];
    let ring = mesh.ring(v);
    let k = ring.len();
    (0..k).map(move |i| {
        let left = mesh.vertices[ring[i]] - p;
        let right = mesh.vertices[ring[(i + 1) % k]] - p;
        Wedge {
            left,
            right,
            angle: left.angle_to(right),
        }
    })
}

/// Angle-weighted average of the wedge normals at every vertex.
pub fn naive_normals(mesh: &Mesh) -> Result<Vec<UnitVec3>, MeshError> {
    naive_normals_with(mesh, Execution::default())
}

pub fn naive_normals_with(mesh: &Mesh, exec: Execution) -> Result<Vec<UnitVec3>, MeshError> {
    exec::try_map_range(mesh.num_vertices(), exec, |v| naive_normal_at(mesh, v))
}

fn naive_normal_at(mesh: &Mesh, v: usize) -> Result<UnitVec3, MeshError> {
    let mut sum = Vec3::ZERO;
    let mut total = 0.0;
    for w in wedges(mesh, v) {
        let a = w
            .left
            .cross(w.right)
            .normalize()
            .map_err(|_| MeshError::DegenerateCorner { vertex: v })?;
        sum += *a * w.angle;
        total += w.angle;
    }
    let a = sum / total;
    if !(a.norm() > 1e-12) {
        return Err(MeshError::VanishingNormal { vertex: v });
    }
    a.normalize().map_err(|_| MeshError::VanishingNormal { vertex: v })
}
