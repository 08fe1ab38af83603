//! Stencil catalogs of the four linear schemes.
//!
//! Output vertices are numbered: old vertices first, then one vertex per
//! edge (in [`Mesh::edges`] order), then, for quad schemes, one per face.

use std::f64::consts::PI;

use super::BaseScheme;
use crate::avgplan::{PlanError, Stencil, StencilBuilder};
use crate::mesh::Mesh;

/// Weights of the univariate interpolating 4-point rule.
pub const FOUR_POINT: [f64; 4] = [-1.0 / 16.0, 9.0 / 16.0, 9.0 / 16.0, -1.0 / 16.0];

/// Loop's vertex weight for valence `k`.
pub fn loop_beta(k: usize) -> f64 {
    let k = k as f64;
    let c = 3.0 / 8.0 + 0.25 * (2.0 * PI / k).cos();
    (5.0 / 8.0 - c * c) / k
}

pub(crate) fn stencil_for(mesh: &Mesh, base: BaseScheme, out: usize) -> Result<Stencil, PlanError> {
    let nv = mesh.num_vertices();
    let ne = mesh.num_edges();
    if out < nv {
        match base {
            BaseScheme::Loop => loop_vertex(mesh, out),
            BaseScheme::CatmullClark => cc_vertex(mesh, out),
            BaseScheme::Butterfly | BaseScheme::Kobbelt4 => Ok(Stencil::identity(out)),
        }
    } else if out < nv + ne {
        let e = out - nv;
        match base {
            BaseScheme::Loop => loop_edge(mesh, e),
            BaseScheme::Butterfly => butterfly_edge(mesh, e),
            BaseScheme::CatmullClark => cc_edge(mesh, e),
            BaseScheme::Kobbelt4 => kobbelt_edge(mesh, e),
        }
    } else {
        let f = out - nv - ne;
        match base {
            BaseScheme::CatmullClark => centroid(mesh, f),
            BaseScheme::Kobbelt4 => kobbelt_face(mesh, f),
            BaseScheme::Loop | BaseScheme::Butterfly => unreachable!("triangle schemes add no face points"),
        }
    }
}

/// Endpoints of edge `e` and the vertices opposite to it in the two incident
/// triangles: `(a, b, c, d)` with `(a, b, c)` and `(b, a, d)` faces.
fn edge_diamond(mesh: &Mesh, e: usize) -> (usize, usize, usize, usize) {
    let t = mesh.topology();
    let ix = mesh.indices();
    let h = t.edge_halfedge(e);
    let o = t.twin(h);
    (ix[h], ix[t.next(h)], ix[t.prev(h)], ix[t.prev(o)])
}

/// Vertex opposite to halfedge `h`'s twin in the neighbouring triangle.
fn across(mesh: &Mesh, h: usize) -> usize {
    let t = mesh.topology();
    mesh.indices()[t.prev(t.twin(h))]
}

fn loop_edge(mesh: &Mesh, e: usize) -> Result<Stencil, PlanError> {
    let (a, b, c, d) = edge_diamond(mesh, e);
    StencilBuilder::new()
        .add(a, 3.0 / 8.0)
        .add(b, 3.0 / 8.0)
        .add(c, 1.0 / 8.0)
        .add(d, 1.0 / 8.0)
        .build()
}

fn loop_vertex(mesh: &Mesh, v: usize) -> Result<Stencil, PlanError> {
    let ring = mesh.ring(v);
    let k = ring.len();
    let beta = loop_beta(k);
    let mut b = StencilBuilder::new();
    b.add(v, 1.0 - k as f64 * beta);
    for &n in ring {
        b.add(n, beta);
    }
    b.build()
}

/// Eight-point butterfly: `1/2 (a + b) + 1/8 (c + d) - 1/16 (e + f + g + h)`.
/// Near extraordinary vertices the wing slots are filled with the triangles
/// across the four outer edges of the diamond.
fn butterfly_edge(mesh: &Mesh, e: usize) -> Result<Stencil, PlanError> {
    let t = mesh.topology();
    let h = t.edge_halfedge(e);
    let o = t.twin(h);
    let (a, b, c, d) = edge_diamond(mesh, e);
    let mut sb = StencilBuilder::new();
    sb.add(a, 0.5).add(b, 0.5).add(c, 0.125).add(d, 0.125);
    for outer in [t.next(h), t.prev(h), t.next(o), t.prev(o)] {
        sb.add(across(mesh, outer), -1.0 / 16.0);
    }
    sb.build()
}

fn centroid(mesh: &Mesh, f: usize) -> Result<Stencil, PlanError> {
    let face = mesh.face(f);
    let w = 1.0 / face.len() as f64;
    let mut b = StencilBuilder::new();
    for &v in face {
        b.add(v, w);
    }
    b.build()
}

fn cc_edge(mesh: &Mesh, e: usize) -> Result<Stencil, PlanError> {
    let t = mesh.topology();
    let h = t.edge_halfedge(e);
    let [a, b] = mesh.edges()[e];
    let mut sb = StencilBuilder::new();
    sb.add(a, 0.25).add(b, 0.25);
    for f in [t.face_of(h), t.face_of(t.twin(h))] {
        for &v in mesh.face(f) {
            sb.add(v, 0.25 / 4.0);
        }
    }
    sb.build()
}

/// `(Q + 2R + (k - 3) P) / k` with `Q` the mean of the adjacent face points
/// and `R` the mean of the adjacent edge midpoints.
fn cc_vertex(mesh: &Mesh, v: usize) -> Result<Stencil, PlanError> {
    let ring = mesh.ring(v);
    let k = ring.len() as f64;
    let mut sb = StencilBuilder::new();
    sb.add(v, (k - 3.0) / k);
    for &f in mesh.ring_faces(v) {
        for &u in mesh.face(f) {
            sb.add(u, 1.0 / (k * k * 4.0));
        }
    }
    for &n in ring {
        sb.add(v, 1.0 / (k * k));
        sb.add(n, 1.0 / (k * k));
    }
    sb.build()
}

/// Neighbour of `a` across from `b` at a valence-4 vertex.
fn opposite(mesh: &Mesh, a: usize, b: usize) -> Option<usize> {
    let ring = mesh.ring(a);
    if ring.len() != 4 {
        return None;
    }
    let j = ring.iter().position(|&x| x == b)?;
    Some(ring[(j + 2) % 4])
}

/// Vertex diagonal to `v` in the face opposite to `f` around valence-4 `v`.
fn diagonal(mesh: &Mesh, v: usize, f: usize) -> Option<usize> {
    let faces = mesh.ring_faces(v);
    if faces.len() != 4 {
        return None;
    }
    let j = faces.iter().position(|&x| x == f)?;
    let g = mesh.face(faces[(j + 2) % 4]);
    let p = g.iter().position(|&x| x == v)?;
    Some(g[(p + 2) % 4])
}

fn all_distinct(ids: &[usize]) -> bool {
    ids.iter().enumerate().all(|(i, x)| !ids[i + 1..].contains(x))
}

fn kobbelt_edge(mesh: &Mesh, e: usize) -> Result<Stencil, PlanError> {
    let [a, b] = mesh.edges()[e];
    let line = opposite(mesh, a, b)
        .zip(opposite(mesh, b, a))
        .map(|(pa, pb)| [pa, a, b, pb])
        .filter(|l| all_distinct(l));
    match line {
        Some(line) => {
            let mut sb = StencilBuilder::new();
            for (v, w) in line.into_iter().zip(FOUR_POINT) {
                sb.add(v, w);
            }
            sb.build()
        }
        None => StencilBuilder::new().add(a, 0.5).add(b, 0.5).build(),
    }
}

/// The 4x4 control grid around a quad whose corners all have valence 4.
fn kobbelt_grid(mesh: &Mesh, f: usize) -> Option<[[usize; 4]; 4]> {
    let q = mesh.face(f);
    let (v0, v1, v2, v3) = (q[0], q[1], q[2], q[3]);
    let opp = |a, b| opposite(mesh, a, b);
    let diag = |v| diagonal(mesh, v, f);
    let grid = [
        [diag(v0)?, opp(v0, v3)?, opp(v1, v2)?, diag(v1)?],
        [opp(v0, v1)?, v0, v1, opp(v1, v0)?],
        [opp(v3, v2)?, v3, v2, opp(v2, v3)?],
        [diag(v3)?, opp(v3, v0)?, opp(v2, v1)?, diag(v2)?],
    ];
    let flat: Vec<usize> = grid.iter().flatten().copied().collect();
    all_distinct(&flat).then_some(grid)
}

fn kobbelt_face(mesh: &Mesh, f: usize) -> Result<Stencil, PlanError> {
    match kobbelt_grid(mesh, f) {
        Some(grid) => {
            let mut sb = StencilBuilder::new();
            for (r, row) in grid.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    sb.add(v, FOUR_POINT[r] * FOUR_POINT[c]);
                }
            }
            sb.build()
        }
        None => centroid(mesh, f),
    }
}
