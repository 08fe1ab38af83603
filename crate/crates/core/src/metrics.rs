//! Fairness measures of refined meshes: dihedral angles across edges,
//! angle-deficit curvature and its local spread, and the deviation of stored
//! normals from naive ones.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::{map_range, try_map_range, Execution};
use crate::geom::Vec3;
use crate::mesh::{naive_normals_with, wedges, Mesh, MeshError};

/// Cells with area at or below this have undefined curvature.
pub const MIN_CELL_AREA: f64 = 1e-15;

/// Below this magnitude a curvature value gets the neutral colour.
pub const NEUTRAL_CURVATURE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("face {face} is degenerate")]
    DegenerateFace { face: usize },
    #[error("barycentric cell of vertex {vertex} has zero area")]
    ZeroArea { vertex: usize },
    #[error("mesh has no stored normals")]
    MissingNormals,
    #[error("invalid colour range [{lo}, {hi}]: lo must be below hi")]
    InvalidRange { lo: f64, hi: f64 },
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// Unit normal of a triangle, or `None` if it has zero area.
fn triangle_normal(a: Vec3, b: Vec3, c: Vec3) -> Option<Vec3> {
    (b - a).cross(c - a).normalize().ok().map(|n| n.get())
}

/// Normal of the quad across edge `a -> b`: `l x e` with `l` from the
/// edge midpoint to the midpoint of the opposite edge.
fn quad_edge_normal(mesh: &Mesh, h: usize) -> Option<Vec3> {
    let t = mesh.topology();
    let ix = mesh.indices();
    let p = mesh.vertices();
    let (a, b) = (p[ix[h]], p[ix[t.next(h)]]);
    let c = p[ix[t.next(t.next(h))]];
    let d = p[ix[t.prev(h)]];
    let l = (c + d) * 0.5 - (a + b) * 0.5;
    let n = l.cross(b - a);
    (n.norm() > 0.0).then_some(n)
}

pub fn dihedral_angles(mesh: &Mesh) -> Result<Vec<f64>, MetricsError> {
    dihedral_angles_with(mesh, Execution::default())
}

/// Per-edge angle between the normals on either side, in radians.
pub fn dihedral_angles_with(mesh: &Mesh, exec: Execution) -> Result<Vec<f64>, MetricsError> {
    let t = mesh.topology();
    let p = mesh.vertices();
    if mesh.arity() == 3 {
        let normals = try_map_range(mesh.num_faces(), exec, |f| {
            let q = mesh.face(f);
            triangle_normal(p[q[0]], p[q[1]], p[q[2]]).ok_or(MetricsError::DegenerateFace { face: f })
        })?;
        Ok(map_range(mesh.num_edges(), exec, |e| {
            let h = t.edge_halfedge(e);
            normals[t.face_of(h)].angle_to(normals[t.face_of(t.twin(h))])
        }))
    } else {
        try_map_range(mesh.num_edges(), exec, |e| {
            let h = t.edge_halfedge(e);
            let o = t.twin(h);
            let left = quad_edge_normal(mesh, h).ok_or(MetricsError::DegenerateFace { face: t.face_of(h) })?;
            let right = quad_edge_normal(mesh, o).ok_or(MetricsError::DegenerateFace { face: t.face_of(o) })?;
            Ok(left.angle_to(right))
        })
    }
}

/// `2 pi` minus the corner angles at `v`, and the barycentric cell area.
fn deficit_and_area(mesh: &Mesh, v: usize) -> (f64, f64) {
    let (angles, area) = wedges(mesh, v).fold((0.0, 0.0), |(s, a), w| {
        (s + w.angle, a + w.left.norm() * w.right.norm() * w.angle.sin())
    });
    (2.0 * PI - angles, area / 6.0)
}

pub fn angle_deficits(mesh: &Mesh) -> Vec<f64> {
    map_range(mesh.num_vertices(), Execution::default(), |v| {
        deficit_and_area(mesh, v).0
    })
}

pub fn curvature(mesh: &Mesh) -> Result<Vec<f64>, MetricsError> {
    curvature_with(mesh, Execution::default())
}

/// Angle deficit over barycentric cell area at every vertex.
pub fn curvature_with(mesh: &Mesh, exec: Execution) -> Result<Vec<f64>, MetricsError> {
    try_map_range(mesh.num_vertices(), exec, |v| {
        let (deficit, area) = deficit_and_area(mesh, v);
        if area <= MIN_CELL_AREA {
            return Err(MetricsError::ZeroArea { vertex: v });
        }
        Ok(deficit / area)
    })
}

/// Spread `max K - min K` over each vertex and its one-ring.
pub fn zeta(mesh: &Mesh, curvature: &[f64]) -> Vec<f64> {
    zeta_with(mesh, curvature, Execution::default())
}

pub fn zeta_with(mesh: &Mesh, curvature: &[f64], exec: Execution) -> Vec<f64> {
    map_range(mesh.num_vertices(), exec, |v| {
        let k = curvature[v];
        let (lo, hi) = mesh
            .ring(v)
            .iter()
            .map(|&u| curvature[u])
            .fold((k, k), |(lo, hi), x| (lo.min(x), hi.max(x)));
        hi - lo
    })
}

fn max(values: &[f64]) -> f64 {
    values.iter().copied().fold(0.0, f64::max)
}

/// Maximal dihedral angle in degrees and maximal curvature spread.
pub fn psi_zeta_star(mesh: &Mesh) -> Result<(f64, f64), MetricsError> {
    let r = MetricsReport::compute(mesh, false, false, Execution::default())?;
    Ok((r.psi_deg, r.zeta_star))
}

/// Mean angle in degrees between stored normals and naive normals.
pub fn normal_deviation(mesh: &Mesh) -> Result<f64, MetricsError> {
    normal_deviation_with(mesh, Execution::default())
}

pub fn normal_deviation_with(mesh: &Mesh, exec: Execution) -> Result<f64, MetricsError> {
    let stored = mesh.normals().ok_or(MetricsError::MissingNormals)?;
    let naive = naive_normals_with(mesh, exec)?;
    let sum: f64 = stored.iter().zip(&naive).map(|(a, b)| a.angle_to(*b)).sum();
    Ok((sum / stored.len() as f64).to_degrees())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub psi_deg: f64,
    pub zeta_star: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub xi_deg: Option<f64>,
    /// Radians, in edge order.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dihedral: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub curvature: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub zeta: Option<Vec<f64>>,
}

impl MetricsReport {
    pub fn compute(
        mesh: &Mesh,
        with_xi: bool,
        with_arrays: bool,
        exec: Execution,
    ) -> Result<MetricsReport, MetricsError> {
        let dihedral = dihedral_angles_with(mesh, exec)?;
        let curvature = curvature_with(mesh, exec)?;
        let zeta = zeta_with(mesh, &curvature, exec);
        let xi_deg = if with_xi {
            Some(normal_deviation_with(mesh, exec)?)
        } else {
            None
        };
        Ok(MetricsReport {
            psi_deg: max(&dihedral).to_degrees(),
            zeta_star: max(&zeta),
            xi_deg,
            dihedral: with_arrays.then_some(dihedral),
            curvature: with_arrays.then_some(curvature),
            zeta: with_arrays.then_some(zeta),
        })
    }
}

const WHITE: [u8; 3] = [255, 255, 255];

fn mix(a: [f64; 3], b: [f64; 3], t: f64) -> [u8; 3] {
    let c = |i: usize| (a[i] + (b[i] - a[i]) * t).round().clamp(0.0, 255.0) as u8;
    [c(0), c(1), c(2)]
}

/// Curvature colour: white at zero, yellow to red for positive values over
/// `[max(lo, 0), hi]`, cyan to blue for negative values over `[lo, min(hi, 0)]`.
/// Values beyond the range are clamped.
pub fn curvature_color(k: f64, lo: f64, hi: f64) -> Result<[u8; 3], MetricsError> {
    if !(lo < hi) {
        return Err(MetricsError::InvalidRange { lo, hi });
    }
    if k.abs() <= NEUTRAL_CURVATURE {
        return Ok(WHITE);
    }
    let ramp = |x: f64, from: f64, to: f64| {
        if to == from {
            1.0
        } else {
            ((x - from) / (to - from)).clamp(0.0, 1.0)
        }
    };
    Ok(if k > 0.0 {
        let from = lo.max(0.0);
        let t = if hi <= 0.0 { 1.0 } else { ramp(k, from, hi) };
        mix([255.0, 255.0, 0.0], [255.0, 0.0, 0.0], t)
    } else {
        let from = hi.min(0.0);
        let t = if lo >= 0.0 { 1.0 } else { ramp(k, from, lo) };
        mix([0.0, 255.0, 255.0], [0.0, 0.0, 255.0], t)
    })
}

/// Per-vertex curvature colours.
pub fn colorize(mesh: &Mesh, lo: f64, hi: f64) -> Result<Vec<[u8; 3]>, MetricsError> {
    curvature_color(0.0, lo, hi)?;
    curvature(mesh)?
        .into_iter()
        .map(|k| curvature_color(k, lo, hi))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::UnitVec3;
    use crate::mesh::primitives::*;

    #[test]
    fn cube_dihedral_is_right_angle() {
        let d = dihedral_angles(&cube()).unwrap();
        assert_eq!(d.len(), 12);
        assert!(d.iter().all(|a| (a - PI / 2.0).abs() < 1e-15));
    }

    #[test]
    fn octahedron_dihedral() {
        // face normals (1,1,1)/sqrt3 and (1,1,-1)/sqrt3 meet at acos(1/3)
        let d = dihedral_angles(&octahedron()).unwrap();
        assert!(d.iter().all(|a| (a - (1.0f64 / 3.0).acos()).abs() < 1e-14));
        assert!((d[0].to_degrees() - 70.528_779).abs() < 1e-5);
    }

    #[test]
    fn planar_dihedrals_vanish() {
        let m = pillow_grid(4, 3);
        let interior = pillow_top_interior(4, 3);
        let d = dihedral_angles(&m).unwrap();
        for (e, &[a, b]) in m.edges().iter().enumerate() {
            if interior.contains(&a) && interior.contains(&b) {
                assert!(d[e].abs() < 1e-15);
            }
        }
        let m = triangulate(&m);
        let d = dihedral_angles(&m).unwrap();
        for (e, &[a, b]) in m.edges().iter().enumerate() {
            if interior.contains(&a) || interior.contains(&b) {
                assert!(d[e].abs() < 1e-15);
            }
        }
    }

    #[test]
    fn octahedron_curvature() {
        // unit edges: deficit 2pi/3, cell area sqrt(3)/3
        let m = octahedron().scaled(1.0 / 2f64.sqrt());
        let k = curvature(&m).unwrap();
        let expect = 2.0 * PI / 3f64.sqrt();
        assert!(k.iter().all(|x| (x - expect).abs() < 1e-12));
    }

    #[test]
    fn curvature_scales_inverse_square() {
        let m = icosphere(1);
        let k1 = curvature(&m).unwrap();
        let k3 = curvature(&m.scaled(3.0)).unwrap();
        for (a, b) in k1.iter().zip(&k3) {
            assert!((a / 9.0 - b).abs() < 1e-12 * a.abs());
        }
    }

    #[test]
    fn gauss_bonnet() {
        // exact for triangles and planar quads
        for m in [cube(), icosphere(2), triangulate(&quad_sphere(3)), tetrahedron()] {
            let total: f64 = angle_deficits(&m).iter().sum();
            assert!((total - 4.0 * PI).abs() < 1e-9, "{total}");
        }
        let total: f64 = angle_deficits(&torus_quad(8, 6, 3.0, 1.0)).iter().sum();
        assert!(total.abs() < 1e-9);
    }

    #[test]
    fn zeta_is_ring_spread() {
        let m = octahedron();
        let mut k = vec![2.0; 6];
        k[0] = 1.0;
        k[4] = 5.0;
        k[1] = 9.0;
        // vertex 0 (+x) sees every vertex but -x
        assert_eq!(zeta(&m, &k)[0], 4.0);
        assert_eq!(zeta(&m, &[3.0; 6]), vec![0.0; 6]);
    }

    #[test]
    fn deviation_of_rotated_normals() {
        let m = icosphere(1);
        let naive = naive_normals_with(&m, Execution::Sequential).unwrap();
        let same = m.clone().with_unit_normals(naive.clone()).unwrap();
        assert!(normal_deviation(&same).unwrap() < 1e-12);
        let turned: Vec<UnitVec3> = naive
            .iter()
            .map(|n| {
                let u = n.any_orthogonal();
                let a = 10f64.to_radians();
                (n.get() * a.cos() + u.get() * a.sin()).normalize().unwrap()
            })
            .collect();
        let turned = m.with_unit_normals(turned).unwrap();
        assert!((normal_deviation(&turned).unwrap() - 10.0).abs() < 1e-9);
        assert!(matches!(normal_deviation(&cube()), Err(MetricsError::MissingNormals)));
    }

    #[test]
    fn report_matches_parts() {
        let r = MetricsReport::compute(&cube(), false, true, Execution::Sequential).unwrap();
        assert!((r.psi_deg - 90.0).abs() < 1e-12);
        assert_eq!(r.zeta_star, 0.0);
        assert_eq!(r.dihedral.as_ref().unwrap().len(), 12);
        assert!(r.xi_deg.is_none());
    }

    #[test]
    fn colours() {
        assert_eq!(curvature_color(0.0, -1.0, 1.0).unwrap(), WHITE);
        assert_eq!(curvature_color(1.0, -1.0, 1.0).unwrap(), [255, 0, 0]);
        assert_eq!(curvature_color(9.0, -1.0, 1.0).unwrap(), [255, 0, 0]);
        assert_eq!(curvature_color(1e-6, -1.0, 1.0).unwrap(), [255, 255, 0]);
        assert_eq!(curvature_color(-1.0, -1.0, 1.0).unwrap(), [0, 0, 255]);
        assert_eq!(curvature_color(-0.5, -1.0, 1.0).unwrap(), [0, 128, 255]);
        assert!(curvature_color(0.0, 0.0, 0.0).is_err());
        assert!(curvature_color(0.0, 1.0, -1.0).is_err());
        let c = colorize(&icosphere(1), -2.0, 2.0).unwrap();
        assert!(c.iter().all(|x| x[0] == 255 && x[2] == 0));
    }
}
