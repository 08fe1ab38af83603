//! Multi-step pipelines built on the schemes: normal morphing and scheme
//! comparison.

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::exec::Execution;
use crate::geom::{geodesic_avg, GeomError, UnitVec3};
use crate::mesh::{naive_normals_with, Mesh};
use crate::metrics::{normal_deviation_with, MetricsReport};
use crate::schemes::{refine_with, BaseScheme, SchemeError, SchemeKind};

/// Returns `mesh` with naive normals attached if it has none, and whether
/// they were computed.
pub fn ensure_normals(mesh: &Mesh, exec: Execution) -> Result<(Mesh, bool), Error> {
    if mesh.normals().is_some() {
        return Ok((mesh.clone(), false));
    }
    let n = naive_normals_with(mesh, exec)?;
    Ok((mesh.clone().with_unit_normals(n)?, true))
}

/// Normals blended from a common direction `n_star` (weight 0) to the naive
/// normals (weight 1), refined by a modified scheme at each weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MorphSpec {
    pub n_star: UnitVec3,
    pub steps: usize,
    pub iters: usize,
    pub scheme: BaseScheme,
}

impl MorphSpec {
    pub fn new(n_star: UnitVec3, scheme: BaseScheme) -> MorphSpec {
        MorphSpec {
            n_star,
            steps: 11,
            iters: 4,
            scheme,
        }
    }

    /// `mu_i = i / (steps - 1)`.
    pub fn weights(&self) -> Vec<f64> {
        let d = (self.steps - 1) as f64;
        (0..self.steps).map(|i| i as f64 / d).collect()
    }
}

#[derive(Debug, Clone)]
pub struct MorphStep {
    pub mu: f64,
    pub initial_normals: Vec<UnitVec3>,
    pub mesh: Mesh,
    pub xi_deg: f64,
}

/// Initial normals of one morph step.
pub fn blended_normals(n_star: UnitVec3, naive: &[UnitVec3], mu: f64) -> Result<Vec<UnitVec3>, SchemeError> {
    naive
        .iter()
        .enumerate()
        .map(|(v, &n)| {
            geodesic_avg(n_star, n, mu).map_err(|e| match e {
                GeomError::AntipodalNormals { .. } => SchemeError::AntipodalNormals {
                    output_vertex: v,
                    left: None,
                    right: v,
                },
                source => SchemeError::Geometry {
                    output_vertex: v,
                    source,
                },
            })
        })
        .collect()
}

/// Runs every step of `spec`; `f` sees each step as it completes.
pub fn morph(
    mesh: &Mesh,
    spec: &MorphSpec,
    exec: Execution,
    mut f: impl FnMut(&MorphStep) -> Result<(), Error>,
) -> Result<Vec<(f64, f64)>, Error> {
    if spec.steps < 2 {
        return Err(Error::Usage(format!(
            "morph needs at least 2 steps, got {}",
            spec.steps
        )));
    }
    let base = mesh.clone().without_normals();
    let naive = naive_normals_with(&base, exec)?;
    let kind = SchemeKind::modified(spec.scheme);
    let mut table = Vec::with_capacity(spec.steps);
    for mu in spec.weights() {
        let initial = blended_normals(spec.n_star, &naive, mu)?;
        let start = base.clone().with_unit_normals(initial.clone())?;
        let refined = refine_with(&start, kind, spec.iters, exec)?;
        let xi_deg = normal_deviation_with(&refined, exec)?;
        let step = MorphStep {
            mu,
            initial_normals: initial,
            mesh: refined,
            xi_deg,
        };
        f(&step)?;
        table.push((mu, xi_deg));
    }
    Ok(table)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareRow {
    pub scheme: String,
    pub psi_deg: f64,
    pub zeta_star: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareReport {
    pub iters: usize,
    pub rows: Vec<CompareRow>,
}

/// Linear and modified variant of each scheme, `iters` refinements each.
/// The modified variants start from the mesh normals, or naive normals if it
/// has none.
pub fn compare_schemes(
    mesh: &Mesh,
    schemes: &[BaseScheme],
    iters: usize,
    exec: Execution,
) -> Result<CompareReport, Error> {
    if schemes.is_empty() {
        return Err(Error::Usage("no schemes to compare".into()));
    }
    let (with_normals, _) = ensure_normals(mesh, exec)?;
    let mut rows = Vec::with_capacity(2 * schemes.len());
    for &base in schemes {
        for kind in [SchemeKind::linear(base), SchemeKind::modified(base)] {
            let refined = refine_with(&with_normals, kind, iters, exec)?;
            let r = MetricsReport::compute(&refined, false, false, exec)?;
            rows.push(CompareRow {
                scheme: kind.to_string(),
                psi_deg: r.psi_deg,
                zeta_star: r.zeta_star,
            });
        }
    }
    Ok(CompareReport { iters, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Vec3;
    use crate::mesh::primitives::icosahedron;
    use crate::schemes::refine;

    #[test]
    fn weights() {
        let s = MorphSpec::new(UnitVec3::Z, BaseScheme::Loop);
        let w = s.weights();
        assert_eq!(w.len(), 11);
        assert_eq!((w[0], w[10]), (0.0, 1.0));
        assert!((w[3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn morph_endpoints() {
        let m = icosahedron().scaled(2.0);
        // tilted so that no vertex normal is antipodal to it
        let n_star = Vec3::new(0.3, 0.2, 1.0).normalize().unwrap();
        let spec = MorphSpec {
            n_star,
            steps: 3,
            iters: 1,
            scheme: BaseScheme::Loop,
        };
        let mut steps = Vec::new();
        morph(&m, &spec, Execution::Sequential, |s| {
            steps.push(s.clone());
            Ok(())
        })
        .unwrap();
        let lin = refine(&m, SchemeKind::linear(BaseScheme::Loop), 1).unwrap();
        for (a, b) in steps[0].mesh.vertices().iter().zip(lin.vertices()) {
            assert!(a.distance(*b) < 1e-9);
        }
        let naive = naive_normals_with(&m, Execution::Sequential).unwrap();
        for (a, b) in steps[2].initial_normals.iter().zip(&naive) {
            assert!(a.get().distance(b.get()) < 1e-15);
        }
    }

    #[test]
    fn compare_needs_schemes() {
        assert!(matches!(
            compare_schemes(&icosahedron(), &[], 1, Execution::Sequential),
            Err(Error::Usage(_))
        ));
        let r = compare_schemes(&icosahedron(), &[BaseScheme::Loop], 1, Execution::Sequential).unwrap();
        let names: Vec<&str> = r.rows.iter().map(|r| r.scheme.as_str()).collect();
        assert_eq!(names, ["LP", "MLP"]);
    }
}
