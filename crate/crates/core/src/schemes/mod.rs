//! Refinement with the four classical schemes, in linear mode (stencils on
//! points) or modified mode (stencils compiled into chains of circle
//! averages on point-normal pairs).

mod stencils;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use stencils::{loop_beta, FOUR_POINT};

use crate::avgplan::{compile, PlanError, Stencil};
use crate::circle3d::circle_avg_3d;
use crate::exec::{try_map_range, Execution};
use crate::geom::{GeomError, Pnp};
use crate::mesh::{naive_normals_with, Mesh, MeshError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BaseScheme {
    CatmullClark,
    Loop,
    Kobbelt4,
    Butterfly,
}

impl BaseScheme {
    pub const ALL: [BaseScheme; 4] = [
        BaseScheme::CatmullClark,
        BaseScheme::Loop,
        BaseScheme::Kobbelt4,
        BaseScheme::Butterfly,
    ];

    /// Face arity the scheme operates on.
    pub fn arity(self) -> usize {
        match self {
            BaseScheme::CatmullClark | BaseScheme::Kobbelt4 => 4,
            BaseScheme::Loop | BaseScheme::Butterfly => 3,
        }
    }

    pub fn is_interpolatory(self) -> bool {
        matches!(self, BaseScheme::Kobbelt4 | BaseScheme::Butterfly)
    }

    pub fn code(self) -> &'static str {
        match self {
            BaseScheme::CatmullClark => "CC",
            BaseScheme::Loop => "LP",
            BaseScheme::Kobbelt4 => "K4",
            BaseScheme::Butterfly => "BY",
        }
    }
}

impl FromStr for BaseScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "cc" => Ok(BaseScheme::CatmullClark),
            "lp" => Ok(BaseScheme::Loop),
            "k4" => Ok(BaseScheme::Kobbelt4),
            "by" => Ok(BaseScheme::Butterfly),
            _ => Err(format!("unknown scheme `{s}` (expected cc, lp, k4 or by)")),
        }
    }
}

impl fmt::Display for BaseScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Linear,
    Modified,
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Mode::Linear),
            "modified" => Ok(Mode::Modified),
            _ => Err(format!("unknown mode `{s}` (expected linear or modified)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchemeKind {
    pub base: BaseScheme,
    pub mode: Mode,
}

impl SchemeKind {
    pub fn linear(base: BaseScheme) -> SchemeKind {
        SchemeKind {
            base,
            mode: Mode::Linear,
        }
    }

    pub fn modified(base: BaseScheme) -> SchemeKind {
        SchemeKind {
            base,
            mode: Mode::Modified,
        }
    }
}

/// `CC`, `LP`, ... for linear schemes and `MCC`, `MLP`, ... for modified ones.
impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mode == Mode::Modified {
            f.write_str("M")?;
        }
        f.write_str(self.base.code())
    }
}

#[derive(Debug, Error)]
pub enum SchemeError {
    #[error("{scheme} needs faces of arity {expected}, mesh has arity {found}")]
    ArityMismatch {
        scheme: BaseScheme,
        expected: usize,
        found: usize,
    },
    #[error("modified schemes need per-vertex normals")]
    MissingNormals,
    #[error(
        "output vertex {output_vertex}: normals of {} and vertex {right} are antipodal",
        match left { Some(l) => format!("vertex {l}"), None => "the partial average".to_string() }
    )]
    AntipodalNormals {
        output_vertex: usize,
        left: Option<usize>,
        right: usize,
    },
    #[error("output vertex {output_vertex}: {source}")]
    Geometry { output_vertex: usize, source: GeomError },
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

/// One level of refinement: a stencil over input vertices for every output
/// vertex, and the output faces.
#[derive(Debug, Clone)]
pub struct RefinementStep {
    pub arity: usize,
    pub stencils: Vec<Stencil>,
    pub indices: Vec<usize>,
}

impl RefinementStep {
    pub fn num_output_vertices(&self) -> usize {
        self.stencils.len()
    }
}

fn check_arity(mesh: &Mesh, base: BaseScheme) -> Result<(), SchemeError> {
    if mesh.arity() != base.arity() {
        return Err(SchemeError::ArityMismatch {
            scheme: base,
            expected: base.arity(),
            found: mesh.arity(),
        });
    }
    Ok(())
}

/// Output faces. Vertex `v` keeps its index, edge `e` becomes `V + e` and
/// face `f` (quads only) becomes `V + E + f`.
fn refined_indices(mesh: &Mesh) -> Vec<usize> {
    let t = mesh.topology();
    let nv = mesh.num_vertices();
    let ne = mesh.num_edges();
    let a = mesh.arity();
    let mut out = Vec::with_capacity(4 * a * mesh.num_faces());
    for f in 0..mesh.num_faces() {
        let face = mesh.face(f);
        let e = |i: usize| nv + t.edge_of(f * a + (i % a));
        if a == 4 {
            let c = nv + ne + f;
            for (i, &v) in face.iter().enumerate() {
                out.extend([v, e(i), c, e(i + 3)]);
            }
        } else {
            let (ab, bc, ca) = (e(0), e(1), e(2));
            out.extend([face[0], ab, ca, ab, face[1], bc, ca, bc, face[2], ab, bc, ca]);
        }
    }
    out
}

pub fn build_step(mesh: &Mesh, base: BaseScheme) -> Result<RefinementStep, SchemeError> {
    build_step_with(mesh, base, Execution::default())
}

pub fn build_step_with(mesh: &Mesh, base: BaseScheme, exec: Execution) -> Result<RefinementStep, SchemeError> {
    check_arity(mesh, base)?;
    let faces = if base.arity() == 4 { mesh.num_faces() } else { 0 };
    let n = mesh.num_vertices() + mesh.num_edges() + faces;
    let stencils = try_map_range(n, exec, |i| stencils::stencil_for(mesh, base, i))?;
    Ok(RefinementStep {
        arity: mesh.arity(),
        stencils,
        indices: refined_indices(mesh),
    })
}

/// Evaluates a step on `mesh`.
pub fn apply_step(mesh: &Mesh, step: &RefinementStep, mode: Mode, exec: Execution) -> Result<Mesh, SchemeError> {
    match mode {
        Mode::Linear => {
            let pts = mesh.vertices();
            let vertices = try_map_range(step.stencils.len(), exec, |i| step.stencils[i].apply(pts))?;
            let out = Mesh::from_flat(vertices, step.arity, step.indices.clone())?;
            // display normals only; a degenerate corner just leaves them out
            match naive_normals_with(&out, exec) {
                Ok(n) => Ok(out.with_unit_normals(n)?),
                Err(_) => Ok(out),
            }
        }
        Mode::Modified => {
            let normals = mesh.normals().ok_or(SchemeError::MissingNormals)?;
            let pnps: Vec<Pnp> = mesh
                .vertices()
                .iter()
                .zip(normals)
                .map(|(&p, &n)| Pnp::new(p, n))
                .collect();
            let out = try_map_range(step.stencils.len(), exec, |i| {
                let plan = compile(&step.stencils[i])?;
                plan.evaluate(&pnps, |a, b, w| {
                    circle_avg_3d(a, b, w).map_err(|source| SchemeError::Geometry {
                        output_vertex: i,
                        source,
                    })
                })
                .map_err(|f| match f.error {
                    SchemeError::Geometry {
                        source: GeomError::AntipodalNormals { .. },
                        ..
                    } => SchemeError::AntipodalNormals {
                        output_vertex: i,
                        left: f.left,
                        right: f.right,
                    },
                    e => e,
                })
            })?;
            let (vertices, normals): (Vec<_>, Vec<_>) = out.into_iter().map(|p| (p.point, p.normal)).unzip();
            Ok(Mesh::from_flat(vertices, step.arity, step.indices.clone())?.with_unit_normals(normals)?)
        }
    }
}

pub fn refine_once(mesh: &Mesh, kind: SchemeKind) -> Result<Mesh, SchemeError> {
    refine_once_with(mesh, kind, Execution::default())
}

pub fn refine_once_with(mesh: &Mesh, kind: SchemeKind, exec: Execution) -> Result<Mesh, SchemeError> {
    check_arity(mesh, kind.base)?;
    if kind.mode == Mode::Modified && mesh.normals().is_none() {
        return Err(SchemeError::MissingNormals);
    }
    let step = build_step_with(mesh, kind.base, exec)?;
    apply_step(mesh, &step, kind.mode, exec)
}

pub fn refine(mesh: &Mesh, kind: SchemeKind, iters: usize) -> Result<Mesh, SchemeError> {
    refine_with(mesh, kind, iters, Execution::default())
}

pub fn refine_with(mesh: &Mesh, kind: SchemeKind, iters: usize, exec: Execution) -> Result<Mesh, SchemeError> {
    let mut m = mesh.clone();
    for _ in 0..iters {
        m = refine_once_with(&m, kind, exec)?;
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::avgplan::affine_op;
    use crate::geom::{UnitVec3, Vec3};
    use crate::mesh::{naive_normals, primitives::*};

    fn with_naive(m: Mesh) -> Mesh {
        let n = naive_normals(&m).unwrap();
        m.with_unit_normals(n).unwrap()
    }

    #[test]
    fn names() {
        assert_eq!(SchemeKind::modified(BaseScheme::Kobbelt4).to_string(), "MK4");
        assert_eq!(SchemeKind::linear(BaseScheme::CatmullClark).to_string(), "CC");
        assert_eq!("By".parse::<BaseScheme>(), Ok(BaseScheme::Butterfly));
        assert!("xx".parse::<BaseScheme>().is_err());
    }

    #[test]
    fn cube_cc_counts() {
        let m = refine_once(&cube(), SchemeKind::linear(BaseScheme::CatmullClark)).unwrap();
        assert_eq!((m.num_vertices(), m.num_faces()), (26, 24));
        assert_eq!(m.euler_characteristic(), 2);
        let m = refine(&cube(), SchemeKind::linear(BaseScheme::CatmullClark), 2).unwrap();
        assert_eq!((m.num_vertices(), m.num_faces()), (98, 96));
    }

    #[test]
    fn tetrahedron_loop_counts() {
        let t = tetrahedron();
        let k = SchemeKind::linear(BaseScheme::Loop);
        let counts: Vec<(usize, usize)> = (1..=3)
            .map(|i| {
                let m = refine(&t, k, i).unwrap();
                (m.num_vertices(), m.num_faces())
            })
            .collect();
        assert_eq!(counts, vec![(10, 16), (34, 64), (130, 256)]);
    }

    #[test]
    fn zero_iterations_is_identity() {
        let m = with_naive(icosahedron());
        let r = refine(&m, SchemeKind::modified(BaseScheme::Loop), 0).unwrap();
        assert_eq!(r.vertices(), m.vertices());
        assert_eq!(r.indices(), m.indices());
    }

    #[test]
    fn arity_and_normals_checked() {
        let e = refine_once(&cube(), SchemeKind::linear(BaseScheme::Loop)).unwrap_err();
        assert!(matches!(
            e,
            SchemeError::ArityMismatch {
                expected: 3,
                found: 4,
                ..
            }
        ));
        let e = refine_once(&cube(), SchemeKind::modified(BaseScheme::CatmullClark)).unwrap_err();
        assert!(matches!(e, SchemeError::MissingNormals));
    }

    #[test]
    fn cc_cube_known_positions() {
        // face points are face centres, old corners move to (5/18, 5/18, 5/18) off the centre
        let m = refine_once(&cube(), SchemeKind::linear(BaseScheme::CatmullClark)).unwrap();
        let c = Vec3::new(0.5, 0.5, 0.5);
        let d = m.vertices()[0] - c;
        let expect = -5.0 / 18.0;
        assert!((d.x - expect).abs() < 1e-15 && (d.y - expect).abs() < 1e-15);
        assert!(m.vertices()[20..].iter().all(|p| (p.distance(c) - 0.5).abs() < 1e-15));
    }

    #[test]
    fn plan_evaluation_matches_direct_sum() {
        for (m, base) in [
            (cube(), BaseScheme::CatmullClark),
            (torus_quad(6, 5, 3.0, 1.0), BaseScheme::Kobbelt4),
            (icosphere(1), BaseScheme::Loop),
            (icosphere(1), BaseScheme::Butterfly),
        ] {
            let step = build_step(&m, base).unwrap();
            for s in &step.stencils {
                let direct = s.apply(m.vertices()).unwrap();
                let chained = compile(s).unwrap().evaluate(m.vertices(), affine_op).unwrap();
                assert!(direct.distance(chained) < 1e-12);
            }
        }
    }

    #[test]
    fn equal_normals_reduce_to_linear() {
        let up = UnitVec3::Z;
        for (m, base) in [
            (quad_sphere(2), BaseScheme::CatmullClark),
            (quad_sphere(2), BaseScheme::Kobbelt4),
            (icosahedron(), BaseScheme::Loop),
            (icosahedron(), BaseScheme::Butterfly),
        ] {
            let n = m.num_vertices();
            let m = m.with_unit_normals(vec![up; n]).unwrap();
            let lin = refine(&m, SchemeKind::linear(base), 2).unwrap();
            let modi = refine(&m, SchemeKind::modified(base), 2).unwrap();
            for (a, b) in lin.vertices().iter().zip(modi.vertices()) {
                assert!(a.distance(*b) < 1e-9, "{base}");
            }
        }
    }

    #[test]
    fn interpolatory_keep_old_pnps() {
        let m = with_naive(icosahedron());
        let r = refine(&m, SchemeKind::modified(BaseScheme::Butterfly), 2).unwrap();
        for v in 0..m.num_vertices() {
            assert!(r.vertices()[v].distance(m.vertices()[v]) < 1e-12);
            assert!(r.normals().unwrap()[v].get().distance(m.normals().unwrap()[v].get()) < 1e-12);
        }
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let m = with_naive(icosphere(2));
        let k = SchemeKind::modified(BaseScheme::Loop);
        let a = refine_with(&m, k, 1, Execution::Sequential).unwrap();
        let b = refine_with(&m, k, 1, Execution::Parallel).unwrap();
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.normals(), b.normals());
    }

    #[test]
    fn antipodal_pair_reported() {
        let m = tetrahedron();
        let mut normals = vec![UnitVec3::Z; 4];
        normals[1] = -UnitVec3::Z;
        let m = m.with_unit_normals(normals).unwrap();
        let e = refine_once(&m, SchemeKind::modified(BaseScheme::Loop)).unwrap_err();
        assert!(matches!(e, SchemeError::AntipodalNormals { .. }), "{e}");
    }
}
