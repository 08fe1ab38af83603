//! Subdivision of meshes of point-normal pairs.
//!
//! Classical linear schemes (Catmull-Clark, Loop, Butterfly and Kobbelt's
//! 4-point scheme) are written as chains of weighted binary averages; the
//! modified schemes replace each binary average with the circle average of
//! point-normal pairs, which turns the schemes nonlinear and lets the input
//! normals shape the limit surface.
//!
//! ```
//! use pnp_subdiv::mesh::{naive_normals, primitives::icosahedron};
//! use pnp_subdiv::schemes::{refine, BaseScheme, SchemeKind};
//!
//! let ico = icosahedron();
//! let normals = naive_normals(&ico).unwrap();
//! let ico = ico.with_unit_normals(normals).unwrap();
//! let fine = refine(&ico, SchemeKind::modified(BaseScheme::Loop), 2).unwrap();
//! // sphere samples with radial normals stay on the sphere
//! assert!(fine.vertices().iter().all(|p| (p.norm() - 1.0).abs() < 1e-9));
//! ```

// `!(a < b)` is used on purpose so that NaN lands in the rejecting branch.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod avgplan;
pub mod circle3d;
pub mod exec;
pub mod geom;
pub mod mesh;
pub mod metrics;
pub mod schemes;
pub mod workflow;

mod error;

pub use error::{Error, ErrorKind};
pub use exec::Execution;
pub use geom::{Pnp, UnitVec3, Vec3};
pub use mesh::Mesh;
