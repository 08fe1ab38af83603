use thiserror::Error;

use crate::avgplan::PlanError;
use crate::geom::GeomError;
use crate::mesh::MeshError;
use crate::metrics::MetricsError;
use crate::schemes::SchemeError;

/// Broad failure categories, one per process exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Parse,
    Io,
    Topology,
    Numeric,
}

impl ErrorKind {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorKind::Usage => 2,
            ErrorKind::Parse | ErrorKind::Io => 3,
            ErrorKind::Topology => 4,
            ErrorKind::Numeric => 5,
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

fn mesh_kind(e: &MeshError) -> ErrorKind {
    match e {
        MeshError::Parse { .. } | MeshError::NonUnitNormal { .. } => ErrorKind::Parse,
        MeshError::Io { .. } => ErrorKind::Io,
        MeshError::DegenerateCorner { .. } | MeshError::VanishingNormal { .. } => ErrorKind::Numeric,
        _ => ErrorKind::Topology,
    }
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Usage(_) => ErrorKind::Usage,
            Error::Geom(_) | Error::Plan(_) => ErrorKind::Numeric,
            Error::Mesh(e) => mesh_kind(e),
            Error::Scheme(e) => match e {
                SchemeError::ArityMismatch { .. } | SchemeError::MissingNormals => ErrorKind::Topology,
                SchemeError::Mesh(m) => mesh_kind(m),
                _ => ErrorKind::Numeric,
            },
            Error::Metrics(e) => match e {
                MetricsError::InvalidRange { .. } => ErrorKind::Usage,
                MetricsError::MissingNormals => ErrorKind::Topology,
                MetricsError::Mesh(m) => mesh_kind(m),
                _ => ErrorKind::Numeric,
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        let parse = Error::from(MeshError::Parse {
            line: 3,
            message: "x".into(),
        });
        assert_eq!(parse.kind().exit_code(), 3);
        let open = Error::from(MeshError::OpenBoundary(0, 1));
        assert_eq!(open.kind().exit_code(), 4);
        let arity = Error::from(SchemeError::ArityMismatch {
            scheme: crate::schemes::BaseScheme::Loop,
            expected: 3,
            found: 4,
        });
        assert_eq!(arity.kind().exit_code(), 4);
        let anti = Error::from(SchemeError::AntipodalNormals {
            output_vertex: 0,
            left: None,
            right: 1,
        });
        assert_eq!(anti.kind().exit_code(), 5);
        assert_eq!(Error::Usage("no".into()).kind().exit_code(), 2);
    }
}
