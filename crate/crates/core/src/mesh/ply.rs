//! PLY export with per-vertex colours.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Mesh, MeshError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PlyFormat {
    #[default]
    Ascii,
    BinaryLittleEndian,
}

/// Serializes positions, optional normals, and one RGB colour per vertex.
pub fn write_ply(mesh: &Mesh, colors: &[[u8; 3]], format: PlyFormat) -> Vec<u8> {
    assert_eq!(colors.len(), mesh.num_vertices(), "one colour per vertex");
    let normals = mesh.normals();
    let mut header = String::new();
    let fmt = match format {
        PlyFormat::Ascii => "ascii",
        PlyFormat::BinaryLittleEndian => "binary_little_endian",
    };
    let _ = writeln!(header, "ply\nformat {fmt} 1.0\nelement vertex {}", mesh.num_vertices());
    header.push_str("property double x\nproperty double y\nproperty double z\n");
    if normals.is_some() {
        header.push_str("property double nx\nproperty double ny\nproperty double nz\n");
    }
    header.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\n");
    let _ = writeln!(header, "element face {}", mesh.num_faces());
    header.push_str("property list uchar int vertex_indices\nend_header\n");

    let mut out = header.into_bytes();
    match format {
        PlyFormat::Ascii => {
            let mut body = String::new();
            for (i, p) in mesh.vertices().iter().enumerate() {
                let _ = write!(body, "{} {} {}", p.x, p.y, p.z);
                if let Some(n) = normals {
                    let _ = write!(body, " {} {} {}", n[i].x, n[i].y, n[i].z);
                }
                let c = colors[i];
                let _ = writeln!(body, " {} {} {}", c[0], c[1], c[2]);
            }
            for f in mesh.faces() {
                let _ = write!(body, "{}", f.len());
                for i in f {
                    let _ = write!(body, " {i}");
                }
                body.push('\n');
            }
            out.extend_from_slice(body.as_bytes());
        }
        PlyFormat::BinaryLittleEndian => {
            for (i, p) in mesh.vertices().iter().enumerate() {
                for c in p.to_array() {
                    out.extend_from_slice(&c.to_le_bytes());
                }
                if let Some(n) = normals {
                    for c in n[i].to_array() {
                        out.extend_from_slice(&c.to_le_bytes());
                    }
                }
                out.extend_from_slice(&colors[i]);
            }
            for f in mesh.faces() {
                out.push(f.len() as u8);
                for &i in f {
                    out.extend_from_slice(&(i as i32).to_le_bytes());
                }
            }
        }
    }
    out
}

pub fn save_ply(mesh: &Mesh, colors: &[[u8; 3]], format: PlyFormat, path: impl AsRef<Path>) -> Result<(), MeshError> {
    let path = path.as_ref();
    fs::write(path, write_ply(mesh, colors, format)).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })
}
