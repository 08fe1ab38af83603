//! Wavefront OBJ subset: `v`, `vn` and `f` records with 1-based (or
//! negative, relative) indices. Texture coordinates are ignored.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Mesh, MeshError};
use crate::geom::Vec3;

fn parse_err(line: usize, message: impl Into<String>) -> MeshError {
    MeshError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_vec3(line: usize, rest: &mut std::str::SplitWhitespace<'_>) -> Result<Vec3, MeshError> {
    let mut c = [0.0; 3];
    for slot in &mut c {
        let tok = rest
            .next()
            .ok_or_else(|| parse_err(line, "expected three coordinates"))?;
        *slot = tok
            .parse::<f64>()
            .map_err(|_| parse_err(line, format!("invalid number `{tok}`")))?;
        if !slot.is_finite() {
            return Err(parse_err(line, format!("non-finite coordinate `{tok}`")));
        }
    }
    Ok(c.into())
}

/// Resolves a 1-based or negative OBJ index against `count` records.
fn resolve(line: usize, tok: &str, count: usize, what: &str) -> Result<usize, MeshError> {
    let i: i64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} index `{tok}`")))?;
    let idx = if i > 0 {
        i - 1
    } else if i < 0 {
        count as i64 + i
    } else {
        -1
    };
    if idx < 0 || idx as usize >= count {
        return Err(parse_err(
            line,
            format!("{what} index {i} out of range ({count} defined)"),
        ));
    }
    Ok(idx as usize)
}

pub fn parse_obj(text: &str) -> Result<Mesh, MeshError> {
    let mut vertices = Vec::new();
    let mut normal_records = Vec::new();
    let mut faces: Vec<Vec<usize>> = Vec::new();
    // vertex -> (normal record, first line that assigned it)
    let mut vertex_normal: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut face_arity: Option<usize> = None;

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let mut toks = content.split_whitespace();
        let Some(tag) = toks.next() else { continue };
        match tag {
            "v" => vertices.push(parse_vec3(line, &mut toks)?),
            "vn" => normal_records.push(parse_vec3(line, &mut toks)?),
            "f" => {
                let mut face = Vec::with_capacity(4);
                for corner in toks {
                    let mut parts = corner.split('/');
                    let v = resolve(line, parts.next().unwrap_or(""), vertices.len(), "vertex")?;
                    let _texture = parts.next();
                    if let Some(n) = parts.next().filter(|s| !s.is_empty()) {
                        let n = resolve(line, n, normal_records.len(), "normal")?;
                        match vertex_normal.get(&v) {
                            Some(&(prev, first)) if prev != n && normal_records[prev] != normal_records[n] => {
                                return Err(parse_err(
                                    line,
                                    format!(
                                        "vertex {} has a different normal than on line {first}; one normal per vertex is required",
                                        v + 1
                                    ),
                                ));
                            }
                            Some(_) => {}
                            None => {
                                vertex_normal.insert(v, (n, line));
                            }
                        }
                    }
                    face.push(v);
                }
                match face.len() {
                    3 | 4 => {}
                    n => {
                        return Err(parse_err(
                            line,
                            format!("face with {n} vertices; only triangles and quads are supported"),
                        ))
                    }
                }
                match face_arity {
                    None => face_arity = Some(face.len()),
                    Some(a) if a != face.len() => {
                        return Err(MeshError::MixedFaceArity {
                            first: a,
                            other: face.len(),
                        })
                    }
                    _ => {}
                }
                faces.push(face);
            }
            "vt" | "o" | "g" | "s" | "usemtl" | "mtllib" | "l" | "p" => {}
            other => return Err(parse_err(line, format!("unsupported record `{other}`"))),
        }
    }

    let mesh = Mesh::new(vertices, &faces)?;
    let nv = mesh.num_vertices();
    let normals = if !vertex_normal.is_empty() {
        if vertex_normal.len() != nv {
            return Err(MeshError::NormalCountMismatch {
                normals: vertex_normal.len(),
                vertices: nv,
            });
        }
        Some((0..nv).map(|v| normal_records[vertex_normal[&v].0]).collect())
    } else if !normal_records.is_empty() {
        // Normals without face references are matched to vertices by order.
        if normal_records.len() != nv {
            return Err(MeshError::NormalCountMismatch {
                normals: normal_records.len(),
                vertices: nv,
            });
        }
        Some(normal_records)
    } else {
        None
    };
    match normals {
        Some(n) => mesh.with_normals(n),
        None => Ok(mesh),
    }
}

pub fn load_obj(path: impl AsRef<Path>) -> Result<Mesh, MeshError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_obj(&text)
}

/// OBJ text of `mesh`. Numbers use the shortest representation that reads
/// back to the same `f64`.
pub fn write_obj(mesh: &Mesh) -> String {
    let mut s = String::with_capacity(mesh.num_vertices() * 64);
    for p in mesh.vertices() {
        let _ = writeln!(s, "v {} {} {}", p.x, p.y, p.z);
    }
    if let Some(normals) = mesh.normals() {
        for n in normals {
            let _ = writeln!(s, "vn {} {} {}", n.x, n.y, n.z);
        }
    }
    let with_normals = mesh.normals().is_some();
    for f in mesh.faces() {
        s.push('f');
        for &i in f {
            if with_normals {
                let _ = write!(s, " {}//{}", i + 1, i + 1);
            } else {
                let _ = write!(s, " {}", i + 1);
            }
        }
        s.push('\n');
    }
    s
}

pub fn save_obj(mesh: &Mesh, path: impl AsRef<Path>) -> Result<(), MeshError> {
    let path = path.as_ref();
    fs::write(path, write_obj(mesh)).map_err(|source| MeshError::Io {
        path: path.display().to_string(),
        source,
    })
}
