use std::fs;
use std::io::Write;
use std::path::Path;

use pnp_subdiv::mesh::{load_obj, naive_normals_with, write_obj, write_ply, MeshError, PlyFormat};
use pnp_subdiv::metrics::{colorize, MetricsReport};
use pnp_subdiv::schemes::{refine_with, SchemeKind};
use pnp_subdiv::workflow::{compare_schemes, ensure_normals, morph, MorphSpec};
use pnp_subdiv::{Error, Execution, Mesh};

use crate::args::*;

fn io_error(path: &Path, source: std::io::Error) -> Error {
    MeshError::Io {
        path: path.display().to_string(),
        source,
    }
    .into()
}

/// Writes through a temporary file in the target directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| io_error(path, e))?;
    tmp.write_all(bytes).map_err(|e| io_error(path, e))?;
    tmp.persist(path).map_err(|e| io_error(path, e.error))?;
    Ok(())
}

fn load(path: &Path) -> Result<Mesh, Error> {
    Ok(load_obj(path)?)
}

fn load_with_normals(path: &Path, exec: Execution) -> Result<Mesh, Error> {
    let (mesh, computed) = ensure_normals(&load(path)?, exec)?;
    if computed {
        eprintln!("note: {} has no normals; using naive normals", path.display());
    }
    Ok(mesh)
}

fn emit_json(value: &impl serde::Serialize, path: Option<&Path>) -> Result<(), Error> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn refine(a: &RefineArgs, exec: Execution) -> Result<(), Error> {
    let kind = if a.modified {
        SchemeKind::modified(a.scheme)
    } else {
        SchemeKind::linear(a.scheme)
    };
    let mesh = if a.modified {
        load_with_normals(&a.input, exec)?
    } else {
        load(&a.input)?
    };
    let out = refine_with(&mesh, kind, a.iters, exec)?;
    write_atomic(&a.output, write_obj(&out).as_bytes())
}

pub fn normals(a: &NormalsArgs, exec: Execution) -> Result<(), Error> {
    let mesh = load(&a.input)?;
    let n = naive_normals_with(&mesh, exec)?;
    let mesh = mesh.with_unit_normals(n)?;
    write_atomic(&a.output, write_obj(&mesh).as_bytes())
}

pub fn metrics(a: &MetricsArgs, exec: Execution) -> Result<(), Error> {
    let mesh = load(&a.input)?;
    let report = MetricsReport::compute(&mesh, a.xi, a.arrays, exec)?;
    emit_json(&report, a.json.as_deref())
}

pub fn morph_cmd(a: &MorphArgs, exec: Execution) -> Result<(), Error> {
    if a.steps < 2 {
        return Err(Error::Usage(format!("--steps must be at least 2, got {}", a.steps)));
    }
    let mesh = load(&a.input)?;
    fs::create_dir_all(&a.outdir).map_err(|e| io_error(&a.outdir, e))?;
    let width = (a.steps - 1).to_string().len().max(2);
    let spec = MorphSpec {
        n_star: a.nstar,
        steps: a.steps,
        iters: a.iters,
        scheme: a.scheme,
    };
    let mut index = 0;
    let table = morph(&mesh, &spec, exec, |step| {
        let path = a.outdir.join(format!("step_{index:0width$}.obj"));
        index += 1;
        write_atomic(&path, write_obj(&step.mesh).as_bytes())
    })?;
    let mut csv = String::from("mu,xi_deg\n");
    for (mu, xi) in table {
        csv.push_str(&format!("{mu},{xi}\n"));
    }
    write_atomic(&a.outdir.join("xi.csv"), csv.as_bytes())
}

pub fn colorize_cmd(a: &ColorizeArgs, _exec: Execution) -> Result<(), Error> {
    let (lo, hi) = a.range;
    let mesh = load(&a.input)?;
    let colors = colorize(&mesh, lo, hi)?;
    let format = if a.binary {
        PlyFormat::BinaryLittleEndian
    } else {
        PlyFormat::Ascii
    };
    write_atomic(&a.output, &write_ply(&mesh, &colors, format))
}

pub fn compare(a: &CompareArgs, exec: Execution) -> Result<(), Error> {
    if a.schemes.is_empty() {
        return Err(Error::Usage("--schemes needs at least one scheme".into()));
    }
    let mesh = load_with_normals(&a.input, exec)?;
    let report = compare_schemes(&mesh, &a.schemes, a.iters, exec)?;
    emit_json(&report, a.json.as_deref())
}
