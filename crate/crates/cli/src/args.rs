use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use pnp_subdiv::schemes::BaseScheme;
use pnp_subdiv::{UnitVec3, Vec3};

#[derive(Debug, Parser)]
#[command(name = "pnpsub", version, about = "Subdivision of point-normal pair meshes")]
pub struct Cli {
    /// Run on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Refine a mesh with a linear or modified scheme.
    Refine(RefineArgs),
    /// Write naive vertex normals into a mesh.
    Normals(NormalsArgs),
    /// Dihedral and curvature statistics of a mesh.
    Metrics(MetricsArgs),
    /// Refine with normals blended from a fixed direction to the naive normals.
    Morph(MorphArgs),
    /// Export a PLY file coloured by curvature.
    Colorize(ColorizeArgs),
    /// Compare linear and modified schemes on one mesh.
    Compare(CompareArgs),
}

#[derive(Debug, Args)]
pub struct RefineArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// cc, lp, k4 or by.
    #[arg(short, long)]
    pub scheme: BaseScheme,
    /// Use the circle average on point-normal pairs.
    #[arg(long)]
    pub modified: bool,
    #[arg(long, default_value_t = 4)]
    pub iters: usize,
}

#[derive(Debug, Args)]
pub struct NormalsArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Include the mean deviation of the stored normals from naive normals.
    #[arg(long)]
    pub xi: bool,
    /// Include per-edge and per-vertex arrays.
    #[arg(long)]
    pub arrays: bool,
}

#[derive(Debug, Args)]
pub struct MorphArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Common initial normal, as x,y,z.
    #[arg(long, value_parser = parse_direction, allow_hyphen_values = true)]
    pub nstar: UnitVec3,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    #[arg(short, long, default_value = "lp")]
    pub scheme: BaseScheme,
    #[arg(long, default_value_t = 4)]
    pub iters: usize,
    #[arg(long)]
    pub outdir: PathBuf,
}

#[derive(Debug, Args)]
pub struct ColorizeArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Curvature range as lo:hi.
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub range: (f64, f64),
    #[arg(short, long)]
    pub output: PathBuf,
    /// Binary little-endian PLY instead of ASCII.
    #[arg(long)]
    pub binary: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(short, long)]
    pub input: PathBuf,
    /// Comma-separated list, e.g. lp,by.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub schemes: Vec<BaseScheme>,
    #[arg(long, default_value_t = 4)]
    pub iters: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn parse_direction(s: &str) -> Result<UnitVec3, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("invalid number `{t}`")))
        .collect::<Result<_, _>>()?;
    let [x, y, z] = parts[..] else {
        return Err(format!("expected x,y,z, got `{s}`"));
    };
    Vec3::new(x, y, z)
        .normalize()
        .map_err(|_| "direction must be a finite nonzero vector".to_string())
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected lo:hi, got `{s}`"))?;
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("invalid number `{t}`"));
    Ok((num(lo)?, num(hi)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn directions() {
        let n = parse_direction("0,0,2").unwrap();
        assert_eq!(n.get(), Vec3::new(0.0, 0.0, 1.0));
        assert!(parse_direction("1,0").is_err());
        assert!(parse_direction("0,0,0").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-0.25:0.25").unwrap(), (-0.25, 0.25));
        assert!(parse_range("1").is_err());
    }
}
