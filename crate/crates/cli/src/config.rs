//! Run configuration: a TOML file with a `[shape]` table and one table per
//! subcommand. Command-line flags override file values.

use crate::shape::ShapeArgs;
use anchoring::energy::EngineChoice;
use anyhow::{Context, Result};
use clap::Args;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub tolerance: Option<f64>,
    /// Default output directory.
    pub out: Option<PathBuf>,
    pub shape: Option<ShapeArgs>,
    pub energy: Option<EnergyOpts>,
    pub scan: Option<ScanOpts>,
    pub optimize: Option<OptimizeOpts>,
    pub defects: Option<DefectsOpts>,
    pub profile: Option<ProfileOpts>,
    pub approx: Option<ApproxOpts>,
    pub figures: Option<FiguresOpts>,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    #[cfg(test)]
    pub fn emit(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }
}

/// `flags` with every unset field taken from `file`.
pub fn overlay<T: Serialize + DeserializeOwned + Clone>(flags: &T, file: &T) -> T {
    let (Ok(serde_json::Value::Object(over)), Ok(serde_json::Value::Object(mut base))) =
        (serde_json::to_value(flags), serde_json::to_value(file))
    else {
        return flags.clone();
    };
    for (k, v) in over {
        if !v.is_null() {
            base.insert(k, v);
        }
    }
    serde_json::from_value(serde_json::Value::Object(base)).unwrap_or_else(|_| flags.clone())
}

pub fn merge<T: Serialize + DeserializeOwned + Clone>(flags: &T, file: Option<&T>) -> T {
    match file {
        Some(f) => overlay(flags, f),
        None => flags.clone(),
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyOpts {
    /// Alignment direction as x,y,z (normalized)
    #[arg(long)]
    pub n: Option<String>,
    /// auto, closed, revolution, mesh or quadrature
    #[arg(long)]
    pub engine: Option<EngineChoice>,
    /// Quadrature resolution (ignored by closed forms)
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Write JSON here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanOpts {
    /// n1:from:to:count, n2:…, n3:… or disk:count
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub engine: Option<EngineChoice>,
    /// Quadrature resolution (ignored by closed forms)
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Write CSV here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptimizeOpts {
    /// Starting points on the upper hemisphere
    #[arg(long)]
    pub lattice_points: Option<usize>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Quadrature resolution of the objective
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Resolution used to re-evaluate reported energies
    #[arg(long)]
    pub energy_resolution: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DefectsOpts {
    /// Alignment direction as x,y,z
    #[arg(long)]
    pub n: Option<String>,
    /// Size of the degenerate regions (default 0.4 times the rounding radius)
    #[arg(long)]
    pub delta: Option<f64>,
    /// Quadrature resolution for the field energy
    #[arg(long)]
    pub resolution: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// CSV of (x, y, z, v1, v2, v3) at the quadrature points
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileOpts {
    /// Boundary angle in [0, π/2]
    #[arg(long)]
    pub phi0: Option<f64>,
    /// Largest stretched distance r̃
    #[arg(long = "H")]
    #[serde(rename = "H")]
    pub h: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApproxOpts {
    /// Half-width of the cube
    #[arg(long)]
    pub half_width: Option<f64>,
    /// Rounding radii, strictly descending, comma separated
    #[arg(long)]
    pub epsilons: Option<String>,
    /// Bound on the minimizer distance at the smallest radius
    #[arg(long)]
    pub delta: Option<f64>,
    /// Random directions for the energy gap
    #[arg(long)]
    pub directions: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiguresOpts {
    /// Quadrature resolution for the torus curve
    #[arg(long)]
    pub resolution: Option<usize>,
    /// Grid points per side of the cube heat map
    #[arg(long)]
    pub heatmap_points: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
tolerance = 1e-9
out = "results"

[shape]
shape = "torus"
R = 2.0
r = 1.0

[energy]
n = "0,0,1"
engine = "closed"
resolution = 128

[profile]
phi0 = 1.0
H = 6.0
"#;

    #[test]
    fn parses_and_round_trips() {
        let c = RunConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.shape.as_ref().unwrap().big_r, Some(2.0));
        assert_eq!(
            c.energy.as_ref().unwrap().engine,
            Some(EngineChoice::Closed)
        );
        assert_eq!(c.profile.as_ref().unwrap().h, Some(6.0));
        let again = RunConfig::parse(&c.emit().unwrap()).unwrap();
        assert_eq!(again, c);
    }

    #[test]
    fn unknown_keys_are_located() {
        let err = RunConfig::parse("[energy]\nn = \"0,0,1\"\nresolutoin = 5\n").unwrap_err();
        let msg = format!("{err:#}");
        assert!(
            msg.contains("resolutoin") && msg.contains("line 3"),
            "{msg}"
        );
        assert!(RunConfig::parse("colour = 1").is_err());
    }

    #[test]
    fn flags_override_file() {
        let file = EnergyOpts {
            n: Some("1,0,0".into()),
            resolution: Some(64),
            ..Default::default()
        };
        let flags = EnergyOpts {
            n: Some("0,0,1".into()),
            ..Default::default()
        };
        let m = merge(&flags, Some(&file));
        assert_eq!(m.n.as_deref(), Some("0,0,1"));
        assert_eq!(m.resolution, Some(64));
    }
}
