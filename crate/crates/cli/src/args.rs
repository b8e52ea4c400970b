use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Clone, Parser)]
#[command(name = "suslov", version, about = "Level sets, equilibria and orbits of the reduced Suslov flow")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Region of the parameter plane containing (k1, k2)
    Classify,
    /// Equilibria on S_k with their linear type
    CriticalPoints,
    /// Components and genera of S_k, checked against equilibrium indices
    Topology,
    /// RK4 trajectory from a seeded (or given) initial state
    Simulate,
    /// Flat-torus portrait of U_k with projected orbits
    Project,
    /// Region atlas over a rectangle of (k1, k2)
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub b1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub b2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub k2: Option<f64>,

    /// RK4 step
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub step: f64,

    #[arg(long, global = true, default_value_t = 100.0)]
    pub t_end: f64,

    /// Torus grid resolution for topology (default 512; sweep defaults to 128)
    #[arg(long, global = true)]
    pub grid_n: Option<usize>,

    /// Output format; each command has its own default
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Initial state m1,m2,gamma1,gamma2,gamma3 for simulate
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub init: Option<Vec<f64>>,

    /// Number of seeded orbits drawn by project
    #[arg(long, global = true, default_value_t = 6)]
    pub orbits: usize,

    /// k1min:k1max:k2min:k2max:n
    #[arg(long, global = true)]
    pub sweep: Option<String>,
}

/// Parsed `--sweep` rectangle with `n x n` cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRange {
    pub k1_min: f64,
    pub k1_max: f64,
    pub k2_min: f64,
    pub k2_max: f64,
    pub n: usize,
}

impl std::str::FromStr for SweepRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 5 {
            return Err(format!("expected k1min:k1max:k2min:k2max:n, got {s:?}"));
        }
        let num = |i: usize| {
            parts[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {:?}: {e}", parts[i]))
        };
        let n = parts[4]
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("bad sample count {:?}: {e}", parts[4]))?;
        let r = SweepRange {
            k1_min: num(0)?,
            k1_max: num(1)?,
            k2_min: num(2)?,
            k2_max: num(3)?,
            n,
        };
        let finite = [r.k1_min, r.k1_max, r.k2_min, r.k2_max]
            .iter()
            .all(|v| v.is_finite());
        if !finite || r.k1_min < 0.0 || r.k2_min < 0.0 || r.k1_max <= r.k1_min || r.k2_max <= r.k2_min {
            return Err(format!("sweep ranges must be finite, non-negative and increasing: {s:?}"));
        }
        if n == 0 {
            return Err("sweep needs at least one sample per axis".into());
        }
        Ok(r)
    }
}
