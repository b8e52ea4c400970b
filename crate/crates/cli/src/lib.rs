//! Orchestration behind the `suslov` binary. All numerics live in
//! `suslov-core`; this crate validates arguments, dispatches, and writes
//! JSON, CSV and SVG artifacts.

pub mod args;
pub mod portrait;
pub mod report;
pub mod sweep;
pub mod svg;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use suslov_core::critical::{euler_char_ph, find_critical_points};
use suslov_core::dynamics::integrate;
use suslov_core::levelset::{topology_via_construction, DEFAULT_GRID_N};
use suslov_core::projection::sample_state;
use suslov_core::{classify_region, LevelValues, Params, State};

pub use args::{Cli, Command, Common, Format, SweepRange};
pub use svg::render_svg;

use report::{ClassifyReport, CriticalPointReport, DriftSummary, TopologyReport};

/// Grid resolution used by `sweep` when `--grid-n` is not given.
pub const SWEEP_GRID_N: usize = 128;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] suslov_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn params(c: &Common) -> CliResult<Params> {
    let (Some(b1), Some(b2)) = (c.b1, c.b2) else {
        return Err(usage("--b1 and --b2 are required"));
    };
    Params::new(b1, b2).map_err(|e| usage(e.to_string()))
}

fn levels(c: &Common) -> CliResult<LevelValues> {
    let (Some(k1), Some(k2)) = (c.k1, c.k2) else {
        return Err(usage("--k1 and --k2 are required"));
    };
    LevelValues::new(k1, k2).map_err(|e| usage(e.to_string()))
}

fn format(c: &Common, allowed: &[Format], default: Format) -> CliResult<Format> {
    let f = c.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(usage(format!(
            "format {f:?} is not available for this command (use one of {allowed:?})"
        )))
    }
}

/// Sibling path with `suffix` appended to the file name.
pub fn with_suffix(path: &Path, suffix: &str) -> PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    path.with_file_name(name)
}

fn sink<'a>(out: &Option<PathBuf>, stdout: &'a mut dyn Write) -> CliResult<Box<dyn Write + 'a>> {
    Ok(match out {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(stdout),
    })
}

fn emit_json<T: serde::Serialize>(
    value: &T,
    out: &Option<PathBuf>,
    stdout: &mut dyn Write,
) -> CliResult<()> {
    let mut w = sink(out, stdout)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Runs one command. Artifacts go to `--out` (or `stdout`); the drift summary
/// of `simulate` goes to `<out>.drift.json`, or `stderr` without `--out`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let c = &cli.common;
    let b = params(c)?;
    match cli.command {
        Command::Classify => {
            let k = levels(c)?;
            format(c, &[Format::Json], Format::Json)?;
            let report = ClassifyReport::new(classify_region(&b, &k), &b, &k);
            emit_json(&report, &c.out, stdout)
        }
        Command::CriticalPoints => {
            let k = levels(c)?;
            format(c, &[Format::Json], Format::Json)?;
            let points: Vec<CriticalPointReport> = find_critical_points(&b, &k)?
                .iter()
                .map(CriticalPointReport::from)
                .collect();
            emit_json(&points, &c.out, stdout)
        }
        Command::Topology => {
            let k = levels(c)?;
            format(c, &[Format::Json], Format::Json)?;
            let n = c.grid_n.unwrap_or(DEFAULT_GRID_N);
            if n < 64 {
                return Err(usage(format!("--grid-n must be at least 64, got {n}")));
            }
            let topo = topology_via_construction(&b, &k, n)?;
            let euler_ph = euler_char_ph(&find_critical_points(&b, &k)?);
            let report = TopologyReport {
                components: topo.components,
                genus_per_component: topo.genus_per_component,
                euler: topo.euler,
                euler_ph,
                agree: topo.euler == euler_ph,
            };
            emit_json(&report, &c.out, stdout)
        }
        Command::Simulate => {
            format(c, &[Format::Csv], Format::Csv)?;
            if !(c.step > 0.0 && c.step.is_finite() && c.t_end > 0.0 && c.t_end.is_finite()) {
                return Err(usage("--step and --t-end must be positive and finite"));
            }
            let s0 = match &c.init {
                Some(v) => {
                    if v.len() != 5 {
                        return Err(usage(format!("--init takes 5 values, got {}", v.len())));
                    }
                    let s = State::from_array([v[0], v[1], v[2], v[3], v[4]]);
                    if !s.is_on_sphere() {
                        return Err(usage(format!(
                            "--init must satisfy |gamma| = 1, got |gamma|^2 = {}",
                            s.gamma_norm_sq()
                        )));
                    }
                    s
                }
                None => {
                    let k = levels(c)?;
                    classify_region(&b, &k).require_smooth()?;
                    sample_state(&b, &k, &mut ChaCha8Rng::seed_from_u64(c.seed))?
                }
            };
            let traj = integrate(&s0, &b, c.step, c.t_end)?;
            {
                let mut w = sink(&c.out, stdout)?;
                report::write_trajectory_csv(&mut w, &traj, &b)?;
                w.flush()?;
            }
            let summary = DriftSummary {
                step: c.step,
                t_end: c.t_end,
                samples: traj.len(),
                initial_state: s0,
                drift: traj.drift,
                max_drift: traj.drift.max(),
            };
            match &c.out {
                Some(p) => emit_json(&summary, &Some(with_suffix(p, ".drift.json")), stderr),
                None => {
                    serde_json::to_writer_pretty(&mut *stderr, &summary)?;
                    writeln!(stderr)?;
                    Ok(())
                }
            }
        }
        Command::Project => {
            let k = levels(c)?;
            format(c, &[Format::Svg], Format::Svg)?;
            let scene = portrait::torus_scene(&b, &k, c.orbits, c.seed)?;
            let mut w = sink(&c.out, stdout)?;
            w.write_all(render_svg(&scene).as_bytes())?;
            w.flush()?;
            Ok(())
        }
        Command::Sweep => {
            let f = format(c, &[Format::Csv, Format::Json, Format::Svg], Format::Csv)?;
            let range: SweepRange = match &c.sweep {
                Some(s) => s.parse().map_err(usage)?,
                None => {
                    return Err(usage("sweep needs --sweep k1min:k1max:k2min:k2max:n"));
                }
            };
            let n = c.grid_n.unwrap_or(SWEEP_GRID_N);
            if n < 64 {
                return Err(usage(format!("--grid-n must be at least 64, got {n}")));
            }
            let atlas = sweep::sweep(&b, &range, n);
            let diagram = || render_svg(&sweep::bifurcation_scene(&atlas));
            match f {
                Format::Svg => {
                    let mut w = sink(&c.out, stdout)?;
                    w.write_all(diagram().as_bytes())?;
                    w.flush()?;
                }
                Format::Json => emit_json(&atlas, &c.out, stdout)?,
                Format::Csv => {
                    let mut w = sink(&c.out, stdout)?;
                    sweep::write_atlas_csv(&mut w, &atlas)?;
                    w.flush()?;
                }
            }
            if let (Some(p), false) = (&c.out, f == Format::Svg) {
                std::fs::write(with_suffix(p, ".svg"), diagram())?;
            }
            Ok(())
        }
    }
}
