//! Serializable command outputs. Field order is the JSON key order.

use std::io::Write;

use serde::Serialize;
use suslov_core::critical::{discriminant, CriticalPoint, Family, StabilityKind};
use suslov_core::dynamics::{conserved_quantities, DriftReport, Trajectory};
use suslov_core::{Params, Region, RegionTag, SingularCause, State, Subregion};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub region: RegionTag,
    pub subregion: Option<Subregion>,
    pub singular_cause: Option<SingularCause>,
    /// Absent when `b1 = b2`.
    pub delta: Option<f64>,
}

impl ClassifyReport {
    pub fn new(region: Region, b: &Params, k: &suslov_core::LevelValues) -> Self {
        Self {
            region: region.tag,
            subregion: region.subregion,
            singular_cause: region.singular_cause,
            delta: discriminant(b, k).ok().map(|d| d.delta),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalPointReport {
    pub state: State,
    pub kind: StabilityKind,
    pub index: i32,
    pub family: Family,
    /// `[[re, im], [re, im]]`
    pub eigenvalues: [[f64; 2]; 2],
}

impl From<&CriticalPoint> for CriticalPointReport {
    fn from(cp: &CriticalPoint) -> Self {
        Self {
            state: cp.state,
            kind: cp.kind,
            index: cp.index,
            family: cp.family,
            eigenvalues: cp.eigenvalues.map(|z| [z.re, z.im]),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopologyReport {
    pub components: usize,
    pub genus_per_component: Vec<u32>,
    pub euler: i64,
    pub euler_ph: i64,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftSummary {
    pub step: f64,
    pub t_end: f64,
    pub samples: usize,
    pub initial_state: State,
    pub drift: DriftReport,
    pub max_drift: f64,
}

pub const TRAJECTORY_HEADER: [&str; 9] = [
    "t", "m1", "m2", "gamma1", "gamma2", "gamma3", "f1", "f2", "norm",
];

/// 17 significant digits, enough to round-trip any `f64`.
pub fn full_precision(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn write_trajectory_csv<W: Write>(w: W, traj: &Trajectory, b: &Params) -> csv::Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(TRAJECTORY_HEADER)?;
    for (t, s) in traj.times.iter().zip(&traj.states) {
        let c = conserved_quantities(s, b);
        let row = [
            *t, s.m1, s.m2, s.gamma1, s.gamma2, s.gamma3, c.f1, c.f2, c.norm,
        ];
        out.write_record(row.iter().map(|v| full_precision(*v)))?;
    }
    out.flush()?;
    Ok(())
}
