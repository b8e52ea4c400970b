//! Equilibria of the flow on a smooth level surface, their linear stability,
//! and the Euler characteristic obtained by summing Poincaré-Hopf indices.
//!
//! Every equilibrium has `gamma3 = 0` and `gamma1 m1 = gamma2 m2`. Squaring the
//! second condition and eliminating `m` and `gamma2` through the level
//! equations leaves a quadratic in `x = gamma1^2`:
//!
//! ```text
//! (b1 - b2) x^2 - (k1 + k2 - 2 b2) x + (k2 - b2) = 0
//! ```
//!
//! which degenerates to a linear equation when `b1 = b2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::field_norm;
use crate::error::{Error, Result};
use crate::levelset::classify_region;
use crate::types::{LevelValues, Params, State, TAU};

/// Residual above which a state is not accepted as an equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum StabilityKind {
    Saddle,
    Center,
    Degenerate,
}

impl StabilityKind {
    pub fn index(self) -> i32 {
        match self {
            StabilityKind::Saddle => -1,
            StabilityKind::Center => 1,
            StabilityKind::Degenerate => 0,
        }
    }
}

/// Which root of the quadratic produced a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    Plus,
    Minus,
    EqualB,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub state: State,
    pub kind: StabilityKind,
    pub index: i32,
    pub family: Family,
    pub eigenvalues: [Complex64; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Discriminant {
    pub delta: f64,
}

/// Scale against which `delta` is compared to zero.
pub(crate) fn delta_scale(b: &Params, k: &LevelValues) -> f64 {
    let s = k.k1 + k.k2 + b.b1 + b.b2;
    s * s
}

/// The discriminant with the larger `b` in the role of `b1`.
pub(crate) fn raw_discriminant(b: &Params, k: &LevelValues) -> f64 {
    let (b1, b2, k2) = if b.b1 >= b.b2 {
        (b.b1, b.b2, k.k2)
    } else {
        (b.b2, b.b1, k.k1)
    };
    let lin = k.k1 + k.k2 - 2.0 * b2;
    lin * lin - 4.0 * (b1 - b2) * (k2 - b2)
}

pub(crate) fn delta_is_zero(delta: f64, b: &Params, k: &LevelValues, tol: f64) -> bool {
    delta.abs() <= tol * delta_scale(b, k)
}

pub fn discriminant(b: &Params, k: &LevelValues) -> Result<Discriminant> {
    if b.is_equal_b(TAU) {
        return Err(Error::EqualB);
    }
    Ok(Discriminant {
        delta: raw_discriminant(b, k),
    })
}

/// Admissible values of `gamma1^2` on the level, tagged with their family.
fn gamma1_sq_roots(b: &Params, k: &LevelValues) -> Vec<(Family, f64)> {
    let lin = k.k1 + k.k2 - 2.0 * b.b2;
    let konst = k.k2 - b.b2;
    let candidates: Vec<(Family, f64)> = if b.is_equal_b(TAU) {
        if lin.abs() <= TAU * (k.k1 + k.k2).max(1.0) {
            Vec::new()
        } else {
            vec![(Family::EqualB, konst / lin)]
        }
    } else {
        let lead = b.b1 - b.b2;
        let delta = lin * lin - 4.0 * lead * konst;
        if delta_is_zero(delta, b, k, TAU) {
            vec![(Family::Plus, lin / (2.0 * lead))]
        } else if delta < 0.0 {
            Vec::new()
        } else {
            // cancellation-free pair: x_plus = (lin + sqrt)/(2 lead), x_minus = (lin - sqrt)/(2 lead)
            let sq = delta.sqrt();
            if lin >= 0.0 {
                let q = 0.5 * (lin + sq);
                vec![(Family::Plus, q / lead), (Family::Minus, konst / q)]
            } else {
                let q = 0.5 * (lin - sq);
                vec![(Family::Plus, konst / q), (Family::Minus, q / lead)]
            }
        }
    };
    candidates
        .into_iter()
        .filter(|&(_, x)| {
            x.is_finite()
                && x > 0.0
                && x < 1.0
                && k.k1 - b.b1 * x > 0.0
                && k.k2 - b.b2 * (1.0 - x) > 0.0
        })
        .collect()
}

/// All equilibria on the smooth level surface `S_k`.
///
/// Each admissible root gives 8 points: free signs for `gamma1`, `gamma2`
/// and `m1`, with the sign of `m2` fixed by `gamma1 m1 = gamma2 m2`.
pub fn find_critical_points(b: &Params, k: &LevelValues) -> Result<Vec<CriticalPoint>> {
    classify_region(b, k).require_smooth()?;
    let mut out = Vec::new();
    for (family, x) in gamma1_sq_roots(b, k) {
        let g1 = x.sqrt();
        let g2 = (1.0 - x).sqrt();
        let l1 = (k.k1 - b.b1 * x).sqrt();
        let l2 = (k.k2 - b.b2 * (1.0 - x)).sqrt();
        for i in 0..2 {
            for j in 0..2 {
                for kk in 0..2 {
                    let sg = |e: i32| if e.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let state = State::new(
                        sg(kk) * l1,
                        sg(i + kk - j) * l2,
                        sg(i) * g1,
                        sg(j) * g2,
                        0.0,
                    );
                    let (kind, eigenvalues) = linear_type(&state, k);
                    out.push(CriticalPoint {
                        state,
                        kind,
                        index: kind.index(),
                        family,
                        eigenvalues,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Constant term `c` of the characteristic polynomial `lambda^2 + c` of the
/// flow linearised in the surface chart `(gamma2, gamma3)`.
pub fn characteristic_constant(cp: &State, k: &LevelValues) -> f64 {
    2.0 * (cp.m1 * cp.m1 + cp.m2 * cp.m2) - (k.k1 + k.k2)
}

fn linear_type(cp: &State, k: &LevelValues) -> (StabilityKind, [Complex64; 2]) {
    let c = characteristic_constant(cp, k);
    let window = TAU * (k.k1 + k.k2).max(1.0);
    if c < -window {
        let r = (-c).sqrt();
        (
            StabilityKind::Saddle,
            [Complex64::new(r, 0.0), Complex64::new(-r, 0.0)],
        )
    } else if c > window {
        let w = c.sqrt();
        (
            StabilityKind::Center,
            [Complex64::new(0.0, w), Complex64::new(0.0, -w)],
        )
    } else {
        (StabilityKind::Degenerate, [Complex64::new(0.0, 0.0); 2])
    }
}

pub fn classify_critical_point(
    cp: &State,
    b: &Params,
    k: &LevelValues,
) -> Result<(StabilityKind, [Complex64; 2])> {
    let residual = field_norm(cp, b);
    if residual.is_nan() || residual > EQUILIBRIUM_TOL {
        return Err(Error::InvalidInput(format!(
            "state is not an equilibrium (|X| = {residual:e})"
        )));
    }
    Ok(linear_type(cp, k))
}

pub fn euler_char_ph(points: &[CriticalPoint]) -> i64 {
    points.iter().map(|p| i64::from(p.kind.index())).sum()
}
