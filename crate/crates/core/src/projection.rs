//! Projections of `S_k` onto the flat torus and onto the Poisson sphere, the
//! linear-flow picture on the torus, and periodicity detection.
//!
//! On `S_k` the flow projects to straight lines of slope `sqrt(b2/b1)` on the
//! torus, traversed forwards while `gamma3 > 0` and backwards while
//! `gamma3 < 0`. A line segment of the projection therefore ends where it
//! meets `boundary(U_k)` (where `gamma3` changes sign) and the orbit retraces
//! it on the other sheet.

use std::f64::consts::{FRAC_PI_2, TAU as TWO_PI};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::critical::find_critical_points;
use crate::dynamics::{
    conserved_quantities, detect_rational_ratio, field_norm, propagate, rk4_step, vector_field,
    DEFAULT_MAX_DEN, DEFAULT_STEP,
};
use crate::error::{Error, Result};
use crate::levelset::{classify_region, g_gradient, g_value, GkData};
use crate::types::{near, LevelValues, Params, RegionTag, State, TAU};

/// Tolerance for accepting a state as lying on `S_k`.
pub const ON_LEVEL_TOL: f64 = 1e-9;

/// Sign of `gamma3`, i.e. which sheet of the double cover a torus point is on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sheet {
    Plus,
    Minus,
    Zero,
}

impl Sheet {
    pub fn sign(self) -> f64 {
        match self {
            Sheet::Plus => 1.0,
            Sheet::Minus => -1.0,
            Sheet::Zero => 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TorusPoint {
    pub theta1: f64,
    pub theta2: f64,
    pub gamma3_sign: Sheet,
}

/// Maps an angle into `[-pi/2, 3pi/2)`.
pub fn wrap_theta1(x: f64) -> f64 {
    let w = x - TWO_PI * ((x + FRAC_PI_2) / TWO_PI).floor();
    if w >= 3.0 * FRAC_PI_2 {
        w - TWO_PI
    } else {
        w
    }
}

/// Maps an angle into `[0, 2pi)`.
pub fn wrap_theta2(x: f64) -> f64 {
    let w = x.rem_euclid(TWO_PI);
    if w >= TWO_PI {
        0.0
    } else {
        w
    }
}

fn require_ellipses(k: &LevelValues) -> Result<()> {
    if k.k1 <= 0.0 || k.k2 <= 0.0 {
        return Err(Error::DegenerateEllipse);
    }
    Ok(())
}

/// `(theta1, theta2)` of a state on `S_k`.
pub fn to_torus(s: &State, b: &Params, k: &LevelValues) -> Result<TorusPoint> {
    require_ellipses(k)?;
    let c = conserved_quantities(s, b);
    let off = !near(c.f1, k.k1, ON_LEVEL_TOL, k.k1)
        || !near(c.f2, k.k2, ON_LEVEL_TOL, k.k2)
        || !near(c.norm, 1.0, ON_LEVEL_TOL, 1.0);
    if off || !s.is_finite() {
        return Err(Error::InvalidInput(format!(
            "state is not on S_k: f1 = {}, f2 = {}, |gamma|^2 = {}",
            c.f1, c.f2, c.norm
        )));
    }
    let theta1 = (s.gamma1 * (b.b1 / k.k1).sqrt()).atan2(s.m1 / k.k1.sqrt());
    let theta2 = (s.m2 / k.k2.sqrt()).atan2(s.gamma2 * (b.b2 / k.k2).sqrt());
    let gamma3_sign = if s.gamma3.abs() <= TAU {
        Sheet::Zero
    } else if s.gamma3 > 0.0 {
        Sheet::Plus
    } else {
        Sheet::Minus
    };
    Ok(TorusPoint {
        theta1: wrap_theta1(theta1),
        theta2: wrap_theta2(theta2),
        gamma3_sign,
    })
}

/// The state over a torus point in `closure(U_k)`, on the requested sheet.
pub fn from_torus(t: &TorusPoint, b: &Params, k: &LevelValues) -> Result<State> {
    require_ellipses(k)?;
    let (s1, c1) = t.theta1.sin_cos();
    let (s2, c2) = t.theta2.sin_cos();
    let m1 = k.k1.sqrt() * c1;
    let gamma1 = (k.k1 / b.b1).sqrt() * s1;
    let m2 = k.k2.sqrt() * s2;
    let gamma2 = (k.k2 / b.b2).sqrt() * c2;
    let rest = 1.0 - gamma1 * gamma1 - gamma2 * gamma2;
    if rest < -TAU {
        return Err(Error::NotInImage {
            theta1: t.theta1,
            theta2: t.theta2,
            excess: rest,
        });
    }
    let gamma3 = t.gamma3_sign.sign() * rest.max(0.0).sqrt();
    Ok(State::new(m1, m2, gamma1, gamma2, gamma3))
}

/// `d theta2 / d theta1` of the projected flow.
pub fn flow_slope(b: &Params) -> f64 {
    (b.b2 / b.b1).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DpmShape {
    TwoSquares,
    SphereWithFourHoles,
    BandTheta1,
    BandTheta2,
    FullSphere,
}

/// Domain of possible motion on the Poisson sphere:
/// `|gamma1| <= gamma1_bound`, `|gamma2| <= gamma2_bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpmDescription {
    pub shape: DpmShape,
    pub gamma1_bound: f64,
    pub gamma2_bound: f64,
}

pub fn dpm(b: &Params, k: &LevelValues) -> Result<DpmDescription> {
    let region = classify_region(b, k);
    region.require_smooth()?;
    let shape = match region.tag {
        RegionTag::D1 => DpmShape::TwoSquares,
        RegionTag::D2 => DpmShape::SphereWithFourHoles,
        RegionTag::D3 => DpmShape::BandTheta1,
        RegionTag::D4 => DpmShape::BandTheta2,
        RegionTag::D5 => DpmShape::FullSphere,
        RegionTag::Singular => unreachable!("singular levels rejected above"),
    };
    Ok(DpmDescription {
        shape,
        gamma1_bound: (k.k1 / b.b1).sqrt().min(1.0),
        gamma2_bound: (k.k2 / b.b2).sqrt().min(1.0),
    })
}

/// Number of points of `S_k` over `gamma` on the Poisson sphere.
pub fn dpm_multiplicity(gamma: [f64; 3], b: &Params, k: &LevelValues) -> Result<u8> {
    let norm = gamma.iter().map(|g| g * g).sum::<f64>();
    if (norm - 1.0).abs() > ON_LEVEL_TOL {
        return Err(Error::InvalidInput(format!(
            "gamma must be a unit vector, |gamma|^2 = {norm}"
        )));
    }
    let r1 = k.k1 - b.b1 * gamma[0] * gamma[0];
    let r2 = k.k2 - b.b2 * gamma[1] * gamma[1];
    let t1 = TAU * k.k1.max(1.0);
    let t2 = TAU * k.k2.max(1.0);
    if r1 < -t1 || r2 < -t2 {
        return Ok(0);
    }
    Ok(match (r1.abs() <= t1, r2.abs() <= t2) {
        (true, true) => 1,
        (true, false) | (false, true) => 2,
        (false, false) => 4,
    })
}

/// Draws a state on `S_k`: torus angles uniform on `U_k` by rejection, with a
/// random sheet.
pub fn sample_state<R: Rng + ?Sized>(b: &Params, k: &LevelValues, rng: &mut R) -> Result<State> {
    require_ellipses(k)?;
    let eps = GkData::new(b, k).eps;
    for _ in 0..1_000_000 {
        let theta1 = rng.gen_range(-FRAC_PI_2..3.0 * FRAC_PI_2);
        let theta2 = rng.gen_range(0.0..TWO_PI);
        let sheet = if rng.gen_bool(0.5) {
            Sheet::Plus
        } else {
            Sheet::Minus
        };
        if g_value(theta1, theta2, b, k) - eps > 1e-9 {
            return from_torus(
                &TorusPoint {
                    theta1,
                    theta2,
                    gamma3_sign: sheet,
                },
                b,
                k,
            );
        }
    }
    Err(Error::InvalidInput("U_k is too small to sample".into()))
}

/// The straight line through a torus point, parametrised by the `theta1`
/// advance `s`: `(theta1 + s, theta2 + s * slope)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    pub theta1: f64,
    pub theta2: f64,
    pub slope: f64,
    /// Distance (in `s`) to `boundary(U_k)` going backwards, if reached.
    pub backward: Option<f64>,
    /// Distance to `boundary(U_k)` going forwards, if reached.
    pub forward: Option<f64>,
}

impl Chord {
    pub fn point(&self, s: f64) -> (f64, f64) {
        (self.theta1 + s, self.theta2 + s * self.slope)
    }
}

/// Bisection tolerance (in angle) for boundary hits.
pub const CHORD_ANGLE_TOL: f64 = 1e-12;

const TANGENCY_PAD: f64 = 1e-6;

fn line_excess(t1: f64, t2: f64, slope: f64, s: f64, b: &Params, k: &LevelValues, eps: f64) -> f64 {
    g_value(t1 + s, t2 + s * slope, b, k) - eps
}

/// First `s >= 0` at which the line leaves `U_k` in direction `dir` (+1/-1),
/// searching up to `max_len`.
fn boundary_hit(
    t1: f64,
    t2: f64,
    slope: f64,
    dir: f64,
    max_len: f64,
    b: &Params,
    k: &LevelValues,
) -> Option<f64> {
    let eps = GkData::new(b, k).eps;
    let h = |s: f64| line_excess(t1, t2, slope, dir * s, b, k, eps);
    let h0 = h(0.0);
    if h0 <= 1e-14 {
        let (gx, gy) = g_gradient(t1, t2, b, k);
        if dir * (gx + slope * gy) <= 0.0 {
            return Some(0.0);
        }
    }
    let ds = 2e-3 / slope.max(1.0);
    let mut prev = 0.0;
    let mut s = ds;
    while s <= max_len + ds {
        if h(s) <= 0.0 {
            let (mut lo, mut hi) = (prev, s);
            while hi - lo > CHORD_ANGLE_TOL {
                let mid = 0.5 * (lo + hi);
                if h(mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            return Some(0.5 * (lo + hi));
        }
        prev = s;
        s += ds;
    }
    None
}

/// Traces the projected line through `(theta1, theta2)` to `boundary(U_k)` in
/// both directions, giving up after a `theta1` advance of `max_len`.
pub fn trace_chord(theta1: f64, theta2: f64, b: &Params, k: &LevelValues, max_len: f64) -> Chord {
    let slope = flow_slope(b);
    let empty_boundary = GkData::new(b, k).eps < 0.0;
    let (backward, forward) = if empty_boundary {
        (None, None)
    } else {
        (
            boundary_hit(theta1, theta2, slope, -1.0, max_len, b, k),
            boundary_hit(theta1, theta2, slope, 1.0, max_len, b, k),
        )
    };
    Chord {
        theta1,
        theta2,
        slope,
        backward,
        forward,
    }
}

/// Smallest distance, over all lattice translates, from `c` to the chord
/// segment `s in [-back, fwd]`.
fn distance_to_segment(chord: &Chord, back: f64, fwd: f64, c: (f64, f64)) -> f64 {
    let (x0, y0) = chord.point(-back);
    let (x1, y1) = chord.point(fwd);
    let (dx, dy) = (1.0, chord.slope);
    let dd = dx * dx + dy * dy;
    let range = |lo: f64, hi: f64, v: f64| {
        let a = ((lo.min(hi) - v) / TWO_PI).floor() as i64 - 1;
        let z = ((lo.max(hi) - v) / TWO_PI).ceil() as i64 + 1;
        a..=z
    };
    let mut best = f64::INFINITY;
    for i in range(x0, x1, c.0) {
        for j in range(y0, y1, c.1) {
            let cx = c.0 + TWO_PI * i as f64;
            let cy = c.1 + TWO_PI * j as f64;
            let s = (((cx - chord.theta1) * dx + (cy - chord.theta2) * dy) / dd).clamp(-back, fwd);
            let (px, py) = chord.point(s);
            best = best.min(((px - cx).powi(2) + (py - cy).powi(2)).sqrt());
        }
    }
    best
}

/// Winding of a closed projected line: `theta1_turns` turns in `theta1`
/// while `theta2` makes `theta2_turns`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Winding {
    pub theta1_turns: u64,
    pub theta2_turns: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PeriodicityVerdict {
    /// Closed orbit. `residual` is `|flow(s0, period) - s0|` re-measured at
    /// half the step.
    Periodic {
        period: f64,
        residual: f64,
        winding: Option<Winding>,
    },
    /// The orbit's closure contains these equilibria.
    ConnectsCritical { endpoints: Vec<State> },
    QuasiPeriodic,
    Equilibrium,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicityOptions {
    pub step: f64,
    /// Give up looking for a first return after this time.
    pub t_max: f64,
    /// A chord passing this close to an equilibrium's torus image connects it.
    pub critical_angle_tol: f64,
    /// Section crossings closer than this to `s0` count as a return.
    pub capture_radius: f64,
    pub max_den: u64,
    /// Search length (in `theta1` turns) for irrational slopes.
    pub max_turns: f64,
}

impl Default for PeriodicityOptions {
    fn default() -> Self {
        Self {
            step: DEFAULT_STEP,
            t_max: 1e4,
            critical_angle_tol: 1e-8,
            capture_radius: 1e-4,
            max_den: DEFAULT_MAX_DEN,
            max_turns: 1000.0,
        }
    }
}

pub fn detect_periodicity(s0: &State, b: &Params, k: &LevelValues) -> Result<PeriodicityVerdict> {
    detect_periodicity_with(s0, b, k, &PeriodicityOptions::default())
}

pub fn detect_periodicity_with(
    s0: &State,
    b: &Params,
    k: &LevelValues,
    opts: &PeriodicityOptions,
) -> Result<PeriodicityVerdict> {
    classify_region(b, k).require_smooth()?;
    if field_norm(s0, b) <= 1e-12 {
        return Ok(PeriodicityVerdict::Equilibrium);
    }
    let tp = to_torus(s0, b, k)?;
    let ratio = detect_rational_ratio(b, opts.max_den);
    let max_len = match ratio {
        Some(e) => TWO_PI * e.p as f64 * (1.0 + 1e-9),
        None => TWO_PI * opts.max_turns,
    };
    let chord = trace_chord(tp.theta1, tp.theta2, b, k, max_len);

    let closed_line = || {
        ratio.map(|e| Winding {
            theta1_turns: e.p,
            theta2_turns: e.q,
        })
    };
    match (chord.backward, chord.forward) {
        (Some(back), Some(fwd)) => {
            let critical = find_critical_points(b, k)?;
            let mut endpoints = Vec::new();
            // a tangency endpoint is only located to about sqrt(machine eps)
            // along the line, so the ends are padded before measuring
            let (back, fwd) = (back + TANGENCY_PAD, fwd + TANGENCY_PAD);
            for cp in &critical {
                let ct = to_torus(&cp.state, b, k)?;
                if distance_to_segment(&chord, back, fwd, (ct.theta1, ct.theta2))
                    <= opts.critical_angle_tol
                {
                    endpoints.push(cp.state);
                }
            }
            if !endpoints.is_empty() {
                return Ok(PeriodicityVerdict::ConnectsCritical { endpoints });
            }
            measured_period(s0, b, opts, None)
        }
        (None, None) => match closed_line() {
            Some(w) => measured_period(s0, b, opts, Some(w)),
            None => Ok(PeriodicityVerdict::QuasiPeriodic),
        },
        // one-sided hit: the search horizon ran out on an irrational line
        _ => Ok(PeriodicityVerdict::QuasiPeriodic),
    }
}

fn measured_period(
    s0: &State,
    b: &Params,
    opts: &PeriodicityOptions,
    winding: Option<Winding>,
) -> Result<PeriodicityVerdict> {
    let period = first_return(s0, b, opts.step, opts.t_max, opts.capture_radius)?
        .ok_or(Error::NoReturn { t_max: opts.t_max })?;
    let (end, _) = propagate(s0, b, 0.5 * opts.step, period)?;
    Ok(PeriodicityVerdict::Periodic {
        period,
        residual: end.distance(s0),
        winding,
    })
}

/// Time of first return to `s0`, detected on the hyperplane through `s0`
/// orthogonal to the flow there. Crossings in the flow direction that land
/// within `capture_radius` of `s0` count as a return; the crossing time is
/// refined by bisection on the length of the last RK4 step.
pub fn first_return(
    s0: &State,
    b: &Params,
    step: f64,
    t_max: f64,
    capture_radius: f64,
) -> Result<Option<f64>> {
    let v = vector_field(s0, b);
    let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if vn == 0.0 {
        return Ok(None);
    }
    let normal = v.map(|x| x / vn);
    let origin = s0.to_array();
    let section = |s: &State| {
        s.to_array()
            .iter()
            .zip(origin.iter().zip(normal.iter()))
            .map(|(x, (o, n))| (x - o) * n)
            .sum::<f64>()
    };

    let mut s = *s0;
    let mut t = 0.0;
    let mut side = 0.0;
    while t < t_max {
        let next = rk4_step(&s, b, step);
        if !next.is_finite() {
            return Err(Error::Blowup { last_time: t });
        }
        let side_next = section(&next);
        if side < 0.0 && side_next >= 0.0 {
            let (mut lo, mut hi) = (0.0, step);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if section(&rk4_step(&s, b, mid)) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let tau = 0.5 * (lo + hi);
            if rk4_step(&s, b, tau).distance(s0) <= capture_radius {
                return Ok(Some(t + tau));
            }
        }
        s = next;
        side = side_next;
        t += step;
    }
    Ok(None)
}

/// Torus polyline pieces of the projected chord, split where it wraps.
pub fn chord_polylines(chord: &Chord, back: f64, fwd: f64) -> Vec<Vec<(f64, f64)>> {
    let mut pieces: Vec<Vec<(f64, f64)>> = Vec::new();
    let n = (((back + fwd) / 0.01).ceil() as usize).max(1);
    let mut current: Vec<(f64, f64)> = Vec::new();
    let mut last: Option<(f64, f64)> = None;
    for i in 0..=n {
        let s = -back + (back + fwd) * i as f64 / n as f64;
        let (x, y) = chord.point(s);
        let p = (wrap_theta1(x), wrap_theta2(y));
        if let Some(q) = last {
            if (p.0 - q.0).abs() > std::f64::consts::PI || (p.1 - q.1).abs() > std::f64::consts::PI {
                pieces.push(std::mem::take(&mut current));
            }
        }
        current.push(p);
        last = Some(p);
    }
    if !current.is_empty() {
        pieces.push(current);
    }
    pieces.retain(|p| p.len() > 1);
    pieces
}
