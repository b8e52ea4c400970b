//! The reduced Suslov vector field, its integrals of motion and a fixed-step
//! RK4 integrator that reports (but never corrects) drift of those integrals.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{Params, State};

/// Default RK4 step.
pub const DEFAULT_STEP: f64 = 1e-3;

/// Default denominator bound for [`detect_rational_ratio`].
pub const DEFAULT_MAX_DEN: u64 = 10_000;

/// Any coordinate beyond this magnitude aborts an integration.
pub const BLOWUP_LIMIT: f64 = 1e10;

/// Right-hand side `(m1', m2', gamma1', gamma2', gamma3')`.
#[inline]
pub fn vector_field(s: &State, b: &Params) -> [f64; 5] {
    [
        -b.b1 * s.gamma1 * s.gamma3,
        b.b2 * s.gamma2 * s.gamma3,
        s.m1 * s.gamma3,
        -s.m2 * s.gamma3,
        s.gamma2 * s.m2 - s.gamma1 * s.m1,
    ]
}

pub fn field_norm(s: &State, b: &Params) -> f64 {
    vector_field(s, b).iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Conserved {
    pub f1: f64,
    pub f2: f64,
    /// `gamma1^2 + gamma2^2 + gamma3^2`
    pub norm: f64,
}

pub fn conserved_quantities(s: &State, b: &Params) -> Conserved {
    Conserved {
        f1: s.m1 * s.m1 + b.b1 * s.gamma1 * s.gamma1,
        f2: s.m2 * s.m2 + b.b2 * s.gamma2 * s.gamma2,
        norm: s.gamma_norm_sq(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ExtraIntegralKind {
    ComplexPower,
}

/// The additional polynomial integral available when `sqrt(b1/b2) = p/q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtraIntegral {
    pub p: u64,
    pub q: u64,
    pub kind: ExtraIntegralKind,
}

/// Looks for `sqrt(b1/b2) = p/q` with `q <= max_den` using the continued
/// fraction of the floating ratio.
///
/// A convergent is accepted only when the expansion terminates there, i.e. the
/// remaining error is at the level of floating-point noise (a few ulps) and
/// also below `1e-10 * p/q`. Irrational ratios such as `sqrt(2)` have close
/// convergents with small denominators but never terminate, so they are
/// rejected for any practical bound.
pub fn detect_rational_ratio(b: &Params, max_den: u64) -> Option<ExtraIntegral> {
    let x = (b.b1 / b.b2).sqrt();
    if !x.is_finite() || x <= 0.0 || max_den == 0 {
        return None;
    }
    let noise = 8.0 * f64::EPSILON * x;

    let (mut h_prev, mut h) = (0u64, 1u64);
    let (mut k_prev, mut k) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > u64::MAX as f64 / 2.0 {
            return None;
        }
        let a_int = a as u64;
        let h_next = a_int.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a_int.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > max_den {
            return None;
        }
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);

        let approx = h as f64 / k as f64;
        let err = (x - approx).abs();
        if h > 0 && err <= noise && err <= 1e-10 * approx {
            return Some(ExtraIntegral {
                p: h,
                q: k,
                kind: ExtraIntegralKind::ComplexPower,
            });
        }
        let frac = r - a;
        if frac <= 0.0 {
            return None;
        }
        r = 1.0 / frac;
    }
    None
}

/// `W = (m1 + i sqrt(b1) gamma1)^q (sqrt(b2) gamma2 - i m2)^p`; both real and
/// imaginary parts are conserved when `sqrt(b1/b2) = p/q`.
pub fn extra_integral_value(s: &State, b: &Params, e: &ExtraIntegral) -> Complex64 {
    let z1 = Complex64::new(s.m1, b.b1.sqrt() * s.gamma1);
    let z2 = Complex64::new(b.b2.sqrt() * s.gamma2, -s.m2);
    pow_u64(z1, e.q) * pow_u64(z2, e.p)
}

fn pow_u64(z: Complex64, n: u64) -> Complex64 {
    match u32::try_from(n) {
        Ok(n) => z.powu(n),
        Err(_) => z.powf(n as f64),
    }
}

/// For `b1 = b2 = b`: `m1 m2 - b gamma1 gamma2`.
pub fn equal_b_integral(s: &State, b: f64) -> f64 {
    s.m1 * s.m2 - b * s.gamma1 * s.gamma2
}

fn axpy(s: &State, h: f64, d: &[f64; 5]) -> State {
    State::new(
        s.m1 + h * d[0],
        s.m2 + h * d[1],
        s.gamma1 + h * d[2],
        s.gamma2 + h * d[3],
        s.gamma3 + h * d[4],
    )
}

/// One classical RK4 step.
pub fn rk4_step(s: &State, b: &Params, h: f64) -> State {
    let k1 = vector_field(s, b);
    let k2 = vector_field(&axpy(s, 0.5 * h, &k1), b);
    let k3 = vector_field(&axpy(s, 0.5 * h, &k2), b);
    let k4 = vector_field(&axpy(s, h, &k3), b);
    let mut d = [0.0; 5];
    for i in 0..5 {
        d[i] = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0;
    }
    axpy(s, h, &d)
}

fn escaped(s: &State) -> bool {
    s.to_array()
        .iter()
        .any(|v| !v.is_finite() || v.abs() > BLOWUP_LIMIT)
}

/// Maximum absolute deviation of each integral from its initial value.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DriftReport {
    pub f1: f64,
    pub f2: f64,
    pub norm: f64,
}

impl DriftReport {
    pub fn max(&self) -> f64 {
        self.f1.max(self.f2).max(self.norm)
    }
}

/// Running drift monitor.
#[derive(Debug, Clone, Copy)]
pub struct DriftMonitor {
    initial: Conserved,
    report: DriftReport,
}

impl DriftMonitor {
    pub fn new(s0: &State, b: &Params) -> Self {
        Self {
            initial: conserved_quantities(s0, b),
            report: DriftReport::default(),
        }
    }

    pub fn observe(&mut self, s: &State, b: &Params) {
        let c = conserved_quantities(s, b);
        let r = &mut self.report;
        r.f1 = r.f1.max((c.f1 - self.initial.f1).abs());
        r.f2 = r.f2.max((c.f2 - self.initial.f2).abs());
        r.norm = r.norm.max((c.norm - self.initial.norm).abs());
    }

    pub fn report(&self) -> DriftReport {
        self.report
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub drift: DriftReport,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> Option<(f64, State)> {
        Some((*self.times.last()?, *self.states.last()?))
    }
}

fn check_run(s0: &State, step: f64, t_end: f64) -> Result<()> {
    if !s0.is_finite() || !s0.is_on_sphere() {
        return Err(Error::InvalidInput(format!(
            "initial state must lie on the unit sphere, |gamma|^2 = {}",
            s0.gamma_norm_sq()
        )));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput(format!("step must be positive, got {step}")));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidInput(format!("t_end must be positive, got {t_end}")));
    }
    Ok(())
}

/// Step sizes covering `[0, t_end]`: full steps, then one shortened step so
/// the run ends exactly at `t_end`.
fn step_plan(step: f64, t_end: f64) -> impl Iterator<Item = f64> {
    let full = ((t_end / step) * (1.0 - 1e-12)).floor() as u64;
    let rest = t_end - full as f64 * step;
    let tail = if rest > 1e-12 * step { Some(rest) } else { None };
    std::iter::repeat_n(step, full as usize).chain(tail)
}

/// Fixed-step RK4 from `s0` to `t_end`. No projection back onto the level set
/// is ever applied.
pub fn integrate(s0: &State, b: &Params, step: f64, t_end: f64) -> Result<Trajectory> {
    check_run(s0, step, t_end)?;
    let mut times = vec![0.0];
    let mut states = vec![*s0];
    let mut monitor = DriftMonitor::new(s0, b);
    let mut s = *s0;
    let mut t = 0.0;
    let mut i = 0u64;
    for h in step_plan(step, t_end) {
        let next = rk4_step(&s, b, h);
        if escaped(&next) {
            return Err(Error::Blowup { last_time: t });
        }
        i += 1;
        s = next;
        t = (i as f64 * step).min(t_end);
        monitor.observe(&s, b);
        times.push(t);
        states.push(s);
    }
    Ok(Trajectory {
        times,
        states,
        drift: monitor.report(),
    })
}

/// Like [`integrate`] but only keeps the final state and the drift report.
pub fn propagate(s0: &State, b: &Params, step: f64, t_end: f64) -> Result<(State, DriftReport)> {
    check_run(s0, step, t_end)?;
    let mut monitor = DriftMonitor::new(s0, b);
    let mut s = *s0;
    let mut t = 0.0;
    for h in step_plan(step, t_end) {
        let next = rk4_step(&s, b, h);
        if escaped(&next) {
            return Err(Error::Blowup { last_time: t });
        }
        s = next;
        t += h;
        monitor.observe(&s, b);
    }
    Ok((s, monitor.report()))
}
