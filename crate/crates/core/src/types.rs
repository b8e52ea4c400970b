//! Domain values shared by every module: system parameters, integral values,
//! phase-space states, the parameter-plane region of a level, and the change
//! from physical to reduced variables.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative tolerance used for every comparison against a region
/// boundary (and for the b1 = b2 test).
pub const TAU: f64 = 1e-12;

/// Tolerance for labelling a state as lying on the Poisson sphere.
pub const SPHERE_TOL: f64 = 1e-9;

/// `|a - b| <= tol * scale`, with `scale` floored at 1 so that comparisons
/// against zero stay meaningful.
pub(crate) fn near(a: f64, b: f64, tol: f64, scale: f64) -> bool {
    (a - b).abs() <= tol * scale.abs().max(1.0)
}

/// Potential/inertia ratios `b = (b1, b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub b1: f64,
    pub b2: f64,
}

impl Params {
    pub fn new(b1: f64, b2: f64) -> Result<Self> {
        if !(b1.is_finite() && b2.is_finite()) || b1 <= 0.0 || b2 <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "b1 and b2 must be positive and finite, got ({b1}, {b2})"
            )));
        }
        Ok(Self { b1, b2 })
    }

    /// True when `|b1 - b2| <= tol * max(b1, b2)`.
    pub fn is_equal_b(&self, tol: f64) -> bool {
        (self.b1 - self.b2).abs() <= tol * self.b1.max(self.b2)
    }
}

/// Integral values `k = (k1, k2)` selecting the level surface S_k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelValues {
    pub k1: f64,
    pub k2: f64,
}

impl LevelValues {
    pub fn new(k1: f64, k2: f64) -> Result<Self> {
        if !(k1.is_finite() && k2.is_finite()) || k1 < 0.0 || k2 < 0.0 {
            return Err(Error::InvalidInput(format!(
                "k1 and k2 must be nonnegative and finite, got ({k1}, {k2})"
            )));
        }
        Ok(Self { k1, k2 })
    }

    pub fn sum(&self) -> f64 {
        self.k1 + self.k2
    }
}

/// A point `(m1, m2, gamma1, gamma2, gamma3)` of the reduced phase space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct State {
    pub m1: f64,
    pub m2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl State {
    pub const fn new(m1: f64, m2: f64, gamma1: f64, gamma2: f64, gamma3: f64) -> Self {
        Self {
            m1,
            m2,
            gamma1,
            gamma2,
            gamma3,
        }
    }

    pub const fn from_array(a: [f64; 5]) -> Self {
        Self::new(a[0], a[1], a[2], a[3], a[4])
    }

    pub const fn to_array(self) -> [f64; 5] {
        [self.m1, self.m2, self.gamma1, self.gamma2, self.gamma3]
    }

    pub fn gamma_norm_sq(&self) -> f64 {
        self.gamma1 * self.gamma1 + self.gamma2 * self.gamma2 + self.gamma3 * self.gamma3
    }

    pub fn is_on_sphere(&self) -> bool {
        (self.gamma_norm_sq() - 1.0).abs() <= SPHERE_TOL
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|v| v.is_finite())
    }

    /// Euclidean distance in R^5.
    pub fn distance(&self, other: &State) -> f64 {
        self.to_array()
            .iter()
            .zip(other.to_array())
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// The flow symmetry `(m, gamma1, gamma2, gamma3) -> (-m, -gamma1, -gamma2, gamma3)`.
    pub fn flip(&self) -> State {
        State::new(-self.m1, -self.m2, -self.gamma1, -self.gamma2, self.gamma3)
    }

    /// The reversing symmetry `gamma3 -> -gamma3`.
    pub fn reflect(&self) -> State {
        State {
            gamma3: -self.gamma3,
            ..*self
        }
    }
}

/// Physical description of the body: inertias, potential coefficients,
/// momenta and the values of the two torque integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub i1: f64,
    pub i2: f64,
    pub big_b1: f64,
    pub big_b2: f64,
    pub pi1: f64,
    pub pi2: f64,
    pub big_k1: f64,
    pub big_k2: f64,
}

/// Output of [`from_physical`]. Values are raw; [`ReducedCoords::params`] and
/// [`ReducedCoords::levels`] apply the invariants of the reduced types.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedCoords {
    pub b1: f64,
    pub b2: f64,
    pub k1: f64,
    pub k2: f64,
    pub m1: f64,
    pub m2: f64,
}

impl ReducedCoords {
    pub fn params(&self) -> Result<Params> {
        Params::new(self.b1, self.b2)
    }

    pub fn levels(&self) -> Result<LevelValues> {
        LevelValues::new(self.k1, self.k2)
    }
}

/// Change of variables from the physical to the reduced system.
pub fn from_physical(p: &PhysicalParams) -> Result<ReducedCoords> {
    if !(p.i1 > 0.0 && p.i2 > 0.0 && p.i1.is_finite() && p.i2.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "inertias must be positive, got I1 = {}, I2 = {}",
            p.i1, p.i2
        )));
    }
    Ok(ReducedCoords {
        m1: -p.pi2 / p.i2,
        b1: p.big_b1 / p.i2,
        k1: p.big_k1 / p.i2,
        m2: -p.pi1 / p.i1,
        b2: p.big_b2 / p.i1,
        k2: p.big_k2 / p.i1,
    })
}

/// Momenta `(Pi1, Pi2)` recovered from reduced `(m1, m2)`.
pub fn momenta_from_reduced(m1: f64, m2: f64, i1: f64, i2: f64) -> (f64, f64) {
    (-m2 * i1, -m1 * i2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionTag {
    D1,
    D2,
    D3,
    D4,
    D5,
    Singular,
}

/// Subdivision of the band region cut out by the curve `delta = 0` and the
/// line `k1 + k2 = 2 max(b1, b2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subregion {
    /// `delta > 0` below the line.
    Sub12,
    /// `delta > 0` above the line.
    Sub3,
    /// `delta < 0`.
    Sub4,
    /// `delta = 0` below the line.
    C1,
    /// `delta = 0` above the line.
    C2,
}

/// Which smoothness condition fails, in the order they are tested.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SingularCause {
    KZero,
    K1EqB1,
    K2EqB2,
    RatioSumOne,
}

impl fmt::Display for SingularCause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msg = match self {
            SingularCause::KZero => "k1 * k2 = 0 (smoothness requires k1 k2 != 0)",
            SingularCause::K1EqB1 => "k1 = b1 (smoothness requires k1 != b1)",
            SingularCause::K2EqB2 => "k2 = b2 (smoothness requires k2 != b2)",
            SingularCause::RatioSumOne => {
                "k1/b1 + k2/b2 = 1 (smoothness requires k1/b1 + k2/b2 != 1)"
            }
        };
        f.write_str(msg)
    }
}

impl fmt::Display for RegionTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl fmt::Display for Subregion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub tag: RegionTag,
    pub subregion: Option<Subregion>,
    pub singular_cause: Option<SingularCause>,
}

impl Region {
    pub fn is_singular(&self) -> bool {
        self.tag == RegionTag::Singular
    }

    /// `Err(UnsupportedRegion)` for singular levels.
    pub fn require_smooth(&self) -> Result<()> {
        match self.singular_cause {
            Some(cause) => Err(Error::UnsupportedRegion(cause)),
            None => Ok(()),
        }
    }
}
