//! Reduced Suslov nonholonomic flow with a Klebsh-Tisserand potential.
//!
//! State is `(m1, m2, gamma1, gamma2, gamma3)` with `|gamma| = 1`. For positive
//! level values `k = (k1, k2)` of the integrals `f1 = m1^2 + b1 gamma1^2` and
//! `f2 = m2^2 + b2 gamma2^2`, the level set `S_k` is a compact surface; this
//! crate classifies it, finds the equilibria on it, and describes the flow via
//! its projection onto a flat torus.

pub mod critical;
pub mod dynamics;
pub mod error;
pub mod levelset;
pub mod projection;
pub mod types;

pub use critical::{
    characteristic_constant, classify_critical_point, discriminant, euler_char_ph,
    find_critical_points, CriticalPoint, Discriminant, Family, StabilityKind,
};
pub use dynamics::{
    conserved_quantities, detect_rational_ratio, extra_integral_value, integrate, propagate,
    vector_field, Conserved, DriftReport, ExtraIntegral, Trajectory,
};
pub use error::{Error, Result};
pub use levelset::{classify_region, topology_via_construction, uk_grid, GkData, Topology};
pub use projection::{
    detect_periodicity, dpm, from_torus, to_torus, DpmDescription, DpmShape, PeriodicityVerdict,
    Sheet, TorusPoint,
};
pub use types::{
    from_physical, LevelValues, Params, PhysicalParams, ReducedCoords, Region, RegionTag,
    SingularCause, State, Subregion,
};
