use thiserror::Error;

use crate::types::SingularCause;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The level set is not a smooth surface, so no topology or equilibrium
    /// set is defined for it.
    #[error("level surface is not a smooth 2-manifold: {0}")]
    UnsupportedRegion(SingularCause),

    #[error("b1 and b2 coincide within tolerance; use the equal-b (linear) branch")]
    EqualB,

    #[error("integration blew up after t = {last_time}")]
    Blowup { last_time: f64 },

    #[error("degenerate ellipse: k1 and k2 must both be positive")]
    DegenerateEllipse,

    #[error("torus point ({theta1}, {theta2}) lies outside the closure of U_k (g - eps = {excess})")]
    NotInImage {
        theta1: f64,
        theta2: f64,
        excess: f64,
    },

    #[error("no first return to the initial state within t = {t_max}")]
    NoReturn { t_max: f64 },
}
