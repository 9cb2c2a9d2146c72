use thiserror::Error;

use crate::spec::ParseError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series has zero constant term; target must not vanish at the center")]
    ZeroConstantTerm,

    #[error("series order {have} is too low, need at least {need}")]
    InsufficientOrder { need: usize, have: usize },

    #[error("series must hold at least one coefficient")]
    EmptySeries,

    #[error("denominator ratio {0} is outside [0, 1)")]
    InvalidR(f64),

    #[error("tail bound diverges: |z| = {z_abs} is not below 1/kappa = {limit}")]
    DivergentTail { z_abs: f64, limit: f64 },

    #[error("a factor denominator vanishes at z = {re}{im:+}i")]
    PoleHit { re: f64, im: f64 },

    #[error("factor product was not built with denominator ratio r^2 = {expected}")]
    MissingDenominator { expected: f64 },

    #[error("point with modulus {0} lies outside the open unit disc")]
    OutsideDisc(f64),

    #[error("disc with center modulus {center_abs} and radius {radius} is not contained in the unit disc")]
    DiscNotInUnitDisc { center_abs: f64, radius: f64 },

    #[error("target nearly vanishes (|f| = {value:.3e}) at {re}{im:+}i")]
    VanishingOnDisc { value: f64, re: f64, im: f64 },

    #[error("no truncation index up to {j_max} reached the error budget (best sup-error {best_error:.3e})")]
    BudgetExceeded { j_max: usize, best_error: f64 },

    #[error("prescribed zero with modulus {0} lies outside the open unit disc")]
    ZeroOutsideDisc(f64),

    #[error("polynomial has a root of modulus {0} in the closed unit disc")]
    RootInsideDisc(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}
