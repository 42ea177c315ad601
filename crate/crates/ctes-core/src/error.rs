//! Error type shared by all modules of the crate.

use thiserror::Error;

/// Errors raised when an input violates a documented precondition.
///
/// Every variant names the precondition it guards so that front ends can
/// surface the violation verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("curlicue parameters require M >= 2 interfering terms and order j >= 1 (got M={terms}, j={order})")]
    InvalidCurlicueParams { terms: u32, order: u32 },

    #[error("phase argument must be finite (got {0})")]
    NonFinitePhase(f64),

    #[error("hyperbolic argument must be a positive finite real (got {0})")]
    NonPositiveXi(f64),

    #[error("trial factor must be a positive integer (got 0)")]
    ZeroTrialFactor,

    #[error("target integer must be positive (got 0)")]
    ZeroTarget,

    #[error("spectral window requires 0 < o_min < o_max (got [{o_min}, {o_max}])")]
    InvalidWindow { o_min: f64, o_max: f64 },

    #[error("sampling density must be at least 2 points per unit (got {0})")]
    SparseSampling(u32),

    #[error("unit parameter x must be a positive finite real (got {0})")]
    NonPositiveX(f64),

    #[error("step bounds require N >= 2 (got {0})")]
    StepDomain(u64),

    #[error("grid would need {needed} points, above the {limit} point limit")]
    GridTooLarge { needed: u128, limit: u64 },

    #[error("grid points must lie inside the window [{o_min}, {o_max}] (got {value})")]
    GridOutsideWindow { value: f64, o_min: f64, o_max: f64 },

    #[error("grid points must be strictly increasing (got {prev} before {next})")]
    UnsortedGrid { prev: f64, next: f64 },

    #[error("method 1 plans require N >= 4 (got {0})")]
    Method1Domain(u64),

    #[error("method 2 plans require N >= 2 (got {0})")]
    Method2Domain(u64),

    #[error("plan range requires N_min <= N_max (got {n_min} > {n_max})")]
    EmptyPlanRange { n_min: u64, n_max: u64 },

    #[error("scale s must be a positive integer (got 0)")]
    ZeroScale,

    #[error("scaled target s*N overflows 64 bits (s={s}, N={n})")]
    ScaleOverflow { s: u64, n: u64 },

    #[error("x_0 override {x0} is below the minimum admissible value {min}")]
    X0BelowMinimum { x0: f64, min: f64 },

    #[error("unit parameter {x} exceeds the admissible cap {cap} for this method and window")]
    XAboveCap { x: f64, cap: f64 },

    #[error("N={n} is outside the plan range [{n_min}, {n_max}]")]
    OutsidePlanRange { n: u64, n_min: u64, n_max: u64 },

    #[error("factoring requires N >= 2 (got {0})")]
    FactorDomain(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
