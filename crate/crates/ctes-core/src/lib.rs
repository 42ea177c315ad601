//! Factoring by interference of continuous truncated exponential sums.
//!
//! The intensity of a truncated exponential sum driven through the hyperbolic
//! map `1/xi` peaks at the constructive-interference ceiling exactly where
//! `1/xi` is an integer. Rescaled by a target `N`, those peaks land on the
//! divisors of `N`, so factoring reduces to reading interference maxima at
//! integer trial points. This crate provides the four stages of that
//! pipeline:
//!
//! 1. [`curlicue`]: the sum kernel, with complex amplitude, intensity,
//!    hyperbolic rescaling, and an exact integer-argument path for trial
//!    points.
//! 2. [`interferogram`]: sampling grids over an observable window and
//!    recorded intensity curves with trial-factor views.
//! 3. [`planner`]: the geometric sequence of unit parameters whose coverage
//!    intervals tile a trial range, for one target or a whole range of them,
//!    with run counts logarithmic in `sqrt(N)`.
//! 4. [`extractor`]: the end-to-end pipeline emitting a verified
//!    [`FactorReport`](extractor::FactorReport).
//!
//! ```
//! use ctes_core::{
//!     CurlicueParams, Method, SamplingConfig, SpectralWindow,
//!     extractor::factor,
//! };
//!
//! let window = SpectralWindow::new(1.0, 2.0).unwrap();
//! let params = CurlicueParams::new(3, 2).unwrap();
//! let report = factor(
//!     111547,
//!     &window,
//!     Method::Method1,
//!     1,
//!     &params,
//!     &SamplingConfig::default(),
//! )
//! .unwrap();
//! assert_eq!(report.confirmed_factors, vec![331, 337]);
//! ```

pub mod curlicue;
mod error;
pub mod extractor;
pub mod interferogram;
pub mod planner;

pub use curlicue::{
    ctes_intensity, curlicue_amplitude, curlicue_intensity, exact_intensity_at_trial, hyperbolic,
    CurlicueParams, PhaseArgument,
};
pub use error::{Error, Result};
pub use extractor::{Candidate, FactorReport, FactorRun, Verdict};
pub use interferogram::{
    Interferogram, RescaledView, SamplingConfig, SamplingMode, SpectralWindow, TrialBand,
};
pub use planner::{CoverageInterval, InterferogramPlan, Method, PlanOptions};
