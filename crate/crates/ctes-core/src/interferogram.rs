//! Sampling grids over an observable window and recorded interferograms.
//!
//! An interferogram is the intensity curve `I(o_xi; x)` sampled over the
//! window `[o_min, o_max]` at a fixed unit parameter `x`; each sample equals
//! the kernel intensity at `xi = o_xi / x`. Rescaling by a target `N` (and an
//! optional scale `s`) maps the abscissa to trial-factor units
//! `xi_N = s*N*o_xi / x` without touching the recorded intensities.

use crate::curlicue::{ctes_intensity, CurlicueParams};
use crate::error::{Error, Result};

/// Refuse to materialize grids above this many points.
const MAX_GRID_POINTS: u64 = 1 << 26;

/// Relative slack used when deciding which integers fall inside a span.
/// Wide enough to absorb rounding in the span endpoints, far too narrow to
/// reach a neighbouring integer.
pub(crate) const SPAN_EPSILON: f64 = 1e-12;

/// The observable range `[o_min, o_max]` available for recording.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralWindow {
    o_min: f64,
    o_max: f64,
}

impl SpectralWindow {
    /// Requires `0 < o_min < o_max`; equal endpoints are rejected because a
    /// ratio of 1 breaks the geometric progression between runs.
    pub fn new(o_min: f64, o_max: f64) -> Result<Self> {
        if !(o_min.is_finite() && o_max.is_finite()) || o_min <= 0.0 || o_min >= o_max {
            return Err(Error::InvalidWindow { o_min, o_max });
        }
        Ok(Self { o_min, o_max })
    }

    pub fn o_min(&self) -> f64 {
        self.o_min
    }

    pub fn o_max(&self) -> f64 {
        self.o_max
    }

    /// Window ratio `c = o_max / o_min > 1`.
    pub fn ratio(&self) -> f64 {
        self.o_max / self.o_min
    }

    pub fn contains(&self, o_xi: f64) -> bool {
        (self.o_min..=self.o_max).contains(&o_xi)
    }
}

/// How candidate intensities are read off a recorded interferogram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SamplingMode {
    /// Evaluate integer trials through the exact integer-argument kernel.
    Direct,
    /// Read the nearest recorded sample.
    Sampled,
}

/// Grid density and read-out options.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingConfig {
    samples_per_unit: u32,
    snap_to_integers: bool,
    mode: SamplingMode,
    threshold: Option<f64>,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        Self {
            samples_per_unit: 32,
            snap_to_integers: true,
            mode: SamplingMode::Direct,
            threshold: None,
        }
    }
}

impl SamplingConfig {
    pub fn new(samples_per_unit: u32, snap_to_integers: bool, mode: SamplingMode) -> Result<Self> {
        if samples_per_unit < 2 {
            return Err(Error::SparseSampling(samples_per_unit));
        }
        Ok(Self {
            samples_per_unit,
            snap_to_integers,
            mode,
            threshold: None,
        })
    }

    pub fn with_mode(mut self, mode: SamplingMode) -> Self {
        self.mode = mode;
        self
    }

    /// Override the candidate-flagging threshold; by default the direct mode
    /// uses `1 - 1e-9` and the sampled mode `0.99`.
    pub fn with_threshold(mut self, threshold: f64) -> Self {
        self.threshold = Some(threshold);
        self
    }

    pub fn samples_per_unit(&self) -> u32 {
        self.samples_per_unit
    }

    pub fn snap_to_integers(&self) -> bool {
        self.snap_to_integers
    }

    pub fn mode(&self) -> SamplingMode {
        self.mode
    }

    pub fn threshold(&self) -> f64 {
        self.threshold.unwrap_or(match self.mode {
            SamplingMode::Direct => 1.0 - 1e-9,
            SamplingMode::Sampled => 0.99,
        })
    }
}

/// Which side of `sqrt(N)` a trial-factor scan targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialBand {
    /// Trial factors in `[1, sqrt(N)]`.
    Low,
    /// Trial factors in `[sqrt(N), N]`.
    High,
}

/// A conservative sampling step in `xi` for the given trial band.
///
/// The admissible maximum step is only known to lie in `(N^-2, 1)` for the
/// low band and `(N^-3/2, 1)` for the high band; this returns ten times the
/// lower bound, capped at 1/2 so the result stays strictly inside the
/// interval for every `N >= 2`.
pub fn safe_step(n: u64, band: TrialBand) -> Result<f64> {
    if n < 2 {
        return Err(Error::StepDomain(n));
    }
    let n = n as f64;
    let lower = match band {
        TrialBand::Low => n.powi(-2),
        TrialBand::High => n.powf(-1.5),
    };
    Ok((10.0 * lower).min(0.5))
}

/// Trial-factor abscissa `xi_{N,s} = s*N*o_xi / x` of an observable value.
///
/// All rescaling (views, CSV export) goes through this one expression so the
/// mapped values agree bit for bit everywhere.
pub fn rescaled_abscissa(n: u64, s: u64, x: f64, o_xi: f64) -> f64 {
    (s as f64 * n as f64) / x * o_xi
}

/// Build the `o_xi` sampling grid for an interferogram at unit parameter `x`.
///
/// Points are uniform in `xi_N = (N/x) * o_xi` at `samples_per_unit` per
/// unit, always including both window ends. With `snap_to_integers`, every
/// integer `ell` of `xi_N` inside the span gets a dedicated grid point at
/// `o_xi = ell * x / N`, which makes trial read-off exact in sampled mode.
pub fn build_grid(
    window: &SpectralWindow,
    x: f64,
    n: u64,
    cfg: &SamplingConfig,
) -> Result<Vec<f64>> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::NonPositiveX(x));
    }
    if n == 0 {
        return Err(Error::ZeroTarget);
    }
    let xi_lo = rescaled_abscissa(n, 1, x, window.o_min());
    let xi_hi = rescaled_abscissa(n, 1, x, window.o_max());
    let span = xi_hi - xi_lo;
    let usable = span.is_finite() && span > 0.0;
    if !usable {
        return Ok(Vec::new());
    }

    let needed = (span * f64::from(cfg.samples_per_unit())).ceil() as u128 + 1;
    if needed > u128::from(MAX_GRID_POINTS) {
        return Err(Error::GridTooLarge {
            needed,
            limit: MAX_GRID_POINTS,
        });
    }
    let count = (needed as usize).max(2);

    let mut grid = Vec::with_capacity(count + span as usize + 2);
    let width = window.o_max() - window.o_min();
    for k in 0..count {
        let o = if k == count - 1 {
            window.o_max()
        } else {
            window.o_min() + width * (k as f64 / (count - 1) as f64)
        };
        grid.push(o);
    }

    if cfg.snap_to_integers() {
        for ell in integers_in_span(xi_lo, xi_hi) {
            let o = ell as f64 * x / n as f64;
            if window.contains(o) {
                grid.push(o);
            }
        }
        grid.sort_by(|a, b| a.partial_cmp(b).expect("grid values are finite"));
        grid.dedup();
    }
    Ok(grid)
}

/// Integers `ell >= 1` inside `[lo, hi]`, with relative slack for endpoint
/// rounding (plan construction places boundaries exactly on trial factors).
pub(crate) fn integers_in_span(lo: f64, hi: f64) -> std::ops::RangeInclusive<u64> {
    let slack = |v: f64| SPAN_EPSILON * v.abs().max(1.0);
    let first = (lo - slack(lo)).ceil().max(1.0) as u64;
    let last = (hi + slack(hi)).floor().max(0.0) as u64;
    first..=last
}

/// A recorded intensity curve over the window at fixed `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Interferogram {
    x: f64,
    window: SpectralWindow,
    params: CurlicueParams,
    samples: Vec<(f64, f64)>,
}

impl Interferogram {
    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn window(&self) -> &SpectralWindow {
        &self.window
    }

    pub fn params(&self) -> &CurlicueParams {
        &self.params
    }

    /// Samples as `(o_xi, intensity)`, strictly increasing in `o_xi`.
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// View of this interferogram on the trial-factor axis `xi_N = N*o_xi/x`.
    pub fn rescale(&self, n: u64) -> Result<RescaledView> {
        self.rescale_scaled(n, 1)
    }

    /// View on the generalized axis `xi_{N,s} = s*N*o_xi/x`.
    pub fn rescale_scaled(&self, n: u64, s: u64) -> Result<RescaledView> {
        if n == 0 {
            return Err(Error::ZeroTarget);
        }
        if s == 0 {
            return Err(Error::ZeroScale);
        }
        s.checked_mul(n).ok_or(Error::ScaleOverflow { s, n })?;
        let samples = self
            .samples
            .iter()
            .map(|&(o_xi, intensity)| (rescaled_abscissa(n, s, self.x, o_xi), intensity))
            .collect();
        Ok(RescaledView {
            n,
            s,
            x: self.x,
            params: self.params,
            samples,
        })
    }
}

/// Record an interferogram over `grid` at unit parameter `x`.
///
/// Each intensity is `ctes_intensity(o_xi / x)`, the digital identity for
/// `|1/M * sum_m exp[2*pi*i*(m-1)^j * x / o_xi]|^2`.
pub fn record(
    params: &CurlicueParams,
    window: &SpectralWindow,
    x: f64,
    grid: &[f64],
) -> Result<Interferogram> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::NonPositiveX(x));
    }
    let mut samples = Vec::with_capacity(grid.len());
    let mut prev = f64::NEG_INFINITY;
    for &o_xi in grid {
        if o_xi <= 0.0 {
            return Err(Error::NonPositiveXi(o_xi));
        }
        if !window.contains(o_xi) {
            return Err(Error::GridOutsideWindow {
                value: o_xi,
                o_min: window.o_min(),
                o_max: window.o_max(),
            });
        }
        if o_xi <= prev {
            return Err(Error::UnsortedGrid {
                prev,
                next: o_xi,
            });
        }
        prev = o_xi;
        samples.push((o_xi, ctes_intensity(o_xi / x, params)?));
    }
    Ok(Interferogram {
        x,
        window: *window,
        params: *params,
        samples,
    })
}

/// An interferogram mapped to trial-factor units; intensities are shared
/// bit for bit with the source recording.
#[derive(Debug, Clone, PartialEq)]
pub struct RescaledView {
    n: u64,
    s: u64,
    x: f64,
    params: CurlicueParams,
    samples: Vec<(f64, f64)>,
}

impl RescaledView {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn scale(&self) -> u64 {
        self.s
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Kernel parameters of the source recording.
    pub fn params(&self) -> &CurlicueParams {
        &self.params
    }

    /// Samples as `(xi_N, intensity)` (or `(xi_{N,s}, intensity)` for s > 1).
    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    /// Abscissa range covered by the view, `None` when empty.
    pub fn span(&self) -> Option<(f64, f64)> {
        match (self.samples.first(), self.samples.last()) {
            (Some(&(lo, _)), Some(&(hi, _))) => Some((lo, hi)),
            _ => None,
        }
    }

    /// Intensity of the sample nearest to the given abscissa.
    pub fn nearest_intensity(&self, xi_n: f64) -> Option<f64> {
        if self.samples.is_empty() {
            return None;
        }
        let idx = self
            .samples
            .partition_point(|&(abscissa, _)| abscissa < xi_n)
            .min(self.samples.len() - 1);
        let mut best = idx;
        if idx > 0 && (self.samples[idx - 1].0 - xi_n).abs() < (self.samples[idx].0 - xi_n).abs() {
            best = idx - 1;
        }
        Some(self.samples[best].1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params() -> CurlicueParams {
        CurlicueParams::new(3, 2).unwrap()
    }

    fn window(o_min: f64, o_max: f64) -> SpectralWindow {
        SpectralWindow::new(o_min, o_max).unwrap()
    }

    #[test]
    fn window_rejects_degenerate_ranges() {
        assert!(SpectralWindow::new(1.0, 1.0).is_err());
        assert!(SpectralWindow::new(2.0, 1.0).is_err());
        assert!(SpectralWindow::new(0.0, 1.0).is_err());
        assert!(SpectralWindow::new(-1.0, 1.0).is_err());
        assert_eq!(window(1.0, 2.0).ratio(), 2.0);
    }

    #[test]
    fn sampling_config_rejects_sparse_grids() {
        assert!(SamplingConfig::new(1, true, SamplingMode::Direct).is_err());
        assert!(SamplingConfig::new(2, true, SamplingMode::Direct).is_ok());
    }

    #[test]
    fn default_thresholds_per_mode() {
        let direct = SamplingConfig::default();
        assert_eq!(direct.threshold(), 1.0 - 1e-9);
        let sampled = SamplingConfig::default().with_mode(SamplingMode::Sampled);
        assert_eq!(sampled.threshold(), 0.99);
        assert_eq!(direct.with_threshold(0.5).threshold(), 0.5);
    }

    #[test]
    fn safe_step_examples() {
        assert_eq!(safe_step(100, TrialBand::Low).unwrap(), 1e-3);
        assert!((safe_step(100, TrialBand::High).unwrap() - 1e-2).abs() < 1e-17);
        let clamped = safe_step(2, TrialBand::Low).unwrap();
        assert!(clamped > 0.25 && clamped < 1.0, "clamped = {clamped}");
        assert!(safe_step(1, TrialBand::Low).is_err());
    }

    #[test]
    fn safe_step_stays_inside_bounds() {
        for n in 2..500u64 {
            let lo = safe_step(n, TrialBand::Low).unwrap();
            let hi = safe_step(n, TrialBand::High).unwrap();
            let nf = n as f64;
            assert!(lo > nf.powi(-2) && lo < 1.0, "n={n}");
            assert!(hi > nf.powf(-1.5) && hi < 1.0, "n={n}");
        }
    }

    #[test]
    fn grid_spans_eight_to_sixteen_for_paper_example() {
        // x = 8 * o_min with c = 2 puts xi_N for N = 64 on [8, 16]
        let w = window(1.0, 2.0);
        let cfg = SamplingConfig::default();
        let grid = build_grid(&w, 8.0, 64, &cfg).unwrap();
        let lo = rescaled_abscissa(64, 1, 8.0, *grid.first().unwrap());
        let hi = rescaled_abscissa(64, 1, 8.0, *grid.last().unwrap());
        assert_eq!((lo, hi), (8.0, 16.0));
        // every integer of xi_N in between has an exact snapped point
        for ell in 8..=16u64 {
            let target = ell as f64 * 8.0 / 64.0;
            assert!(grid.contains(&target), "missing snapped point for {ell}");
        }
    }

    #[test]
    fn grid_minimal_density() {
        let w = window(1.0, 2.0);
        let cfg = SamplingConfig::new(2, true, SamplingMode::Direct).unwrap();
        // x = 2, N = 2: xi_N span [1, 2], one unit, so at least 3 uniform points
        let grid = build_grid(&w, 2.0, 2, &cfg).unwrap();
        assert!(grid.len() >= 3);
        assert_eq!(*grid.first().unwrap(), 1.0);
        assert_eq!(*grid.last().unwrap(), 2.0);
        // snapped points for xi_N = 1 and 2 are the window ends themselves
        assert!(grid.contains(&1.0) && grid.contains(&2.0));
    }

    #[test]
    fn grid_rejects_bad_inputs() {
        let w = window(1.0, 2.0);
        let cfg = SamplingConfig::default();
        assert!(build_grid(&w, 0.0, 4, &cfg).is_err());
        assert!(build_grid(&w, -1.0, 4, &cfg).is_err());
        assert!(build_grid(&w, 1.0, 0, &cfg).is_err());
    }

    #[test]
    fn record_unit_intensity_at_reciprocal_integers() {
        let w = window(1.0, 2.0);
        let x = 12.0;
        // o_xi = x / k inside the window for k = 6..12
        let grid: Vec<f64> = (6..=12).rev().map(|k| x / f64::from(k)).collect();
        let ig = record(&params(), &w, x, &grid).unwrap();
        for &(o, v) in ig.samples() {
            assert!((v - 1.0).abs() < 1e-12, "o={o} v={v}");
        }
    }

    #[test]
    fn record_matches_kernel_bitwise() {
        let w = window(1.0, 2.0);
        let cfg = SamplingConfig::default();
        let grid = build_grid(&w, 8.0, 64, &cfg).unwrap();
        let ig = record(&params(), &w, 8.0, &grid).unwrap();
        for &(o, v) in ig.samples() {
            let direct = ctes_intensity(o / 8.0, &params()).unwrap();
            assert_eq!(v.to_bits(), direct.to_bits());
        }
    }

    #[test]
    fn record_rejects_invalid_grids() {
        let w = window(1.0, 2.0);
        assert!(record(&params(), &w, 1.0, &[0.0]).is_err());
        assert!(record(&params(), &w, 1.0, &[0.5]).is_err());
        assert!(record(&params(), &w, 1.0, &[1.5, 1.2]).is_err());
        assert!(record(&params(), &w, -1.0, &[1.5]).is_err());
    }

    #[test]
    fn rescale_examples() {
        let w = window(1.0, 2.0);
        let x = 15.0; // x = N * o_min
        let ig = record(&params(), &w, x, &[1.0, 1.5, 2.0]).unwrap();
        let view = ig.rescale(15).unwrap();
        assert_eq!(view.samples()[0].0, 1.0);
        // N = 15, x = 8 * o_min: span [15/8, 15/4]
        let ig = record(&params(), &w, 8.0, &[1.0, 2.0]).unwrap();
        let view = ig.rescale(15).unwrap();
        assert_eq!(view.span().unwrap(), (15.0 / 8.0, 15.0 / 4.0));
    }

    #[test]
    fn rescale_keeps_intensities_bitwise() {
        let w = window(1.0, 2.0);
        let cfg = SamplingConfig::default();
        let grid = build_grid(&w, 8.0, 63, &cfg).unwrap();
        let ig = record(&params(), &w, 8.0, &grid).unwrap();
        let view = ig.rescale_scaled(63, 3).unwrap();
        assert_eq!(view.samples().len(), ig.samples().len());
        for (&(o, a), &(xi, b)) in ig.samples().iter().zip(view.samples()) {
            assert_eq!(a.to_bits(), b.to_bits());
            assert_eq!(xi.to_bits(), rescaled_abscissa(63, 3, 8.0, o).to_bits());
        }
    }

    #[test]
    fn snapped_divisors_reach_unit_intensity() {
        // window covering xi_N in [330.84, 661.68] for N = 111547
        let n = 111547u64;
        let w = window(1.0, 2.0);
        let x = n as f64 / 330.84;
        let cfg = SamplingConfig::default();
        let grid = build_grid(&w, x, n, &cfg).unwrap();
        let view = record(&params(), &w, x, &grid).unwrap().rescale(n).unwrap();
        for ell in [331u64, 337] {
            let v = view.nearest_intensity(ell as f64).unwrap();
            assert!((v - 1.0).abs() < 1e-9, "ell={ell} v={v}");
        }
    }

    #[test]
    fn nearest_intensity_picks_closest_sample() {
        let w = window(1.0, 2.0);
        let ig = record(&params(), &w, 4.0, &[1.0, 1.5, 2.0]).unwrap();
        let view = ig.rescale(4).unwrap(); // abscissas 1.0, 1.5, 2.0
        assert_eq!(view.nearest_intensity(1.6).unwrap(), view.samples()[1].1);
        assert_eq!(view.nearest_intensity(0.2).unwrap(), view.samples()[0].1);
        assert_eq!(view.nearest_intensity(9.0).unwrap(), view.samples()[2].1);
    }

    proptest! {
        #[test]
        fn grids_are_strictly_increasing_and_cover_the_window(
            o_min in 0.25..4.0f64,
            ratio in 1.05..4.0f64,
            x in 0.5..40.0f64,
            n in 1u64..500,
            spu in 2u32..16,
            snap in proptest::bool::ANY,
        ) {
            let w = window(o_min, o_min * ratio);
            let cfg = SamplingConfig::new(spu, snap, SamplingMode::Direct).unwrap();
            let grid = build_grid(&w, x, n, &cfg).unwrap();
            prop_assert!(grid.len() >= 2);
            prop_assert_eq!(*grid.first().unwrap(), w.o_min());
            prop_assert_eq!(*grid.last().unwrap(), w.o_max());
            for pair in grid.windows(2) {
                prop_assert!(pair[0] < pair[1]);
            }
        }
    }
}
