//! End-to-end factor extraction from recorded interferograms.
//!
//! The pipeline plans a run sequence, records each interferogram, rescales
//! it to trial-factor units, reads the integer trial points, and verifies
//! every threshold-passing candidate by one exact division. Interference
//! generates the candidates; division makes the confirmed set unconditionally
//! sound. Method 1 strips powers of two first, so a complete scan of
//! `[3, sqrt(N')]` without a hit proves the odd remainder prime.

use serde::Serialize;

use crate::curlicue::{exact_intensity_at_trial, CurlicueParams};
use crate::error::{Error, Result};
use crate::interferogram::{
    build_grid, integers_in_span, record, Interferogram, RescaledView, SamplingConfig,
    SamplingMode, SpectralWindow,
};
use crate::planner::{sequence_plan, InterferogramPlan, Method, PlanOptions};

/// Interferogram index recorded for factors reported by the scale pre-check,
/// which needs no interferogram at all.
pub const PRE_CHECK_INDEX: i64 = -1;

/// Verdict attached to an integer trial point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Divides the target; a genuine factor.
    Factor,
    /// Below threshold, or a threshold false positive refuted by division.
    NonFactor,
    /// Divides `s*N` but not `N`; an artifact of the generalized rescaling.
    SArtifact,
}

/// An integer trial point read off a rescaled interferogram.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    /// Trial factor: the integer value of `xi_N` (or `xi_{N,s}`).
    pub ell: u64,
    /// Interference intensity at the trial point, in [0, 1].
    pub intensity: f64,
    /// Which interferogram exposed the trial (`PRE_CHECK_INDEX` for scale
    /// pre-check entries).
    #[serde(rename = "interferogram")]
    pub interferogram_index: i64,
    pub verdict: Verdict,
}

impl Candidate {
    /// For an `SArtifact`, the divisor of `N` hiding under the scale:
    /// `ell / gcd(ell, s)` when that is a nontrivial value.
    pub fn recovered_divisor(&self, s: u64) -> Option<u64> {
        if self.verdict != Verdict::SArtifact {
            return None;
        }
        let g = gcd(self.ell, s);
        (g > 1 && self.ell / g > 1).then(|| self.ell / g)
    }
}

/// Outcome of one factoring run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorReport {
    #[serde(rename = "N")]
    pub n: u64,
    pub method: Method,
    pub s: u64,
    /// Powers of two removed before planning (method 1 only).
    pub stripped_twos: u32,
    /// Whether the recorded runs tiled the full trial range.
    pub complete: bool,
    pub candidates: Vec<Candidate>,
    /// Every verified divisor found, sorted ascending.
    pub confirmed_factors: Vec<u64>,
    /// Set when a complete method-1 scan found no divisor of the 2-stripped
    /// remainder: that remainder is prime by the trial-factor bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_remainder: Option<u64>,
    /// Largest target reachable under the plan's `x_max` ceiling, reported
    /// when the requested one was not.
    #[serde(rename = "feasible_N_max", skip_serializing_if = "Option::is_none")]
    pub feasible_n_max: Option<u64>,
}

/// A factoring run together with the recordings that produced it, for
/// plotting and inspection.
#[derive(Debug, Clone, PartialEq)]
pub struct FactorRun {
    pub report: FactorReport,
    pub interferograms: Vec<Interferogram>,
    pub views: Vec<RescaledView>,
}

/// Read every integer trial point visible in a rescaled view.
///
/// Trivial trials (`ell <= 1`, `ell = N`, `ell = s*N`) are skipped. In direct
/// mode the intensity comes from the exact integer-argument kernel; in
/// sampled mode from the nearest recorded sample. Verdicts are provisional
/// (`NonFactor`) until `classify` has checked divisibility.
pub fn candidate_trials(view: &RescaledView, cfg: &SamplingConfig) -> Vec<Candidate> {
    let Some((lo, hi)) = view.span() else {
        return Vec::new();
    };
    let n = view.n();
    let scaled = view
        .scale()
        .checked_mul(n)
        .expect("validated at view construction");
    let mut out = Vec::new();
    for ell in integers_in_span(lo, hi) {
        if ell <= 1 || ell == n || ell == scaled {
            continue;
        }
        let intensity = match cfg.mode() {
            SamplingMode::Direct => exact_intensity_at_trial(scaled, ell, view.params())
                .expect("ell >= 2 and scaled >= 1 are in domain"),
            SamplingMode::Sampled => view
                .nearest_intensity(ell as f64)
                .expect("span implies at least one sample"),
        };
        out.push(Candidate {
            ell,
            intensity,
            interferogram_index: 0,
            verdict: Verdict::NonFactor,
        });
    }
    out
}

/// Verify flagged candidates by exact division and assign verdicts.
///
/// A flagged trial dividing `N` is a factor (trivial divisors excluded);
/// one dividing `s*N` through a common factor with `s` is a scale artifact;
/// anything else stays a non-factor. Primes composing `s` that divide `N`
/// are reported as factors up front, without needing any interferogram.
pub fn classify(n: u64, s: u64, raw: Vec<Candidate>, threshold: f64) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = raw
        .into_iter()
        .map(|mut cand| {
            cand.verdict = if cand.intensity >= threshold {
                verdict_for(n, s, cand.ell)
            } else {
                Verdict::NonFactor
            };
            cand
        })
        .collect();
    if s > 1 {
        for p in prime_factors(s) {
            if p != n && n.is_multiple_of(p) && !out.iter().any(|c| c.ell == p) {
                out.push(Candidate {
                    ell: p,
                    intensity: 1.0,
                    interferogram_index: PRE_CHECK_INDEX,
                    verdict: Verdict::Factor,
                });
            }
        }
    }
    out
}

fn verdict_for(n: u64, s: u64, ell: u64) -> Verdict {
    if ell != 1 && ell != n && n.is_multiple_of(ell) {
        Verdict::Factor
    } else if s > 1
        && gcd(ell, s) > 1
        && (u128::from(s) * u128::from(n)) % u128::from(ell) == 0
    {
        Verdict::SArtifact
    } else {
        Verdict::NonFactor
    }
}

/// All integers in `[lo, hi]` dividing `n`, by trial division. This is the
/// independent oracle the interference pipeline is checked against.
pub fn oracle_divisors(n: u64, lo: f64, hi: f64) -> Vec<u64> {
    if n == 0 || hi < 1.0 || hi < lo {
        return Vec::new();
    }
    let first = lo.ceil().max(1.0) as u64;
    let last = hi.floor().min(n as f64) as u64;
    (first..=last).filter(|ell| n.is_multiple_of(*ell)).collect()
}

/// Factor `n` with a freshly planned minimal run sequence.
pub fn factor(
    n: u64,
    window: &SpectralWindow,
    method: Method,
    s: u64,
    params: &CurlicueParams,
    cfg: &SamplingConfig,
) -> Result<FactorReport> {
    factor_run(n, window, method, s, params, cfg).map(|run| run.report)
}

/// As [`factor`], keeping the recorded interferograms and views.
pub fn factor_run(
    n: u64,
    window: &SpectralWindow,
    method: Method,
    s: u64,
    params: &CurlicueParams,
    cfg: &SamplingConfig,
) -> Result<FactorRun> {
    if n < 2 {
        return Err(Error::FactorDomain(n));
    }
    if s == 0 {
        return Err(Error::ZeroScale);
    }
    let (stripped, remainder) = strip_twos(n, method);
    if method == Method::Method1 && remainder < 9 {
        // Trial range [3, sqrt(remainder)] is empty: nothing to record.
        return Ok(stripped_only_run(n, method, s, stripped, remainder));
    }
    let plan = sequence_plan(
        remainder,
        remainder,
        window,
        method,
        &PlanOptions::with_scale(s),
    )?;
    run_plan(n, stripped, remainder, &plan, params, cfg)
}

/// Factor `n` using an existing (possibly shared, range-wide) plan.
pub fn factor_with_plan(
    n: u64,
    plan: &InterferogramPlan,
    params: &CurlicueParams,
    cfg: &SamplingConfig,
) -> Result<FactorReport> {
    factor_run_with_plan(n, plan, params, cfg).map(|run| run.report)
}

/// As [`factor_with_plan`], keeping the recordings.
pub fn factor_run_with_plan(
    n: u64,
    plan: &InterferogramPlan,
    params: &CurlicueParams,
    cfg: &SamplingConfig,
) -> Result<FactorRun> {
    if n < 2 {
        return Err(Error::FactorDomain(n));
    }
    let (stripped, remainder) = strip_twos(n, plan.method());
    if plan.method() == Method::Method1 && remainder < 9 {
        return Ok(stripped_only_run(
            n,
            plan.method(),
            plan.scale(),
            stripped,
            remainder,
        ));
    }
    run_plan(n, stripped, remainder, plan, params, cfg)
}

fn strip_twos(n: u64, method: Method) -> (u32, u64) {
    match method {
        Method::Method1 => {
            let stripped = n.trailing_zeros();
            (stripped, n >> stripped)
        }
        Method::Method2 => (0, n),
    }
}

fn stripped_only_run(n: u64, method: Method, s: u64, stripped: u32, remainder: u64) -> FactorRun {
    FactorRun {
        report: FactorReport {
            n,
            method,
            s,
            stripped_twos: stripped,
            complete: true,
            candidates: Vec::new(),
            confirmed_factors: if stripped > 0 { vec![2] } else { Vec::new() },
            prime_remainder: (remainder > 1).then_some(remainder),
            feasible_n_max: None,
        },
        interferograms: Vec::new(),
        views: Vec::new(),
    }
}

fn run_plan(
    n: u64,
    stripped: u32,
    remainder: u64,
    plan: &InterferogramPlan,
    params: &CurlicueParams,
    cfg: &SamplingConfig,
) -> Result<FactorRun> {
    let method = plan.method();
    let s = plan.scale();
    if !plan.is_feasible() {
        return Ok(FactorRun {
            report: FactorReport {
                n,
                method,
                s,
                stripped_twos: stripped,
                complete: false,
                candidates: Vec::new(),
                confirmed_factors: if stripped > 0 { vec![2] } else { Vec::new() },
                prime_remainder: None,
                feasible_n_max: plan.feasible_n_max(),
            },
            interferograms: Vec::new(),
            views: Vec::new(),
        });
    }
    let scaled = s
        .checked_mul(remainder)
        .ok_or(Error::ScaleOverflow { s, n: remainder })?;

    let mut interferograms = Vec::with_capacity(plan.run_count());
    let mut views = Vec::with_capacity(plan.run_count());
    let mut candidates = Vec::new();
    for (index, &x) in plan.x_values().iter().enumerate() {
        let grid = build_grid(plan.window(), x, scaled, cfg)?;
        let ig = record(params, plan.window(), x, &grid)?;
        let view = ig.rescale_scaled(remainder, s)?;
        for mut cand in candidate_trials(&view, cfg) {
            cand.interferogram_index = index as i64;
            candidates.push(cand);
        }
        interferograms.push(ig);
        views.push(view);
    }

    // A trial on an exact interval boundary is visible in two adjacent
    // recordings; keep the earlier one.
    candidates.sort_by_key(|c| (c.ell, c.interferogram_index));
    candidates.dedup_by_key(|c| c.ell);
    candidates.sort_by_key(|c| (c.interferogram_index, c.ell));
    let candidates = classify(remainder, s, candidates, cfg.threshold());

    let mut confirmed: Vec<u64> = candidates
        .iter()
        .filter(|c| c.verdict == Verdict::Factor)
        .map(|c| c.ell)
        .collect();
    if stripped > 0 {
        confirmed.push(2);
    }
    confirmed.sort_unstable();
    confirmed.dedup();

    let complete = covers_trial_range(plan, remainder)?;
    let prime_remainder = if method == Method::Method1
        && complete
        && remainder > 1
        && !confirmed.iter().any(|&f| {
            f >= 3 && (f as f64) <= (remainder as f64).sqrt() * (1.0 + 1e-12)
        }) {
        Some(remainder)
    } else {
        None
    };

    Ok(FactorRun {
        report: FactorReport {
            n,
            method,
            s,
            stripped_twos: stripped,
            complete,
            candidates,
            confirmed_factors: confirmed,
            prime_remainder,
            feasible_n_max: None,
        },
        interferograms,
        views,
    })
}

fn covers_trial_range(plan: &InterferogramPlan, n: u64) -> Result<bool> {
    let intervals = plan.coverage_intervals(n)?;
    let (lo, hi) = plan.method().trial_range(n);
    if hi < lo {
        return Ok(true);
    }
    let Some(first) = intervals.first() else {
        return Ok(false);
    };
    let mut reach = first.lo;
    if reach > lo * (1.0 + 1e-9) {
        return Ok(false);
    }
    for interval in &intervals {
        if interval.lo > reach * (1.0 + 1e-9) {
            return Ok(false);
        }
        reach = reach.max(interval.hi);
    }
    Ok(reach >= hi * (1.0 - 1e-9))
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Distinct prime factors of a small scale value, by trial division.
fn prime_factors(mut s: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    let mut p = 2u64;
    while p * p <= s {
        if s.is_multiple_of(p) {
            primes.push(p);
            while s.is_multiple_of(p) {
                s /= p;
            }
        }
        p += 1;
    }
    if s > 1 {
        primes.push(s);
    }
    primes
}
