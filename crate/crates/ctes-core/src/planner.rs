//! Planning the interferogram runs needed to cover all trial factors.
//!
//! A single recording at unit parameter `x` exposes trial factors
//! `xi_N in [(N/x)*o_min, (N/x)*o_max]`, a window of fixed ratio
//! `c = o_max/o_min`. Covering a whole trial range therefore takes a
//! geometric sequence `x_{i+1} = x_i / c`, whose consecutive coverage
//! intervals abut exactly. Method 1 targets `[3, sqrt(N)]`, method 2
//! `[sqrt(N), N]`; in both cases the run count grows with `log_c(sqrt(N))`,
//! i.e. polynomially in the bit length of `N`.

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::interferogram::SpectralWindow;

/// Coverage strategy: which trial-factor range a plan must tile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Check trial factors in `[3, sqrt(N)]` (2 is handled by stripping).
    Method1,
    /// Check trial factors in `[sqrt(N), N]`.
    Method2,
}

impl Method {
    /// Trial-factor range this method must cover for a target `n`.
    pub fn trial_range(&self, n: u64) -> (f64, f64) {
        let root = (n as f64).sqrt();
        match self {
            Method::Method1 => (3.0, root),
            Method::Method2 => (root, n as f64),
        }
    }

    pub fn index(&self) -> u8 {
        match self {
            Method::Method1 => 1,
            Method::Method2 => 2,
        }
    }
}

impl Serialize for Method {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_u8(self.index())
    }
}

/// What a single interferogram can factor, as a function of the chosen `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleInterferogramPlan {
    method: Method,
    window: SpectralWindow,
    x_cap: f64,
    unique_n: Option<u64>,
}

impl SingleInterferogramPlan {
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn window(&self) -> &SpectralWindow {
        &self.window
    }

    /// Largest admissible unit parameter `x` for this method and window.
    pub fn x_cap(&self) -> f64 {
        self.x_cap
    }

    /// For method 1 with an integer window ratio: the one integer factorable
    /// at `x = x_cap`, `N = 9 c^2`.
    pub fn unique_n(&self) -> Option<u64> {
        self.unique_n
    }

    /// Range `[N_min, N_max]` of integers factorable at unit parameter `x`,
    /// or an infeasibility error when `x` exceeds the cap.
    pub fn n_range_at(&self, x: f64) -> Result<(u64, u64)> {
        if !x.is_finite() || x <= 0.0 {
            return Err(Error::NonPositiveX(x));
        }
        if x > self.x_cap {
            return Err(Error::XAboveCap {
                x,
                cap: self.x_cap,
            });
        }
        let o_min = self.window.o_min();
        let o_max = self.window.o_max();
        Ok(match self.method {
            Method::Method1 => {
                let n_max = (3.0 * x / o_min).floor() as u64;
                let n_min = (x * x / (o_max * o_max)).ceil() as u64;
                (n_min.max(1), n_max)
            }
            Method::Method2 => (1, (x * x / (o_min * o_min)).floor() as u64),
        })
    }
}

/// Single-interferogram reach of method 1: `x <= 3 * o_max^2 / o_min`.
pub fn single_plan_method1(window: &SpectralWindow) -> SingleInterferogramPlan {
    let x_cap = 3.0 * window.o_max() * window.o_max() / window.o_min();
    let unique_n = integer_ratio(window).map(|c| 9 * c * c);
    SingleInterferogramPlan {
        method: Method::Method1,
        window: *window,
        x_cap,
        unique_n,
    }
}

/// Single-interferogram reach of method 2: `x <= o_max`, covering
/// `N in [1, floor(c^2)]` at the cap.
pub fn single_plan_method2(window: &SpectralWindow) -> SingleInterferogramPlan {
    SingleInterferogramPlan {
        method: Method::Method2,
        window: *window,
        x_cap: window.o_max(),
        unique_n: None,
    }
}

fn integer_ratio(window: &SpectralWindow) -> Option<u64> {
    let c = window.ratio();
    let rounded = c.round();
    ((c - rounded).abs() <= 1e-9 * c && rounded >= 2.0).then_some(rounded as u64)
}

/// Optional knobs for sequence planning.
#[derive(Debug, Clone, Copy, Default)]
pub struct PlanOptions {
    /// Rescaling product of primes; 1 disables the generalized scaling.
    pub s: u64,
    /// Accept a larger-than-minimal first unit parameter.
    pub x0_override: Option<f64>,
    /// Physical ceiling on the unit parameter; exceeding it marks the plan
    /// infeasible and reports the largest reachable target instead.
    pub x_max: Option<f64>,
}

impl PlanOptions {
    pub fn with_scale(s: u64) -> Self {
        Self {
            s,
            ..Self::default()
        }
    }
}

/// Interval of trial factors checkable by one interferogram of a plan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageInterval {
    /// Target integer the interval was computed for.
    pub n: u64,
    /// Index of the interferogram within the plan.
    pub index: usize,
    /// Lower trial-factor bound `s*N*o_min / x_i`.
    pub lo: f64,
    /// Upper trial-factor bound `s*N*o_max / x_i`.
    pub hi: f64,
}

/// A geometric sequence of unit parameters covering a range of targets.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferogramPlan {
    method: Method,
    window: SpectralWindow,
    s: u64,
    x_values: Vec<f64>,
    n_min: u64,
    n_max: u64,
    x_max: Option<f64>,
    feasible: bool,
    feasible_n_max: Option<u64>,
}

impl InterferogramPlan {
    pub fn method(&self) -> Method {
        self.method
    }

    pub fn window(&self) -> &SpectralWindow {
        &self.window
    }

    pub fn scale(&self) -> u64 {
        self.s
    }

    /// Unit parameters `x_0 > x_1 > ... > x_{n-1}` with `x_{i+1} = x_i / c`.
    pub fn x_values(&self) -> &[f64] {
        &self.x_values
    }

    /// Number of interferogram runs.
    pub fn run_count(&self) -> usize {
        self.x_values.len()
    }

    /// Range of factorable targets `[N_min, N_max]`.
    pub fn n_range(&self) -> (u64, u64) {
        (self.n_min, self.n_max)
    }

    pub fn is_feasible(&self) -> bool {
        self.feasible
    }

    /// Largest target whose plan would fit under the `x_max` ceiling, when
    /// the requested one does not.
    pub fn feasible_n_max(&self) -> Option<u64> {
        self.feasible_n_max
    }

    pub fn x_max(&self) -> Option<f64> {
        self.x_max
    }

    /// Trial-factor intervals covered by each run for a target in range.
    /// Consecutive intervals abut exactly and their union contains the
    /// method's full trial range for `n`.
    pub fn coverage_intervals(&self, n: u64) -> Result<Vec<CoverageInterval>> {
        if n < self.n_min || n > self.n_max {
            return Err(Error::OutsidePlanRange {
                n,
                n_min: self.n_min,
                n_max: self.n_max,
            });
        }
        let scaled = self.s as f64 * n as f64;
        Ok(self
            .x_values
            .iter()
            .enumerate()
            .map(|(index, &x)| CoverageInterval {
                n,
                index,
                lo: scaled * self.window.o_min() / x,
                hi: scaled * self.window.o_max() / x,
            })
            .collect())
    }
}

impl Serialize for InterferogramPlan {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let extra = usize::from(self.x_max.is_some()) + usize::from(!self.feasible);
        let mut state = serializer.serialize_struct("InterferogramPlan", 9 + extra)?;
        state.serialize_field("method", &self.method)?;
        state.serialize_field("s", &self.s)?;
        state.serialize_field("c", &self.window.ratio())?;
        state.serialize_field("o_min", &self.window.o_min())?;
        state.serialize_field("o_max", &self.window.o_max())?;
        state.serialize_field("x_values", &self.x_values)?;
        state.serialize_field("n", &self.run_count())?;
        state.serialize_field("N_min", &self.n_min)?;
        state.serialize_field("N_max", &self.n_max)?;
        if let Some(x_max) = self.x_max {
            state.serialize_field("x_max", &x_max)?;
        }
        if !self.feasible {
            state.serialize_field("feasible_N_max", &self.feasible_n_max)?;
        }
        state.end()
    }
}

/// Minimal plan for a single target: method 1 needs `N >= 4`, method 2
/// `N >= 2`.
pub fn sequence_plan_single(
    n: u64,
    window: &SpectralWindow,
    method: Method,
) -> Result<InterferogramPlan> {
    sequence_plan(n, n, window, method, &PlanOptions::default())
}

/// Minimal plan covering every target in `[n_min, n_max]`.
pub fn sequence_plan_range(
    n_min: u64,
    n_max: u64,
    window: &SpectralWindow,
    method: Method,
    s: u64,
) -> Result<InterferogramPlan> {
    sequence_plan(n_min, n_max, window, method, &PlanOptions::with_scale(s))
}

/// General plan constructor honouring scale, `x_0` override and `x_max`.
///
/// The first unit parameter defaults to the tight (minimal run count) value:
/// `x_0 = s*N_max*o_min/3` for method 1 and `x_0 = s*sqrt(N_max)*o_min` for
/// method 2. A larger admissible `x_0` may be supplied, in which case the run
/// count is recomputed so coverage still holds for the whole range.
pub fn sequence_plan(
    n_min: u64,
    n_max: u64,
    window: &SpectralWindow,
    method: Method,
    options: &PlanOptions,
) -> Result<InterferogramPlan> {
    if n_min > n_max {
        return Err(Error::EmptyPlanRange { n_min, n_max });
    }
    let s = if options.s == 0 { 1 } else { options.s };
    s.checked_mul(n_max).ok_or(Error::ScaleOverflow { s, n: n_max })?;
    match method {
        Method::Method1 if n_min < 4 => return Err(Error::Method1Domain(n_min)),
        Method::Method2 if n_max < 2 => return Err(Error::Method2Domain(n_max)),
        _ => {}
    }

    let o_min = window.o_min();
    let c = window.ratio();
    let scaled_max = s as f64 * n_max as f64;
    let x0_tight = match method {
        Method::Method1 => scaled_max * o_min / 3.0,
        Method::Method2 => (n_max as f64).sqrt() * s as f64 * o_min,
    };
    let x0 = match options.x0_override {
        Some(x0) if x0 < x0_tight => {
            return Err(Error::X0BelowMinimum {
                x0,
                min: x0_tight,
            })
        }
        Some(x0) => x0,
        None => x0_tight,
    };

    // Run count from the coverage condition at the worst-covered target:
    // method 1 needs c^n >= x_0 / (s * o_min * sqrt(N_min)), method 2 needs
    // c^n >= x_0 / (s * o_min).
    let ratio = match method {
        Method::Method1 => x0 / (s as f64 * o_min * (n_min as f64).sqrt()),
        Method::Method2 => x0 / (s as f64 * o_min),
    };
    let runs = ceil_log(ratio, c).max(1) as usize;

    let mut x_values = Vec::with_capacity(runs);
    let mut x = x0;
    for _ in 0..runs {
        x_values.push(x);
        x /= c;
    }

    let (feasible, feasible_n_max) = match options.x_max {
        Some(x_max) if x0 > x_max => {
            let reach = match method {
                Method::Method1 => (3.0 * x_max / (s as f64 * o_min)).floor(),
                Method::Method2 => {
                    let root = x_max / (s as f64 * o_min);
                    (root * root).floor()
                }
            };
            (false, Some(reach.max(0.0) as u64))
        }
        _ => (true, None),
    };

    Ok(InterferogramPlan {
        method,
        window: *window,
        s,
        x_values,
        n_min,
        n_max,
        x_max: options.x_max,
        feasible,
        feasible_n_max,
    })
}

/// `ceil(log_c(value))` with near-integer snapping.
///
/// Exactly geometric inputs (integer window ratios, power-of-two targets)
/// must not gain a spurious extra run from logarithm rounding, so ratios
/// within 1e-9 of an integer power are treated as exact.
fn ceil_log(value: f64, base: f64) -> i64 {
    if value <= 1.0 {
        return 0;
    }
    let t = value.ln() / base.ln();
    let rounded = t.round();
    if (t - rounded).abs() < 1e-9 {
        rounded as i64
    } else {
        t.ceil() as i64
    }
}
