//! Weight sequences (positive reals indexed by 1, 2, 3, ...) and the
//! truncated criteria built on them: membership in the normalized
//! non-increasing class, regularity, essential monotonicity, the
//! ratio-growth property, and the prefix-ratio criterion that decides the
//! factorization property of the associated Marcinkiewicz space.
//!
//! Built-in families carry closed-form tail limits (for example
//! lim_k s_k / s_{kn}); criteria use them to extrapolate past the
//! truncation.  Table-backed weights never extrapolate, and their verdicts
//! degrade to one-sided or inconclusive statements accordingly.

use crate::report::{banded_verdict, CriterionReport, Method, Truncation, Verdict};
use std::fmt;
use std::sync::{Arc, Mutex};
use thiserror::Error;

/// Indices are probed this far when a constructor must check positivity or
/// strict increase of a lazily evaluated family.
const CONSTRUCTION_PROBE: u64 = 512;

/// Harmonic numbers are summed exactly up to here and continued by the
/// Euler-Maclaurin expansion beyond (error < 1e-18 at the switch point).
const HARMONIC_EXACT_LIMIT: u64 = 65_536;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("weight term at index {index} is not strictly positive ({value})")]
    NonPositiveTerm { index: u64, value: f64 },
    #[error("sequence is not strictly increasing at index {index} ({prev} -> {next})")]
    NotStrictlyIncreasing { index: u64, prev: f64, next: f64 },
    #[error("weight table is empty")]
    EmptyTable,
    #[error("invalid weight parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown weight literal `{0}`")]
    BadLiteral(String),
    #[error("cannot read weight file: {0}")]
    Io(String),
}

#[derive(Clone)]
enum Family {
    /// n -> n^theta
    Power { theta: f64 },
    /// n -> 1 + 1/2 + ... + 1/n
    Harmonic,
    /// n -> 2 - 2^(1-n)
    Geometric,
    /// j -> j^(-a)
    PowerDeriv { a: f64 },
    /// j -> 2^(1-j); the exact difference sequence of the geometric
    /// primitive, kept in closed form because the subtraction
    /// (2 - 2^(1-n)) - (2 - 2^(2-n)) collapses to 0 in floats from n = 55
    GeometricDeriv,
    Table(Arc<Vec<f64>>),
    /// prefix sums of the inner weight
    PrefixSums(Arc<Weight>),
    /// first differences of the inner weight (term 1 is the inner value itself)
    Differences(Arc<Weight>),
    /// j -> 1 / inner(j)
    Reciprocal(Arc<Weight>),
    /// n -> inner(n) / n
    OverIndex(Arc<Weight>),
}

/// A positive sequence used as a weight; the same type serves for a
/// non-increasing weight, its primitive, or any positive evaluator.
#[derive(Clone)]
pub struct Weight {
    family: Family,
    /// cumulative cache for the sum-backed families (write-once memo)
    sums: Arc<Mutex<Vec<f64>>>,
}

fn powx(n: u64, e: f64) -> f64 {
    let x = n as f64;
    if e == 0.0 {
        1.0
    } else if e == 1.0 {
        x
    } else if e == -1.0 {
        1.0 / x
    } else if e == 2.0 {
        x * x
    } else if e == 0.5 {
        x.sqrt()
    } else if e == -0.5 {
        1.0 / x.sqrt()
    } else {
        x.powf(e)
    }
}

fn harmonic_tail(n: u64) -> f64 {
    let x = n as f64;
    let x2 = x * x;
    x.ln() + EULER_GAMMA + 1.0 / (2.0 * x) - 1.0 / (12.0 * x2) + 1.0 / (120.0 * x2 * x2)
}

impl Weight {
    fn from_family(family: Family) -> Self {
        Weight {
            family,
            sums: Arc::new(Mutex::new(Vec::new())),
        }
    }

    /// s_n = n^theta.
    pub fn power(theta: f64) -> Result<Self, WeightError> {
        if !theta.is_finite() {
            return Err(WeightError::InvalidParameter("theta must be finite".into()));
        }
        Ok(Weight::from_family(Family::Power { theta }))
    }

    /// Harmonic numbers H_n.
    pub fn harmonic() -> Self {
        Weight::from_family(Family::Harmonic)
    }

    /// s_n = 2 - 2^(1-n).
    pub fn geometric() -> Self {
        Weight::from_family(Family::Geometric)
    }

    /// w_j = j^(-a).
    pub fn power_deriv(a: f64) -> Result<Self, WeightError> {
        if !a.is_finite() {
            return Err(WeightError::InvalidParameter("a must be finite".into()));
        }
        Ok(Weight::from_family(Family::PowerDeriv { a }))
    }

    /// Finite table of explicit values; every term must be strictly positive.
    pub fn from_table(values: Vec<f64>) -> Result<Self, WeightError> {
        if values.is_empty() {
            return Err(WeightError::EmptyTable);
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v <= 0.0 {
                return Err(WeightError::NonPositiveTerm {
                    index: i as u64 + 1,
                    value: *v,
                });
            }
        }
        Ok(Weight::from_family(Family::Table(Arc::new(values))))
    }

    /// Prefix sums s_n = w_1 + ... + w_n.  Recognizes w_j = 1/j and returns
    /// the harmonic family so the closed-form tail is available.
    pub fn primitive(&self) -> Weight {
        if let Some(c) = self.as_pure_power() {
            if c == -1.0 {
                return Weight::harmonic();
            }
        }
        if matches!(self.family, Family::GeometricDeriv) {
            return Weight::geometric();
        }
        Weight::from_family(Family::PrefixSums(Arc::new(self.clone())))
    }

    /// First differences w_n = s_n - s_{n-1} (with s_0 = 0).
    ///
    /// The prefix is probed for strict increase; a plateau or decrease is an
    /// error naming the offending index.  Families with a known difference
    /// are rewritten to it (harmonic -> 1/j, s_n = n -> the all-ones weight).
    pub fn discrete_derivative(&self) -> Result<Weight, WeightError> {
        match &self.family {
            Family::Harmonic => return Weight::power_deriv(1.0),
            Family::Power { theta } if *theta == 1.0 => return Weight::power_deriv(0.0),
            Family::Geometric => return Ok(Weight::from_family(Family::GeometricDeriv)),
            _ => {}
        }
        match self.strictly_increasing_known() {
            Some(true) => {}
            Some(false) => {
                return Err(WeightError::NotStrictlyIncreasing {
                    index: 2,
                    prev: self.eval(1),
                    next: self.eval(2),
                })
            }
            None => {
                let probe = self.effective_depth(CONSTRUCTION_PROBE);
                let mut prev = 0.0;
                for n in 1..=probe {
                    let cur = self.eval(n);
                    if cur <= prev {
                        return Err(WeightError::NotStrictlyIncreasing {
                            index: n,
                            prev,
                            next: cur,
                        });
                    }
                    prev = cur;
                }
            }
        }
        Ok(Weight::from_family(Family::Differences(Arc::new(
            self.clone(),
        ))))
    }

    /// j -> 1 / w_j.
    pub fn reciprocal(&self) -> Weight {
        Weight::from_family(Family::Reciprocal(Arc::new(self.clone())))
    }

    /// n -> s_n / n.
    pub fn over_index(&self) -> Weight {
        Weight::from_family(Family::OverIndex(Arc::new(self.clone())))
    }

    /// Largest index this weight is defined at (tables only).
    pub fn len_limit(&self) -> Option<u64> {
        match &self.family {
            Family::Table(v) => Some(v.len() as u64),
            Family::PrefixSums(w) | Family::Differences(w) | Family::Reciprocal(w)
            | Family::OverIndex(w) => w.len_limit(),
            _ => None,
        }
    }

    /// min(k, table length); criteria clamp their truncations with this.
    pub fn effective_depth(&self, k: u64) -> u64 {
        match self.len_limit() {
            Some(l) => k.min(l),
            None => k,
        }
    }

    fn cached_sum<F: Fn(u64) -> f64>(&self, n: u64, term: F) -> f64 {
        let mut cache = self.sums.lock().expect("weight cache lock");
        while (cache.len() as u64) < n {
            let j = cache.len() as u64 + 1;
            let last = cache.last().copied().unwrap_or(0.0);
            cache.push(last + term(j));
        }
        cache[n as usize - 1]
    }

    /// Value at index n >= 1.  Panics on index 0 or beyond a table's length;
    /// callers clamp via [`Weight::effective_depth`].
    pub fn eval(&self, n: u64) -> f64 {
        assert!(n >= 1, "weight index must be >= 1");
        match &self.family {
            Family::Power { theta } => powx(n, *theta),
            Family::Harmonic => {
                if n <= HARMONIC_EXACT_LIMIT {
                    self.cached_sum(n, |j| 1.0 / j as f64)
                } else {
                    harmonic_tail(n)
                }
            }
            Family::Geometric => 2.0 - (1.0 - n as f64).exp2(),
            Family::PowerDeriv { a } => powx(n, -*a),
            Family::GeometricDeriv => (1.0 - n as f64).exp2(),
            Family::Table(v) => v[n as usize - 1],
            Family::PrefixSums(w) => self.cached_sum(n, |j| w.eval(j)),
            Family::Differences(s) => {
                if n == 1 {
                    s.eval(1)
                } else {
                    s.eval(n) - s.eval(n - 1)
                }
            }
            Family::Reciprocal(w) => 1.0 / w.eval(n),
            Family::OverIndex(s) => s.eval(n) / n as f64,
        }
    }

    /// Exponent c when this weight is exactly n -> n^c.
    pub fn as_pure_power(&self) -> Option<f64> {
        match &self.family {
            Family::Power { theta } => Some(*theta),
            Family::PowerDeriv { a } => Some(-*a),
            Family::Reciprocal(w) => w.as_pure_power().map(|c| -c),
            Family::OverIndex(w) => w.as_pure_power().map(|c| c - 1.0),
            _ => None,
        }
    }

    /// lim_k s_k / s_{kn} when it has a closed form.
    pub fn tail_ratio_limit(&self, n: u64) -> Option<f64> {
        if n == 1 {
            return Some(1.0);
        }
        if let Some(c) = self.as_pure_power() {
            return Some(powx(n, -c));
        }
        match &self.family {
            Family::Harmonic | Family::Geometric => Some(1.0),
            Family::PrefixSums(w) => w.as_pure_power().map(|c| {
                if c > -1.0 {
                    powx(n, -(1.0 + c))
                } else {
                    1.0
                }
            }),
            _ => None,
        }
    }

    /// lim_n s_{rn} / s_n when it has a closed form.
    pub fn growth_ratio_limit(&self, r: u64) -> Option<f64> {
        self.tail_ratio_limit(r).map(|v| 1.0 / v)
    }

    /// Whether lim_j w_j = 0, when decidable in closed form.
    pub fn limit_is_zero(&self) -> Option<bool> {
        if let Some(c) = self.as_pure_power() {
            return Some(c < 0.0);
        }
        match &self.family {
            Family::Harmonic | Family::Geometric => Some(false),
            Family::PrefixSums(_) => Some(false),
            Family::GeometricDeriv => Some(true),
            Family::Differences(s) => {
                if let Some(theta) = s.as_pure_power() {
                    Some(theta < 1.0)
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Canonical literal for reports and the command line.
    pub fn label(&self) -> String {
        match &self.family {
            Family::Power { theta } => format!("power:theta={theta}"),
            Family::Harmonic => "harmonic".into(),
            Family::Geometric => "geometric".into(),
            Family::PowerDeriv { a } => format!("powerderiv:a={a}"),
            Family::GeometricDeriv => "derivative(geometric)".into(),
            Family::Table(v) => format!("table:len={}", v.len()),
            Family::PrefixSums(w) => format!("primitive({})", w.label()),
            Family::Differences(s) => format!("derivative({})", s.label()),
            Family::Reciprocal(w) => format!("reciprocal({})", w.label()),
            Family::OverIndex(s) => format!("overindex({})", s.label()),
        }
    }

    /// Whether the family is strictly increasing, when known structurally.
    /// Floating-point plateaus (e.g. the geometric primitive rounding to 2)
    /// do not contradict a structural `Some(true)`.
    pub fn strictly_increasing_known(&self) -> Option<bool> {
        if let Some(c) = self.as_pure_power() {
            return Some(c > 0.0);
        }
        match &self.family {
            Family::Harmonic | Family::Geometric | Family::PrefixSums(_) => Some(true),
            Family::GeometricDeriv => Some(false),
            _ => None,
        }
    }

    /// Error unless s(1) < s(2) < ... over the probed prefix.
    pub fn check_strictly_increasing(&self, upto: u64) -> Result<(), WeightError> {
        let upto = self.effective_depth(upto);
        let mut prev = 0.0;
        for n in 1..=upto {
            let cur = self.eval(n);
            if cur <= prev {
                return Err(WeightError::NotStrictlyIncreasing {
                    index: n,
                    prev,
                    next: cur,
                });
            }
            prev = cur;
        }
        Ok(())
    }

    /// Parse a command-line weight literal:
    /// `power:theta=0.5 | harmonic | geometric | powerderiv:a=0.5 | file:<path>`.
    pub fn parse_literal(lit: &str) -> Result<Weight, WeightError> {
        if lit == "harmonic" {
            return Ok(Weight::harmonic());
        }
        if lit == "geometric" {
            return Ok(Weight::geometric());
        }
        if let Some(rest) = lit.strip_prefix("power:theta=") {
            let theta: f64 = rest
                .parse()
                .map_err(|_| WeightError::BadLiteral(lit.into()))?;
            return Weight::power(theta);
        }
        if let Some(rest) = lit.strip_prefix("powerderiv:a=") {
            let a: f64 = rest
                .parse()
                .map_err(|_| WeightError::BadLiteral(lit.into()))?;
            return Weight::power_deriv(a);
        }
        if let Some(path) = lit.strip_prefix("file:") {
            let text =
                std::fs::read_to_string(path).map_err(|e| WeightError::Io(e.to_string()))?;
            let mut values = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let v: f64 = line.parse().map_err(|e| {
                    WeightError::Io(format!("line {}: {e}", lineno + 1))
                })?;
                values.push(v);
            }
            return Weight::from_table(values);
        }
        Err(WeightError::BadLiteral(lit.into()))
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Weight({})", self.label())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Built-in primitives (increasing weights s).
pub fn s_registry() -> Vec<Weight> {
    vec![
        Weight::power(0.25).unwrap(),
        Weight::power(0.5).unwrap(),
        Weight::power(0.75).unwrap(),
        Weight::power(1.0).unwrap(),
        Weight::harmonic(),
        Weight::geometric(),
    ]
}

/// Built-in non-increasing weights w.
pub fn w_registry() -> Vec<Weight> {
    vec![
        Weight::power_deriv(0.25).unwrap(),
        Weight::power_deriv(0.5).unwrap(),
        Weight::power_deriv(0.75).unwrap(),
        Weight::power_deriv(1.0).unwrap(),
        Weight::geometric().discrete_derivative().unwrap(),
    ]
}

/// Thresholds shared by the weight criteria; every report records the one it
/// actually used.
#[derive(Debug, Clone)]
pub struct CriterionOpts {
    /// Relative stabilization tolerance over a doubling window.
    pub stable_tol: f64,
    /// Relative growth over a doubling window treated as sustained growth.
    pub growth_tol: f64,
    /// Tail-smallness threshold for the heuristic limit test.
    pub smallness_eps: f64,
    /// A truncated infimum at or below this is treated as vanishing.
    pub positivity_floor: f64,
    /// The ratio-growth constant must exceed 1 by this margin.
    pub lrp_margin: f64,
    /// Prefix-ratio criterion: estimate must shrink by this factor over a
    /// doubling of the outer truncation to count as decaying.
    pub decay_ratio: f64,
    /// ... and must stay above this factor to count as bounded below.
    pub flat_ratio: f64,
}

impl Default for CriterionOpts {
    fn default() -> Self {
        CriterionOpts {
            stable_tol: 1e-3,
            growth_tol: 1e-2,
            smallness_eps: 1e-6,
            positivity_floor: 1e-9,
            lrp_margin: 0.05,
            decay_ratio: 0.9,
            flat_ratio: 0.99,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Decreasing,
    Increasing,
}

/// Membership in the normalized non-increasing class: w_1 = 1, w
/// non-increasing, w_j -> 0.
///
/// The limit condition is decided in closed form for built-in families; for
/// table-backed weights it degrades to the heuristic w_K < eps, and a weight
/// that merely has not decayed yet is reported inconclusive rather than
/// failing.
pub fn w_class_check(w: &Weight, k: u64, opts: &CriterionOpts) -> CriterionReport {
    let k_eff = w.effective_depth(k).max(1);
    let mut notes: Vec<String> = Vec::new();
    if k_eff < k {
        notes.push(format!("truncation clamped to table length {k_eff}"));
    }
    let mut definite_fail = false;
    let mut limit_unknown = false;
    let mut method = Method::TruncatedSup;

    let w1 = w.eval(1);
    if (w1 - 1.0).abs() > 1e-12 {
        definite_fail = true;
        notes.push(format!("w_1 = {w1} differs from 1"));
    }

    let is_table = w.len_limit().is_some();
    let mut prev = w1;
    for j in 2..=k_eff {
        let cur = w.eval(j);
        if cur == 0.0 && !is_table {
            // structural families underflow rather than genuinely vanish
            notes.push(format!("scan stopped at index {j}: value underflowed to 0"));
            break;
        }
        if cur <= 0.0 || !cur.is_finite() {
            definite_fail = true;
            notes.push(format!("term at index {j} is not strictly positive ({cur})"));
            break;
        }
        if cur > prev * (1.0 + 1e-12) {
            definite_fail = true;
            notes.push(format!("increases at index {j} ({prev} -> {cur})"));
            break;
        }
        prev = cur;
    }

    match w.limit_is_zero() {
        Some(true) => {
            method = Method::ClosedForm;
            notes.push("limit 0 confirmed in closed form".into());
        }
        Some(false) => {
            method = Method::ClosedForm;
            definite_fail = true;
            notes.push("limit is not 0 (closed form)".into());
        }
        None => {
            let wk = w.eval(k_eff);
            if wk < opts.smallness_eps {
                notes.push(format!(
                    "limit tested heuristically: w_K = {wk} < {}",
                    opts.smallness_eps
                ));
            } else {
                limit_unknown = true;
                notes.push(format!(
                    "limit undecided at truncation: w_K = {wk} >= {}",
                    opts.smallness_eps
                ));
            }
        }
    }

    let verdict = if definite_fail {
        Verdict::Fails
    } else if limit_unknown {
        Verdict::Inconclusive
    } else {
        Verdict::Holds
    };
    CriterionReport {
        criterion: "w-class-membership".into(),
        subject: w.label(),
        verdict,
        estimate: w.eval(k_eff),
        truncation: Truncation::single(k_eff),
        method,
        tolerance: opts.smallness_eps,
        notes: notes.join("; "),
    }
}

/// Essential monotonicity: inf_{m<=n} s_m/s_n > 0 (decreasing) or
/// sup_{m<=n} s_m/s_n < infinity (increasing), probed up to K.
pub fn essentially_monotone(
    s: &Weight,
    dir: Direction,
    k: u64,
    opts: &CriterionOpts,
) -> CriterionReport {
    let name = match dir {
        Direction::Decreasing => "essentially-decreasing",
        Direction::Increasing => "essentially-increasing",
    };
    let k_eff = s.effective_depth(k).max(2);

    // Closed-form fast paths for the built-in families.
    let closed: Option<(Verdict, f64, String)> = if let Some(c) = s.as_pure_power() {
        match dir {
            Direction::Decreasing => {
                if c <= 0.0 {
                    Some((Verdict::Holds, 1.0, "pure power, exactly non-increasing".into()))
                } else {
                    Some((
                        Verdict::Fails,
                        s.eval(1) / s.eval(k_eff),
                        "pure power with positive exponent; infimum vanishes".into(),
                    ))
                }
            }
            Direction::Increasing => {
                if c >= 0.0 {
                    Some((Verdict::Holds, 1.0, "pure power, exactly non-decreasing".into()))
                } else {
                    Some((
                        Verdict::Fails,
                        s.eval(1) / s.eval(k_eff),
                        "pure power with negative exponent; supremum is unbounded".into(),
                    ))
                }
            }
        }
    } else {
        match (&s.family, dir) {
            (Family::Harmonic, Direction::Increasing) => {
                Some((Verdict::Holds, 1.0, "harmonic numbers are increasing".into()))
            }
            (Family::Harmonic, Direction::Decreasing) => Some((
                Verdict::Fails,
                1.0 / s.eval(k_eff),
                "harmonic numbers are unbounded; infimum vanishes".into(),
            )),
            (Family::Geometric, Direction::Increasing) => {
                Some((Verdict::Holds, 1.0, "geometric primitive is increasing".into()))
            }
            (Family::Geometric, Direction::Decreasing) => Some((
                Verdict::Holds,
                0.5,
                "bounded increasing sequence; infimum is s_1 / lim = 1/2".into(),
            )),
            (Family::GeometricDeriv, Direction::Decreasing) => Some((
                Verdict::Holds,
                1.0,
                "2^(1-j) is exactly decreasing".into(),
            )),
            (Family::GeometricDeriv, Direction::Increasing) => Some((
                Verdict::Fails,
                s.eval(1) / s.eval(k_eff.min(1000)),
                "2^(1-j) decays geometrically; supremum is unbounded".into(),
            )),
            _ => None,
        }
    };
    if let Some((verdict, estimate, note)) = closed {
        return CriterionReport {
            criterion: name.into(),
            subject: s.label(),
            verdict,
            estimate,
            truncation: Truncation::single(k_eff),
            method: Method::ClosedForm,
            tolerance: opts.stable_tol,
            notes: note,
        };
    }

    // Truncated scan: the pairwise extreme reduces to a running prefix
    // extreme divided by the current term.
    let mut notes: Vec<String> = Vec::new();
    let half = k_eff / 2;
    let mut extreme = f64::NAN;
    let mut est = f64::NAN;
    let mut est_half = f64::NAN;
    let mut scanned = 0;
    for n in 1..=k_eff {
        let v = s.eval(n);
        if !v.is_finite() || v <= 0.0 {
            notes.push(format!(
                "scan stopped at index {n}: term {v} is not strictly positive"
            ));
            break;
        }
        scanned = n;
        if n == 1 {
            extreme = v;
            est = 1.0;
        } else {
            match dir {
                Direction::Decreasing => {
                    extreme = extreme.min(v);
                    est = est.min(extreme / v);
                }
                Direction::Increasing => {
                    extreme = extreme.max(v);
                    est = est.max(extreme / v);
                }
            }
        }
        if n == half {
            est_half = est;
        }
    }
    if scanned < 2 {
        return CriterionReport {
            criterion: name.into(),
            subject: s.label(),
            verdict: Verdict::Inconclusive,
            estimate: f64::NAN,
            truncation: Truncation::single(scanned),
            method: Method::TruncatedSup,
            tolerance: opts.stable_tol,
            notes: notes.join("; "),
        };
    }
    if est_half.is_nan() {
        est_half = est;
    }
    let drift = (est - est_half).abs() / est_half.abs().max(1e-300);
    let stable = drift <= opts.stable_tol;
    let verdict = match dir {
        Direction::Decreasing => {
            if est <= opts.positivity_floor {
                notes.push(format!("infimum fell to {est}"));
                Verdict::Fails
            } else if stable {
                Verdict::Holds
            } else {
                notes.push(format!("estimate still moving: {est_half} -> {est}"));
                Verdict::Inconclusive
            }
        }
        Direction::Increasing => {
            if stable {
                Verdict::Holds
            } else if drift >= opts.growth_tol {
                notes.push(format!("sustained growth: {est_half} -> {est}"));
                Verdict::Fails
            } else {
                Verdict::Inconclusive
            }
        }
    };
    CriterionReport {
        criterion: name.into(),
        subject: s.label(),
        verdict,
        estimate: est,
        truncation: Truncation::single(scanned),
        method: Method::TruncatedSup,
        tolerance: opts.stable_tol,
        notes: notes.join("; "),
    }
}

/// Regularity: sup_n (1/(n w_n)) * sum_{j<=n} w_j < infinity.
///
/// Pure powers j^c are decided in closed form (regular exactly when c > -1,
/// with limiting ratio 1/(1+c)); everything else uses the stabilization of
/// the truncated running maximum.
pub fn is_regular(w: &Weight, k: u64, opts: &CriterionOpts) -> CriterionReport {
    let k_eff = w.effective_depth(k).max(2);
    let half = k_eff / 2;
    let mut sum = 0.0;
    let mut max_ratio: f64 = 0.0;
    let mut max_half: f64 = 0.0;
    let mut notes: Vec<String> = Vec::new();
    let mut scanned = 0;
    for n in 1..=k_eff {
        let v = w.eval(n);
        if !v.is_finite() || v <= 0.0 {
            notes.push(format!(
                "scan stopped at index {n}: term {v} is not strictly positive"
            ));
            break;
        }
        scanned = n;
        sum += v;
        let ratio = sum / (n as f64 * v);
        max_ratio = max_ratio.max(ratio);
        if n == half {
            max_half = max_ratio;
        }
    }
    let _ = scanned;

    if let Some(c) = w.as_pure_power() {
        if c > -1.0 {
            let limit = 1.0 / (1.0 + c);
            let estimate = max_ratio.max(limit);
            return CriterionReport {
                criterion: "regular-weight".into(),
                subject: w.label(),
                verdict: Verdict::Holds,
                estimate,
                truncation: Truncation::single(k_eff),
                method: Method::ClosedForm,
                tolerance: opts.stable_tol,
                notes: format!("pure power j^{c}: prefix-average ratio tends to {limit}"),
            };
        } else {
            return CriterionReport {
                criterion: "regular-weight".into(),
                subject: w.label(),
                verdict: Verdict::Fails,
                estimate: max_ratio,
                truncation: Truncation::single(k_eff),
                method: Method::ClosedForm,
                tolerance: opts.stable_tol,
                notes: format!(
                    "pure power j^{c}: prefix-average ratio is unbounded (truncated max {max_ratio})"
                ),
            };
        }
    }

    if max_half == 0.0 {
        max_half = max_ratio;
    }
    let grow = (max_ratio - max_half) / max_half.abs().max(1e-300);
    let verdict = if !max_ratio.is_finite() {
        notes.push("ratio overflowed the floating range".into());
        Verdict::Fails
    } else if grow <= opts.stable_tol {
        Verdict::Holds
    } else if grow >= opts.growth_tol {
        notes.push(format!("sustained growth: {max_half} -> {max_ratio}"));
        Verdict::Fails
    } else {
        notes.push(format!("estimate still moving: {max_half} -> {max_ratio}"));
        Verdict::Inconclusive
    };
    CriterionReport {
        criterion: "regular-weight".into(),
        subject: w.label(),
        verdict,
        estimate: max_ratio,
        truncation: Truncation::single(k_eff),
        method: Method::TruncatedSup,
        tolerance: opts.stable_tol,
        notes: notes.join("; "),
    }
}

/// Ratio-growth property: some r >= 2 and C > 1 with s_{rn} >= C s_n for all n.
///
/// For each r the truncated c_r = min_{n <= K/r} s_{rn}/s_n is an upper bound
/// on the true constant; built-in families additionally cap it by the
/// closed-form limit of s_{rn}/s_n, making the verdict two-sided.
pub fn has_lrp(s: &Weight, r_max: u64, k: u64, opts: &CriterionOpts) -> CriterionReport {
    let k_eff = s.effective_depth(k);
    let mut best = f64::NEG_INFINITY;
    let mut best_r = 0u64;
    let mut best_sound = false;
    let mut best_stable = false;
    let mut notes: Vec<String> = Vec::new();
    let mut any_limit = false;

    for r in 2..=r_max.max(2) {
        let n_cap = k_eff / r;
        if n_cap == 0 {
            continue;
        }
        let half = (n_cap / 2).max(1);
        let mut trunc_min = f64::INFINITY;
        let mut trunc_min_half = f64::INFINITY;
        for n in 1..=n_cap {
            let ratio = s.eval(r * n) / s.eval(n);
            trunc_min = trunc_min.min(ratio);
            if n == half {
                trunc_min_half = trunc_min;
            }
        }
        let limit = s.growth_ratio_limit(r);
        if limit.is_some() {
            any_limit = true;
        }
        let c_r = match limit {
            Some(l) => trunc_min.min(l),
            None => trunc_min,
        };
        let stable = (trunc_min - trunc_min_half).abs()
            <= opts.stable_tol * trunc_min_half.abs().max(1e-300);
        if c_r > best {
            best = c_r;
            best_r = r;
            best_sound = limit.is_some();
            best_stable = stable;
        }
    }

    if best_r == 0 {
        return CriterionReport {
            criterion: "lrp".into(),
            subject: s.label(),
            verdict: Verdict::Inconclusive,
            estimate: f64::NAN,
            truncation: Truncation::new(r_max, k_eff),
            method: Method::TruncatedSup,
            tolerance: opts.lrp_margin,
            notes: "truncation too small to probe any ratio".into(),
        };
    }

    let threshold = 1.0 + opts.lrp_margin;
    let method = if any_limit {
        Method::TruncatedSupWithLimitExtrapolation
    } else {
        Method::TruncatedSup
    };
    notes.push(format!("best witness r = {best_r}, C = {best}"));
    let verdict = if best >= threshold {
        if best_sound {
            // limit-capped value; a pass is sound
            banded_verdict(true, best, threshold, opts.stable_tol, Method::ClosedForm)
        } else if best_stable {
            notes.push("no closed-form limit; pass is heuristic (stable truncated min)".into());
            banded_verdict(true, best, threshold, opts.stable_tol, method)
        } else {
            notes.push("truncated minimum still falling; cannot certify".into());
            Verdict::Inconclusive
        }
    } else {
        // the truncated min is an upper bound, so a sub-threshold value is
        // sound evidence of failure up to r_max
        notes.push(format!("no r <= {r_max} clears 1 + margin"));
        banded_verdict(true, best, threshold, opts.stable_tol, Method::ClosedForm)
    };
    CriterionReport {
        criterion: "lrp".into(),
        subject: s.label(),
        verdict,
        estimate: best,
        truncation: Truncation::new(r_max, k_eff),
        method,
        tolerance: opts.lrp_margin,
        notes: notes.join("; "),
    }
}

/// The per-n suprema sigma_n = sup_k s_k / s_{kn}, extrapolated by the
/// closed-form tail limit when one exists.  Returns (sigma, extrapolated).
pub fn sigma_profile(s: &Weight, n_max: u64, k_max: u64) -> Vec<(f64, bool)> {
    let mut out = Vec::with_capacity(n_max as usize);
    for n in 1..=n_max {
        let mut k_eff = match s.len_limit() {
            Some(l) => (l / n).min(k_max),
            None => k_max,
        };
        if k_eff == 0 {
            // table exhausted: no ratio is observable at this n
            break;
        }
        if s.as_pure_power().is_some() {
            // s_k / s_{kn} is constant in k for a pure power
            k_eff = 1;
        }
        let mut sup = 0.0f64;
        for k in 1..=k_eff {
            let ratio = s.eval(k) / s.eval(k * n);
            if ratio > sup {
                sup = ratio;
            }
        }
        match s.tail_ratio_limit(n) {
            Some(l) => out.push((sup.max(l), true)),
            None => out.push((sup, false)),
        }
    }
    out
}

/// Prefix-ratio criterion: inf_n sup_k s_k / s_{kn} = 0.
///
/// The truncated estimate min_{n <= n_max} sigma_n is compared against the
/// same minimum at n_max/2; decay by `decay_ratio` is a pass, a flat profile
/// with sound (limit-extrapolated) suprema is a failure, anything else is
/// inconclusive.  Without closed-form limits the truncated sigma_n are lower
/// bounds, so a flat profile alone cannot certify failure.
pub fn s_criterion(s: &Weight, n_max: u64, k_max: u64, opts: &CriterionOpts) -> CriterionReport {
    let n_max = n_max.max(2);
    let profile = sigma_profile(s, n_max, k_max);
    let n_eff = profile.len() as u64;
    if n_eff < 2 {
        return CriterionReport {
            criterion: "prefix-ratio-criterion".into(),
            subject: s.label(),
            verdict: Verdict::Inconclusive,
            estimate: f64::NAN,
            truncation: Truncation::new(n_eff, k_max),
            method: Method::TruncatedSup,
            tolerance: opts.decay_ratio,
            notes: "truncation too small to form the profile".into(),
        };
    }
    let half = (n_eff / 2) as usize;
    let est_half = profile[..half]
        .iter()
        .map(|(v, _)| *v)
        .fold(f64::INFINITY, f64::min);
    let est_full = profile
        .iter()
        .map(|(v, _)| *v)
        .fold(f64::INFINITY, f64::min);
    let all_sound = profile.iter().all(|(_, sound)| *sound);
    let any_sound = profile.iter().any(|(_, sound)| *sound);
    let method = if any_sound {
        Method::TruncatedSupWithLimitExtrapolation
    } else {
        Method::TruncatedSup
    };

    let ratio = est_full / est_half;
    let mut notes = Vec::new();
    if n_eff < n_max {
        notes.push(format!("profile clamped to {n_eff} entries by table length"));
    }
    notes.push(format!(
        "estimate {est_half} at half depth -> {est_full} at full depth (ratio {ratio})"
    ));
    let verdict = if ratio <= opts.decay_ratio {
        Verdict::Holds
    } else if all_sound && ratio >= opts.flat_ratio && est_full > 1e-9 {
        notes.push("profile bounded below; suprema are limit-extrapolated".into());
        Verdict::Fails
    } else {
        if !all_sound {
            notes.push("truncated suprema are lower bounds (no closed-form tail)".into());
        }
        Verdict::Inconclusive
    };
    CriterionReport {
        criterion: "prefix-ratio-criterion".into(),
        subject: s.label(),
        verdict,
        estimate: est_full,
        truncation: Truncation::new(n_eff, k_max),
        method,
        tolerance: opts.decay_ratio,
        notes: notes.join("; "),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn power_weight_special_cases_are_exact() {
        let s = Weight::power(1.0).unwrap();
        assert_eq!(s.eval(17), 17.0);
        let s = Weight::power(2.0).unwrap();
        assert_eq!(s.eval(5), 25.0);
        let s = Weight::power(0.5).unwrap();
        assert_eq!(s.eval(9), 3.0);
    }

    #[test]
    fn harmonic_matches_plain_sums_and_tail_expansion_agrees() {
        let h = Weight::harmonic();
        assert_eq!(h.eval(1), 1.0);
        assert_eq!(h.eval(2), 1.5);
        assert_relative_eq!(h.eval(4), 1.0 + 0.5 + 1.0 / 3.0 + 0.25, epsilon = 1e-15);
        // the asymptotic continuation is consistent with direct summation
        let direct: f64 = (1..=100_000u64).map(|j| 1.0 / j as f64).sum();
        assert_relative_eq!(h.eval(100_000), direct, epsilon = 1e-10);
    }

    #[test]
    fn geometric_primitive_and_its_derivative() {
        let s = Weight::geometric();
        assert_eq!(s.eval(1), 1.0);
        assert_eq!(s.eval(2), 1.5);
        let w = s.discrete_derivative().unwrap();
        assert_eq!(w.eval(1), 1.0);
        assert_eq!(w.eval(2), 0.5);
        assert_eq!(w.eval(3), 0.25);
    }

    #[test]
    fn derivative_of_linear_primitive_is_all_ones() {
        let s = Weight::power(1.0).unwrap();
        let w = s.discrete_derivative().unwrap();
        for j in 1..=10 {
            assert_eq!(w.eval(j), 1.0);
        }
    }

    #[test]
    fn derivative_of_squares_gives_odd_numbers() {
        let s = Weight::power(2.0).unwrap();
        let w = s.discrete_derivative().unwrap();
        assert_eq!(w.eval(1), 1.0);
        assert_eq!(w.eval(2), 3.0);
        assert_eq!(w.eval(3), 5.0);
    }

    #[test]
    fn derivative_requires_strict_increase() {
        let s = Weight::from_table(vec![1.0, 2.0, 2.0, 3.0]).unwrap();
        match s.discrete_derivative() {
            Err(WeightError::NotStrictlyIncreasing { index, .. }) => assert_eq!(index, 3),
            other => panic!("expected strict-increase error, got {other:?}"),
        }
    }

    #[test]
    fn primitive_and_derivative_invert_each_other_termwise() {
        for w in w_registry() {
            let s = w.primitive();
            let back = s.discrete_derivative().unwrap();
            for j in 1..=200 {
                assert_relative_eq!(back.eval(j), w.eval(j), max_relative = 1e-10);
            }
        }
        for s in s_registry() {
            let w = s.discrete_derivative().unwrap();
            let back = w.primitive();
            for n in 1..=200 {
                assert_relative_eq!(back.eval(n), s.eval(n), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn primitive_recognizes_the_harmonic_family() {
        let w = Weight::power_deriv(1.0).unwrap();
        let s = w.primitive();
        assert_eq!(s.label(), "harmonic");
        assert_eq!(s.tail_ratio_limit(3), Some(1.0));
    }

    #[test]
    fn w_class_examples() {
        let opts = CriterionOpts::default();
        let rep = w_class_check(&Weight::power_deriv(1.0).unwrap(), 10_000, &opts);
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_eq!(rep.method, Method::ClosedForm);

        let rep = w_class_check(&Weight::power_deriv(0.0).unwrap(), 100, &opts);
        assert_eq!(rep.verdict, Verdict::Fails);

        let rep = w_class_check(&Weight::from_table(vec![1.0, 2.0, 3.0]).unwrap(), 100, &opts);
        assert_eq!(rep.verdict, Verdict::Fails);
        assert!(rep.notes.contains("increases"));
    }

    #[test]
    fn essential_monotonicity_examples() {
        let opts = CriterionOpts::default();
        let rep = essentially_monotone(
            &Weight::power_deriv(1.0).unwrap(),
            Direction::Decreasing,
            1000,
            &opts,
        );
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_eq!(rep.estimate, 1.0);

        let rep = essentially_monotone(
            &Weight::power(0.5).unwrap(),
            Direction::Increasing,
            1000,
            &opts,
        );
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_eq!(rep.estimate, 1.0);

        // alternating 1,2,1,2,... is essentially decreasing with constant 1/2
        let table: Vec<f64> = (0..64).map(|i| if i % 2 == 0 { 1.0 } else { 2.0 }).collect();
        let rep = essentially_monotone(
            &Weight::from_table(table).unwrap(),
            Direction::Decreasing,
            64,
            &opts,
        );
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_eq!(rep.estimate, 0.5);
    }

    #[test]
    fn regularity_examples() {
        let opts = CriterionOpts::default();
        let rep = is_regular(&Weight::power_deriv(0.5).unwrap(), 10_000, &opts);
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_relative_eq!(rep.estimate, 2.0, epsilon = 1e-12);

        let rep = is_regular(&Weight::power_deriv(0.0).unwrap(), 10_000, &opts);
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_relative_eq!(rep.estimate, 1.0, epsilon = 1e-12);

        let rep = is_regular(&Weight::power_deriv(1.0).unwrap(), 10_000, &opts);
        assert_eq!(rep.verdict, Verdict::Fails);
    }

    #[test]
    fn ratio_growth_examples() {
        let opts = CriterionOpts::default();
        let rep = has_lrp(&Weight::power(0.5).unwrap(), 4, 10_000, &opts);
        assert_eq!(rep.verdict, Verdict::Holds);
        assert!(rep.notes.contains("r = 2") || rep.estimate > 1.05);

        let rep = has_lrp(&Weight::harmonic(), 8, 10_000, &opts);
        assert_eq!(rep.verdict, Verdict::Fails);
        assert_relative_eq!(rep.estimate, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn prefix_ratio_criterion_examples() {
        let opts = CriterionOpts::default();
        let rep = s_criterion(&Weight::power(0.5).unwrap(), 16, 1000, &opts);
        assert_eq!(rep.verdict, Verdict::Holds);
        assert_relative_eq!(rep.estimate, (16.0f64).powf(-0.5), epsilon = 1e-12);

        let rep = s_criterion(&Weight::harmonic(), 16, 1000, &opts);
        assert_eq!(rep.verdict, Verdict::Fails);
        assert_eq!(rep.estimate, 1.0);

        let rep = s_criterion(&Weight::power(1.0).unwrap(), 16, 1000, &opts);
        assert_eq!(rep.verdict, Verdict::Holds);
    }

    #[test]
    fn sigma_profile_stays_in_unit_interval_for_increasing_weights() {
        for s in s_registry() {
            for (sigma, _) in sigma_profile(&s, 16, 500) {
                assert!(sigma > 0.0 && sigma <= 1.0 + 1e-12, "sigma = {sigma}");
            }
        }
    }

    #[test]
    fn lrp_agrees_with_regularity_of_the_ratio_sequence() {
        // For built-in s with s essentially increasing and s_n/n essentially
        // decreasing, the ratio-growth property and regularity of s_n/n agree.
        let opts = CriterionOpts::default();
        for s in s_registry() {
            let inc = essentially_monotone(&s, Direction::Increasing, 4096, &opts);
            let ratio = s.over_index();
            let dec = essentially_monotone(&ratio, Direction::Decreasing, 4096, &opts);
            if inc.verdict != Verdict::Holds || dec.verdict != Verdict::Holds {
                continue;
            }
            let lrp = has_lrp(&s, 8, 8192, &opts);
            let reg = is_regular(&ratio, 8192, &opts);
            assert_eq!(
                lrp.verdict, reg.verdict,
                "mismatch for {}: lrp {:?} vs regular {:?}",
                s.label(),
                lrp.verdict,
                reg.verdict
            );
        }
    }

    #[test]
    fn literals_round_trip() {
        for lit in ["power:theta=0.5", "harmonic", "geometric", "powerderiv:a=0.25"] {
            let w = Weight::parse_literal(lit).unwrap();
            assert_eq!(w.label(), lit);
        }
        assert!(Weight::parse_literal("power:theta=x").is_err());
        assert!(Weight::parse_literal("nope").is_err());
    }
}
