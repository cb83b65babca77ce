//! The scalar Orlicz function type: registry families, dilations, induced
//! functions, tables, and the numeric complementary (Legendre) transform.

use super::OrliczError;
use crate::seqvec::SeqVec;
use std::fmt;
use std::sync::Arc;

/// Default search interval end for the complementary transform.
pub const DEFAULT_CONJUGATE_S_MAX: f64 = 8.0;

const LN3: f64 = 1.0986122886681098;

#[derive(Clone)]
enum Kind {
    /// t^p, p >= 1
    Power { p: f64 },
    /// 0 on [0, 1/2], 2t - 1 beyond: the canonical degenerate function
    FInf,
    /// e^(2 - 1/t)/3 on (0, 1/2], (4t - 1)/3 beyond: convex, normalized,
    /// and failing delta-2 at zero
    ExpInverse,
    /// (1-w) t + w t^2
    Blend { w: f64 },
    /// M(bt)/M(b)
    Dilation {
        base: Arc<OrliczFunction>,
        b: f64,
        mb: f64,
    },
    /// s -> sum_j M(b_j s)
    Induced {
        base: Arc<OrliczFunction>,
        scales: Vec<f64>,
    },
    /// piecewise-linear interpolation through (t_i, m_i), extended linearly
    Table { ts: Vec<f64>, ms: Vec<f64> },
    /// t -> sup_{0 <= s <= s_max} (st - M(s))
    Conjugate {
        base: Arc<OrliczFunction>,
        s_max: f64,
    },
}

/// A convex function M with M(0) = 0 used to build Orlicz norms.  The
/// `normalized` flag records |M(1) - 1| <= 1e-12; `degenerate` records
/// vanishing on a right-neighborhood of 0.
#[derive(Clone)]
pub struct OrliczFunction {
    kind: Kind,
    pub normalized: bool,
    pub degenerate: bool,
}

fn powt(t: f64, p: f64) -> f64 {
    if p == 1.0 {
        t
    } else if p == 2.0 {
        t * t
    } else if p == 1.5 {
        t * t.sqrt()
    } else if p == 3.0 {
        t * t * t
    } else if p == 4.0 {
        let s = t * t;
        s * s
    } else {
        t.powf(p)
    }
}

impl OrliczFunction {
    fn finish(kind: Kind) -> Self {
        let mut f = OrliczFunction {
            kind,
            normalized: false,
            degenerate: false,
        };
        f.normalized = (f.eval(1.0) - 1.0).abs() <= 1e-12;
        f.degenerate = f.detect_degenerate();
        f
    }

    fn detect_degenerate(&self) -> bool {
        match &self.kind {
            Kind::Power { .. } | Kind::ExpInverse | Kind::Blend { .. } => false,
            Kind::FInf => true,
            Kind::Dilation { base, .. } | Kind::Induced { base, .. } => base.degenerate,
            Kind::Table { ts, ms } => ts
                .iter()
                .zip(ms)
                .any(|(t, m)| *t > 0.0 && *m == 0.0),
            // M* vanishes on [0, M'(0+)]; probe the transform itself near 0
            Kind::Conjugate { .. } => self.eval(1e-6) == 0.0,
        }
    }

    /// F_p: t^p for p >= 1.
    pub fn power(p: f64) -> Result<Self, OrliczError> {
        if !p.is_finite() || p < 1.0 {
            return Err(OrliczError::InvalidParameter(format!(
                "power exponent must be >= 1, got {p}"
            )));
        }
        Ok(OrliczFunction::finish(Kind::Power { p }))
    }

    /// The degenerate registry member: 0 on [0, 1/2], 2t - 1 beyond.
    pub fn f_inf() -> Self {
        OrliczFunction::finish(Kind::FInf)
    }

    /// The non-delta-2 registry member (convex piecewise exp-inverse).
    pub fn exp_inverse() -> Self {
        OrliczFunction::finish(Kind::ExpInverse)
    }

    /// Convex combination (1-w) F_1 + w F_2.
    pub fn blend(w: f64) -> Result<Self, OrliczError> {
        if !w.is_finite() || !(0.0..=1.0).contains(&w) {
            return Err(OrliczError::InvalidParameter(format!(
                "blend weight must lie in [0,1], got {w}"
            )));
        }
        Ok(OrliczFunction::finish(Kind::Blend { w }))
    }

    /// Piecewise-linear function through the given knots.  The first knot
    /// must be (0, 0); abscissae strictly increase, ordinates are
    /// nondecreasing, and chord slopes must be nondecreasing (convexity).
    pub fn from_table(points: Vec<(f64, f64)>) -> Result<Self, OrliczError> {
        if points.len() < 2 {
            return Err(OrliczError::InvalidTable("need at least two knots".into()));
        }
        if points[0] != (0.0, 0.0) {
            return Err(OrliczError::InvalidTable(
                "first knot must be (0, 0)".into(),
            ));
        }
        let mut prev_slope = f64::NEG_INFINITY;
        for win in points.windows(2) {
            let (t0, m0) = win[0];
            let (t1, m1) = win[1];
            if !t1.is_finite() || !m1.is_finite() {
                return Err(OrliczError::InvalidTable("non-finite knot".into()));
            }
            if t1 <= t0 {
                return Err(OrliczError::InvalidTable(format!(
                    "abscissae must strictly increase ({t0} -> {t1})"
                )));
            }
            if m1 < m0 {
                return Err(OrliczError::InvalidTable(format!(
                    "ordinates must be nondecreasing ({m0} -> {m1})"
                )));
            }
            let slope = (m1 - m0) / (t1 - t0);
            if slope < prev_slope - 1e-10 {
                return Err(OrliczError::InvalidTable(format!(
                    "chord slopes decrease near t = {t1}: not convex"
                )));
            }
            prev_slope = slope;
        }
        let (ts, ms) = points.into_iter().unzip();
        Ok(OrliczFunction::finish(Kind::Table { ts, ms }))
    }

    /// M_b(t) = M(bt)/M(b) for b in (0, 1]; errors where M(b) = 0.
    pub fn normalized_dilation(&self, b: f64) -> Result<Self, OrliczError> {
        if !b.is_finite() || !(0.0..=1.0).contains(&b) || b == 0.0 {
            return Err(OrliczError::InvalidParameter(format!(
                "dilation parameter must lie in (0,1], got {b}"
            )));
        }
        if b == 1.0 {
            return Ok(self.clone());
        }
        let mb = self.eval(b);
        if mb == 0.0 {
            return Err(OrliczError::DegenerateAtPoint(b));
        }
        Ok(OrliczFunction::finish(Kind::Dilation {
            base: Arc::new(self.clone()),
            b,
            mb,
        }))
    }

    /// The induced function M_f(s) = sum_j M(|f_j| s).  Requires a
    /// non-degenerate base.
    pub fn induced(&self, f: &SeqVec) -> Result<Self, OrliczError> {
        if self.degenerate {
            return Err(OrliczError::DegenerateFunction(self.label()));
        }
        let scales: Vec<f64> = f.iter().map(|(_, v)| v.abs()).collect();
        Ok(OrliczFunction::finish(Kind::Induced {
            base: Arc::new(self.clone()),
            scales,
        }))
    }

    /// The complementary function t -> sup_{0 <= s <= s_max} (st - M(s)),
    /// computed by ternary search (the objective is concave in s).  Values
    /// where the supremum escapes the right endpoint are +infinity.  Not
    /// renormalized.
    pub fn complementary(&self, s_max: f64) -> Result<Self, OrliczError> {
        if !s_max.is_finite() || s_max <= 0.0 {
            return Err(OrliczError::InvalidParameter(format!(
                "conjugate search bound must be positive, got {s_max}"
            )));
        }
        Ok(OrliczFunction::finish(Kind::Conjugate {
            base: Arc::new(self.clone()),
            s_max,
        }))
    }

    /// M(t) for t >= 0.
    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(t >= 0.0, "Orlicz functions take nonnegative arguments");
        match &self.kind {
            Kind::Power { p } => powt(t, *p),
            Kind::FInf => {
                if t <= 0.5 {
                    0.0
                } else {
                    2.0 * t - 1.0
                }
            }
            Kind::ExpInverse => {
                if t == 0.0 {
                    0.0
                } else if t <= 0.5 {
                    (2.0 - 1.0 / t).exp() / 3.0
                } else {
                    (4.0 * t - 1.0) / 3.0
                }
            }
            Kind::Blend { w } => (1.0 - w) * t + w * t * t,
            Kind::Dilation { base, b, mb } => base.eval(b * t) / mb,
            Kind::Induced { base, scales } => {
                let mut total = 0.0;
                for b in scales {
                    total += base.eval(b * t);
                }
                total
            }
            Kind::Table { ts, ms } => {
                let n = ts.len();
                if t <= 0.0 {
                    return 0.0;
                }
                match ts.binary_search_by(|x| x.partial_cmp(&t).unwrap()) {
                    Ok(i) => ms[i],
                    Err(i) => {
                        if i >= n {
                            // linear continuation with the last chord slope
                            let slope = (ms[n - 1] - ms[n - 2]) / (ts[n - 1] - ts[n - 2]);
                            ms[n - 1] + slope * (t - ts[n - 1])
                        } else {
                            let frac = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
                            ms[i - 1] + frac * (ms[i] - ms[i - 1])
                        }
                    }
                }
            }
            Kind::Conjugate { base, s_max } => conjugate_value(base, *s_max, t),
        }
    }

    /// ln M(t), computed in log space where the family allows it so that
    /// values below the floating-point underflow threshold stay usable.
    /// `None` where M(t) = 0 (or is not finite).
    pub fn ln_eval(&self, t: f64) -> Option<f64> {
        if t <= 0.0 {
            return None;
        }
        match &self.kind {
            Kind::Power { p } => Some(p * t.ln()),
            Kind::ExpInverse => {
                if t <= 0.5 {
                    Some(2.0 - 1.0 / t - LN3)
                } else {
                    Some(((4.0 * t - 1.0) / 3.0).ln())
                }
            }
            Kind::Blend { w } => {
                if *w == 1.0 {
                    Some(2.0 * t.ln())
                } else {
                    Some(t.ln() + ((1.0 - w) + w * t).ln())
                }
            }
            Kind::Dilation { base, b, mb } => {
                Some(base.ln_eval(b * t)? - mb.ln())
            }
            _ => {
                let v = self.eval(t);
                if v > 0.0 && v.is_finite() {
                    Some(v.ln())
                } else {
                    None
                }
            }
        }
    }

    /// Canonical literal used in reports and on the command line.
    pub fn label(&self) -> String {
        match &self.kind {
            Kind::Power { p } => format!("power:p={p}"),
            Kind::FInf => "finf".into(),
            Kind::ExpInverse => "expinv".into(),
            Kind::Blend { w } => format!("blend:w={w}"),
            Kind::Dilation { base, b, .. } => format!("dilation(b={b}, {})", base.label()),
            Kind::Induced { base, scales } => {
                format!("induced({}, k={})", base.label(), scales.len())
            }
            Kind::Table { ts, .. } => format!("table:len={}", ts.len()),
            Kind::Conjugate { base, .. } => format!("conjugate({})", base.label()),
        }
    }

    /// Midpoint convexity probe: M((t+u)/2) <= (M(t)+M(u))/2 + 1e-10 over
    /// all pairs from `points`.
    pub fn convexity_probe(&self, points: &[f64]) -> Result<(), OrliczError> {
        for (i, &t) in points.iter().enumerate() {
            for &u in &points[i + 1..] {
                let lhs = self.eval(0.5 * (t + u));
                let rhs = 0.5 * (self.eval(t) + self.eval(u));
                if !rhs.is_finite() {
                    continue;
                }
                if lhs > rhs + 1e-10 * rhs.abs().max(1.0) {
                    return Err(OrliczError::InvalidTable(format!(
                        "midpoint convexity fails between t = {t} and t = {u}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parse a command-line Orlicz literal:
    /// `power:p=2 | finf | expinv | blend:w=0.5 | table:<path>`.
    pub fn parse_literal(lit: &str) -> Result<Self, OrliczError> {
        if lit == "finf" {
            return Ok(OrliczFunction::f_inf());
        }
        if lit == "expinv" {
            return Ok(OrliczFunction::exp_inverse());
        }
        if let Some(rest) = lit.strip_prefix("power:p=") {
            let p: f64 = rest
                .parse()
                .map_err(|_| OrliczError::BadLiteral(lit.into()))?;
            return OrliczFunction::power(p);
        }
        if let Some(rest) = lit.strip_prefix("blend:w=") {
            let w: f64 = rest
                .parse()
                .map_err(|_| OrliczError::BadLiteral(lit.into()))?;
            return OrliczFunction::blend(w);
        }
        if let Some(path) = lit.strip_prefix("table:") {
            let text =
                std::fs::read_to_string(path).map_err(|e| OrliczError::Io(e.to_string()))?;
            let mut points = Vec::new();
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let mut parts = line.split_whitespace();
                let parse = |s: Option<&str>| -> Result<f64, OrliczError> {
                    s.ok_or_else(|| {
                        OrliczError::Io(format!("line {}: expected `t M(t)` pair", lineno + 1))
                    })?
                    .parse()
                    .map_err(|e| OrliczError::Io(format!("line {}: {e}", lineno + 1)))
                };
                points.push((parse(parts.next())?, parse(parts.next())?));
            }
            let f = OrliczFunction::from_table(points)?;
            let knots: Vec<f64> = match &f.kind {
                Kind::Table { ts, .. } => ts.clone(),
                _ => unreachable!(),
            };
            f.convexity_probe(&knots)?;
            return Ok(f);
        }
        Err(OrliczError::BadLiteral(lit.into()))
    }
}

impl fmt::Debug for OrliczFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "OrliczFunction({}, normalized={}, degenerate={})",
            self.label(),
            self.normalized,
            self.degenerate
        )
    }
}

/// One Legendre value: sup over s in [0, s_max] of (st - M(s)).
fn conjugate_value(base: &OrliczFunction, s_max: f64, t: f64) -> f64 {
    if t == 0.0 {
        return 0.0;
    }
    let g = |s: f64| s * t - base.eval(s);
    let (mut lo, mut hi) = (0.0f64, s_max);
    for _ in 0..200 {
        if hi - lo <= 1e-16 * s_max {
            break;
        }
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) < g(m2) {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    let s_star = 0.5 * (lo + hi);
    // supremum pushed against the right endpoint with positive slope means
    // the true transform is infinite there
    if s_max - s_star <= 1e-9 * s_max {
        let ds = s_max * 1e-8;
        let slope_end = (base.eval(s_max) - base.eval(s_max - ds)) / ds;
        if t > slope_end + 1e-12 * t.abs().max(1.0) {
            return f64::INFINITY;
        }
    }
    g(s_star).max(g(0.0)).max(g(s_max)).max(0.0)
}

/// Whether f belongs to h_M: the modular of every scalar multiple is finite.
/// Trivially true for finitely supported vectors and finite-valued M; probed
/// over geometric scale factors so conjugates with infinite values answer
/// honestly.
pub fn h_m_membership(m: &OrliczFunction, f: &SeqVec) -> bool {
    for k in 0..=40u32 {
        let s = (k as f64).exp2();
        let mut total = 0.0;
        for (_, v) in f.iter() {
            total += m.eval(v.abs() * s);
        }
        if !total.is_finite() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn registry_members_are_normalized_with_expected_flags() {
        for (f, degenerate) in [
            (OrliczFunction::power(1.0).unwrap(), false),
            (OrliczFunction::power(1.5).unwrap(), false),
            (OrliczFunction::power(4.0).unwrap(), false),
            (OrliczFunction::f_inf(), true),
            (OrliczFunction::exp_inverse(), false),
            (OrliczFunction::blend(0.5).unwrap(), false),
        ] {
            assert!(f.normalized, "{} should be normalized", f.label());
            assert_eq!(f.degenerate, degenerate, "{}", f.label());
            assert_eq!(f.eval(0.0), 0.0);
        }
    }

    #[test]
    fn exp_inverse_is_continuous_and_convex_at_the_seam() {
        let m = OrliczFunction::exp_inverse();
        assert_relative_eq!(m.eval(0.5), 1.0 / 3.0, epsilon = 1e-15);
        assert_relative_eq!(m.eval(1.0), 1.0, epsilon = 1e-15);
        let grid: Vec<f64> = (1..=60).map(|i| i as f64 / 40.0).collect();
        m.convexity_probe(&grid).unwrap();
        // vanishes numerically near zero but ln_eval stays informative
        assert_eq!(m.eval(1e-4), 0.0);
        assert_relative_eq!(m.ln_eval(1e-4).unwrap(), 2.0 - 1e4 - LN3, epsilon = 1e-9);
    }

    #[test]
    fn blend_is_the_midpoint_interpolant() {
        let m = OrliczFunction::blend(0.5).unwrap();
        assert_relative_eq!(m.eval(0.5), 0.375, epsilon = 1e-15);
        assert_relative_eq!(m.eval(2.0), 3.0, epsilon = 1e-15);
    }

    #[test]
    fn dilation_of_power_is_pointwise_the_same_power() {
        let m = OrliczFunction::power(2.0).unwrap();
        for b in [0.1, 0.25, 0.5, 0.9, 1.0] {
            let mb = m.normalized_dilation(b).unwrap();
            assert!(mb.normalized);
            for i in 1..=20 {
                let t = i as f64 / 20.0;
                assert_relative_eq!(mb.eval(t), t * t, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn dilation_rejects_vanishing_points() {
        let m = OrliczFunction::f_inf();
        match m.normalized_dilation(0.25) {
            Err(OrliczError::DegenerateAtPoint(b)) => assert_eq!(b, 0.25),
            other => panic!("expected degenerate-at-point, got {other:?}"),
        }
    }

    #[test]
    fn induced_function_recombines_power_dilations() {
        let m = OrliczFunction::power(2.0).unwrap();
        let f = SeqVec::from_values(&[0.6, 0.8]);
        let mf = m.induced(&f).unwrap();
        assert!(mf.normalized);
        for i in 0..=30 {
            let s = i as f64 / 10.0;
            assert_relative_eq!(mf.eval(s), s * s, epsilon = 1e-12);
        }
        let single = m.induced(&SeqVec::from_values(&[1.0])).unwrap();
        for i in 0..=20 {
            let t = i as f64 / 10.0;
            assert_eq!(single.eval(t), m.eval(t));
        }
        assert!(matches!(
            OrliczFunction::f_inf().induced(&f),
            Err(OrliczError::DegenerateFunction(_))
        ));
    }

    #[test]
    fn table_validation_and_interpolation() {
        let m = OrliczFunction::from_table(vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)]).unwrap();
        assert!(m.normalized);
        assert!(!m.degenerate);
        assert_relative_eq!(m.eval(0.25), 0.125, epsilon = 1e-15);
        assert_relative_eq!(m.eval(0.75), 0.625, epsilon = 1e-15);
        // beyond the last knot: linear continuation
        assert_relative_eq!(m.eval(2.0), 1.0 + 1.5 * 1.0, epsilon = 1e-15);

        assert!(OrliczFunction::from_table(vec![(0.1, 0.0), (1.0, 1.0)]).is_err());
        assert!(
            OrliczFunction::from_table(vec![(0.0, 0.0), (0.5, 0.9), (1.0, 1.0)]).is_err(),
            "concave table must be rejected"
        );
        let degenerate =
            OrliczFunction::from_table(vec![(0.0, 0.0), (0.5, 0.0), (1.0, 1.0)]).unwrap();
        assert!(degenerate.degenerate);
    }

    #[test]
    fn conjugate_of_square_is_quarter_square() {
        let m = OrliczFunction::power(2.0).unwrap();
        let conj = m.complementary(DEFAULT_CONJUGATE_S_MAX).unwrap();
        assert!(!conj.normalized);
        assert!(!conj.degenerate);
        assert_eq!(conj.eval(0.0), 0.0);
        for i in 1..=20 {
            let t = i as f64 / 10.0;
            assert_relative_eq!(conj.eval(t), t * t / 4.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn conjugate_of_identity_is_zero_then_infinite() {
        let m = OrliczFunction::power(1.0).unwrap();
        let conj = m.complementary(DEFAULT_CONJUGATE_S_MAX).unwrap();
        assert!(conj.degenerate);
        for t in [0.1, 0.5, 0.9, 1.0] {
            assert!(conj.eval(t).abs() <= 1e-9, "M*({t}) = {}", conj.eval(t));
        }
        assert_eq!(conj.eval(1.5), f64::INFINITY);
        assert_eq!(conj.eval(10.0), f64::INFINITY);
    }

    #[test]
    fn h_m_membership_probes_scalar_multiples() {
        let f = SeqVec::from_values(&[10.0]);
        assert!(h_m_membership(&OrliczFunction::power(2.0).unwrap(), &f));
        assert!(h_m_membership(&OrliczFunction::f_inf(), &f));
        assert!(h_m_membership(&OrliczFunction::power(1.5).unwrap(), &SeqVec::new()));
        // the conjugate of F_1 takes infinite values, so scalar multiples escape
        let conj = OrliczFunction::power(1.0)
            .unwrap()
            .complementary(DEFAULT_CONJUGATE_S_MAX)
            .unwrap();
        assert!(!h_m_membership(&conj, &f));
    }

    #[test]
    fn literals_round_trip() {
        for lit in ["power:p=2", "finf", "expinv", "blend:w=0.5"] {
            let f = OrliczFunction::parse_literal(lit).unwrap();
            assert_eq!(f.label(), lit);
        }
        assert!(OrliczFunction::parse_literal("power:p=0.5").is_err());
        assert!(OrliczFunction::parse_literal("mystery").is_err());
    }
}
