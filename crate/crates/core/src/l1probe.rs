//! Empirical detection of lower-ell-1 behavior in disjointly supported
//! families: sign-pattern profiles of averaged norms, the exact sup-norm
//! identity for disjoint sums, and the prefix-norm inequality that links
//! summing functionals to norm lower bounds.

use crate::marcinkiewicz::{lorentz_d1_norm, m_norm, BlockFamily};
use crate::orlicz::{scalar_luxemburg_norm, OrliczFunction};
use crate::seqvec::{disjoint_sum, SeqError, SeqVec};
use crate::weights::Weight;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProbeError {
    #[error("family is empty")]
    EmptyFamily,
    #[error("family member {index} has norm {value}; cannot normalize")]
    UnnormalizableMember { index: usize, value: f64 },
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// The norm functionals the probes understand.  `Marcinkiewicz` carries the
/// scale sequence s (a primitive), `LorentzD1` the weight itself.
pub enum NormFunctional {
    Marcinkiewicz(Weight),
    LorentzD1(Weight),
    Orlicz(OrliczFunction),
    Sup,
}

impl NormFunctional {
    pub fn eval(&self, f: &SeqVec) -> f64 {
        match self {
            NormFunctional::Marcinkiewicz(s) => m_norm(f, s),
            NormFunctional::LorentzD1(w) => lorentz_d1_norm(f, w),
            NormFunctional::Orlicz(m) => scalar_luxemburg_norm(m, f),
            NormFunctional::Sup => f.sup_norm(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            NormFunctional::Marcinkiewicz(s) => format!("marcinkiewicz({})", s.label()),
            NormFunctional::LorentzD1(w) => format!("lorentz-d1({})", w.label()),
            NormFunctional::Orlicz(m) => format!("orlicz({})", m.label()),
            NormFunctional::Sup => "sup".into(),
        }
    }
}

/// Declared trend of a lower-constant profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Trend {
    BoundedBelow,
    Decaying,
    Inconclusive,
}

/// Lower-constant profile c_m = min over probed sign patterns of
/// || sum_{n<=m} eps_n f_n || / m for internally unit-normalized members.
#[derive(Debug, Clone, Serialize)]
pub struct L1Profile {
    pub norm: String,
    /// pairs (m, c_m)
    pub c: Vec<(u64, f64)>,
    pub trend: Trend,
    pub probe_count: usize,
    /// last/first ratio at or below this is declared decaying
    pub decay_threshold: f64,
    /// last/first ratio at or above this is declared bounded-below
    pub bounded_threshold: f64,
}

const DECAY_THRESHOLD: f64 = 0.5;
const BOUNDED_THRESHOLD: f64 = 0.7;

/// Probe the averaged norm of signed partial sums of a disjoint family.
/// Members are rescaled to unit norm internally; `probes` random sign
/// patterns per m are tried on top of the all-ones pattern (extremal for
/// the rearrangement-invariant norms in scope).  The trend compares the
/// last profile value against the first.
pub fn l1_lower_profile(
    norm: &NormFunctional,
    family: &BlockFamily,
    m_max: usize,
    probes: usize,
    seed: u64,
) -> Result<L1Profile, ProbeError> {
    let m_used = m_max.min(family.members.len());
    if m_used == 0 {
        return Err(ProbeError::EmptyFamily);
    }
    let mut unit_members = Vec::with_capacity(m_used);
    for (index, f) in family.members.iter().take(m_used).enumerate() {
        let v = norm.eval(f);
        if !(v.is_finite() && v > 0.0) {
            return Err(ProbeError::UnnormalizableMember { index, value: v });
        }
        unit_members.push(f.scale(1.0 / v));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Vec::with_capacity(m_used);
    for m in 1..=m_used {
        let mut best = f64::INFINITY;
        for probe in 0..=probes {
            let mut sum = SeqVec::new();
            for member in unit_members.iter().take(m) {
                // probe 0 is the all-ones pattern
                let eps = if probe == 0 || rng.gen_bool(0.5) {
                    1.0
                } else {
                    -1.0
                };
                sum = sum.add(&member.scale(eps));
            }
            best = best.min(norm.eval(&sum) / m as f64);
        }
        c.push((m as u64, best));
    }
    let first = c[0].1;
    let last = c[c.len() - 1].1;
    let trend = if c.len() < 2 || first <= 0.0 {
        Trend::Inconclusive
    } else if last / first <= DECAY_THRESHOLD {
        Trend::Decaying
    } else if last / first >= BOUNDED_THRESHOLD {
        Trend::BoundedBelow
    } else {
        Trend::Inconclusive
    };
    Ok(L1Profile {
        norm: norm.label(),
        c,
        trend,
        probe_count: probes,
        decay_threshold: DECAY_THRESHOLD,
        bounded_threshold: BOUNDED_THRESHOLD,
    })
}

/// Result of checking || sum a_n f_n ||_inf = max_n |a_n| * ||f_n||_inf on
/// random coefficient vectors, together with the two-sided bounds using
/// c = min_n ||f_n||_inf and C = max_n ||f_n||_inf.
#[derive(Debug, Clone, Serialize)]
pub struct LinfEquivalenceReport {
    pub family_size: usize,
    pub lower_constant: f64,
    pub upper_constant: f64,
    pub samples: usize,
    pub max_equality_gap: f64,
    pub exact_equality: bool,
    pub two_sided_ok: bool,
}

/// Verify the disjoint-sum sup-norm identity on random coefficients.
pub fn linf_disjoint_equivalence(
    family: &BlockFamily,
    samples: usize,
    seed: u64,
) -> Result<LinfEquivalenceReport, ProbeError> {
    if family.members.is_empty() {
        return Err(ProbeError::EmptyFamily);
    }
    let sup_norms: Vec<f64> = family.members.iter().map(|f| f.sup_norm()).collect();
    for (index, &v) in sup_norms.iter().enumerate() {
        if !(v.is_finite() && v > 0.0) {
            return Err(ProbeError::UnnormalizableMember { index, value: v });
        }
    }
    let lower = sup_norms.iter().cloned().fold(f64::INFINITY, f64::min);
    let upper = sup_norms.iter().cloned().fold(0.0f64, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_gap = 0.0f64;
    let mut two_sided_ok = true;
    for _ in 0..samples {
        let coeffs: Vec<f64> = (0..family.members.len())
            .map(|_| rng.gen_range(-10.0..10.0))
            .collect();
        let combined = disjoint_sum(&family.members, &SeqVec::from_values(&coeffs))?;
        let lhs = combined.sup_norm();
        let rhs = coeffs
            .iter()
            .zip(&sup_norms)
            .map(|(a, s)| a.abs() * s)
            .fold(0.0f64, f64::max);
        max_gap = max_gap.max((lhs - rhs).abs());
        let coeff_sup = coeffs.iter().map(|a| a.abs()).fold(0.0f64, f64::max);
        let tol = 1e-12 * coeff_sup.max(1.0) * upper.max(1.0);
        if lhs < lower * coeff_sup - tol || lhs > upper * coeff_sup + tol {
            two_sided_ok = false;
        }
    }
    let scale = upper.max(1.0) * 10.0;
    Ok(LinfEquivalenceReport {
        family_size: family.members.len(),
        lower_constant: lower,
        upper_constant: upper,
        samples,
        max_equality_gap: max_gap,
        exact_equality: max_gap <= 1e-12 * scale,
        two_sided_ok,
    })
}

/// Result of probing |sum_{j<=n} f_j| <= K * (||sum_{j<=n} e_j|| / n) ^ (-1)
/// ... the summing-functional bound: the report records the empirical
/// constant K = max over samples of |sum f_j| * (prefix_n / n) / ||f|| and
/// whether the prefix norms grow linearly (the hypothesis under which the
/// bound is useful).
#[derive(Debug, Clone, Serialize)]
pub struct PStarReport {
    pub norm: String,
    pub support_bound: u64,
    pub samples: usize,
    /// max over probed f of |sum f_j| * (prefix_n / n) / ||f||
    pub empirical_k: f64,
    /// prefix norm at the support bound, i.e. ||sum_{j<=n} e_j||
    pub prefix_norm: f64,
    /// (prefix_n / n) / (prefix_1 / 1)
    pub prefix_ratio: f64,
    /// true when the normalized prefix norm has not collapsed below 1/2
    pub prefix_linear: bool,
}

/// Check the prefix-norm (summing functional) inequality on random vectors
/// supported in 1..=n.  The all-ones vector is always included, so the
/// extremal ratio for the exact cases is attained.
pub fn p_star_inequality_check(
    norm: &NormFunctional,
    n: u64,
    samples: usize,
    seed: u64,
) -> PStarReport {
    assert!(n >= 1, "support bound must be at least 1");
    let ones = |k: u64| SeqVec::from_values(&vec![1.0; k as usize]);
    let prefix_1 = norm.eval(&ones(1));
    let prefix_n = norm.eval(&ones(n));
    let prefix_ratio = (prefix_n / n as f64) / prefix_1;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut k_max = 0.0f64;
    for sample in 0..=samples {
        let f = if sample == 0 {
            ones(n)
        } else {
            SeqVec::from_values(
                &(0..n).map(|_| rng.gen_range(-10.0..10.0)).collect::<Vec<_>>(),
            )
        };
        let norm_f = norm.eval(&f);
        if !(norm_f.is_finite() && norm_f > 0.0) {
            continue;
        }
        let total: f64 = f.iter().map(|(_, v)| v).sum();
        k_max = k_max.max(total.abs() * (prefix_n / n as f64) / norm_f);
    }
    PStarReport {
        norm: norm.label(),
        support_bound: n,
        samples,
        empirical_k: k_max,
        prefix_norm: prefix_n,
        prefix_ratio,
        prefix_linear: prefix_ratio >= 0.5,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::marcinkiewicz::{b_km, block_family, Scheme};
    use approx::assert_relative_eq;

    fn truncated_block_sup(w: &Weight, m: u64, j: u64) -> f64 {
        (1..=j).map(|k| b_km(w, k, m)).fold(0.0f64, f64::max)
    }

    #[test]
    fn harmonic_weight_profile_is_bounded_below() {
        let w = Weight::power_deriv(1.0).unwrap();
        let family = block_family(&w, 6, 200, Scheme::ColumnMajor);
        let norm = NormFunctional::Marcinkiewicz(w.primitive());
        let profile = l1_lower_profile(&norm, &family, 6, 8, 7).unwrap();
        assert_eq!(profile.trend, Trend::BoundedBelow);
        for &(m, c_m) in &profile.c {
            let want = truncated_block_sup(&w, m, 200);
            assert!(
                (c_m - want).abs() <= 0.02 * want,
                "m = {m}: c_m = {c_m}, block sup = {want}"
            );
        }
    }

    #[test]
    fn square_root_weight_profile_decays() {
        let w = Weight::power_deriv(0.5).unwrap();
        let family = block_family(&w, 6, 200, Scheme::ColumnMajor);
        let norm = NormFunctional::Marcinkiewicz(w.primitive());
        let profile = l1_lower_profile(&norm, &family, 6, 8, 7).unwrap();
        assert_eq!(profile.trend, Trend::Decaying);
        let c_6 = profile.c[5].1;
        assert!(c_6 < 0.45, "c_6 = {c_6} should track 6^(-1/2)");
        assert!(c_6 > 0.35, "c_6 = {c_6} should track 6^(-1/2)");
    }

    #[test]
    fn sup_norm_profile_of_unit_blocks_is_one_over_m() {
        let family = BlockFamily {
            members: (1..=6).map(SeqVec::unit).collect(),
            origin: "unit blocks".into(),
        };
        let profile = l1_lower_profile(&NormFunctional::Sup, &family, 6, 8, 7).unwrap();
        assert_eq!(profile.trend, Trend::Decaying);
        for &(m, c_m) in &profile.c {
            assert_relative_eq!(c_m, 1.0 / m as f64, epsilon = 1e-15);
        }
    }

    #[test]
    fn all_ones_pattern_is_extremal_for_rearrangement_invariant_norms() {
        let w = Weight::power_deriv(1.0).unwrap();
        let family = block_family(&w, 5, 60, Scheme::ColumnMajor);
        for norm in [
            NormFunctional::Marcinkiewicz(w.primitive()),
            NormFunctional::LorentzD1(w.clone()),
            NormFunctional::Orlicz(OrliczFunction::power(2.0).unwrap()),
            NormFunctional::Sup,
        ] {
            let no_probes = l1_lower_profile(&norm, &family, 5, 0, 7).unwrap();
            let probed = l1_lower_profile(&norm, &family, 5, 16, 7).unwrap();
            for (a, b) in no_probes.c.iter().zip(&probed.c) {
                assert_relative_eq!(a.1, b.1, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn sup_norm_identity_is_exact_on_disjoint_blocks() {
        let family = BlockFamily {
            members: vec![SeqVec::unit(1), SeqVec::unit(2), SeqVec::unit(3)],
            origin: "unit blocks".into(),
        };
        let report = linf_disjoint_equivalence(&family, 50, 7).unwrap();
        assert!(report.exact_equality, "gap = {}", report.max_equality_gap);
        assert!(report.two_sided_ok);
        assert_eq!(report.lower_constant, 1.0);
        assert_eq!(report.upper_constant, 1.0);

        let mixed = BlockFamily {
            members: vec![SeqVec::unit(1), SeqVec::unit(2).scale(2.0)],
            origin: "mixed".into(),
        };
        let report = linf_disjoint_equivalence(&mixed, 50, 7).unwrap();
        assert!(report.exact_equality);
        assert_eq!(report.lower_constant, 1.0);
        assert_eq!(report.upper_constant, 2.0);
        // the specific coefficient pattern from the identity: (1, 1) -> 2
        let combined = disjoint_sum(&mixed.members, &SeqVec::from_values(&[1.0, 1.0])).unwrap();
        assert_eq!(combined.sup_norm(), 2.0);
    }

    #[test]
    fn prefix_norms_of_the_harmonic_scale_grow_sublinearly() {
        let norm = NormFunctional::Marcinkiewicz(Weight::harmonic());
        let report = p_star_inequality_check(&norm, 64, 100, 7);
        assert!(!report.prefix_linear, "ratio = {}", report.prefix_ratio);
        // prefix norm of n ones under m(H) is n / H_n
        let h_64: f64 = (1..=64).map(|j| 1.0 / j as f64).sum();
        assert_relative_eq!(report.prefix_norm, 64.0 / h_64, epsilon = 1e-12);
    }

    #[test]
    fn bounded_scales_keep_prefix_norms_linear() {
        let norm = NormFunctional::Marcinkiewicz(Weight::geometric());
        let report = p_star_inequality_check(&norm, 64, 100, 7);
        assert!(report.prefix_linear, "ratio = {}", report.prefix_ratio);
        assert!(report.empirical_k <= 2.0, "K = {}", report.empirical_k);
    }

    #[test]
    fn the_summing_constant_of_ell_1_is_one() {
        let norm = NormFunctional::LorentzD1(Weight::power(0.0).unwrap());
        let report = p_star_inequality_check(&norm, 32, 200, 7);
        assert!(report.prefix_linear);
        assert_relative_eq!(report.prefix_ratio, 1.0, epsilon = 1e-12);
        assert!(report.empirical_k <= 1.0 + 1e-12, "K = {}", report.empirical_k);
        assert!(report.empirical_k >= 1.0 - 1e-12, "K = {}", report.empirical_k);
    }
}
