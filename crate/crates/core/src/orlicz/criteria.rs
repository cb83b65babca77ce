//! Matuszewska-style index estimation, the delta-2 condition at zero, the
//! Lechner verdict for Orlicz functions, and a grid diagnostic for
//! equivalence near zero.
//!
//! Everything here works in log space (`OrliczFunction::ln_eval`), so
//! functions whose values underflow f64 near zero — the exp-inverse family
//! in particular — still produce usable ratios.

use super::function::OrliczFunction;
use super::OrliczError;
use crate::report::{banded_verdict, CriterionReport, Method, Truncation, Verdict};
use serde::Serialize;

/// Sample layout for `indices_estimate`: log-spaced dilation points b in
/// [b_floor, 1] and argument points t in [t_floor, t_cut].
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IndicesGrid {
    pub b_points: usize,
    pub t_points: usize,
    pub b_floor: f64,
    pub t_floor: f64,
    pub t_cut: f64,
}

impl Default for IndicesGrid {
    fn default() -> Self {
        IndicesGrid {
            b_points: 32,
            t_points: 48,
            b_floor: 1e-4,
            t_floor: 1e-8,
            t_cut: 0.5,
        }
    }
}

/// Index estimates with their stability diagnostics.  `alpha`/`beta` are the
/// grid min/max of q(b, t) = ln M_b(t) / ln t; the shift fields record how
/// the estimates move when `t_floor` is halved, and `beta_infinite` flags an
/// upper estimate that grows without bound under that refinement.
#[derive(Debug, Clone, Serialize)]
pub struct IndicesReport {
    pub subject: String,
    pub alpha: f64,
    pub beta: f64,
    pub beta_infinite: bool,
    pub alpha_shift: f64,
    pub beta_growth: f64,
    pub grid: IndicesGrid,
}

fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (ln_lo, ln_hi) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| {
            let u = i as f64 / (points - 1) as f64;
            (ln_lo + u * (ln_hi - ln_lo)).exp()
        })
        .collect()
}

fn scan_indices(m: &OrliczFunction, grid: &IndicesGrid, t_floor: f64) -> Option<(f64, f64)> {
    let bs = log_grid(grid.b_floor, 1.0, grid.b_points);
    let ts = log_grid(t_floor, grid.t_cut, grid.t_points);
    let mut q_min = f64::INFINITY;
    let mut q_max = f64::NEG_INFINITY;
    for &b in &bs {
        let ln_mb = match m.ln_eval(b) {
            Some(v) => v,
            None => continue,
        };
        for &t in &ts {
            let ln_mbt = match m.ln_eval(b * t) {
                Some(v) => v,
                None => continue,
            };
            let q = (ln_mbt - ln_mb) / t.ln();
            if q.is_finite() {
                q_min = q_min.min(q);
                q_max = q_max.max(q);
            }
        }
    }
    if q_min.is_finite() {
        let alpha = q_min.max(1.0);
        Some((alpha, q_max.max(alpha)))
    } else {
        None
    }
}

/// Estimate the lower and upper dilation indices of a normalized,
/// non-degenerate Orlicz function on a finite grid.
pub fn indices_estimate(
    m: &OrliczFunction,
    grid: &IndicesGrid,
) -> Result<IndicesReport, OrliczError> {
    if m.degenerate {
        return Err(OrliczError::DegenerateFunction(m.label()));
    }
    if !m.normalized {
        return Err(OrliczError::NotNormalized {
            label: m.label(),
            value: m.eval(1.0),
        });
    }
    if grid.b_points < 2 || grid.t_points < 2 {
        return Err(OrliczError::InvalidParameter(
            "indices grid needs at least two points per axis".into(),
        ));
    }
    let (alpha, beta) = scan_indices(m, grid, grid.t_floor).ok_or_else(|| {
        OrliczError::InvalidParameter("indices grid produced no usable samples".into())
    })?;
    let (alpha2, beta2) = scan_indices(m, grid, grid.t_floor * 0.5).ok_or_else(|| {
        OrliczError::InvalidParameter("refined indices grid produced no usable samples".into())
    })?;
    let beta_growth = beta2 / beta;
    Ok(IndicesReport {
        subject: m.label(),
        alpha,
        beta,
        beta_infinite: beta_growth >= 1.2 && beta2 > 16.0,
        alpha_shift: (alpha2 - alpha).abs(),
        beta_growth,
        grid: *grid,
    })
}

const DELTA2_STABLE_FACTOR: f64 = 1.05;
const DELTA2_GROWTH_FACTOR: f64 = 1.5;

fn clamped_exp(x: f64) -> f64 {
    if x > 700.0 {
        f64::MAX
    } else {
        x.exp()
    }
}

/// Probe M(2t)/M(t) along a decreasing grid (default: 64 log-spaced points
/// from 1/2 down to 1e-9).  Holds when the running sup has stabilized over
/// the small-t half of the grid; fails when it keeps growing by more than a
/// factor of 1.5.
pub fn delta2_at_zero(m: &OrliczFunction, t_samples: Option<&[f64]>) -> CriterionReport {
    let subject = m.label();
    let default_grid;
    let grid: &[f64] = match t_samples {
        Some(g) => g,
        None => {
            default_grid = log_grid(1e-9, 0.5, 64).into_iter().rev().collect::<Vec<_>>();
            &default_grid
        }
    };
    let mut report = CriterionReport {
        criterion: "delta2-at-zero".into(),
        subject,
        verdict: Verdict::Inconclusive,
        estimate: 0.0,
        truncation: Truncation::single(grid.len() as u64),
        method: Method::TruncatedSup,
        tolerance: DELTA2_STABLE_FACTOR,
        notes: String::new(),
    };
    if m.degenerate {
        report.notes = "degenerate function: the ratio is 0/0 below the vanishing point, \
                        so the hypothesis of the criterion is not met"
            .into();
        return report;
    }
    // ln M(2t) - ln M(t), kept in log space so divergent families do not
    // saturate to floating-point infinity
    let mut ln_ratios = Vec::with_capacity(grid.len());
    let mut skipped = 0usize;
    for &t in grid {
        match (m.ln_eval(2.0 * t), m.ln_eval(t)) {
            (Some(hi), Some(lo)) => ln_ratios.push(hi - lo),
            _ => skipped += 1,
        }
    }
    if ln_ratios.len() < 8 {
        report.notes = format!(
            "only {} of {} grid points were resolvable; no verdict",
            ln_ratios.len(),
            grid.len()
        );
        return report;
    }
    let half = ln_ratios.len() / 2;
    let ln_half = ln_ratios[..half].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ln_full = ln_ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    report.estimate = clamped_exp(ln_full);
    report.verdict = if ln_full <= ln_half + DELTA2_STABLE_FACTOR.ln() {
        Verdict::Holds
    } else if ln_full >= ln_half + DELTA2_GROWTH_FACTOR.ln() {
        Verdict::Fails
    } else {
        Verdict::Inconclusive
    };
    report.notes = format!(
        "sup of M(2t)/M(t) over t in [{:.3e}, {:.3e}]: {:.6e} on the large-t half, {:.6e} overall{}{}",
        grid.last().copied().unwrap_or(0.0),
        grid.first().copied().unwrap_or(0.0),
        clamped_exp(ln_half),
        report.estimate,
        if ln_full > 700.0 {
            " (clamped: beyond f64 range)"
        } else {
            ""
        },
        if skipped > 0 {
            format!("; {skipped} unresolvable points skipped")
        } else {
            String::new()
        }
    );
    report
}

const LECHNER_MARGIN: f64 = 0.05;
const LECHNER_BAND: f64 = 1e-3;
const LECHNER_STABILITY: f64 = 0.01;

/// Verdict on the lower-index condition for an Orlicz function: holds when
/// the estimated lower index clears 1 by a margin with stable diagnostics,
/// fails when it pins to 1, inconclusive in the band between.
pub fn lechner_verdict_orlicz(m: &OrliczFunction) -> Result<CriterionReport, OrliczError> {
    let grid = IndicesGrid::default();
    let indices = indices_estimate(m, &grid)?;
    let threshold = 1.0 + LECHNER_MARGIN;
    let mut verdict = banded_verdict(
        true,
        indices.alpha,
        threshold,
        LECHNER_BAND,
        Method::TruncatedSup,
    );
    let stable = indices.alpha_shift <= LECHNER_STABILITY;
    let mut notes = format!(
        "alpha={:.6}, beta={:.6}{}, alpha_shift={:.2e}, beta_growth={:.4}",
        indices.alpha,
        indices.beta,
        if indices.beta_infinite {
            " (flagged infinite)"
        } else {
            ""
        },
        indices.alpha_shift,
        indices.beta_growth,
    );
    if !stable {
        verdict = Verdict::Inconclusive;
        notes.push_str("; lower-index estimate unstable under t_floor refinement");
    }
    Ok(CriterionReport {
        criterion: "lechner-orlicz".into(),
        subject: m.label(),
        verdict,
        estimate: indices.alpha,
        truncation: Truncation::new(grid.b_points as u64, grid.t_points as u64),
        method: Method::TruncatedSup,
        tolerance: threshold,
        notes,
    })
}

/// Possible outcomes of the near-zero equivalence scan.  A grid diagnostic
/// cannot certify equivalence, so the positive arm is deliberately weak.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquivalenceVerdict {
    ConsistentWithEquivalence,
    InconsistentOnGrid,
}

/// Best dilation found by the equivalence scan, with the two-sided
/// constants achieved there and their behavior under grid refinement.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub m_label: String,
    pub n_label: String,
    pub best_b: f64,
    /// sup over the t grid of M(t)/N(best_b * t)
    pub sup_c: f64,
    /// inf over the t grid of M(t)/N(best_b * t)
    pub inf_c: f64,
    /// max(sup_c, 1/inf_c): the two-sided distortion at best_b
    pub objective: f64,
    /// the same objective after pushing the grid to t_min/8
    pub refined_objective: f64,
    pub verdict: EquivalenceVerdict,
}

/// Log-spaced default for the dilation axis: 2^(k/8) for k in -24..=24,
/// covering [1/8, 8] and containing 1 and 2 exactly.
pub fn default_b_grid() -> Vec<f64> {
    (-24..=24).map(|k| (k as f64 / 8.0).exp2()).collect()
}

/// Log-spaced default for the argument axis: 48 points in [1e-6, 1/2].
pub fn default_t_grid() -> Vec<f64> {
    log_grid(1e-6, 0.5, 48)
}

/// ln of the two-sided distortion of M(t)/N(bt) over the grid, or None when
/// no grid point is resolvable for this b.
fn ln_objective(
    m: &OrliczFunction,
    n: &OrliczFunction,
    b: f64,
    t_grid: &[f64],
) -> Option<(f64, f64, f64)> {
    let mut sup_d = f64::NEG_INFINITY;
    let mut inf_d = f64::INFINITY;
    for &t in t_grid {
        let (ln_m, ln_n) = (m.ln_eval(t)?, n.ln_eval(b * t)?);
        let d = ln_m - ln_n;
        sup_d = sup_d.max(d);
        inf_d = inf_d.min(d);
    }
    if sup_d.is_finite() && inf_d.is_finite() {
        Some((sup_d, inf_d, sup_d.max(-inf_d)))
    } else {
        None
    }
}

/// Scan dilations b for two-sided constants c <= M(t)/N(bt) <= C on the
/// grid, then re-check the best b on a grid extended to t_min/8.  Ratios
/// that keep inflating under the extension are inconsistent with
/// equivalence near zero.
pub fn equivalence_near_zero_diagnostic(
    m: &OrliczFunction,
    n: &OrliczFunction,
    b_grid: &[f64],
    t_grid: &[f64],
) -> EquivalenceReport {
    let mut best: Option<(f64, f64, f64, f64)> = None;
    for &b in b_grid {
        if let Some((sup_d, inf_d, obj)) = ln_objective(m, n, b, t_grid) {
            if best.map_or(true, |(_, _, _, cur)| obj < cur) {
                best = Some((b, sup_d, inf_d, obj));
            }
        }
    }
    let (best_b, sup_d, inf_d, obj_ln) = best.unwrap_or((1.0, f64::INFINITY, 0.0, f64::INFINITY));
    let t_min = t_grid.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut refined: Vec<f64> = t_grid.to_vec();
    refined.extend([t_min / 2.0, t_min / 4.0, t_min / 8.0]);
    let refined_ln = ln_objective(m, n, best_b, &refined)
        .map(|(_, _, o)| o)
        .unwrap_or(f64::INFINITY);
    let consistent = obj_ln.is_finite()
        && refined_ln.is_finite()
        && refined_ln <= obj_ln + DELTA2_GROWTH_FACTOR.ln();
    EquivalenceReport {
        m_label: m.label(),
        n_label: n.label(),
        best_b,
        sup_c: clamped_exp(sup_d),
        inf_c: clamped_exp(inf_d),
        objective: clamped_exp(obj_ln),
        refined_objective: clamped_exp(refined_ln),
        verdict: if consistent {
            EquivalenceVerdict::ConsistentWithEquivalence
        } else {
            EquivalenceVerdict::InconsistentOnGrid
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqvec::SeqVec;
    use approx::assert_relative_eq;

    fn registry() -> Vec<OrliczFunction> {
        vec![
            OrliczFunction::power(1.0).unwrap(),
            OrliczFunction::power(1.5).unwrap(),
            OrliczFunction::power(2.0).unwrap(),
            OrliczFunction::power(4.0).unwrap(),
            OrliczFunction::blend(0.5).unwrap(),
            OrliczFunction::exp_inverse(),
        ]
    }

    #[test]
    fn power_indices_are_exact_on_any_grid() {
        for p in [1.0, 1.5, 2.0, 4.0] {
            let m = OrliczFunction::power(p).unwrap();
            let rep = indices_estimate(&m, &IndicesGrid::default()).unwrap();
            assert_relative_eq!(rep.alpha, p, epsilon = 1e-9);
            assert_relative_eq!(rep.beta, p, epsilon = 1e-9);
            assert!(!rep.beta_infinite);
            assert!(rep.alpha_shift <= 1e-9);
        }
    }

    #[test]
    fn exp_inverse_upper_index_is_flagged_infinite() {
        let rep =
            indices_estimate(&OrliczFunction::exp_inverse(), &IndicesGrid::default()).unwrap();
        assert!(rep.beta_infinite, "beta = {}, growth = {}", rep.beta, rep.beta_growth);
        assert!(rep.alpha > 1.4, "alpha = {}", rep.alpha);
        assert!(rep.alpha_shift <= 0.01);
    }

    #[test]
    fn blend_lower_index_pins_to_one() {
        let rep = indices_estimate(
            &OrliczFunction::blend(0.5).unwrap(),
            &IndicesGrid::default(),
        )
        .unwrap();
        assert!((rep.alpha - 1.0).abs() <= 1e-3, "alpha = {}", rep.alpha);
        assert!(rep.beta > 1.3 && rep.beta < 1.6, "beta = {}", rep.beta);
        assert!(!rep.beta_infinite);
    }

    #[test]
    fn indices_reject_degenerate_and_unnormalized_functions() {
        assert!(matches!(
            indices_estimate(&OrliczFunction::f_inf(), &IndicesGrid::default()),
            Err(OrliczError::DegenerateFunction(_))
        ));
        let conj = OrliczFunction::power(2.0)
            .unwrap()
            .complementary(super::super::function::DEFAULT_CONJUGATE_S_MAX)
            .unwrap();
        assert!(matches!(
            indices_estimate(&conj, &IndicesGrid::default()),
            Err(OrliczError::NotNormalized { .. })
        ));
    }

    #[test]
    fn delta2_ratio_of_powers_is_two_to_the_p() {
        for (p, want) in [(1.0, 2.0), (2.0, 4.0), (4.0, 16.0)] {
            let rep = delta2_at_zero(&OrliczFunction::power(p).unwrap(), None);
            assert_eq!(rep.verdict, Verdict::Holds, "p = {p}");
            assert_relative_eq!(rep.estimate, want, epsilon = 1e-9);
        }
    }

    #[test]
    fn delta2_fails_for_exp_inverse_and_skips_degenerate() {
        let rep = delta2_at_zero(&OrliczFunction::exp_inverse(), None);
        assert_eq!(rep.verdict, Verdict::Fails);
        assert!(rep.estimate >= 1e9);

        let rep = delta2_at_zero(&OrliczFunction::f_inf(), None);
        assert_eq!(rep.verdict, Verdict::Inconclusive);
        assert!(rep.notes.contains("hypothesis"));
    }

    #[test]
    fn delta2_holds_for_the_blend() {
        let rep = delta2_at_zero(&OrliczFunction::blend(0.5).unwrap(), None);
        assert_eq!(rep.verdict, Verdict::Holds);
        // M(2t)/M(t) = 2(1+2t)/(1+t) <= 3 on (0, 1/2]
        assert!(rep.estimate <= 3.0 + 1e-9);
    }

    #[test]
    fn delta2_verdict_matches_finite_beta_flag_on_registry() {
        for m in registry() {
            let delta2 = delta2_at_zero(&m, None);
            let idx = indices_estimate(&m, &IndicesGrid::default()).unwrap();
            if idx.beta_infinite {
                assert_eq!(delta2.verdict, Verdict::Fails, "{}", m.label());
            } else {
                assert_eq!(delta2.verdict, Verdict::Holds, "{}", m.label());
            }
        }
    }

    #[test]
    fn lechner_orlicz_separates_the_registry() {
        for p in [1.5, 2.0, 4.0] {
            let rep = lechner_verdict_orlicz(&OrliczFunction::power(p).unwrap()).unwrap();
            assert_eq!(rep.verdict, Verdict::Holds, "p = {p}");
        }
        let rep = lechner_verdict_orlicz(&OrliczFunction::exp_inverse()).unwrap();
        assert_eq!(rep.verdict, Verdict::Holds);

        let rep = lechner_verdict_orlicz(&OrliczFunction::power(1.0).unwrap()).unwrap();
        assert_eq!(rep.verdict, Verdict::Fails);
        let rep = lechner_verdict_orlicz(&OrliczFunction::blend(0.5).unwrap()).unwrap();
        assert_eq!(rep.verdict, Verdict::Fails);

        assert!(matches!(
            lechner_verdict_orlicz(&OrliczFunction::f_inf()),
            Err(OrliczError::DegenerateFunction(_))
        ));
    }

    #[test]
    fn equivalence_of_a_function_with_itself_is_the_identity_dilation() {
        let m = OrliczFunction::power(2.0).unwrap();
        let rep =
            equivalence_near_zero_diagnostic(&m, &m, &default_b_grid(), &default_t_grid());
        assert_eq!(rep.verdict, EquivalenceVerdict::ConsistentWithEquivalence);
        assert_relative_eq!(rep.best_b, 1.0, epsilon = 1e-12);
        assert_relative_eq!(rep.sup_c, 1.0, epsilon = 1e-9);
        assert_relative_eq!(rep.inf_c, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn equivalence_recovers_a_compressed_copy() {
        // N(t) = M(t/2) = t^2/4; the scan should undo the compression
        let m = OrliczFunction::power(2.0).unwrap();
        let n = m.induced(&SeqVec::from_values(&[0.5])).unwrap();
        let rep =
            equivalence_near_zero_diagnostic(&m, &n, &default_b_grid(), &default_t_grid());
        assert_eq!(rep.verdict, EquivalenceVerdict::ConsistentWithEquivalence);
        assert_relative_eq!(rep.best_b, 2.0, epsilon = 1e-12);
        assert_relative_eq!(rep.sup_c, 1.0, epsilon = 1e-9);
        assert_relative_eq!(rep.inf_c, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn equivalence_rejects_different_powers() {
        let rep = equivalence_near_zero_diagnostic(
            &OrliczFunction::power(2.0).unwrap(),
            &OrliczFunction::power(3.0).unwrap(),
            &default_b_grid(),
            &default_t_grid(),
        );
        assert_eq!(rep.verdict, EquivalenceVerdict::InconsistentOnGrid);
        assert!(rep.refined_objective > rep.objective);
    }
}
