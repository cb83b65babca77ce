//! Modulars and Luxemburg norms for constant and index-dependent Orlicz
//! families, plus the disjoint-block factorization identity.

use super::function::OrliczFunction;
use super::OrliczError;
use crate::marcinkiewicz::BlockFamily;
use crate::report::Verdict;
use crate::seqvec::{disjoint_sum, SeqVec};
use serde::Serialize;

/// An index-dependent family (M_j) of Orlicz functions.  Every member must
/// be normalized (M_j(1) = 1 within 1e-9) and pass a midpoint convexity
/// probe; construction fails otherwise.
#[derive(Clone, Debug)]
pub enum MusielakSequence {
    Constant(OrliczFunction),
    PerIndex(Vec<OrliczFunction>),
}

fn validate_member(f: &OrliczFunction) -> Result<(), OrliczError> {
    let at_one = f.eval(1.0);
    if (at_one - 1.0).abs() > 1e-9 {
        return Err(OrliczError::NotNormalized {
            label: f.label(),
            value: at_one,
        });
    }
    let grid: Vec<f64> = (1..=16).map(|i| i as f64 / 8.0).collect();
    f.convexity_probe(&grid)
}

impl MusielakSequence {
    pub fn constant(f: OrliczFunction) -> Result<Self, OrliczError> {
        validate_member(&f)?;
        Ok(MusielakSequence::Constant(f))
    }

    pub fn per_index(fs: Vec<OrliczFunction>) -> Result<Self, OrliczError> {
        if fs.is_empty() {
            return Err(OrliczError::InvalidParameter(
                "per-index family must be nonempty".into(),
            ));
        }
        for f in &fs {
            validate_member(f)?;
        }
        Ok(MusielakSequence::PerIndex(fs))
    }

    /// The function applied at coordinate j (1-based).
    pub fn function_at(&self, j: u64) -> Result<&OrliczFunction, OrliczError> {
        match self {
            MusielakSequence::Constant(f) => Ok(f),
            MusielakSequence::PerIndex(fs) => {
                if j == 0 || j as usize > fs.len() {
                    return Err(OrliczError::IndexBeyondFamily {
                        index: j,
                        len: fs.len(),
                    });
                }
                Ok(&fs[j as usize - 1])
            }
        }
    }

    fn check_support(&self, f: &SeqVec) -> Result<(), OrliczError> {
        if let MusielakSequence::PerIndex(fs) = self {
            if let Some(max) = f.max_index() {
                if max as usize > fs.len() {
                    return Err(OrliczError::IndexBeyondFamily {
                        index: max,
                        len: fs.len(),
                    });
                }
            }
        }
        Ok(())
    }
}

/// rho(f) = sum_j M_j(|f_j|), in increasing index order.
pub fn modular(family: &MusielakSequence, f: &SeqVec) -> Result<f64, OrliczError> {
    family.check_support(f)?;
    Ok(modular_scaled(family, f, 1.0))
}

fn modular_scaled(family: &MusielakSequence, f: &SeqVec, scale: f64) -> f64 {
    let mut total = 0.0;
    for (j, v) in f.iter() {
        let m = match family {
            MusielakSequence::Constant(m) => m,
            MusielakSequence::PerIndex(fs) => &fs[j as usize - 1],
        };
        total += m.eval(v.abs() * scale);
    }
    total
}

/// inf { lambda > 0 : rho(f / lambda) <= 1 }, located by bracketing and
/// bisection.  Returns the feasible endpoint of the final bracket, so the
/// modular at the result never exceeds 1.
pub fn luxemburg_norm(family: &MusielakSequence, f: &SeqVec) -> Result<f64, OrliczError> {
    family.check_support(f)?;
    let total = f.abs_sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    // For u <= 1, convexity with M(0) = 0 gives M(u) <= u * M(1), so the
    // modular at scale 1/total is at most max_j M_j(1); grow from there.
    let mut hi = total;
    let mut grow = 0;
    while modular_scaled(family, f, 1.0 / hi) > 1.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return Err(OrliczError::InvalidParameter(
                "modular does not drop below 1 at any probed scale".into(),
            ));
        }
    }
    let mut lo = hi;
    loop {
        lo *= 0.5;
        if modular_scaled(family, f, 1.0 / lo) > 1.0 {
            break;
        }
        hi = lo;
        if lo < 1e-300 {
            // the modular never reaches 1: the norm is zero
            return Ok(0.0);
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-14 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if modular_scaled(family, f, 1.0 / mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(hi)
}

/// Modular for a single (constant) Orlicz function.
pub fn scalar_modular(m: &OrliczFunction, f: &SeqVec) -> f64 {
    modular_scaled(&MusielakSequence::Constant(m.clone()), f, 1.0)
}

/// Luxemburg norm for a single Orlicz function.  No normalization is
/// required here: the bracketing loop adapts to any M(1) > 0.
pub fn scalar_luxemburg_norm(m: &OrliczFunction, f: &SeqVec) -> f64 {
    let family = MusielakSequence::Constant(m.clone());
    let total = f.abs_sum();
    if total == 0.0 {
        return 0.0;
    }
    let mut hi = total;
    let mut grow = 0;
    while modular_scaled(&family, f, 1.0 / hi) > 1.0 {
        hi *= 2.0;
        grow += 1;
        if grow > 200 {
            return f64::INFINITY;
        }
    }
    let mut lo = hi;
    loop {
        lo *= 0.5;
        if modular_scaled(&family, f, 1.0 / lo) > 1.0 {
            break;
        }
        hi = lo;
        if lo < 1e-300 {
            return 0.0;
        }
    }
    for _ in 0..200 {
        if hi - lo <= 1e-14 * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if modular_scaled(&family, f, 1.0 / mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi
}

/// Outcome of the disjoint-block factorization identity
/// || sum c_n f_n ||_M = || (c_n) ||_(M_{f_n}).
#[derive(Debug, Clone, Serialize)]
pub struct FactorizationReport {
    pub orlicz: String,
    pub family_size: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub verdict: Verdict,
}

/// Check the factorization identity on a disjointly supported family.
/// Members are normalized internally, so any nonzero family qualifies.
pub fn musielak_factorization_check(
    m: &OrliczFunction,
    family: &BlockFamily,
    coeffs: &[f64],
) -> Result<FactorizationReport, OrliczError> {
    if m.degenerate {
        return Err(OrliczError::DegenerateFunction(m.label()));
    }
    if coeffs.len() != family.members.len() {
        return Err(OrliczError::InvalidParameter(format!(
            "got {} coefficients for {} members",
            coeffs.len(),
            family.members.len()
        )));
    }
    let mut unit_members = Vec::with_capacity(family.members.len());
    for f in &family.members {
        let norm = scalar_luxemburg_norm(m, f);
        if norm == 0.0 || !norm.is_finite() {
            return Err(OrliczError::InvalidParameter(format!(
                "family member with norm {norm} cannot be normalized"
            )));
        }
        unit_members.push(f.scale(1.0 / norm));
    }
    let coeff_vec = SeqVec::from_values(coeffs);
    let combined = disjoint_sum(&unit_members, &coeff_vec)?;
    let lhs = scalar_luxemburg_norm(m, &combined);

    let mut induced = Vec::with_capacity(unit_members.len());
    for f in &unit_members {
        induced.push(m.induced(f)?);
    }
    let rhs = luxemburg_norm(&MusielakSequence::per_index(induced)?, &coeff_vec)?;

    let gap = (lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE);
    Ok(FactorizationReport {
        orlicz: m.label(),
        family_size: family.members.len(),
        lhs,
        rhs,
        gap,
        verdict: if gap <= 1e-9 {
            Verdict::Holds
        } else {
            Verdict::Fails
        },
    })
}
