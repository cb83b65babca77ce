//! Randomized property suites: every invariant the crate promises, run at a
//! configurable scale with a fixed seed and reported with worst-case gaps.
//!
//! The suites are the acceptance mechanism of the command-line `verify`
//! subcommand; each check records what was probed and the largest deviation
//! seen, so a failure can be replayed from the printed detail.

use crate::l1probe::{
    l1_lower_profile, linf_disjoint_equivalence, p_star_inequality_check, NormFunctional, Trend,
};
use crate::marcinkiewicz::{
    b_km, block_family, block_norm_identity_check, duality_pairing, lechner_verdict_marcinkiewicz,
    lorentz_d1_norm, lorentz_dinf_norm, m_norm, m_norm_bruteforce, BlockFamily, Scheme,
};
use crate::orlicz::{
    delta2_at_zero, indices_estimate, musielak_factorization_check, scalar_luxemburg_norm,
    scalar_modular, IndicesGrid, OrliczFunction, DEFAULT_CONJUGATE_S_MAX,
};
use crate::report::Verdict;
use crate::seqvec::{disjoint_sum, interleave_map, IndexMap, IndexSetSpec, SeqVec};
use crate::weights::{s_registry, sigma_profile, w_registry, CriterionOpts, Weight};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("unknown verify suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown scale key `{0}` (known: j, kmax, nmax, mmax, samples)")]
    UnknownScaleKey(String),
    #[error("scale value for `{key}` is not a positive integer: {value}")]
    BadScaleValue { key: String, value: String },
}

/// Scale knobs for the property suites.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VerifyConfig {
    pub seed: u64,
    /// coordinates per block in block constructions
    pub j: u64,
    /// inner truncation depth for block-ratio suprema
    pub k_max: u64,
    /// outer truncation for criteria
    pub n_max: u64,
    /// number of blocks in block constructions
    pub m_max: u64,
    /// randomized instances per check
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: 7,
            j: 200,
            k_max: 10_000,
            n_max: 64,
            m_max: 6,
            samples: 200,
        }
    }
}

impl VerifyConfig {
    /// Apply one `--scale key=value` override.
    pub fn set_scale(&mut self, key: &str, value: &str) -> Result<(), VerifyError> {
        let parsed: u64 = value.parse().map_err(|_| VerifyError::BadScaleValue {
            key: key.into(),
            value: value.into(),
        })?;
        if parsed == 0 {
            return Err(VerifyError::BadScaleValue {
                key: key.into(),
                value: value.into(),
            });
        }
        match key {
            "j" => self.j = parsed,
            "kmax" => self.k_max = parsed,
            "nmax" => self.n_max = parsed,
            "mmax" => self.m_max = parsed,
            "samples" => self.samples = parsed as usize,
            _ => return Err(VerifyError::UnknownScaleKey(key.into())),
        }
        Ok(())
    }
}

/// One verified property with the largest deviation observed.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub worst_gap: f64,
    pub detail: String,
}

fn check(name: impl Into<String>, passed: bool, worst_gap: f64, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        passed,
        worst_gap,
        detail: detail.into(),
    }
}

/// Outcome of one suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub const KNOWN_SUITES: [&str; 10] = [
    "marnorm-oracle",
    "block-identity",
    "duality",
    "luxemburg-root",
    "musielak-identity",
    "indices",
    "delta2-beta",
    "interleave",
    "l1-profiles",
    "all",
];

/// Run a named property suite.
pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<SuiteReport, VerifyError> {
    let checks = match name {
        "marnorm-oracle" => marnorm_oracle(cfg),
        "block-identity" => block_identity(cfg),
        "duality" => duality(cfg),
        "luxemburg-root" => luxemburg_root(cfg),
        "musielak-identity" => musielak_identity(cfg),
        "indices" => indices(cfg),
        "delta2-beta" => delta2_beta(cfg),
        "interleave" => interleave(cfg),
        "l1-profiles" => l1_profiles(cfg),
        "all" => {
            let mut all = Vec::new();
            for suite in KNOWN_SUITES.iter().filter(|s| **s != "all") {
                all.extend(run_suite(suite, cfg)?.checks);
            }
            all
        }
        _ => return Err(VerifyError::UnknownSuite(name.into())),
    };
    let passed = checks.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite: name.into(),
        seed: cfg.seed,
        checks,
        passed,
    })
}

fn rng_for(cfg: &VerifyConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

/// Random vector with up to `max_support` nonzero values in [-10, 10] on
/// indices drawn from 1..=span.
fn random_vec(rng: &mut ChaCha8Rng, max_support: usize, span: u64) -> SeqVec {
    let k = rng.gen_range(1..=max_support);
    let mut out = SeqVec::new();
    while (out.support_len()) < k {
        let idx = rng.gen_range(1..=span);
        let val = rng.gen_range(-10.0..10.0);
        if val != 0.0 {
            out.set(idx, val);
        }
    }
    out
}

/// Random disjointly supported family (consecutive index ranges with gaps).
fn random_disjoint_family(rng: &mut ChaCha8Rng, max_blocks: usize, max_len: usize) -> BlockFamily {
    let blocks = rng.gen_range(1..=max_blocks);
    let mut members = Vec::with_capacity(blocks);
    let mut cursor = 1u64;
    for _ in 0..blocks {
        let len = rng.gen_range(1..=max_len);
        let mut f = SeqVec::new();
        for _ in 0..len {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            f.set(cursor, sign * rng.gen_range(0.2..8.0));
            cursor += rng.gen_range(1..=3);
        }
        members.push(f);
        cursor += rng.gen_range(1..=4);
    }
    BlockFamily {
        members,
        origin: "random disjoint family".into(),
    }
}

fn orlicz_batch() -> Vec<OrliczFunction> {
    vec![
        OrliczFunction::power(1.0).unwrap(),
        OrliczFunction::power(1.5).unwrap(),
        OrliczFunction::power(2.0).unwrap(),
        OrliczFunction::power(4.0).unwrap(),
        OrliczFunction::blend(0.5).unwrap(),
    ]
}

// ---------------------------------------------------------------------------
// marnorm-oracle

fn marnorm_oracle(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = rng_for(cfg, 1);
    let mut checks = Vec::new();
    for s in s_registry() {
        let mut worst = 0.0f64;
        for _ in 0..cfg.samples {
            let f = random_vec(&mut rng, 8, 32);
            let fast = m_norm(&f, &s);
            let brute = m_norm_bruteforce(&f, &s).expect("support <= 8");
            worst = worst.max((fast - brute).abs());
        }
        checks.push(check(
            format!("oracle-equivalence({})", s.label()),
            worst <= 1e-12,
            worst,
            format!("{} random vectors, support <= 8", cfg.samples),
        ));
    }

    let identity = Weight::power(1.0).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        let f = random_vec(&mut rng, 8, 32);
        worst = worst.max((m_norm(&f, &identity) - f.sup_norm()).abs());
    }
    checks.push(check(
        "identity-scale-gives-sup-norm",
        worst <= 1e-12,
        worst,
        "m-norm with s_n = n against the sup norm",
    ));

    // the scale built from the weight prefix reproduces norm 1 exactly
    let harmonic = Weight::harmonic();
    let f = SeqVec::from_values(&[1.0, 0.5, 1.0 / 3.0]);
    let gap = (m_norm(&f, &harmonic) - 1.0).abs();
    checks.push(check(
        "harmonic-prefix-has-unit-norm",
        gap <= 1e-15,
        gap,
        "f = (1, 1/2, 1/3) under m(H)",
    ));

    let mut worst = 0.0f64;
    for s in s_registry() {
        for _ in 0..cfg.samples / 4 {
            let k = rng.gen_range(1..=8usize);
            let f = random_vec(&mut rng, k, k as u64);
            let phi = random_increasing_map(&mut rng, k as u64, 40);
            let spread = f.spread(&phi).expect("phi covers the support");
            worst = worst.max((m_norm(&f, &s) - m_norm(&spread, &s)).abs());
        }
    }
    checks.push(check(
        "rearrangement-invariance-under-spread",
        worst <= 1e-12,
        worst,
        "norms agree after spreading along random increasing maps",
    ));
    checks
}

/// Strictly increasing map on 1..=len with values up to `span`.
fn random_increasing_map(rng: &mut ChaCha8Rng, len: u64, span: u64) -> IndexMap {
    let mut values = Vec::with_capacity(len as usize);
    let mut cursor = 0u64;
    let headroom = (span.saturating_sub(len)).max(1) / len.max(1) + 2;
    for _ in 0..len {
        cursor += rng.gen_range(1..=headroom);
        values.push(cursor);
    }
    IndexMap::new(values).expect("strictly increasing by construction")
}

// ---------------------------------------------------------------------------
// block-identity

fn block_identity(cfg: &VerifyConfig) -> Vec<Check> {
    let mut checks = Vec::new();
    for w in w_registry() {
        let mut worst = 0.0f64;
        let mut m1_gap = 0.0f64;
        let mut bounds_ok = true;
        for m in 1..=cfg.m_max {
            let rep = block_norm_identity_check(&w, m, cfg.j, cfg.k_max);
            if m == 1 {
                m1_gap = rep.relative_gap;
            }
            worst = worst.max(rep.relative_gap);
            bounds_ok &= rep.one_sided_ok && rep.ratio_bound_ok;
        }
        checks.push(check(
            format!("block-identity({})", w.label()),
            worst <= 0.02 && m1_gap == 0.0 && bounds_ok,
            worst,
            format!(
                "m in 1..={}, J = {}, k_max = {}; m = 1 gap = {m1_gap:e}",
                cfg.m_max, cfg.j, cfg.k_max
            ),
        ));
    }

    let mut worst = 0.0f64;
    for w in w_registry() {
        for m in [2, cfg.m_max.max(2)] {
            let s = w.primitive();
            let norm_of = |scheme: Scheme| {
                let family = block_family(&w, m, cfg.j, scheme);
                let sum = family
                    .members
                    .iter()
                    .fold(SeqVec::new(), |acc, f| acc.add(f));
                m_norm(&sum, &s)
            };
            let gap = (norm_of(Scheme::ColumnMajor) - norm_of(Scheme::Diagonal)).abs();
            worst = worst.max(gap / norm_of(Scheme::ColumnMajor).max(1e-300));
        }
    }
    checks.push(check(
        "scheme-independence",
        worst <= 1e-12,
        worst,
        "column-major and diagonal interleavings give the same norm",
    ));

    let mut worst = 0.0f64;
    let mut ok = true;
    for w in w_registry() {
        match w.primitive().discrete_derivative() {
            Ok(d) => {
                for jj in 1..=2000u64 {
                    let a = w.eval(jj);
                    let b = d.eval(jj);
                    worst = worst.max((a - b).abs() / a.abs().max(1e-300));
                }
            }
            Err(e) => {
                ok = false;
                checks.push(check(
                    format!("primitive-derivative-roundtrip({})", w.label()),
                    false,
                    f64::INFINITY,
                    format!("derivative rejected: {e}"),
                ));
            }
        }
    }
    if ok {
        checks.push(check(
            "primitive-derivative-roundtrip",
            worst <= 1e-9,
            worst,
            "derivative of the primitive returns the weight termwise (j <= 2000)",
        ));
    }

    let mut in_range = true;
    let mut worst = 0.0f64;
    for s in s_registry() {
        for (sigma, _sound) in sigma_profile(&s, cfg.n_max, 4096) {
            in_range &= sigma > 0.0 && sigma <= 1.0 + 1e-12;
            worst = worst.max((sigma - 1.0).max(0.0));
        }
    }
    checks.push(check(
        "sigma-profile-in-unit-interval",
        in_range,
        worst,
        "sigma_n in (0, 1] for every registry scale",
    ));
    checks
}

// ---------------------------------------------------------------------------
// duality

fn duality(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = rng_for(cfg, 2);
    let mut checks = Vec::new();
    for w in w_registry() {
        let s = w.primitive();
        let mut worst = 0.0f64;
        for _ in 0..cfg.samples {
            let f = random_vec(&mut rng, 12, 24);
            let g = random_vec(&mut rng, 12, 24);
            let pairing = duality_pairing(&f, &g).abs();
            let bound = lorentz_d1_norm(&f, &w) * m_norm(&g, &s);
            let violation = (pairing - bound) / bound.max(1e-300);
            worst = worst.max(violation);
        }
        checks.push(check(
            format!("hoelder({})", w.label()),
            worst <= 1e-12,
            worst.max(0.0),
            "pairing <= d(w,1) norm times m(primitive) norm",
        ));
    }

    let mut worst_ratio = f64::INFINITY;
    for w in w_registry() {
        let s = w.primitive();
        let k = 40u64;
        let g = SeqVec::from_pairs((1..=k).map(|j| (j, w.eval(j)))).expect("positive weights");
        let f = SeqVec::from_values(&vec![1.0; k as usize]);
        let ratio =
            duality_pairing(&f, &g).abs() / (lorentz_d1_norm(&f, &w) * m_norm(&g, &s));
        worst_ratio = worst_ratio.min(ratio);
    }
    checks.push(check(
        "hoelder-near-attainment",
        worst_ratio >= 0.9,
        1.0 - worst_ratio,
        "weight-prefix witnesses reach at least 0.9 of the bound",
    ));

    let w = Weight::power_deriv(0.5).unwrap();
    let s = w.primitive();
    let inv = w.reciprocal();
    let mut ratios = Vec::with_capacity(cfg.samples);
    for _ in 0..cfg.samples {
        let f = random_vec(&mut rng, 12, 24);
        ratios.push(lorentz_dinf_norm(&f, &inv) / m_norm(&f, &s));
    }
    let c_half = ratios[..ratios.len() / 2]
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    let c_full = ratios.iter().cloned().fold(0.0f64, f64::max);
    let lower_ok = ratios.iter().all(|r| *r >= 1.0 - 1e-12);
    let stabilized = c_full <= c_half * 1.05;
    checks.push(check(
        "quasi-norm-comparison(powerderiv:a=0.5)",
        lower_ok && stabilized && c_full <= 2.0 + 1e-9,
        c_full,
        format!(
            "d(1/w, infinity) / m(primitive) in [1, C]; C = {c_full:.6} (first half {c_half:.6})"
        ),
    ));
    checks
}

// ---------------------------------------------------------------------------
// luxemburg-root

fn luxemburg_root(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = rng_for(cfg, 3);
    let mut checks = Vec::new();
    for m in orlicz_batch() {
        let mut worst = 0.0f64;
        for _ in 0..cfg.samples {
            let f = random_vec(&mut rng, 8, 16);
            let norm = scalar_luxemburg_norm(&m, &f);
            let modular = scalar_modular(&m, &f.scale(1.0 / norm));
            worst = worst.max((modular - 1.0).abs());
        }
        checks.push(check(
            format!("luxemburg-root({})", m.label()),
            worst <= 1e-9,
            worst,
            "modular at f / ||f|| returns 1",
        ));
    }

    let mut worst = 0.0f64;
    for p in [1.0, 1.5, 2.0, 4.0] {
        let m = OrliczFunction::power(p).unwrap();
        for _ in 0..cfg.samples / 2 {
            let f = random_vec(&mut rng, 8, 16);
            let direct: f64 = f
                .iter()
                .map(|(_, v)| v.abs().powf(p))
                .sum::<f64>()
                .powf(1.0 / p);
            worst = worst.max((scalar_luxemburg_norm(&m, &f) - direct).abs() / direct);
        }
    }
    checks.push(check(
        "p-norm-consistency",
        worst <= 1e-10,
        worst,
        "Luxemburg norm of F_p against the direct p-norm",
    ));

    let mut worst = 0.0f64;
    for m in orlicz_batch() {
        for _ in 0..cfg.samples / 2 {
            let f = random_vec(&mut rng, 8, 16);
            let mut g = f.scale(1.0);
            // grow one coordinate and add one: |f| <= |g| coordinatewise
            if let Some(idx) = f.support().first().copied() {
                g.set(idx, f.get(idx) * rng.gen_range(1.0..2.0));
            }
            g.set(17, rng.gen_range(0.1..5.0));
            let (nf, ng) = (scalar_luxemburg_norm(&m, &f), scalar_luxemburg_norm(&m, &g));
            worst = worst.max(nf - ng);
        }
    }
    checks.push(check(
        "luxemburg-monotonicity",
        worst <= 1e-12,
        worst.max(0.0),
        "coordinatewise domination implies norm domination",
    ));

    let mut worst = 0.0f64;
    for p in [1.0, 1.5, 2.0, 4.0] {
        let m = OrliczFunction::power(p).unwrap();
        for b in [0.1, 0.3, 0.5, 0.8, 1.0] {
            let mb = m.normalized_dilation(b).expect("powers never vanish");
            for i in 1..=30 {
                let t = i as f64 / 10.0;
                worst = worst.max((mb.eval(t) - m.eval(t)).abs() / m.eval(t).max(1e-300));
            }
        }
    }
    checks.push(check(
        "dilation-exactness",
        worst <= 1e-12,
        worst,
        "normalized dilations of F_p evaluate to F_p pointwise",
    ));

    let f_inf = OrliczFunction::f_inf();
    let mut worst = 0.0f64;
    for k in 1..=10u64 {
        let f = SeqVec::from_values(&vec![1.0; k as usize]);
        let want = 2.0 * k as f64 / (k as f64 + 1.0);
        worst = worst.max((scalar_luxemburg_norm(&f_inf, &f) - want).abs());
    }
    checks.push(check(
        "degenerate-closed-form",
        worst <= 1e-10,
        worst,
        "k ones under the degenerate member give 2k/(k+1)",
    ));
    checks
}

// ---------------------------------------------------------------------------
// musielak-identity

fn musielak_identity(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = rng_for(cfg, 4);
    let mut checks = Vec::new();
    let functions = [
        OrliczFunction::power(2.0).unwrap(),
        OrliczFunction::power(3.0).unwrap(),
        OrliczFunction::blend(0.5).unwrap(),
    ];
    let mut worst = 0.0f64;
    for i in 0..cfg.samples {
        let m = &functions[i % functions.len()];
        let family = random_disjoint_family(&mut rng, 6, 5);
        let coeffs: Vec<f64> = (0..family.members.len())
            .map(|_| rng.gen_range(-5.0..5.0))
            .collect();
        let rep = musielak_factorization_check(m, &family, &coeffs).expect("valid family");
        worst = worst.max(rep.gap);
    }
    checks.push(check(
        "factorization-identity",
        worst <= 1e-9,
        worst,
        format!(
            "{} random disjoint families; combined norm against the induced-family norm",
            cfg.samples
        ),
    ));

    let mut worst_gap = 0.0f64;
    let mut worst_lambda = 0.0f64;
    let mut worst_at_one = 0.0f64;
    for i in 0..cfg.samples / 2 {
        let m = &functions[i % functions.len()];
        let k = rng.gen_range(1..=6usize);
        let raw = SeqVec::from_values(
            &(0..k).map(|_| rng.gen_range(0.05..1.0)).collect::<Vec<_>>(),
        );
        let f = raw.scale(1.0 / scalar_luxemburg_norm(m, &raw));
        let induced = m.induced(&f).expect("non-degenerate");
        worst_at_one = worst_at_one.max((induced.eval(1.0) - 1.0).abs());
        let lambdas: Vec<(f64, f64)> = f.iter().map(|(_, v)| (v.abs(), m.eval(v.abs()))).collect();
        let lambda_sum: f64 = lambdas.iter().map(|(_, l)| l).sum();
        worst_lambda = worst_lambda.max((lambda_sum - 1.0).abs());
        for i in 1..=50 {
            let s = 0.06 * i as f64;
            let recombined: f64 = lambdas
                .iter()
                .map(|(b, l)| l * (m.eval(b * s) / m.eval(*b)))
                .sum();
            worst_gap = worst_gap.max((induced.eval(s) - recombined).abs());
        }
    }
    checks.push(check(
        "induced-function-decomposition",
        worst_gap <= 1e-10 && worst_lambda <= 1e-9 && worst_at_one <= 1e-10,
        worst_gap,
        format!(
            "M_f = sum of weighted dilations on a 50-point grid; sum of weights off by {worst_lambda:.2e}, M_f(1) off by {worst_at_one:.2e}"
        ),
    ));
    checks
}

// ---------------------------------------------------------------------------
// indices

fn indices(cfg: &VerifyConfig) -> Vec<Check> {
    let _ = cfg;
    let grid = IndicesGrid::default();
    let mut checks = Vec::new();
    let mut worst = 0.0f64;
    for p in [1.0, 1.5, 2.0, 4.0] {
        let rep = indices_estimate(&OrliczFunction::power(p).unwrap(), &grid).unwrap();
        worst = worst.max((rep.alpha - p).abs().max((rep.beta - p).abs()));
    }
    checks.push(check(
        "power-indices-exact",
        worst <= 0.05,
        worst,
        "estimated indices of F_p equal p",
    ));

    let mut sandwich = true;
    let mut shift = 0.0f64;
    for m in [
        OrliczFunction::power(1.0).unwrap(),
        OrliczFunction::power(1.5).unwrap(),
        OrliczFunction::power(2.0).unwrap(),
        OrliczFunction::power(4.0).unwrap(),
        OrliczFunction::blend(0.5).unwrap(),
        OrliczFunction::exp_inverse(),
    ] {
        let rep = indices_estimate(&m, &grid).unwrap();
        sandwich &= 1.0 <= rep.alpha && rep.alpha <= rep.beta;
        let dilated = m.normalized_dilation(1.0).unwrap();
        let rep2 = indices_estimate(&dilated, &grid).unwrap();
        shift = shift
            .max((rep.alpha - rep2.alpha).abs())
            .max((rep.beta - rep2.beta).abs());
    }
    checks.push(check(
        "index-sandwich",
        sandwich,
        0.0,
        "1 <= alpha <= beta across the registry",
    ));
    checks.push(check(
        "identity-dilation-invariance",
        shift <= 1e-12,
        shift,
        "indices unchanged after pre-composition with the identity dilation",
    ));

    let rep = indices_estimate(&OrliczFunction::exp_inverse(), &grid).unwrap();
    checks.push(check(
        "exp-inverse-unbounded-upper-index",
        rep.beta_infinite,
        rep.beta_growth,
        format!("beta = {:.3e} still growing by {:.2}x", rep.beta, rep.beta_growth),
    ));
    checks
}

// ---------------------------------------------------------------------------
// delta2-beta

fn delta2_beta(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = rng_for(cfg, 5);
    let grid = IndicesGrid::default();
    let mut checks = Vec::new();
    let mut agree = true;
    let mut detail = Vec::new();
    for m in [
        OrliczFunction::power(1.0).unwrap(),
        OrliczFunction::power(1.5).unwrap(),
        OrliczFunction::power(2.0).unwrap(),
        OrliczFunction::power(4.0).unwrap(),
        OrliczFunction::blend(0.5).unwrap(),
        OrliczFunction::exp_inverse(),
    ] {
        let delta2 = delta2_at_zero(&m, None);
        let idx = indices_estimate(&m, &grid).unwrap();
        let expected = if idx.beta_infinite {
            Verdict::Fails
        } else {
            Verdict::Holds
        };
        agree &= delta2.verdict == expected;
        detail.push(format!("{}: {} / beta_infinite = {}", m.label(), delta2.verdict, idx.beta_infinite));
    }
    checks.push(check(
        "delta2-agrees-with-upper-index",
        agree,
        0.0,
        detail.join("; "),
    ));

    let mut worst = 0.0f64;
    for m in [
        OrliczFunction::power(1.5).unwrap(),
        OrliczFunction::power(2.0).unwrap(),
        OrliczFunction::power(4.0).unwrap(),
        OrliczFunction::blend(0.5).unwrap(),
    ] {
        let conj = m.complementary(DEFAULT_CONJUGATE_S_MAX).unwrap();
        for _ in 0..cfg.samples {
            let s = rng.gen_range(0.0..6.0);
            let t = rng.gen_range(0.0..3.0);
            let violation = s * t - m.eval(s) - conj.eval(t);
            if violation.is_finite() {
                worst = worst.max(violation);
            }
        }
    }
    checks.push(check(
        "young-inequality",
        worst <= 1e-9,
        worst.max(0.0),
        "s*t <= M(s) + M*(t) on random pairs",
    ));

    let conj = OrliczFunction::power(2.0)
        .unwrap()
        .complementary(DEFAULT_CONJUGATE_S_MAX)
        .unwrap();
    let mut worst = 0.0f64;
    for i in 0..=100 {
        let t = 0.04 * i as f64;
        worst = worst.max((conj.eval(t) - t * t / 4.0).abs());
    }
    checks.push(check(
        "conjugate-of-square",
        worst <= 1e-6,
        worst,
        "numeric Legendre transform of F_2 against t^2/4 on [0, 4]",
    ));
    checks
}

// ---------------------------------------------------------------------------
// interleave

fn interleave(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = rng_for(cfg, 6);
    let mut checks = Vec::new();

    let mut worst = 0.0f64;
    let mut round_trip_ok = true;
    for _ in 0..cfg.samples {
        let k = rng.gen_range(1..=8usize);
        let f = random_vec(&mut rng, k, k as u64);
        let phi = random_increasing_map(&mut rng, k as u64, 40);
        let spread = f.spread(&phi).expect("phi covers support");
        let (a, b) = (f.rearrangement(), spread.rearrangement());
        if a != b {
            worst = f64::INFINITY;
        }
        let back = spread.compress(&phi);
        round_trip_ok &= back.iter().collect::<Vec<_>>() == f.iter().collect::<Vec<_>>();
    }
    checks.push(check(
        "spread-preserves-rearrangement",
        worst == 0.0,
        worst,
        "rearrangement unchanged under spreading",
    ));
    checks.push(check(
        "compress-inverts-spread",
        round_trip_ok,
        if round_trip_ok { 0.0 } else { f64::INFINITY },
        "compress after spread returns the original vector",
    ));

    let mut proj_ok = true;
    for _ in 0..cfg.samples {
        let f = random_vec(&mut rng, 10, 20);
        let set_a: Vec<u64> = (1..=20).filter(|_| rng.gen_bool(0.5)).collect();
        let set_b: Vec<u64> = (1..=20).filter(|_| rng.gen_bool(0.5)).collect();
        let a = IndexSetSpec::explicit(set_a.iter().copied()).unwrap_or_else(|_| IndexSetSpec::all());
        let b = IndexSetSpec::explicit(set_b.iter().copied()).unwrap_or_else(|_| IndexSetSpec::all());
        let both = f.coordinate_projection(&b).coordinate_projection(&a);
        let inter: Vec<u64> = set_a
            .iter()
            .copied()
            .filter(|x| set_b.contains(x))
            .collect();
        let direct = if inter.is_empty() {
            SeqVec::new()
        } else {
            f.coordinate_projection(&IndexSetSpec::explicit(inter).unwrap())
        };
        proj_ok &= both.iter().collect::<Vec<_>>() == direct.iter().collect::<Vec<_>>();
    }
    checks.push(check(
        "projection-composition",
        proj_ok,
        if proj_ok { 0.0 } else { f64::INFINITY },
        "P_A(P_B(f)) equals P_(A intersect B)(f) on random sets",
    ));

    // deterministic seed example: blocks {1,3} and {2} into odds and evens
    let map = interleave_map(
        &[
            IndexSetSpec::explicit([1u64, 3]).unwrap(),
            IndexSetSpec::explicit([2u64]).unwrap(),
        ],
        &[IndexSetSpec::odds(), IndexSetSpec::evens()],
    )
    .unwrap();
    checks.push(check(
        "interleave-known-example",
        map.values() == [1, 2, 3],
        0.0,
        format!("blocks (1,3 | 2) into odd/even targets gave {:?}", map.values()),
    ));

    let mut greedy_ok = true;
    let mut structure_ok = true;
    let mut failures = String::new();
    for instance in 0..cfg.samples {
        let n_blocks = rng.gen_range(1..=4usize);
        let total = rng.gen_range(n_blocks..=24);
        // partition 1..=total with every block nonempty
        let mut assignment: Vec<usize> = (0..total)
            .map(|k| if k < n_blocks { k } else { rng.gen_range(0..n_blocks) })
            .collect();
        // the first n_blocks indices seed the blocks in random order
        for k in 0..n_blocks {
            let swap = rng.gen_range(0..n_blocks);
            assignment.swap(k, swap);
        }
        let blocks: Vec<IndexSetSpec> = (0..n_blocks)
            .map(|n| {
                IndexSetSpec::explicit(
                    assignment
                        .iter()
                        .enumerate()
                        .filter(|(_, b)| **b == n)
                        .map(|(k, _)| k as u64 + 1),
                )
                .expect("nonempty block")
            })
            .collect();
        // disjoint arithmetic progressions: distinct residues mod n_blocks
        let mut residues: Vec<u64> = (1..=n_blocks as u64).collect();
        for i in (1..residues.len()).rev() {
            residues.swap(i, rng.gen_range(0..=i));
        }
        let targets: Vec<IndexSetSpec> = residues
            .iter()
            .map(|r| {
                let start = r + n_blocks as u64 * rng.gen_range(0..4u64);
                IndexSetSpec::progression(start, n_blocks as u64).unwrap()
            })
            .collect();
        let map = match interleave_map(&blocks, &targets) {
            Ok(m) => m,
            Err(e) => {
                greedy_ok = false;
                failures = format!("instance {instance}: {e}");
                break;
            }
        };
        // independent greedy oracle: linear upward scan per index
        let mut prev = 0u64;
        for k in 1..=total as u64 {
            let n = assignment[(k - 1) as usize];
            let mut cand = prev + 1;
            while !targets[n].contains(cand) {
                cand += 1;
            }
            prev = cand;
            if map.get(k) != Some(cand) {
                greedy_ok = false;
                failures = format!("instance {instance}: index {k} mapped to {:?}, oracle {cand}", map.get(k));
            }
            structure_ok &= targets[n].contains(map.get(k).unwrap_or(0));
        }
        let vals = map.values();
        structure_ok &= vals.windows(2).all(|w| w[0] < w[1]);
    }
    checks.push(check(
        "interleave-greedy-minimality",
        greedy_ok,
        if greedy_ok { 0.0 } else { f64::INFINITY },
        if failures.is_empty() {
            format!("{} randomized partitions against a brute-force scan", cfg.samples)
        } else {
            failures
        },
    ));
    checks.push(check(
        "interleave-structure",
        structure_ok,
        if structure_ok { 0.0 } else { f64::INFINITY },
        "outputs strictly increase and land in their target sets",
    ));
    checks
}

// ---------------------------------------------------------------------------
// l1-profiles

fn l1_profiles(cfg: &VerifyConfig) -> Vec<Check> {
    let mut rng = rng_for(cfg, 8);
    let mut checks = Vec::new();
    let opts = CriterionOpts::default();

    let mut consistent = true;
    let mut detail = Vec::new();
    for a in [0.25, 0.5, 0.75, 1.0] {
        let w = Weight::power_deriv(a).unwrap();
        let s = w.primitive();
        let (m_probe, j_probe) = if a == 0.75 { (16, 1500) } else { (cfg.m_max.max(6) as usize, cfg.j) };
        let family = block_family(&w, m_probe as u64, j_probe, Scheme::ColumnMajor);
        let profile = l1_lower_profile(
            &NormFunctional::Marcinkiewicz(s.clone()),
            &family,
            m_probe,
            4,
            cfg.seed,
        )
        .expect("block families are unit-normalized");
        let verdict = lechner_verdict_marcinkiewicz(&s, cfg.n_max, cfg.k_max, &opts)
            .expect("registry primitives are strictly increasing")
            .verdict;
        let pair_ok = match profile.trend {
            Trend::BoundedBelow => verdict == Verdict::Fails,
            Trend::Decaying => verdict == Verdict::Holds,
            Trend::Inconclusive => false,
        };
        consistent &= pair_ok;
        detail.push(format!("a={a}: trend {:?} / lechner {}", profile.trend, verdict));
    }
    checks.push(check(
        "profile-matches-lechner-verdict",
        consistent,
        0.0,
        detail.join("; "),
    ));

    let mut sandwich_ok = true;
    let mut minimal_ok = true;
    for _ in 0..cfg.samples / 10 {
        let family = random_disjoint_family(&mut rng, 6, 5);
        for norm in [
            NormFunctional::Marcinkiewicz(Weight::harmonic()),
            NormFunctional::LorentzD1(Weight::power_deriv(0.5).unwrap()),
            NormFunctional::Orlicz(OrliczFunction::power(2.0).unwrap()),
            NormFunctional::Sup,
        ] {
            let m_len = family.members.len();
            let probed = l1_lower_profile(&norm, &family, m_len, 6, cfg.seed).unwrap();
            let plain = l1_lower_profile(&norm, &family, m_len, 0, cfg.seed).unwrap();
            for (&(m, c), &(_, c0)) in probed.c.iter().zip(&plain.c) {
                sandwich_ok &= c >= 0.0 && c <= 1.0 + 1e-12 && c * m as f64 <= m as f64 + 1e-9;
                minimal_ok &= (c - c0).abs() <= 1e-12;
            }
        }
    }
    checks.push(check(
        "profile-sandwich",
        sandwich_ok,
        0.0,
        "0 <= c_m <= 1 and c_m * m <= m for unit families",
    ));
    checks.push(check(
        "all-ones-pattern-extremal",
        minimal_ok,
        0.0,
        "random sign patterns never beat the all-ones pattern",
    ));

    let w = Weight::power_deriv(1.0).unwrap();
    let s = w.primitive();
    let mut worst = 0.0f64;
    for m in [2u64, 4, cfg.m_max.max(2)] {
        let family = block_family(&w, m, cfg.j, Scheme::ColumnMajor);
        let b_trunc = (1..=cfg.j).map(|k| b_km(&w, k, m)).fold(0.0f64, f64::max);
        for _ in 0..cfg.samples / 4 {
            let coeffs: Vec<f64> = (0..m as usize)
                .map(|_| {
                    let v = rng.gen_range(0.2..5.0);
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect();
            let sum = disjoint_sum(&family.members, &SeqVec::from_values(&coeffs)).unwrap();
            let lhs: f64 = coeffs.iter().map(|a| a.abs()).sum();
            let rhs = (1.0 / b_trunc + 0.05) * m_norm(&sum, &s);
            worst = worst.max(lhs / rhs);
        }
    }
    checks.push(check(
        "ell-1-lower-bound",
        worst <= 1.0 + 1e-12,
        (worst - 1.0).max(0.0),
        "sum of |coefficients| within (1/B + 0.05) of the combined norm for w = 1/j",
    ));

    let mut exact_ok = true;
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples / 10 {
        let family = random_disjoint_family(&mut rng, 6, 5);
        let rep = linf_disjoint_equivalence(&family, 40, cfg.seed).unwrap();
        exact_ok &= rep.exact_equality && rep.two_sided_ok;
        worst = worst.max(rep.max_equality_gap);
    }
    checks.push(check(
        "sup-norm-disjoint-identity",
        exact_ok,
        worst,
        "sup norm of a disjoint sum equals max |a_n| times member sup norms",
    ));

    let harmonic = p_star_inequality_check(
        &NormFunctional::Marcinkiewicz(Weight::harmonic()),
        cfg.n_max,
        cfg.samples,
        cfg.seed,
    );
    let geometric = p_star_inequality_check(
        &NormFunctional::Marcinkiewicz(Weight::geometric()),
        cfg.n_max,
        cfg.samples,
        cfg.seed,
    );
    let ell1 = p_star_inequality_check(
        &NormFunctional::LorentzD1(Weight::power(0.0).unwrap()),
        32,
        cfg.samples,
        cfg.seed,
    );
    let pstar_ok = !harmonic.prefix_linear
        && geometric.prefix_linear
        && geometric.empirical_k <= 2.0
        && ell1.prefix_linear
        && (ell1.empirical_k - 1.0).abs() <= 1e-12;
    checks.push(check(
        "prefix-norm-inequality-examples",
        pstar_ok,
        0.0,
        format!(
            "harmonic ratio {:.3} (sublinear), geometric K = {:.3}, ell-1 K = {:.12}",
            harmonic.prefix_ratio, geometric.empirical_k, ell1.empirical_k
        ),
    ));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_suite_passes_at_reduced_scale() {
        let cfg = VerifyConfig {
            samples: 40,
            j: 120,
            k_max: 2000,
            n_max: 48,
            ..VerifyConfig::default()
        };
        for suite in KNOWN_SUITES.iter().filter(|s| **s != "all") {
            let report = run_suite(suite, &cfg).unwrap();
            let failed: Vec<&Check> = report.checks.iter().filter(|c| !c.passed).collect();
            assert!(
                report.passed,
                "suite {suite} failed: {:?}",
                failed
                    .iter()
                    .map(|c| format!("{} (gap {:.3e}): {}", c.name, c.worst_gap, c.detail))
                    .collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_suite("mystery", &VerifyConfig::default()),
            Err(VerifyError::UnknownSuite(_))
        ));
    }

    #[test]
    fn scale_overrides_parse() {
        let mut cfg = VerifyConfig::default();
        cfg.set_scale("j", "500").unwrap();
        assert_eq!(cfg.j, 500);
        assert!(cfg.set_scale("j", "0").is_err());
        assert!(cfg.set_scale("mystery", "1").is_err());
    }

    #[test]
    fn identical_seeds_reproduce_reports() {
        let cfg = VerifyConfig {
            samples: 20,
            j: 60,
            k_max: 500,
            ..VerifyConfig::default()
        };
        let a = run_suite("marnorm-oracle", &cfg).unwrap();
        let b = run_suite("marnorm-oracle", &cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }
}
