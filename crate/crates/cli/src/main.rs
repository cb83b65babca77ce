//! `seqspace` — norms, structure criteria, constructions, and property-suite
//! verification for weighted sequence spaces, with JSON/CSV/text reporting.
//!
//! Exit codes: 0 success, 1 property-suite failure, 2 parse error,
//! 3 precondition violation, 4 every requested criterion inconclusive.

use clap::{Parser, Subcommand, ValueEnum};
use seqspace::marcinkiewicz::{
    block_family, lechner_verdict_marcinkiewicz, lorentz_d1_norm, lorentz_dinf_norm, m_norm,
    MarError, Scheme,
};
use seqspace::orlicz::{
    delta2_at_zero, indices_estimate, lechner_verdict_orlicz, luxemburg_norm,
    scalar_luxemburg_norm, IndicesGrid, IndicesReport, MusielakSequence, OrliczError,
    OrliczFunction,
};
use seqspace::report::{CriterionReport, Method, Truncation, Verdict};
use seqspace::seqvec::{interleave_map, IndexSetSpec, SeqError, SeqVec};
use seqspace::verify::{run_suite, SuiteReport, VerifyConfig, VerifyError, KNOWN_SUITES};
use seqspace::weights::{
    essentially_monotone, has_lrp, is_regular, s_criterion, w_class_check, CriterionOpts,
    Direction, Weight, WeightError,
};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_SUITE_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PRECONDITION: u8 = 3;
const EXIT_ALL_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(
    name = "seqspace",
    version,
    about = "Weighted sequence-space numerics: norms, structure criteria, constructions, and seeded verification suites"
)]
struct Cli {
    /// Override the stability tolerance recorded in criterion reports
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Inner truncation depth (k ranges over 1..=kmax)
    #[arg(long, global = true, default_value_t = 10_000)]
    kmax: u64,
    /// Outer truncation depth (n ranges over 1..=nmax)
    #[arg(long, global = true, default_value_t = 64)]
    nmax: u64,
    /// Seed for every randomized probe
    #[arg(long, global = true, default_value_t = 7)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report to this file instead of standard output
    /// (relative paths are joined under $SEQSPACE_OUTPUT_DIR when set)
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Space {
    Marcinkiewicz,
    Lorentz1,
    Lorentzinf,
    Orlicz,
    Musielak,
    Linf,
}

impl Space {
    fn label(self) -> &'static str {
        match self {
            Space::Marcinkiewicz => "marcinkiewicz",
            Space::Lorentz1 => "lorentz1",
            Space::Lorentzinf => "lorentzinf",
            Space::Orlicz => "orlicz",
            Space::Musielak => "musielak",
            Space::Linf => "linf",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one norm of one vector
    Norm {
        #[arg(long)]
        space: Space,
        /// Weight/scale literal: power:theta=T | harmonic | geometric | powerderiv:a=A | file:PATH
        #[arg(long)]
        weight: Option<String>,
        /// Orlicz function literal: power:p=P | finf | expinv | blend:w=W | table:PATH
        /// (musielak accepts a `;`-separated list, one function per index)
        #[arg(long = "fn")]
        function: Option<String>,
        /// Vector source: a file (JSON entry list or `index value` lines) or
        /// an inline whitespace-separated value list like "1 1"
        #[arg(long)]
        vec: String,
    },
    /// Run every applicable structure criterion for a weight or an Orlicz function
    Criteria {
        #[arg(long, conflicts_with = "orliczfn")]
        weight: Option<String>,
        #[arg(long)]
        orliczfn: Option<String>,
        /// Largest ratio probed by the lower-ratio-property criterion
        #[arg(long, default_value_t = 8)]
        rmax: u64,
    },
    /// Run a named property suite and report pass/fail with worst-case gaps
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Scale overrides, repeatable: j=N, kmax=N, nmax=N, mmax=N, samples=N, seed=N
        #[arg(long)]
        scale: Vec<String>,
    },
    /// Build and print library objects
    #[command(subcommand_value_name = "WHAT")]
    Construct {
        #[command(subcommand)]
        what: Construct,
    },
}

#[derive(Subcommand)]
enum Construct {
    /// Disjointly supported blocks cut from a weight and spread by a scheme
    Blockfamily {
        #[arg(long)]
        weight: String,
        /// Number of blocks
        #[arg(long)]
        blocks: u64,
        /// Coordinates per block
        #[arg(long)]
        len: u64,
        /// column-major | diagonal
        #[arg(long, default_value = "column-major")]
        scheme: String,
    },
    /// Greedy order-isomorphism from a partition into prescribed target sets
    Interleavemap {
        /// Partition groups, `;`-separated lists of indices: "1,3;2"
        #[arg(long)]
        blocks: String,
        /// Target sets, `;`-separated: odd | even | all | ap:START,STEP | mult:K | set:1,2,3
        #[arg(long)]
        targets: String,
    },
}

/// A failure with its exit-code class.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    fn precondition(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_PRECONDITION,
            message: message.into(),
        }
    }
}

impl From<WeightError> for Failure {
    fn from(e: WeightError) -> Self {
        Failure::parse(e.to_string())
    }
}

impl From<SeqError> for Failure {
    fn from(e: SeqError) -> Self {
        match e {
            SeqError::Parse(_)
            | SeqError::InvalidEntry(_)
            | SeqError::InvalidIndexMap(_)
            | SeqError::InvalidPartition(_) => Failure::parse(e.to_string()),
            _ => Failure::precondition(e.to_string()),
        }
    }
}

impl From<MarError> for Failure {
    fn from(e: MarError) -> Self {
        match e {
            MarError::InvalidScheme(_) => Failure::parse(e.to_string()),
            MarError::Seq(inner) => inner.into(),
            _ => Failure::precondition(e.to_string()),
        }
    }
}

impl From<OrliczError> for Failure {
    fn from(e: OrliczError) -> Self {
        match e {
            OrliczError::InvalidParameter(_)
            | OrliczError::InvalidTable(_)
            | OrliczError::BadLiteral(_)
            | OrliczError::Io(_) => Failure::parse(e.to_string()),
            OrliczError::Seq(inner) => inner.into(),
            _ => Failure::precondition(e.to_string()),
        }
    }
}

impl From<VerifyError> for Failure {
    fn from(e: VerifyError) -> Self {
        Failure::parse(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    if cli.kmax == 0 || cli.nmax == 0 {
        return Err(Failure::parse("--kmax and --nmax must be at least 1"));
    }
    if let Some(t) = cli.tol {
        if !(t > 0.0) {
            return Err(Failure::parse("--tol must be strictly positive"));
        }
    }
    match &cli.command {
        Command::Norm {
            space,
            weight,
            function,
            vec,
        } => cmd_norm(&cli, *space, weight.as_deref(), function.as_deref(), vec),
        Command::Criteria {
            weight,
            orliczfn,
            rmax,
        } => cmd_criteria(&cli, weight.as_deref(), orliczfn.as_deref(), *rmax),
        Command::Verify { suite, scale } => cmd_verify(&cli, suite, scale),
        Command::Construct { what } => cmd_construct(&cli, what),
    }
}

// ---------------------------------------------------------------------------
// norm

#[derive(Serialize)]
struct NormDoc {
    space: String,
    params: String,
    norm: f64,
    support_size: usize,
}

fn cmd_norm(
    cli: &Cli,
    space: Space,
    weight: Option<&str>,
    function: Option<&str>,
    vec: &str,
) -> Result<u8, Failure> {
    let f = load_vec(vec)?;
    let need_weight = || {
        weight.ok_or_else(|| {
            Failure::parse(format!("--weight is required for --space {}", space.label()))
        })
    };
    let need_function = || {
        function.ok_or_else(|| {
            Failure::parse(format!("--fn is required for --space {}", space.label()))
        })
    };
    let (params, norm) = match space {
        Space::Marcinkiewicz => {
            let s = Weight::parse_literal(need_weight()?)?;
            check_depth(&s, &f)?;
            (s.label(), m_norm(&f, &s))
        }
        Space::Lorentz1 => {
            let w = Weight::parse_literal(need_weight()?)?;
            check_depth(&w, &f)?;
            (w.label(), lorentz_d1_norm(&f, &w))
        }
        Space::Lorentzinf => {
            let w = Weight::parse_literal(need_weight()?)?;
            check_depth(&w, &f)?;
            (w.label(), lorentz_dinf_norm(&f, &w))
        }
        Space::Orlicz => {
            let m = OrliczFunction::parse_literal(need_function()?)?;
            (m.label(), scalar_luxemburg_norm(&m, &f))
        }
        Space::Musielak => {
            let literal = need_function()?;
            let family = parse_musielak(literal)?;
            (literal.to_string(), luxemburg_norm(&family, &f)?)
        }
        Space::Linf => ("".to_string(), f.sup_norm()),
    };
    let doc = NormDoc {
        space: space.label().to_string(),
        params,
        norm,
        support_size: f.support_len(),
    };
    let body = match cli.format {
        Format::Json => to_json(&doc),
        Format::Csv => format!(
            "space,params,norm,support_size\n{},{},{},{}\n",
            doc.space,
            csv_quote(&doc.params),
            doc.norm,
            doc.support_size
        ),
        Format::Text => format!(
            "{}({}) norm of {}-entry vector = {}\n",
            doc.space, doc.params, doc.support_size, doc.norm
        ),
    };
    emit(cli, body)?;
    Ok(0)
}

/// Positional norms evaluate the weight at 1..=support_len; finite tables
/// must reach that depth.
fn check_depth(w: &Weight, f: &SeqVec) -> Result<(), Failure> {
    if let Some(limit) = w.len_limit() {
        let need = f.support_len() as u64;
        if need > limit {
            return Err(Failure::precondition(format!(
                "weight table has {limit} terms but the vector has {need} nonzero entries"
            )));
        }
    }
    Ok(())
}

fn parse_musielak(literal: &str) -> Result<MusielakSequence, Failure> {
    let parts: Vec<&str> = literal.split(';').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Failure::parse("empty entry in the Musielak function list"));
    }
    let functions = parts
        .iter()
        .map(|p| OrliczFunction::parse_literal(p))
        .collect::<Result<Vec<_>, _>>()?;
    if functions.len() == 1 {
        Ok(MusielakSequence::constant(
            functions.into_iter().next().unwrap(),
        )?)
    } else {
        Ok(MusielakSequence::per_index(functions)?)
    }
}

// ---------------------------------------------------------------------------
// criteria

#[derive(Serialize)]
struct CriteriaDoc {
    subject: String,
    criteria: Vec<CriterionReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    indices: Option<IndicesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    indices_note: Option<String>,
}

/// Stand-in report for a criterion whose hypotheses the subject does not meet.
fn inconclusive_stub(
    criterion: &str,
    subject: &str,
    truncation: Truncation,
    why: &str,
) -> CriterionReport {
    CriterionReport {
        criterion: criterion.into(),
        subject: subject.into(),
        verdict: Verdict::Inconclusive,
        estimate: 0.0,
        truncation,
        method: Method::TruncatedSup,
        tolerance: 0.0,
        notes: format!("not applicable: {why}"),
    }
}

fn cmd_criteria(
    cli: &Cli,
    weight: Option<&str>,
    orliczfn: Option<&str>,
    rmax: u64,
) -> Result<u8, Failure> {
    let mut opts = CriterionOpts::default();
    if let Some(t) = cli.tol {
        opts.stable_tol = t;
    }
    let doc = match (weight, orliczfn) {
        (Some(lit), None) => {
            let w = Weight::parse_literal(lit)?;
            let mut criteria = vec![
                w_class_check(&w, cli.kmax, &opts),
                essentially_monotone(&w, Direction::Decreasing, cli.kmax, &opts),
                is_regular(&w, cli.kmax, &opts),
                has_lrp(&w, rmax, cli.kmax, &opts),
                s_criterion(&w, cli.nmax, cli.kmax, &opts),
            ];
            criteria.push(
                match lechner_verdict_marcinkiewicz(&w, cli.nmax, cli.kmax, &opts) {
                    Ok(rep) => rep,
                    Err(e) => inconclusive_stub(
                        "lechner-marcinkiewicz",
                        &w.label(),
                        Truncation::new(cli.nmax, cli.kmax),
                        &e.to_string(),
                    ),
                },
            );
            CriteriaDoc {
                subject: w.label(),
                criteria,
                indices: None,
                indices_note: None,
            }
        }
        (None, Some(lit)) => {
            let m = OrliczFunction::parse_literal(lit)?;
            let grid = IndicesGrid::default();
            let criteria = vec![
                delta2_at_zero(&m, None),
                match lechner_verdict_orlicz(&m) {
                    Ok(rep) => rep,
                    Err(e) => inconclusive_stub(
                        "lechner-orlicz",
                        &m.label(),
                        Truncation::new(grid.b_points as u64, grid.t_points as u64),
                        &e.to_string(),
                    ),
                },
            ];
            let (indices, indices_note) = match indices_estimate(&m, &grid) {
                Ok(rep) => (Some(rep), None),
                Err(e) => (None, Some(format!("indices unavailable: {e}"))),
            };
            CriteriaDoc {
                subject: m.label(),
                criteria,
                indices,
                indices_note,
            }
        }
        _ => {
            return Err(Failure::parse(
                "exactly one of --weight or --orliczfn is required",
            ))
        }
    };
    let all_inconclusive = doc.criteria.iter().all(|c| c.is_inconclusive());
    let body = match cli.format {
        Format::Json => to_json(&doc),
        Format::Csv => {
            let mut out =
                String::from("criterion,subject,verdict,estimate,tolerance,method,n_max,k_max,notes\n");
            for c in &doc.criteria {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{},{}\n",
                    csv_quote(&c.criterion),
                    csv_quote(&c.subject),
                    c.verdict,
                    c.estimate,
                    c.tolerance,
                    serde_label(&c.method),
                    c.truncation.n_max,
                    c.truncation.k_max,
                    csv_quote(&c.notes)
                ));
            }
            out
        }
        Format::Text => {
            let mut out = String::new();
            for c in &doc.criteria {
                out.push_str(&format!(
                    "{}({}): {} — estimate {:.6e}, tolerance {:.3e} [{}]\n",
                    c.criterion, c.subject, c.verdict, c.estimate, c.tolerance, c.notes
                ));
            }
            if let Some(idx) = &doc.indices {
                out.push_str(&format!(
                    "indices({}): alpha = {:.6}, beta = {:.6e}{}\n",
                    doc.subject,
                    idx.alpha,
                    idx.beta,
                    if idx.beta_infinite { " (diverging)" } else { "" }
                ));
            }
            if let Some(note) = &doc.indices_note {
                out.push_str(&format!("indices({}): {}\n", doc.subject, note));
            }
            out
        }
    };
    emit(cli, body)?;
    Ok(if all_inconclusive {
        EXIT_ALL_INCONCLUSIVE
    } else {
        0
    })
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(cli: &Cli, suite: &str, scale: &[String]) -> Result<u8, Failure> {
    let mut cfg = VerifyConfig {
        seed: cli.seed,
        k_max: cli.kmax,
        n_max: cli.nmax,
        ..VerifyConfig::default()
    };
    for kv in scale {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| Failure::parse(format!("--scale expects key=value, got `{kv}`")))?;
        let key = key.to_ascii_lowercase();
        if key == "seed" {
            cfg.seed = value
                .parse()
                .map_err(|_| Failure::parse(format!("bad seed value `{value}`")))?;
        } else {
            cfg.set_scale(&key, value)?;
        }
    }
    if !KNOWN_SUITES.contains(&suite) {
        return Err(Failure::parse(format!(
            "unknown suite `{suite}` (known: {})",
            KNOWN_SUITES.join(", ")
        )));
    }
    let report = run_suite(suite, &cfg)?;
    let body = render_suite(cli.format, &report);
    emit(cli, body)?;
    Ok(if report.passed { 0 } else { EXIT_SUITE_FAILURE })
}

fn render_suite(format: Format, report: &SuiteReport) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => {
            let mut out = String::from("suite,check,passed,worst_gap,detail\n");
            for c in &report.checks {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_quote(&report.suite),
                    csv_quote(&c.name),
                    c.passed,
                    c.worst_gap,
                    csv_quote(&c.detail)
                ));
            }
            out
        }
        Format::Text => {
            let passed = report.checks.iter().filter(|c| c.passed).count();
            let mut out = format!(
                "suite {}: {}/{} checks passed (seed {})\n",
                report.suite,
                passed,
                report.checks.len(),
                report.seed
            );
            for c in &report.checks {
                out.push_str(&format!(
                    "  [{}] {} — worst gap {:.3e} — {}\n",
                    if c.passed { "pass" } else { "FAIL" },
                    c.name,
                    c.worst_gap,
                    c.detail
                ));
            }
            out
        }
    }
}

// ---------------------------------------------------------------------------
// construct

#[derive(Serialize)]
struct BlockFamilyDoc {
    weight: String,
    blocks: u64,
    len: u64,
    scheme: String,
    origin: String,
    members: Vec<SeqVec>,
}

#[derive(Serialize)]
struct InterleaveDoc {
    blocks: String,
    targets: String,
    map: Vec<u64>,
}

fn cmd_construct(cli: &Cli, what: &Construct) -> Result<u8, Failure> {
    match what {
        Construct::Blockfamily {
            weight,
            blocks,
            len,
            scheme,
        } => {
            if *blocks == 0 || *len == 0 {
                return Err(Failure::parse("--blocks and --len must be at least 1"));
            }
            let w = Weight::parse_literal(weight)?;
            if let Some(limit) = w.len_limit() {
                if *len > limit {
                    return Err(Failure::precondition(format!(
                        "weight table has {limit} terms but --len asks for {len}"
                    )));
                }
            }
            let scheme = Scheme::parse(scheme)?;
            let family = block_family(&w, *blocks, *len, scheme);
            let doc = BlockFamilyDoc {
                weight: w.label(),
                blocks: *blocks,
                len: *len,
                scheme: scheme.label().to_string(),
                origin: family.origin.clone(),
                members: family.members,
            };
            let body = match cli.format {
                Format::Json => to_json(&doc),
                Format::Csv => {
                    let mut out = String::from("member,index,value\n");
                    for (n, f) in doc.members.iter().enumerate() {
                        for (k, v) in f.iter() {
                            out.push_str(&format!("{},{k},{v}\n", n + 1));
                        }
                    }
                    out
                }
                Format::Text => {
                    let mut out = format!("# {}\n", doc.origin);
                    for (n, f) in doc.members.iter().enumerate() {
                        out.push_str(&format!("# member {}\n{}", n + 1, f.to_text()));
                    }
                    out
                }
            };
            emit(cli, body)?;
            Ok(0)
        }
        Construct::Interleavemap { blocks, targets } => {
            let block_specs = parse_blocks(blocks)?;
            let target_specs = parse_targets(targets)?;
            let map = interleave_map(&block_specs, &target_specs)?;
            let doc = InterleaveDoc {
                blocks: blocks.clone(),
                targets: targets.clone(),
                map: map.values().to_vec(),
            };
            let body = match cli.format {
                Format::Json => to_json(&doc),
                Format::Csv => {
                    let mut out = String::from("k,phi\n");
                    for (k, v) in doc.map.iter().enumerate() {
                        out.push_str(&format!("{},{v}\n", k + 1));
                    }
                    out
                }
                Format::Text => {
                    let mut out = String::new();
                    for (k, v) in doc.map.iter().enumerate() {
                        out.push_str(&format!("{} {v}\n", k + 1));
                    }
                    out
                }
            };
            emit(cli, body)?;
            Ok(0)
        }
    }
}

fn parse_blocks(spec: &str) -> Result<Vec<IndexSetSpec>, Failure> {
    spec.split(';')
        .map(|group| {
            let indices = group
                .split(',')
                .map(|tok| {
                    tok.trim().parse::<u64>().map_err(|_| {
                        Failure::parse(format!("bad index `{}` in --blocks", tok.trim()))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            IndexSetSpec::explicit(indices).map_err(Failure::from)
        })
        .collect()
}

fn parse_targets(spec: &str) -> Result<Vec<IndexSetSpec>, Failure> {
    spec.split(';')
        .map(|tok| {
            let tok = tok.trim();
            match tok {
                "odd" | "odds" => Ok(IndexSetSpec::odds()),
                "even" | "evens" => Ok(IndexSetSpec::evens()),
                "all" => Ok(IndexSetSpec::all()),
                _ => {
                    if let Some(rest) = tok.strip_prefix("ap:") {
                        let (a, d) = rest.split_once(',').ok_or_else(|| {
                            Failure::parse(format!("`{tok}`: expected ap:START,STEP"))
                        })?;
                        let start = a.trim().parse().map_err(|_| {
                            Failure::parse(format!("bad progression start `{a}`"))
                        })?;
                        let step = d.trim().parse().map_err(|_| {
                            Failure::parse(format!("bad progression step `{d}`"))
                        })?;
                        IndexSetSpec::progression(start, step).map_err(Failure::from)
                    } else if let Some(rest) = tok.strip_prefix("mult:") {
                        let k = rest.trim().parse().map_err(|_| {
                            Failure::parse(format!("bad multiplier `{rest}`"))
                        })?;
                        IndexSetSpec::multiples(k).map_err(Failure::from)
                    } else if let Some(rest) = tok.strip_prefix("set:") {
                        let indices = rest
                            .split(',')
                            .map(|t| {
                                t.trim().parse::<u64>().map_err(|_| {
                                    Failure::parse(format!("bad index `{}` in set", t.trim()))
                                })
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        IndexSetSpec::explicit(indices).map_err(Failure::from)
                    } else {
                        Err(Failure::parse(format!(
                            "unknown target `{tok}` (odd, even, all, ap:START,STEP, mult:K, set:...)"
                        )))
                    }
                }
            }
        })
        .collect()
}

// ---------------------------------------------------------------------------
// plumbing

fn load_vec(src: &str) -> Result<SeqVec, Failure> {
    let path = Path::new(src);
    if path.is_file() {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::parse(format!("cannot read vector file {src}: {e}")))?;
        let head = text.trim_start();
        return if head.starts_with('{') || head.starts_with('[') {
            SeqVec::from_json(&text).map_err(Failure::from)
        } else {
            SeqVec::from_text(&text).map_err(Failure::from)
        };
    }
    let mut values = Vec::new();
    for tok in src.split_whitespace() {
        values.push(tok.parse::<f64>().map_err(|_| {
            Failure::parse(format!(
                "`{src}` is neither a readable file nor a whitespace-separated list of numbers"
            ))
        })?);
    }
    Ok(SeqVec::from_values(&values))
}

fn to_json<T: Serialize>(doc: &T) -> String {
    let mut body = serde_json::to_string_pretty(doc).expect("report serialization cannot fail");
    body.push('\n');
    body
}

/// The kebab-case name serde would emit for a unit enum variant.
fn serde_label<T: Serialize>(value: &T) -> String {
    match serde_json::to_value(value).expect("enum serialization cannot fail") {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

fn emit(cli: &Cli, body: String) -> Result<(), Failure> {
    match &cli.output {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(p) => {
            let target = if p.is_relative() {
                match std::env::var_os("SEQSPACE_OUTPUT_DIR") {
                    Some(dir) => PathBuf::from(dir).join(p),
                    None => p.clone(),
                }
            } else {
                p.clone()
            };
            std::fs::write(&target, body).map_err(|e| {
                Failure::parse(format!("cannot write {}: {e}", target.display()))
            })
        }
    }
}
