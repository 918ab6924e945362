//! Command-line front end.
//!
//! Exit codes: `0` when every check in the run agrees, `1` on a certificate
//! failure or count mismatch, `2` on usage or resource errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{Field, FieldError};
use crate::graph::{
    export_graph6, DenseAdjacency, DistanceCensus, GraphError, IntegralGraph, MatrixIdentity,
    SrgCertificate, DEFAULT_GRAPH_BOUND, DENSE_BOUND,
};
use crate::lemmas::{self, LemmaError, LemmaReport, DEFAULT_LEMMA_BOUND};
use crate::params::{
    self, errata_report, feasibility_check, ErrataEntry, FeasibilityReport, ParamError, SrgParams,
    Verdict,
};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "integral-srg",
    version,
    about = "Integral-distance graphs on AG(m, q)"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Printed and validated parameter formulas, with feasibility checks.
    Params(CaseArgs),
    /// Build the graph and report the distance census.
    Build(CaseArgs),
    /// Certify strong regularity by exhaustive counting.
    Certify(CaseArgs),
    /// Check every counting lemma against its oracle.
    Lemma(CaseArgs),
    /// Certify and check lemmas over a grid of (q, m).
    Sweep(SweepArgs),
    /// Write the graph in graph6 format.
    Export(CaseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, env = "INTEGRAL_SRG_WORKERS", value_parser = clap::value_parser!(u16).range(1..))]
    pub workers: Option<u16>,
    /// Cap on q^m for graphs and oracles.
    #[arg(long)]
    pub size_bound: Option<u64>,
    /// Cap on vertex count for the dense matrix check.
    #[arg(long, default_value_t = DENSE_BOUND)]
    pub dense_bound: usize,
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    #[arg(long)]
    pub q: u64,
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Comma-separated field orders.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub q: Vec<u64>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub m: Vec<usize>,
    /// Report zero wall time, for byte-identical reruns.
    #[arg(long)]
    pub no_timing: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Lemma(#[from] LemmaError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("thread pool: {0}")]
    Pool(String),
}

/// Every report is wrapped with the schema version and command name.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: u32,
    pub command: String,
    pub report: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsReport {
    pub q: u64,
    pub m: usize,
    pub transcribed: SrgParams,
    pub validated: SrgParams,
    pub lambda_closed_form: i128,
    pub transcribed_orbit_size: i128,
    pub validated_orbit_size: i128,
    pub transcribed_feasibility: FeasibilityReport,
    pub validated_feasibility: FeasibilityReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub q: u64,
    pub m: usize,
    pub v: u64,
    pub epsilon: u32,
    pub census: DistanceCensus,
    pub k: u64,
    /// `nplus = nminus`, and both equal the orbit-size formula when `m >= 4`.
    pub census_matches: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertifyReport {
    pub certificate: SrgCertificate,
    pub three_level_identity: bool,
    pub feasibility: FeasibilityReport,
    pub matrix_identity: Option<MatrixIdentity>,
    pub validated: Option<SrgParams>,
    pub lambda_closed_form: Option<i128>,
    pub errata: Vec<ErrataEntry>,
    pub all_match: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepRow {
    pub q: u64,
    pub m: usize,
    pub status: String,
    pub v: Option<u64>,
    pub k: Option<u64>,
    pub lambda: Option<u64>,
    pub mu: Option<u64>,
    pub is_srg: Option<bool>,
    pub params_match: Option<bool>,
    pub lemmas_match: Option<bool>,
    pub matrix_identity: Option<bool>,
    pub wall_ms: u64,
}

/// CSV header of the sweep table, in column order.
pub const SWEEP_COLUMNS: [&str; 12] = [
    "q",
    "m",
    "status",
    "v",
    "k",
    "lambda",
    "mu",
    "is_srg",
    "params_match",
    "lemmas_match",
    "matrix_identity",
    "wall_ms",
];

pub const SKIPPED_SIZE_BOUND: &str = "SKIPPED(SizeBound)";

/// Parses arguments, runs, and returns the process exit code. Reports go to
/// the output path or standard output; errors to standard error.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    let common = match &cli.command {
        Command::Params(a)
        | Command::Build(a)
        | Command::Certify(a)
        | Command::Lemma(a)
        | Command::Export(a) => &a.common,
        Command::Sweep(a) => &a.common,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = common.workers {
        pool = pool.num_threads(w as usize);
    }
    let pool = pool.build().map_err(|e| CliError::Pool(e.to_string()))?;
    pool.install(|| dispatch(&cli.command))
}

fn dispatch(command: &Command) -> Result<i32, CliError> {
    match command {
        Command::Params(a) => {
            let report = params_report(a.q, a.m)?;
            let ok = report.validated_feasibility.feasible;
            emit(&a.common, "params", &report, params_text, params_csv)?;
            Ok(exit_for(ok))
        }
        Command::Build(a) => {
            let report = build_report(a.q, a.m, graph_bound(&a.common))?;
            let ok = report.census_matches;
            emit(&a.common, "build", &report, build_text, build_csv)?;
            Ok(exit_for(ok))
        }
        Command::Certify(a) => {
            let report = certify_report(a.q, a.m, graph_bound(&a.common), a.common.dense_bound)?;
            let ok = report.all_match;
            emit(&a.common, "certify", &report, certify_text, certify_csv)?;
            Ok(exit_for(ok))
        }
        Command::Lemma(a) => {
            let f = Field::of_order(a.q)?;
            let bound = a.common.size_bound.unwrap_or(DEFAULT_LEMMA_BOUND);
            let report = lemmas::assemble_mu(&f, a.m, bound)?;
            let ok = report.all_match();
            emit(&a.common, "lemma", &report, lemma_text, lemma_csv)?;
            Ok(exit_for(ok))
        }
        Command::Sweep(a) => {
            let rows = sweep(&a.q, &a.m, &a.common, a.no_timing);
            let code = sweep_exit(&rows);
            emit(&a.common, "sweep", &rows, sweep_text, sweep_csv)?;
            Ok(code)
        }
        Command::Export(a) => {
            let f = Field::of_order(a.q)?;
            let g = IntegralGraph::build_with_bound(&f, a.m, graph_bound(&a.common))?;
            let mut out = open_output(&a.common)?;
            export_graph6(&g, &mut out)?;
            out.flush()?;
            Ok(EXIT_OK)
        }
    }
}

fn exit_for(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_MISMATCH
    }
}

fn graph_bound(common: &CommonArgs) -> u64 {
    common.size_bound.unwrap_or(DEFAULT_GRAPH_BOUND)
}

fn open_output(common: &CommonArgs) -> Result<Box<dyn Write>, CliError> {
    Ok(match &common.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<T: Serialize>(
    common: &CommonArgs,
    command: &str,
    report: &T,
    text: fn(&T, &mut dyn Write) -> io::Result<()>,
    csv_rows: fn(&T, &mut csv::Writer<&mut dyn Write>) -> Result<(), CliError>,
) -> Result<(), CliError> {
    let mut out = open_output(common)?;
    match common.format {
        Format::Json => {
            let envelope = Envelope {
                schema: SCHEMA_VERSION,
                command: command.to_string(),
                report,
            };
            out.write_all(to_json(&envelope)?.as_bytes())?;
        }
        Format::Text => text(report, &mut out)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out as &mut dyn Write);
            csv_rows(report, &mut w)?;
            w.flush()?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String, serde_json::Error> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn params_report(q: u64, m: usize) -> Result<ParamsReport, CliError> {
    let transcribed = params::transcribed_params(q, m)?;
    let validated = params::validated_params(q, m)?;
    Ok(ParamsReport {
        q,
        m,
        transcribed,
        validated,
        lambda_closed_form: params::lambda_closed_form(q, m),
        transcribed_orbit_size: params::transcribed_orbit_size(q, m),
        validated_orbit_size: params::validated_orbit_size(q, m),
        transcribed_feasibility: feasibility_check(&transcribed),
        validated_feasibility: feasibility_check(&validated),
    })
}

pub fn build_report(q: u64, m: usize, bound: u64) -> Result<BuildReport, CliError> {
    let f = Field::of_order(q)?;
    let g = IntegralGraph::build_with_bound(&f, m, bound)?;
    let census = g.distance_census();
    let balanced = census.nplus == census.nminus;
    let census_matches = if m >= 4 {
        balanced && census.nplus as i128 == params::validated_orbit_size(q, m)
    } else {
        balanced
    };
    Ok(BuildReport {
        q,
        m,
        v: g.order() as u64,
        epsilon: f.epsilon().index(),
        census,
        k: census.degree(),
        census_matches,
    })
}

pub fn certify_report(
    q: u64,
    m: usize,
    bound: u64,
    dense_bound: usize,
) -> Result<CertifyReport, CliError> {
    let f = Field::of_order(q)?;
    let g = IntegralGraph::build_with_bound(&f, m, bound)?;
    let certificate = g.certify_srg();
    let matrix_identity = if g.order() <= dense_bound {
        Some(DenseAdjacency::from_graph_with_bound(&g, dense_bound)?.srg_identity())
    } else {
        None
    };
    let certified = SrgParams::from_certificate(&certificate);
    let (validated, lambda_closed_form, errata) = if m >= 4 {
        (
            Some(params::validated_params(q, m)?),
            Some(params::lambda_closed_form(q, m)),
            errata_report(&certificate)?,
        )
    } else {
        (None, None, Vec::new())
    };
    let three_level_identity = certificate.three_level_identity();
    let all_match = certificate.is_srg
        && three_level_identity
        && matrix_identity.as_ref().is_none_or(|mi| {
            mi.holds
                && (mi.k, mi.lambda, mi.mu) == (certificate.k, certificate.lambda, certificate.mu)
        })
        && validated.is_none_or(|v| v.tuple() == certified.tuple())
        && lambda_closed_form.is_none_or(|l| l == certified.lambda)
        && errata
            .iter()
            .filter(|e| e.quantity == "mu" || e.quantity == "v")
            .all(|e| e.verdict == Verdict::Consistent)
        && errata.iter().all(|e| e.validated == e.oracle);
    Ok(CertifyReport {
        feasibility: feasibility_check(&certified),
        certificate,
        three_level_identity,
        matrix_identity,
        validated,
        lambda_closed_form,
        errata,
        all_match,
    })
}

fn vertex_count(q: u64, m: usize) -> u128 {
    (q as u128).saturating_pow(m as u32)
}

pub fn sweep(qs: &[u64], ms: &[usize], common: &CommonArgs, no_timing: bool) -> Vec<SweepRow> {
    let bound = graph_bound(common);
    let lemma_bound = common.size_bound.unwrap_or(DEFAULT_LEMMA_BOUND);
    let mut rows = Vec::new();
    for &q in qs {
        for &m in ms {
            let start = Instant::now();
            let mut row = SweepRow {
                q,
                m,
                status: "ok".to_string(),
                v: None,
                k: None,
                lambda: None,
                mu: None,
                is_srg: None,
                params_match: None,
                lemmas_match: None,
                matrix_identity: None,
                wall_ms: 0,
            };
            if vertex_count(q, m) > bound as u128 {
                row.status = SKIPPED_SIZE_BOUND.to_string();
                rows.push(row);
                continue;
            }
            match certify_report(q, m, bound, common.dense_bound) {
                Ok(report) => {
                    let c = &report.certificate;
                    row.v = Some(c.v);
                    row.k = Some(c.k);
                    row.lambda = Some(c.lambda);
                    row.mu = Some(c.mu);
                    row.is_srg = Some(c.is_srg);
                    row.params_match = Some(report.all_match);
                    row.matrix_identity = report.matrix_identity.as_ref().map(|mi| mi.holds);
                    if m >= 4 && vertex_count(q, m) <= lemma_bound as u128 {
                        let f = Field::of_order(q).expect("certified above");
                        row.lemmas_match = Some(
                            lemmas::assemble_mu(&f, m, lemma_bound).is_ok_and(|r| r.all_match()),
                        );
                    }
                }
                Err(e) => row.status = format!("ERROR({e})"),
            }
            if !no_timing {
                row.wall_ms = start.elapsed().as_millis() as u64;
            }
            rows.push(row);
        }
    }
    rows
}

/// `2` if any cell errored, else `1` if any computed cell disagreed.
pub fn sweep_exit(rows: &[SweepRow]) -> i32 {
    if rows.iter().any(|r| r.status.starts_with("ERROR")) {
        return EXIT_USAGE;
    }
    let bad = rows.iter().any(|r| {
        r.is_srg == Some(false)
            || r.params_match == Some(false)
            || r.lemmas_match == Some(false)
            || r.matrix_identity == Some(false)
    });
    exit_for(!bad)
}

fn params_text(r: &ParamsReport, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "q = {}, m = {}", r.q, r.m)?;
    for p in [&r.transcribed, &r.validated] {
        writeln!(
            out,
            "{:<12} v = {}, k = {}, lambda = {}, mu = {}",
            format!("{:?}", p.source).to_lowercase(),
            p.v,
            p.k,
            p.lambda,
            p.mu
        )?;
    }
    writeln!(out, "lambda closed form = {}", r.lambda_closed_form)?;
    writeln!(
        out,
        "orbit size: transcribed {}, validated {}",
        r.transcribed_orbit_size, r.validated_orbit_size
    )?;
    writeln!(
        out,
        "feasible: transcribed {}, validated {}",
        r.transcribed_feasibility.feasible, r.validated_feasibility.feasible
    )
}

fn params_csv(r: &ParamsReport, w: &mut csv::Writer<&mut dyn Write>) -> Result<(), CliError> {
    w.write_record(["source", "v", "k", "lambda", "mu", "feasible"])?;
    for (p, f) in [
        (&r.transcribed, &r.transcribed_feasibility),
        (&r.validated, &r.validated_feasibility),
    ] {
        w.write_record([
            format!("{:?}", p.source).to_lowercase(),
            p.v.to_string(),
            p.k.to_string(),
            p.lambda.to_string(),
            p.mu.to_string(),
            f.feasible.to_string(),
        ])?;
    }
    Ok(())
}

fn build_text(r: &BuildReport, out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "q = {}, m = {}, v = {}, epsilon = {}",
        r.q, r.m, r.v, r.epsilon
    )?;
    writeln!(
        out,
        "census: n0 = {}, nplus = {}, nminus = {}; k = {}",
        r.census.n0, r.census.nplus, r.census.nminus, r.k
    )?;
    writeln!(out, "census matches: {}", r.census_matches)
}

fn build_csv(r: &BuildReport, w: &mut csv::Writer<&mut dyn Write>) -> Result<(), CliError> {
    w.write_record([
        "q",
        "m",
        "v",
        "n0",
        "nplus",
        "nminus",
        "k",
        "census_matches",
    ])?;
    w.write_record([
        r.q.to_string(),
        r.m.to_string(),
        r.v.to_string(),
        r.census.n0.to_string(),
        r.census.nplus.to_string(),
        r.census.nminus.to_string(),
        r.k.to_string(),
        r.census_matches.to_string(),
    ])?;
    Ok(())
}

fn certify_text(r: &CertifyReport, out: &mut dyn Write) -> io::Result<()> {
    let c = &r.certificate;
    writeln!(out, "q = {}, m = {}", c.q, c.m)?;
    writeln!(
        out,
        "(v, k, lambda, mu) = ({}, {}, {}, {}), sigma = {}",
        c.v,
        c.k,
        c.lambda,
        c.mu,
        c.sigma.map_or("-".to_string(), |s| s.to_string())
    )?;
    writeln!(out, "is_srg: {}", c.is_srg)?;
    if let Some(w) = &c.witness {
        writeln!(
            out,
            "witness: difference {:?} ({:?}) has {} common neighbours, expected {}",
            w.difference, w.class, w.found, w.expected
        )?;
    }
    if let Some(a) = &c.advisory {
        writeln!(out, "advisory: {a}")?;
    }
    writeln!(out, "three-level identity: {}", r.three_level_identity)?;
    if let Some(mi) = &r.matrix_identity {
        writeln!(out, "matrix identity: {}", mi.holds)?;
    }
    for e in &r.errata {
        writeln!(
            out,
            "{:<11} transcribed {:>8}  validated {:>8}  certified {:>8}  {:?}",
            e.quantity, e.transcribed, e.validated, e.oracle, e.verdict
        )?;
    }
    writeln!(out, "all match: {}", r.all_match)
}

fn certify_csv(r: &CertifyReport, w: &mut csv::Writer<&mut dyn Write>) -> Result<(), CliError> {
    w.write_record(["quantity", "transcribed", "validated", "oracle", "verdict"])?;
    for e in &r.errata {
        w.write_record([
            e.quantity.clone(),
            e.transcribed.to_string(),
            e.validated.to_string(),
            e.oracle.to_string(),
            format!("{:?}", e.verdict),
        ])?;
    }
    Ok(())
}

fn lemma_text(r: &LemmaReport, out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "q = {}, m = {}, epsilon = {}", r.q, r.m, r.epsilon)?;
    for p in r.count_pairs() {
        writeln!(
            out,
            "{:<14} formula {:>10}  oracle {:>10}  {}",
            p.name,
            p.formula,
            p.oracle,
            if p.matches { "ok" } else { "MISMATCH" }
        )?;
    }
    writeln!(out, "multiplicities: {:?}", r.multiplicity.histogram)?;
    writeln!(
        out,
        "mu: assembled {}, oracle assembly {}, direct {}, graph {}, formula {}",
        r.mu_assembled, r.mu_assembled_oracle, r.mu_direct, r.mu_graph, r.mu_formula
    )?;
    writeln!(out, "all match: {}", r.all_match())
}

fn lemma_csv(r: &LemmaReport, w: &mut csv::Writer<&mut dyn Write>) -> Result<(), CliError> {
    w.write_record(["name", "formula", "oracle", "matches"])?;
    for p in r.count_pairs() {
        w.write_record([
            p.name.clone(),
            p.formula.to_string(),
            p.oracle.to_string(),
            p.matches.to_string(),
        ])?;
    }
    w.write_record([
        "mu".to_string(),
        r.mu_assembled.to_string(),
        r.mu_direct.to_string(),
        (r.mu_assembled == r.mu_direct as i128).to_string(),
    ])?;
    Ok(())
}

fn cell<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or(String::new(), |x| x.to_string())
}

fn sweep_text(rows: &Vec<SweepRow>, out: &mut dyn Write) -> io::Result<()> {
    for r in rows {
        writeln!(
            out,
            "q = {:>3}, m = {:>2}: {} (v, k, lambda, mu) = ({}, {}, {}, {}) srg {} params {} lemmas {}",
            r.q,
            r.m,
            r.status,
            cell(&r.v),
            cell(&r.k),
            cell(&r.lambda),
            cell(&r.mu),
            cell(&r.is_srg),
            cell(&r.params_match),
            cell(&r.lemmas_match),
        )?;
    }
    Ok(())
}

fn sweep_csv(rows: &Vec<SweepRow>, w: &mut csv::Writer<&mut dyn Write>) -> Result<(), CliError> {
    w.write_record(SWEEP_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.q.to_string(),
            r.m.to_string(),
            r.status.clone(),
            cell(&r.v),
            cell(&r.k),
            cell(&r.lambda),
            cell(&r.mu),
            cell(&r.is_srg),
            cell(&r.params_match),
            cell(&r.lemmas_match),
            cell(&r.matrix_identity),
            r.wall_ms.to_string(),
        ])?;
    }
    Ok(())
}
