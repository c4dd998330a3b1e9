//! `qplane`: spectra, series products, functional calculus, Čech exactness
//! and verification suites from the command line.
//!
//! Every command prints one line of JSON on stdout with keys in sorted
//! order. Exit codes: 0 success, 1 a verification suite failed, 2 bad
//! input, 3 numerically undecided, 4 geometry precondition failed.

mod plot;
mod record;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qplane_core::cechcat::{self, Basis, FiniteCategory, Presheaf, TransversalityOracle};
use qplane_core::koszul::{self, SpectrumJson};
use qplane_core::qpair::QPairJson;
use qplane_core::qtopology::ClosedSetJson;
use qplane_core::{funcalc, json as cjson, putinar_spectrum, suites, Error, Geometry, QOpenSet, QPair, QSeries, ToleranceConfig};

#[derive(Parser)]
#[command(name = "qplane", version, about = "Spectral workbench for pairs of matrices with TS = q⁻¹ST")]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    /// Write a run record (command, input digest, output, tolerances, timing).
    #[arg(long, global = true, value_name = "FILE")]
    record: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct TolArgs {
    #[arg(long, global = true)]
    tol_rank: Option<f64>,
    #[arg(long, global = true)]
    tol_relation: Option<f64>,
    #[arg(long, global = true)]
    tol_point: Option<f64>,
}

impl TolArgs {
    fn apply(&self, base: Option<ToleranceConfig>) -> Result<ToleranceConfig, Error> {
        let mut t = base.unwrap_or_default();
        if let Some(v) = self.tol_rank {
            t.rank_tol = v;
        }
        if let Some(v) = self.tol_relation {
            t.relation_tol = v;
        }
        if let Some(v) = self.tol_point {
            t.point_match_tol = v;
        }
        t.validate()?;
        Ok(t)
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Taylor spectrum of a pair, and its Putinar spectrum in a geometry.
    Spectrum {
        pair: PathBuf,
        /// fq, oy, xo, local or oq.
        #[arg(long)]
        geometry: Option<String>,
        /// SVG of the spectrum with its orbits on a log-modulus scale.
        #[arg(long, value_name = "FILE")]
        plot: Option<PathBuf>,
        /// Also scan an n × n grid on each axis for points the candidates missed.
        #[arg(long, value_name = "N")]
        grid: Option<usize>,
    },
    /// Twisted product of two truncated series.
    Qmul { f: PathBuf, g: PathBuf },
    /// Evaluate a series at a pair, optionally checking an open set.
    Calc {
        f: PathBuf,
        pair: PathBuf,
        open: Option<PathBuf>,
        /// Geometry for the admissibility check; defaults to fq.
        #[arg(long)]
        geometry: Option<String>,
    },
    /// Exactness of the augmented Čech complex of a presheaf and basis.
    Cech {
        presheaf: PathBuf,
        basis: PathBuf,
        #[arg(long)]
        p_max: Option<usize>,
    },
    /// Resolvent and spectra of a finite category under an oracle table.
    Category { category: PathBuf, oracle: PathBuf },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
}

struct Run {
    inputs: Vec<Vec<u8>>,
    tol: ToleranceConfig,
}

impl Run {
    fn read(&mut self, path: &Path) -> Result<String, Error> {
        let bytes = fs::read(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        let text = String::from_utf8(bytes.clone()).map_err(|_| Error::InvalidInput(format!("{}: not UTF-8", path.display())))?;
        self.inputs.push(bytes);
        Ok(text)
    }
}

struct Output {
    value: Value,
    code: u8,
}

impl Output {
    fn ok(value: Value) -> Self {
        Self { value, code: 0 }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::RankAmbiguous { .. } => 3,
        Error::GeometryPreconditionFailed(_) | Error::NonContractiveQ { .. } => 4,
        _ => 2,
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable output")
}

fn load_pair(run: &mut Run, path: &Path, flags: &TolArgs) -> Result<QPair, Error> {
    let mut raw: QPairJson = serde_json::from_str(&run.read(path)?)?;
    run.tol = flags.apply(raw.tolerances)?;
    raw.tolerances = Some(run.tol);
    raw.into_pair()
}

fn spectrum(run: &mut Run, flags: &TolArgs, pair: &Path, geometry: Option<&str>, plot_to: Option<&Path>, grid: Option<usize>) -> Result<Output, Error> {
    let pair = load_pair(run, pair, flags)?;
    let cfg = run.tol;
    let taylor = koszul::taylor_spectrum(&pair, &cfg)?;
    let mut out = to_value(&SpectrumJson::from(&taylor));
    let mut shown = taylor.taylor.clone();
    if let Some(g) = geometry {
        let ps = putinar_spectrum(&pair, Geometry::parse(g)?, &cfg)?;
        out["putinar"] = to_value(&ClosedSetJson::from(&ps));
        shown = ps.closed.generators.clone();
    }
    if let Some(n) = grid {
        if n < 2 {
            return Err(Error::InvalidInput("--grid needs at least 2 points per side".into()));
        }
        out["grid"] = to_value(&koszul::grid_scan(&pair, &cfg, n, None)?);
    }
    if let Some(path) = plot_to {
        let svg = plot::render(&plot::PlotInput { q: pair.q(), spectrum: &shown, undecided: &taylor.undecided, orbits: pair.q().is_contractive() });
        fs::write(path, svg).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    }
    let code = if taylor.undecided.is_empty() { 0 } else { 3 };
    Ok(Output { value: out, code })
}

fn qmul(run: &mut Run, flags: &TolArgs, f: &Path, g: &Path) -> Result<Output, Error> {
    run.tol = flags.apply(None)?;
    let f = QSeries::from_json(&run.read(f)?)?;
    let g = QSeries::from_json(&run.read(g)?)?;
    Ok(Output::ok(to_value(&f.q_mul(&g)?.to_json_value())))
}

fn calc(run: &mut Run, flags: &TolArgs, f: &Path, pair: &Path, open: Option<&Path>, geometry: Option<&str>) -> Result<Output, Error> {
    let f = QSeries::from_json(&run.read(f)?)?;
    let pair = load_pair(run, pair, flags)?;
    let cfg = run.tol;
    let Some(open) = open else {
        if geometry.is_some() {
            return Err(Error::InvalidInput("--geometry needs an open set".into()));
        }
        let r = funcalc::evaluate(&f, &pair, &cfg)?;
        return Ok(Output::ok(json!({
            "value": cjson::matrix_to_json(&r.value),
            "nilpotency_residual": r.nilpotency_residual,
        })));
    };
    let u = QOpenSet::from_json(&run.read(open)?)?;
    let geometry = Geometry::parse(geometry.unwrap_or("fq"))?;
    let adm = funcalc::calculus_admissible(&pair, &u, geometry, &cfg)?;
    if !adm.admissible {
        // the series is not defined on a neighbourhood of the spectrum
        return Ok(Output { value: json!({ "admissibility": to_value(&adm) }), code: 4 });
    }
    let r = funcalc::evaluate(&f, &pair, &cfg)?;
    Ok(Output::ok(json!({
        "value": cjson::matrix_to_json(&r.value),
        "nilpotency_residual": r.nilpotency_residual,
        "admissibility": to_value(&adm),
    })))
}

fn cech(run: &mut Run, flags: &TolArgs, presheaf: &Path, basis: &Path, p_max: Option<usize>) -> Result<Output, Error> {
    run.tol = flags.apply(None)?;
    let p = Presheaf::from_json(&run.read(presheaf)?)?;
    let (b, file_p_max) = Basis::from_json(&run.read(basis)?, &p)?;
    let report = cechcat::cech_report(&p, &b, p_max.or(file_p_max), &run.tol)?;
    Ok(Output::ok(to_value(&report)))
}

fn category(run: &mut Run, flags: &TolArgs, category: &Path, oracle: &Path) -> Result<Output, Error> {
    run.tol = flags.apply(None)?;
    let cat = FiniteCategory::from_json(&run.read(category)?)?;
    let oracle = TransversalityOracle::from_json(&run.read(oracle)?, &cat)?;
    let sp = cechcat::category_spectrum(&cat, &oracle)?;
    Ok(Output::ok(to_value(&sp.to_json_value(&cat))))
}

fn verify(run: &mut Run, flags: &TolArgs, suite: &str) -> Result<Output, Error> {
    run.tol = flags.apply(None)?;
    let reports = suites::run_suite(suite, &run.tol)?;
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        eprintln!("{} {} ({} checks)", if r.passed { "PASS" } else { "FAIL" }, r.name, r.checks);
    }
    Ok(Output { value: json!({ "passed": passed, "suites": to_value(&reports) }), code: if passed { 0 } else { 1 } })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut run = Run { inputs: Vec::new(), tol: ToleranceConfig::default() };
    let flags = &cli.tol;
    let result = match &cli.cmd {
        Cmd::Spectrum { pair, geometry, plot, grid } => spectrum(&mut run, flags, pair, geometry.as_deref(), plot.as_deref(), *grid),
        Cmd::Qmul { f, g } => qmul(&mut run, flags, f, g),
        Cmd::Calc { f, pair, open, geometry } => calc(&mut run, flags, f, pair, open.as_deref(), geometry.as_deref()),
        Cmd::Cech { presheaf, basis, p_max } => cech(&mut run, flags, presheaf, basis, *p_max),
        Cmd::Category { category: c, oracle } => category(&mut run, flags, c, oracle),
        Cmd::Verify { suite } => verify(&mut run, flags, suite),
    };
    let out = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            let code = exit_code(&e);
            Output { value: json!({ "error": e.to_string(), "exit_code": code }), code }
        }
    };
    if out.value.get("error").is_none() {
        // a closed pipe downstream is not our failure
        let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string(&out.value).expect("serializable output"));
    }
    if let Some(path) = &cli.record {
        let rec = record::RunRecord {
            command: std::env::args().collect(),
            inputs_digest: record::digest(&run.inputs),
            outputs: out.value,
            tolerances: run.tol,
            timings: record::Timings { total_ms: start.elapsed().as_secs_f64() * 1e3 },
        };
        let text = serde_json::to_string_pretty(&rec).expect("serializable record");
        if let Err(e) = fs::write(path, text + "\n") {
            eprintln!("error: {}: {e}", path.display());
            return ExitCode::from(2);
        }
    }
    ExitCode::from(out.code)
}
