//! Command-line front end. Exit codes: 0 all checks pass, 1 a check fails,
//! 2 usage, configuration or input errors.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::blaschke::BlaschkeProduct;
use crate::circle::{Band, FourierVector};
use crate::conjugation::{
    certify_commuting_pair, certify_commuting_pair_jstar, certify_intertwining_pair, certify_intertwining_pair_j,
    classify_unchecked, make_c_theta, make_c_theta_star, CertSettings,
};
use crate::decomp::{minimal_k_range, wold_decompose, TableEntry};
use crate::error::{LabError, Result};
use crate::generators::{random_symbols, GeneratorParams, SymbolClass};
use crate::io::{read_json, to_json_string, BlaschkeFile, ConjugationFile, RunConfig, SuiteResult, SymbolsFile};
use crate::operators::is_conjugation_with_tol;
use crate::report::CertReport;
use crate::structure::{
    beurling_commuting_structure, hardy_commuting_structure, model_commuting_report, model_intertwining_gamma,
};
use crate::suites::run_suite;
use crate::zn::{
    action_table, action_table_matches, decompose_conjugation, hardy_structure_zn, verify_star_factorization, Relation,
};

#[derive(Debug, Parser)]
#[command(name = "blaschke-lab", version, about = "Conjugations and commutants along finite Blaschke products")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Working band `[−band, band]`.
    #[arg(long, global = true)]
    pub band: Option<i64>,
    /// FFT grid size; at least `4·band + 4`.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub tol_exact: Option<f64>,
    #[arg(long, global = true)]
    pub tol_series: Option<f64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Write JSON output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Leave timing fields out of reports.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite.
    Verify {
        /// commutant, conj-4x, hardy-5x, model-5x, beurling-5x, zn-6x or all.
        suite: String,
    },
    /// Wold coefficient table of a function along a Blaschke product.
    Decompose {
        #[arg(long)]
        blaschke: PathBuf,
        #[arg(long)]
        input: PathBuf,
        /// `auto` or `a:b`.
        #[arg(long, default_value = "auto")]
        krange: String,
    },
    /// Conjugation check and `M_z`/`M_z²` relations of a conjugation file.
    Classify {
        #[arg(long)]
        conjugation: PathBuf,
    },
    /// Run a certifier on a symbols file.
    Certify {
        #[arg(long)]
        theorem: String,
        #[arg(long)]
        symbols: PathBuf,
    },
    /// Certified random symbol tuples of a class.
    RandomSymbols {
        #[arg(long)]
        class: String,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Checks along `zⁿ`.
    Zn {
        #[arg(long)]
        n: usize,
        /// table, eq64, thm61 or thm62.
        #[arg(long)]
        check: String,
    },
}

impl GlobalOpts {
    /// Defaults, then the file named by the config variable, then flags.
    pub fn config(&self) -> Result<RunConfig> {
        let mut c = RunConfig::from_env()?;
        if let Some(b) = self.band {
            c.band = b;
            if self.grid.is_none() {
                c.grid = c.grid.max(4 * b.max(0) as usize + 4);
            }
        }
        if let Some(g) = self.grid {
            c.grid = g;
        }
        if let Some(t) = self.tol_exact {
            c.tol_exact = t;
        }
        if let Some(t) = self.tol_series {
            c.tol_series = t;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if let Some(t) = self.trials {
            c.trials = t;
        }
        c.validate()?;
        Ok(c)
    }
}

/// Parses `args` (including the program name) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            if is_verdict(&e) {
                1
            } else {
                2
            }
        }
    }
}

/// Errors that are a negative answer about the input rather than a bad input.
fn is_verdict(e: &LabError) -> bool {
    matches!(
        e,
        LabError::NotInCommutant { .. }
            | LabError::NotInModelSpace { .. }
            | LabError::NotAConjugation { .. }
            | LabError::RelationViolation { .. }
            | LabError::StructureViolation { .. }
            | LabError::HypothesisFailure { .. }
    )
}

fn emit<T: Serialize>(out: Option<&Path>, value: &T) -> Result<()> {
    let text = to_json_string(value)?;
    match out {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<bool> {
    let config = cli.global.config()?;
    let out = cli.global.out.as_deref();
    match &cli.command {
        Command::Verify { suite } => verify(suite, &config, out, cli.global.no_timestamp),
        Command::Decompose {
            blaschke,
            input,
            krange,
        } => decompose(blaschke, input, krange, out),
        Command::Classify { conjugation } => classify(conjugation, &config, out),
        Command::Certify { theorem, symbols } => certify(theorem, symbols, &config, out),
        Command::RandomSymbols { class, count } => {
            let class: SymbolClass = class.parse()?;
            emit(out, &random_symbols(class, config.seed, *count, &GeneratorParams::default())?)?;
            Ok(true)
        }
        Command::Zn { n, check } => zn(*n, check, &config, out),
    }
}

fn verify(suite: &str, config: &RunConfig, out: Option<&Path>, no_timestamp: bool) -> Result<bool> {
    let start = Instant::now();
    let reports = run_suite(suite, config)?;
    let mut result = SuiteResult::new(suite, config, reports);
    if !no_timestamp {
        result.elapsed_ms = Some(start.elapsed().as_millis());
        result.timestamp = SystemTime::now().duration_since(UNIX_EPOCH).ok().map(|d| d.as_secs());
    }
    if out.is_some() {
        for r in &result.reports {
            println!("{} {}", if r.overall { "pass" } else { "FAIL" }, r.theorem);
            for c in r.conditions.iter().filter(|c| !c.pass) {
                println!("    {} residual {:.3e} (tol {:.1e})", c.name, c.residual, c.tol);
            }
        }
        println!("{}: {}", suite, if result.overall { "pass" } else { "FAIL" });
    }
    emit(out, &result)?;
    Ok(result.overall)
}

fn parse_krange(s: &str) -> Result<Option<(i64, i64)>> {
    if s == "auto" {
        return Ok(None);
    }
    let bad = || LabError::Config(format!("k-range must be `auto` or `a:b`, got `{s}`"));
    let (a, b) = s.split_once(':').ok_or_else(bad)?;
    let (a, b) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
    if a > b {
        return Err(bad());
    }
    Ok(Some((a, b)))
}

#[derive(Serialize)]
struct DecomposeOutput {
    k_range: (i64, i64),
    minimal_k_range: (i64, i64),
    table: Vec<TableEntry>,
    parseval_defect: f64,
    tail_bound: f64,
}

fn decompose(blaschke: &Path, input: &Path, krange: &str, out: Option<&Path>) -> Result<bool> {
    let b = read_json::<BlaschkeFile>(blaschke)?.build()?;
    let f: FourierVector = read_json(input)?;
    let w = wold_decompose(&f, &b, parse_krange(krange)?)?;
    let table = w
        .entries(1e-14)
        .into_iter()
        .map(|(j, k, c)| TableEntry { j, k, c: [c.re, c.im] })
        .collect();
    let band = f.band().unwrap_or(Band::new(0, 0));
    let defect = w.parseval_defect();
    let bound = w.tail_bound() * f.norm_sqr() + 1e-8;
    emit(
        out,
        &DecomposeOutput {
            k_range: w.k_range(),
            minimal_k_range: minimal_k_range(band, b.degree()),
            table,
            parseval_defect: defect,
            tail_bound: w.tail_bound(),
        },
    )?;
    Ok(defect <= bound)
}

fn classify(path: &Path, config: &RunConfig, out: Option<&Path>) -> Result<bool> {
    let file: ConjugationFile = read_json(path)?;
    let (c, reach) = file.build(config.band)?;
    let settings = CertSettings {
        band: reach.min(24),
        margin: 0,
        ..config.cert_settings()
    };
    let mut report = CertReport::new("classify");
    report.absorb("conjugation: ", &is_conjugation_with_tol(&*c, &settings.probes(), settings.tol_conj)?);
    let class = classify_unchecked(&*c, &settings)?;
    report.extract("class", &class);
    report.extract("kind", class.commuting_kind(settings.tol_relation));
    emit(out, &report)?;
    Ok(report.overall)
}

fn certify(theorem: &str, path: &Path, config: &RunConfig, out: Option<&Path>) -> Result<bool> {
    let file: SymbolsFile = read_json(path)?;
    let (a, b) = file.pair()?;
    let settings = config.cert_settings();
    let report = match theorem {
        "4.1" | "intertwining-cz2" => certify_intertwining_pair(a, b, &settings)?,
        "4.2" | "intertwining-j" => certify_intertwining_pair_j(a, b, &settings)?,
        "4.4" | "commuting-cz2" => certify_commuting_pair(a, b, &settings)?,
        "4.6" | "commuting-jstar" => certify_commuting_pair_jstar(a, b, &settings)?,
        "5.2" | "hardy-commuting" => {
            let h = hardy_commuting_structure(a, b, &settings)?;
            let mut r = h.report;
            r.extract("a0", [h.a0.re, h.a0.im]);
            r.extract("a1", [h.a1.re, h.a1.im]);
            r.extract("b0", [h.b0.re, h.b0.im]);
            r
        }
        "5.5" | "model-intertwining" => {
            model_intertwining_gamma(a, b, &file.inner("alpha")?, &file.inner("theta")?, &settings)?.report
        }
        "5.6" | "model-commuting" => {
            model_commuting_report(a, b, &file.inner("alpha")?, &file.inner("theta")?, &settings)?.report
        }
        "5.8" | "beurling-commuting" => {
            beurling_commuting_structure(a, b, &file.inner("alpha")?, &file.inner("beta")?, &settings)?.report
        }
        other => return Err(LabError::Config(format!("unknown certifier `{other}`"))),
    };
    emit(out, &report)?;
    Ok(report.overall)
}

fn zn(n: usize, check: &str, config: &RunConfig, out: Option<&Path>) -> Result<bool> {
    if !(2..=8).contains(&n) {
        return Err(LabError::Config(format!("n must lie in 2..=8, got {n}")));
    }
    let settings = config.cert_settings();
    let b = BlaschkeProduct::monomial(n);
    let report = match check {
        "table" | "action-table" => {
            let mut r = CertReport::new(format!("action-table-z{n}"));
            r.flag("C_zn z^k = z^(n-1-k)", action_table_matches(n)?);
            r.extract("table", action_table(n));
            r
        }
        "eq64" | "star-factorization" => verify_star_factorization(n, settings.band)?,
        "thm61" | "factorization" => {
            let mut r = CertReport::new(format!("factorization-z{n}"));
            let plain = decompose_conjugation(Arc::new(make_c_theta(&b)), &b, Relation::Intertwine, &settings)?;
            let star = decompose_conjugation(Arc::new(make_c_theta_star(&b, settings.band)?), &b, Relation::Commute, &settings)?;
            r.absorb("C_zn: ", &plain.report);
            r.absorb("C*_zn: ", &star.report);
            r.extracted = json!({ "intertwining": plain.symbols, "commuting": star.symbols });
            r
        }
        "thm62" | "hardy-structure" => {
            let h = hardy_structure_zn(Arc::new(make_c_theta_star(&b, settings.band)?), n, &settings)?;
            h.report
        }
        other => return Err(LabError::Config(format!("unknown zn check `{other}`"))),
    };
    emit(out, &report)?;
    Ok(report.overall)
}
