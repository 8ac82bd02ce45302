//! Command-line front end. Every JSON document carries `"schema": 1` and echoes
//! the parsed arguments under `"config"`, so an output file records how to
//! reproduce itself.
//!
//! Exit status: 0 when every verdict holds, 1 on a verdict failure, 2 on usage
//! or validation errors, 3 when the enumeration budget is exceeded.

use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::{
    brute_force_count, count_distinct_solutions, count_solutions, EquationCoeffs, ScaledFunction, SolutionCount,
    DEFAULT_BUDGET,
};
use crate::error::{Error, Result};
use crate::json;
use crate::sets::{almost_sidon_params, erdos_turan, is_sidon, mian_chowla, perturb_almost_sidon, representation_profile, IntegerSet};
use crate::spectral::{default_grid, energy_via_fourier, large_spectrum};
use crate::suites::{model_verdicts, run_suite};
use crate::transference::{bohr_set, dense_model, transference_report_with, ReportOptions, DEFAULT_FOURIER_CONSTANT};

pub const SCHEMA: u32 = 1;
pub const BUDGET_ENV: &str = "SIDONLAB_BUDGET";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Debug, Parser, Serialize)]
#[command(name = "sidonlab", version, about = "Exact counting and dense models for Sidon sets")]
pub struct Cli {
    /// Cap on worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build a set and write it in the set-file format
    Construct(ConstructArgs),
    /// Additive energy, three ways, plus almost-Sidon parameters
    Energy(SetArg),
    /// Exact (weighted) solution count of a linear equation
    Count(CountArgs),
    /// Large spectrum on a rational grid, as TSV
    Spectrum(SpectrumArgs),
    /// Bohr set of the large spectrum
    Bohr(SpectrumArgs),
    /// Dense model diagnostics and verdicts
    Model(SpectrumArgs),
    /// Seeded verification suites
    Verify(VerifyArgs),
    /// Full transference report
    Report(ReportArgs),
    /// Timing of the convolution engine against enumeration
    Bench(BenchArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct ConstructArgs {
    #[command(subcommand)]
    pub kind: ConstructKind,
    /// Destination set file; standard output when absent
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConstructKind {
    /// {2pa + (a^2 mod p) + 1 : 0 <= a < p} inside [1, 2p^2]
    ErdosTuran {
        #[arg(long)]
        p: u64,
    },
    /// First k terms of the greedy Sidon sequence
    MianChowla {
        #[arg(long)]
        k: usize,
    },
    /// Add seeded random elements to an existing set
    Perturb {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        extra: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Args, Serialize)]
pub struct SetArg {
    /// Set file
    pub set: PathBuf,
}

#[derive(Debug, Args, Serialize)]
pub struct CountArgs {
    /// One set file for all variables, or one per variable
    #[arg(required = true)]
    pub sets: Vec<PathBuf>,
    /// Coefficients, e.g. 1,1,-2
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    /// Count only tuples with pairwise distinct entries
    #[arg(long)]
    pub distinct: bool,
    /// Also enumerate and fail on mismatch
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    pub set: PathBuf,
    /// Radius as p/q
    #[arg(long)]
    pub eps: String,
    /// Grid size m (default: next power of two >= 8 N')
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// lemmas, counting, model or all
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Overrides each suite's default trial count
    #[arg(long)]
    pub trials: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    pub set: PathBuf,
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long)]
    pub eps: String,
    #[arg(long)]
    pub grid: Option<usize>,
    /// Constant C in fourier_distance <= C eps N
    #[arg(long, default_value_t = DEFAULT_FOURIER_CONSTANT)]
    pub fourier_constant: u64,
    /// Enumerate the model count within the budget
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct BenchArgs {
    /// Interval lengths N, comma separated
    #[arg(long, value_delimiter = ',', default_value = "16,32,64")]
    pub sizes: Vec<u64>,
    #[arg(long, allow_hyphen_values = true, default_value = "1,1,-1,-1")]
    pub coeffs: String,
}

/// Parses `std::env::args`, runs, prints, and returns the exit status.
pub fn run() -> i32 {
    run_from(std::env::args_os(), &mut std::io::stdout(), &mut std::io::stderr())
}

/// Testable entry point with explicit streams.
pub fn run_from<I, T>(args: I, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli, out, err)),
            Err(e) => Err(Error::Validation(format!("thread pool: {e}"))),
        },
        None => dispatch(&cli, out, err),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Budget { .. } => EXIT_BUDGET,
                _ => EXIT_USAGE,
            }
        }
    }
}

/// Brute-force tuple budget, overridable by the environment.
pub fn budget() -> Result<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| Error::Validation(format!("{BUDGET_ENV} must be an integer, got {v:?}"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

fn read_set(path: &Path) -> Result<IntegerSet> {
    let file = File::open(path).map_err(|e| Error::Validation(format!("{}: {e}", path.display())))?;
    IntegerSet::read_from(BufReader::new(file))
}

fn parse_eps(text: &str) -> Result<BigRational> {
    json::parse_rational(text).ok_or_else(|| Error::Validation(format!("eps must be p/q, got {text:?}")))
}

fn document(cli: &Cli, body: Value) -> Value {
    let mut doc = json!({ "schema": SCHEMA, "config": cli.command });
    if let (Value::Object(d), Value::Object(b)) = (&mut doc, body) {
        d.extend(b);
    }
    doc
}

fn emit(out: &mut dyn Write, doc: &Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

fn count_json(c: &SolutionCount) -> Value {
    let mut v = c.to_json();
    if let Some(exact) = c.exact_value() {
        v["exact"] = json!(json::rational_str(&exact));
    }
    v
}

fn set_summary(s: &IntegerSet) -> Result<Value> {
    let p = almost_sidon_params(s)?;
    Ok(json!({
        "size": s.len(),
        "n": s.ambient_n(),
        "energy": p.energy.to_string(),
        "eta": json::rational_str(&p.eta),
        "delta": json::rational_str(&p.delta),
        "is_sidon": is_sidon(s),
    }))
}

fn dispatch(cli: &Cli, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    match &cli.command {
        Command::Construct(a) => {
            let set = match &a.kind {
                ConstructKind::ErdosTuran { p } => erdos_turan(*p)?,
                ConstructKind::MianChowla { k } => mian_chowla(*k)?,
                ConstructKind::Perturb { input, extra, seed } => perturb_almost_sidon(&read_set(input)?, *extra, *seed)?,
            };
            let summary = document(cli, set_summary(&set)?);
            match &a.out {
                Some(path) => {
                    set.write_to(File::create(path)?)?;
                    emit(out, &summary)?;
                }
                None => {
                    set.write_to(&mut *out)?;
                    emit(err, &summary)?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Energy(a) => {
            let set = read_set(&a.set)?;
            let profile = representation_profile(&set).energy();
            let fourier = energy_via_fourier(&set);
            let ind = ScaledFunction::indicator(&set);
            let brute = ind.energy().value.to_integer().to_string();
            let agree = profile.to_string() == brute && profile == fourier;
            let mut body = set_summary(&set)?;
            body["energy_fourier"] = json!(fourier.to_string());
            body["energy_counted"] = json!(brute);
            body["agree"] = json!(agree);
            emit(out, &document(cli, body))?;
            Ok(if agree { EXIT_OK } else { EXIT_VERDICT })
        }
        Command::Count(a) => cmd_count(cli, a, out),
        Command::Spectrum(a) => {
            let set = read_set(&a.set)?;
            let eps = parse_eps(&a.eps)?;
            let m = a.grid.unwrap_or_else(|| default_grid(set.ambient_n() as usize));
            let spec = large_spectrum(&set, &eps, m)?;
            match a.format {
                Format::Tsv => {
                    writeln!(out, "k\tm\talpha\tmagnitude\tselected")?;
                    for e in &spec.entries {
                        let sel = spec.is_selected(&e.freq);
                        writeln!(out, "{}\t{}\t{:.16e}\t{:.16e}\t{}", e.freq.k, e.freq.m, e.freq.value(), e.magnitude, sel as u8)?;
                    }
                }
                Format::Json => {
                    let entries: Vec<Value> = spec
                        .entries
                        .iter()
                        .map(|e| {
                            json!({ "k": e.freq.k, "m": e.freq.m, "magnitude": json::float(e.magnitude),
                                    "selected": spec.is_selected(&e.freq) })
                        })
                        .collect();
                    let body = json!({ "n": set.ambient_n(), "grid": m, "threshold": json::rational_str(&spec.threshold),
                                       "r": spec.r_count(), "entries": entries });
                    emit(out, &document(cli, body))?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Bohr(a) => {
            let set = read_set(&a.set)?;
            let eps = parse_eps(&a.eps)?;
            let m = a.grid.unwrap_or_else(|| default_grid(set.ambient_n() as usize));
            let spec = large_spectrum(&set, &eps, m)?;
            let freqs: Vec<_> = spec.entries.iter().map(|e| e.freq).collect();
            let bohr = bohr_set(&freqs, &eps, set.ambient_n())?;
            let bound = bohr.lower_bound(spec.r_count(), set.ambient_n());
            let body = json!({
                "n": set.ambient_n(),
                "spectrum_size": spec.entries.len(),
                "r": spec.r_count(),
                "width": bohr.width(),
                "size": bohr.len(),
                "elements": bohr.elements(),
                "bound": bound,
            });
            emit(out, &document(cli, body))?;
            Ok(if bound.holds { EXIT_OK } else { EXIT_VERDICT })
        }
        Command::Model(a) => {
            let set = read_set(&a.set)?;
            let model = dense_model(&set, &parse_eps(&a.eps)?, a.grid)?;
            let verdicts = model_verdicts(&model)?;
            let d = &model.diagnostics;
            let failed = verdicts.iter().any(|v| v.is_failure());
            let body = json!({
                "n": model.original_n,
                "n_padded": model.padded_n,
                "r": model.spectrum.r_count(),
                "bohr_size": model.bohr.len(),
                "bohr_width": model.bohr.width(),
                "mass": json::rational(&d.mass),
                "l2_value": json::rational(&d.l2_value),
                "fourier_distance": json::float(d.fourier_distance),
                "fourier_grid": d.fourier_grid,
                "verdicts": verdicts,
            });
            emit(out, &document(cli, body))?;
            Ok(if failed { EXIT_VERDICT } else { EXIT_OK })
        }
        Command::Verify(a) => {
            let summaries = run_suite(&a.suite, a.seed, a.trials)?;
            let ok = summaries.iter().all(|s| s.ok());
            emit(out, &document(cli, json!({ "suites": summaries, "ok": ok })))?;
            Ok(if ok { EXIT_OK } else { EXIT_VERDICT })
        }
        Command::Report(a) => {
            let set = read_set(&a.set)?;
            let eq = EquationCoeffs::parse(&a.coeffs)?;
            let opts = ReportOptions {
                fourier_constant: a.fourier_constant,
                oracle_budget: if a.oracle { Some(budget()?) } else { None },
                grid: a.grid,
            };
            let report = transference_report_with(&set, &eq, &parse_eps(&a.eps)?, &opts)?;
            emit(out, &document(cli, report.to_json()))?;
            Ok(if report.all_theorem_verdicts_hold() { EXIT_OK } else { EXIT_VERDICT })
        }
        Command::Bench(a) => cmd_bench(a, out, err),
    }
}

fn cmd_count(cli: &Cli, a: &CountArgs, out: &mut dyn Write) -> Result<i32> {
    let eq = EquationCoeffs::parse(&a.coeffs)?;
    let sets: Vec<IntegerSet> = a.sets.iter().map(|p| read_set(p)).collect::<Result<_>>()?;
    if sets.len() != 1 && sets.len() != eq.s() {
        return Err(Error::Validation(format!("give one set file or {} of them, got {}", eq.s(), sets.len())));
    }
    let fns: Vec<ScaledFunction> = sets.iter().map(ScaledFunction::indicator).collect();
    let refs: Vec<&ScaledFunction> = (0..eq.s()).map(|i| &fns[i % fns.len()]).collect();
    let count = if a.distinct {
        if sets.len() != 1 {
            return Err(Error::Validation("--distinct takes a single set file".into()));
        }
        count_distinct_solutions(&eq, &sets[0])?
    } else {
        count_solutions(&eq, &refs)?
    };
    let mut body = json!({ "count": count_json(&count) });
    let mut code = EXIT_OK;
    if a.oracle {
        let oracle = brute_force_count(&eq, &refs, a.distinct, budget()?)?;
        let agree = oracle.value == count.value;
        body["oracle"] = count_json(&oracle);
        body["agree"] = json!(agree);
        if !agree {
            code = EXIT_VERDICT;
        }
    }
    emit(out, &document(cli, body))?;
    Ok(code)
}

fn cmd_bench(a: &BenchArgs, out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32> {
    let eq = EquationCoeffs::parse(&a.coeffs)?;
    if a.sizes.contains(&0) {
        return Err(Error::Validation("sizes must be positive".into()));
    }
    let budget = budget()?;
    writeln!(out, "N\tfast_ms\tbrute_ms\tspeedup")?;
    for &n in &a.sizes {
        let ind = ScaledFunction::indicator(&IntegerSet::interval(n));
        let refs = vec![&ind; eq.s()];
        let t = Instant::now();
        let fast = count_solutions(&eq, &refs)?;
        let fast_ms = t.elapsed().as_secs_f64() * 1e3;
        let t = Instant::now();
        match brute_force_count(&eq, &refs, false, budget) {
            Ok(brute) => {
                let brute_ms = t.elapsed().as_secs_f64() * 1e3;
                if brute.value != fast.value {
                    writeln!(err, "error: counts disagree at N = {n}")?;
                    return Ok(EXIT_VERDICT);
                }
                writeln!(out, "{n}\t{fast_ms:.3}\t{brute_ms:.3}\t{:.2}", brute_ms / fast_ms.max(1e-6))?;
            }
            Err(Error::Budget { .. }) => writeln!(out, "{n}\t{fast_ms:.3}\tskipped\tskipped")?,
            Err(e) => return Err(e),
        }
    }
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["sidonlab"];
        full.extend_from_slice(args);
        let code = run_from(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "nope"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["construct", "erdos-turan", "--p", "4"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn construct_to_stdout_matches_library() {
        let (code, out, err) = run_args(&["construct", "erdos-turan", "--p", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out, erdos_turan(5).unwrap().to_file_string());
        let summary: Value = serde_json::from_str(&err).unwrap();
        assert_eq!(summary["schema"], 1);
        assert_eq!(summary["size"], 5);
        assert_eq!(summary["is_sidon"], true);
        assert_eq!(summary["config"]["kind"]["kind"], "erdos-turan");
    }

    #[test]
    fn zero_counting_trials() {
        let (code, out, _) = run_args(&["verify", "counting", "--trials", "0"]);
        assert_eq!(code, 0);
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["suites"][0]["trials"], 0);
    }
}
