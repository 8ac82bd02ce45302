//! Seeded verification suites. Each trial draws from its own substream of the
//! seed, so a failing trial can be replayed alone from its index.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::{EquationCoeffs, ScaledFunction};
use crate::error::{invalid, Result};
use crate::json;
use crate::rng;
use crate::sets::{almost_sidon_params, erdos_turan, mian_chowla, perturb_almost_sidon, IntegerSet};
use crate::spectral::large_sieve_diagnostic;
use crate::transference::{
    dense_model, majorant_normaliser, verify_counting_lemma, verify_repeated_differences, verify_almost_sidon_size, verify_model_l2,
    DenseModel, Verdict, DEFAULT_FOURIER_CONSTANT, FLOAT_SLACK,
};

pub const SUITES: [&str; 4] = ["lemmas", "counting", "model", "all"];

pub const DEFAULT_LEMMA_TRIALS: usize = 100;
pub const DEFAULT_COUNTING_TRIALS: usize = 50;
pub const DEFAULT_MODEL_TRIALS: usize = 8;

/// Stream tags keep the suites' random draws disjoint under one seed.
const LEMMA_STREAM: u64 = 1 << 32;
const COUNTING_STREAM: u64 = 2 << 32;
const MODEL_STREAM: u64 = 3 << 32;

/// Retries allowed when a perturbation lands at `eta >= 1`.
const MAX_REDRAWS: u64 = 64;

/// Outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteSummary {
    pub suite: String,
    pub seed: u64,
    pub trials: usize,
    /// Trials whose evaluated checks all held.
    pub passed: usize,
    /// Individual checks skipped because their hypotheses failed.
    pub skipped_checks: usize,
    pub checks: usize,
    pub failures: Vec<Value>,
}

impl SuiteSummary {
    fn new(suite: &str, seed: u64) -> Self {
        Self { suite: suite.into(), seed, trials: 0, passed: 0, skipped_checks: 0, checks: 0, failures: Vec::new() }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Tallies one trial; `witness` is recorded only when a verdict failed.
    fn record(&mut self, verdicts: &[Verdict], witness: impl FnOnce() -> Value) {
        self.trials += 1;
        self.checks += verdicts.len();
        self.skipped_checks += verdicts.iter().filter(|v| v.skipped).count();
        let failed: Vec<&Verdict> = verdicts.iter().filter(|v| v.is_failure()).collect();
        if failed.is_empty() {
            self.passed += 1;
        } else {
            let mut w = witness();
            w["trial"] = json!(self.trials - 1);
            w["failed"] = json!(failed);
            self.failures.push(w);
        }
    }
}

/// Runs the named suite. `trials` overrides each suite's default count.
pub fn run_suite(name: &str, seed: u64, trials: Option<usize>) -> Result<Vec<SuiteSummary>> {
    match name {
        "lemmas" => Ok(vec![lemma_suite(seed, trials.unwrap_or(DEFAULT_LEMMA_TRIALS))?]),
        "counting" => Ok(vec![counting_suite(seed, trials.unwrap_or(DEFAULT_COUNTING_TRIALS))?]),
        "model" => Ok(vec![model_suite(seed, trials.unwrap_or(DEFAULT_MODEL_TRIALS))?]),
        "all" => {
            let mut out = Vec::new();
            for s in &SUITES[..3] {
                out.extend(run_suite(s, seed, trials)?);
            }
            Ok(out)
        }
        other => invalid(format!("unknown suite {other:?}; expected one of {}", SUITES.join(", "))),
    }
}

/// A Sidon base set drawn from the small constructions.
fn random_base(rng: &mut impl Rng) -> Result<IntegerSet> {
    if rng.gen_bool(0.5) {
        erdos_turan(*[5u64, 7, 11, 13].choose(rng).unwrap())
    } else {
        mian_chowla(rng.gen_range(6..=20))
    }
}

/// A seeded perturbation of a Sidon set with `eta < 1`.
pub fn almost_sidon_instance(seed: u64, index: u64) -> Result<IntegerSet> {
    for redraw in 0..MAX_REDRAWS {
        let mut r = rng::substream(seed, LEMMA_STREAM + index * MAX_REDRAWS + redraw);
        let base = random_base(&mut r)?;
        let extra = r.gen_range(0..=base.len() / 4);
        let set = perturb_almost_sidon(&base, extra, r.gen())?;
        if almost_sidon_params(&set)?.eta < BigRational::from_integer(1.into()) {
            return Ok(set);
        }
    }
    invalid(format!("no perturbation with eta < 1 after {MAX_REDRAWS} redraws"))
}

/// Repeated-difference and size bounds on perturbed Sidon sets.
pub fn lemma_suite(seed: u64, trials: usize) -> Result<SuiteSummary> {
    let mut summary = SuiteSummary::new("lemmas", seed);
    for t in 0..trials as u64 {
        let set = almost_sidon_instance(seed, t)?;
        let verdicts = [verify_repeated_differences(&set)?, verify_almost_sidon_size(&set)?];
        summary.record(&verdicts, || json!({ "set": set.to_file_string() }));
    }
    Ok(summary)
}

/// One counting-lemma instance: a normalised model majorant and signed minorants.
pub struct CountingCase {
    pub set: IntegerSet,
    pub eq: EquationCoeffs,
    pub nu: ScaledFunction,
    pub fns: Vec<ScaledFunction>,
    /// Length of the interval carrying `nu`.
    pub n: u64,
    pub normaliser: u64,
}

/// Builds case `index`: `nu = (f + N'^{1/2} 1_S) / c` for the dense model at
/// `eps = 1/2`, and `f_i = nu u_i` with `u_i` random multiples of 1/4 in `[-1, 1]`.
pub fn counting_case(seed: u64, index: u64) -> Result<CountingCase> {
    let mut r = rng::substream(seed, COUNTING_STREAM + index);
    let set = perturb_almost_sidon(&erdos_turan(*[7u64, 11, 13].choose(&mut r).unwrap())?, r.gen_range(0..3), r.gen())?;
    let eps = BigRational::new(1.into(), 2.into());
    let model = dense_model(&set, &eps, None)?;
    let n = model.interval_len();
    let raw = model.majorant();
    let normaliser = majorant_normaliser(&raw, n)?;
    let nu = raw.scaled(&BigRational::new(1.into(), normaliser.into()));
    let coeffs: Vec<i64> = (0..5)
        .map(|_| {
            let a = r.gen_range(1..=3i64);
            if r.gen_bool(0.5) {
                a
            } else {
                -a
            }
        })
        .collect();
    let eq = EquationCoeffs::new(coeffs)?;
    let fns = (0..5)
        .map(|_| {
            let w = nu
                .weights()
                .iter()
                .map(|x| x * BigRational::new(BigInt::from(r.gen_range(-4..=4i64)), 4.into()))
                .collect();
            ScaledFunction::new(nu.offset(), w, 0, nu.ambient_n())
        })
        .collect();
    Ok(CountingCase { set: model.set, eq, nu, fns, n, normaliser })
}

/// Counting lemma for bounded-energy majorants on seeded dense-model cases.
pub fn counting_suite(seed: u64, trials: usize) -> Result<SuiteSummary> {
    let mut summary = SuiteSummary::new("counting", seed);
    for t in 0..trials as u64 {
        let case = counting_case(seed, t)?;
        let refs: Vec<&ScaledFunction> = case.fns.iter().collect();
        let check = verify_counting_lemma(&case.nu, &refs, &case.eq, case.n)?;
        summary.record(std::slice::from_ref(&check.verdict), || {
            json!({
                "set": case.set.to_file_string(),
                "coeffs": case.eq.coeffs(),
                "n": case.n,
                "normaliser": case.normaliser,
                "lhs": check.lhs,
                "rhs": json::float(check.rhs),
            })
        });
    }
    Ok(summary)
}

/// Every exact and measured check on one dense model.
pub fn model_verdicts(model: &DenseModel) -> Result<Vec<Verdict>> {
    let d = &model.diagnostics;
    let mass_expected = BigRational::from_integer(BigInt::from(model.set.len() * model.bohr.len()));
    let mass = Verdict {
        name: "mass sum g = |S||B|".into(),
        holds: d.mass == mass_expected,
        theorem_backed: true,
        skipped: false,
        lhs: json::rational_str(&d.mass),
        rhs: json::rational_str(&mass_expected),
        note: None,
    };
    let l2 = verify_model_l2(model)?;
    let bound = model.bohr_bound();
    let bohr = Verdict {
        name: "|B| ceil(4/eps)^(1+R) >= N".into(),
        holds: bound.holds,
        theorem_backed: true,
        skipped: false,
        lhs: format!("|B| = {}, R = {}", bound.size, bound.r),
        rhs: model.padded_n.to_string(),
        note: None,
    };
    let sieve = large_sieve_diagnostic(&model.set, &model.spectrum)?;
    let sieve_verdict = Verdict {
        name: "large sieve".into(),
        holds: sieve.lhs <= sieve.rhs as f64 * (1.0 + FLOAT_SLACK),
        theorem_backed: true,
        skipped: false,
        lhs: format!("{:.16e}", sieve.lhs),
        rhs: sieve.rhs.to_string(),
        note: None,
    };
    Ok(vec![
        mass,
        l2.inequality,
        l2.identity,
        model.fourier_verdict(DEFAULT_FOURIER_CONSTANT),
        bohr,
        sieve_verdict,
    ])
}

/// The fixed acceptance models, then `trials` seeded perturbations at random radii.
pub fn model_suite(seed: u64, trials: usize) -> Result<SuiteSummary> {
    let mut summary = SuiteSummary::new("model", seed);
    let mut cases: Vec<(IntegerSet, BigRational)> = Vec::new();
    for p in [11u64, 13] {
        for q in [5i64, 10] {
            cases.push((erdos_turan(p)?, BigRational::new(1.into(), q.into())));
        }
    }
    for t in 0..trials as u64 {
        let mut r = rng::substream(seed, MODEL_STREAM + t);
        let base = erdos_turan(*[11u64, 13, 17, 23].choose(&mut r).unwrap())?;
        let set = perturb_almost_sidon(&base, r.gen_range(0..4), r.gen())?;
        let q = *[2i64, 3, 5, 10].choose(&mut r).unwrap();
        cases.push((set, BigRational::new(1.into(), q.into())));
    }
    for (set, eps) in cases {
        let model = dense_model(&set, &eps, None)?;
        let verdicts = model_verdicts(&model)?;
        summary.record(&verdicts, || json!({ "set": set.to_file_string(), "eps": json::rational_str(&eps) }));
    }
    Ok(summary)
}
