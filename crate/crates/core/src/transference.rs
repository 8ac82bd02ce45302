//! Bohr sets, the dense model `f = N^{1/2} 1_S * mu_B`, and exact verdicts for
//! the inequalities that let dense counting results apply to sparse sets.
//!
//! The ambient size is padded to a perfect square `N' = ceil(sqrt N)^2` before
//! any model is built, so `N'^{1/2}` is an integer and every model quantity is
//! an exact rational. Only Fourier suprema are floating point.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::counting::{brute_force_count, count_solutions, EquationCoeffs, ScaledFunction};
use crate::error::{invalid, Error, Result};
use crate::json;
use crate::sets::{almost_sidon_params, ceil_sqrt, representation_profile, IntegerSet};
use crate::spectral::{
    default_grid, grid_sup, large_sieve_diagnostic, large_spectrum, sup_norm_estimate, Frequency,
    LargeSieveReport, Spectrum, DEFAULT_OVERSAMPLE,
};

/// Default ceiling `C` in `fourier_distance <= C eps N`.
pub const DEFAULT_FOURIER_CONSTANT: u64 = 16;
/// `sum nu <= NU_MASS_CONSTANT * N`.
pub const NU_MASS_CONSTANT: u64 = 4;
/// `E(nu) <= NU_ENERGY_CONSTANT * N^3`.
pub const NU_ENERGY_CONSTANT: u64 = 64;
/// Relative slack for comparisons against floating-point suprema.
pub const FLOAT_SLACK: f64 = 1e-9;

fn rat(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

fn f64_of(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// One checked inequality with both sides kept for inspection.
#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub holds: bool,
    /// Failure of a theorem-backed verdict indicates a defect, not bad luck.
    pub theorem_backed: bool,
    /// The inequality was not evaluated because its hypotheses fail.
    pub skipped: bool,
    pub lhs: String,
    pub rhs: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Verdict {
    fn exact(name: &str, lhs: &BigRational, rhs: &BigRational, holds: bool) -> Self {
        Self {
            name: name.into(),
            holds,
            theorem_backed: true,
            skipped: false,
            lhs: json::rational_str(lhs),
            rhs: json::rational_str(rhs),
            note: None,
        }
    }

    fn float(name: &str, lhs: f64, rhs: f64, holds: bool) -> Self {
        Self {
            name: name.into(),
            holds,
            theorem_backed: true,
            skipped: false,
            lhs: format!("{lhs:.16e}"),
            rhs: format!("{rhs:.16e}"),
            note: None,
        }
    }

    fn skipped(name: &str, note: &str) -> Self {
        Self {
            name: name.into(),
            holds: true,
            theorem_backed: true,
            skipped: true,
            lhs: String::new(),
            rhs: String::new(),
            note: Some(note.into()),
        }
    }

    fn informational(mut self) -> Self {
        self.theorem_backed = false;
        self
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// A theorem-backed verdict that was evaluated and failed.
    pub fn is_failure(&self) -> bool {
        self.theorem_backed && !self.skipped && !self.holds
    }
}

/// `||n k/m||_T <= eps`, decided as `min(r, m - r) <= eps m` with `r = n k mod m`.
pub fn bohr_condition(n: i64, freq: &Frequency, eps: &BigRational) -> bool {
    let m = freq.m as i128;
    let r = (n as i128 * freq.k as i128).rem_euclid(m);
    let dist = r.min(m - r);
    BigInt::from(dist) * eps.denom() <= eps.numer() * BigInt::from(m)
}

/// `{n in [-W, W] : ||n alpha||_T <= eps for every stored alpha}`, `W = floor(eps N)`.
#[derive(Clone, Debug)]
pub struct BohrSet {
    freqs: Vec<Frequency>,
    radius: BigRational,
    width: i64,
    elements: Vec<i64>,
}

/// Comparison of `|B|` with `ceil(4/eps)^{-(1+R)} N`.
#[derive(Clone, Debug, Serialize)]
pub struct BohrBound {
    pub r: usize,
    pub size: usize,
    pub ceil_four_over_eps: u64,
    /// `|B| * ceil(4/eps)^{1+R} >= N`.
    pub holds: bool,
    /// `|B| >= ceil(4/eps)^{1+R} N`, the display with a positive exponent.
    pub literal_display_holds: bool,
}

/// Builds a Bohr set by exact scan of `[-floor(eps N), floor(eps N)]`.
pub fn bohr_set(freqs: &[Frequency], eps: &BigRational, n: u64) -> Result<BohrSet> {
    if eps <= &BigRational::zero() || eps > &BigRational::new(1.into(), 2.into()) {
        return invalid(format!("Bohr radius must lie in (0, 1/2], got {eps}"));
    }
    let width = (eps * rat(n)).floor().to_integer().to_i64().unwrap();
    let elements = (-width..=width)
        .filter(|&x| freqs.iter().all(|f| bohr_condition(x, f, eps)))
        .collect();
    Ok(BohrSet { freqs: freqs.to_vec(), radius: eps.clone(), width, elements })
}

impl BohrSet {
    pub fn freqs(&self) -> &[Frequency] {
        &self.freqs
    }

    pub fn radius(&self) -> &BigRational {
        &self.radius
    }

    pub fn width(&self) -> i64 {
        self.width
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    /// Re-derives membership for every `n` in the window.
    pub fn membership_is_exact(&self) -> bool {
        (-self.width..=self.width).all(|x| {
            let member = self.freqs.iter().all(|f| bohr_condition(x, f, &self.radius));
            member == self.contains(x)
        })
    }

    /// `r_B(n)`, the number of ordered pairs in `B` with difference `n`.
    pub fn difference_counts(&self) -> Vec<(i64, u64)> {
        let span = 2 * self.width;
        let mut counts = vec![0u64; (2 * span + 1) as usize];
        for &x in &self.elements {
            for &y in &self.elements {
                counts[(x - y + span) as usize] += 1;
            }
        }
        counts
            .into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(i, c)| (i as i64 - span, c))
            .collect()
    }

    /// Lower bound check with `R` frequencies.
    pub fn lower_bound(&self, r: usize, n: u64) -> BohrBound {
        let four = rat(4) / &self.radius;
        let c = four.ceil().to_integer();
        let power = c.pow(1 + r as u32);
        let size = BigInt::from(self.len());
        BohrBound {
            r,
            size: self.len(),
            ceil_four_over_eps: c.to_u64().unwrap_or(u64::MAX),
            holds: &size * &power >= BigInt::from(n),
            literal_display_holds: size >= power * BigInt::from(n),
        }
    }
}

/// Numerical diagnostics of a dense model.
#[derive(Clone, Debug)]
pub struct ModelDiagnostics {
    /// `sum g = |S| |B|`.
    pub mass: BigRational,
    /// `sum f = N'^{1/2} |S|`.
    pub f_mass: BigRational,
    /// `sum f^2 = N' sum g^2 / |B|^2`.
    pub l2_value: BigRational,
    /// Grid maximum of `|N'^{1/2} 1_S^ - f^|`.
    pub fourier_distance: f64,
    pub fourier_grid: usize,
}

/// `f = N'^{1/2} 1_S * mu_B` with the Bohr set built from `Spec(S, eps)`.
#[derive(Clone, Debug)]
pub struct DenseModel {
    /// `S` inside the padded ambient interval `[1, N']`.
    pub set: IntegerSet,
    pub original_n: u64,
    pub padded_n: u64,
    /// `N'^{1/2}`.
    pub root: u64,
    pub eps: BigRational,
    pub spectrum: Spectrum,
    pub bohr: BohrSet,
    /// `g = 1_S * 1_B` over `[1 - W, N' + W]`, integer weights.
    pub base: ScaledFunction,
    pub diagnostics: ModelDiagnostics,
}

impl DenseModel {
    /// `f` with scale `N'^{1/2}` kept symbolic (`half_power = 1`).
    pub fn f(&self) -> ScaledFunction {
        let inv = BigRational::new(1.into(), BigInt::from(self.bohr.len()));
        let w = self.base.weights().iter().map(|x| x * &inv).collect();
        ScaledFunction::new(self.base.offset(), w, 1, self.padded_n)
    }

    /// `f` with the scale folded into rational weights.
    pub fn f_exact(&self) -> ScaledFunction {
        self.f().to_exact().expect("padded ambient is a perfect square")
    }

    /// `N'^{1/2} 1_S` over the model interval.
    pub fn scaled_indicator_exact(&self) -> ScaledFunction {
        let ind = ScaledFunction::indicator(&self.set).padded_to(self.base.offset(), self.base.end());
        ind.scaled(&rat(self.root))
    }

    /// `nu = f + N'^{1/2} 1_S`, exact.
    pub fn majorant(&self) -> ScaledFunction {
        let f = self.f_exact();
        let h = self.scaled_indicator_exact();
        let w = f.weights().iter().zip(h.weights()).map(|(a, b)| a + b).collect();
        ScaledFunction::new(f.offset(), w, 0, self.padded_n)
    }

    /// Length of the model interval `[1 - W, N' + W]`.
    pub fn interval_len(&self) -> u64 {
        self.base.width() as u64
    }

    /// `B` contains the Bohr set of the separated frequencies at radius `eps/2`
    /// and width `floor(eps N' / 2)`.
    pub fn inclusion_holds(&self) -> Result<bool> {
        let freqs: Vec<Frequency> = self.spectrum.separated.iter().map(|e| e.freq).collect();
        let half = &self.eps / rat(2);
        let inner = bohr_set(&freqs, &half, self.padded_n)?;
        Ok(inner.elements().iter().all(|&x| self.bohr.contains(x)))
    }

    pub fn bohr_bound(&self) -> BohrBound {
        self.bohr.lower_bound(self.spectrum.r_count(), self.padded_n)
    }

    /// `fourier_distance <= C eps N'`.
    pub fn fourier_verdict(&self, constant: u64) -> Verdict {
        let rhs = f64_of(&(rat(constant) * &self.eps * rat(self.padded_n)));
        let lhs = self.diagnostics.fourier_distance;
        let measured = lhs / f64_of(&(&self.eps * rat(self.padded_n)));
        Verdict::float("fourier_distance <= C eps N", lhs, rhs, lhs <= rhs * (1.0 + FLOAT_SLACK))
            .with_note(format!("C = {constant}, measured constant {measured:.6}"))
    }
}

/// Builds the dense model of `S` at radius `eps`. `grid` overrides the
/// spectrum grid, which defaults to the smallest power of two `>= 8 N'`.
pub fn dense_model(s_set: &IntegerSet, eps: &BigRational, grid: Option<usize>) -> Result<DenseModel> {
    if s_set.is_empty() {
        return invalid("dense model needs a nonempty set");
    }
    let original_n = s_set.ambient_n();
    let root = ceil_sqrt(original_n);
    let padded_n = root * root;
    let set = s_set.with_ambient(padded_n)?;
    if eps <= &BigRational::zero() || eps > &BigRational::new(1.into(), 2.into()) {
        return invalid(format!("eps must lie in (0, 1/2], got {eps}"));
    }
    // eps <= delta = |S| / N'^{1/2}
    if eps * rat(root) > rat(set.len()) {
        return invalid(format!("eps = {eps} exceeds delta = {}/{root}", set.len()));
    }
    let m = grid.unwrap_or_else(|| default_grid(padded_n as usize));
    let spectrum = large_spectrum(&set, eps, m)?;
    let freqs: Vec<Frequency> = spectrum.entries.iter().map(|e| e.freq).collect();
    let bohr = bohr_set(&freqs, eps, padded_n)?;

    let w = bohr.width();
    let lo = 1 - w;
    let hi = padded_n as i64 + w;
    let mut g = vec![0i64; (hi - lo + 1) as usize];
    for &x in set.elements() {
        for &b in bohr.elements() {
            g[(x + b - lo) as usize] += 1;
        }
    }
    let base = ScaledFunction::from_integers(lo, &g, padded_n);

    let b_size = rat(bohr.len());
    let mass = base.weight_sum();
    let f_mass = rat(root) * rat(set.len());
    let l2_value = rat(padded_n) * base.weight_square_sum() / (&b_size * &b_size);

    // N'^{1/2} (1_S - g / |B|), kept with half_power 1
    let ind = ScaledFunction::indicator(&set).padded_to(lo, hi);
    let diff_w: Vec<BigRational> =
        ind.weights().iter().zip(base.weights()).map(|(a, b)| a - b / &b_size).collect();
    let diff = ScaledFunction::new(lo, diff_w, 1, padded_n);
    let fourier_grid = default_grid(diff.width());
    let fourier_distance = if diff.is_zero() { 0.0 } else { grid_sup(&diff, fourier_grid).0 };

    Ok(DenseModel {
        set,
        original_n,
        padded_n,
        root,
        eps: eps.clone(),
        spectrum,
        bohr,
        base,
        diagnostics: ModelDiagnostics { mass, f_mass, l2_value, fourier_distance, fourier_grid },
    })
}

/// `sum_{r_S(n) > 1, n != 0} r_S(n) <= eta |S|^2 + |S|`, exactly.
pub fn verify_repeated_differences(s_set: &IntegerSet) -> Result<Verdict> {
    let params = almost_sidon_params(s_set)?;
    let profile = representation_profile(s_set);
    let lhs: u64 = profile.iter().filter(|&(n, r)| n != 0 && r > 1).map(|(_, r)| r).sum();
    let k = rat(s_set.len());
    let rhs = &params.eta * &k * &k + &k;
    let lhs = rat(lhs);
    let holds = lhs <= rhs;
    Ok(Verdict::exact("repeated differences bound", &lhs, &rhs, holds))
}

/// `(1 - eta) |S|^2 <= 4 N`, i.e. `|S| <= 2 (N / (1 - eta))^{1/2}`; skipped for `eta >= 1`.
pub fn verify_almost_sidon_size(s_set: &IntegerSet) -> Result<Verdict> {
    let params = almost_sidon_params(s_set)?;
    if params.eta >= BigRational::one() {
        return Ok(Verdict::skipped("almost-Sidon size bound", "eta >= 1, bound is vacuous"));
    }
    let k = rat(s_set.len());
    let lhs = (BigRational::one() - &params.eta) * &k * &k;
    let rhs = rat(4 * s_set.ambient_n());
    let holds = lhs <= rhs;
    Ok(Verdict::exact("almost-Sidon size bound", &lhs, &rhs, holds))
}

/// Outcome of the level-set step reducing weighted counts to dense sets.
#[derive(Clone, Debug, Serialize)]
pub struct L2Reduction {
    /// `{x : f(x) >= delta / 2}`.
    pub level_set: Vec<i64>,
    /// `sum f >= delta L` and `sum f^2 <= L` on the interval of length `L`.
    pub hypotheses_hold: bool,
    pub verdict: Verdict,
}

/// Builds the level set of `f` and checks `4 |A| >= delta^2 L`. The interval
/// length `L` defaults to the stored width of `f`.
pub fn verify_l2_reduction(f: &ScaledFunction, delta: &BigRational, interval_len: Option<u64>) -> Result<L2Reduction> {
    let exact = f
        .to_exact()
        .ok_or_else(|| Error::Validation("function scale is irrational; pad N to a perfect square".into()))?;
    if delta <= &BigRational::zero() || delta > &BigRational::one() {
        return invalid(format!("delta must lie in (0, 1], got {delta}"));
    }
    let len = rat(interval_len.unwrap_or(exact.width() as u64));
    let sum = exact.weight_sum();
    let sq = exact.weight_square_sum();
    let hypotheses_hold = sum >= delta * &len && sq <= len;
    let half = delta / rat(2);
    let level_set: Vec<i64> = exact.support().filter(|(_, w)| **w >= half).map(|(x, _)| x).collect();
    let lhs = rat(4 * level_set.len() as u64);
    let rhs = delta * delta * &len;
    let holds = lhs >= rhs;
    let mut verdict = Verdict::exact("level set density 4|A| >= delta^2 L", &lhs, &rhs, holds);
    if !hypotheses_hold {
        verdict.skipped = true;
        verdict.note = Some("hypotheses sum f >= delta L, sum f^2 <= L fail".into());
    }
    Ok(L2Reduction { level_set, hypotheses_hold, verdict })
}

/// Result of one counting-lemma check.
#[derive(Clone, Debug, Serialize)]
pub struct CountingLemmaCheck {
    /// `|sum over solutions of prod f_i(x_i)|`, exact.
    pub lhs: String,
    pub lhs_f64: f64,
    /// `N^{s-2} min_i (grid sup |f_i^|)`.
    pub rhs: f64,
    pub slack_ratio: f64,
    /// `1 / cos(pi / rho)`: how far the grid sup may sit below the true sup.
    pub grid_factor: f64,
    /// `sum nu <= N` and `E(nu) <= N^3`.
    pub premises_hold: bool,
    /// `E(f_i) <= E(nu)` for every `i`.
    pub energies_dominated: bool,
    pub verdict: Verdict,
}

/// Checks `|sum prod f_i(x_i)| <= N^{s-2} min_i ||f_i^||_inf` for `|f_i| <= nu`.
pub fn verify_counting_lemma(
    nu: &ScaledFunction,
    fns: &[&ScaledFunction],
    eq: &EquationCoeffs,
    n: u64,
) -> Result<CountingLemmaCheck> {
    let s = eq.s();
    if s < 5 {
        return invalid(format!("counting lemma needs s >= 5, got {s}"));
    }
    if fns.len() != s {
        return invalid(format!("equation has {s} variables but {} functions were given", fns.len()));
    }
    let irrational = || Error::Validation("function scale is irrational; pad N to a perfect square".into());
    let nu = nu.to_exact().ok_or_else(irrational)?;
    let exact: Vec<ScaledFunction> =
        fns.iter().map(|f| f.to_exact().ok_or_else(irrational)).collect::<Result<_>>()?;
    for (i, f) in exact.iter().enumerate() {
        for (x, w) in f.support() {
            if w.abs() > nu.weight(x) {
                return invalid(format!("|f_{}({x})| exceeds nu({x})", i + 1));
            }
        }
    }
    let n_r = rat(n);
    let nu_energy = nu.energy().value;
    let premises_hold = nu.weight_sum() <= n_r && nu_energy <= &n_r * &n_r * &n_r;
    let energies_dominated = exact.iter().all(|f| f.energy().value <= nu_energy);

    let refs: Vec<&ScaledFunction> = exact.iter().collect();
    let lhs = count_solutions(eq, &refs)?.value.abs();
    let min_sup = exact
        .iter()
        .map(|f| if f.is_zero() { Ok(0.0) } else { sup_norm_estimate(f, DEFAULT_OVERSAMPLE).map(|r| r.0) })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let rhs = (n as f64).powi(s as i32 - 2) * min_sup;
    let lhs_f64 = f64_of(&lhs);
    let holds = lhs.is_zero() || lhs_f64 <= rhs * (1.0 + FLOAT_SLACK);
    let mut verdict = Verdict::float("counting lemma", lhs_f64, rhs, holds);
    if !premises_hold {
        verdict.skipped = true;
        verdict.note = Some("premises sum nu <= N, E(nu) <= N^3 fail".into());
    }
    Ok(CountingLemmaCheck {
        lhs: json::rational_str(&lhs),
        lhs_f64,
        rhs,
        slack_ratio: if rhs > 0.0 { lhs_f64 / rhs } else { 0.0 },
        grid_factor: 1.0 / (std::f64::consts::PI / DEFAULT_OVERSAMPLE as f64).cos(),
        premises_hold,
        energies_dominated,
        verdict,
    })
}

/// The exact L2 step of the model construction.
#[derive(Clone, Debug, Serialize)]
pub struct ModelL2Check {
    /// `sum_n r_S(n) r_B(n) <= |B|^2 + (eta |S|^2 + 2|S|) |B|`.
    pub inequality: Verdict,
    /// `sum g^2 = sum_n r_S(n) r_B(n)`.
    pub identity: Verdict,
    /// `sum f^2 / N'`, reported only.
    pub l2_over_n: String,
}

pub fn verify_model_l2(model: &DenseModel) -> Result<ModelL2Check> {
    let params = almost_sidon_params(&model.set)?;
    let profile = representation_profile(&model.set);
    let lhs: BigInt = model
        .bohr
        .difference_counts()
        .into_iter()
        .map(|(n, rb)| BigInt::from(profile.r(n)) * BigInt::from(rb))
        .sum();
    let lhs = BigRational::from_integer(lhs);
    let b = rat(model.bohr.len());
    let k = rat(model.set.len());
    let rhs = &b * &b + (&params.eta * &k * &k + rat(2) * &k) * &b;
    let holds = lhs <= rhs;
    let inequality = Verdict::exact("model L2 proof step", &lhs, &rhs, holds);
    let sq = model.base.weight_square_sum();
    let identity = Verdict::exact("sum g^2 = sum r_S r_B", &sq, &lhs, sq == lhs);
    let l2_over_n = json::rational_str(&(&model.diagnostics.l2_value / rat(model.padded_n)));
    Ok(ModelL2Check { inequality, identity, l2_over_n })
}

/// Options for [`transference_report_with`].
#[derive(Clone, Copy, Debug)]
pub struct ReportOptions {
    pub fourier_constant: u64,
    /// Run the enumeration oracle on the model weights within this budget.
    pub oracle_budget: Option<u128>,
    pub grid: Option<usize>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { fourier_constant: DEFAULT_FOURIER_CONSTANT, oracle_budget: None, grid: None }
    }
}

/// Everything measured by one run of the transference pipeline.
#[derive(Clone, Debug)]
pub struct TransferenceReport {
    pub eq: EquationCoeffs,
    pub eps: BigRational,
    pub delta: BigRational,
    pub eta: BigRational,
    pub model: DenseModel,
    pub nu_mass: BigRational,
    pub nu_energy: BigRational,
    /// `sum prod f(x_i)`.
    pub model_count: BigRational,
    /// `sum prod 1_S(x_i)`, before scaling by `N'^{s/2}`.
    pub set_count_raw: BigInt,
    /// `N'^{s/2} sum prod 1_S(x_i)`.
    pub set_count: BigRational,
    /// `model_count - set_count`.
    pub difference: BigRational,
    /// `eps N'^{s-1}`.
    pub eps_scale: BigRational,
    /// `s 4^{s-1} N'^{s-2} fourier_distance`.
    pub telescoping_bound: f64,
    pub oracle_count: Option<BigRational>,
    pub level_set_size: usize,
    pub large_sieve: LargeSieveReport,
    pub bohr_bound: BohrBound,
    pub verdicts: Vec<Verdict>,
}

impl TransferenceReport {
    pub fn failures(&self) -> Vec<&Verdict> {
        self.verdicts.iter().filter(|v| v.is_failure()).collect()
    }

    pub fn all_theorem_verdicts_hold(&self) -> bool {
        self.failures().is_empty()
    }

    pub fn to_json(&self) -> Value {
        let m = &self.model;
        let d = &m.diagnostics;
        let selected: Vec<Value> = m
            .spectrum
            .separated
            .iter()
            .map(|e| json!({ "k": e.freq.k, "m": e.freq.m, "magnitude": json::float(e.magnitude) }))
            .collect();
        let s = self.eq.s() as i32;
        json!({
            "params": {
                "coeffs": self.eq.coeffs(),
                "eps": json::rational(&self.eps),
                "delta": json::rational(&self.delta),
                "delta_unpadded": json::rational(&(rat(m.set.len()) / rat(ceil_sqrt(m.original_n)))),
                "eta": json::rational(&self.eta),
                "n": m.original_n,
                "n_padded": m.padded_n,
                "set_size": m.set.len(),
            },
            "model": {
                "mass": json::rational(&d.mass),
                "f_mass": json::rational(&d.f_mass),
                "l2_value": json::rational(&d.l2_value),
                "fourier_distance": json::float(d.fourier_distance),
                "fourier_grid": d.fourier_grid,
                "spectrum_grid": m.spectrum.grid_m,
                "spectrum_size": m.spectrum.entries.len(),
            },
            "nu": {
                "mass": json::rational(&self.nu_mass),
                "energy": json::rational(&self.nu_energy),
            },
            "counts": {
                "model_count": json::rational(&self.model_count),
                "set_count_raw": self.set_count_raw.to_string(),
                "set_count": json::rational(&self.set_count),
                "difference": json::rational(&self.difference),
                "eps_n_pow_s_minus_1": json::rational(&self.eps_scale),
                "difference_over_eps_scale": json::float(f64_of(&(self.difference.abs() / &self.eps_scale))),
                "telescoping_bound": json::float(self.telescoping_bound),
                "set_count_over_n_pow_half_s_minus_1": json::float(
                    self.set_count_raw.to_f64().unwrap_or(f64::NAN) / (m.padded_n as f64).powf(s as f64 / 2.0 - 1.0)),
                "oracle_count": self.oracle_count.as_ref().map(json::rational),
            },
            "witnesses": {
                "bohr_size": m.bohr.len(),
                "bohr_width": m.bohr.width(),
                "r": m.spectrum.r_count(),
                "selected_frequencies": selected,
                "level_set_size": self.level_set_size,
                "bohr_bound": self.bohr_bound,
                "large_sieve": self.large_sieve,
            },
            "verdicts": self.verdicts,
            "all_theorem_verdicts_hold": self.all_theorem_verdicts_hold(),
        })
    }
}

pub fn transference_report(s_set: &IntegerSet, eq: &EquationCoeffs, eps: &BigRational) -> Result<TransferenceReport> {
    transference_report_with(s_set, eq, eps, &ReportOptions::default())
}

/// Runs the full pipeline: dense model, majorant, counts, and every verdict.
pub fn transference_report_with(
    s_set: &IntegerSet,
    eq: &EquationCoeffs,
    eps: &BigRational,
    opts: &ReportOptions,
) -> Result<TransferenceReport> {
    let s = eq.s();
    if s < 5 {
        return invalid(format!("transference needs s >= 5, got {s}"));
    }
    if !eq.is_translation_invariant() {
        return invalid("transference needs a translation-invariant equation (coefficients summing to 0)");
    }
    let model = dense_model(s_set, eps, opts.grid)?;
    let params = almost_sidon_params(&model.set)?;
    let n = model.padded_n;
    let n_r = rat(n);
    let delta = params.delta.clone();
    let mut verdicts = Vec::new();

    // set-level lemmas
    verdicts.push(verify_repeated_differences(&model.set)?);
    verdicts.push(verify_almost_sidon_size(&model.set)?);

    // model construction
    let d = &model.diagnostics;
    let mass_expected = rat(model.set.len() * model.bohr.len());
    verdicts.push(Verdict::exact("mass sum g = |S||B|", &d.mass, &mass_expected, d.mass == mass_expected));
    let l2 = verify_model_l2(&model)?;
    verdicts.push(l2.inequality.clone());
    verdicts.push(l2.identity.clone());
    verdicts.push(model.fourier_verdict(opts.fourier_constant));
    let inclusion = model.inclusion_holds()?;
    verdicts.push(Verdict {
        name: "Bohr inclusion from separated frequencies".into(),
        holds: inclusion,
        theorem_backed: true,
        skipped: false,
        lhs: String::new(),
        rhs: String::new(),
        note: None,
    });
    let bohr_bound = model.bohr_bound();
    verdicts.push(
        Verdict::exact(
            "|B| ceil(4/eps)^(1+R) >= N",
            &(rat(bohr_bound.size) * rat(bohr_bound.ceil_four_over_eps).pow(1 + bohr_bound.r as i32)),
            &n_r,
            bohr_bound.holds,
        )
        .with_note(format!("positive-exponent display holds: {}", bohr_bound.literal_display_holds)),
    );
    let large_sieve = large_sieve_diagnostic(&model.set, &model.spectrum)?;
    verdicts.push(Verdict::float("large sieve", large_sieve.lhs, large_sieve.rhs as f64, large_sieve.holds));

    // level set of f on the model interval
    let f = model.f();
    let f_exact = model.f_exact();
    let len = model.interval_len();
    let density = f_exact.weight_sum() / rat(len);
    let reduction = verify_l2_reduction(&f, &density.min(BigRational::one()), Some(len))?;
    verdicts.push(reduction.verdict.clone());

    // majorant nu = f + N'^{1/2} 1_S
    let nu = model.majorant();
    let nu_mass = nu.weight_sum();
    let nu_energy = nu.energy().value;
    let small_l2 = d.l2_value <= rat(2) * &n_r;
    let mass_cap = rat(NU_MASS_CONSTANT) * &n_r;
    let energy_cap = rat(NU_ENERGY_CONSTANT) * &n_r * &n_r * &n_r;
    for (name, lhs, rhs) in [("sum nu <= 4N", &nu_mass, &mass_cap), ("E(nu) <= 64 N^3", &nu_energy, &energy_cap)] {
        let v = Verdict::exact(name, lhs, rhs, lhs <= rhs);
        verdicts.push(if small_l2 { v } else { v.informational().with_note("sum f^2 > 2N, bound not implied") });
    }

    // counts
    let fs = vec![&f_exact; s];
    let model_count = count_solutions(eq, &fs)?.value;
    let ind = ScaledFunction::indicator(&model.set);
    let set_count_raw = count_solutions(eq, &vec![&ind; s])?.value.to_integer();
    let set_count = BigRational::from_integer(&set_count_raw * BigInt::from(model.root).pow(s as u32));
    let difference = &model_count - &set_count;
    let eps_scale = eps * n_r.pow(s as i32 - 1);
    let telescoping_bound = s as f64
        * (NU_MASS_CONSTANT as f64).powi(s as i32 - 1)
        * (n as f64).powi(s as i32 - 2)
        * d.fourier_distance;
    verdicts.push(
        Verdict::float(
            "telescoped difference within grid bound",
            f64_of(&difference.abs()),
            telescoping_bound,
            f64_of(&difference.abs()) <= telescoping_bound * (1.0 + FLOAT_SLACK),
        )
        .informational()
        .with_note("bound uses the grid supremum, which underestimates the true supremum"),
    );

    let oracle_count = match opts.oracle_budget {
        Some(budget) => {
            let c = brute_force_count(eq, &fs, false, budget)?.value;
            verdicts.push(Verdict::exact("model count equals oracle", &model_count, &c, model_count == c));
            Some(c)
        }
        None => None,
    };

    Ok(TransferenceReport {
        eq: eq.clone(),
        eps: eps.clone(),
        delta,
        eta: params.eta,
        level_set_size: reduction.level_set.len(),
        model,
        nu_mass,
        nu_energy,
        model_count,
        set_count_raw,
        set_count,
        difference,
        eps_scale,
        telescoping_bound,
        oracle_count,
        large_sieve,
        bohr_bound,
        verdicts,
    })
}

/// Smallest power of two `c` with `sum nu / c <= N` and `E(nu) / c^4 <= N^3`.
pub fn majorant_normaliser(nu: &ScaledFunction, n: u64) -> Result<u64> {
    let nu = nu
        .to_exact()
        .ok_or_else(|| Error::Validation("function scale is irrational; pad N to a perfect square".into()))?;
    let n_r = rat(n);
    let mass = nu.weight_sum();
    let energy = nu.energy().value;
    let mut c: u64 = 1;
    loop {
        let cr = rat(c);
        if &mass / &cr <= n_r && &energy / cr.pow(4) <= &n_r * &n_r * &n_r {
            return Ok(c);
        }
        c = c.checked_mul(2).ok_or_else(|| Error::Validation("majorant cannot be normalised".into()))?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::erdos_turan;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn freq(k: u64, m: u64) -> Frequency {
        Frequency::new(k, m).unwrap()
    }

    #[test]
    fn bohr_examples() {
        let b = bohr_set(&[], &q(1, 10), 100).unwrap();
        assert_eq!(b.elements(), (-10..=10).collect::<Vec<_>>().as_slice());
        let b = bohr_set(&[freq(1, 2)], &q(1, 10), 100).unwrap();
        assert_eq!(b.len(), 11);
        assert!(b.elements().iter().all(|x| x % 2 == 0));
        let b = bohr_set(&[freq(1, 3)], &q(1, 4), 60).unwrap();
        let oracle: Vec<i64> = (-15..=15).filter(|x: &i64| x.rem_euclid(3) == 0).collect();
        assert_eq!(b.elements(), oracle.as_slice());
        assert!(b.membership_is_exact());
        assert!(bohr_set(&[], &q(3, 5), 10).is_err());
    }

    #[test]
    fn bohr_sets_are_symmetric() {
        let b = bohr_set(&[freq(3, 17), freq(5, 11)], &q(1, 5), 200).unwrap();
        assert!(b.contains(0));
        assert!(b.elements().iter().all(|&x| b.contains(-x)));
        assert!(b.membership_is_exact());
    }

    #[test]
    fn bohr_lower_bound() {
        let b = bohr_set(&[], &q(1, 10), 100).unwrap();
        let bound = b.lower_bound(0, 100);
        assert_eq!(bound.ceil_four_over_eps, 40);
        assert!(bound.holds);
        assert!(!bound.literal_display_holds);
    }

    #[test]
    fn repeated_differences_examples() {
        let v = verify_repeated_differences(&erdos_turan(7).unwrap()).unwrap();
        assert!(v.holds);
        assert_eq!(v.lhs, "0");
        let v = verify_repeated_differences(&IntegerSet::interval(3)).unwrap();
        assert_eq!((v.lhs.as_str(), v.rhs.as_str(), v.holds), ("4", "4", true));
        let v = verify_repeated_differences(&IntegerSet::new(vec![1, 2, 3, 5], 5).unwrap()).unwrap();
        assert!(v.holds);
    }

    #[test]
    fn almost_sidon_size_examples() {
        let v = verify_almost_sidon_size(&IntegerSet::new(vec![1, 2], 2).unwrap()).unwrap();
        assert_eq!((v.lhs.as_str(), v.rhs.as_str()), ("4", "8"));
        let v = verify_almost_sidon_size(&erdos_turan(13).unwrap()).unwrap();
        assert_eq!((v.lhs.as_str(), v.rhs.as_str(), v.holds), ("169", "1352", true));
        let v = verify_almost_sidon_size(&IntegerSet::interval(3)).unwrap();
        assert_eq!((v.lhs.as_str(), v.rhs.as_str(), v.holds), ("8", "12", true));
        let v = verify_almost_sidon_size(&IntegerSet::interval(10)).unwrap();
        assert!(v.skipped);
    }

    #[test]
    fn l2_reduction_examples() {
        let n = 12;
        let one = ScaledFunction::indicator(&IntegerSet::interval(n));
        let r = verify_l2_reduction(&one, &q(1, 1), None).unwrap();
        assert!(r.hypotheses_hold && r.verdict.holds);
        assert_eq!(r.level_set.len(), n as usize);

        let half = one.scaled(&q(1, 2));
        let r = verify_l2_reduction(&half, &q(1, 2), None).unwrap();
        assert!(r.hypotheses_hold && r.verdict.holds);
        assert_eq!(r.level_set.len(), n as usize);

        let r = verify_l2_reduction(&one.scaled(&q(3, 1)), &q(1, 1), None).unwrap();
        assert!(!r.hypotheses_hold && r.verdict.skipped);
    }

    #[test]
    fn degenerate_model_is_identity() {
        // eps so small that the Bohr width is zero
        let s = erdos_turan(5).unwrap();
        let m = dense_model(&s, &q(1, 100), None).unwrap();
        assert_eq!(m.bohr.elements(), &[0]);
        assert_eq!(m.diagnostics.fourier_distance, 0.0);
        assert_eq!(m.diagnostics.mass, rat(s.len()));
        assert_eq!(m.f_exact().trimmed(), m.scaled_indicator_exact().trimmed());
    }

    #[test]
    fn model_invariants_on_erdos_turan() {
        let s = erdos_turan(11).unwrap();
        let m = dense_model(&s, &q(1, 5), None).unwrap();
        assert_eq!(m.padded_n, 256);
        assert_eq!(m.diagnostics.mass, rat(s.len() * m.bohr.len()));
        assert_eq!(m.diagnostics.f_mass, rat(16 * 11));
        assert_eq!(m.f_exact().weight_sum(), m.diagnostics.f_mass);
        assert!(m.bohr.membership_is_exact());
        assert!(m.inclusion_holds().unwrap());
        assert!(m.fourier_verdict(DEFAULT_FOURIER_CONSTANT).holds);
        let l2 = verify_model_l2(&m).unwrap();
        assert!(l2.inequality.holds && l2.identity.holds);
        let lo = m.base.offset();
        assert!(lo > -(m.padded_n as i64) / 5 && m.base.end() <= 6 * m.padded_n as i64 / 5);
    }

    #[test]
    fn model_rejects_bad_eps() {
        let s = erdos_turan(11).unwrap();
        assert!(dense_model(&s, &q(3, 4), None).is_err());
        assert!(dense_model(&s, &q(0, 1), None).is_err());
        let sparse = IntegerSet::new(vec![1, 100], 100).unwrap();
        assert!(dense_model(&sparse, &q(1, 2), None).is_err());
    }

    #[test]
    fn counting_lemma_on_interval() {
        let n = 10;
        let one = ScaledFunction::indicator(&IntegerSet::interval(n));
        let eq = EquationCoeffs::new(vec![1, 1, 1, 1, -4]).unwrap();
        let r = verify_counting_lemma(&one, &[&one; 5], &eq, n).unwrap();
        // brute force over [10]^5; E(1_[10]) = 670 <= N^3
        assert_eq!(r.lhs, "2498");
        assert_eq!(one.energy().value, rat(670));
        assert!((r.rhs - 10_000.0).abs() < 1e-6);
        assert!(r.premises_hold && r.energies_dominated && r.verdict.holds);

        let zero = one.scaled(&q(0, 1));
        let r = verify_counting_lemma(&one, &[&one, &zero, &one, &one, &one], &eq, n).unwrap();
        assert_eq!((r.lhs.as_str(), r.rhs), ("0", 0.0));
        assert!(r.verdict.holds);

        let big = one.scaled(&q(2, 1));
        assert!(verify_counting_lemma(&one, &[&big, &one, &one, &one, &one], &eq, n).is_err());
    }

    #[test]
    fn report_rejects_bad_equations() {
        let s = erdos_turan(5).unwrap();
        let eq = EquationCoeffs::new(vec![1, 1, 1, 1, 1]).unwrap();
        assert!(transference_report(&s, &eq, &q(1, 5)).is_err());
        let eq = EquationCoeffs::new(vec![1, 1, -2]).unwrap();
        assert!(transference_report(&s, &eq, &q(1, 5)).is_err());
    }

    #[test]
    fn degenerate_report_has_zero_difference() {
        let s = erdos_turan(5).unwrap();
        let eq = EquationCoeffs::new(vec![1, 1, 1, 1, -4]).unwrap();
        let r = transference_report(&s, &eq, &q(1, 100)).unwrap();
        assert!(r.difference.is_zero());
        assert!(r.all_theorem_verdicts_hold(), "{:?}", r.failures());
    }
}
