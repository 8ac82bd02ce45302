//! Exact counting of weighted solutions to `a_1 x_1 + ... + a_s x_s = 0`.
//!
//! The fast path dilates each function (`h_i(a_i x) = f_i(x)`), multiplies the
//! resulting Laurent polynomials exactly and reads the constant coefficient.
//! Small products use schoolbook multiplication; large ones go through the
//! multi-prime NTT in [`crate::ntt`]. Rational weights are cleared to integers
//! first and the common denominator is divided back out at the end.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::ntt;
use crate::sets::{representation_profile, IntegerSet};

/// Default number of tuple evaluations the enumeration oracle may spend.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Product length above which the NTT path replaces schoolbook multiplication.
pub const DEFAULT_NTT_THRESHOLD: usize = 1 << 14;

/// Largest number of variables accepted by [`count_distinct_solutions`].
pub const MAX_DISTINCT_VARIABLES: usize = 12;

/// Nonzero integer coefficients `a_1, ..., a_s` with `s >= 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EquationCoeffs {
    coeffs: Vec<i64>,
}

impl EquationCoeffs {
    pub fn new(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return invalid(format!("an equation needs at least two variables, got {}", coeffs.len()));
        }
        if coeffs.contains(&0) {
            return invalid("equation coefficients must be nonzero");
        }
        Ok(Self { coeffs })
    }

    /// Parses comma-separated signed integers such as `1,1,1,1,-4`.
    pub fn parse(text: &str) -> Result<Self> {
        let coeffs = text
            .split(',')
            .map(|t| t.trim().parse::<i64>().map_err(|e| Error::Validation(format!("bad coefficient `{t}`: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn s(&self) -> usize {
        self.coeffs.len()
    }

    /// `sum a_i = 0`.
    pub fn is_translation_invariant(&self) -> bool {
        self.coeffs.iter().sum::<i64>() == 0
    }

    pub fn negated(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

/// A finitely supported function `x -> weights[x - offset] * N^{half_power / 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledFunction {
    offset: i64,
    weights: Vec<BigRational>,
    half_power: i32,
    ambient_n: u64,
}

impl ScaledFunction {
    pub fn new(offset: i64, weights: Vec<BigRational>, half_power: i32, ambient_n: u64) -> Self {
        Self { offset, weights, half_power, ambient_n }
    }

    /// Integer weights with no scale.
    pub fn from_integers(offset: i64, weights: &[i64], ambient_n: u64) -> Self {
        let weights = weights.iter().map(|&w| BigRational::from_integer(w.into())).collect();
        Self::new(offset, weights, 0, ambient_n)
    }

    /// `1_S`, stored over `[min S, max S]`.
    pub fn indicator(s: &IntegerSet) -> Self {
        let el = s.elements();
        let Some(&lo) = el.first() else {
            return Self::new(1, Vec::new(), 0, s.ambient_n());
        };
        let hi = *el.last().unwrap();
        let mut weights = vec![BigRational::zero(); (hi - lo + 1) as usize];
        for &x in el {
            weights[(x - lo) as usize] = BigRational::one();
        }
        Self::new(lo, weights, 0, s.ambient_n())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }

    pub fn half_power(&self) -> i32 {
        self.half_power
    }

    pub fn ambient_n(&self) -> u64 {
        self.ambient_n
    }

    /// Number of stored positions (the declared support interval).
    pub fn width(&self) -> usize {
        self.weights.len()
    }

    /// Last stored position.
    pub fn end(&self) -> i64 {
        self.offset + self.weights.len() as i64 - 1
    }

    /// Unscaled weight at `x`.
    pub fn weight(&self, x: i64) -> BigRational {
        let i = x - self.offset;
        if i < 0 || i as usize >= self.weights.len() {
            BigRational::zero()
        } else {
            self.weights[i as usize].clone()
        }
    }

    /// `(x, weight)` for every nonzero weight.
    pub fn support(&self) -> impl Iterator<Item = (i64, &BigRational)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(move |(i, w)| (self.offset + i as i64, w))
    }

    pub fn is_zero(&self) -> bool {
        self.weights.iter().all(Zero::is_zero)
    }

    /// Multiplies the weights by `q`.
    pub fn scaled(&self, q: &BigRational) -> Self {
        let weights = self.weights.iter().map(|w| w * q).collect();
        Self::new(self.offset, weights, self.half_power, self.ambient_n)
    }

    /// Shifts the support by `t`.
    pub fn translated(&self, t: i64) -> Self {
        Self::new(self.offset + t, self.weights.clone(), self.half_power, self.ambient_n)
    }

    /// Drops zero weights at both ends.
    pub fn trimmed(&self) -> Self {
        let first = self.weights.iter().position(|w| !w.is_zero());
        let Some(first) = first else {
            return Self::new(self.offset, Vec::new(), self.half_power, self.ambient_n);
        };
        let last = self.weights.iter().rposition(|w| !w.is_zero()).unwrap();
        Self::new(
            self.offset + first as i64,
            self.weights[first..=last].to_vec(),
            self.half_power,
            self.ambient_n,
        )
    }

    /// Same function stored over `[lo, hi]`, which must contain the support.
    pub fn padded_to(&self, lo: i64, hi: i64) -> Self {
        let mut weights = vec![BigRational::zero(); (hi - lo + 1).max(0) as usize];
        for (x, w) in self.support() {
            assert!(x >= lo && x <= hi, "support point {x} outside [{lo}, {hi}]");
            weights[(x - lo) as usize] = w.clone();
        }
        Self::new(lo, weights, self.half_power, self.ambient_n)
    }

    /// `sqrt(N)` when the ambient size is a perfect square.
    pub fn exact_root(&self) -> Option<u64> {
        let r = self.ambient_n.sqrt();
        (r * r == self.ambient_n).then_some(r)
    }

    /// The represented function with the scale folded into the weights
    /// (`half_power = 0`), if that is exact.
    pub fn to_exact(&self) -> Option<Self> {
        let factor = scale_factor(self.half_power, self.ambient_n)?;
        let weights = self.weights.iter().map(|w| w * &factor).collect();
        Some(Self::new(self.offset, weights, 0, self.ambient_n))
    }

    /// Unscaled sum of weights.
    pub fn weight_sum(&self) -> BigRational {
        self.weights.iter().fold(BigRational::zero(), |acc, w| acc + w)
    }

    /// Unscaled sum of squared weights.
    pub fn weight_square_sum(&self) -> BigRational {
        self.weights.iter().fold(BigRational::zero(), |acc, w| acc + w * w)
    }

    /// Integer weights after multiplying by the least common denominator.
    pub fn cleared(&self) -> (Vec<BigInt>, BigInt) {
        let denom = self.weights.iter().fold(BigInt::one(), |acc, w| acc.lcm(w.denom()));
        let ints = self.weights.iter().map(|w| w.numer() * (&denom / w.denom())).collect();
        (ints, denom)
    }

    /// Additive energy `sum_{x - x' = y - y'} f(x) f(x') f(y) f(y')`, as a count.
    pub fn energy(&self) -> SolutionCount {
        let eq = EquationCoeffs::new(vec![1, -1, -1, 1]).unwrap();
        count_solutions(&eq, &[self, self, self, self]).unwrap()
    }
}

/// `N^{h/2}` as a rational, when exact.
pub(crate) fn scale_factor(half_power: i32, n: u64) -> Option<BigRational> {
    let root = n.sqrt();
    let base = if half_power % 2 == 0 {
        BigRational::from_integer(BigInt::from(n).pow(half_power.unsigned_abs() / 2))
    } else if root * root == n {
        BigRational::from_integer(BigInt::from(root).pow(half_power.unsigned_abs()))
    } else {
        return None;
    };
    Some(if half_power < 0 { base.recip() } else { base })
}

/// An exact count `value * N^{half_power / 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionCount {
    pub value: BigRational,
    pub half_power: i32,
    pub ambient_n: u64,
}

impl SolutionCount {
    /// `value * N^{half_power / 2}` as a rational, when exact.
    pub fn exact_value(&self) -> Option<BigRational> {
        scale_factor(self.half_power, self.ambient_n).map(|f| &self.value * f)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value_numerator": self.value.numer().to_string(),
            "value_denominator": self.value.denom().to_string(),
            "half_power": self.half_power,
        })
    }
}

/// Tuning for the convolution engine.
#[derive(Clone, Copy, Debug)]
pub struct Engine {
    /// Product length above which the NTT path is used.
    pub ntt_threshold: usize,
}

impl Default for Engine {
    fn default() -> Self {
        Self { ntt_threshold: DEFAULT_NTT_THRESHOLD }
    }
}

/// A dilated function `m -> w[(m - min_exp) / |a|]`, integer weights, with its denominator.
struct Dilated {
    min_exp: i64,
    seq: Vec<BigInt>,
    denom: BigInt,
}

fn dilate(a: i64, f: &ScaledFunction) -> Dilated {
    let f = f.trimmed();
    let (ints, denom) = f.cleared();
    if ints.is_empty() {
        return Dilated { min_exp: 0, seq: Vec::new(), denom };
    }
    let step = a.unsigned_abs() as usize;
    let len = step * (ints.len() - 1) + 1;
    let mut seq = vec![BigInt::zero(); len];
    let min_exp = if a > 0 { a * f.offset() } else { a * f.end() };
    for (j, w) in ints.into_iter().enumerate() {
        let exp = a * (f.offset() + j as i64);
        seq[(exp - min_exp) as usize] = w;
    }
    Dilated { min_exp, seq, denom }
}

/// Full product polynomial of the dilated functions: returns the exponent of
/// the first coefficient, the integer coefficients, and the denominator that
/// must divide them.
pub(crate) fn dilated_product(
    engine: &Engine,
    coeffs: &[i64],
    fns: &[&ScaledFunction],
) -> (i64, Vec<BigInt>, BigInt) {
    let parts: Vec<Dilated> = coeffs.iter().zip(fns).map(|(&a, f)| dilate(a, f)).collect();
    let min_exp = parts.iter().map(|d| d.min_exp).sum();
    let denom = parts.iter().fold(BigInt::one(), |acc, d| acc * &d.denom);
    let seqs: Vec<Vec<BigInt>> = parts.into_iter().map(|d| d.seq).collect();
    (min_exp, multiply_all(engine, &seqs), denom)
}

fn product_len(seqs: &[Vec<BigInt>]) -> usize {
    if seqs.iter().any(|s| s.is_empty()) {
        0
    } else {
        seqs.iter().map(|s| s.len()).sum::<usize>() + 1 - seqs.len()
    }
}

fn multiply_all(engine: &Engine, seqs: &[Vec<BigInt>]) -> Vec<BigInt> {
    if product_len(seqs) > engine.ntt_threshold {
        if let Some(p) = ntt::convolve_many(seqs) {
            return p;
        }
    }
    if seqs.is_empty() {
        return vec![BigInt::one()];
    }
    if ntt::fits_i128(seqs) {
        let small: Vec<Vec<i128>> = seqs.iter().map(|s| s.iter().map(|x| x.to_i128().unwrap()).collect()).collect();
        let prod = small[1..].iter().fold(small[0].clone(), |acc, s| schoolbook_i128(&acc, s));
        return prod.into_iter().map(BigInt::from).collect();
    }
    seqs[1..].iter().fold(seqs[0].clone(), |acc, s| ntt::schoolbook(&acc, s))
}

fn schoolbook_i128(a: &[i128], b: &[i128]) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (o, &y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

/// Coefficient at exponent 0 of the dilated product, for any number of factors.
pub(crate) fn count_raw(engine: &Engine, coeffs: &[i64], fns: &[&ScaledFunction]) -> BigRational {
    let parts: Vec<Dilated> = coeffs.iter().zip(fns).map(|(&a, f)| dilate(a, f)).collect();
    let denom = parts.iter().fold(BigInt::one(), |acc, d| acc * &d.denom);
    if parts.iter().any(|d| d.seq.is_empty()) {
        return BigRational::zero();
    }
    let min_exp: i64 = parts.iter().map(|d| d.min_exp).sum();
    let seqs: Vec<Vec<BigInt>> = parts.iter().map(|d| d.seq.clone()).collect();
    let len = product_len(&seqs);
    let target = -min_exp;
    if target < 0 || target as usize >= len {
        return BigRational::zero();
    }
    let target = target as usize;

    let numer = if len > engine.ntt_threshold || seqs.len() == 1 {
        multiply_all(engine, &seqs).swap_remove(target)
    } else {
        // multiply all but the last factor, then take one dot product
        let (last, rest) = seqs.split_last().unwrap();
        let head = multiply_all(engine, rest);
        let mut acc = BigInt::zero();
        for (e, h) in head.iter().enumerate() {
            if h.is_zero() || e > target {
                continue;
            }
            let j = target - e;
            if j < last.len() && !last[j].is_zero() {
                acc += h * &last[j];
            }
        }
        acc
    };
    BigRational::new(numer, denom)
}

fn check_arity(eq: &EquationCoeffs, fns: &[&ScaledFunction]) -> Result<()> {
    if fns.len() != eq.s() {
        return invalid(format!("equation has {} variables but {} functions were given", eq.s(), fns.len()));
    }
    Ok(())
}

fn combined_scale(fns: &[&ScaledFunction]) -> (i32, u64) {
    let h = fns.iter().map(|f| f.half_power()).sum();
    let n = fns
        .iter()
        .find(|f| f.half_power() != 0)
        .or(fns.first())
        .map_or(1, |f| f.ambient_n());
    (h, n)
}

/// `sum over sum a_i x_i = 0 of prod_i f_i(x_i)`, exactly, with the default engine.
pub fn count_solutions(eq: &EquationCoeffs, fns: &[&ScaledFunction]) -> Result<SolutionCount> {
    count_solutions_with(&Engine::default(), eq, fns)
}

pub fn count_solutions_with(engine: &Engine, eq: &EquationCoeffs, fns: &[&ScaledFunction]) -> Result<SolutionCount> {
    check_arity(eq, fns)?;
    let (half_power, ambient_n) = combined_scale(fns);
    let value = count_raw(engine, eq.coeffs(), fns);
    Ok(SolutionCount { value, half_power, ambient_n })
}

/// Direct enumeration: loops over the first `s - 1` variables and solves for the last.
pub fn brute_force_count(
    eq: &EquationCoeffs,
    fns: &[&ScaledFunction],
    distinct_only: bool,
    budget: u128,
) -> Result<SolutionCount> {
    check_arity(eq, fns)?;
    let (half_power, ambient_n) = combined_scale(fns);
    let zero = SolutionCount { value: BigRational::zero(), half_power, ambient_n };

    let cleared: Vec<(Vec<BigInt>, BigInt)> = fns.iter().map(|f| f.cleared()).collect();
    let supports: Vec<Vec<(i64, BigInt)>> = fns
        .iter()
        .zip(&cleared)
        .map(|(f, (ints, _))| {
            ints.iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(j, w)| (f.offset() + j as i64, w.clone()))
                .collect()
        })
        .collect();
    if supports.iter().any(|s| s.is_empty()) {
        return Ok(zero);
    }
    let s = eq.s();
    let needed = supports[..s - 1].iter().fold(1u128, |acc, sup| acc.saturating_mul(sup.len() as u128));
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let denom = cleared.iter().fold(BigInt::one(), |acc, (_, d)| acc * d);
    let last = fns[s - 1];
    let last_ints = &cleared[s - 1].0;
    let last_weight = |x: i64| -> Option<&BigInt> {
        let i = x - last.offset();
        if i < 0 || i as usize >= last_ints.len() {
            None
        } else {
            let w = &last_ints[i as usize];
            (!w.is_zero()).then_some(w)
        }
    };

    let max_abs: Vec<BigInt> = supports.iter().map(|sup| sup.iter().map(|(_, w)| w.abs()).max().unwrap()).collect();
    let bound = max_abs.iter().fold(BigInt::from(needed), |acc, m| acc * m);
    let use_machine = bound.bits() < 126;

    let coeffs = eq.coeffs();
    let a_last = coeffs[s - 1];
    let mut chosen = vec![0i64; s];
    let mut idx = vec![0usize; s - 1];
    let mut small_total: i128 = 0;
    let mut big_total = BigInt::zero();

    // odometer over the first s - 1 variables
    'outer: loop {
        let mut partial: i64 = 0;
        let mut ok = true;
        for v in 0..s - 1 {
            let x = supports[v][idx[v]].0;
            chosen[v] = x;
            partial += coeffs[v] * x;
            if distinct_only && chosen[..v].contains(&x) {
                ok = false;
            }
        }
        if ok && partial % a_last == 0 {
            let x_last = -partial / a_last;
            if let Some(w_last) = last_weight(x_last) {
                if !distinct_only || !chosen[..s - 1].contains(&x_last) {
                    if use_machine {
                        let mut p = w_last.to_i128().unwrap();
                        for v in 0..s - 1 {
                            p *= supports[v][idx[v]].1.to_i128().unwrap();
                        }
                        small_total += p;
                    } else {
                        let mut p = w_last.clone();
                        for v in 0..s - 1 {
                            p *= &supports[v][idx[v]].1;
                        }
                        big_total += p;
                    }
                }
            }
        }
        let mut v = s - 1;
        loop {
            if v == 0 {
                break 'outer;
            }
            v -= 1;
            idx[v] += 1;
            if idx[v] < supports[v].len() {
                break;
            }
            idx[v] = 0;
        }
    }
    let numer = if use_machine { BigInt::from(small_total) } else { big_total };
    Ok(SolutionCount { value: BigRational::new(numer, denom), half_power, ambient_n })
}

/// Set partitions of `{0, .., s-1}` as restricted growth strings.
pub(crate) fn set_partitions(s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; s];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == rgs.len() {
            out.push(rgs.clone());
            return;
        }
        for b in 0..=max + 1 {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, out);
        }
    }
    if s == 0 {
        return vec![Vec::new()];
    }
    rec(1, 0, &mut rgs, &mut out);
    out
}

/// Möbius weight of a partition against the bottom of the lattice:
/// `prod_blocks (-1)^{|b| - 1} (|b| - 1)!`.
pub(crate) fn mobius_weight(block_sizes: &[usize]) -> BigInt {
    block_sizes.iter().fold(BigInt::one(), |acc, &b| {
        let fact: BigInt = (1..b).map(BigInt::from).product();
        let sign = if (b - 1) % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        acc * fact * sign
    })
}

/// Counts solutions in `S` with all `s` coordinates pairwise distinct, by
/// inclusion–exclusion over the partition lattice of the variables.
pub fn count_distinct_solutions(eq: &EquationCoeffs, s_set: &IntegerSet) -> Result<SolutionCount> {
    count_distinct_solutions_with(&Engine::default(), eq, s_set)
}

pub fn count_distinct_solutions_with(
    engine: &Engine,
    eq: &EquationCoeffs,
    s_set: &IntegerSet,
) -> Result<SolutionCount> {
    let s = eq.s();
    if s > MAX_DISTINCT_VARIABLES {
        return invalid(format!(
            "distinct counting supports at most {MAX_DISTINCT_VARIABLES} variables (got {s}); use the brute-force oracle"
        ));
    }
    let indicator = ScaledFunction::indicator(s_set);
    let size = BigInt::from(s_set.len());
    let mut cache: HashMap<(Vec<i64>, usize), BigInt> = HashMap::new();
    let mut total = BigInt::zero();
    for rgs in set_partitions(s) {
        let blocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut merged = vec![0i64; blocks];
        let mut sizes = vec![0usize; blocks];
        for (v, &b) in rgs.iter().enumerate() {
            merged[b] += eq.coeffs()[v];
            sizes[b] += 1;
        }
        let free = merged.iter().filter(|&&c| c == 0).count();
        let mut key: Vec<i64> = merged.into_iter().filter(|&c| c != 0).collect();
        key.sort_unstable();
        let count = cache
            .entry((key.clone(), free))
            .or_insert_with(|| {
                let constrained = match key.len() {
                    0 => BigInt::one(),
                    // c x = 0 forces x = 0
                    1 => BigInt::from(s_set.contains(0) as u8),
                    _ => {
                        let fns = vec![&indicator; key.len()];
                        count_raw(engine, &key, &fns).to_integer()
                    }
                };
                constrained * size.pow(free as u32)
            })
            .clone();
        total += mobius_weight(&sizes) * count;
    }
    Ok(SolutionCount { value: BigRational::from_integer(total), half_power: 0, ambient_n: s_set.ambient_n() })
}

/// Outcome of the degenerate-solution check.
#[derive(Clone, Debug, Serialize)]
pub struct DegenerateReport {
    pub energy: u128,
    /// Distinct shifts `n` realised by the pinned variables.
    pub shifts_checked: usize,
    /// Largest three-variable count over all shifts.
    pub max_count: u128,
    /// Every per-shift count `c` satisfies `c^4 <= E(S)^3`.
    pub bound_holds: bool,
    /// Solutions with the last two variables equal.
    pub pinned_total: String,
    /// All solutions in `S`.
    pub total: String,
    /// Solutions with all variables distinct.
    pub distinct: String,
    /// `total - distinct`: solutions with some coincidence.
    pub degenerate_total: String,
    /// Sum over pairs `i < j` of solutions with `x_i = x_j`.
    pub pairwise_coincidence_sum: String,
    /// `degenerate_total <= pairwise_coincidence_sum`.
    pub union_bound_holds: bool,
}

/// For an equation in `s >= 5` variables, fixes `x_4, .., x_s` with
/// `x_{s-1} = x_s` and checks every resulting three-variable count against
/// `E(S)^{3/4}` (as `c^4 <= E^3`).
pub fn degenerate_bound_check(eq: &EquationCoeffs, s_set: &IntegerSet) -> Result<DegenerateReport> {
    let s = eq.s();
    if s < 5 {
        return invalid(format!("degenerate bound check needs s >= 5, got {s}"));
    }
    let engine = Engine::default();
    let a = eq.coeffs();
    let ind = ScaledFunction::indicator(s_set);
    let energy = representation_profile(s_set).energy();
    let e_cubed = BigInt::from(energy).pow(3);

    // distribution of a_1 x_1 + a_2 x_2 + a_3 x_3
    let (tri_min, tri, _) = dilated_product(&engine, &a[..3], &[&ind, &ind, &ind]);

    // distribution of the shift n over the pinned variables
    let mut shift_coeffs: Vec<i64> = a[3..s - 2].to_vec();
    let tail = a[s - 2] + a[s - 1];
    let mut free_factor = BigInt::one();
    if tail == 0 {
        free_factor = BigInt::from(s_set.len());
    } else {
        shift_coeffs.push(tail);
    }
    let fns = vec![&ind; shift_coeffs.len()];
    let (shift_min, shifts, _) = dilated_product(&engine, &shift_coeffs, &fns);

    let mut shifts_checked = 0;
    let mut max_count = BigInt::zero();
    let mut bound_holds = true;
    let mut pinned_total = BigInt::zero();
    for (i, mult) in shifts.iter().enumerate() {
        if mult.is_zero() {
            continue;
        }
        shifts_checked += 1;
        let n = shift_min + i as i64;
        let j = -n - tri_min;
        let c = if j >= 0 && (j as usize) < tri.len() { tri[j as usize].clone() } else { BigInt::zero() };
        if c.pow(4) > e_cubed {
            bound_holds = false;
        }
        pinned_total += mult * &c * &free_factor;
        if c > max_count {
            max_count = c;
        }
    }

    let all = vec![&ind; s];
    let total = count_raw(&engine, a, &all).to_integer();
    let distinct = count_distinct_solutions_with(&engine, eq, s_set)?.value.to_integer();
    let degenerate = &total - &distinct;
    let mut pairwise = BigInt::zero();
    for i in 0..s {
        for j in i + 1..s {
            let mut merged: Vec<i64> = Vec::with_capacity(s - 1);
            for (v, &c) in a.iter().enumerate() {
                if v != j {
                    merged.push(if v == i { c + a[j] } else { c });
                }
            }
            let free = merged.iter().filter(|&&c| c == 0).count();
            merged.retain(|&c| c != 0);
            let fns = vec![&ind; merged.len()];
            let constrained = match merged.len() {
                0 => BigInt::one(),
                1 => BigInt::zero(),
                _ => count_raw(&engine, &merged, &fns).to_integer(),
            };
            pairwise += constrained * BigInt::from(s_set.len()).pow(free as u32);
        }
    }

    Ok(DegenerateReport {
        energy,
        shifts_checked,
        max_count: max_count.to_u128().unwrap_or(u128::MAX),
        bound_holds,
        pinned_total: pinned_total.to_string(),
        total: total.to_string(),
        distinct: distinct.to_string(),
        union_bound_holds: degenerate <= pairwise,
        degenerate_total: degenerate.to_string(),
        pairwise_coincidence_sum: pairwise.to_string(),
    })
}
