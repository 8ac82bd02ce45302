//! Fourier transforms `f^(alpha) = sum_n f(n) e(alpha n)` of finitely supported
//! functions, sampled on rational grids `alpha = k/m`.
//!
//! Magnitudes are floating point; everything that can be decided exactly
//! (frequency spacing, energies) is decided in integers.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::counting::ScaledFunction;
use crate::error::{invalid, Result};
use crate::ntt;
use crate::sets::{almost_sidon_params, IntegerSet};

/// Relative tolerance (in units of `|S|`) for the spectrum threshold test.
pub const THRESHOLD_TOLERANCE: f64 = 1e-9;

/// Default oversampling factor for grid suprema.
pub const DEFAULT_OVERSAMPLE: usize = 8;

/// A rational frequency `k/m` in `[0, 1)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Frequency {
    pub k: u64,
    pub m: u64,
}

impl Frequency {
    pub fn new(k: u64, m: u64) -> Result<Self> {
        if m == 0 || k >= m {
            return invalid(format!("frequency {k}/{m} is not in [0, 1)"));
        }
        Ok(Self { k, m })
    }

    pub fn value(&self) -> f64 {
        self.k as f64 / self.m as f64
    }

    /// Exact test of `||self - other||_T > 1/n`.
    pub fn separated_from(&self, other: &Frequency, n: u64) -> bool {
        let den = self.m as u128 * other.m as u128;
        let a = self.k as u128 * other.m as u128;
        let b = other.k as u128 * self.m as u128;
        let d = a.abs_diff(b) % den;
        let dist = d.min(den - d);
        dist * n as u128 > den
    }
}

impl PartialEq for Frequency {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frequency {}

impl PartialOrd for Frequency {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frequency {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.k as u128 * other.m as u128).cmp(&(other.k as u128 * self.m as u128))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEntry {
    pub freq: Frequency,
    pub magnitude: f64,
}

/// Grid frequencies where `|1_S^(alpha)| >= eps |S|`, with a maximal
/// `1/N`-separated subsequence.
#[derive(Clone, Debug, Serialize)]
pub struct Spectrum {
    #[serde(skip)]
    pub threshold: BigRational,
    pub grid_m: u64,
    pub ambient_n: u64,
    pub set_size: usize,
    pub entries: Vec<SpectrumEntry>,
    pub separated: Vec<SpectrumEntry>,
}

impl Spectrum {
    /// `R`, the size of the separated subset.
    pub fn r_count(&self) -> usize {
        self.separated.len()
    }

    /// Whether `freq` was selected into the separated subset.
    pub fn is_selected(&self, freq: &Frequency) -> bool {
        self.separated.iter().any(|e| e.freq == *freq)
    }

    /// Pairwise `||alpha_i - alpha_j|| > 1/N` over the separated subset.
    pub fn is_separated(&self) -> bool {
        let sel = &self.separated;
        (0..sel.len()).all(|i| (0..i).all(|j| sel[i].freq.separated_from(&sel[j].freq, self.ambient_n)))
    }

    /// Every entry lies within `1/N` of some selected frequency.
    pub fn is_maximal(&self) -> bool {
        self.entries
            .iter()
            .all(|e| self.separated.iter().any(|s| !e.freq.separated_from(&s.freq, self.ambient_n)))
    }
}

fn to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

/// `N^{h/2}` in floating point.
fn scale_f64(f: &ScaledFunction) -> f64 {
    (f.ambient_n() as f64).powf(f.half_power() as f64 / 2.0)
}

/// `|f^(k/m)|` for `k = 0..m`.
///
/// Weights are folded modulo `m` and transformed with an FFT; the forward
/// transform's sign convention does not affect magnitudes of real weights.
pub fn dft_magnitudes(f: &ScaledFunction, m: usize) -> Vec<f64> {
    assert!(m >= 1, "grid size must be positive");
    let scale = scale_f64(f);
    let mut buf = vec![Complex::new(0.0, 0.0); m];
    for (j, w) in f.weights().iter().enumerate() {
        if !w.is_zero() {
            buf[j % m].re += to_f64(w);
        }
    }
    let fft = FftPlanner::new().plan_fft_forward(m);
    fft.process(&mut buf);
    buf.iter().map(|c| c.norm() * scale).collect()
}

/// `|f^(alpha)|` by direct summation with the phase reduced exactly mod `m`.
pub fn magnitude_at(f: &ScaledFunction, freq: &Frequency) -> f64 {
    let m = freq.m as i128;
    let mut acc = Complex::new(0.0, 0.0);
    for (x, w) in f.support() {
        let r = (x as i128 * freq.k as i128).rem_euclid(m) as f64;
        acc += Complex::from_polar(to_f64(w), TAU * r / m as f64);
    }
    acc.norm() * scale_f64(f)
}

/// Smallest power of two `>= 8 * width`.
pub fn default_grid(width: usize) -> usize {
    (DEFAULT_OVERSAMPLE * width.max(1)).next_power_of_two()
}

/// Maximum of `|f^|` over the grid of size `oversample * width`, with its argmax.
///
/// The grid maximum never exceeds the true supremum; for a trigonometric
/// polynomial of degree below the width it is within a factor `1/cos(pi/oversample)`.
pub fn sup_norm_estimate(f: &ScaledFunction, oversample: usize) -> Result<(f64, Frequency)> {
    if oversample < 4 {
        return invalid(format!("oversampling factor must be at least 4, got {oversample}"));
    }
    let f = f.trimmed();
    let m = oversample * f.width().max(1);
    Ok(grid_sup(&f, m))
}

/// Maximum of `|f^|` over the grid of size `m`, first argmax on ties.
pub fn grid_sup(f: &ScaledFunction, m: usize) -> (f64, Frequency) {
    let mags = dft_magnitudes(f, m);
    let (k, &best) = mags
        .iter()
        .enumerate()
        .fold((0, &mags[0]), |acc, (k, v)| if *v > *acc.1 { (k, v) } else { acc });
    (best, Frequency { k: k as u64, m: m as u64 })
}

/// `Spec(S, eps)` sampled on the grid of size `m`, plus the greedy separated subset.
pub fn large_spectrum(s_set: &IntegerSet, eps: &BigRational, m: usize) -> Result<Spectrum> {
    if eps <= &BigRational::zero() || eps > &BigRational::from_integer(1.into()) {
        return invalid(format!("spectrum threshold must lie in (0, 1], got {eps}"));
    }
    if m == 0 {
        return invalid("grid size must be positive");
    }
    let size = s_set.len();
    let ind = ScaledFunction::indicator(s_set);
    let mags = dft_magnitudes(&ind, m);
    let cut = to_f64(eps) * size as f64 - THRESHOLD_TOLERANCE * size as f64;
    let entries: Vec<SpectrumEntry> = mags
        .iter()
        .enumerate()
        .filter(|(_, &v)| v >= cut)
        .map(|(k, &v)| SpectrumEntry { freq: Frequency { k: k as u64, m: m as u64 }, magnitude: v })
        .collect();
    let n = s_set.ambient_n();
    let mut separated: Vec<SpectrumEntry> = Vec::new();
    for e in &entries {
        if separated.iter().all(|s| e.freq.separated_from(&s.freq, n)) {
            separated.push(e.clone());
        }
    }
    Ok(Spectrum {
        threshold: eps.clone(),
        grid_m: m as u64,
        ambient_n: n,
        set_size: size,
        entries,
        separated,
    })
}

/// `E(S)` from the exact cyclic autocorrelation of `1_S` over `Z_M`, `M >= 2N`,
/// computed with the NTT.
pub fn energy_via_fourier(s_set: &IntegerSet) -> u128 {
    let ind = ScaledFunction::indicator(s_set);
    if ind.width() == 0 {
        return 0;
    }
    let forward: Vec<BigInt> = ind.weights().iter().map(|w| w.to_integer()).collect();
    let backward: Vec<BigInt> = forward.iter().rev().cloned().collect();
    let r = ntt::convolve_many(&[forward, backward]).expect("0/1 weights always fit the prime table");
    r.iter().map(|x| x.to_u128().unwrap().pow(2)).sum()
}

/// `(1/M) sum_k |1_S^(k/M)|^4` on the power-of-two grid `M >= 2N`. Equals `E(S)`
/// up to rounding.
pub fn energy_fourier_float(s_set: &IntegerSet) -> f64 {
    let ind = ScaledFunction::indicator(s_set);
    let m = (2 * s_set.ambient_n() as usize).next_power_of_two();
    let mags = dft_magnitudes(&ind, m);
    mags.iter().map(|v| v.powi(4)).sum::<f64>() / m as f64
}

#[derive(Clone, Debug, Serialize)]
pub struct LargeSieveReport {
    pub r_count: usize,
    /// `sum_i |1_S^(alpha_i)|^4` over the separated frequencies.
    pub lhs: f64,
    /// `2 N E(S)`.
    pub rhs: u128,
    pub holds: bool,
    /// `R eps^4 |S|^4`, exact.
    #[serde(skip)]
    pub implied_lhs: BigRational,
    /// `2 N (2 + eta) |S|^2`, exact.
    #[serde(skip)]
    pub implied_rhs: BigRational,
    pub implied_holds: bool,
}

/// Compares the fourth-moment sum over the separated spectrum with `2 N E(S)`.
pub fn large_sieve_diagnostic(s_set: &IntegerSet, spectrum: &Spectrum) -> Result<LargeSieveReport> {
    if spectrum.separated.is_empty() {
        return invalid("large sieve diagnostic needs a nonempty separated spectrum");
    }
    let params = almost_sidon_params(s_set)?;
    let n = spectrum.ambient_n as u128;
    let lhs: f64 = spectrum.separated.iter().map(|e| e.magnitude.powi(4)).sum();
    let rhs = 2 * n * params.energy;
    let holds = lhs <= rhs as f64 * (1.0 + 1e-9);
    let k = BigRational::from_integer(BigInt::from(s_set.len()));
    let k2 = &k * &k;
    let eps = &spectrum.threshold;
    let implied_lhs = BigRational::from_integer(spectrum.r_count().into()) * eps * eps * eps * eps * &k2 * &k2;
    let two = BigRational::from_integer(2.into());
    let implied_rhs = BigRational::from_integer(BigInt::from(2 * n)) * (&two + &params.eta) * &k2;
    Ok(LargeSieveReport {
        r_count: spectrum.r_count(),
        lhs,
        rhs,
        holds,
        implied_holds: implied_lhs <= implied_rhs,
        implied_lhs,
        implied_rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sets::{erdos_turan, representation_profile};

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn frequency_order_and_spacing() {
        let a = Frequency::new(1, 4).unwrap();
        let b = Frequency::new(2, 8).unwrap();
        assert_eq!(a, b);
        assert!(Frequency::new(1, 3).unwrap() > a);
        assert!(Frequency::new(4, 4).is_err());
        let near = Frequency::new(0, 10).unwrap();
        let far = Frequency::new(9, 10).unwrap();
        // wrap-around distance is 1/10
        assert!(!near.separated_from(&far, 10));
        assert!(near.separated_from(&far, 11));
    }

    #[test]
    fn magnitudes_of_simple_functions() {
        let interval = ScaledFunction::indicator(&IntegerSet::interval(12));
        let mags = dft_magnitudes(&interval, 64);
        assert!((mags[0] - 12.0).abs() < 1e-12);
        let point = ScaledFunction::indicator(&IntegerSet::new(vec![5], 9).unwrap());
        for v in dft_magnitudes(&point, 17) {
            assert!((v - 1.0).abs() < 1e-12);
        }
        let pair = ScaledFunction::indicator(&IntegerSet::new(vec![1, 2], 2).unwrap());
        assert!(dft_magnitudes(&pair, 2)[1].abs() < 1e-12);
    }

    #[test]
    fn fft_matches_direct_summation() {
        let s = erdos_turan(11).unwrap();
        let f = ScaledFunction::indicator(&s);
        let m = 1000;
        let mags = dft_magnitudes(&f, m);
        for k in (0..m).step_by(37) {
            let direct = magnitude_at(&f, &Frequency::new(k as u64, m as u64).unwrap());
            assert!((mags[k] - direct).abs() < 1e-9 * s.len() as f64, "k = {k}");
        }
    }

    #[test]
    fn parseval_on_cyclic_grid() {
        let w: Vec<i64> = vec![3, -1, 0, 4, 2, -5, 1];
        let f = ScaledFunction::from_integers(-3, &w, 1);
        let m = 16;
        let lhs: f64 = dft_magnitudes(&f, m).iter().map(|v| v * v).sum();
        let rhs = m as f64 * w.iter().map(|x| (x * x) as f64).sum::<f64>();
        assert!((lhs - rhs).abs() <= 1e-9 * rhs);
    }

    #[test]
    fn sup_norm_examples() {
        let n = 20;
        let interval = ScaledFunction::indicator(&IntegerSet::interval(n));
        let (v, arg) = sup_norm_estimate(&interval, 8).unwrap();
        assert!((v - n as f64).abs() < 1e-9);
        assert_eq!(arg.k, 0);
        assert!(sup_norm_estimate(&interval, 3).is_err());

        let s = IntegerSet::new(vec![2, 3, 7, 11, 19], n).unwrap();
        let ind = ScaledFunction::indicator(&s).padded_to(1, n as i64);
        let density = q(s.len() as i64, n as i64);
        let interval_scaled = interval.scaled(&density);
        let balanced: Vec<BigRational> =
            ind.weights().iter().zip(interval_scaled.weights()).map(|(a, b)| a - b).collect();
        let balanced = ScaledFunction::new(1, balanced, 0, n);
        assert!(dft_magnitudes(&balanced, 64)[0].abs() < 1e-12);
    }

    #[test]
    fn spectrum_always_contains_zero() {
        let s = erdos_turan(7).unwrap();
        let spec = large_spectrum(&s, &q(1, 1), 512).unwrap();
        assert_eq!(spec.entries[0].freq.k, 0);
        assert!(spec.is_selected(&Frequency::new(0, 1).unwrap()));
        assert!(large_spectrum(&s, &q(0, 1), 512).is_err());
        assert!(large_spectrum(&s, &q(3, 2), 512).is_err());
    }

    #[test]
    fn spectrum_of_interval_selects_only_zero() {
        for n in [8u64, 13, 40] {
            let s = IntegerSet::interval(n);
            let spec = large_spectrum(&s, &q(1, 2), 8 * n as usize).unwrap();
            assert_eq!(spec.r_count(), 1, "N = {n}");
            assert_eq!(spec.separated[0].freq.k, 0);
            assert!(spec.is_separated() && spec.is_maximal());
        }
    }

    #[test]
    fn spectrum_of_evens_contains_half() {
        let s = IntegerSet::new((1..=20).filter(|x| x % 2 == 0).collect(), 20).unwrap();
        let spec = large_spectrum(&s, &q(3, 4), 160).unwrap();
        let half = Frequency::new(1, 2).unwrap();
        assert!(spec.entries.iter().any(|e| e.freq == half));
        // greedy selection keeps the first grid point of the peak, within 1/N of 1/2
        assert!(spec.separated.iter().any(|e| !e.freq.separated_from(&half, 20)));
    }

    #[test]
    fn energy_routes_agree() {
        for s in [
            IntegerSet::new(vec![1, 2], 2).unwrap(),
            IntegerSet::new(vec![1, 2, 4], 4).unwrap(),
            erdos_turan(7).unwrap(),
        ] {
            let exact = energy_via_fourier(&s);
            assert_eq!(exact, representation_profile(&s).energy());
            assert!((energy_fourier_float(&s) - exact as f64).abs() < 1e-6 * exact as f64);
        }
        assert_eq!(energy_via_fourier(&IntegerSet::new(vec![1, 2], 2).unwrap()), 6);
        assert_eq!(energy_via_fourier(&erdos_turan(7).unwrap()), 91);
    }

    #[test]
    fn large_sieve_examples() {
        let s = erdos_turan(11).unwrap();
        let spec = large_spectrum(&s, &q(1, 5), default_grid(s.ambient_n() as usize)).unwrap();
        let r = large_sieve_diagnostic(&s, &spec).unwrap();
        assert!(r.holds && r.implied_holds);

        let n = 30;
        let s = IntegerSet::interval(n);
        let spec = large_spectrum(&s, &q(9, 10), default_grid(n as usize)).unwrap();
        assert_eq!(spec.r_count(), 1);
        let r = large_sieve_diagnostic(&s, &spec).unwrap();
        assert!((r.lhs - (n as f64).powi(4)).abs() < 1e-3);
        assert!(r.holds);
    }

    #[test]
    fn nested_power_of_two_grids_are_monotone() {
        let s = erdos_turan(13).unwrap();
        let f = ScaledFunction::indicator(&s);
        let coarse = grid_sup(&f, 1024).0;
        let fine = grid_sup(&f, 2048).0;
        assert!(fine >= coarse - 1e-9);
    }
}
