//! Finite integer sets in `[1, N]`, Sidon constructions and difference statistics.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use num_bigint::BigInt;
use num_integer::Roots;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::seq::index;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::rng;

/// A finite set `S` of integers inside the ambient interval `[1, N]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerSet {
    elements: Vec<i64>,
    ambient_n: u64,
}

impl IntegerSet {
    /// Builds a set from strictly increasing elements, all in `[1, ambient_n]`.
    pub fn new(elements: Vec<i64>, ambient_n: u64) -> Result<Self> {
        if ambient_n == 0 {
            return invalid("ambient N must be positive");
        }
        if let Some(w) = elements.windows(2).find(|w| w[0] >= w[1]) {
            return invalid(format!("elements not strictly increasing at {} -> {}", w[0], w[1]));
        }
        if let Some(&x) = elements.iter().find(|&&x| x < 1 || x as u64 > ambient_n) {
            return invalid(format!("element {x} outside [1, {ambient_n}]"));
        }
        Ok(Self { elements, ambient_n })
    }

    /// Sorts and deduplicates before validating.
    pub fn from_unsorted(mut elements: Vec<i64>, ambient_n: u64) -> Result<Self> {
        elements.sort_unstable();
        elements.dedup();
        Self::new(elements, ambient_n)
    }

    /// The interval `[1, n]`.
    pub fn interval(n: u64) -> Self {
        Self { elements: (1..=n as i64).collect(), ambient_n: n }
    }

    /// Same elements inside a larger ambient interval.
    pub fn with_ambient(&self, ambient_n: u64) -> Result<Self> {
        Self::new(self.elements.clone(), ambient_n)
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn ambient_n(&self) -> u64 {
        self.ambient_n
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

    /// Parses the set file format: `N <ambient_n>` then one element per line.
    /// Lines starting with `#` and blank lines are ignored.
    pub fn read_from(reader: impl BufRead) -> Result<Self> {
        let mut ambient = None;
        let mut elements = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = i + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let parse_err = |msg: String| Error::Parse { line: lineno, msg };
            match ambient {
                None => {
                    let rest = text
                        .strip_prefix('N')
                        .ok_or_else(|| parse_err("expected header `N <ambient_n>`".into()))?;
                    let n = rest.trim().parse::<u64>().map_err(|e| parse_err(e.to_string()))?;
                    ambient = Some(n);
                }
                Some(_) => {
                    let x = text.parse::<i64>().map_err(|e| parse_err(e.to_string()))?;
                    elements.push(x);
                }
            }
        }
        let n = ambient.ok_or(Error::Parse { line: 0, msg: "missing `N` header".into() })?;
        Self::new(elements, n)
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_file_string().as_bytes())?;
        Ok(())
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("N {}\n", self.ambient_n);
        for x in &self.elements {
            let _ = writeln!(out, "{x}");
        }
        out
    }
}

/// `r_S(n)` for every difference `n`, together with the additive energy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepresentationProfile {
    /// `counts[i]` is `r_S(i - span)`.
    counts: Vec<u64>,
    span: i64,
    energy: u128,
}

impl RepresentationProfile {
    /// Number of ordered pairs `(n1, n2)` in `S²` with `n1 - n2 = n`.
    pub fn r(&self, n: i64) -> u64 {
        if n.abs() > self.span {
            0
        } else {
            self.counts[(n + self.span) as usize]
        }
    }

    /// Largest `|n|` that can have `r_S(n) > 0`.
    pub fn span(&self) -> i64 {
        self.span
    }

    pub fn energy(&self) -> u128 {
        self.energy
    }

    /// Iterates `(n, r_S(n))` over all `n` with `r_S(n) > 0`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(i, &c)| (i as i64 - self.span, c))
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }
}

/// The exact almost-Sidon parameters of a set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlmostSidonParams {
    /// Least `eta >= 0` with `E(S) <= (2 + eta)|S|²`.
    pub eta: BigRational,
    /// `|S| / ceil(sqrt(N))`.
    pub delta: BigRational,
    /// Exact outcome of `delta² N <= |S|²`.
    pub delta_check: bool,
    pub energy: u128,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// The Erdős–Turán Sidon set `{2pa + (a² mod p) + 1 : 0 <= a < p}` in `[1, 2p²]`.
pub fn erdos_turan(p: u64) -> Result<IntegerSet> {
    if !is_prime(p) {
        return invalid(format!("erdos-turan needs a prime, got {p}"));
    }
    let elements = (0..p).map(|a| (2 * p * a + (a * a) % p + 1) as i64).collect();
    IntegerSet::new(elements, 2 * p * p)
}

/// First `k` terms of the Mian–Chowla sequence; the ambient interval ends at the last term.
pub fn mian_chowla(k: usize) -> Result<IntegerSet> {
    if k == 0 {
        return invalid("mian-chowla needs k >= 1");
    }
    let mut terms: Vec<i64> = vec![1];
    // used[d] marks differences already realised by a pair of terms.
    let mut used: Vec<bool> = vec![false; 2];
    let mut candidate = 1;
    while terms.len() < k {
        candidate += 1;
        // The new differences candidate - t are distinct among themselves, so
        // only collisions with earlier differences matter.
        let ok = terms.iter().all(|&t| {
            let d = (candidate - t) as usize;
            d >= used.len() || !used[d]
        });
        if ok {
            let top = (candidate - 1) as usize;
            if used.len() <= top {
                used.resize(2 * top + 2, false);
            }
            for &t in &terms {
                used[(candidate - t) as usize] = true;
            }
            terms.push(candidate);
        }
    }
    let n = *terms.last().unwrap() as u64;
    IntegerSet::new(terms, n)
}

/// Representation counts by direct enumeration of ordered pairs.
pub fn representation_profile(s: &IntegerSet) -> RepresentationProfile {
    let el = s.elements();
    let span = match (el.first(), el.last()) {
        (Some(&lo), Some(&hi)) => hi - lo,
        _ => 0,
    };
    let mut counts = vec![0u64; (2 * span + 1) as usize];
    for &x in el {
        for &y in el {
            counts[(x - y + span) as usize] += 1;
        }
    }
    let energy = counts.iter().map(|&c| c as u128 * c as u128).sum();
    RepresentationProfile { counts, span, energy }
}

/// `E(S) = 2|S|² - |S|`, i.e. only trivial solutions to `x - x' = y - y'`.
pub fn is_sidon(s: &IntegerSet) -> bool {
    let k = s.len() as u128;
    representation_profile(s).energy() == 2 * k * k - k
}

pub(crate) fn ceil_sqrt(n: u64) -> u64 {
    let r = n.sqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

pub fn almost_sidon_params(s: &IntegerSet) -> Result<AlmostSidonParams> {
    if s.is_empty() {
        return invalid("almost-Sidon parameters need a nonempty set");
    }
    let energy = representation_profile(s).energy();
    let k = BigInt::from(s.len());
    let k2 = &k * &k;
    let excess = BigRational::new(BigInt::from(energy), k2.clone()) - BigRational::from_integer(2.into());
    let eta = if excess.is_negative() { BigRational::zero() } else { excess };
    let root = ceil_sqrt(s.ambient_n());
    let delta = BigRational::new(k, BigInt::from(root));
    let delta_check = &delta * &delta * BigRational::from_integer(s.ambient_n().into())
        <= BigRational::from_integer(k2);
    Ok(AlmostSidonParams { eta, delta, delta_check, energy })
}

/// Adds `extra` distinct new elements of `[1, N]`, chosen uniformly from the
/// complement of `S` by the seeded generator.
pub fn perturb_almost_sidon(s: &IntegerSet, extra: usize, seed: u64) -> Result<IntegerSet> {
    let n = s.ambient_n();
    if (s.len() + extra) as u64 > n {
        return invalid(format!("cannot add {extra} points to {} inside [1, {n}]", s.len()));
    }
    if extra == 0 {
        return Ok(s.clone());
    }
    let complement: Vec<i64> = (1..=n as i64).filter(|x| !s.contains(*x)).collect();
    let mut rng = rng::seeded(seed);
    let picks = index::sample(&mut rng, complement.len(), extra);
    let mut elements = s.elements().to_vec();
    elements.extend(picks.iter().map(|i| complement[i]));
    IntegerSet::from_unsorted(elements, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(el: &[i64], n: u64) -> IntegerSet {
        IntegerSet::new(el.to_vec(), n).unwrap()
    }

    /// Quadruple enumeration of `x - x' = y - y'`.
    fn brute_energy(s: &IntegerSet) -> u128 {
        let el = s.elements();
        let mut e = 0;
        for &x in el {
            for &x2 in el {
                for &y in el {
                    for &y2 in el {
                        if x - x2 == y - y2 {
                            e += 1;
                        }
                    }
                }
            }
        }
        e
    }

    /// Greedy definition run literally: try every pairwise difference.
    fn greedy_oracle(k: usize) -> Vec<i64> {
        let mut terms = vec![1i64];
        let mut c = 1;
        while terms.len() < k {
            c += 1;
            let mut trial = terms.clone();
            trial.push(c);
            let mut diffs = Vec::new();
            for i in 0..trial.len() {
                for j in 0..i {
                    diffs.push(trial[i] - trial[j]);
                }
            }
            let before = diffs.len();
            diffs.sort_unstable();
            diffs.dedup();
            if diffs.len() == before {
                terms = trial;
            }
        }
        terms
    }

    #[test]
    fn erdos_turan_small_primes() {
        let s3 = erdos_turan(3).unwrap();
        assert_eq!(s3.elements(), &[1, 8, 14]);
        assert_eq!(s3.ambient_n(), 18);
        let s5 = erdos_turan(5).unwrap();
        assert_eq!(s5.elements(), &[1, 12, 25, 35, 42]);
        assert_eq!(s5.ambient_n(), 50);
        assert!(is_sidon(&s5));
        assert_eq!(brute_energy(&s5), 2 * 25 - 5);
        let s2 = erdos_turan(2).unwrap();
        assert_eq!(s2.elements(), &[1, 6]);
        assert_eq!(s2.ambient_n(), 8);
    }

    #[test]
    fn erdos_turan_rejects_composites() {
        assert!(matches!(erdos_turan(9), Err(Error::Validation(_))));
        assert!(erdos_turan(1).is_err());
    }

    #[test]
    fn erdos_turan_is_sidon_up_to_97() {
        for p in (2..=97).filter(|&p| is_prime(p)) {
            assert!(is_sidon(&erdos_turan(p).unwrap()), "p = {p}");
        }
    }

    #[test]
    fn mian_chowla_matches_greedy_oracle() {
        assert_eq!(mian_chowla(1).unwrap().elements(), &[1]);
        assert_eq!(mian_chowla(5).unwrap().elements(), &[1, 2, 4, 8, 13]);
        assert_eq!(greedy_oracle(5), vec![1, 2, 4, 8, 13]);
        assert_eq!(mian_chowla(10).unwrap().elements(), &[1, 2, 4, 8, 13, 21, 31, 45, 66, 81]);
        assert_eq!(mian_chowla(25).unwrap().elements(), greedy_oracle(25).as_slice());
        assert!(mian_chowla(0).is_err());
    }

    #[test]
    fn mian_chowla_is_sidon_up_to_50() {
        for k in 1..=50 {
            assert!(is_sidon(&mian_chowla(k).unwrap()), "k = {k}");
        }
    }

    #[test]
    fn profiles_of_small_sets() {
        let p = representation_profile(&set(&[1, 2], 2));
        assert_eq!((p.r(0), p.r(1), p.r(-1), p.energy()), (2, 1, 1, 6));

        let p = representation_profile(&set(&[1, 2, 4], 4));
        assert_eq!(p.r(0), 3);
        for n in 1..=3 {
            assert_eq!((p.r(n), p.r(-n)), (1, 1));
        }
        assert_eq!(p.energy(), 15);

        let s = set(&[1, 2, 3], 3);
        let p = representation_profile(&s);
        assert_eq!((p.r(0), p.r(1), p.r(-1), p.r(2), p.r(-2)), (3, 2, 2, 1, 1));
        assert_eq!(p.energy(), 19);
        assert_eq!(brute_energy(&s), 19);
        assert_eq!(p.r(7), 0);
    }

    #[test]
    fn sidon_checks() {
        assert!(is_sidon(&set(&[1, 2, 4], 4)));
        assert!(!is_sidon(&set(&[1, 2, 3], 3)));
        assert!(is_sidon(&set(&[7], 7)));
    }

    #[test]
    fn almost_sidon_parameters() {
        let p = almost_sidon_params(&erdos_turan(7).unwrap()).unwrap();
        assert!(p.eta.is_zero());
        let p = almost_sidon_params(&set(&[1, 2, 3], 3)).unwrap();
        assert_eq!(p.eta, BigRational::new(1.into(), 9.into()));
        let p = almost_sidon_params(&set(&[1, 2], 4)).unwrap();
        assert_eq!(p.delta, BigRational::from_integer(1.into()));
        assert!(p.delta_check);
        assert!(almost_sidon_params(&set(&[], 4)).is_err());
    }

    #[test]
    fn perturbation_contracts() {
        let s = set(&[1, 2, 4, 8, 13], 13);
        assert_eq!(perturb_almost_sidon(&s, 0, 5).unwrap(), s);
        for seed in 0..20 {
            let t = perturb_almost_sidon(&s, 1, seed).unwrap();
            assert_eq!(t.len(), 6);
            assert!(s.elements().iter().all(|&x| t.contains(x)));
        }
        assert_eq!(perturb_almost_sidon(&s, 3, 11).unwrap(), perturb_almost_sidon(&s, 3, 11).unwrap());
        assert_eq!(perturb_almost_sidon(&s, 8, 1).unwrap(), IntegerSet::interval(13));
        assert!(perturb_almost_sidon(&s, 9, 1).is_err());
    }

    #[test]
    fn set_validation() {
        assert!(IntegerSet::new(vec![2, 1], 3).is_err());
        assert!(IntegerSet::new(vec![0], 3).is_err());
        assert!(IntegerSet::new(vec![4], 3).is_err());
        assert!(IntegerSet::new(vec![], 0).is_err());
    }

    #[test]
    fn set_file_round_trip_and_comments() {
        let s = erdos_turan(5).unwrap();
        let text = s.to_file_string();
        assert_eq!(text, "N 50\n1\n12\n25\n35\n42\n");
        assert_eq!(IntegerSet::read_from(text.as_bytes()).unwrap(), s);
        let commented = "# header\nN 10\n# points\n3\n\n7\n";
        assert_eq!(IntegerSet::read_from(commented.as_bytes()).unwrap(), set(&[3, 7], 10));
        assert!(matches!(IntegerSet::read_from("3\n".as_bytes()), Err(Error::Parse { line: 1, .. })));
        assert!(IntegerSet::read_from("N 5\nx\n".as_bytes()).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_set(max_n: u64) -> impl Strategy<Value = IntegerSet> {
            (1..=max_n).prop_flat_map(|n| {
                proptest::collection::btree_set(1..=n as i64, 0..=(n as usize).min(12))
                    .prop_map(move |el| IntegerSet::new(el.into_iter().collect(), n).unwrap())
            })
        }

        proptest! {
            #[test]
            fn profile_invariants(s in arb_set(64)) {
                let p = representation_profile(&s);
                let k = s.len() as u128;
                prop_assert_eq!(p.total(), k * k);
                prop_assert_eq!(p.r(0) as u128, k);
                for n in 0..=p.span() {
                    prop_assert_eq!(p.r(n), p.r(-n));
                }
                prop_assert_eq!(p.energy(), brute_energy(&s));
                prop_assert_eq!(is_sidon(&s), brute_energy(&s) == 2 * k * k - k);
            }
        }
    }
}
