//! Exact convolution of integer sequences by number-theoretic transforms modulo
//! several 62-bit primes, recombined with Garner's CRT into big integers.
//!
//! Every prime below is `c * 2^32 + 1`, so transforms of any power-of-two
//! length up to `2^32` exist. The number of primes is chosen per call so that
//! the product of the moduli exceeds twice the largest possible coefficient
//! magnitude; signed results are then recovered from the symmetric residue.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

/// `(prime, primitive root)` pairs, all `= 1 mod 2^32` and below `2^62`.
pub const PRIMES: [(u64, u64); 16] = [
    (4611685941117976577, 3),
    (4611685692009873409, 19),
    (4611685606110527489, 3),
    (4611685318347718657, 5),
    (4611685232448372737, 3),
    (4611685219563470849, 3),
    (4611685125074190337, 5),
    (4611685090714451969, 3),
    (4611685039174844417, 3),
    (4611685021994975233, 5),
    (4611684738527133697, 7),
    (4611684691282493441, 3),
    (4611684674102624257, 5),
    (4611684609678114817, 5),
    (4611684588203278337, 3),
    (4611684274670665729, 7),
];

/// Fewest primes used by any transform.
pub const MIN_PRIMES: usize = 3;

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// In-place iterative radix-2 transform; `invert` applies the inverse including `1/n`.
fn transform(a: &mut [u64], p: u64, g: u64, invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j ^= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w = pow_mod(g, (p - 1) / len as u64, p);
        if invert {
            w = inv_mod(w, p);
        }
        let half = len / 2;
        // twiddles for this stage
        let mut tw = Vec::with_capacity(half);
        let mut cur = 1u64;
        for _ in 0..half {
            tw.push(cur);
            cur = mul_mod(cur, w, p);
        }
        for chunk in a.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for k in 0..half {
                let u = lo[k];
                let v = mul_mod(hi[k], tw[k], p);
                let s = u + v;
                lo[k] = if s >= p { s - p } else { s };
                hi[k] = if u >= v { u - v } else { u + p - v };
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = inv_mod(n as u64 % p, p);
        for x in a.iter_mut() {
            *x = mul_mod(*x, n_inv, p);
        }
    }
}

fn residue(x: &BigInt, p: u64) -> u64 {
    let r = (x.magnitude() % p).to_u64().unwrap_or(0);
    if x.sign() == Sign::Minus && r != 0 {
        p - r
    } else {
        r
    }
}

/// Upper bound on every coefficient magnitude of the product: the product of l1 norms.
pub fn coefficient_bound(seqs: &[Vec<BigInt>]) -> BigUint {
    seqs.iter()
        .map(|s| s.iter().map(|x| x.magnitude().clone()).sum::<BigUint>())
        .product()
}

/// Number of primes needed for a product whose coefficients are bounded by `bound`,
/// or `None` when the prime table is too small.
pub fn primes_needed(bound: &BigUint) -> Option<usize> {
    let target = bound * 2u32;
    let mut modulus = BigUint::one();
    for (i, &(p, _)) in PRIMES.iter().enumerate() {
        modulus *= p;
        if i + 1 >= MIN_PRIMES && modulus > target {
            return Some(i + 1);
        }
    }
    None
}

/// Product of all `seqs` as polynomials, computed exactly. Returns `None` if the
/// coefficient bound needs more moduli than the table holds.
pub fn convolve_many(seqs: &[Vec<BigInt>]) -> Option<Vec<BigInt>> {
    if seqs.is_empty() {
        return Some(vec![BigInt::one()]);
    }
    if seqs.iter().any(|s| s.is_empty()) {
        return Some(Vec::new());
    }
    let out_len = seqs.iter().map(|s| s.len()).sum::<usize>() + 1 - seqs.len();
    let k = primes_needed(&coefficient_bound(seqs))?;
    let size = out_len.next_power_of_two();

    let images: Vec<Vec<u64>> = PRIMES[..k]
        .par_iter()
        .map(|&(p, g)| {
            let mut acc: Option<Vec<u64>> = None;
            for s in seqs {
                let mut a = vec![0u64; size];
                for (slot, x) in a.iter_mut().zip(s) {
                    *slot = residue(x, p);
                }
                transform(&mut a, p, g, false);
                acc = Some(match acc {
                    None => a,
                    Some(mut prev) => {
                        for (x, y) in prev.iter_mut().zip(&a) {
                            *x = mul_mod(*x, *y, p);
                        }
                        prev
                    }
                });
            }
            let mut acc = acc.unwrap();
            transform(&mut acc, p, g, true);
            acc.truncate(out_len);
            acc
        })
        .collect();

    Some(crt_combine(&images, k))
}

/// Garner reconstruction of each coefficient from its images, mapped to the
/// symmetric range `(-M/2, M/2]`.
fn crt_combine(images: &[Vec<u64>], k: usize) -> Vec<BigInt> {
    let primes: Vec<u64> = PRIMES[..k].iter().map(|&(p, _)| p).collect();
    // inv[i] = (p_0 * ... * p_{i-1})^{-1} mod p_i
    let inv: Vec<u64> = (0..k)
        .map(|i| {
            let prod = primes[..i].iter().fold(1u64, |acc, &q| mul_mod(acc, q % primes[i], primes[i]));
            inv_mod(prod, primes[i])
        })
        .collect();
    let modulus: BigUint = primes.iter().map(|&p| BigUint::from(p)).product();
    let half = &modulus >> 1;
    let len = images[0].len();
    (0..len)
        .into_par_iter()
        .map(|j| {
            // mixed-radix digits
            let mut digits = vec![0u64; k];
            for i in 0..k {
                let p = primes[i];
                // value of the partial reconstruction modulo p
                let mut acc = 0u64;
                let mut radix = 1u64;
                for t in 0..i {
                    acc = (acc + mul_mod(digits[t], radix, p)) % p;
                    radix = mul_mod(radix, primes[t] % p, p);
                }
                let r = images[i][j];
                let diff = if r >= acc { r - acc } else { r + p - acc };
                digits[i] = mul_mod(diff, inv[i], p);
            }
            let mut x = BigUint::zero();
            for i in (0..k).rev() {
                x = x * primes[i] + digits[i];
            }
            if x > half {
                -BigInt::from_biguint(Sign::Plus, &modulus - x)
            } else {
                BigInt::from_biguint(Sign::Plus, x)
            }
        })
        .collect()
}

/// Schoolbook product of two sequences.
pub fn schoolbook(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// True when every coefficient of every factor and of the product fits `i128`
/// comfortably, so the schoolbook path may use machine integers.
pub(crate) fn fits_i128(seqs: &[Vec<BigInt>]) -> bool {
    coefficient_bound(seqs).bits() < 126 && seqs.iter().all(|s| s.iter().all(|x| x.abs().bits() < 126))
}
