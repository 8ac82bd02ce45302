//! Exact-arithmetic toolkit for Sidon and almost-Sidon sets.
//!
//! The crate is organised along the pipeline it certifies:
//!
//! - [`sets`]: Erdős–Turán and Mian–Chowla constructions, seeded perturbations,
//!   representation counts `r_S(n)` and additive energy `E(S)`.
//! - [`counting`]: exact (weighted) solution counts for `a_1 x_1 + ... + a_s x_s = 0`,
//!   with a schoolbook/NTT convolution engine, an enumeration oracle, and the
//!   all-distinct count via partition-lattice inclusion–exclusion.
//! - [`spectral`]: Fourier magnitudes on rational grids, large spectra, maximal
//!   `1/N`-separated subsets and the large sieve diagnostic.
//! - [`transference`]: Bohr sets, the dense model `f = N^{1/2} 1_S * mu_B`, and
//!   exact verdicts for each inequality used to transfer dense counting results to
//!   sparse sets.
//! - [`suites`]: seeded randomized verification suites shared by the CLI and tests.
//!
//! All integer and rational quantities are exact. Floating point only appears in
//! Fourier magnitudes, which are irrational in general.

pub mod cli;
pub mod counting;
pub mod error;
pub mod json;
pub mod ntt;
pub mod rng;
pub mod sets;
pub mod spectral;
pub mod suites;
pub mod transference;

pub use counting::{
    brute_force_count, count_distinct_solutions, count_solutions, degenerate_bound_check,
    EquationCoeffs, ScaledFunction, SolutionCount,
};
pub use error::{Error, Result};
pub use sets::{
    almost_sidon_params, erdos_turan, is_sidon, mian_chowla, perturb_almost_sidon,
    representation_profile, AlmostSidonParams, IntegerSet, RepresentationProfile,
};
pub use spectral::{Frequency, Spectrum};
pub use transference::{BohrSet, DenseModel, TransferenceReport};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
