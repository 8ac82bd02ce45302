//! Large spectrum of a Sidon set, its greedy `1/N`-separated subset, and the
//! large sieve bound on the fourth moment over that subset.

use sidonlab::spectral::{default_grid, large_sieve_diagnostic, large_spectrum};
use sidonlab::{erdos_turan, BigRational};

fn main() -> sidonlab::Result<()> {
    let s = erdos_turan(23)?;
    for q in [2, 3, 5] {
        let eps = BigRational::new(1.into(), q.into());
        let spec = large_spectrum(&s, &eps, default_grid(s.ambient_n() as usize))?;
        let sieve = large_sieve_diagnostic(&s, &spec)?;
        println!(
            "eps = 1/{q}: {} grid points, R = {}, separated = {}, sum |1_S^|^4 = {:.1} <= {}",
            spec.entries.len(),
            spec.r_count(),
            spec.is_separated(),
            sieve.lhs,
            sieve.rhs
        );
        for e in spec.separated.iter().take(4) {
            println!("    alpha = {}/{}  |1_S^| = {:.4}", e.freq.k, e.freq.m, e.magnitude);
        }
    }
    Ok(())
}
