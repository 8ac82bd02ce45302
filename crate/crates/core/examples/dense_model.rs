//! Bohr sets and the dense model `f = N^{1/2} 1_S * mu_B` across radii. Small
//! radii select nearly every frequency at this scale and `B` shrinks to `{0}`,
//! in which case `f` is the scaled indicator itself.

use sidonlab::suites::model_verdicts;
use sidonlab::transference::dense_model;
use sidonlab::{erdos_turan, BigRational};

fn main() -> sidonlab::Result<()> {
    for p in [13u64, 31] {
        let s = erdos_turan(p)?;
        for q in [2, 3, 5] {
            let eps = BigRational::new(1.into(), q.into());
            let m = dense_model(&s, &eps, None)?;
            let verdicts = model_verdicts(&m)?;
            println!(
                "p = {p:2} eps = 1/{q}: N' = {:4} R = {:3} |B| = {:4} sum f^2/N' = {:.3} fourier distance = {:.2}  all hold: {}",
                m.padded_n,
                m.spectrum.r_count(),
                m.bohr.len(),
                num_traits::ToPrimitive::to_f64(&m.diagnostics.l2_value).unwrap() / m.padded_n as f64,
                m.diagnostics.fourier_distance,
                verdicts.iter().all(|v| !v.is_failure())
            );
        }
    }
    Ok(())
}
