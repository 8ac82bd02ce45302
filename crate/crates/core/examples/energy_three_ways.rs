//! Additive energy from the representation function, from the weighted counter
//! on `x_1 - x_2 - x_3 + x_4 = 0`, and from an exact autocorrelation.

use sidonlab::spectral::{energy_fourier_float, energy_via_fourier};
use sidonlab::{mian_chowla, perturb_almost_sidon, representation_profile, ScaledFunction};

fn main() -> sidonlab::Result<()> {
    let base = mian_chowla(12)?;
    for extra in [0, 3, 10] {
        let s = perturb_almost_sidon(&base, extra, 11)?;
        let profile = representation_profile(&s).energy();
        let counted = ScaledFunction::indicator(&s).energy().value;
        let fourier = energy_via_fourier(&s);
        println!(
            "|S| = {:2}  profile {profile:6}  counted {counted:6}  fourier {fourier:6}  float {:.3}",
            s.len(),
            energy_fourier_float(&s)
        );
    }
    Ok(())
}
