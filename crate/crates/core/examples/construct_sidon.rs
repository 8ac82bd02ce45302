//! Builds the two classical Sidon constructions, certifies them through the
//! energy identity `E(S) = 2|S|^2 - |S|`, and writes one to a set file.
//!
//!     cargo run --example construct_sidon -- 13 /tmp/et13.txt

use sidonlab::{almost_sidon_params, erdos_turan, is_sidon, mian_chowla, perturb_almost_sidon, IntegerSet};

fn main() -> sidonlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let p: u64 = args.next().map(|s| s.parse().expect("p must be an integer")).unwrap_or(13);
    let out = args.next();

    let et = erdos_turan(p)?;
    let mc = mian_chowla(20)?;
    for (name, s) in [("erdos_turan", &et), ("mian_chowla", &mc)] {
        let params = almost_sidon_params(s)?;
        let k = s.len() as u128;
        println!(
            "{name:12} |S| = {:3}  N = {:5}  E = {:6}  2|S|^2-|S| = {:6}  sidon = {}",
            s.len(),
            s.ambient_n(),
            params.energy,
            2 * k * k - k,
            is_sidon(s)
        );
    }

    // a few extra points break the Sidon property but keep eta small
    let noisy = perturb_almost_sidon(&et, 2, 7)?;
    let params = almost_sidon_params(&noisy)?;
    println!("perturbed    |S| = {:3}  eta = {}  delta = {}", noisy.len(), params.eta, params.delta);

    if let Some(path) = out {
        std::fs::write(&path, et.to_file_string())?;
        let back = IntegerSet::read_from(std::io::BufReader::new(std::fs::File::open(&path)?))?;
        assert_eq!(back, et);
        println!("wrote {path}");
    }
    Ok(())
}
