//! Exact solution counts for `a_1 x_1 + ... + a_s x_s = 0`, checked against
//! enumeration, including rational weights and the transform-based path.

use sidonlab::counting::Engine;
use sidonlab::{brute_force_count, count_solutions, BigRational, EquationCoeffs, IntegerSet, ScaledFunction};

fn main() -> sidonlab::Result<()> {
    let interval = ScaledFunction::indicator(&IntegerSet::interval(5));
    let eq = EquationCoeffs::parse("1,1,-2")?;
    let fast = count_solutions(&eq, &[&interval; 3])?;
    let slow = brute_force_count(&eq, &[&interval; 3], false, 1_000_000)?;
    println!("x + y = 2z on [1,5]: {} (enumeration {})", fast.value, slow.value);

    // weights 1/2, -1/3, 1 on {1, 2, 3}
    let w = ScaledFunction::new(
        1,
        vec![BigRational::new(1.into(), 2.into()), BigRational::new((-1).into(), 3.into()), BigRational::from_integer(1.into())],
        0,
        3,
    );
    let eq5 = EquationCoeffs::parse("1,1,1,1,-4")?;
    let a = count_solutions(&eq5, &[&w; 5])?;
    let b = brute_force_count(&eq5, &[&w; 5], false, 1_000_000)?;
    println!("weighted five-variable sum: {} (enumeration {})", a.value, b.value);

    // force the NTT on a small input and compare with the schoolbook product
    let big = ScaledFunction::indicator(&IntegerSet::interval(300));
    let eq4 = EquationCoeffs::parse("1,2,-1,-2")?;
    let ntt = sidonlab::counting::count_solutions_with(&Engine { ntt_threshold: 0 }, &eq4, &[&big; 4])?;
    let school = sidonlab::counting::count_solutions_with(&Engine { ntt_threshold: usize::MAX }, &eq4, &[&big; 4])?;
    assert_eq!(ntt, school);
    println!("x + 2y = z + 2w on [1,300]: {}", ntt.value);
    Ok(())
}
