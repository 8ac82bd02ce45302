//! Solutions with pairwise distinct entries via Mobius inversion over set
//! partitions, against direct enumeration.

use sidonlab::{brute_force_count, count_distinct_solutions, erdos_turan, EquationCoeffs, IntegerSet, ScaledFunction};

fn main() -> sidonlab::Result<()> {
    let cases = [
        ("1,1,-2", IntegerSet::interval(3)),
        ("1,1,-1,-1", erdos_turan(7)?),
        ("1,1,1,-1,-2", IntegerSet::new(vec![1, 2, 4, 5, 9, 11], 12)?),
    ];
    for (coeffs, set) in cases {
        let eq = EquationCoeffs::parse(coeffs)?;
        let ind = ScaledFunction::indicator(&set);
        let fns = vec![&ind; eq.s()];
        let fast = count_distinct_solutions(&eq, &set)?;
        let slow = brute_force_count(&eq, &fns, true, 100_000_000)?;
        println!("{coeffs:14} |S| = {:2}  distinct = {}  enumeration = {}", set.len(), fast.value, slow.value);
    }
    Ok(())
}
