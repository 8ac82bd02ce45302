//! Signed functions dominated by a normalised dense-model majorant: the count
//! of solutions stays below `N^{s-2}` times the smallest Fourier supremum.

use sidonlab::suites::counting_case;
use sidonlab::transference::verify_counting_lemma;
use sidonlab::ScaledFunction;

fn main() -> sidonlab::Result<()> {
    for i in 0..6 {
        let case = counting_case(1, i)?;
        let refs: Vec<&ScaledFunction> = case.fns.iter().collect();
        let check = verify_counting_lemma(&case.nu, &refs, &case.eq, case.n)?;
        println!(
            "case {i}: coeffs {:?}  N = {:4}  c = {:2}  |count| = {:.4e}  bound = {:.4e}  ratio = {:.2e}",
            case.eq.coeffs(),
            case.n,
            case.normaliser,
            check.lhs_f64,
            check.rhs,
            check.slack_ratio
        );
    }
    Ok(())
}
