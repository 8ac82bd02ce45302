//! Solutions with a repeated entry: after pinning the coincidence, every
//! three-variable slice count `c` satisfies `c^4 <= E(S)^3`.

use sidonlab::{degenerate_bound_check, erdos_turan, EquationCoeffs};

fn main() -> sidonlab::Result<()> {
    for p in [5u64, 7, 11] {
        let s = erdos_turan(p)?;
        let eq = EquationCoeffs::parse("1,1,1,1,-4")?;
        let r = degenerate_bound_check(&eq, &s)?;
        println!(
            "p = {p:2}: E = {:5} shifts = {:4} max c = {:3} bound holds = {}  total = {} distinct = {} degenerate = {}",
            r.energy, r.shifts_checked, r.max_count, r.bound_holds, r.total, r.distinct, r.degenerate_total
        );
    }
    Ok(())
}
