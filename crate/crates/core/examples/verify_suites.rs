//! Runs every seeded suite and prints per-suite pass counts.
//!
//!     cargo run --release --example verify_suites -- 2

use sidonlab::suites::run_suite;

fn main() -> sidonlab::Result<()> {
    let seed = std::env::args().nth(1).map(|s| s.parse().expect("seed must be an integer")).unwrap_or(1);
    for s in run_suite("all", seed, None)? {
        println!("{:9} {:3}/{:3} trials passed, {} checks, {} skipped", s.suite, s.passed, s.trials, s.checks, s.skipped_checks);
        for f in &s.failures {
            println!("    {f}");
        }
    }
    Ok(())
}
