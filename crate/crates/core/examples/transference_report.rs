//! The full pipeline on an Erdős–Turán set, printed as JSON.
//!
//!     cargo run --release --example transference_report -- 13 1/5

use sidonlab::transference::{transference_report_with, ReportOptions};
use sidonlab::{erdos_turan, EquationCoeffs};

fn main() -> sidonlab::Result<()> {
    let mut args = std::env::args().skip(1);
    let p: u64 = args.next().map(|s| s.parse().expect("p must be an integer")).unwrap_or(13);
    let eps = sidonlab::json::parse_rational(&args.next().unwrap_or_else(|| "1/5".into())).expect("eps as p/q");

    let s = erdos_turan(p)?;
    let eq = EquationCoeffs::parse("1,1,1,1,-4")?;
    let opts = ReportOptions { oracle_budget: Some(10_000_000), ..Default::default() };
    let report = transference_report_with(&s, &eq, &eps, &opts)?;
    println!("{}", serde_json::to_string_pretty(&report.to_json()).unwrap());
    eprintln!(
        "difference {} vs eps N^(s-1) = {}",
        report.difference,
        report.eps_scale
    );
    Ok(())
}
