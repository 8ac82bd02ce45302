//! JSON encodings shared by the CLI and reports.

use num_rational::BigRational;
use serde_json::{json, Value};

/// `{"numerator": "..", "denominator": ".."}` with decimal strings.
pub fn rational(q: &BigRational) -> Value {
    json!({ "numerator": q.numer().to_string(), "denominator": q.denom().to_string() })
}

/// `p/q` string form, `p` alone for integers.
pub fn rational_str(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse().ok()?;
            let q: num_bigint::BigInt = q.trim().parse().ok()?;
            (q != 0.into()).then(|| BigRational::new(p, q))
        }
        None => text.parse().ok().map(BigRational::from_integer),
    }
}

/// Floats with 17 significant digits, serialized as strings so they round-trip.
pub fn float(x: f64) -> Value {
    Value::String(format!("{x:.16e}"))
}
