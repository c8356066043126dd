//! Deterministic rendering: sorted JSON keys, exact integers as JSON
//! numbers, approximate reals to six significant digits.

use std::fmt::Display;
use std::str::FromStr;

use serde_json::{Number, Value};

/// An exact integer as a JSON number of any size.
pub fn int(n: impl Display) -> Value {
    Value::Number(Number::from_str(&n.to_string()).expect("integer literal"))
}

/// A real rounded to six significant digits. Non-finite values become null.
pub fn real(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(Number::from_str(&six_digits(x)).expect("decimal literal"))
}

pub fn six_digits(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    // the scientific form fixes the exponent after rounding
    let sci = format!("{x:.5e}");
    let exp: i32 = sci[sci.find('e').expect("exponent") + 1..].parse().expect("exponent");
    if (-5..=15).contains(&exp) {
        let decimals = (5 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        sci
    }
}

pub fn text(x: impl Display) -> Value {
    Value::String(x.to_string())
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string(v).expect("serializable"));
}
