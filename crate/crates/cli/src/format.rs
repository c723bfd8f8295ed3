//! Text, JSON and LaTeX renderings.

use std::fmt::Write as _;

use greedy_core::basisops::BasisExpansion;
use greedy_core::{LaurentPoly, PointedElement};
use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};

fn latex_power(out: &mut String, var: &str, d: i64) {
    if d == 0 {
        return;
    }
    if !out.is_empty() && !out.ends_with(' ') && !out.ends_with('(') {
        out.push(' ');
    }
    if d == 1 {
        out.push_str(var);
    } else {
        let _ = write!(out, "{var}^{{{d}}}");
    }
}

fn latex_monomial(e: (i64, i64)) -> String {
    let mut s = String::new();
    latex_power(&mut s, "x_1", e.0);
    latex_power(&mut s, "x_2", e.1);
    s
}

/// Signed sum of terms, lex ascending.
pub fn latex_poly(x: &LaurentPoly) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (&e, c)) in x.terms().enumerate() {
        match (i, c.is_negative()) {
            (0, true) => s.push('-'),
            (0, false) => {}
            (_, true) => s.push_str(" - "),
            (_, false) => s.push_str(" + "),
        }
        let mag = c.abs();
        let mono = latex_monomial(e);
        if mono.is_empty() {
            let _ = write!(s, "{mag}");
        } else if mag.is_one() {
            s.push_str(&mono);
        } else {
            let _ = write!(s, "{mag} {mono}");
        }
    }
    s
}

/// `x_1^{-a1} x_2^{-a2} \left( sum c(p,q) x_1^{bp} x_2^{cq} \right)`.
pub fn latex_pointed(e: &PointedElement) -> String {
    let inner = LaurentPoly::from_terms(
        e.grid.iter().map(|(&(p, q), v)| ((e.b as i64 * p as i64, e.c as i64 * q as i64), v.clone())),
    );
    let prefix = latex_monomial((-e.a1, -e.a2));
    if prefix.is_empty() {
        latex_poly(&inner)
    } else {
        format!("{prefix} \\left( {} \\right)", latex_poly(&inner))
    }
}

pub fn element_json(e: &PointedElement, methods: &[&str]) -> Value {
    let mut v = e.to_laurent().to_json();
    let grid: Vec<Value> = e.grid.iter().map(|(&(p, q), c)| json!({ "p": p, "q": q, "c": c.to_string() })).collect();
    let obj = v.as_object_mut().expect("object");
    obj.insert("b".into(), json!(e.b));
    obj.insert("c".into(), json!(e.c));
    obj.insert("a".into(), json!([e.a1, e.a2]));
    obj.insert("methods".into(), json!(methods));
    obj.insert("grid".into(), Value::Array(grid));
    v
}

pub fn expansion_text(e: &BasisExpansion) -> String {
    let name = match e.kind {
        greedy_core::basisops::BasisKind::Standard => "z",
        greedy_core::basisops::BasisKind::Greedy => "x",
    };
    if e.coeffs.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (&(a1, a2), u) in &e.coeffs {
        let _ = writeln!(s, "{name}[{a1},{a2}]: {u}");
    }
    s.pop();
    s
}

pub fn expansion_json(e: &BasisExpansion) -> Value {
    let coeffs: Vec<Value> =
        e.coeffs.iter().map(|(&(a1, a2), u)| json!({ "a": [a1, a2], "c": u.to_string() })).collect();
    json!({ "basis": e.kind.name(), "coeffs": coeffs })
}

pub fn parse_coeff(s: &str) -> Result<BigInt, String> {
    s.parse::<BigInt>().map_err(|e| format!("bad coefficient {s:?}: {e}"))
}
