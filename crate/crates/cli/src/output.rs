use std::fs;
use std::io::Write;
use std::path::Path;

use checkers_core::{Evaluated, MassParam, Rational, Site};
use serde_json::{json, Map, Value};

use crate::Failure;

/// `num/den`, always with a denominator.
pub fn ratio(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Seventeen significant digits.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn emit(path: Option<&Path>, content: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, content).map_err(|e| Failure::usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes())
                .and_then(|()| out.flush())
                .map_err(|e| Failure { code: 1, message: format!("cannot write output: {e}") })
        }
    }
}

/// Ordered `key=value` fields describing one amplitude.
pub fn amplitude_fields(site: Site, mass: &MassParam, value: &Evaluated) -> Vec<(&'static str, Value)> {
    let mut fields = vec![("n", json!(site.n())), ("tau", json!(site.tau()))];
    match value {
        Evaluated::Exact(a) => {
            let m = mass.as_rational().expect("exact values come from rational masses");
            let f = a.to_float(m);
            fields.extend([
                ("A1", json!(a.a1.to_string())),
                ("A2", json!(a.a2.to_string())),
                ("k", json!(a.k)),
                ("a1", json!(float(f.a1))),
                ("a2", json!(float(f.a2))),
                ("P", json!(a.prob(m).to_string())),
            ]);
        }
        Evaluated::Float(a) => {
            fields.extend([("a1", json!(float(a.a1))), ("a2", json!(float(a.a2))), ("P", json!(float(a.prob())))]);
        }
    }
    fields
}

pub fn fields_text(fields: &[(&'static str, Value)], sep: &str) -> String {
    fields
        .iter()
        .map(|(k, v)| match v {
            Value::String(s) => format!("{k}={s}"),
            other => format!("{k}={other}"),
        })
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn fields_json(fields: &[(&'static str, Value)]) -> Value {
    Value::Object(fields.iter().map(|(k, v)| (k.to_string(), v.clone())).collect::<Map<_, _>>())
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}
