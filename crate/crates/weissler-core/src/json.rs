//! Canonical JSON rendering: a deterministic byte encoding so identical
//! results serialize to identical bytes regardless of construction order.
//!
//! Rules: object keys sorted lexicographically, floats rendered as
//! `{:.16e}` (17 significant digits — enough to round-trip any f64),
//! integers rendered plainly, strings escaped the standard way, no
//! insignificant whitespace.
//!
//! The parse-then-reserialize cycle is byte-identical only when the parser
//! rounds decimal literals exactly; serde_json does that with its
//! `float_roundtrip` feature, which this crate enables (the default fast
//! path can be a ulp off on 17-digit literals).

use std::fmt::Write as _;

/// Renders a value to its canonical string form.
pub fn to_canonical_string(value: &serde_json::Value) -> String {
    let mut out = String::new();
    write_value(&mut out, value);
    out
}

fn write_value(out: &mut String, value: &serde_json::Value) {
    match value {
        serde_json::Value::Null => out.push_str("null"),
        serde_json::Value::Bool(b) => {
            out.push_str(if *b { "true" } else { "false" });
        }
        serde_json::Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                // as_f64 is total on the remaining variant.
                let _ = write!(out, "{:.16e}", n.as_f64().unwrap());
            }
        }
        serde_json::Value::String(s) => write_escaped(out, s),
        serde_json::Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, item);
            }
            out.push(']');
        }
        serde_json::Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort_unstable();
            out.push('{');
            for (i, key) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_escaped(out, key);
                out.push(':');
                write_value(out, &map[key]);
            }
            out.push('}');
        }
    }
}

fn write_escaped(out: &mut String, s: &str) {
    // serde_json's string serialization is already the canonical escaping.
    out.push_str(&serde_json::to_string(s).expect("string serialization is infallible"));
}
