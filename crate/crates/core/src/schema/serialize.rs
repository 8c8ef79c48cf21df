//! Canonical text form and the proxy tokenizer.

use std::fmt::Write;

use indexmap::IndexMap;

use super::config::{GarmentConfig, Leaf, Node};
use super::registry::{FieldKind, FieldRegistry};

/// Three decimals, ties to even on the exact binary value, no negative zero.
pub fn format_float(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// Rounds to the three-decimal grid used by the text form.
pub fn quantize(v: f64) -> f64 {
    format_float(v).parse().expect("formatted float parses")
}

fn write_leaf(out: &mut String, path: &str, leaf: &Leaf, reg: &FieldRegistry) {
    let kind = reg.field(path).map(|f| f.kind);
    match leaf {
        Leaf::Text(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Leaf::Flag(b) => out.push_str(if *b { "true" } else { "false" }),
        Leaf::Null => out.push_str("null"),
        Leaf::Number(v) => match kind {
            Some(FieldKind::RawInt) | Some(FieldKind::Enum) | Some(FieldKind::Flag) if v.fract() == 0.0 => {
                write!(out, "{}", *v as i64).unwrap()
            }
            None if v.fract() == 0.0 && v.abs() < 1e15 => write!(out, "{}", *v as i64).unwrap(),
            _ => out.push_str(&format_float(*v)),
        },
        Leaf::Other(v) => out.push_str(&serde_json::to_string(v).expect("value serializes")),
    }
}

fn write_section(out: &mut String, prefix: &str, map: &IndexMap<String, Node>, reg: &FieldRegistry, depth: usize) {
    if map.is_empty() {
        out.push_str("{}");
        return;
    }
    out.push_str("{\n");
    let pad = "    ".repeat(depth + 1);
    for (i, (k, v)) in map.iter().enumerate() {
        let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        out.push_str(&pad);
        out.push_str(&serde_json::to_string(k).expect("key serializes"));
        out.push_str(": ");
        match v {
            Node::Leaf(l) => write_leaf(out, &path, l, reg),
            Node::Section(m) => write_section(out, &path, m, reg, depth + 1),
        }
        if i + 1 < map.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str(&"    ".repeat(depth));
    out.push('}');
}

/// Deterministic text: registry key order, four-space indentation, floats at
/// three decimals. Unknown keys keep their relative order after known ones.
pub fn canonical_serialize(cfg: &GarmentConfig, reg: &FieldRegistry) -> String {
    let mut ordered = cfg.clone();
    super::validate::reorder(&mut ordered, reg);
    let mut out = String::new();
    write_section(&mut out, "", &ordered.root, reg, 0);
    out.push('\n');
    out
}

fn is_punct(c: char) -> bool {
    matches!(c, '{' | '}' | '[' | ']' | ':' | ',' | '"')
}

/// Proxy token count: whitespace separates tokens, and each of `{ } [ ] : , "`
/// is a token on its own.
pub fn token_count(text: &str) -> usize {
    let mut count = 0;
    let mut in_word = false;
    for c in text.chars() {
        if c.is_whitespace() {
            in_word = false;
        } else if is_punct(c) {
            count += 1;
            in_word = false;
        } else if !in_word {
            count += 1;
            in_word = true;
        }
    }
    count
}
