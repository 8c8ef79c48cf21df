//! Schema validation and pruning.

use serde::{Deserialize, Serialize};

use super::config::{GarmentConfig, Leaf, Node};
use super::registry::{FieldKind, FieldRegistry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    MissingSection,
    ExtraSection,
    OutOfRange,
    BadEnum,
    BadType,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Issue {
    pub path: String,
    pub code: IssueCode,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    fn from_issues(issues: Vec<Issue>) -> Self {
        ValidationReport { ok: issues.is_empty(), issues }
    }

    pub fn has(&self, path: &str, code: IssueCode) -> bool {
        self.issues.iter().any(|i| i.path == path && i.code == code)
    }
}

fn issue(path: &str, code: IssueCode, message: String) -> Issue {
    Issue { path: path.to_string(), code, message }
}

/// Checks a normalized-form config against the registry. Leaves absent from a
/// present section are allowed and take their registry default at compile time.
pub fn validate_config(cfg: &GarmentConfig, reg: &FieldRegistry) -> ValidationReport {
    let mut issues = Vec::new();

    match cfg.root.get("meta") {
        Some(Node::Section(_)) => {}
        Some(Node::Leaf(_)) => issues.push(issue("meta", IssueCode::BadType, "meta must be an object".into())),
        None => issues.push(issue("meta", IssueCode::MissingSection, "meta block is required".into())),
    }

    for s in &reg.sections {
        let present = cfg.get(&s.path);
        let applies = s.applicability.holds(cfg);
        match (present, applies) {
            (None, true) => issues.push(issue(
                &s.path,
                IssueCode::MissingSection,
                format!("{} is required by the selected garment types", s.part.tag()),
            )),
            (Some(Node::Leaf(_)), _) => {
                issues.push(issue(&s.path, IssueCode::BadType, format!("{} must be an object", s.path)))
            }
            (Some(Node::Section(_)), false) => issues.push(issue(
                &s.path,
                IssueCode::ExtraSection,
                format!("{} does not apply to the selected garment types", s.part.tag()),
            )),
            _ => {}
        }
    }

    walk(cfg, reg, "", &cfg.root, &mut issues);
    ValidationReport::from_issues(issues)
}

fn walk(
    cfg: &GarmentConfig,
    reg: &FieldRegistry,
    prefix: &str,
    map: &indexmap::IndexMap<String, Node>,
    issues: &mut Vec<Issue>,
) {
    for (k, node) in map {
        let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
        if let Some(f) = reg.field(&path) {
            let Node::Leaf(leaf) = node else {
                issues.push(issue(&path, IssueCode::BadType, format!("expected {:?}", f.kind)));
                continue;
            };
            check_leaf(f, &path, leaf, issues);
        } else if path == "meta" {
            if let Node::Section(m) = node {
                walk(cfg, reg, &path, m, issues);
            }
        } else if let Some(s) = reg.section_at(&path) {
            // Non-applicable or malformed sections are reported at section level.
            if let (Node::Section(m), true) = (node, s.applicability.holds(cfg)) {
                walk(cfg, reg, &path, m, issues);
            }
        } else {
            issues.push(issue(&path, IssueCode::ExtraSection, format!("unknown key {path}")));
        }
    }
}

fn check_leaf(f: &super::registry::FieldDescriptor, path: &str, leaf: &Leaf, issues: &mut Vec<Issue>) {
    match (f.kind, leaf) {
        (FieldKind::Enum, Leaf::Text(v)) => {
            if !f.enum_values.iter().any(|e| e == v) {
                issues.push(issue(path, IssueCode::BadEnum, format!("{v:?} is not one of {}", f.enum_values.join(", "))));
            }
        }
        (FieldKind::NormalizedFloat, Leaf::Number(v)) => {
            if !(0.0..=1.0).contains(v) {
                issues.push(issue(path, IssueCode::OutOfRange, format!("{v} outside [0, 1]")));
            }
        }
        (FieldKind::RawInt, Leaf::Number(v)) => {
            let (lo, hi) = f.lo_hi();
            if v.fract() != 0.0 {
                issues.push(issue(path, IssueCode::BadType, format!("{v} is not an integer")));
            } else if *v < lo || *v > hi {
                issues.push(issue(path, IssueCode::OutOfRange, format!("{v} outside [{lo}, {hi}]")));
            }
        }
        (FieldKind::Flag, Leaf::Flag(_)) => {}
        (kind, _) => issues.push(issue(path, IssueCode::BadType, format!("expected {kind:?}"))),
    }
}

/// Keeps exactly the registry entries whose applicability holds under `meta`.
/// Unknown keys and non-applicable sections are dropped. Idempotent.
pub fn prune_config(cfg: &GarmentConfig, reg: &FieldRegistry) -> GarmentConfig {
    let mut out = GarmentConfig::new();
    for f in reg.entries.iter().filter(|f| f.path.starts_with("meta.")) {
        if let Some(l) = cfg.get_leaf(&f.path) {
            out.set(&f.path, l.clone());
        }
    }
    if cfg.root.contains_key("meta") && !out.root.contains_key("meta") {
        out.ensure_section("meta");
    }
    for s in &reg.sections {
        if s.applicability.holds(cfg) && matches!(cfg.get(&s.path), Some(Node::Section(_))) {
            out.ensure_section(&s.path);
        }
    }
    for f in reg.entries.iter().filter(|f| !f.path.starts_with("meta.")) {
        if !f.applicability.holds(cfg) || !matches!(cfg.get(f.parent()), Some(Node::Section(_))) {
            continue;
        }
        if let Some(l) = cfg.get_leaf(&f.path) {
            out.set(&f.path, l.clone());
        }
    }
    reorder(&mut out, reg);
    out
}

/// Puts sections and fields into registry order: fields first, nested blocks after.
pub(crate) fn reorder(cfg: &mut GarmentConfig, reg: &FieldRegistry) {
    let rank = |path: &str| -> usize {
        if path == "meta" {
            return 0;
        }
        if let Some(i) = reg.entries.iter().position(|f| f.path == path) {
            return 1 + i;
        }
        if let Some(i) = reg.sections.iter().position(|s| s.path == path) {
            return 1 + reg.entries.len() + i;
        }
        usize::MAX
    };
    fn sort(prefix: &str, map: &mut indexmap::IndexMap<String, Node>, rank: &dyn Fn(&str) -> usize) {
        let full = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
        map.sort_by(|a, _, b, _| rank(&full(a)).cmp(&rank(&full(b))));
        for (k, v) in map.iter_mut() {
            if let Node::Section(m) = v {
                sort(&full(k), m, rank);
            }
        }
    }
    sort("", &mut cfg.root, &rank);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schema::parse_config;

    #[test]
    fn unknown_leaf_is_extra() {
        let reg = FieldRegistry::default();
        let cfg = parse_config(r#"{"meta": {"upper": "None", "wb": "None", "bottom": "Pants"},
            "pants": {"length": 0.5, "pockets": 2, "cuff": {"type": "None"}}}"#)
        .unwrap();
        let r = validate_config(&cfg, &reg);
        assert!(r.has("pants.pockets", IssueCode::ExtraSection), "{r:?}");
        assert_eq!(r.issues.len(), 1);
    }

    #[test]
    fn enum_and_type_errors() {
        let reg = FieldRegistry::default();
        let cfg = parse_config(r#"{"meta": {"upper": "Cape", "wb": "None", "bottom": "Pants"},
            "pants": {"length": "long", "cuff": {"type": "None"}}}"#)
        .unwrap();
        let r = validate_config(&cfg, &reg);
        assert!(r.has("meta.upper", IssueCode::BadEnum));
        assert!(r.has("pants.length", IssueCode::BadType));
    }

    #[test]
    fn non_applicable_section_is_extra_once() {
        let reg = FieldRegistry::default();
        let cfg = parse_config(r#"{"meta": {"upper": "None", "wb": "None", "bottom": "Pants"},
            "pants": {"cuff": {"type": "None"}}, "pencil_skirt": {"length": 0.5, "zzz": 1}}"#)
        .unwrap();
        let r = validate_config(&cfg, &reg);
        assert!(r.has("pencil_skirt", IssueCode::ExtraSection));
        assert_eq!(r.issues.len(), 1, "{r:?}");
    }

    #[test]
    fn raw_int_must_be_integral() {
        let reg = FieldRegistry::default();
        let cfg = parse_config(r#"{"meta": {"upper": "None", "wb": "FittedWB", "bottom": "None"},
            "waistband": {"height": 5.5}}"#)
        .unwrap();
        assert!(validate_config(&cfg, &reg).has("waistband.height", IssueCode::BadType));
    }
}
