//! The configuration tree and its JSON parser.

use indexmap::IndexMap;
use serde_json::Value;

use super::SchemaError;

/// A scalar at the bottom of the tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Leaf {
    Text(String),
    Number(f64),
    Flag(bool),
    Null,
    /// Arrays and anything else the schema has no kind for; kept verbatim.
    Other(Value),
}

impl Leaf {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            Leaf::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Leaf::Number(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_flag(&self) -> Option<bool> {
        match self {
            Leaf::Flag(b) => Some(*b),
            _ => None,
        }
    }

    pub fn from_json(v: &Value) -> Leaf {
        match v {
            Value::String(s) => Leaf::Text(s.clone()),
            Value::Number(n) => n.as_f64().map(Leaf::Number).unwrap_or_else(|| Leaf::Other(v.clone())),
            Value::Bool(b) => Leaf::Flag(*b),
            Value::Null => Leaf::Null,
            other => Leaf::Other(other.clone()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Leaf::Text(s) => Value::String(s.clone()),
            Leaf::Number(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Leaf::Flag(b) => Value::Bool(*b),
            Leaf::Null => Value::Null,
            Leaf::Other(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf(Leaf),
    Section(IndexMap<String, Node>),
}

impl Node {
    pub fn as_section(&self) -> Option<&IndexMap<String, Node>> {
        match self {
            Node::Section(m) => Some(m),
            Node::Leaf(_) => None,
        }
    }

    pub fn as_leaf(&self) -> Option<&Leaf> {
        match self {
            Node::Leaf(l) => Some(l),
            Node::Section(_) => None,
        }
    }

    fn from_json(v: &Value) -> Node {
        match v {
            Value::Object(m) => Node::Section(m.iter().map(|(k, v)| (k.clone(), Node::from_json(v))).collect()),
            other => Node::Leaf(Leaf::from_json(other)),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Node::Leaf(l) => l.to_json(),
            Node::Section(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), v.to_json())).collect()),
        }
    }
}

/// A garment configuration: a `meta` block selecting garment types plus one
/// block per garment part. Keys are kept in document order; unknown keys survive
/// parsing and are reported by validation.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GarmentConfig {
    pub root: IndexMap<String, Node>,
}

/// Meta value meaning "no garment of this kind".
pub const NONE: &str = "None";

impl GarmentConfig {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_json(v: &Value) -> Result<Self, SchemaError> {
        match v {
            Value::Object(m) => Ok(GarmentConfig {
                root: m.iter().map(|(k, v)| (k.clone(), Node::from_json(v))).collect(),
            }),
            _ => Err(SchemaError::NotAnObject),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Object(self.root.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
    }

    pub fn get(&self, path: &str) -> Option<&Node> {
        let mut parts = path.split('.');
        let mut node = self.root.get(parts.next()?)?;
        for p in parts {
            node = node.as_section()?.get(p)?;
        }
        Some(node)
    }

    pub fn get_leaf(&self, path: &str) -> Option<&Leaf> {
        self.get(path)?.as_leaf()
    }

    pub fn number(&self, path: &str) -> Option<f64> {
        self.get_leaf(path)?.as_number()
    }

    pub fn text(&self, path: &str) -> Option<&str> {
        self.get_leaf(path)?.as_text()
    }

    pub fn flag(&self, path: &str) -> Option<bool> {
        self.get_leaf(path)?.as_flag()
    }

    pub fn has(&self, path: &str) -> bool {
        self.get(path).is_some()
    }

    fn section_mut(&mut self, path: &[&str]) -> &mut IndexMap<String, Node> {
        let mut map = &mut self.root;
        for p in path {
            let entry = map.entry((*p).to_string()).or_insert_with(|| Node::Section(IndexMap::new()));
            if !matches!(entry, Node::Section(_)) {
                *entry = Node::Section(IndexMap::new());
            }
            map = match entry {
                Node::Section(m) => m,
                Node::Leaf(_) => unreachable!(),
            };
        }
        map
    }

    /// Creates (or replaces) the section at `path`, making parents as needed.
    pub fn ensure_section(&mut self, path: &str) {
        let parts: Vec<&str> = path.split('.').collect();
        self.section_mut(&parts);
    }

    /// Sets a leaf, creating parent sections as needed.
    pub fn set(&mut self, path: &str, leaf: Leaf) {
        let parts: Vec<&str> = path.split('.').collect();
        let (last, parents) = parts.split_last().expect("non-empty path");
        self.section_mut(parents).insert((*last).to_string(), Node::Leaf(leaf));
    }

    pub fn remove(&mut self, path: &str) -> Option<Node> {
        let parts: Vec<&str> = path.split('.').collect();
        let (last, parents) = parts.split_last()?;
        let mut map = &mut self.root;
        for p in parents {
            map = match map.get_mut(*p)? {
                Node::Section(m) => m,
                Node::Leaf(_) => return None,
            };
        }
        map.shift_remove(*last)
    }

    /// `meta.<key>`, treating an absent key as `"None"`.
    pub fn meta(&self, key: &str) -> &str {
        self.text(&format!("meta.{key}")).unwrap_or(NONE)
    }

    pub fn is_wholebody(&self) -> bool {
        self.meta("upper") != NONE && self.meta("bottom") != NONE
    }

    /// Visits every leaf with its dotted path, in document order.
    pub fn leaves(&self) -> Vec<(String, &Leaf)> {
        fn walk<'a>(prefix: &str, map: &'a IndexMap<String, Node>, out: &mut Vec<(String, &'a Leaf)>) {
            for (k, v) in map {
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                match v {
                    Node::Leaf(l) => out.push((path, l)),
                    Node::Section(m) => walk(&path, m, out),
                }
            }
        }
        let mut out = Vec::new();
        walk("", &self.root, &mut out);
        out
    }
}

/// Byte offset of a serde_json error position (1-based line and column).
fn byte_offset(text: &str, line: usize, column: usize) -> usize {
    let line_start: usize = text.split_inclusive('\n').take(line.saturating_sub(1)).map(str::len).sum();
    (line_start + column).min(text.len())
}

pub(crate) fn parse_json(text: &str) -> Result<Value, SchemaError> {
    serde_json::from_str(text).map_err(|e| SchemaError::Syntax {
        offset: byte_offset(text, e.line(), e.column()),
        message: e.to_string(),
    })
}

/// Parses UTF-8 JSON into a config, preserving every key.
pub fn parse_config(text: &str) -> Result<GarmentConfig, SchemaError> {
    GarmentConfig::from_json(&parse_json(text)?)
}
