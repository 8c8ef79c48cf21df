//! Outfit wrappers: one upper plus one lower garment, or a single whole-body garment.

use serde_json::Value;

use super::config::{parse_json, GarmentConfig, NONE};
use super::SchemaError;

pub const UPPER_KEY: &str = "upperbody_garment";
pub const LOWER_KEY: &str = "lowerbody_garment";
pub const WHOLE_KEY: &str = "wholebody_garment";

#[derive(Debug, Clone, PartialEq)]
pub enum OutfitConfig {
    Pair { upper: GarmentConfig, lower: GarmentConfig },
    Whole(GarmentConfig),
}

/// Either a bare garment config or an outfit wrapper.
#[derive(Debug, Clone, PartialEq)]
pub enum Document {
    Garment(GarmentConfig),
    Outfit(OutfitConfig),
}

impl OutfitConfig {
    pub fn from_json(v: &Value) -> Result<Self, SchemaError> {
        let Value::Object(m) = v else { return Err(SchemaError::NotAnObject) };
        let get = |k: &str| m.get(k).map(GarmentConfig::from_json).transpose();
        let (upper, lower, whole) = (get(UPPER_KEY)?, get(LOWER_KEY)?, get(WHOLE_KEY)?);
        if let Some(extra) = m.keys().find(|k| ![UPPER_KEY, LOWER_KEY, WHOLE_KEY].contains(&k.as_str())) {
            return Err(SchemaError::Outfit(format!("unexpected key {extra}")));
        }
        let outfit = match (upper, lower, whole) {
            (Some(upper), Some(lower), None) => OutfitConfig::Pair { upper, lower },
            (None, None, Some(w)) => OutfitConfig::Whole(w),
            (_, _, Some(_)) => {
                return Err(SchemaError::Outfit("wholebody_garment cannot be combined with other garments".into()))
            }
            _ => return Err(SchemaError::Outfit("need upperbody_garment and lowerbody_garment".into())),
        };
        outfit.check()?;
        Ok(outfit)
    }

    fn check(&self) -> Result<(), SchemaError> {
        if let OutfitConfig::Pair { upper, lower } = self {
            if upper.meta("bottom") != NONE {
                return Err(SchemaError::Outfit("upper garment must have meta.bottom = \"None\"".into()));
            }
            if lower.meta("upper") != NONE {
                return Err(SchemaError::Outfit("lower garment must have meta.upper = \"None\"".into()));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        match self {
            OutfitConfig::Pair { upper, lower } => {
                m.insert(UPPER_KEY.into(), upper.to_json());
                m.insert(LOWER_KEY.into(), lower.to_json());
            }
            OutfitConfig::Whole(w) => {
                m.insert(WHOLE_KEY.into(), w.to_json());
            }
        }
        Value::Object(m)
    }

    /// Wrapped garments in slot order, labelled.
    pub fn garments(&self) -> Vec<(&'static str, &GarmentConfig)> {
        match self {
            OutfitConfig::Pair { upper, lower } => vec![(UPPER_KEY, upper), (LOWER_KEY, lower)],
            OutfitConfig::Whole(w) => vec![(WHOLE_KEY, w)],
        }
    }
}

pub fn parse_outfit(text: &str) -> Result<OutfitConfig, SchemaError> {
    OutfitConfig::from_json(&parse_json(text)?)
}

/// Detects the wrapper by its keys.
pub fn parse_document(text: &str) -> Result<Document, SchemaError> {
    let v = parse_json(text)?;
    let wrapped = v
        .as_object()
        .is_some_and(|m| m.keys().any(|k| [UPPER_KEY, LOWER_KEY, WHOLE_KEY].contains(&k.as_str())));
    if wrapped {
        Ok(Document::Outfit(OutfitConfig::from_json(&v)?))
    } else {
        Ok(Document::Garment(GarmentConfig::from_json(&v)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHIRT: &str = r#"{"meta": {"upper": "Shirt", "wb": "None", "bottom": "None"}}"#;
    const PANTS: &str = r#"{"meta": {"upper": "None", "wb": "None", "bottom": "Pants"}}"#;

    #[test]
    fn both_shapes_is_an_error() {
        let text = format!(r#"{{"upperbody_garment": {SHIRT}, "lowerbody_garment": {PANTS}, "wholebody_garment": {SHIRT}}}"#);
        assert!(matches!(parse_outfit(&text), Err(SchemaError::Outfit(_))));
    }

    #[test]
    fn pair_requires_matching_meta() {
        let text = format!(r#"{{"upperbody_garment": {PANTS}, "lowerbody_garment": {PANTS}}}"#);
        assert!(parse_outfit(&text).is_err());
        let ok = format!(r#"{{"upperbody_garment": {SHIRT}, "lowerbody_garment": {PANTS}}}"#);
        assert_eq!(parse_outfit(&ok).unwrap().garments().len(), 2);
    }

    #[test]
    fn document_detection() {
        assert!(matches!(parse_document(SHIRT).unwrap(), Document::Garment(_)));
        let w = format!(r#"{{"wholebody_garment": {SHIRT}}}"#);
        assert!(matches!(parse_document(&w).unwrap(), Document::Outfit(OutfitConfig::Whole(_))));
    }
}
