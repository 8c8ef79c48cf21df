//! The garment configuration language: tree, registry, validation, pruning,
//! normalization, canonical text and token accounting.

mod config;
mod normalize;
mod outfit;
mod registry;
mod serialize;
mod validate;

pub use config::{parse_config, GarmentConfig, Leaf, Node, NONE};
pub use normalize::{
    denormalize_config, denormalize_value, fill_defaults, full_default_config, normalize_config, normalize_value,
};
pub use outfit::{parse_document, parse_outfit, Document, OutfitConfig, LOWER_KEY, UPPER_KEY, WHOLE_KEY};
pub use registry::{
    Anchor, Applicability, FieldDescriptor, FieldKind, FieldRegistry, Part, SectionDescriptor, Unit, BOTTOM_TYPES,
    COLLAR_STYLES, CUFF_TYPES, FLOAT_SLOTS, REGISTRY_VERSION, SIDE_CUTS, UPPER_TYPES, WAISTBAND_TYPES,
};
pub use serialize::{canonical_serialize, format_float, quantize, token_count};
pub use validate::{prune_config, validate_config, Issue, IssueCode, ValidationReport};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SchemaError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("document root must be a JSON object")]
    NotAnObject,
    #[error("{path} = {value} outside [{lo}, {hi}]")]
    OutOfRange { path: String, value: f64, lo: f64, hi: f64 },
    #[error("invalid registry: {0}")]
    Registry(String),
    #[error("invalid outfit: {0}")]
    Outfit(String),
}

impl SchemaError {
    pub fn code(&self) -> &'static str {
        match self {
            SchemaError::Syntax { .. } | SchemaError::NotAnObject => "SYNTAX_ERROR",
            SchemaError::OutOfRange { .. } => "OUT_OF_RANGE",
            SchemaError::Registry(_) => "REGISTRY_ERROR",
            SchemaError::Outfit(_) => "OUTFIT_ERROR",
        }
    }
}
