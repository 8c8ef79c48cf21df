//! Sewing-pattern compiler: garment configuration JSON in, validated 2D panels,
//! stitch graph and SVG out. Also ships the numeric codec, dataset sampler,
//! material mapper and pattern metrics built around the same registry.

pub mod assembler;
pub mod body;
pub mod codec;
pub mod components;
pub mod geometry;
pub mod metrics;
pub mod sampler;
pub mod schema;
pub mod simparams;

pub use body::{BodyModel, Measurement};
