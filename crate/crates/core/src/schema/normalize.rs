//! Affine mapping of continuous fields between raw units and `[0, 1]`.

use super::config::{GarmentConfig, Leaf};
use super::registry::{FieldKind, FieldRegistry};
use super::SchemaError;

fn map_floats(
    cfg: &GarmentConfig,
    reg: &FieldRegistry,
    f: impl Fn(&str, f64, f64, f64) -> Result<f64, SchemaError>,
) -> Result<GarmentConfig, SchemaError> {
    let mut out = cfg.clone();
    for d in reg.entries.iter().filter(|d| d.kind == FieldKind::NormalizedFloat) {
        if let Some(v) = cfg.number(&d.path) {
            let (lo, hi) = d.lo_hi();
            out.set(&d.path, Leaf::Number(f(&d.path, v, lo, hi)?));
        }
    }
    Ok(out)
}

/// Raw value in `[lo, hi]` to `[0, 1]`.
pub fn normalize_value(v: f64, lo: f64, hi: f64) -> f64 {
    (v - lo) / (hi - lo)
}

pub fn denormalize_value(v: f64, lo: f64, hi: f64) -> f64 {
    lo + v * (hi - lo)
}

/// Raw → normalized. Fails on the first raw value outside its registry range.
pub fn normalize_config(cfg: &GarmentConfig, reg: &FieldRegistry) -> Result<GarmentConfig, SchemaError> {
    map_floats(cfg, reg, |path, v, lo, hi| {
        if !(lo..=hi).contains(&v) {
            return Err(SchemaError::OutOfRange { path: path.into(), value: v, lo, hi });
        }
        Ok(normalize_value(v, lo, hi))
    })
}

/// Normalized → raw units (cm, degrees, ratios, or body-measurement multiples).
pub fn denormalize_config(cfg: &GarmentConfig, reg: &FieldRegistry) -> Result<GarmentConfig, SchemaError> {
    map_floats(cfg, reg, |path, v, lo, hi| {
        if !(0.0..=1.0).contains(&v) {
            return Err(SchemaError::OutOfRange { path: path.into(), value: v, lo: 0.0, hi: 1.0 });
        }
        Ok(denormalize_value(v, lo, hi))
    })
}

/// Adds registry defaults for every applicable leaf missing from a present section.
pub fn fill_defaults(cfg: &GarmentConfig, reg: &FieldRegistry) -> GarmentConfig {
    let mut out = cfg.clone();
    for d in &reg.entries {
        let section_present = d.path.starts_with("meta.") || cfg.get(d.parent()).is_some();
        if section_present && d.applicability.holds(cfg) && !cfg.has(&d.path) {
            out.set(&d.path, Leaf::from_json(&d.default));
        }
    }
    super::validate::reorder(&mut out, reg);
    out
}

/// A config holding every registry section with default values, regardless of
/// applicability: the fixed-length layout a pruned config is compared against.
pub fn full_default_config(reg: &FieldRegistry) -> GarmentConfig {
    let mut out = GarmentConfig::new();
    for d in &reg.entries {
        out.set(&d.path, Leaf::from_json(&d.default));
    }
    super::validate::reorder(&mut out, reg);
    out
}
