//! Fixed-length numeric view of a config: skeleton text, float vector and mask,
//! merge-back, and the masked L1 term.

use serde::{Deserialize, Serialize};

use crate::schema::{quantize, FieldKind, FieldRegistry, GarmentConfig, Leaf, FLOAT_SLOTS};

/// Default weight of the numeric loss term.
pub const DEFAULT_LAMBDA_N: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CodecError {
    #[error("mask sets slot {slot} ({path}) but the skeleton has no such field")]
    MaskSkeletonMismatch { slot: usize, path: String },
    #[error("expected {FLOAT_SLOTS} entries, got {0}")]
    BadLength(usize),
}

impl CodecError {
    pub fn code(&self) -> &'static str {
        match self {
            CodecError::MaskSkeletonMismatch { .. } => "MASK_SKELETON_MISMATCH",
            CodecError::BadLength(_) => "BAD_LENGTH",
        }
    }
}

/// Vector exchange format: `{values, mask}` with 0/1 mask entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Encoded {
    pub values: Vec<f64>,
    pub mask: Vec<u8>,
}

impl Encoded {
    pub fn new(values: Vec<f64>, mask: Vec<bool>) -> Result<Self, CodecError> {
        let e = Encoded { values, mask: mask.into_iter().map(u8::from).collect() };
        e.check()?;
        Ok(e)
    }

    pub fn check(&self) -> Result<(), CodecError> {
        for n in [self.values.len(), self.mask.len()] {
            if n != FLOAT_SLOTS {
                return Err(CodecError::BadLength(n));
            }
        }
        Ok(())
    }

    pub fn bits(&self) -> Vec<bool> {
        self.mask.iter().map(|&b| b != 0).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossConfig {
    pub lambda_n: f64,
}

impl Default for LossConfig {
    fn default() -> Self {
        LossConfig { lambda_n: DEFAULT_LAMBDA_N }
    }
}

impl LossConfig {
    /// `lambda_n` times the masked L1 distance.
    pub fn numeric_term(&self, pred: &[f64], target: &[f64], mask: &[bool]) -> f64 {
        self.lambda_n * masked_l1(pred, target, mask)
    }
}

fn is_slot(reg: &FieldRegistry, path: &str) -> bool {
    reg.field(path).is_some_and(|f| f.kind == FieldKind::NormalizedFloat)
}

/// Zeroes every normalized-float leaf.
pub fn make_skeleton(cfg: &GarmentConfig, reg: &FieldRegistry) -> GarmentConfig {
    let mut out = cfg.clone();
    for (path, _) in cfg.leaves() {
        if is_slot(reg, &path) {
            out.set(&path, Leaf::Number(0.0));
        }
    }
    out
}

/// Slot `i` holds the leaf value when present, else 0; the mask marks presence.
pub fn encode_vector(cfg: &GarmentConfig, reg: &FieldRegistry) -> Encoded {
    let mut values = vec![0.0; FLOAT_SLOTS];
    let mut mask = vec![0u8; FLOAT_SLOTS];
    for f in reg.float_slots() {
        let slot = f.vector_slot.expect("float slot");
        if let Some(v) = cfg.number(&f.path) {
            values[slot] = v;
            mask[slot] = 1;
        }
    }
    Encoded { values, mask }
}

/// Writes masked-in values into the skeleton, clamped to `[0, 1]` and quantized.
pub fn decode_merge(skeleton: &GarmentConfig, enc: &Encoded, reg: &FieldRegistry) -> Result<GarmentConfig, CodecError> {
    enc.check()?;
    let mut out = skeleton.clone();
    for f in reg.float_slots() {
        let slot = f.vector_slot.expect("float slot");
        if enc.mask[slot] == 0 {
            continue;
        }
        if skeleton.number(&f.path).is_none() {
            return Err(CodecError::MaskSkeletonMismatch { slot, path: f.path.clone() });
        }
        let v = enc.values[slot];
        let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
        out.set(&f.path, Leaf::Number(quantize(v)));
    }
    Ok(out)
}

/// `Σ mᵢ |predᵢ − targetᵢ|`.
pub fn masked_l1(pred: &[f64], target: &[f64], mask: &[bool]) -> f64 {
    pred.iter()
        .zip(target)
        .zip(mask)
        .filter(|(_, &m)| m)
        .map(|((p, t), _)| (p - t).abs())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_case() {
        let mut p = vec![0.0; FLOAT_SLOTS];
        let mut t = vec![0.0; FLOAT_SLOTS];
        let mut m = vec![false; FLOAT_SLOTS];
        (p[0], p[1]) = (0.5, 0.2);
        (t[0], t[1]) = (0.4, 0.9);
        m[0] = true;
        assert!((masked_l1(&p, &t, &m) - 0.1).abs() < 1e-12);
        assert!((LossConfig::default().numeric_term(&p, &t, &m) - 0.01).abs() < 1e-12);
    }
}
