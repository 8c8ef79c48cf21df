//! Rule-based mapping from material descriptor scores to simulator parameters.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

const DEFAULT_MATERIALS: &str = include_str!("../data/materials.json");

pub const DEFAULT_ALPHA: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    #[serde(rename = "membE")]
    pub memb_e: f64,
    #[serde(rename = "bendE")]
    pub bend_e: f64,
    pub density: f64,
    /// Metres.
    pub thickness: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorScores {
    pub soft: i32,
    pub light: i32,
    pub smooth: i32,
    pub thickness_score: i32,
}

impl DescriptorScores {
    pub fn in_range(&self) -> bool {
        [self.soft, self.light, self.smooth, self.thickness_score].iter().all(|s| (1..=10).contains(s))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaCoeffs {
    pub alpha_m: f64,
    pub alpha_b: f64,
    pub alpha_d: f64,
    pub alpha_t: f64,
}

impl Default for AlphaCoeffs {
    fn default() -> Self {
        AlphaCoeffs { alpha_m: DEFAULT_ALPHA, alpha_b: DEFAULT_ALPHA, alpha_d: DEFAULT_ALPHA, alpha_t: DEFAULT_ALPHA }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum MapMode {
    /// `log p = (1 + αΔ) log p₀` for stiffnesses, `p = (1 + αΔ) p₀` otherwise.
    #[default]
    IdentityPreserving,
    /// `log p = αΔ log p₀` for stiffnesses, `p = αΔ p₀` otherwise.
    Literal,
}

/// Which descriptor drives bending stiffness and density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Pairing {
    /// bendE follows smoothness, density follows lightness.
    #[default]
    SmoothBend,
    /// bendE follows lightness, density follows smoothness.
    LightBend,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SimParamsError {
    #[error("unknown material {0}")]
    UnknownMaterial(String),
    #[error("{0} came out non-positive")]
    NonpositiveResult(&'static str),
    #[error("scores must be integers in 1..=10")]
    ScoreOutOfRange,
    #[error("bad material registry: {0}")]
    BadRegistry(String),
}

impl SimParamsError {
    pub fn code(&self) -> &'static str {
        match self {
            SimParamsError::UnknownMaterial(_) => "UNKNOWN_MATERIAL",
            SimParamsError::NonpositiveResult(_) => "NONPOSITIVE_RESULT",
            SimParamsError::ScoreOutOfRange => "SCORE_OUT_OF_RANGE",
            SimParamsError::BadRegistry(_) => "BAD_REGISTRY",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialEntry {
    pub params: MaterialParams,
    pub scores: DescriptorScores,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MaterialRegistry {
    pub materials: IndexMap<String, MaterialEntry>,
}

impl Default for MaterialRegistry {
    fn default() -> Self {
        MaterialRegistry::from_json_str(DEFAULT_MATERIALS).expect("shipped materials are valid")
    }
}

impl MaterialRegistry {
    pub fn from_json_str(text: &str) -> Result<Self, SimParamsError> {
        let r: MaterialRegistry = serde_json::from_str(text).map_err(|e| SimParamsError::BadRegistry(e.to_string()))?;
        for (name, m) in &r.materials {
            let p = m.params;
            if ![p.memb_e, p.bend_e, p.density, p.thickness].iter().all(|v| v.is_finite() && *v > 0.0) || !m.scores.in_range() {
                return Err(SimParamsError::BadRegistry(name.clone()));
            }
        }
        Ok(r)
    }

    pub fn lookup_base(&self, name: &str) -> Result<(MaterialParams, DescriptorScores), SimParamsError> {
        self.materials
            .get(name)
            .map(|m| (m.params, m.scores))
            .ok_or_else(|| SimParamsError::UnknownMaterial(name.into()))
    }
}

fn positive(name: &'static str, v: f64) -> Result<f64, SimParamsError> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(SimParamsError::NonpositiveResult(name))
    }
}

/// Adjusts base parameters by the score differences `target − base`. Logs are base 10.
pub fn map_scores(
    base: &MaterialParams,
    base_scores: &DescriptorScores,
    target: &DescriptorScores,
    a: &AlphaCoeffs,
    mode: MapMode,
    pairing: Pairing,
) -> Result<MaterialParams, SimParamsError> {
    if !base_scores.in_range() || !target.in_range() {
        return Err(SimParamsError::ScoreOutOfRange);
    }
    let d = |t: i32, b: i32| f64::from(t - b);
    let d_soft = d(target.soft, base_scores.soft);
    let d_light = d(target.light, base_scores.light);
    let d_smooth = d(target.smooth, base_scores.smooth);
    let d_thick = d(target.thickness_score, base_scores.thickness_score);
    let (d_bend, d_dens) = match pairing {
        Pairing::SmoothBend => (d_smooth, d_light),
        Pairing::LightBend => (d_light, d_smooth),
    };
    let k = |alpha: f64, delta: f64| match mode {
        MapMode::IdentityPreserving => 1.0 + alpha * delta,
        MapMode::Literal => alpha * delta,
    };
    let log_scaled = |p: f64, f: f64| if f == 1.0 { p } else { 10f64.powf(f * p.log10()) };
    Ok(MaterialParams {
        memb_e: positive("membE", log_scaled(base.memb_e, k(a.alpha_m, d_soft)))?,
        bend_e: positive("bendE", log_scaled(base.bend_e, k(a.alpha_b, d_bend)))?,
        density: positive("density", k(a.alpha_d, d_dens) * base.density)?,
        thickness: positive("thickness", k(a.alpha_t, d_thick) * base.thickness)?,
    })
}
