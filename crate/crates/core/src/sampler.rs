//! Weighted random configs, the validity-filtered dataset pipeline, and edit pairs.

use std::collections::BTreeMap;
use std::path::Path;

use indexmap::IndexMap;
use rand::distr::weighted::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::assembler::{assemble_garment, check_pattern, export_svg, serialize_pattern};
use crate::body::BodyModel;
use crate::schema::{
    canonical_serialize, format_float, prune_config, quantize, FieldKind, FieldRegistry, GarmentConfig, Leaf, OutfitConfig, Part,
};

const DEFAULT_WEIGHTS: &str = include_str!("../data/weights.json");

/// The edit prompt frame; part descriptions go between the two halves.
pub const EDIT_PREFIX: &str = "Change the garment sewing pattern by modifying ";
pub const EDIT_SUFFIX: &str = " while keeping other parts unchanged.";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeWeights {
    pub upper: f64,
    pub lower: f64,
    pub wholebody: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutfitShapeWeights {
    pub pair: f64,
    pub whole: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplingWeights {
    pub shapes: ShapeWeights,
    pub outfit_shapes: OutfitShapeWeights,
    /// Per enum field, per value. Fields not listed are uniform.
    #[serde(default)]
    pub enums: IndexMap<String, IndexMap<String, f64>>,
    /// Probability of `true` per flag field.
    #[serde(default)]
    pub flags: IndexMap<String, f64>,
    pub default_flag_probability: f64,
}

impl Default for SamplingWeights {
    fn default() -> Self {
        SamplingWeights::from_json_str(DEFAULT_WEIGHTS).expect("shipped weights are valid")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum SamplerError {
    #[error("invalid weights: {0}")]
    BadWeights(String),
    #[error("configs are identical")]
    NoDifference,
    #[error("io error at {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl SamplerError {
    pub fn code(&self) -> &'static str {
        match self {
            SamplerError::BadWeights(_) => "BAD_WEIGHTS",
            SamplerError::NoDifference => "NO_DIFFERENCE",
            SamplerError::Io { .. } => "IO_ERROR",
        }
    }
}

impl SamplingWeights {
    pub fn from_json_str(text: &str) -> Result<Self, SamplerError> {
        let w: SamplingWeights = serde_json::from_str(text).map_err(|e| SamplerError::BadWeights(e.to_string()))?;
        w.check()?;
        Ok(w)
    }

    pub fn check(&self) -> Result<(), SamplerError> {
        let bad = |m: String| Err(SamplerError::BadWeights(m));
        let ok = |v: f64| v.is_finite() && v >= 0.0;
        let s = &self.shapes;
        if ![s.upper, s.lower, s.wholebody].into_iter().all(ok) || s.upper + s.lower + s.wholebody <= 0.0 {
            return bad("shape weights".into());
        }
        let o = &self.outfit_shapes;
        if ![o.pair, o.whole].into_iter().all(ok) || o.pair + o.whole <= 0.0 {
            return bad("outfit shape weights".into());
        }
        for (path, vals) in &self.enums {
            if !vals.values().all(|&v| ok(v)) || vals.values().sum::<f64>() <= 0.0 {
                return bad(format!("weights of {path}"));
            }
        }
        for (path, &p) in self.flags.iter().chain([(&"default".to_string(), &self.default_flag_probability)]) {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("probability of {path}"));
            }
        }
        Ok(())
    }

    pub fn set_enum(&mut self, path: &str, value: &str, weight: f64) {
        self.enums.entry(path.into()).or_default().insert(value.into(), weight);
    }
}

/// SplitMix64 finalizer.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-item seed: `splitmix64(splitmix64(master) ^ index)`.
pub fn stable_hash(master: u64, index: u64) -> u64 {
    splitmix64(splitmix64(master) ^ index)
}

fn pick<'a>(rng: &mut ChaCha8Rng, values: &'a [String], weights: Option<&IndexMap<String, f64>>) -> &'a str {
    let ws: Vec<f64> = values
        .iter()
        .map(|v| weights.map_or(1.0, |w| w.get(v).copied().unwrap_or(0.0)))
        .collect();
    match WeightedIndex::new(&ws) {
        Ok(d) => &values[d.sample(rng)],
        Err(_) => &values[0],
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Upper,
    Lower,
    Whole,
}

fn sample_shape(seed: u64, shape: Shape, w: &SamplingWeights, reg: &FieldRegistry) -> GarmentConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cfg = GarmentConfig::new();
    let meta = |rng: &mut ChaCha8Rng, key: &str, allow_none: bool| -> String {
        let path = format!("meta.{key}");
        let f = reg.field(&path).expect("meta field");
        let values: Vec<String> = f.enum_values.iter().filter(|v| allow_none || v.as_str() != "None").cloned().collect();
        pick(rng, &values, w.enums.get(&path)).to_string()
    };
    let upper = if shape == Shape::Lower { "None".into() } else { meta(&mut rng, "upper", false) };
    let bottom = if shape == Shape::Upper { "None".into() } else { meta(&mut rng, "bottom", false) };
    let wb = if shape == Shape::Upper { "None".into() } else { meta(&mut rng, "wb", true) };
    for (k, v) in [("upper", upper), ("wb", wb), ("bottom", bottom)] {
        cfg.set(&format!("meta.{k}"), Leaf::Text(v));
    }
    for f in &reg.entries {
        if f.part.is_none() {
            continue;
        }
        let section_ok = reg.section_at(f.parent()).is_some_and(|s| s.applicability.holds(&cfg));
        if !section_ok || !f.applicability.holds(&cfg) {
            continue;
        }
        let leaf = match f.kind {
            FieldKind::NormalizedFloat => Leaf::Number(quantize(rng.random::<f64>())),
            FieldKind::Enum => Leaf::Text(pick(&mut rng, &f.enum_values, w.enums.get(&f.path)).to_string()),
            FieldKind::Flag => {
                let p = w.flags.get(&f.path).copied().unwrap_or(w.default_flag_probability);
                Leaf::Flag(rng.random_bool(p))
            }
            FieldKind::RawInt => {
                let (lo, hi) = f.lo_hi();
                Leaf::Number(rng.random_range(lo as i64..=hi as i64) as f64)
            }
        };
        cfg.set(&f.path, leaf);
    }
    prune_config(&cfg, reg)
}

/// One garment; deterministic per seed.
pub fn sample_config(seed: u64, w: &SamplingWeights, reg: &FieldRegistry) -> GarmentConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed));
    let s = &w.shapes;
    let shape = match WeightedIndex::new([s.upper, s.lower, s.wholebody]).map(|d| d.sample(&mut rng)) {
        Ok(0) => Shape::Upper,
        Ok(1) => Shape::Lower,
        _ => Shape::Whole,
    };
    sample_shape(seed, shape, w, reg)
}

/// An upper/lower pair or a single whole-body garment.
pub fn sample_outfit(seed: u64, w: &SamplingWeights, reg: &FieldRegistry) -> OutfitConfig {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed));
    let o = &w.outfit_shapes;
    let pair = WeightedIndex::new([o.pair, o.whole]).map(|d| d.sample(&mut rng) == 0).unwrap_or(true);
    if pair {
        OutfitConfig::Pair {
            upper: sample_shape(stable_hash(seed, 1), Shape::Upper, w, reg),
            lower: sample_shape(stable_hash(seed, 2), Shape::Lower, w, reg),
        }
    } else {
        OutfitConfig::Whole(sample_shape(stable_hash(seed, 3), Shape::Whole, w, reg))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestRecord {
    pub index: u64,
    pub seed: u64,
    pub config: String,
    pub pattern: String,
    pub svg: String,
    pub hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub seed: u64,
    pub n_requested: u64,
    pub n_accepted: u64,
    /// Rejected items per failure code; one code per item (the first failure).
    pub rejections: BTreeMap<String, u64>,
    pub records: Vec<ManifestRecord>,
    pub complete: bool,
}

enum Outcome {
    Accepted { record: ManifestRecord, config: String, pattern: String, svg: String },
    Rejected(String),
}

fn run_one(index: u64, master: u64, w: &SamplingWeights, reg: &FieldRegistry, body: &BodyModel) -> Outcome {
    let seed = stable_hash(master, index);
    let cfg = sample_config(seed, w, reg);
    let pattern = match assemble_garment(&cfg, reg, body) {
        Ok(p) => p,
        Err(e) => return Outcome::Rejected(e.code().to_string()),
    };
    let validity = check_pattern(&pattern);
    if let Some(f) = validity.failures.first() {
        return Outcome::Rejected(f.code.as_str().to_string());
    }
    let stem = format!("{index:06}");
    Outcome::Accepted {
        record: ManifestRecord {
            index,
            seed,
            config: format!("configs/{stem}.json"),
            pattern: format!("patterns/{stem}.json"),
            svg: format!("svg/{stem}.svg"),
            hash: pattern.source_hash.clone(),
        },
        config: canonical_serialize(&cfg, reg),
        pattern: serialize_pattern(&pattern),
        svg: export_svg(&pattern),
    }
}

fn write(path: &Path, text: &str) -> Result<(), SamplerError> {
    std::fs::write(path, text).map_err(|source| SamplerError::Io { path: path.display().to_string(), source })
}

pub fn manifest_json(m: &DatasetManifest) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("manifest serializes");
    s.push('\n');
    s
}

/// Samples, compiles and checks `n` items in parallel and writes accepted ones under `out`.
/// On an IO error the manifest is written with `complete: false` before returning the error.
pub fn run_pipeline(
    n: u64,
    master_seed: u64,
    w: &SamplingWeights,
    reg: &FieldRegistry,
    body: &BodyModel,
    out: &Path,
) -> Result<DatasetManifest, SamplerError> {
    let outcomes: Vec<Outcome> = (0..n).into_par_iter().map(|i| run_one(i, master_seed, w, reg, body)).collect();
    let mut manifest = DatasetManifest {
        seed: master_seed,
        n_requested: n,
        n_accepted: 0,
        rejections: BTreeMap::new(),
        records: vec![],
        complete: true,
    };
    let mut files = vec![];
    for o in outcomes {
        match o {
            Outcome::Accepted { record, config, pattern, svg } => {
                files.push((record.config.clone(), config));
                files.push((record.pattern.clone(), pattern));
                files.push((record.svg.clone(), svg));
                manifest.records.push(record);
            }
            Outcome::Rejected(code) => *manifest.rejections.entry(code).or_default() += 1,
        }
    }
    manifest.n_accepted = manifest.records.len() as u64;

    let io = (|| {
        for d in ["configs", "patterns", "svg"] {
            let p = out.join(d);
            std::fs::create_dir_all(&p).map_err(|source| SamplerError::Io { path: p.display().to_string(), source })?;
        }
        files.par_iter().try_for_each(|(rel, text)| write(&out.join(rel), text))
    })();
    if let Err(e) = io {
        manifest.complete = false;
        let _ = std::fs::create_dir_all(out).and_then(|_| std::fs::write(out.join("manifest.json"), manifest_json(&manifest)));
        return Err(e);
    }
    write(&out.join("manifest.json"), &manifest_json(&manifest))?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditRecord {
    pub source: serde_json::Value,
    pub target: serde_json::Value,
    pub changed_parts: Vec<String>,
    pub prompt: String,
}

fn leaf_text(l: Option<&Leaf>) -> String {
    match l {
        None => "absent".into(),
        Some(Leaf::Number(v)) if v.fract() == 0.0 && v.abs() < 1e15 => format!("{}", *v as i64),
        Some(Leaf::Number(v)) => format_float(*v),
        Some(Leaf::Text(s)) => s.clone(),
        Some(Leaf::Flag(b)) => b.to_string(),
        Some(Leaf::Null) => "null".into(),
        Some(Leaf::Other(v)) => v.to_string(),
    }
}

/// Part owning a leaf: the deepest registry section containing it; meta keys map
/// to the part they select.
fn owner(path: &str, a: &GarmentConfig, b: &GarmentConfig, reg: &FieldRegistry) -> Option<Part> {
    if let Some(key) = path.strip_prefix("meta.") {
        return match key {
            "upper" => Some(Part::Shirt),
            "wb" => Some(Part::Waistband),
            "bottom" => {
                let t = if b.meta("bottom") != "None" { b.meta("bottom") } else { a.meta("bottom") };
                Some(match t {
                    "Pants" => Part::Pants,
                    "FlaredSkirt" => Part::FlaredSkirt,
                    _ => Part::PencilSkirt,
                })
            }
            _ => None,
        };
    }
    let mut cur = path;
    while let Some((parent, _)) = cur.rsplit_once('.') {
        if let Some(s) = reg.section_at(parent) {
            return Some(s.part);
        }
        cur = parent;
    }
    None
}

/// Edit record between two pruned configs with a mechanical per-part leaf diff.
pub fn make_edit_pair(a: &GarmentConfig, b: &GarmentConfig, reg: &FieldRegistry) -> Result<EditRecord, SamplerError> {
    let la: IndexMap<String, &Leaf> = a.leaves().into_iter().collect();
    let lb: IndexMap<String, &Leaf> = b.leaves().into_iter().collect();
    let mut paths: Vec<&String> = la.keys().chain(lb.keys().filter(|k| !la.contains_key(*k))).collect();
    let order = |p: &str| reg.entries.iter().position(|f| f.path == p).unwrap_or(usize::MAX);
    paths.sort_by_key(|p| (order(p), p.to_string()));

    let mut diffs: IndexMap<Part, Vec<String>> = IndexMap::new();
    for p in paths {
        let (x, y) = (la.get(p).copied(), lb.get(p).copied());
        if x == y {
            continue;
        }
        let Some(part) = owner(p, a, b, reg) else { continue };
        let key = match reg.section(part) {
            Some(s) if p.starts_with(&format!("{}.", s.path)) => &p[s.path.len() + 1..],
            _ => p.rsplit('.').next().unwrap_or(p),
        };
        diffs.entry(part).or_default().push(format!("{key} {} → {}", leaf_text(x), leaf_text(y)));
    }
    if diffs.is_empty() {
        return Err(SamplerError::NoDifference);
    }
    let mut parts: Vec<(Part, Vec<String>)> = diffs.into_iter().collect();
    parts.sort_by_key(|(p, _)| reg.sections.iter().position(|s| s.part == *p).unwrap_or(usize::MAX));
    let clauses: Vec<String> = parts
        .iter()
        .map(|(p, d)| format!("the {} to {}", p.display_name(), d.join(" and ")))
        .collect();
    Ok(EditRecord {
        source: a.to_json(),
        target: b.to_json(),
        changed_parts: parts.iter().map(|(p, _)| p.tag().to_string()).collect(),
        prompt: format!("{EDIT_PREFIX}{},{EDIT_SUFFIX}", clauses.join(", ")),
    })
}
