//! The field registry: a declarative table of every configuration field.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::config::{GarmentConfig, NONE};
use super::SchemaError;
use crate::body::Measurement;

/// Number of continuous slots in the numeric vector.
pub const FLOAT_SLOTS: usize = 76;

pub const REGISTRY_VERSION: &str = "patternc-config/1";

/// Garment part taxonomy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Part {
    Shirt,
    Collar,
    Sleeve,
    SleeveCuff,
    Waistband,
    Pants,
    PantCuff,
    PencilSkirt,
    FlaredSkirt,
    /// Waist-seam couplers used when a bodice is joined to a lower garment.
    Wholebody,
}

impl Part {
    pub const ALL: [Part; 10] = [
        Part::Shirt,
        Part::Collar,
        Part::Sleeve,
        Part::SleeveCuff,
        Part::Waistband,
        Part::Pants,
        Part::PantCuff,
        Part::PencilSkirt,
        Part::FlaredSkirt,
        Part::Wholebody,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Part::Shirt => "shirt",
            Part::Collar => "collar",
            Part::Sleeve => "sleeve",
            Part::SleeveCuff => "sleeve_cuff",
            Part::Waistband => "waistband",
            Part::Pants => "pants",
            Part::PantCuff => "pant_cuff",
            Part::PencilSkirt => "pencil_skirt",
            Part::FlaredSkirt => "flared_skirt",
            Part::Wholebody => "wholebody",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Part> {
        Part::ALL.into_iter().find(|p| p.tag() == tag)
    }

    /// Human-readable name used in edit prompts.
    pub fn display_name(self) -> &'static str {
        match self {
            Part::Shirt => "shirt main body",
            Part::Collar => "collar",
            Part::Sleeve => "sleeves",
            Part::SleeveCuff => "sleeve cuffs",
            Part::Waistband => "waistband",
            Part::Pants => "pant legs",
            Part::PantCuff => "pant cuffs",
            Part::PencilSkirt => "pencil skirt",
            Part::FlaredSkirt => "flared skirt",
            Part::Wholebody => "waist seam",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FieldKind {
    Enum,
    NormalizedFloat,
    RawInt,
    Flag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Unit {
    Cm,
    Deg,
    Ratio,
}

/// What a raw float value is measured in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Absolute(Unit),
    /// Multiple of a body measurement.
    Body(Measurement),
}

/// Predicate over `meta` deciding whether a field or section applies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Applicability {
    Always,
    MetaIn { key: String, values: Vec<String> },
    MetaNotIn { key: String, values: Vec<String> },
    All(Vec<Applicability>),
    Any(Vec<Applicability>),
}

impl Applicability {
    pub fn holds(&self, cfg: &GarmentConfig) -> bool {
        match self {
            Applicability::Always => true,
            Applicability::MetaIn { key, values } => values.iter().any(|v| v == cfg.meta(key)),
            Applicability::MetaNotIn { key, values } => !values.iter().any(|v| v == cfg.meta(key)),
            Applicability::All(ps) => ps.iter().all(|p| p.holds(cfg)),
            Applicability::Any(ps) => ps.iter().any(|p| p.holds(cfg)),
        }
    }

    fn meta_keys(&self, out: &mut Vec<String>) {
        match self {
            Applicability::Always => {}
            Applicability::MetaIn { key, .. } | Applicability::MetaNotIn { key, .. } => out.push(key.clone()),
            Applicability::All(ps) | Applicability::Any(ps) => ps.iter().for_each(|p| p.meta_keys(out)),
        }
    }

    fn present(key: &str) -> Self {
        Applicability::MetaNotIn { key: key.into(), values: vec![NONE.into()] }
    }

    fn is(key: &str, value: &str) -> Self {
        Applicability::MetaIn { key: key.into(), values: vec![value.into()] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionDescriptor {
    pub part: Part,
    /// Dotted location of the block, e.g. `pants.cuff`.
    pub path: String,
    pub applicability: Applicability,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldDescriptor {
    pub path: String,
    pub kind: FieldKind,
    /// Owning part; `None` for `meta.*`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub part: Option<Part>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub enum_values: Vec<String>,
    /// Raw range `(lo, hi)` for normalized floats, integer bounds for raw ints.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub anchor: Option<Anchor>,
    pub applicability: Applicability,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector_slot: Option<usize>,
    pub default: Value,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub doc: String,
}

impl FieldDescriptor {
    /// Last path component.
    pub fn key(&self) -> &str {
        self.path.rsplit('.').next().unwrap_or(&self.path)
    }

    /// Parent block path, e.g. `pants.cuff` for `pants.cuff.type`.
    pub fn parent(&self) -> &str {
        self.path.rsplit_once('.').map(|(p, _)| p).unwrap_or("")
    }

    pub fn lo_hi(&self) -> (f64, f64) {
        self.range.unwrap_or((0.0, 1.0))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldRegistry {
    pub version: String,
    pub sections: Vec<SectionDescriptor>,
    pub entries: Vec<FieldDescriptor>,
}

impl FieldRegistry {
    /// Loads a registry document and checks its invariants.
    pub fn from_json_str(text: &str) -> Result<Self, SchemaError> {
        let reg: FieldRegistry =
            serde_json::from_str(text).map_err(|e| SchemaError::Registry(format!("unreadable registry: {e}")))?;
        reg.check()?;
        Ok(reg)
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("registry serializes")
    }

    pub fn field(&self, path: &str) -> Option<&FieldDescriptor> {
        self.entries.iter().find(|f| f.path == path)
    }

    pub fn section(&self, part: Part) -> Option<&SectionDescriptor> {
        self.sections.iter().find(|s| s.part == part)
    }

    pub fn section_at(&self, path: &str) -> Option<&SectionDescriptor> {
        self.sections.iter().find(|s| s.path == path)
    }

    pub fn fields_of(&self, part: Part) -> impl Iterator<Item = &FieldDescriptor> {
        self.entries.iter().filter(move |f| f.part == Some(part))
    }

    /// Normalized-float descriptors ordered by slot.
    pub fn float_slots(&self) -> Vec<&FieldDescriptor> {
        let mut v: Vec<&FieldDescriptor> =
            self.entries.iter().filter(|f| f.kind == FieldKind::NormalizedFloat).collect();
        v.sort_by_key(|f| f.vector_slot);
        v
    }

    pub fn slot_of(&self, path: &str) -> Option<usize> {
        self.field(path).and_then(|f| f.vector_slot)
    }

    /// Verifies the structural invariants every registry must satisfy.
    pub fn check(&self) -> Result<(), SchemaError> {
        let bad = |m: String| Err(SchemaError::Registry(m));
        let mut seen = std::collections::HashSet::new();
        let mut slots = vec![false; FLOAT_SLOTS];
        let mut floats = 0;
        for f in &self.entries {
            if !seen.insert(f.path.as_str()) {
                return bad(format!("duplicate path {}", f.path));
            }
            let mut keys = Vec::new();
            f.applicability.meta_keys(&mut keys);
            if let Some(k) = keys.iter().find(|k| self.field(&format!("meta.{k}")).is_none()) {
                return bad(format!("{} applicability references unknown meta key {k}", f.path));
            }
            match f.kind {
                FieldKind::Enum => {
                    if f.enum_values.len() < 2 {
                        return bad(format!("{} needs at least two enum values", f.path));
                    }
                    if !f.default.as_str().is_some_and(|d| f.enum_values.iter().any(|v| v == d)) {
                        return bad(format!("{} default is not an enum value", f.path));
                    }
                }
                FieldKind::NormalizedFloat => {
                    floats += 1;
                    let Some((lo, hi)) = f.range else { return bad(format!("{} has no range", f.path)) };
                    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                        return bad(format!("{} has an empty range", f.path));
                    }
                    if f.anchor.is_none() {
                        return bad(format!("{} has no anchor", f.path));
                    }
                    if !f.default.as_f64().is_some_and(|d| (0.0..=1.0).contains(&d)) {
                        return bad(format!("{} default outside [0,1]", f.path));
                    }
                    match f.vector_slot {
                        Some(s) if s < FLOAT_SLOTS && !slots[s] => slots[s] = true,
                        _ => return bad(format!("{} has a missing or duplicate vector slot", f.path)),
                    }
                }
                FieldKind::RawInt => {
                    let Some((lo, hi)) = f.range else { return bad(format!("{} has no bounds", f.path)) };
                    if !f.default.as_f64().is_some_and(|d| d.fract() == 0.0 && d >= lo && d <= hi) {
                        return bad(format!("{} default outside integer bounds", f.path));
                    }
                }
                FieldKind::Flag => {
                    if !f.default.is_boolean() {
                        return bad(format!("{} default is not a flag", f.path));
                    }
                }
            }
            if f.kind != FieldKind::NormalizedFloat && f.vector_slot.is_some() {
                return bad(format!("{} has a vector slot but is not a float", f.path));
            }
        }
        if floats != FLOAT_SLOTS {
            return bad(format!("expected {FLOAT_SLOTS} float slots, found {floats}"));
        }
        Ok(())
    }
}

struct Builder {
    sections: Vec<SectionDescriptor>,
    entries: Vec<FieldDescriptor>,
    current: Option<(Part, String, Applicability)>,
    next_slot: usize,
}

impl Builder {
    fn section(&mut self, part: Part, path: &str, applicability: Applicability) -> &mut Self {
        self.sections.push(SectionDescriptor { part, path: path.into(), applicability: applicability.clone() });
        self.current = Some((part, path.into(), applicability));
        self
    }

    fn push(&mut self, mut f: FieldDescriptor) -> &mut Self {
        let (part, prefix, app) = self.current.clone().expect("section first");
        f.path = format!("{prefix}.{}", f.path);
        f.part = Some(part);
        f.applicability = app;
        self.entries.push(f);
        self
    }

    fn float(&mut self, key: &str, lo: f64, hi: f64, anchor: Anchor, default: f64, doc: &str) -> &mut Self {
        let slot = self.next_slot;
        self.next_slot += 1;
        self.push(FieldDescriptor {
            path: key.into(),
            kind: FieldKind::NormalizedFloat,
            part: None,
            enum_values: vec![],
            range: Some((lo, hi)),
            anchor: Some(anchor),
            applicability: Applicability::Always,
            vector_slot: Some(slot),
            default: json!(default),
            doc: doc.into(),
        })
    }

    fn int(&mut self, key: &str, lo: i64, hi: i64, default: i64, doc: &str) -> &mut Self {
        self.push(FieldDescriptor {
            path: key.into(),
            kind: FieldKind::RawInt,
            part: None,
            enum_values: vec![],
            range: Some((lo as f64, hi as f64)),
            anchor: None,
            applicability: Applicability::Always,
            vector_slot: None,
            default: json!(default),
            doc: doc.into(),
        })
    }

    fn choice(&mut self, key: &str, values: &[&str], default: &str, doc: &str) -> &mut Self {
        self.push(FieldDescriptor {
            path: key.into(),
            kind: FieldKind::Enum,
            part: None,
            enum_values: values.iter().map(|s| s.to_string()).collect(),
            range: None,
            anchor: None,
            applicability: Applicability::Always,
            vector_slot: None,
            default: json!(default),
            doc: doc.into(),
        })
    }

    fn flag(&mut self, key: &str, default: bool, doc: &str) -> &mut Self {
        self.push(FieldDescriptor {
            path: key.into(),
            kind: FieldKind::Flag,
            part: None,
            enum_values: vec![],
            range: None,
            anchor: None,
            applicability: Applicability::Always,
            vector_slot: None,
            default: json!(default),
            doc: doc.into(),
        })
    }

    fn meta(&mut self, key: &str, values: &[&str], doc: &str) -> &mut Self {
        self.entries.push(FieldDescriptor {
            path: format!("meta.{key}"),
            kind: FieldKind::Enum,
            part: None,
            enum_values: values.iter().map(|s| s.to_string()).collect(),
            range: None,
            anchor: None,
            applicability: Applicability::Always,
            vector_slot: None,
            default: json!(NONE),
            doc: doc.into(),
        });
        self
    }
}

pub const CUFF_TYPES: [&str; 4] = ["None", "Band", "Fold", "Flare"];
pub const COLLAR_STYLES: [&str; 4] = ["Crew", "VNeck", "Turtle", "Collarless"];
pub const SIDE_CUTS: [&str; 3] = ["None", "Sun", "Scallop"];
pub const UPPER_TYPES: [&str; 3] = ["None", "Shirt", "FittedShirt"];
pub const WAISTBAND_TYPES: [&str; 3] = ["None", "StraightWB", "FittedWB"];
pub const BOTTOM_TYPES: [&str; 4] = ["None", "PencilSkirt", "FlaredSkirt", "Pants"];

impl Default for FieldRegistry {
    /// The shipped table. See `docs/registry.md` for the meaning of each field.
    fn default() -> Self {
        use Anchor::{Absolute, Body};
        use Measurement as M;
        use Unit::{Cm, Deg, Ratio};
        let r = Absolute(Ratio);
        let upper = Applicability::present("upper");
        let mut b = Builder { sections: vec![], entries: vec![], current: None, next_slot: 0 };
        b.meta("upper", &UPPER_TYPES, "upper-body garment type")
            .meta("wb", &WAISTBAND_TYPES, "waistband type")
            .meta("bottom", &BOTTOM_TYPES, "lower-body garment type");

        b.section(Part::Shirt, "shirt", upper.clone())
            .float("length", 0.6, 1.5, Body(M::TorsoLength), 0.4, "shoulder line to hem")
            .float("width", 1.0, 1.4, Body(M::Bust), 0.3, "chest circumference with ease")
            .float("flare", 0.8, 1.5, r, 0.3, "hem width over chest width")
            .float("waist_shaping", 0.0, 0.25, r, 0.3, "side-seam inset at the waist vertex, fraction of a chest quarter")
            .float("waist_position", 0.3, 0.7, r, 0.5, "waist vertex position along the side seam")
            .float("shoulder_width", 0.8, 1.2, Body(M::ShoulderWidth), 0.5, "shoulder point to shoulder point")
            .float("shoulder_slope", 0.0, 25.0, Absolute(Deg), 0.5, "shoulder seam drop angle")
            .float("armhole_depth", 0.3, 0.5, Body(M::TorsoLength), 0.5, "shoulder line to underarm")
            .float("armhole_curve", 0.0, 0.8, r, 0.5, "armhole scoop")
            .float("hem_curve", 0.0, 0.08, Body(M::TorsoLength), 0.2, "hem dip at the centre line")
            .float("front_fraction", 0.45, 0.55, r, 0.5, "front share of the chest")
            .float("asym_amount", 0.0, 0.15, Body(M::TorsoLength), 0.5, "hem tilt when asymmetric")
            .flag("open_front", false, "split the front into two unstitched halves")
            .flag("asymmetric", false, "tilted hem, longer on the left");

        b.section(Part::Collar, "collar", upper.clone())
            .choice("style", &COLLAR_STYLES, "Crew", "neckline style")
            .float("width", 0.3, 0.5, Body(M::Neck), 0.5, "neck opening width")
            .float("front_depth", 0.1, 0.5, Body(M::Neck), 0.3, "front neckline depth")
            .float("back_depth", 0.02, 0.12, Body(M::Neck), 0.3, "back neckline depth")
            .float("curve", 0.2, 0.9, r, 0.5, "round-neck fullness")
            .float("v_curve", 0.0, 0.15, r, 0.0, "bow of V-neck edges")
            .float("band_height", 0.1, 0.4, Body(M::Neck), 0.5, "turtle band height")
            .float("band_taper", 0.0, 0.5, r, 0.3, "turtle band side inset, fraction of height")
            .float("band_curve", 0.0, 0.1, r, 0.0, "turtle band top bow");

        b.section(Part::Sleeve, "sleeve", upper.clone())
            .flag("sleeveless", false, "omit sleeve panels")
            .float("length", 0.1, 1.0, Body(M::ArmLength), 0.5, "cap base to sleeve end")
            .float("cap_height", 0.2, 0.7, r, 0.5, "cap height over armhole length")
            .float("cap_curve", 0.0, 0.2, r, 0.5, "cap bulge")
            .float("end_width", 0.3, 1.2, r, 0.5, "sleeve end over bicep width")
            .float("end_curve", 0.0, 0.1, Body(M::ArmCircumference), 0.2, "sleeve end dip")
            .float("elbow_position", 0.4, 0.6, r, 0.5, "elbow vertex along the underarm seam")
            .float("elbow_width", 0.7, 1.0, r, 0.5, "elbow width over bicep width")
            .float("angle", 0.0, 60.0, Absolute(Deg), 0.5, "arm drop angle (placement)")
            .float("standoff", 0.0, 0.3, Body(M::ArmCircumference), 0.3, "distance from the body (placement)");

        b.section(Part::SleeveCuff, "sleeve.cuff", upper.clone())
            .choice("type", &CUFF_TYPES, "None", "cuff style")
            .float("length", 0.02, 0.15, Body(M::ArmLength), 0.5, "cuff height")
            .float("tightness", 0.7, 1.1, r, 0.5, "cuff bottom over top")
            .float("flare", 0.0, 0.6, r, 0.3, "extra bottom width for Flare cuffs")
            .float("bottom_curve", 0.0, 0.1, r, 0.0, "bottom edge bow")
            .float("fold_ratio", 0.0, 1.0, r, 0.5, "extra height for Fold cuffs");

        b.section(Part::Waistband, "waistband", Applicability::present("wb"))
            .float("waist", 0.9, 1.3, Body(M::Waist), 0.25, "waist line length")
            .float("width", 0.85, 1.05, r, 0.75, "top over bottom length (FittedWB)")
            .int("height", 2, 20, 5, "band height in cm")
            .float("rise", 0.0, 1.0, r, 0.5, "values above 0.5 raise the waist line");

        let pants = Applicability::is("bottom", "Pants");
        b.section(Part::Pants, "pants", pants.clone())
            .float("length", 0.15, 1.0, Body(M::LegLength), 0.8, "crotch to leg end")
            .float("width", 1.0, 1.3, Body(M::Hips), 0.3, "hip circumference with ease")
            .float("flare", 0.6, 1.4, r, 0.5, "leg end over knee width; below 0.5 normalized narrows the leg")
            .float("rise", 0.5, 1.0, r, 1.0, "1 sits at the natural waist")
            .float("knee_width", 0.6, 0.95, r, 0.5, "knee over thigh width")
            .float("crotch_ext", 0.04, 0.1, Body(M::Hips), 0.5, "front crotch extension")
            .float("back_crotch_extra", 0.02, 0.08, Body(M::Hips), 0.5, "extra back crotch extension")
            .float("waist_ease", 1.0, 1.15, Body(M::Waist), 0.3, "waist line length without a waistband")
            .float("hip_curve", 0.0, 0.5, r, 0.5, "outseam hip bow")
            .float("crotch_curve", 0.3, 0.9, r, 0.5, "crotch scoop");

        b.section(Part::PantCuff, "pants.cuff", pants)
            .choice("type", &CUFF_TYPES, "None", "cuff style")
            .float("length", 0.02, 0.15, Body(M::LegLength), 0.5, "cuff height")
            .float("tightness", 0.7, 1.1, r, 0.5, "cuff bottom over top")
            .float("flare", 0.0, 0.6, r, 0.3, "extra bottom width for Flare cuffs")
            .float("bottom_curve", 0.0, 0.1, r, 0.0, "bottom edge bow")
            .float("fold_ratio", 0.0, 1.0, r, 0.5, "extra height for Fold cuffs");

        b.section(Part::PencilSkirt, "pencil_skirt", Applicability::is("bottom", "PencilSkirt"))
            .float("length", 30.0, 105.0, Absolute(Cm), 0.4, "waist line to hem centre")
            .float("rise", 0.5, 1.0, r, 1.0, "1 sits at the natural waist")
            .float("flare", 0.7, 1.5, r, 0.4, "hem width over hip width")
            .int("low_angle", 0, 20, 5, "hem side rise in degrees")
            .float("front_slit", 0.0, 1.0, r, 0.0, "centre-front slit height")
            .float("back_slit", 0.0, 1.0, r, 0.0, "centre-back slit height")
            .float("left_slit", 0.0, 1.0, r, 0.0, "left side slit height")
            .float("right_slit", 0.0, 1.0, r, 0.0, "right side slit height")
            .choice("style_side_cut", &SIDE_CUTS, "None", "lower side seam shape")
            .float("hip_ease", 1.0, 1.15, Body(M::Hips), 0.3, "hip circumference with ease")
            .float("cut_depth", 0.0, 0.08, Body(M::Hips), 0.5, "side cut depth")
            .float("hip_curve", 0.0, 0.5, r, 0.5, "waist-to-hip bow");

        b.section(Part::FlaredSkirt, "flared_skirt", Applicability::is("bottom", "FlaredSkirt"))
            .float("length", 0.3, 1.2, Body(M::LegLength), 0.5, "waist line to hem")
            .float("flare", 0.2, 3.0, r, 0.3, "hem width is top width times (1 + flare)")
            .float("rise", 0.5, 1.0, r, 1.0, "1 sits at the natural waist")
            .float("hem_curve", 0.0, 0.3, r, 0.3, "hem bow")
            .float("hem_dip", 0.0, 0.15, r, 0.0, "hem centre drop, fraction of length")
            .float("asym_amount", 0.0, 0.3, r, 0.5, "left hem drop when asymmetric, fraction of length")
            .float("front_fraction", 0.45, 0.55, r, 0.5, "front share of the waist line")
            .float("waist_curve", 0.0, 0.1, r, 0.0, "waist edge dip")
            .float("side_curve", 0.0, 0.1, r, 0.0, "side seam bow")
            .flag("asymmetric", false, "longer on the left");

        b.section(
            Part::Wholebody,
            "wholebody",
            Applicability::All(vec![upper, Applicability::present("bottom")]),
        )
        .float("waist_ease", 0.95, 1.3, Body(M::Waist), 0.3, "waist seam length without a waistband")
        .float("waist_drop", -0.1, 0.2, Body(M::TorsoLength), 1.0 / 3.0, "waist seam below the natural waist")
        .float("front_fraction", 0.45, 0.55, r, 0.5, "front share of the waist seam")
        .float("bodice_blouse", 0.0, 0.1, Body(M::TorsoLength), 0.0, "extra bodice length")
        .float("waist_shaping", 0.0, 0.2, r, 0.3, "bodice waist inset");

        FieldRegistry { version: REGISTRY_VERSION.into(), sections: b.sections, entries: b.entries }
    }
}
