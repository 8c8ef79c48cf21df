//! Parametric part builders. Each turns one config block into panels plus
//! named stitch interfaces.
//!
//! Conventions shared by every builder:
//! - panel-local frames put `x = 0` on the centre line and `y = 0` on the shoulder
//!   line (upper parts) or the natural waist (lower parts);
//! - `_l` panels and half-edges sit at `+x`, `_r` ones are their mirror images;
//! - waist-line interfaces list four half-edges in the order
//!   `[front_l, front_r, back_l, back_r]`;
//! - seams that are sewn to each other are drafted from the same offset vectors,
//!   so matching lengths hold by construction rather than by tuning.

mod lower;
mod upper;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::assembler::{EdgeRef, Stitch};
use crate::body::BodyModel;
use crate::geometry::{edge_length, Edge, Panel, Placement};
use crate::schema::{denormalize_config, fill_defaults, Anchor, FieldRegistry, GarmentConfig, Part, SchemaError};

pub use lower::waist_raise;
pub(crate) use lower::bottom as lower_bottom;

/// Shortest edge a builder may emit, in cm.
pub const MIN_EDGE_LENGTH: f64 = 0.1;

/// Normalized slit values below this produce no opening.
pub const SLIT_THRESHOLD: f64 = 0.02;

/// Normalized waistband rise above which the waist line is raised.
pub const HIGH_WAIST_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BuildError {
    #[error("unsupported part kind {0}")]
    UnsupportedKind(String),
    #[error("degenerate geometry in {panel}: edge {edge} is {length:.4} cm")]
    DegenerateGeometry { panel: String, edge: usize, length: f64 },
    #[error(transparent)]
    Schema(#[from] SchemaError),
}

impl BuildError {
    pub fn code(&self) -> &'static str {
        match self {
            BuildError::UnsupportedKind(_) => "UNSUPPORTED_KIND",
            BuildError::DegenerateGeometry { .. } => "DEGENERATE_GEOMETRY",
            BuildError::Schema(e) => e.code(),
        }
    }
}

/// Panels of one part, their named interfaces and the seams internal to the part.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct PanelSet {
    pub panels: Vec<Panel>,
    pub interfaces: IndexMap<String, Vec<EdgeRef>>,
    pub stitches: Vec<Stitch>,
}

impl PanelSet {
    pub fn panel(&self, name: &str) -> Option<&Panel> {
        self.panels.iter().find(|p| p.name == name)
    }

    pub fn edge(&self, r: &EdgeRef) -> Option<&Edge> {
        self.panel(&r.panel)?.edges.get(r.edge)
    }

    /// Lengths of the edges behind an interface.
    pub fn interface_lengths(&self, name: &str) -> Option<Vec<f64>> {
        self.interfaces
            .get(name)?
            .iter()
            .map(|r| self.edge(r).map(edge_length))
            .collect()
    }

    fn add(&mut self, lp: LabeledPanel) -> LabeledPanel {
        self.panels.push(lp.panel.clone());
        lp
    }

    fn stitch_pairs(&mut self, a: &str, b: &str, reversed: bool) {
        let (Some(xs), Some(ys)) = (self.interfaces.get(a), self.interfaces.get(b)) else { return };
        assert_eq!(xs.len(), ys.len(), "interfaces {a} and {b} differ in segment count");
        let pairs: Vec<Stitch> = xs
            .iter()
            .zip(ys)
            .map(|(x, y)| Stitch { a: x.clone(), b: y.clone(), reversed })
            .collect();
        self.stitches.extend(pairs);
    }
}

/// Panel under construction, with a label per edge.
#[derive(Debug, Clone)]
pub(crate) struct LabeledPanel {
    pub panel: Panel,
    pub labels: Vec<String>,
}

impl LabeledPanel {
    pub fn index(&self, label: &str) -> usize {
        self.labels
            .iter()
            .position(|l| l == label)
            .unwrap_or_else(|| panic!("panel {} has no edge labelled {label}", self.panel.name))
    }

    pub fn has(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn refs(&self, labels: &[&str]) -> Vec<EdgeRef> {
        labels
            .iter()
            .filter(|l| self.has(l))
            .map(|l| EdgeRef { panel: self.panel.name.clone(), edge: self.index(l) })
            .collect()
    }

    /// Edges whose labels start with `prefix`, in loop order.
    pub fn refs_with_prefix(&self, prefix: &str) -> Vec<EdgeRef> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| l.starts_with(prefix))
            .map(|(i, _)| EdgeRef { panel: self.panel.name.clone(), edge: i })
            .collect()
    }

    pub fn mirrored(&self, name: &str, role: &str) -> LabeledPanel {
        LabeledPanel {
            panel: self.panel.mirrored(name, role),
            labels: self.labels.iter().rev().map(|l| swap_side(l)).collect(),
        }
    }
}

pub(crate) fn swap_side(label: &str) -> String {
    if let Some(stem) = label.strip_suffix("_l") {
        format!("{stem}_r")
    } else if let Some(stem) = label.strip_suffix("_r") {
        format!("{stem}_l")
    } else {
        label.to_string()
    }
}

/// Labelled open chain of edges.
#[derive(Debug, Clone, Default)]
pub(crate) struct Chain {
    pub edges: Vec<Edge>,
    pub labels: Vec<String>,
}

impl Chain {
    pub fn push(&mut self, label: &str, e: Edge) -> &mut Self {
        self.edges.push(e);
        self.labels.push(label.to_string());
        self
    }

    pub fn end(&self) -> crate::geometry::Point {
        self.edges.last().expect("non-empty chain").end()
    }

    /// Appends the mirror image of `other` (reversed, `x` negated, `_l` ↔ `_r`).
    pub fn append_mirror_of(&mut self, other: &Chain) -> &mut Self {
        for (e, l) in other.edges.iter().zip(&other.labels).rev() {
            self.edges.push(e.reversed().map(crate::geometry::Point::mirror_x));
            self.labels.push(swap_side(l));
        }
        self
    }

    pub fn into_panel(self, name: &str, role: &str, placement: Placement) -> Result<LabeledPanel, BuildError> {
        let panel = Panel::new(name, role, self.edges, placement);
        check_edges(&panel)?;
        Ok(LabeledPanel { panel, labels: self.labels })
    }
}

fn check_edges(p: &Panel) -> Result<(), BuildError> {
    for (i, e) in p.edges.iter().enumerate() {
        let length = edge_length(e);
        if !e.is_finite() || !(length >= MIN_EDGE_LENGTH) {
            return Err(BuildError::DegenerateGeometry { panel: p.name.clone(), edge: i, length });
        }
    }
    Ok(())
}

/// Resolved, raw-unit view of a garment config for the builders.
pub struct PartInput<'a> {
    /// Denormalized config with defaults filled in.
    pub cfg: GarmentConfig,
    pub reg: &'a FieldRegistry,
    pub body: &'a BodyModel,
}

impl<'a> PartInput<'a> {
    /// From a validated, normalized config.
    pub fn new(normalized: &GarmentConfig, reg: &'a FieldRegistry, body: &'a BodyModel) -> Result<Self, SchemaError> {
        let cfg = denormalize_config(&fill_defaults(normalized, reg), reg)?;
        Ok(PartInput { cfg, reg, body })
    }

    /// Raw value of a field; registry default when absent.
    pub fn value(&self, path: &str) -> f64 {
        if let Some(v) = self.cfg.number(path) {
            return v;
        }
        let f = self.reg.field(path).unwrap_or_else(|| panic!("unknown field {path}"));
        let d = f.default.as_f64().unwrap_or(0.0);
        match f.range {
            Some((lo, hi)) if f.kind == crate::schema::FieldKind::NormalizedFloat => lo + d * (hi - lo),
            _ => d,
        }
    }

    /// Raw value as a length in cm, applying the body anchor.
    pub fn cm(&self, path: &str) -> f64 {
        let v = self.value(path);
        match self.reg.field(path).and_then(|f| f.anchor) {
            Some(Anchor::Body(m)) => v * self.body.get(m),
            _ => v,
        }
    }

    /// Normalized value, for thresholds defined on the `[0, 1]` scale.
    pub fn normalized(&self, path: &str) -> f64 {
        let f = self.reg.field(path).unwrap_or_else(|| panic!("unknown field {path}"));
        let (lo, hi) = f.lo_hi();
        (self.value(path) - lo) / (hi - lo)
    }

    pub fn flag(&self, path: &str) -> bool {
        self.cfg
            .flag(path)
            .or_else(|| self.reg.field(path).and_then(|f| f.default.as_bool()))
            .unwrap_or(false)
    }

    pub fn text(&self, path: &str) -> &str {
        self.cfg
            .text(path)
            .or_else(|| self.reg.field(path).and_then(|f| f.default.as_str()))
            .unwrap_or("None")
    }

    pub fn meta(&self, key: &str) -> &str {
        self.cfg.meta(key)
    }
}

/// What a builder knows about neighbouring parts. Empty fields fall back to
/// values derived from the config and body alone.
#[derive(Debug, Clone, Default)]
pub struct PartContext {
    /// Target waist-line circumference for lower parts and waistbands, in cm.
    pub waist_total: Option<f64>,
    /// Height of the waist line above the natural waist, in cm.
    pub raise: f64,
    /// Front share of the waist line.
    pub front_fraction: Option<f64>,
    /// Lengths of neighbouring interfaces this part must match, by interface name
    /// on the neighbour (`waist_top`, `hem`, `armhole_l`, `end_l`, `leg_end_l`, `neckline`, ...).
    pub openings: IndexMap<String, Vec<f64>>,
}

/// Builds one part of the garment.
pub fn build_part(kind: Part, input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    match kind {
        Part::Shirt => upper::shirt(input, ctx),
        Part::Collar => upper::collar(input, ctx),
        Part::Sleeve => upper::sleeves(input, ctx),
        Part::SleeveCuff => upper::sleeve_cuffs(input, ctx),
        Part::Waistband => lower::waistband(input, ctx),
        Part::Pants => lower::pants(input, ctx),
        Part::PantCuff => lower::pant_cuffs(input, ctx),
        Part::PencilSkirt => lower::pencil_skirt(input, ctx),
        Part::FlaredSkirt => lower::flared_skirt(input, ctx),
        Part::Wholebody => Err(BuildError::UnsupportedKind(kind.tag().into())),
    }
}

/// By tag, for callers holding strings.
pub fn build_part_by_tag(tag: &str, input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    let kind = Part::from_tag(tag).ok_or_else(|| BuildError::UnsupportedKind(tag.into()))?;
    build_part(kind, input, ctx)
}

/// Interfaces a builder exposes for other parts. Parts that can legitimately
/// emit no panels (non-turtle collars, sleeveless sleeves, `None` cuffs) expose
/// them only when panels exist.
pub fn part_interfaces(kind: Part) -> Result<Vec<&'static str>, BuildError> {
    Ok(match kind {
        Part::Shirt => vec!["hem", "armhole_l", "armhole_r", "neckline"],
        Part::Collar => vec!["neckline"],
        Part::Sleeve => vec!["cap_l", "cap_r", "end_l", "end_r"],
        Part::SleeveCuff => vec!["top_l", "top_r"],
        Part::Waistband => vec!["waist_top", "waist_bottom"],
        Part::Pants => vec!["waist_top", "leg_end_l", "leg_end_r"],
        Part::PantCuff => vec!["top_l", "top_r"],
        Part::PencilSkirt | Part::FlaredSkirt => {
            vec!["waist_top", "side_seam_front_l", "side_seam_front_r", "side_seam_back_l", "side_seam_back_r"]
        }
        Part::Wholebody => return Err(BuildError::UnsupportedKind(kind.tag().into())),
    })
}

/// Solves `f(x) = target` for increasing `f` on `[lo, hi]` by bisection.
pub(crate) fn solve_increasing(f: impl Fn(f64) -> f64, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
    }
    0.5 * (lo + hi)
}
