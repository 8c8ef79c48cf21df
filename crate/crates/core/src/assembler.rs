//! Composes part builders into a full pattern, checks it, and exports it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::body::BodyModel;
use crate::components::{build_part, BuildError, PanelSet, PartContext, PartInput};
use crate::geometry::{edge_length, panel_is_simple, Edge, Panel, Point};
use crate::schema::{canonical_serialize, FieldRegistry, GarmentConfig, OutfitConfig, Part, SchemaError};

pub const PATTERN_VERSION: &str = "patternc/1";

/// Default relative tolerance for stitched edge lengths.
pub const STITCH_TOLERANCE: f64 = 0.02;

/// Edge `edge` of the panel called `panel`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub panel: String,
    pub edge: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stitch {
    pub a: EdgeRef,
    pub b: EdgeRef,
    /// The two edges run in opposite directions along the seam.
    pub reversed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pattern {
    pub version: String,
    pub panels: Vec<Panel>,
    pub stitches: Vec<Stitch>,
    /// SHA-256 of the canonical config text.
    pub source_hash: String,
    pub body: BodyModel,
}

impl Pattern {
    pub fn empty(body: BodyModel) -> Pattern {
        Pattern { version: PATTERN_VERSION.into(), panels: vec![], stitches: vec![], source_hash: String::new(), body }
    }

    pub fn panel(&self, name: &str) -> Option<&Panel> {
        self.panels.iter().find(|p| p.name == name)
    }

    pub fn edge(&self, r: &EdgeRef) -> Option<&Edge> {
        self.panel(&r.panel)?.edges.get(r.edge)
    }

    /// Stitch touching the given edge, if any.
    pub fn stitch_of(&self, r: &EdgeRef) -> Option<&Stitch> {
        self.stitches.iter().find(|s| &s.a == r || &s.b == r)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AssembleError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Schema(#[from] SchemaError),
    #[error("composition error: {0}")]
    Composition(String),
}

impl AssembleError {
    pub fn code(&self) -> &'static str {
        match self {
            AssembleError::Build(e) => e.code(),
            AssembleError::Schema(e) => e.code(),
            AssembleError::Composition(_) => "COMPOSITION_ERROR",
        }
    }
}

#[derive(Debug, Default)]
struct Assembly {
    panels: Vec<Panel>,
    stitches: Vec<Stitch>,
}

impl Assembly {
    fn absorb(&mut self, ps: &PanelSet) {
        self.panels.extend(ps.panels.iter().cloned());
        self.stitches.extend(ps.stitches.iter().cloned());
    }

    /// Sews interface `an` of `a` to interface `bn` of `b`, segment by segment.
    fn join(&mut self, a: &PanelSet, an: &str, b: &PanelSet, bn: &str) -> Result<(), AssembleError> {
        let xs = a.interfaces.get(an).ok_or_else(|| AssembleError::Composition(format!("missing interface {an}")))?;
        let ys = b.interfaces.get(bn).ok_or_else(|| AssembleError::Composition(format!("missing interface {bn}")))?;
        if xs.len() != ys.len() {
            return Err(AssembleError::Composition(format!(
                "{an} has {} segments but {bn} has {}",
                xs.len(),
                ys.len()
            )));
        }
        for (x, y) in xs.iter().zip(ys) {
            self.stitches.push(Stitch { a: x.clone(), b: y.clone(), reversed: true });
        }
        Ok(())
    }
}

fn lengths(ps: &PanelSet, name: &str) -> Result<Vec<f64>, AssembleError> {
    ps.interface_lengths(name).ok_or_else(|| AssembleError::Composition(format!("missing interface {name}")))
}

/// Hex SHA-256 of a string.
pub fn sha256_hex(text: &str) -> String {
    Sha256::digest(text.as_bytes()).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

/// Compiles a validated, pruned, normalized config.
pub fn assemble_garment(cfg: &GarmentConfig, reg: &FieldRegistry, body: &BodyModel) -> Result<Pattern, AssembleError> {
    let input = PartInput::new(cfg, reg, body)?;
    let upper = input.meta("upper") != "None";
    let has_wb = input.meta("wb") != "None";
    let mut asm = Assembly::default();

    // Lower stack, bottom-up: bottom, its cuffs, then the waistband.
    let mut lower_top: Option<PanelSet> = None;
    if let Some((bottom, ctx)) = crate::components::lower_bottom(&input)? {
        asm.absorb(&bottom);
        if input.meta("bottom") == "Pants" {
            let mut cctx = PartContext::default();
            for k in ["leg_end_l", "leg_end_r"] {
                cctx.openings.insert(k.into(), lengths(&bottom, k)?);
            }
            let cuffs = build_part(Part::PantCuff, &input, &cctx)?;
            if !cuffs.panels.is_empty() {
                asm.absorb(&cuffs);
                asm.join(&cuffs, "top_l", &bottom, "leg_end_l")?;
                asm.join(&cuffs, "top_r", &bottom, "leg_end_r")?;
            }
        }
        if has_wb {
            let mut wctx = ctx.clone();
            wctx.openings.insert("waist_top".into(), lengths(&bottom, "waist_top")?);
            let wb = build_part(Part::Waistband, &input, &wctx)?;
            asm.absorb(&wb);
            asm.join(&wb, "waist_bottom", &bottom, "waist_top")?;
            lower_top = Some(wb);
        } else {
            lower_top = Some(bottom);
        }
    }

    if upper {
        let mut sctx = PartContext::default();
        if let (true, Some(top)) = (input.cfg.is_wholebody(), &lower_top) {
            sctx.openings.insert("waist_top".into(), lengths(top, "waist_top")?);
        }
        let shirt = build_part(Part::Shirt, &input, &sctx)?;
        asm.absorb(&shirt);
        match &lower_top {
            Some(top) if input.cfg.is_wholebody() => asm.join(&shirt, "hem", top, "waist_top")?,
            _ if has_wb => {
                let mut wctx = PartContext::default();
                wctx.openings.insert("waist_top".into(), lengths(&shirt, "hem")?);
                let wb = build_part(Part::Waistband, &input, &wctx)?;
                asm.absorb(&wb);
                asm.join(&wb, "waist_bottom", &shirt, "hem")?;
            }
            _ => {}
        }

        let mut cctx = PartContext::default();
        cctx.openings.insert("neckline".into(), lengths(&shirt, "neckline")?);
        let collar = build_part(Part::Collar, &input, &cctx)?;
        if !collar.panels.is_empty() {
            asm.absorb(&collar);
            asm.join(&collar, "neckline", &shirt, "neckline")?;
        }

        let mut actx = PartContext::default();
        for k in ["armhole_l", "armhole_r"] {
            actx.openings.insert(k.into(), lengths(&shirt, k)?);
        }
        let sleeves = build_part(Part::Sleeve, &input, &actx)?;
        if !sleeves.panels.is_empty() {
            asm.absorb(&sleeves);
            asm.join(&sleeves, "cap_l", &shirt, "armhole_l")?;
            asm.join(&sleeves, "cap_r", &shirt, "armhole_r")?;
            let mut ectx = PartContext::default();
            for k in ["end_l", "end_r"] {
                ectx.openings.insert(k.into(), lengths(&sleeves, k)?);
            }
            let cuffs = build_part(Part::SleeveCuff, &input, &ectx)?;
            if !cuffs.panels.is_empty() {
                asm.absorb(&cuffs);
                asm.join(&cuffs, "top_l", &sleeves, "end_l")?;
                asm.join(&cuffs, "top_r", &sleeves, "end_r")?;
            }
        }
    } else if has_wb && lower_top.is_none() {
        let wb = build_part(Part::Waistband, &input, &PartContext::default())?;
        asm.absorb(&wb);
    }

    Ok(Pattern {
        version: PATTERN_VERSION.into(),
        panels: asm.panels,
        stitches: asm.stitches,
        source_hash: sha256_hex(&canonical_serialize(cfg, reg)),
        body: body.clone(),
    })
}

/// One pattern per wrapped garment.
pub fn assemble_outfit(o: &OutfitConfig, reg: &FieldRegistry, body: &BodyModel) -> Result<Vec<Pattern>, AssembleError> {
    o.garments().into_iter().map(|(_, cfg)| assemble_garment(cfg, reg, body)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ValidityCode {
    StitchLengthMismatch,
    NonSimplePanel,
    OpenLoop,
    DanglingInterface,
}

impl ValidityCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ValidityCode::StitchLengthMismatch => "STITCH_LENGTH_MISMATCH",
            ValidityCode::NonSimplePanel => "NON_SIMPLE_PANEL",
            ValidityCode::OpenLoop => "OPEN_LOOP",
            ValidityCode::DanglingInterface => "DANGLING_INTERFACE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub code: ValidityCode,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternValidity {
    pub ok: bool,
    pub failures: Vec<Failure>,
}

impl PatternValidity {
    pub fn has(&self, code: ValidityCode) -> bool {
        self.failures.iter().any(|f| f.code == code)
    }
}

/// Panel integrity and stitch compatibility at the default tolerance.
pub fn check_pattern(p: &Pattern) -> PatternValidity {
    check_pattern_with(p, STITCH_TOLERANCE)
}

pub fn check_pattern_with(p: &Pattern, tolerance: f64) -> PatternValidity {
    let mut failures = vec![];
    let mut fail = |code, detail: String| failures.push(Failure { code, detail });

    let mut names = BTreeSet::new();
    for panel in &p.panels {
        if !names.insert(panel.name.as_str()) {
            fail(ValidityCode::DanglingInterface, format!("duplicate panel name {}", panel.name));
        }
        if !panel.is_closed() {
            fail(ValidityCode::OpenLoop, format!("{} does not close", panel.name));
        } else if !panel_is_simple(panel) {
            fail(ValidityCode::NonSimplePanel, format!("{} self-intersects", panel.name));
        } else if panel.signed_area() <= 0.0 {
            fail(ValidityCode::NonSimplePanel, format!("{} is not counter-clockwise", panel.name));
        }
    }

    let mut used: BTreeMap<&EdgeRef, usize> = BTreeMap::new();
    for (i, s) in p.stitches.iter().enumerate() {
        if s.a == s.b {
            fail(ValidityCode::DanglingInterface, format!("stitch {i} joins an edge to itself"));
            continue;
        }
        for r in [&s.a, &s.b] {
            if let Some(j) = used.insert(r, i) {
                fail(ValidityCode::DanglingInterface, format!("{}[{}] is in stitches {j} and {i}", r.panel, r.edge));
            }
        }
        let (Some(ea), Some(eb)) = (p.edge(&s.a), p.edge(&s.b)) else {
            fail(ValidityCode::DanglingInterface, format!("stitch {i} references a missing edge"));
            continue;
        };
        let (la, lb) = (edge_length(ea), edge_length(eb));
        let rel = (la - lb).abs() / la.max(lb);
        if !(rel <= tolerance) {
            fail(
                ValidityCode::StitchLengthMismatch,
                format!("stitch {i}: {}[{}] {la:.3} cm vs {}[{}] {lb:.3} cm", s.a.panel, s.a.edge, s.b.panel, s.b.edge),
            );
        }
    }
    PatternValidity { ok: failures.is_empty(), failures }
}

/// Pattern-spec JSON. Deterministic for equal patterns.
pub fn serialize_pattern(p: &Pattern) -> String {
    let mut s = serde_json::to_string_pretty(p).expect("pattern serializes");
    s.push('\n');
    s
}

pub fn parse_pattern(text: &str) -> Result<Pattern, serde_json::Error> {
    serde_json::from_str(text)
}

const PALETTE: [&str; 10] = [
    "#e6194b", "#3cb44b", "#4363d8", "#f58231", "#911eb4", "#42d4f4", "#f032e6", "#9a6324", "#469990", "#808000",
];

/// mm per cm.
const SVG_SCALE: f64 = 10.0;
const SVG_GUTTER: f64 = 50.0;
const SVG_ROW_WIDTH: f64 = 2400.0;

/// SVG 1.1 document in millimetres, panels on a shelf grid, stitched edges coloured per stitch.
pub fn export_svg(p: &Pattern) -> String {
    let mut colour: BTreeMap<&EdgeRef, &str> = BTreeMap::new();
    for (i, s) in p.stitches.iter().enumerate() {
        colour.insert(&s.a, PALETTE[i % PALETTE.len()]);
        colour.insert(&s.b, PALETTE[i % PALETTE.len()]);
    }
    let mut body = String::new();
    let (mut x, mut y, mut row_h, mut width) = (SVG_GUTTER, SVG_GUTTER, 0.0f64, 0.0f64);
    for panel in &p.panels {
        let (lo, hi) = panel.bounds();
        let (w, h) = ((hi.x - lo.x) * SVG_SCALE, (hi.y - lo.y) * SVG_SCALE);
        if x > SVG_GUTTER && x + w > SVG_ROW_WIDTH {
            x = SVG_GUTTER;
            y += row_h + SVG_GUTTER;
            row_h = 0.0;
        }
        let map = |q: Point| -> (f64, f64) { (x + (q.x - lo.x) * SVG_SCALE, y + (hi.y - q.y) * SVG_SCALE) };
        let _ = writeln!(body, r#"  <g id="panel-{}" class="panel" data-role="{}">"#, panel.name, panel.role);
        let mut outline = String::new();
        for (i, e) in panel.edges.iter().enumerate() {
            if i == 0 {
                let (sx, sy) = map(e.start());
                let _ = write!(outline, "M {sx:.2} {sy:.2}");
            }
            outline.push(' ');
            outline.push_str(&edge_path(e, &map));
        }
        let _ = writeln!(body, r##"    <path class="outline" d="{outline} Z" fill="#f4f1ea" stroke="#222" stroke-width="1"/>"##);
        for (i, e) in panel.edges.iter().enumerate() {
            let r = EdgeRef { panel: panel.name.clone(), edge: i };
            if let Some(c) = colour.get(&r) {
                let (sx, sy) = map(e.start());
                let _ = writeln!(
                    body,
                    r#"    <path class="stitch" data-edge="{i}" d="M {sx:.2} {sy:.2} {}" fill="none" stroke="{c}" stroke-width="3"/>"#,
                    edge_path(e, &map)
                );
            }
        }
        let (cx, cy) = map(Point { x: (lo.x + hi.x) / 2.0, y: (lo.y + hi.y) / 2.0 });
        let _ = writeln!(body, r#"    <text x="{cx:.2}" y="{cy:.2}" font-size="24" text-anchor="middle">{}</text>"#, panel.name);
        body.push_str("  </g>\n");
        x += w + SVG_GUTTER;
        row_h = row_h.max(h);
        width = width.max(x);
    }
    let height = if p.panels.is_empty() { SVG_GUTTER * 2.0 } else { y + row_h + SVG_GUTTER };
    let width = width.max(SVG_GUTTER * 2.0);
    format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.2}mm\" height=\"{height:.2}mm\" viewBox=\"0 0 {width:.2} {height:.2}\">\n{body}</svg>\n"
    )
}

fn edge_path(e: &Edge, map: &impl Fn(Point) -> (f64, f64)) -> String {
    match *e {
        Edge::Line { end, .. } => {
            let (x, y) = map(end);
            format!("L {x:.2} {y:.2}")
        }
        Edge::QBezier { ctrl, end, .. } => {
            let ((cx, cy), (x, y)) = (map(ctrl), map(end));
            format!("Q {cx:.2} {cy:.2} {x:.2} {y:.2}")
        }
    }
}
