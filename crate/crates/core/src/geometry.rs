//! Minimal 2D kernel: points, line and quadratic Bézier edges, panel loops.
//!
//! All coordinates are centimetres in a panel-local frame with `y` pointing up.
//! Panels are closed counter-clockwise loops of edges.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Tolerance for loop closure, in cm.
pub const CLOSURE_TOLERANCE: f64 = 1e-6;

/// Samples per edge used by the simplicity test.
pub const SIMPLICITY_SAMPLES: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

pub const fn pt(x: f64, y: f64) -> Point {
    Point { x, y }
}

impl Point {
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    /// Rotates by `angle` radians about the origin.
    pub fn rotate(self, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        pt(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Negates `x`; never yields `-0.0`.
    pub fn mirror_x(self) -> Point {
        pt(0.0 - self.x, self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        pt(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        pt(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        pt(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        pt(-self.x, -self.y)
    }
}

/// A panel boundary segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Edge {
    Line { start: Point, end: Point },
    #[serde(rename = "QBEZIER")]
    QBezier { start: Point, ctrl: Point, end: Point },
}

impl Edge {
    pub fn line(start: Point, end: Point) -> Edge {
        Edge::Line { start, end }
    }

    pub fn qbez(start: Point, ctrl: Point, end: Point) -> Edge {
        Edge::QBezier { start, ctrl, end }
    }

    /// Quadratic edge whose control point sits `bulge × chord` to the right of
    /// the chord midpoint. For a CCW loop, positive bulge pushes the edge outwards.
    pub fn bulged(start: Point, end: Point, bulge: f64) -> Edge {
        if bulge == 0.0 {
            return Edge::line(start, end);
        }
        let d = end - start;
        let right = pt(d.y, -d.x);
        Edge::qbez(start, start.lerp(end, 0.5) + right * bulge, end)
    }

    pub fn start(&self) -> Point {
        match *self {
            Edge::Line { start, .. } | Edge::QBezier { start, .. } => start,
        }
    }

    pub fn end(&self) -> Point {
        match *self {
            Edge::Line { end, .. } | Edge::QBezier { end, .. } => end,
        }
    }

    pub fn ctrl(&self) -> Option<Point> {
        match *self {
            Edge::Line { .. } => None,
            Edge::QBezier { ctrl, .. } => Some(ctrl),
        }
    }

    pub fn eval(&self, t: f64) -> Point {
        match *self {
            Edge::Line { start, end } => start.lerp(end, t),
            Edge::QBezier { start, ctrl, end } => {
                let u = 1.0 - t;
                start * (u * u) + ctrl * (2.0 * u * t) + end * (t * t)
            }
        }
    }

    fn derivative(&self, t: f64) -> Point {
        match *self {
            Edge::Line { start, end } => end - start,
            Edge::QBezier { start, ctrl, end } => {
                (ctrl - start) * (2.0 * (1.0 - t)) + (end - ctrl) * (2.0 * t)
            }
        }
    }

    pub fn reversed(&self) -> Edge {
        match *self {
            Edge::Line { start, end } => Edge::line(end, start),
            Edge::QBezier { start, ctrl, end } => Edge::qbez(end, ctrl, start),
        }
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Edge {
        match *self {
            Edge::Line { start, end } => Edge::line(f(start), f(end)),
            Edge::QBezier { start, ctrl, end } => Edge::qbez(f(start), f(ctrl), f(end)),
        }
    }

    /// Splits at parameter `t` (de Casteljau for quadratics).
    pub fn split(&self, t: f64) -> (Edge, Edge) {
        match *self {
            Edge::Line { start, end } => {
                let m = start.lerp(end, t);
                (Edge::line(start, m), Edge::line(m, end))
            }
            Edge::QBezier { start, ctrl, end } => {
                let a = start.lerp(ctrl, t);
                let b = ctrl.lerp(end, t);
                let m = a.lerp(b, t);
                (Edge::qbez(start, a, m), Edge::qbez(m, b, end))
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.start().is_finite() && self.end().is_finite() && self.ctrl().is_none_or(Point::is_finite)
    }

    /// Exact signed area of the region between the curve and its chord, with
    /// the chord part of the shoelace sum included.
    fn signed_area_term(&self) -> f64 {
        match *self {
            Edge::Line { start, end } => 0.5 * start.cross(end),
            Edge::QBezier { start, ctrl, end } => {
                0.5 * start.cross(end) + (2.0 / 3.0) * 0.5 * (ctrl - start).cross(end - start)
            }
        }
    }
}

const GL5_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL5_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

fn gauss_legendre(e: &Edge, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GL5_NODES
        .iter()
        .zip(GL5_WEIGHTS)
        .map(|(&x, w)| w * e.derivative(mid + half * x).norm())
        .sum::<f64>()
        * half
}

fn adaptive_length(e: &Edge, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let left = gauss_legendre(e, a, m);
    let right = gauss_legendre(e, m, b);
    let refined = left + right;
    if depth == 0 || (refined - whole).abs() <= 1e-12 * refined.max(1e-12) {
        return refined;
    }
    adaptive_length(e, a, m, left, depth - 1) + adaptive_length(e, m, b, right, depth - 1)
}

/// Arc length in cm. Lines are exact; quadratics use adaptive Gauss–Legendre
/// quadrature, converged far below 1e-4 relative error.
pub fn edge_length(e: &Edge) -> f64 {
    match *e {
        Edge::Line { start, end } => start.dist(end),
        Edge::QBezier { .. } => {
            let whole = gauss_legendre(e, 0.0, 1.0);
            adaptive_length(e, 0.0, 1.0, whole, 12)
        }
    }
}

/// `n` points at uniform parameter values `i / (n - 1)`.
pub fn sample_edge(e: &Edge, n: usize) -> Vec<Point> {
    assert!(n >= 2, "sample_edge needs at least two points");
    let last = (n - 1) as f64;
    (0..n)
        .map(|i| match i {
            0 => e.start(),
            i if i == n - 1 => e.end(),
            i => e.eval(i as f64 / last),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Side {
    Front,
    Back,
    Left,
    Right,
}

/// Coarse 3D placement of a panel around the body. Exported only; nothing is draped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub translation: [f64; 3],
    /// Degrees about the vertical axis.
    pub rotation: f64,
    pub side: Side,
}

impl Placement {
    pub fn new(translation: [f64; 3], rotation: f64, side: Side) -> Self {
        Placement { translation, rotation, side }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panel {
    pub name: String,
    pub role: String,
    pub edges: Vec<Edge>,
    pub placement: Placement,
}

impl Panel {
    pub fn new(name: impl Into<String>, role: impl Into<String>, edges: Vec<Edge>, placement: Placement) -> Self {
        Panel { name: name.into(), role: role.into(), edges, placement }
    }

    /// Each edge ends where the next one starts (cyclically).
    pub fn is_closed(&self) -> bool {
        !self.edges.is_empty()
            && self
                .edges
                .iter()
                .zip(self.edges.iter().cycle().skip(1))
                .all(|(a, b)| a.end().dist(b.start()) <= CLOSURE_TOLERANCE)
    }

    /// Exact signed area; positive for counter-clockwise loops.
    pub fn signed_area(&self) -> f64 {
        self.edges.iter().map(Edge::signed_area_term).sum()
    }

    /// Boundary polyline with `per_edge` samples per edge, shared endpoints merged.
    pub fn polyline(&self, per_edge: usize) -> Vec<Point> {
        let mut out = Vec::with_capacity(self.edges.len() * (per_edge - 1));
        for e in &self.edges {
            let pts = sample_edge(e, per_edge);
            out.extend_from_slice(&pts[..pts.len() - 1]);
        }
        out
    }

    /// Mirror image across the panel's `x = 0` axis. The loop is reversed so it
    /// stays counter-clockwise; edge `i` of the result mirrors edge `n - 1 - i`.
    pub fn mirrored(&self, name: impl Into<String>, role: impl Into<String>) -> Panel {
        let edges = self
            .edges
            .iter()
            .rev()
            .map(|e| e.reversed().map(Point::mirror_x))
            .collect();
        let mut placement = self.placement;
        placement.translation[0] = 0.0 - placement.translation[0];
        placement.rotation = 0.0 - placement.rotation;
        placement.side = match placement.side {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
            s => s,
        };
        Panel { name: name.into(), role: role.into(), edges, placement }
    }

    /// Applies a rotation (radians) followed by a translation to every edge.
    pub fn transformed(&self, angle: f64, offset: Point) -> Panel {
        let mut p = self.clone();
        p.edges = p.edges.iter().map(|e| e.map(|q| q.rotate(angle) + offset)).collect();
        p
    }

    pub fn bounds(&self) -> (Point, Point) {
        let pts = self.polyline(SIMPLICITY_SAMPLES);
        let mut lo = pt(f64::INFINITY, f64::INFINITY);
        let mut hi = pt(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in pts.iter().chain(self.edges.iter().filter_map(|e| e.ctrl()).collect::<Vec<_>>().iter()) {
            lo = pt(lo.x.min(p.x), lo.y.min(p.y));
            hi = pt(hi.x.max(p.x), hi.y.max(p.y));
        }
        (lo, hi)
    }
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection test, collinear overlaps included.
pub fn segments_intersect(a: Point, b: Point, c: Point, d: Point) -> bool {
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on_segment(c, d, a))
        || (d2 == 0.0 && on_segment(c, d, b))
        || (d3 == 0.0 && on_segment(a, b, c))
        || (d4 == 0.0 && on_segment(a, b, d))
}

/// True when the closed polyline has no intersections between non-adjacent
/// segments. Sweep over x-sorted bounding boxes.
pub fn polyline_is_simple(pts: &[Point]) -> bool {
    let n = pts.len();
    if n < 3 {
        return false;
    }
    let seg = |i: usize| (pts[i], pts[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let min_x = |i: usize| {
        let (a, b) = seg(i);
        a.x.min(b.x)
    };
    order.sort_by(|&i, &j| min_x(i).total_cmp(&min_x(j)));
    let mut active: Vec<usize> = Vec::new();
    for &i in &order {
        let (a, b) = seg(i);
        let lo_x = a.x.min(b.x);
        active.retain(|&j| {
            let (c, d) = seg(j);
            c.x.max(d.x) >= lo_x
        });
        for &j in &active {
            let adjacent = (i + 1) % n == j || (j + 1) % n == i;
            if adjacent {
                continue;
            }
            let (c, d) = seg(j);
            if a.y.max(b.y) < c.y.min(d.y) || c.y.max(d.y) < a.y.min(b.y) {
                continue;
            }
            if segments_intersect(a, b, c, d) {
                return false;
            }
        }
        active.push(i);
    }
    true
}

/// Simplicity at the documented sampling resolution.
pub fn panel_is_simple(p: &Panel) -> bool {
    panel_is_simple_at(p, SIMPLICITY_SAMPLES)
}

pub fn panel_is_simple_at(p: &Panel, per_edge: usize) -> bool {
    polyline_is_simple(&p.polyline(per_edge))
}
