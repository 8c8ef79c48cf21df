//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use patternc_core::assembler::{assemble_garment, Pattern};
use patternc_core::geometry::{Edge, Point};
use patternc_core::schema::{parse_config, prune_config, validate_config, FieldRegistry, GarmentConfig};
use patternc_core::BodyModel;

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

pub fn fixture_config(name: &str) -> GarmentConfig {
    let reg = FieldRegistry::default();
    let cfg = parse_config(&fixture(name)).unwrap();
    let report = validate_config(&cfg, &reg);
    assert!(report.ok, "{name}: {:?}", report.issues);
    prune_config(&cfg, &reg)
}

pub fn compile(cfg: &GarmentConfig) -> Pattern {
    assemble_garment(cfg, &FieldRegistry::default(), &BodyModel::default()).unwrap()
}

/// Arc length of an edge as the length of an `n`-segment inscribed polyline.
pub fn polyline_length(e: &Edge, n: usize) -> f64 {
    let mut prev = e.eval(0.0);
    let mut total = 0.0;
    for i in 1..=n {
        let p = e.eval(i as f64 / n as f64);
        total += ((p.x - prev.x).powi(2) + (p.y - prev.y).powi(2)).sqrt();
        prev = p;
    }
    total
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed-segment intersection by orientation signs.
pub fn brute_segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2, o3, o4) = (orient(a, b, c), orient(a, b, d), orient(c, d, a), orient(c, d, b));
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0)) && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0)) {
        return true;
    }
    (o1 == 0.0 && on_segment(a, b, c))
        || (o2 == 0.0 && on_segment(a, b, d))
        || (o3 == 0.0 && on_segment(c, d, a))
        || (o4 == 0.0 && on_segment(c, d, b))
}

/// All-pairs check of a closed polyline, skipping neighbouring segments.
pub fn brute_polyline_simple(pts: &[Point]) -> bool {
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            if j == i + 1 || (i == 0 && j == n - 1) {
                continue;
            }
            if brute_segments_cross(pts[i], pts[(i + 1) % n], pts[j], pts[(j + 1) % n]) {
                return false;
            }
        }
    }
    true
}

fn brute_nn(p: Point, cloud: &[Point]) -> f64 {
    cloud.iter().map(|q| ((p.x - q.x).powi(2) + (p.y - q.y).powi(2)).sqrt()).fold(f64::INFINITY, f64::min)
}

pub fn brute_chamfer(a: &[Point], b: &[Point]) -> f64 {
    let da: f64 = a.iter().map(|&p| brute_nn(p, b)).sum::<f64>() / a.len() as f64;
    let db: f64 = b.iter().map(|&p| brute_nn(p, a)).sum::<f64>() / b.len() as f64;
    (da + db) / 2.0
}

pub fn brute_fscore(a: &[Point], b: &[Point], tau: f64) -> f64 {
    let p = a.iter().filter(|&&x| brute_nn(x, b) <= tau).count() as f64 / a.len() as f64;
    let r = b.iter().filter(|&&x| brute_nn(x, a) <= tau).count() as f64 / b.len() as f64;
    if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) }
}

/// Points minus their mean.
pub fn centred(pts: &[Point]) -> Vec<Point> {
    let n = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(x, y), p| (x + p.x, y + p.y));
    pts.iter().map(|p| Point { x: p.x - sx / n, y: p.y - sy / n }).collect()
}
