mod common;

use common::{brute_chamfer, brute_fscore, centred, compile};
use patternc_core::assembler::Pattern;
use patternc_core::geometry::{pt, Edge, Panel, Placement, Point, Side};
use patternc_core::metrics::*;
use patternc_core::BodyModel;
use proptest::prelude::*;

fn polygon(name: &str, role: &str, pts: &[Point]) -> Panel {
    let edges = (0..pts.len()).map(|i| Edge::line(pts[i], pts[(i + 1) % pts.len()])).collect();
    Panel::new(name, role, edges, Placement::new([0.0; 3], 0.0, Side::Front))
}

fn square(name: &str, role: &str, s: f64, at: Point) -> Panel {
    polygon(name, role, &[at, at + pt(s, 0.0), at + pt(s, s), at + pt(0.0, s)])
}

fn pattern(panels: Vec<Panel>) -> Pattern {
    let mut p = Pattern::empty(BodyModel::default());
    p.panels = panels;
    p
}

/// Boundary samples at `i / (n - 1)` per edge, last one dropped.
fn oracle_cloud(p: &Panel, n: usize) -> Vec<Point> {
    p.edges.iter().flat_map(|e| (0..n - 1).map(move |i| e.eval(i as f64 / (n - 1) as f64))).collect()
}

fn moved(p: &Panel, angle: f64, by: Point) -> Panel {
    p.transformed(angle, by)
}

#[test]
fn identical_patterns_score_perfectly() {
    let a = compile(&common::fixture_config("shirt.json"));
    let r = compare_patterns(&a, &a, 32, 1.0, Alignment::Centroid).unwrap();
    assert_eq!(r.chamfer_cm, 0.0);
    assert_eq!(r.fscore, 1.0);
    assert_eq!(r.per_panel.len(), a.panels.len());
    assert_eq!(pattern_fscore(&a, &a, 1e-6).unwrap(), 1.0);
}

#[test]
fn layout_translation_is_ignored() {
    let a = compile(&common::fixture_config("pants_listing.json"));
    let mut b = a.clone();
    for p in &mut b.panels {
        *p = moved(p, 0.0, pt(37.5, -12.25));
    }
    let r = pattern_chamfer(&a, &b, 32).unwrap();
    assert!(r.chamfer_cm < 1e-9);
    assert!((r.fscore - 1.0).abs() < 1e-12);
}

#[test]
fn unit_square_against_double_square() {
    let a = pattern(vec![square("a", "p", 1.0, pt(0.0, 0.0))]);
    let b = pattern(vec![square("b", "p", 2.0, pt(5.0, 5.0))]);
    let n = 64;
    let r = compare_patterns(&a, &b, n, 1.0, Alignment::Centroid).unwrap();
    let expect = brute_chamfer(&centred(&oracle_cloud(&a.panels[0], n)), &centred(&oracle_cloud(&b.panels[0], n)));
    assert!((r.chamfer_cm - expect).abs() < 1e-6);
    assert!((r.chamfer_cm - 0.5).abs() < 0.05);
}

#[test]
fn perturbed_square_fscore() {
    let a = square("a", "p", 10.0, pt(0.0, 0.0));
    let b = polygon("b", "p", &[pt(0.0, 0.0), pt(10.4, 0.3), pt(10.0, 11.5), pt(-0.2, 9.6)]);
    let n = 40;
    let r = compare_patterns(&pattern(vec![a.clone()]), &pattern(vec![b.clone()]), n, 1.0, Alignment::Centroid).unwrap();
    let expect = brute_fscore(&centred(&oracle_cloud(&a, n)), &centred(&oracle_cloud(&b, n)), 1.0);
    assert!((r.fscore - expect).abs() < 1e-9);
    assert!(r.fscore > 0.0 && r.fscore < 1.0);
}

#[test]
fn three_panel_toys_match_brute_force() {
    let mk = |k: f64| {
        pattern(vec![
            square("s", "front", 3.0 + k, pt(0.0, 0.0)),
            polygon("t", "back", &[pt(0.0, 0.0), pt(4.0, 0.0), pt(2.0 + k, 3.0)]),
            square("u", "sleeve", 1.5, pt(k, 2.0 * k)),
        ])
    };
    let (a, b) = (mk(0.0), mk(0.7));
    let n = 24;
    let r = compare_patterns(&a, &b, n, 0.5, Alignment::Centroid).unwrap();
    let mut cs = vec![];
    let mut fs = vec![];
    for name in ["s", "t", "u"] {
        let pa = a.panel(name).unwrap();
        let pb = b.panel(name).unwrap();
        let (ca, cb) = (centred(&oracle_cloud(pa, n)), centred(&oracle_cloud(pb, n)));
        cs.push(brute_chamfer(&ca, &cb));
        fs.push(brute_fscore(&ca, &cb, 0.5));
    }
    assert!((r.chamfer_cm - cs.iter().sum::<f64>() / 3.0).abs() < 1e-6);
    assert!((r.fscore - fs.iter().sum::<f64>() / 3.0).abs() < 1e-9);
}

#[test]
fn far_apart_clouds_have_zero_fscore() {
    let a: Vec<Point> = (0..50).map(|i| pt(i as f64 * 0.1, 0.0)).collect();
    let b: Vec<Point> = a.iter().map(|p| *p + pt(0.0, 10.0)).collect();
    assert_eq!(fscore(&a, &b, 1.0), 0.0);
    assert!((chamfer(&a, &b) - 10.0).abs() < 1e-12);
}

#[test]
fn empty_patterns_are_rejected() {
    let empty = Pattern::empty(BodyModel::default());
    let one = pattern(vec![square("a", "p", 1.0, pt(0.0, 0.0))]);
    assert_eq!(pattern_chamfer(&empty, &one, 8).unwrap_err().code(), "EMPTY_PATTERN");
    assert_eq!(pattern_fscore(&one, &empty, 1.0).unwrap_err().code(), "EMPTY_PATTERN");
}

#[test]
fn unmatched_roles_are_penalised() {
    let a = pattern(vec![square("a", "p", 2.0, pt(0.0, 0.0))]);
    let b = pattern(vec![square("a", "p", 2.0, pt(0.0, 0.0)), square("extra", "q", 4.0, pt(0.0, 0.0))]);
    let r = pattern_chamfer(&a, &b, 16).unwrap();
    assert_eq!(r.per_panel.len(), 2);
    let extra = r.per_panel.iter().find(|m| m.role == "q").unwrap();
    assert_eq!(extra.a, None);
    assert_eq!(extra.fscore, 0.0);
    assert!(extra.chamfer_cm > 1.0);
    assert!((r.fscore - 0.5).abs() < 1e-12);
}

#[test]
fn failure_rate_counts_invalid_patterns() {
    let good = pattern(vec![square("a", "p", 1.0, pt(0.0, 0.0))]);
    let bad = pattern(vec![polygon("bow", "p", &[pt(0.0, 0.0), pt(2.0, 2.0), pt(2.0, 0.0), pt(0.0, 2.0)])]);
    assert_eq!(failure_rate(&[good.clone(), bad, good]), 1.0 / 3.0);
    assert_eq!(failure_rate(&[]), 0.0);
}

fn arb_panel() -> impl Strategy<Value = Panel> {
    (1.0..8.0f64, 1.0..8.0f64, -2.0..2.0f64, 0.5..3.0f64).prop_map(|(w, h, skew, top)| {
        polygon("p", "r", &[pt(0.0, 0.0), pt(w, 0.0), pt(w + skew, h), pt(top, h + 0.5)])
    })
}

/// Long enough that the principal axes are well separated.
fn elongated_panel() -> impl Strategy<Value = Panel> {
    (5.0..8.0f64, 1.0..2.0f64, -0.5..0.5f64, 0.5..2.0f64).prop_map(|(w, h, skew, top)| {
        polygon("p", "r", &[pt(0.0, 0.0), pt(w, 0.0), pt(w + skew, h), pt(top, h + 0.5)])
    })
}

proptest! {
    #[test]
    fn metrics_are_symmetric(a in arb_panel(), b in arb_panel(), tau in 0.05..2.0f64) {
        let (pa, pb) = (pattern(vec![a]), pattern(vec![b]));
        let ab = compare_patterns(&pa, &pb, 16, tau, Alignment::Centroid).unwrap();
        let ba = compare_patterns(&pb, &pa, 16, tau, Alignment::Centroid).unwrap();
        prop_assert!((ab.chamfer_cm - ba.chamfer_cm).abs() < 1e-12);
        prop_assert!((ab.fscore - ba.fscore).abs() < 1e-12);
        prop_assert!(ab.chamfer_cm >= 0.0 && (0.0..=1.0).contains(&ab.fscore));
    }

    #[test]
    fn fscore_grows_with_tau(a in arb_panel(), b in arb_panel(), t1 in 0.01..2.0f64, dt in 0.0..2.0f64) {
        let (pa, pb) = (pattern(vec![a]), pattern(vec![b]));
        let lo = compare_patterns(&pa, &pb, 16, t1, Alignment::Centroid).unwrap().fscore;
        let hi = compare_patterns(&pa, &pb, 16, t1 + dt, Alignment::Centroid).unwrap().fscore;
        prop_assert!(hi >= lo);
    }

    #[test]
    fn principal_axes_undo_rotation(a in elongated_panel(), angle in -3.1..3.1f64, dx in -50.0..50.0f64) {
        let b = moved(&a, angle, pt(dx, -dx));
        let r = compare_patterns(&pattern(vec![a.clone()]), &pattern(vec![b]), 16, 1e-3, Alignment::PrincipalAxes).unwrap();
        prop_assert!(r.chamfer_cm < 1e-6, "{}", r.chamfer_cm);
    }

    #[test]
    fn nearest_index_agrees_with_brute_force(pts in prop::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 1..60), q in (-12.0..12.0f64, -12.0..12.0f64)) {
        let cloud: Vec<Point> = pts.iter().map(|&(x, y)| pt(x, y)).collect();
        let q = pt(q.0, q.1);
        let brute = cloud.iter().map(|p| p.dist(q)).fold(f64::INFINITY, f64::min);
        prop_assert!((NearestIndex::new(&cloud).nearest_distance(q) - brute).abs() < 1e-12);
    }
}
