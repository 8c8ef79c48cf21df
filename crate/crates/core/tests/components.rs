mod common;

use common::{fixture, fixture_config};
use patternc_core::components::*;
use patternc_core::geometry::{edge_length, panel_is_simple, Point};
use patternc_core::sampler::{sample_config, stable_hash, SamplingWeights};
use patternc_core::schema::*;
use patternc_core::BodyModel;

fn parts_of(cfg: &GarmentConfig, reg: &FieldRegistry) -> Vec<Part> {
    reg.sections
        .iter()
        .filter(|s| s.part != Part::Wholebody && s.applicability.holds(cfg))
        .map(|s| s.part)
        .collect()
}

fn build(cfg: &GarmentConfig, kind: Part, body: &BodyModel) -> Result<PanelSet, BuildError> {
    let reg = FieldRegistry::default();
    let input = PartInput::new(cfg, &reg, body).unwrap();
    build_part(kind, &input, &PartContext::default())
}

fn sampled(n: u64, master: u64) -> Vec<GarmentConfig> {
    let reg = FieldRegistry::default();
    (0..n).map(|i| sample_config(stable_hash(master, i), &SamplingWeights::default(), &reg)).collect()
}

fn with(cfg: &GarmentConfig, path: &str, v: f64) -> GarmentConfig {
    let mut c = cfg.clone();
    c.set(path, Leaf::Number(v));
    c
}

#[test]
fn builders_honour_their_interface_contract() {
    let reg = FieldRegistry::default();
    let body = BodyModel::default();
    for cfg in sampled(400, 11) {
        for kind in parts_of(&cfg, &reg) {
            let ps = build(&cfg, kind, &body).unwrap_or_else(|e| panic!("{kind:?}: {e}"));
            for p in &ps.panels {
                assert!(panel_is_simple(p), "{} not simple", p.name);
                assert!(p.signed_area() > 0.0, "{} not counter-clockwise", p.name);
                assert!(p.edges.iter().all(|e| edge_length(e) >= MIN_EDGE_LENGTH));
            }
            for refs in ps.interfaces.values() {
                assert!(refs.iter().all(|r| ps.edge(r).is_some()));
            }
            if ps.panels.is_empty() {
                continue;
            }
            for name in part_interfaces(kind).unwrap() {
                assert!(ps.interfaces.contains_key(name), "{kind:?} lacks {name}");
            }
        }
    }
}

#[test]
fn listing_sections_build() {
    let body = BodyModel::default();
    let skirt = fixture_config("skirt_listing.json");
    let ps = build(&skirt, Part::PencilSkirt, &body).unwrap();
    assert_eq!(ps.panels.len(), 2);
    assert!(ps.interfaces.contains_key("waist_top"));
    assert!(ps.interfaces.keys().any(|k| k.starts_with("side_seam")));
    assert!(ps.panels.iter().all(panel_is_simple));

    let pants = fixture_config("pants_listing.json");
    assert_eq!(build(&pants, Part::Pants, &body).unwrap().panels.len(), 4);
    assert!(build(&pants, Part::PantCuff, &body).unwrap().panels.is_empty());
}

#[test]
fn part_interface_examples() {
    assert_eq!(part_interfaces(Part::Waistband).unwrap(), ["waist_top", "waist_bottom"]);
    assert_eq!(part_interfaces(Part::Collar).unwrap(), ["neckline"]);
    let pants = part_interfaces(Part::Pants).unwrap();
    assert!(["waist_top", "leg_end_l", "leg_end_r"].iter().all(|n| pants.contains(n)));
    assert_eq!(part_interfaces(Part::Wholebody).unwrap_err().code(), "UNSUPPORTED_KIND");
}

#[test]
fn unknown_kinds_are_rejected() {
    let reg = FieldRegistry::default();
    let body = BodyModel::default();
    let cfg = fixture_config("shirt.json");
    let input = PartInput::new(&cfg, &reg, &body).unwrap();
    let ctx = PartContext::default();
    assert_eq!(build_part_by_tag("hood", &input, &ctx).unwrap_err().code(), "UNSUPPORTED_KIND");
    assert_eq!(build_part(Part::Wholebody, &input, &ctx).unwrap_err().code(), "UNSUPPORTED_KIND");
    assert!(build_part_by_tag("shirt", &input, &ctx).is_ok());
}

#[test]
fn tiny_bodies_give_degenerate_geometry() {
    let tiny = BodyModel::default().scaled(1e-3);
    let pants = fixture_config("pants_listing.json");
    let err = build(&pants, Part::Pants, &tiny).unwrap_err();
    assert_eq!(err.code(), "DEGENERATE_GEOMETRY");
    assert!(matches!(err, BuildError::DegenerateGeometry { length, .. } if length < MIN_EDGE_LENGTH));
}

#[test]
fn open_front_leaves_centre_unstitched() {
    let body = BodyModel::default();
    let mut shirt = fixture_config("shirt.json");
    shirt.set("shirt.open_front", Leaf::Flag(true));
    let ps = build(&shirt, Part::Shirt, &body).unwrap();
    let fronts: Vec<_> = ps.panels.iter().filter(|p| p.name.starts_with("bodice_front")).collect();
    assert_eq!(fronts.len(), 2);
    let centre = &ps.interfaces["center_front"];
    assert_eq!(centre.len(), 2);
    for r in centre {
        assert!(!ps.stitches.iter().any(|s| &s.a == r || &s.b == r));
    }
    shirt.set("shirt.open_front", Leaf::Flag(false));
    let closed = build(&shirt, Part::Shirt, &body).unwrap();
    assert_eq!(closed.panels.iter().filter(|p| p.name.starts_with("bodice_front")).count(), 1);
}

#[test]
fn sleeveless_keeps_the_armholes() {
    let body = BodyModel::default();
    let mut shirt = fixture_config("shirt.json");
    shirt.set("sleeve.sleeveless", Leaf::Flag(true));
    assert!(build(&shirt, Part::Sleeve, &body).unwrap().panels.is_empty());
    assert!(build(&shirt, Part::SleeveCuff, &body).unwrap().panels.is_empty());
    let bodice = build(&shirt, Part::Shirt, &body).unwrap();
    assert!(bodice.interfaces.contains_key("armhole_l") && bodice.interfaces.contains_key("armhole_r"));
}

/// Front-panel side seam on the left.
fn front_side_seam(ps: &PanelSet) -> f64 {
    ps.interface_lengths("side_seam_front_l").unwrap().iter().sum()
}

#[test]
fn longer_pencil_skirts_have_longer_side_seams() {
    let body = BodyModel::default();
    let mut checked = 0;
    for (i, cfg) in sampled(3000, 12).into_iter().enumerate() {
        if cfg.meta("bottom") != "PencilSkirt" {
            continue;
        }
        let l = cfg.number("pencil_skirt.length").unwrap();
        let (lo, hi) = if l <= 0.9 { (l, l + 0.1) } else { (l - 0.1, l) };
        let a = front_side_seam(&build(&with(&cfg, "pencil_skirt.length", lo), Part::PencilSkirt, &body).unwrap());
        let b = front_side_seam(&build(&with(&cfg, "pencil_skirt.length", hi), Part::PencilSkirt, &body).unwrap());
        assert!(b > a, "sample {i}: {a} -> {b}");
        checked += 1;
        if checked == 100 {
            break;
        }
    }
    assert_eq!(checked, 100);
}

/// Hem edge and knee span of the left front trouser panel.
fn ankle_and_knee(ps: &PanelSet) -> (f64, f64) {
    let p = ps.panel("pant_front_l").unwrap();
    let (ki, ko): (Point, Point) = (p.edges[2].start(), p.edges[4].end());
    (edge_length(&p.edges[3]), ki.dist(ko))
}

#[test]
fn flare_never_narrows_the_ankle() {
    let body = BodyModel::default();
    let mut checked = 0;
    for cfg in sampled(2000, 13) {
        if cfg.meta("bottom") != "Pants" {
            continue;
        }
        let mut prev = 0.0;
        for k in 0..=10 {
            let (ankle, knee) = ankle_and_knee(&build(&with(&cfg, "pants.flare", k as f64 / 10.0), Part::Pants, &body).unwrap());
            assert!(ankle >= prev - 1e-12);
            if k < 5 {
                assert!(ankle < knee, "fitted leg should narrow at the ankle");
            }
            prev = ankle;
        }
        checked += 1;
        if checked == 100 {
            break;
        }
    }
    assert_eq!(checked, 100);
}

#[test]
fn high_rise_waistband_raises_the_waist_line() {
    let reg = FieldRegistry::default();
    let body = BodyModel::default();
    let skirt = fixture_config("skirt_listing.json");
    let top_y = |rise: f64| {
        let cfg = with(&skirt, "waistband.rise", rise);
        let input = PartInput::new(&cfg, &reg, &body).unwrap();
        assert!(rise > HIGH_WAIST_THRESHOLD || waist_raise(&input) == 0.0);
        let ctx = PartContext { raise: waist_raise(&input), ..Default::default() };
        let ps = build_part(Part::PencilSkirt, &input, &ctx).unwrap();
        let r = &ps.interfaces["waist_top"][0];
        ps.edge(r).unwrap().start().y
    };
    assert_eq!(top_y(0.2), top_y(0.5));
    assert!(top_y(0.8) > top_y(0.5));
    assert!(top_y(1.0) > top_y(0.8));
}

#[test]
fn doubling_the_body_doubles_every_edge() {
    let reg = FieldRegistry::default();
    let body = BodyModel::default();
    let big = body.scaled(2.0);
    let mut turtle = fixture_config("shirt.json");
    assert_eq!(turtle.text("collar.style"), Some("Turtle"));
    turtle.set("meta.bottom", Leaf::Text("FlaredSkirt".into()));
    let mut cases = vec![turtle, fixture_config("pants_listing.json")];
    cases.extend(sampled(200, 14).into_iter().filter(|c| c.meta("wb") == "None" && c.meta("bottom") != "PencilSkirt"));
    let mut compared = 0;
    for cfg in cases {
        let cfg = prune_config(&fill_defaults(&cfg, &reg), &reg);
        for kind in parts_of(&cfg, &reg) {
            let a = build(&cfg, kind, &body).unwrap();
            let b = build(&cfg, kind, &big).unwrap();
            assert_eq!(a.panels.len(), b.panels.len());
            for (pa, pb) in a.panels.iter().zip(&b.panels) {
                for (ea, eb) in pa.edges.iter().zip(&pb.edges) {
                    let ratio = edge_length(eb) / edge_length(ea);
                    assert!((ratio - 2.0).abs() <= 2e-6, "{kind:?} {}: {ratio}", pa.name);
                    compared += 1;
                }
            }
        }
    }
    assert!(compared > 1000);
}

#[test]
fn mirrored_halves_match() {
    let body = BodyModel::default();
    let mut pants = parse_config(&fixture("pants_listing.json")).unwrap();
    pants.set("pants.cuff.type", Leaf::Text("Flare".into()));
    let pants = fixture_config_from(pants);
    let shirt = fixture_config("shirt.json");
    for (cfg, kind, pairs) in [
        (&pants, Part::Pants, vec![("pant_front_l", "pant_front_r"), ("pant_back_l", "pant_back_r")]),
        (&pants, Part::PantCuff, vec![("pant_cuff_l", "pant_cuff_r")]),
        (&shirt, Part::Sleeve, vec![("sleeve_l", "sleeve_r")]),
    ] {
        let ps = build(cfg, kind, &body).unwrap();
        for (l, r) in pairs {
            let (pl, pr) = (ps.panel(l).unwrap(), ps.panel(r).unwrap());
            assert!((pl.signed_area() - pr.signed_area()).abs() < 1e-9);
            let mut la: Vec<f64> = pl.edges.iter().map(edge_length).collect();
            let mut lb: Vec<f64> = pr.edges.iter().map(edge_length).collect();
            la.sort_by(f64::total_cmp);
            lb.sort_by(f64::total_cmp);
            for (x, y) in la.iter().zip(&lb) {
                assert!((x - y).abs() < 1e-9, "{l}/{r}");
            }
        }
    }
}

fn fixture_config_from(cfg: GarmentConfig) -> GarmentConfig {
    let reg = FieldRegistry::default();
    assert!(validate_config(&cfg, &reg).ok);
    prune_config(&cfg, &reg)
}
