use patternc_core::simparams::*;
use proptest::prelude::*;

fn scores(soft: i32, light: i32, smooth: i32, thickness_score: i32) -> DescriptorScores {
    DescriptorScores { soft, light, smooth, thickness_score }
}

fn params(memb_e: f64, bend_e: f64, density: f64, thickness: f64) -> MaterialParams {
    MaterialParams { memb_e, bend_e, density, thickness }
}

#[test]
fn equal_scores_return_the_base_for_every_row() {
    let reg = MaterialRegistry::default();
    assert_eq!(reg.materials.len(), 6);
    for name in ["cotton", "silk", "denim", "wool", "leather", "linen"] {
        let (p, s) = reg.lookup_base(name).unwrap();
        for pairing in [Pairing::SmoothBend, Pairing::LightBend] {
            let out = map_scores(&p, &s, &s, &AlphaCoeffs::default(), MapMode::IdentityPreserving, pairing).unwrap();
            assert_eq!(out, p, "{name}");
        }
    }
}

#[test]
fn lookup_examples() {
    let reg = MaterialRegistry::default();
    let (cotton, _) = reg.lookup_base("cotton").unwrap();
    let file: serde_json::Value = serde_json::from_str(include_str!("../data/materials.json")).unwrap();
    assert_eq!(cotton.memb_e, file["cotton"]["params"]["membE"].as_f64().unwrap());
    assert_eq!(cotton.thickness, file["cotton"]["params"]["thickness"].as_f64().unwrap());
    let soft = |n: &str| reg.lookup_base(n).unwrap().1.soft;
    assert!(soft("denim") < soft("silk"));
    assert_eq!(reg.lookup_base("velour").unwrap_err().code(), "UNKNOWN_MATERIAL");
}

#[test]
fn literal_forms_at_zero_difference() {
    let base = params(1e4, 10.0, 0.2, 5e-4);
    let s = scores(5, 5, 5, 5);
    let err = map_scores(&base, &s, &s, &AlphaCoeffs::default(), MapMode::Literal, Pairing::SmoothBend).unwrap_err();
    assert_eq!(err.code(), "NONPOSITIVE_RESULT");
    assert!(matches!(err, SimParamsError::NonpositiveResult("density")));
}

#[test]
fn literal_forms_by_hand() {
    let base = params(1e4, 100.0, 0.2, 5e-4);
    let a = AlphaCoeffs { alpha_m: 0.1, alpha_b: 0.2, alpha_d: 0.5, alpha_t: 0.25 };
    let b = scores(5, 5, 5, 5);
    let t = scores(8, 7, 9, 9);
    // literal: log p = αΔ log p0, p = αΔ p0; light-bend pairing sends light to bendE and smooth to density
    let out = map_scores(&base, &b, &t, &a, MapMode::Literal, Pairing::LightBend).unwrap();
    assert!((out.memb_e - 10f64.powf(0.3 * 4.0)).abs() < 1e-9);
    assert!((out.bend_e - 10f64.powf(0.4 * 2.0)).abs() < 1e-9);
    assert!((out.density - 2.0 * 0.2).abs() < 1e-12);
    assert!((out.thickness - 1.0 * 5e-4).abs() < 1e-15);
    let smooth_bend = map_scores(&base, &b, &t, &a, MapMode::Literal, Pairing::SmoothBend).unwrap();
    assert!((smooth_bend.bend_e - 10f64.powf(0.8 * 2.0)).abs() < 1e-9);
    assert!((smooth_bend.density - 1.0 * 0.2).abs() < 1e-12);
}

#[test]
fn identity_preserving_by_hand() {
    let base = params(1e4, 10.0, 0.2, 5e-4);
    let b = scores(5, 5, 5, 5);
    let t = scores(7, 5, 5, 5);
    let out = map_scores(&base, &b, &t, &AlphaCoeffs::default(), MapMode::IdentityPreserving, Pairing::SmoothBend).unwrap();
    assert!((out.memb_e - 10f64.powf(4.8)).abs() / 10f64.powf(4.8) < 1e-12);
    assert!((out.memb_e - 6.31e4).abs() < 0.01e4);
    assert_eq!((out.bend_e, out.density, out.thickness), (10.0, 0.2, 5e-4));
    let thin = map_scores(&base, &b, &scores(5, 5, 5, 1), &AlphaCoeffs::default(), MapMode::IdentityPreserving, Pairing::SmoothBend).unwrap();
    assert!((thin.thickness - 0.6 * 5e-4).abs() < 1e-15);
}

#[test]
fn scores_and_results_are_checked() {
    let base = params(1e4, 10.0, 0.2, 5e-4);
    let b = scores(5, 5, 5, 5);
    let r = map_scores(&base, &b, &scores(11, 5, 5, 5), &AlphaCoeffs::default(), MapMode::IdentityPreserving, Pairing::SmoothBend);
    assert_eq!(r.unwrap_err().code(), "SCORE_OUT_OF_RANGE");
    let steep = AlphaCoeffs { alpha_t: 0.5, ..Default::default() };
    let r = map_scores(&base, &b, &scores(5, 5, 5, 1), &steep, MapMode::IdentityPreserving, Pairing::SmoothBend);
    assert_eq!(r.unwrap_err().code(), "NONPOSITIVE_RESULT");
    assert_eq!(MaterialRegistry::from_json_str("{\"x\": 1}").unwrap_err().code(), "BAD_REGISTRY");
}

#[test]
fn monotone_on_a_grid() {
    let base = params(2e4, 12.0, 0.2, 5e-4);
    let b = scores(5, 5, 5, 5);
    let a = AlphaCoeffs::default();
    let run = |soft, thick| map_scores(&base, &b, &scores(soft, 5, 5, thick), &a, MapMode::IdentityPreserving, Pairing::SmoothBend).unwrap();
    for soft in 1..=10 {
        for thick in 1..=10 {
            let here = run(soft, thick);
            if soft < 10 {
                assert!(run(soft + 1, thick).memb_e > here.memb_e);
            }
            if thick < 10 {
                assert!(run(soft, thick + 1).thickness > here.thickness);
            }
        }
    }
}

fn arb_scores() -> impl Strategy<Value = DescriptorScores> {
    (1..=10i32, 1..=10i32, 1..=10i32, 1..=10i32).prop_map(|(a, b, c, d)| scores(a, b, c, d))
}

proptest! {
    #[test]
    fn softer_targets_stiffen_membranes(base in arb_scores(), t in arb_scores(), alpha in 0.01..0.1f64) {
        let reg = MaterialRegistry::default();
        let (p, _) = reg.lookup_base("wool").unwrap();
        let a = AlphaCoeffs { alpha_m: alpha, alpha_b: alpha, alpha_d: alpha, alpha_t: alpha };
        let out = map_scores(&p, &base, &t, &a, MapMode::IdentityPreserving, Pairing::SmoothBend).unwrap();
        if t.soft < 10 {
            let up = DescriptorScores { soft: t.soft + 1, ..t };
            let more = map_scores(&p, &base, &up, &a, MapMode::IdentityPreserving, Pairing::SmoothBend).unwrap();
            prop_assert!(more.memb_e > out.memb_e);
        }
        for v in [out.memb_e, out.bend_e, out.density, out.thickness] {
            prop_assert!(v > 0.0 && v.is_finite());
        }
    }
}
