mod common;

use common::{fixture, fixture_config};
use patternc_core::codec::*;
use patternc_core::sampler::{sample_config, stable_hash, SamplingWeights};
use patternc_core::schema::*;
use proptest::prelude::*;

#[test]
fn round_trip_on_1000_sampled_configs() {
    let reg = FieldRegistry::default();
    let w = SamplingWeights::default();
    for i in 0..1000 {
        let c = sample_config(stable_hash(5, i), &w, &reg);
        let back = decode_merge(&make_skeleton(&c, &reg), &encode_vector(&c, &reg), &reg).unwrap();
        assert_eq!(back, c, "seed index {i}");
        assert_eq!(canonical_serialize(&back, &reg), canonical_serialize(&c, &reg));
    }
}

#[test]
fn round_trip_on_listings() {
    let reg = FieldRegistry::default();
    for name in ["skirt_listing.json", "pants_listing.json", "shirt.json"] {
        let c = fixture_config(name);
        let back = decode_merge(&make_skeleton(&c, &reg), &encode_vector(&c, &reg), &reg).unwrap();
        assert_eq!(back, c, "{name}");
    }
}

#[test]
fn mask_follows_applicability() {
    let reg = FieldRegistry::default();
    let w = SamplingWeights::default();
    for i in 0..500 {
        let c = sample_config(stable_hash(6, i), &w, &reg);
        let enc = encode_vector(&c, &reg);
        for f in reg.float_slots() {
            let slot = f.vector_slot.unwrap();
            let section_on = reg.sections.iter().filter(|s| f.path.starts_with(&format!("{}.", s.path))).all(|s| s.applicability.holds(&c));
            assert_eq!(enc.mask[slot] == 1, f.applicability.holds(&c) && section_on, "{}", f.path);
        }
    }
}

#[test]
fn skeleton_of_pants_listing() {
    let reg = FieldRegistry::default();
    let c = parse_config(&fixture("pants_listing.json")).unwrap();
    let sk = make_skeleton(&c, &reg);
    assert_eq!(sk.number("pants.length"), Some(0.0));
    assert_eq!(sk.text("pants.cuff.type"), Some("None"));
    assert_eq!(make_skeleton(&sk, &reg), sk);
    for (path, leaf) in c.leaves() {
        if reg.slot_of(&path).is_none() {
            assert_eq!(sk.get_leaf(&path), Some(leaf));
        }
    }
    let meta_only = parse_config(r#"{"meta": {"upper": "None", "wb": "None", "bottom": "None"}}"#).unwrap();
    assert_eq!(make_skeleton(&meta_only, &reg), meta_only);
}

#[test]
fn encoding_the_pants_listing() {
    let reg = FieldRegistry::default();
    let c = parse_config(&fixture("pants_listing.json")).unwrap();
    let enc = encode_vector(&c, &reg);
    assert_eq!(enc.values.len(), 76);
    assert_eq!(enc.values[reg.slot_of("pants.length").unwrap()], 0.203);
    for f in reg.float_slots() {
        let on = enc.mask[f.vector_slot.unwrap()] == 1;
        assert_eq!(on, c.has(&f.path), "{}", f.path);
        assert!(!on || matches!(f.part, Some(Part::Pants | Part::PantCuff)), "{}", f.path);
    }
    let empty = parse_config(r#"{"meta": {"upper": "None", "wb": "None", "bottom": "None"}}"#).unwrap();
    assert!(encode_vector(&empty, &reg).mask.iter().all(|&b| b == 0));
}

#[test]
fn mismatched_mask_is_rejected() {
    let reg = FieldRegistry::default();
    let c = parse_config(&fixture("pants_listing.json")).unwrap();
    let mut enc = encode_vector(&c, &reg);
    let slot = reg.slot_of("pencil_skirt.length").unwrap();
    enc.mask[slot] = 1;
    let err = decode_merge(&make_skeleton(&c, &reg), &enc, &reg).unwrap_err();
    assert_eq!(err.code(), "MASK_SKELETON_MISMATCH");
    assert!(Encoded::new(vec![0.0; 75], vec![false; 75]).is_err());
}

#[test]
fn out_of_range_predictions_are_clamped() {
    let reg = FieldRegistry::default();
    let c = parse_config(&fixture("pants_listing.json")).unwrap();
    let mut enc = encode_vector(&c, &reg);
    let slot = reg.slot_of("pants.length").unwrap();
    enc.values[slot] = 1.7;
    let out = decode_merge(&make_skeleton(&c, &reg), &enc, &reg).unwrap();
    assert_eq!(out.number("pants.length"), Some(1.0));
    assert!(validate_config(&out, &reg).ok);
    enc.values[slot] = -0.25;
    let out = decode_merge(&make_skeleton(&c, &reg), &enc, &reg).unwrap();
    assert_eq!(out.number("pants.length"), Some(0.0));
}

#[test]
fn numeric_loss_hand_values() {
    let mut pred = vec![0.0; 76];
    let mut target = vec![0.0; 76];
    let mut mask = vec![false; 76];
    pred[0] = 0.5;
    pred[1] = 0.2;
    target[0] = 0.4;
    target[1] = 0.9;
    mask[0] = true;
    assert!((masked_l1(&pred, &target, &mask) - 0.1).abs() < 1e-12);
    assert!((LossConfig::default().numeric_term(&pred, &target, &mask) - 0.01).abs() < 1e-12);
    assert_eq!(masked_l1(&pred, &pred, &[true; 76]), 0.0);
}

fn vec76() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0f64, 76)
}

proptest! {
    #[test]
    fn masked_l1_is_a_pseudometric(a in vec76(), b in vec76(), c in vec76(), m in prop::collection::vec(any::<bool>(), 76)) {
        let d = |x: &[f64], y: &[f64]| masked_l1(x, y, &m);
        prop_assert!(d(&a, &b) >= 0.0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert_eq!(d(&a, &a), 0.0);
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12);
        let mut a2 = a.clone();
        for i in 0..76 {
            if !m[i] {
                a2[i] = 0.5;
            }
        }
        prop_assert_eq!(d(&a2, &b), d(&a, &b));
    }

    #[test]
    fn decoded_predictions_always_validate(seed in any::<u64>(), v in prop::collection::vec(-2.0..3.0f64, 76)) {
        let reg = FieldRegistry::default();
        let c = sample_config(seed, &SamplingWeights::default(), &reg);
        let mut enc = encode_vector(&c, &reg);
        enc.values = v;
        let out = decode_merge(&make_skeleton(&c, &reg), &enc, &reg).unwrap();
        prop_assert!(validate_config(&out, &reg).ok);
    }
}
