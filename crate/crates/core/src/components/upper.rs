//! Bodice, turtle band, sleeves and cuffs.

use super::{lower, solve_increasing, BuildError, Chain, LabeledPanel, PanelSet, PartContext, PartInput};
use crate::geometry::{edge_length, pt, Edge, Placement, Point, Side};

/// Per-side bodice measurements, in cm.
#[derive(Debug, Clone, Copy)]
struct SideDims {
    /// Front and back half-widths at the underarm.
    cw_front: f64,
    cw_back: f64,
    /// Horizontal hem offset from the underarm point, shared by front and back.
    hem_offset: f64,
    /// Extra hem drop at this side.
    drop: f64,
    /// Flat half-hem lengths for a waist seam, front and back.
    flat: Option<(f64, f64)>,
}

struct Bodice {
    length: f64,
    hem_centre: f64,
    nw: f64,
    fd: f64,
    bd: f64,
    sw: f64,
    shoulder_drop: f64,
    ad: f64,
    arm_curve: f64,
    inset: f64,
    wp: f64,
    style: String,
    curve: f64,
    v_curve: f64,
}

fn shoulder_height(input: &PartInput) -> f64 {
    input.body.waist_height() + input.body.torso_length
}

pub(crate) fn shirt(input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    let body = input.body;
    let chest = input.cm("shirt.width");
    let whole = input.cfg.is_wholebody();
    let fitted = input.meta("upper") == "FittedShirt";
    let shaping = match (fitted, whole) {
        (false, _) => 0.0,
        (true, true) => input.value("wholebody.waist_shaping"),
        (true, false) => input.value("shirt.waist_shaping"),
    };
    let sw = input.cm("shirt.shoulder_width") / 2.0;
    let nw = input.cm("collar.width") / 2.0;
    let length = if whole {
        body.torso_length + input.cm("wholebody.waist_drop") + input.cm("wholebody.bodice_blouse")
    } else {
        input.cm("shirt.length")
    };
    let d = Bodice {
        length,
        hem_centre: if whole { 0.0 } else { input.cm("shirt.hem_curve") },
        nw,
        fd: input.cm("collar.front_depth"),
        bd: input.cm("collar.back_depth"),
        sw,
        shoulder_drop: (sw - nw).max(0.0) * input.value("shirt.shoulder_slope").to_radians().tan(),
        ad: input.cm("shirt.armhole_depth"),
        arm_curve: input.value("shirt.armhole_curve"),
        inset: shaping * chest / 4.0,
        wp: input.value("shirt.waist_position"),
        style: input.text("collar.style").to_string(),
        curve: input.value("collar.curve"),
        v_curve: input.value("collar.v_curve"),
    };

    let sides: [SideDims; 2] = if whole {
        let segs = match ctx.openings.get("waist_top") {
            Some(s) if s.len() == 4 => s.clone(),
            _ => lower::lower_waist_top(input)?,
        };
        let side = |f: f64, b: f64| SideDims {
            cw_front: chest / 4.0 + (f - b) / 2.0,
            cw_back: chest / 4.0 - (f - b) / 2.0,
            hem_offset: (f + b) / 2.0 - chest / 4.0,
            drop: 0.0,
            flat: Some((f, b)),
        };
        [side(segs[0], segs[2]), side(segs[1], segs[3])]
    } else {
        let ff = input.value("shirt.front_fraction");
        let off = (input.value("shirt.flare") - 1.0) * chest / 4.0;
        let asym = if input.flag("shirt.asymmetric") { input.cm("shirt.asym_amount") } else { 0.0 };
        let side = |drop| SideDims {
            cw_front: chest * ff / 2.0,
            cw_back: chest * (1.0 - ff) / 2.0,
            hem_offset: off,
            drop,
            flat: None,
        };
        [side(asym), side(0.0)]
    };

    let y = shoulder_height(input);
    let front_at = Placement::new([0.0, y, 15.0], 0.0, Side::Front);
    let back_at = Placement::new([0.0, y, -15.0], 180.0, Side::Back);
    let open = input.flag("shirt.open_front");

    let mut ps = PanelSet::default();
    let fronts: Vec<LabeledPanel> = if open {
        let mut left = half_chain(&d, &sides[0], true);
        let top = left.end();
        left.push("center_l", Edge::line(top, start_of(&left)));
        let mut right = half_chain(&d, &sides[1], true);
        let top_r = right.end();
        right.push("center_l", Edge::line(top_r, start_of(&right)));
        let l = left.into_panel("bodice_front_l", "bodice_front_l", front_at)?;
        let mut right_at = front_at;
        right_at.translation[0] = 0.0;
        let r = right.into_panel("bodice_front_r_src", "", right_at)?.mirrored("bodice_front_r", "bodice_front_r");
        vec![ps.add(l), ps.add(r)]
    } else {
        let mut c = half_chain(&d, &sides[0], true);
        c.append_mirror_of(&half_chain(&d, &sides[1], true));
        vec![ps.add(c.into_panel("bodice_front", "bodice_front", front_at)?)]
    };
    let mut bc = half_chain(&d, &sides[0], false);
    bc.append_mirror_of(&half_chain(&d, &sides[1], false));
    let back = ps.add(bc.into_panel("bodice_back", "bodice_back", back_at)?);

    let front_refs = |labels: &[&str]| -> Vec<_> { fronts.iter().flat_map(|p| p.refs(labels)).collect() };
    let front_prefix = |prefix: &str| -> Vec<_> { fronts.iter().flat_map(|p| p.refs_with_prefix(prefix)).collect() };

    let hem: Vec<_> = front_refs(&["hem_l", "hem_r"]).into_iter().chain(back.refs(&["hem_l", "hem_r"])).collect();
    ps.interfaces.insert("hem".into(), hem);
    for s in ["l", "r"] {
        let arm = format!("armhole_{s}");
        let refs: Vec<_> = front_refs(&[&arm]).into_iter().chain(back.refs(&[&arm])).collect();
        ps.interfaces.insert(arm, refs);
    }
    let neck: Vec<_> = front_prefix("neckline").into_iter().chain(back.refs_with_prefix("neckline")).collect();
    ps.interfaces.insert("neckline".into(), neck);
    for s in ["l", "r"] {
        let side_labels = [format!("side_lower_{s}"), format!("side_upper_{s}")];
        let side_labels: Vec<&str> = side_labels.iter().map(String::as_str).collect();
        ps.interfaces.insert(format!("side_seam_front_{s}"), front_refs(&side_labels));
        ps.interfaces.insert(format!("side_seam_back_{s}"), back.refs(&side_labels));
        let sh = format!("shoulder_{s}");
        ps.interfaces.insert(format!("shoulder_front_{s}"), front_refs(&[&sh]));
        ps.interfaces.insert(format!("shoulder_back_{s}"), back.refs(&[&sh]));
        ps.stitch_pairs(&format!("side_seam_front_{s}"), &format!("side_seam_back_{s}"), false);
        ps.stitch_pairs(&format!("shoulder_front_{s}"), &format!("shoulder_back_{s}"), false);
    }
    if open {
        ps.interfaces.insert("center_front".into(), front_refs(&["center_l", "center_r"]));
    }
    Ok(ps)
}

fn start_of(c: &Chain) -> Point {
    c.edges[0].start()
}

/// `+x` half of a bodice panel, from the hem centre to the neckline centre.
fn half_chain(d: &Bodice, s: &SideDims, front: bool) -> Chain {
    let cw = if front { s.cw_front } else { s.cw_back };
    let mut c = Chain::default();
    let (centre, corner) = match s.flat {
        Some((f, b)) => (pt(0.0, -d.length), pt(if front { f } else { b }, -d.length)),
        None => (pt(0.0, -d.length - d.hem_centre), pt(cw + s.hem_offset, -d.length - s.drop)),
    };
    let hem = if s.flat.is_some() || (d.hem_centre == 0.0 && s.drop == 0.0) {
        Edge::line(centre, corner)
    } else {
        Edge::qbez(centre, pt(corner.x / 2.0, centre.y), corner)
    };
    c.push("hem_l", hem);
    let a = pt(cw, -d.ad);
    let w = a.lerp(corner, d.wp) - pt(d.inset, 0.0);
    c.push("side_lower_l", Edge::line(corner, w));
    c.push("side_upper_l", Edge::line(w, a));
    let sh = pt(d.sw, -d.shoulder_drop);
    let armpit_corner = pt(sh.x, a.y);
    c.push("armhole_l", Edge::qbez(a, a.lerp(sh, 0.5).lerp(armpit_corner, d.arm_curve), sh));
    let n = pt(d.nw, 0.0);
    c.push("shoulder_l", Edge::line(sh, n));
    if front {
        let f = pt(0.0, -d.fd);
        match d.style.as_str() {
            "VNeck" => {
                c.push("neckline_l", Edge::bulged(n, f, d.v_curve));
            }
            "Collarless" => {
                let k = pt(d.nw, -d.fd);
                c.push("neckline_a_l", Edge::line(n, k));
                c.push("neckline_b_l", Edge::line(k, f));
            }
            _ => {
                let k = pt(d.nw, -d.fd);
                c.push("neckline_l", Edge::qbez(n, n.lerp(f, 0.5).lerp(k, d.curve), f));
            }
        }
    } else {
        let b = pt(0.0, -d.bd);
        let k = pt(d.nw, -d.bd);
        c.push("neckline_l", Edge::qbez(n, n.lerp(b, 0.5).lerp(k, 0.5), b));
    }
    c
}

pub(crate) fn collar(input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    let mut ps = PanelSet::default();
    if input.text("collar.style") != "Turtle" {
        return Ok(ps);
    }
    let segs = match ctx.openings.get("neckline") {
        Some(s) if s.len() == 4 => s.clone(),
        _ => {
            let bodice = shirt(input, &PartContext::default())?;
            bodice.interface_lengths("neckline").expect("bodice neckline")
        }
    };
    let h = input.cm("collar.band_height");
    let delta = input.value("collar.band_taper") * h.min(0.4 * segs.iter().cloned().fold(f64::INFINITY, f64::min));
    let bow = input.value("collar.band_curve");
    let y = shoulder_height(input);
    let open = input.flag("shirt.open_front");

    let front_half = |len: f64| {
        let mut c = Chain::default();
        c.push("bottom_l", Edge::line(pt(0.0, 0.0), pt(len, 0.0)))
            .push("side_l", Edge::line(pt(len, 0.0), pt(len - delta, h)))
            .push("top_l", Edge::bulged(pt(len - delta, h), pt(0.0, h), bow))
            .push("center_l", Edge::line(pt(0.0, h), pt(0.0, 0.0)));
        c
    };
    let at = Placement::new([0.0, y, 8.0], 0.0, Side::Front);
    let fl = ps.add(front_half(segs[0]).into_panel("band_front_l", "band_front_l", at)?);
    let fr = ps.add(front_half(segs[1]).into_panel("band_front_r_src", "", at)?.mirrored("band_front_r", "band_front_r"));

    let (bl, br) = (segs[2], segs[3]);
    let mut c = Chain::default();
    c.push("bottom_r", Edge::line(pt(-br, 0.0), pt(0.0, 0.0)))
        .push("bottom_l", Edge::line(pt(0.0, 0.0), pt(bl, 0.0)))
        .push("side_l", Edge::line(pt(bl, 0.0), pt(bl - delta, h)))
        .push("top", Edge::bulged(pt(bl - delta, h), pt(-br + delta, h), bow))
        .push("side_r", Edge::line(pt(-br + delta, h), pt(-br, 0.0)));
    let back = ps.add(c.into_panel("band_back", "band_back", Placement::new([0.0, y, -8.0], 180.0, Side::Back))?);

    let neck = [fl.refs(&["bottom_l"]), fr.refs(&["bottom_r"]), back.refs(&["bottom_l", "bottom_r"])].concat();
    ps.interfaces.insert("neckline".into(), neck);
    ps.interfaces.insert("band_side_front_l".into(), fl.refs(&["side_l"]));
    ps.interfaces.insert("band_side_back_l".into(), back.refs(&["side_l"]));
    ps.interfaces.insert("band_side_front_r".into(), fr.refs(&["side_r"]));
    ps.interfaces.insert("band_side_back_r".into(), back.refs(&["side_r"]));
    ps.stitch_pairs("band_side_front_l", "band_side_back_l", false);
    ps.stitch_pairs("band_side_front_r", "band_side_back_r", false);
    ps.interfaces.insert("band_center_l".into(), fl.refs(&["center_l"]));
    ps.interfaces.insert("band_center_r".into(), fr.refs(&["center_r"]));
    if !open {
        ps.stitch_pairs("band_center_l", "band_center_r", true);
    }
    Ok(ps)
}

/// Sleeve cap half-widths `(a, b)` whose cap edges match the given armhole lengths.
pub(crate) fn cap_widths(front: f64, back: f64, height: f64, bulge: f64) -> (f64, f64) {
    let solve = |target: f64| {
        solve_increasing(|a| edge_length(&Edge::bulged(pt(0.0, 0.0), pt(-a, -height), bulge)), target, 0.0, target)
    };
    (solve(front), solve(back))
}

pub(crate) fn sleeves(input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    let mut ps = PanelSet::default();
    if input.flag("sleeve.sleeveless") {
        return Ok(ps);
    }
    let need = ["armhole_l", "armhole_r"];
    let arm: Vec<Vec<f64>> = if need.iter().all(|k| ctx.openings.get(*k).is_some_and(|v| v.len() == 2)) {
        need.iter().map(|k| ctx.openings[*k].clone()).collect()
    } else {
        let bodice = shirt(input, &PartContext::default())?;
        need.iter().map(|k| bodice.interface_lengths(k).expect("armhole")).collect()
    };
    let y = shoulder_height(input);
    let x = input.cm("shirt.shoulder_width") / 2.0 + input.cm("sleeve.standoff");
    let angle = input.value("sleeve.angle");
    let left = build_sleeve(input, arm[0][0], arm[0][1], "sleeve_l", Placement::new([x, y, 0.0], angle, Side::Left))?;
    let right = build_sleeve(input, arm[1][0], arm[1][1], "sleeve_r_src", Placement::new([x, y, 0.0], angle, Side::Left))?
        .mirrored("sleeve_r", "sleeve_r");
    for (s, lp) in [("l", left), ("r", right)] {
        let lp = ps.add(lp);
        ps.interfaces.insert(format!("cap_{s}"), lp.refs(&["cap_front", "cap_back"]));
        ps.interfaces.insert(format!("end_{s}"), lp.refs(&["end"]));
        ps.interfaces.insert(format!("underarm_front_{s}"), lp.refs(&["seam_upper_front", "seam_lower_front"]));
        ps.interfaces.insert(format!("underarm_back_{s}"), lp.refs(&["seam_upper_back", "seam_lower_back"]));
        ps.stitch_pairs(&format!("underarm_front_{s}"), &format!("underarm_back_{s}"), true);
    }
    Ok(ps)
}

fn build_sleeve(input: &PartInput, front: f64, back: f64, name: &str, at: Placement) -> Result<LabeledPanel, BuildError> {
    let h = input.value("sleeve.cap_height") * front.min(back);
    let (a, b) = cap_widths(front, back, h, input.value("sleeve.cap_curve"));
    let bulge = input.value("sleeve.cap_curve");
    let m = a.min(b);
    let d1 = (1.0 - input.value("sleeve.elbow_width")) * m;
    let de = (1.0 - input.value("sleeve.end_width")) * m;
    let len = input.cm("sleeve.length");
    let ye = -h - input.value("sleeve.elbow_position") * len;
    let yh = -h - len;
    let end_bow = {
        let chord = a + b - 2.0 * de;
        if chord > 0.0 { 2.0 * input.cm("sleeve.end_curve") / chord } else { 0.0 }
    };
    let apex = pt(0.0, 0.0);
    let fc = pt(-a, -h);
    let ef = pt(-a + d1, ye);
    let hf = pt(-a + de, yh);
    let hb = pt(b - de, yh);
    let eb = pt(b - d1, ye);
    let bc = pt(b, -h);
    let mut c = Chain::default();
    c.push("cap_front", Edge::bulged(apex, fc, bulge))
        .push("seam_upper_front", Edge::line(fc, ef))
        .push("seam_lower_front", Edge::line(ef, hf))
        .push("end", Edge::bulged(hf, hb, end_bow))
        .push("seam_lower_back", Edge::line(hb, eb))
        .push("seam_upper_back", Edge::line(eb, bc))
        .push("cap_back", Edge::bulged(bc, apex, bulge));
    c.into_panel(name, name, at)
}

pub(crate) fn sleeve_cuffs(input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    if input.text("sleeve.cuff.type") == "None" || input.flag("sleeve.sleeveless") {
        return Ok(PanelSet::default());
    }
    let ends = match (ctx.openings.get("end_l"), ctx.openings.get("end_r")) {
        (Some(l), Some(r)) => [l.clone(), r.clone()],
        _ => {
            let s = sleeves(input, &PartContext::default())?;
            [s.interface_lengths("end_l").expect("sleeve end"), s.interface_lengths("end_r").expect("sleeve end")]
        }
    };
    cuffs(input, "sleeve.cuff", "sleeve_cuff", ends, shoulder_height(input) - input.body.arm_length)
}

/// Tubular cuff panels for two openings; top edges follow the opening segments.
pub(crate) fn cuffs(input: &PartInput, at: &str, name: &str, openings: [Vec<f64>; 2], y: f64) -> Result<PanelSet, BuildError> {
    let kind = input.text(&format!("{at}.type")).to_string();
    let mut ps = PanelSet::default();
    for (i, (s, segs)) in [("l", &openings[0]), ("r", &openings[1])].into_iter().enumerate() {
        let top: f64 = segs.iter().sum();
        let flare = if kind == "Flare" { 1.0 + input.value(&format!("{at}.flare")) } else { 1.0 };
        let fold = if kind == "Fold" { 1.0 + input.value(&format!("{at}.fold_ratio")) } else { 1.0 };
        let bottom = top * input.value(&format!("{at}.tightness")) * flare;
        let h = input.cm(&format!("{at}.length")) * fold;
        let mut c = Chain::default();
        c.push("bottom", Edge::bulged(pt(-bottom / 2.0, -h), pt(bottom / 2.0, -h), input.value(&format!("{at}.bottom_curve"))))
            .push("side_r", Edge::line(pt(bottom / 2.0, -h), pt(top / 2.0, 0.0)));
        let mut x = top / 2.0;
        for (k, len) in segs.iter().enumerate() {
            c.push(&format!("top{k}"), Edge::line(pt(x, 0.0), pt(x - len, 0.0)));
            x -= len;
        }
        c.push("side_l", Edge::line(pt(-top / 2.0, 0.0), pt(-bottom / 2.0, -h)));
        let panel_name = format!("{name}_{s}");
        let at = Placement::new([0.0, y, 0.0], 0.0, if i == 0 { Side::Left } else { Side::Right });
        let lp = if i == 0 {
            c.into_panel(&panel_name, &panel_name, at)?
        } else {
            c.into_panel("cuff_src", "", at)?.mirrored(&panel_name, &panel_name)
        };
        let lp = ps.add(lp);
        let tops: Vec<String> = (0..segs.len()).map(|k| format!("top{k}")).collect();
        let tops: Vec<&str> = tops.iter().map(String::as_str).collect();
        ps.interfaces.insert(format!("top_{s}"), lp.refs(&tops));
        ps.interfaces.insert(format!("cuff_seam_a_{s}"), lp.refs(&["side_r"]));
        ps.interfaces.insert(format!("cuff_seam_b_{s}"), lp.refs(&["side_l"]));
        ps.stitch_pairs(&format!("cuff_seam_a_{s}"), &format!("cuff_seam_b_{s}"), true);
    }
    Ok(ps)
}
