//! Waistband, skirts, trousers and trouser cuffs.

use super::{upper, BuildError, Chain, LabeledPanel, PanelSet, PartContext, PartInput, HIGH_WAIST_THRESHOLD, SLIT_THRESHOLD};
use crate::geometry::{pt, Edge, Placement, Point, Side};

/// Highest waist lift, as a fraction of torso length.
const MAX_RAISE: f64 = 0.3;

const MAX_CUT_BOW: f64 = 0.3;

/// Lift of the waist line above the natural waist caused by a high-rise waistband, in cm.
pub fn waist_raise(input: &PartInput) -> f64 {
    if input.meta("wb") == "None" {
        return 0.0;
    }
    let r = input.normalized("waistband.rise");
    (r - HIGH_WAIST_THRESHOLD).max(0.0) / (1.0 - HIGH_WAIST_THRESHOLD) * MAX_RAISE * input.body.torso_length
}

/// Context for the lower part, from the waistband and waist-seam blocks.
pub(crate) fn lower_context(input: &PartInput) -> PartContext {
    let whole = input.cfg.is_wholebody();
    let mut ctx = PartContext { raise: waist_raise(input), ..Default::default() };
    if whole {
        ctx.raise -= input.cm("wholebody.waist_drop");
        ctx.front_fraction = Some(input.value("wholebody.front_fraction"));
    }
    if input.meta("wb") != "None" {
        ctx.waist_total = Some(input.cm("waistband.waist"));
    } else if whole {
        ctx.waist_total = Some(input.cm("wholebody.waist_ease"));
    }
    ctx
}

/// Builds the lower part and returns it with its context.
pub(crate) fn bottom(input: &PartInput) -> Result<Option<(PanelSet, PartContext)>, BuildError> {
    let ctx = lower_context(input);
    let ps = match input.meta("bottom") {
        "Pants" => pants(input, &ctx)?,
        "PencilSkirt" => pencil_skirt(input, &ctx)?,
        "FlaredSkirt" => flared_skirt(input, &ctx)?,
        _ => return Ok(None),
    };
    Ok(Some((ps, ctx)))
}

/// Lengths of the topmost waist-line interface below the bodice.
pub(crate) fn lower_waist_top(input: &PartInput) -> Result<Vec<f64>, BuildError> {
    let Some((b, mut ctx)) = bottom(input)? else {
        let ctx = lower_context(input);
        return Ok(vec![ctx.waist_total.unwrap_or(input.body.waist) / 4.0; 4]);
    };
    let top = b.interface_lengths("waist_top").expect("waist_top");
    if input.meta("wb") == "None" {
        return Ok(top);
    }
    ctx.openings.insert("waist_top".into(), top);
    let wb = waistband(input, &ctx)?;
    Ok(wb.interface_lengths("waist_top").expect("waistband top"))
}

fn waist_y(input: &PartInput) -> f64 {
    input.body.waist_height()
}

/// Top width of a lower part sitting `-y_top` below the natural waist.
fn own_top(input: &PartInput, y_top: f64, waist: f64, hips: f64) -> f64 {
    let t = (-y_top / input.body.hip_depth()).clamp(0.0, 1.0);
    waist + (hips - waist) * t
}

pub(crate) fn waistband(input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    let segs = match ctx.openings.get("waist_top") {
        Some(s) if s.len() == 4 => s.clone(),
        _ => vec![ctx.waist_total.unwrap_or_else(|| input.cm("waistband.waist")) / 4.0; 4],
    };
    let ratio = if input.meta("wb") == "FittedWB" { input.value("waistband.width") } else { 1.0 };
    let total: f64 = segs.iter().sum();
    let delta = total * (1.0 - ratio) / 4.0;
    let h = input.value("waistband.height");
    let y = waist_y(input) + ctx.raise;
    let mut ps = PanelSet::default();
    let mut panels = vec![];
    for (i, (name, z, rot, side)) in [("waistband_front", 10.0, 0.0, Side::Front), ("waistband_back", -10.0, 180.0, Side::Back)]
        .into_iter()
        .enumerate()
    {
        let (sl, sr) = (segs[2 * i], segs[2 * i + 1]);
        let mut c = Chain::default();
        c.push("bottom_r", Edge::line(pt(-sr, 0.0), pt(0.0, 0.0)))
            .push("bottom_l", Edge::line(pt(0.0, 0.0), pt(sl, 0.0)))
            .push("side_l", Edge::line(pt(sl, 0.0), pt(sl - delta, h)))
            .push("top_l", Edge::line(pt(sl - delta, h), pt(0.0, h)))
            .push("top_r", Edge::line(pt(0.0, h), pt(-sr + delta, h)))
            .push("side_r", Edge::line(pt(-sr + delta, h), pt(-sr, 0.0)));
        panels.push(ps.add(c.into_panel(name, name, Placement::new([0.0, y, z], rot, side))?));
    }
    let (f, b) = (&panels[0], &panels[1]);
    ps.interfaces.insert("waist_bottom".into(), [f.refs(&["bottom_l", "bottom_r"]), b.refs(&["bottom_l", "bottom_r"])].concat());
    ps.interfaces.insert("waist_top".into(), [f.refs(&["top_l", "top_r"]), b.refs(&["top_l", "top_r"])].concat());
    for s in ["l", "r"] {
        let side = format!("side_{s}");
        ps.interfaces.insert(format!("wb_side_front_{s}"), f.refs(&[&side]));
        ps.interfaces.insert(format!("wb_side_back_{s}"), b.refs(&[&side]));
        ps.stitch_pairs(&format!("wb_side_front_{s}"), &format!("wb_side_back_{s}"), false);
    }
    Ok(ps)
}

/// Inserts the shared skirt interfaces (waist line and side seams) and sews the side seams.
fn skirt_interfaces(ps: &mut PanelSet, front: &LabeledPanel, back: &LabeledPanel) {
    let top = |p: &LabeledPanel| p.refs(&["top_l", "top_r"]);
    ps.interfaces.insert("waist_top".into(), [top(front), top(back)].concat());
    for s in ["l", "r"] {
        let labels = [format!("side_lower_{s}"), format!("side_upper_{s}")];
        let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
        ps.interfaces.insert(format!("side_seam_front_{s}"), front.refs(&labels));
        ps.interfaces.insert(format!("side_seam_back_{s}"), back.refs(&labels));
        ps.stitch_pairs(&format!("side_seam_front_{s}"), &format!("side_seam_back_{s}"), false);
    }
}

struct PencilDims {
    len: f64,
    hd: f64,
    y_top: f64,
    off_hip: f64,
    off_hem: f64,
    side_rise: f64,
    cut: f64,
    style: String,
    hip_curve: f64,
}

pub(crate) fn pencil_skirt(input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    let hd = input.body.hip_depth();
    let len = input.cm("pencil_skirt.length");
    let y_top = ctx.raise - (1.0 - input.value("pencil_skirt.rise")) * hd;
    let hip_tot = input.cm("pencil_skirt.hip_ease");
    let top_tot = ctx.waist_total.unwrap_or_else(|| own_top(input, y_top, input.body.waist, hip_tot));
    let ff = ctx.front_fraction.unwrap_or(0.5);
    let d = PencilDims {
        len,
        hd,
        y_top,
        off_hip: (hip_tot - top_tot) / 4.0,
        off_hem: hip_tot * (input.value("pencil_skirt.flare") - 1.0) / 4.0,
        side_rise: input.value("pencil_skirt.low_angle").to_radians().tan() * (hip_tot / 4.0).min(0.4 * (len - hd)),
        cut: input.cm("pencil_skirt.cut_depth"),
        style: input.text("pencil_skirt.style_side_cut").to_string(),
        hip_curve: input.value("pencil_skirt.hip_curve"),
    };
    let [fs, bs, ls, rs] = ["front_slit", "back_slit", "left_slit", "right_slit"].map(|k| input.value(&format!("pencil_skirt.{k}")));
    let y = waist_y(input);
    let mut ps = PanelSet::default();
    let mut panels = vec![];
    for (name, frac, centre_slit, z, rot, side) in [
        ("skirt_front", ff, fs, 12.0, 0.0, Side::Front),
        ("skirt_back", 1.0 - ff, bs, -12.0, 180.0, Side::Back),
    ] {
        let tw = top_tot * frac / 2.0;
        let mut c = pencil_half(&d, tw, centre_slit, ls);
        c.append_mirror_of(&pencil_half(&d, tw, centre_slit, rs));
        panels.push(ps.add(c.into_panel(name, name, Placement::new([0.0, y, z], rot, side))?));
    }
    skirt_interfaces(&mut ps, &panels[0], &panels[1]);
    for (s, p) in [("front", &panels[0]), ("back", &panels[1])] {
        ps.interfaces.insert(format!("slit_{s}"), p.refs(&["slit_l", "slit_r"]));
        ps.interfaces.insert(format!("side_slit_{s}"), p.refs(&["side_slit_l", "side_slit_r"]));
    }
    ps.interfaces.retain(|_, v| !v.is_empty());
    Ok(ps)
}

/// `+x` half of a pencil-skirt panel, from the hem centre to the waist centre.
fn pencil_half(d: &PencilDims, tw: f64, centre_slit: f64, side_slit: f64) -> Chain {
    let mut c = Chain::default();
    let mut m = pt(0.0, -d.len);
    if centre_slit >= SLIT_THRESHOLD {
        let sh = centre_slit * 0.9 * (d.len - d.hd);
        let eps = (0.05 * sh).max(0.25);
        let apex = pt(0.0, -d.len + sh);
        m = pt(eps, -d.len);
        c.push("slit_l", Edge::line(apex, m));
    }
    let t = pt(tw, d.y_top);
    let p = pt(tw + d.off_hip, -d.hd);
    let q = pt(p.x + d.off_hem, -d.len + d.side_rise);
    c.push("hem_l", Edge::line(m, q));
    // Cut depth is capped at 15% of the seam chord so short seams stay simple.
    let bow = (2.0 * d.cut / p.dist(q)).min(MAX_CUT_BOW);
    let lower = match d.style.as_str() {
        "Sun" => Edge::bulged(q, p, -bow),
        "Scallop" => Edge::bulged(q, p, bow),
        _ => Edge::line(q, p),
    };
    if side_slit >= SLIT_THRESHOLD {
        let (open, sewn) = lower.split(side_slit.min(0.9));
        c.push("side_slit_l", open).push("side_lower_l", sewn);
    } else {
        c.push("side_lower_l", lower);
    }
    let mid = p.lerp(t, 0.5);
    c.push("side_upper_l", Edge::qbez(p, mid.lerp(pt(p.x, t.y), d.hip_curve), t));
    c.push("top_l", Edge::line(t, pt(0.0, d.y_top)));
    c
}

pub(crate) fn flared_skirt(input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    let hd = input.body.hip_depth();
    let len = input.cm("flared_skirt.length");
    let y_top = ctx.raise - (1.0 - input.value("flared_skirt.rise")) * hd;
    let top_tot = ctx.waist_total.unwrap_or_else(|| own_top(input, y_top, input.body.waist, input.body.hips));
    let ff = ctx.front_fraction.unwrap_or_else(|| input.value("flared_skirt.front_fraction"));
    let off = top_tot * input.value("flared_skirt.flare") / 4.0;
    let drop = if input.flag("flared_skirt.asymmetric") { input.value("flared_skirt.asym_amount") * len } else { 0.0 };
    let hem_bow = input.value("flared_skirt.hem_curve");
    let dip = input.value("flared_skirt.hem_dip");
    let waist_bow = input.value("flared_skirt.waist_curve");
    let side_bow = input.value("flared_skirt.side_curve");
    let half = |tw: f64, drop: f64| {
        let centre = pt(0.0, -len * (1.0 + dip));
        let t = pt(tw, y_top);
        let q = pt(tw + off, -len - drop);
        let mut c = Chain::default();
        c.push("hem_l", Edge::bulged(centre, q, hem_bow))
            .push("side_upper_l", Edge::bulged(q, t, side_bow))
            .push("top_l", Edge::bulged(t, pt(0.0, y_top), -waist_bow));
        c
    };
    let y = waist_y(input);
    let mut ps = PanelSet::default();
    let mut panels = vec![];
    for (name, frac, z, rot, side) in [("skirt_front", ff, 12.0, 0.0, Side::Front), ("skirt_back", 1.0 - ff, -12.0, 180.0, Side::Back)] {
        let tw = top_tot * frac / 2.0;
        let mut c = half(tw, drop);
        c.append_mirror_of(&half(tw, 0.0));
        panels.push(ps.add(c.into_panel(name, name, Placement::new([0.0, y, z], rot, side))?));
    }
    skirt_interfaces(&mut ps, &panels[0], &panels[1]);
    Ok(ps)
}

/// Trouser leg measurements shared by front and back, in cm.
struct LegDims {
    y_top: f64,
    hd: f64,
    cd: f64,
    off_hip: f64,
    knee_in: f64,
    ankle_in: f64,
    y_knee: f64,
    y_ankle: f64,
    hip_curve: f64,
    crotch_curve: f64,
}

pub(crate) fn pants(input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    let body = input.body;
    let hd = body.hip_depth();
    let cd = body.crotch_depth();
    let y_top = ctx.raise - (1.0 - input.value("pants.rise")) * 0.6 * cd;
    let hip_tot = input.cm("pants.width");
    let top_tot = ctx.waist_total.unwrap_or_else(|| own_top(input, y_top, input.cm("pants.waist_ease"), hip_tot));
    let ff = ctx.front_fraction.unwrap_or(0.5);
    let e_front = input.cm("pants.crotch_ext");
    let e_back = e_front + input.cm("pants.back_crotch_extra");
    let off_hip = (hip_tot - top_tot) / 4.0;
    let (wq_f, wq_b) = (top_tot * ff / 2.0, top_tot * (1.0 - ff) / 2.0);
    let thigh = wq_f + off_hip + e_front;
    let knee = thigh * input.value("pants.knee_width");
    let ankle = knee * input.value("pants.flare");
    let leg = input.cm("pants.length");
    let d = LegDims {
        y_top,
        hd,
        cd,
        off_hip,
        knee_in: (thigh - knee) / 2.0,
        ankle_in: (knee - ankle) / 2.0,
        y_knee: -cd - 0.5 * leg,
        y_ankle: -cd - leg,
        hip_curve: input.value("pants.hip_curve"),
        crotch_curve: input.value("pants.crotch_curve"),
    };
    let y = waist_y(input);
    let x = body.hips / 8.0;
    let mut ps = PanelSet::default();
    let front_l = leg_panel(&d, wq_f, e_front).into_panel("pant_front_l", "pant_front_l", Placement::new([x, y, 12.0], 0.0, Side::Front))?;
    let back_l = leg_panel(&d, wq_b, e_back).into_panel("pant_back_l", "pant_back_l", Placement::new([x, y, -12.0], 180.0, Side::Back))?;
    let front_r = front_l.mirrored("pant_front_r", "pant_front_r");
    let back_r = back_l.mirrored("pant_back_r", "pant_back_r");
    let [fl, fr, bl, br] = [front_l, front_r, back_l, back_r].map(|p| ps.add(p));
    ps.interfaces.insert("waist_top".into(), [&fl, &fr, &bl, &br].iter().flat_map(|p| p.refs(&["top"])).collect());
    ps.interfaces.insert("leg_end_l".into(), [fl.refs(&["hem"]), bl.refs(&["hem"])].concat());
    ps.interfaces.insert("leg_end_r".into(), [fr.refs(&["hem"]), br.refs(&["hem"])].concat());
    let out = ["outseam_lower", "outseam_mid", "outseam_upper"];
    let ins = ["inseam_upper", "inseam_lower"];
    for (s, f, b) in [("l", &fl, &bl), ("r", &fr, &br)] {
        ps.interfaces.insert(format!("outseam_front_{s}"), f.refs(&out));
        ps.interfaces.insert(format!("outseam_back_{s}"), b.refs(&out));
        ps.interfaces.insert(format!("inseam_front_{s}"), f.refs(&ins));
        ps.interfaces.insert(format!("inseam_back_{s}"), b.refs(&ins));
        ps.stitch_pairs(&format!("outseam_front_{s}"), &format!("outseam_back_{s}"), false);
        ps.stitch_pairs(&format!("inseam_front_{s}"), &format!("inseam_back_{s}"), false);
    }
    for (s, l, r) in [("front", &fl, &fr), ("back", &bl, &br)] {
        ps.interfaces.insert(format!("crotch_{s}_l"), l.refs(&["crotch"]));
        ps.interfaces.insert(format!("crotch_{s}_r"), r.refs(&["crotch"]));
        ps.stitch_pairs(&format!("crotch_{s}_l"), &format!("crotch_{s}_r"), true);
    }
    Ok(ps)
}

/// Left trouser panel; centre line at `x = 0`, leg towards `+x`, crotch towards `-x`.
fn leg_panel(d: &LegDims, wq: f64, ext: f64) -> Chain {
    let tc = pt(0.0, d.y_top);
    let to = pt(wq, d.y_top);
    let ho = pt(wq + d.off_hip, -d.hd);
    let c = pt(-ext, -d.cd);
    let ki = pt(c.x + d.knee_in, d.y_knee);
    let ai = pt(ki.x + d.ankle_in, d.y_ankle);
    let ko = pt(ho.x - d.knee_in, d.y_knee);
    let ao = pt(ko.x - d.ankle_in, d.y_ankle);
    let scoop = pt(0.0, d.y_top + (-d.cd - d.y_top) * d.crotch_curve);
    let mid: Point = ho.lerp(to, 0.5);
    let mut ch = Chain::default();
    ch.push("crotch", Edge::qbez(tc, scoop, c))
        .push("inseam_upper", Edge::line(c, ki))
        .push("inseam_lower", Edge::line(ki, ai))
        .push("hem", Edge::line(ai, ao))
        .push("outseam_lower", Edge::line(ao, ko))
        .push("outseam_mid", Edge::line(ko, ho))
        .push("outseam_upper", Edge::qbez(ho, mid.lerp(pt(ho.x, to.y), d.hip_curve), to))
        .push("top", Edge::line(to, tc));
    ch
}

pub(crate) fn pant_cuffs(input: &PartInput, ctx: &PartContext) -> Result<PanelSet, BuildError> {
    if input.text("pants.cuff.type") == "None" {
        return Ok(PanelSet::default());
    }
    let ends = match (ctx.openings.get("leg_end_l"), ctx.openings.get("leg_end_r")) {
        (Some(l), Some(r)) => [l.clone(), r.clone()],
        _ => {
            let p = pants(input, &lower_context(input))?;
            [p.interface_lengths("leg_end_l").expect("leg end"), p.interface_lengths("leg_end_r").expect("leg end")]
        }
    };
    let y = input.body.leg_length - input.cm("pants.length");
    upper::cuffs(input, "pants.cuff", "pant_cuff", ends, y)
}
