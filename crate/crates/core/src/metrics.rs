//! Pattern comparison: per-panel boundary chamfer distance and F-score.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::assembler::Pattern;
use crate::geometry::{pt, Panel, Point};

pub const DEFAULT_TAU_CM: f64 = 1.0;
pub const DEFAULT_SAMPLES_PER_EDGE: usize = 32;

/// Assignment is exhaustive up to this many panels per role, greedy beyond.
const EXHAUSTIVE_LIMIT: usize = 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("pattern has no panels")]
    EmptyPattern,
}

impl MetricsError {
    pub fn code(&self) -> &'static str {
        "EMPTY_PATTERN"
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Alignment {
    #[default]
    Centroid,
    /// Centroid plus rotation onto the principal axes.
    PrincipalAxes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PanelMetric {
    pub role: String,
    pub a: Option<String>,
    pub b: Option<String>,
    pub chamfer_cm: f64,
    pub fscore: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub chamfer_cm: f64,
    pub fscore: f64,
    pub per_panel: Vec<PanelMetric>,
    pub tau_cm: f64,
}

/// Nearest-neighbour index over a point set, sorted by `x`.
pub struct NearestIndex {
    pts: Vec<Point>,
}

impl NearestIndex {
    pub fn new(points: &[Point]) -> Self {
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        NearestIndex { pts }
    }

    pub fn nearest_distance(&self, q: Point) -> f64 {
        let start = self.pts.partition_point(|p| p.x < q.x);
        let mut best = f64::INFINITY;
        for p in &self.pts[start..] {
            if p.x - q.x >= best {
                break;
            }
            best = best.min(p.dist(q));
        }
        for p in self.pts[..start].iter().rev() {
            if q.x - p.x >= best {
                break;
            }
            best = best.min(p.dist(q));
        }
        best
    }
}

fn directed(from: &[Point], to: &NearestIndex) -> Vec<f64> {
    from.iter().map(|&p| to.nearest_distance(p)).collect()
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 }
}

/// Symmetric chamfer distance: mean of the two directed mean nearest distances.
pub fn chamfer(a: &[Point], b: &[Point]) -> f64 {
    let (ia, ib) = (NearestIndex::new(a), NearestIndex::new(b));
    0.5 * (mean(&directed(a, &ib)) + mean(&directed(b, &ia)))
}

/// F-score at `tau`: precision over `a`, recall over `b`.
pub fn fscore(a: &[Point], b: &[Point], tau: f64) -> f64 {
    let (ia, ib) = (NearestIndex::new(a), NearestIndex::new(b));
    let frac = |d: Vec<f64>| d.iter().filter(|&&x| x <= tau).count() as f64 / d.len().max(1) as f64;
    let p = frac(directed(a, &ib));
    let r = frac(directed(b, &ia));
    if p + r == 0.0 { 0.0 } else { 2.0 * p * r / (p + r) }
}

pub fn centroid(pts: &[Point]) -> Point {
    let n = pts.len().max(1) as f64;
    let s = pts.iter().fold(pt(0.0, 0.0), |acc, &p| acc + p);
    s * (1.0 / n)
}

/// Boundary samples of a panel, aligned as requested.
pub fn panel_cloud(p: &Panel, samples_per_edge: usize, align: Alignment) -> Vec<Point> {
    let pts = p.polyline(samples_per_edge.max(2));
    let c = centroid(&pts);
    let centred: Vec<Point> = pts.iter().map(|&q| q - c).collect();
    match align {
        Alignment::Centroid => centred,
        Alignment::PrincipalAxes => {
            let (sxx, syy, sxy) = centred.iter().fold((0.0, 0.0, 0.0), |(a, b, c), q| (a + q.x * q.x, b + q.y * q.y, c + q.x * q.y));
            let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
            let mut rotated: Vec<Point> = centred.iter().map(|q| q.rotate(-theta)).collect();
            // Resolve the half-turn ambiguity by the sign of the third moment along x.
            if rotated.iter().map(|q| q.x.powi(3)).sum::<f64>() < 0.0 {
                rotated = rotated.into_iter().map(|q| -q).collect();
            }
            rotated
        }
    }
}

/// Penalty for a panel without a counterpart: mean distance of its samples to its centroid.
fn unmatched_penalty(cloud: &[Point]) -> f64 {
    let c = centroid(cloud);
    mean(&cloud.iter().map(|p| p.dist(c)).collect::<Vec<_>>())
}

/// Minimal-cost injective matching of rows to columns (`rows ≤ cols`).
fn assign(cost: &[Vec<f64>]) -> Vec<usize> {
    let (n, m) = (cost.len(), cost.first().map_or(0, Vec::len));
    if m > EXHAUSTIVE_LIMIT {
        let mut used = vec![false; m];
        return cost
            .iter()
            .map(|row| {
                let j = (0..m).filter(|&j| !used[j]).min_by(|&x, &y| row[x].total_cmp(&row[y])).expect("free column");
                used[j] = true;
                j
            })
            .collect();
    }
    fn rec(i: usize, cost: &[Vec<f64>], used: &mut Vec<bool>, cur: &mut Vec<usize>, acc: f64, best: &mut (f64, Vec<usize>)) {
        if acc >= best.0 {
            return;
        }
        if i == cost.len() {
            *best = (acc, cur.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                cur.push(j);
                rec(i + 1, cost, used, cur, acc + cost[i][j], best);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let mut best = (f64::INFINITY, vec![]);
    rec(0, cost, &mut vec![false; m], &mut Vec::with_capacity(n), 0.0, &mut best);
    best.1
}

fn by_role(p: &Pattern) -> BTreeMap<&str, Vec<&Panel>> {
    let mut g: BTreeMap<&str, Vec<&Panel>> = BTreeMap::new();
    for panel in &p.panels {
        g.entry(panel.role.as_str()).or_default().push(panel);
    }
    g
}

/// Compares two patterns panel by panel, matching panels by role.
pub fn compare_patterns(a: &Pattern, b: &Pattern, samples_per_edge: usize, tau: f64, align: Alignment) -> Result<MetricReport, MetricsError> {
    if a.panels.is_empty() || b.panels.is_empty() {
        return Err(MetricsError::EmptyPattern);
    }
    let (ga, gb) = (by_role(a), by_role(b));
    let mut roles: Vec<&str> = ga.keys().chain(gb.keys()).copied().collect();
    roles.sort_unstable();
    roles.dedup();

    let mut per_panel = vec![];
    for role in roles {
        let pa = ga.get(role).cloned().unwrap_or_default();
        let pb = gb.get(role).cloned().unwrap_or_default();
        let ca: Vec<Vec<Point>> = pa.iter().map(|p| panel_cloud(p, samples_per_edge, align)).collect();
        let cb: Vec<Vec<Point>> = pb.iter().map(|p| panel_cloud(p, samples_per_edge, align)).collect();
        let flip = ca.len() > cb.len();
        let (rows, cols) = if flip { (&cb, &ca) } else { (&ca, &cb) };
        let cost: Vec<Vec<f64>> = rows.iter().map(|r| cols.iter().map(|c| chamfer(r, c)).collect()).collect();
        let matching = assign(&cost);
        let mut matched_cols = vec![false; cols.len()];
        for (i, &j) in matching.iter().enumerate() {
            matched_cols[j] = true;
            let (ia, ib) = if flip { (j, i) } else { (i, j) };
            per_panel.push(PanelMetric {
                role: role.into(),
                a: Some(pa[ia].name.clone()),
                b: Some(pb[ib].name.clone()),
                chamfer_cm: cost[i][j],
                fscore: fscore(&ca[ia], &cb[ib], tau),
            });
        }
        for (j, used) in matched_cols.iter().enumerate() {
            if *used {
                continue;
            }
            let (name_a, name_b) = if flip { (Some(pa[j].name.clone()), None) } else { (None, Some(pb[j].name.clone())) };
            per_panel.push(PanelMetric { role: role.into(), a: name_a, b: name_b, chamfer_cm: unmatched_penalty(&cols[j]), fscore: 0.0 });
        }
    }
    let chamfer_cm = mean(&per_panel.iter().map(|m| m.chamfer_cm).collect::<Vec<_>>());
    let fscore = mean(&per_panel.iter().map(|m| m.fscore).collect::<Vec<_>>());
    Ok(MetricReport { chamfer_cm, fscore, per_panel, tau_cm: tau })
}

pub fn pattern_chamfer(a: &Pattern, b: &Pattern, samples_per_edge: usize) -> Result<MetricReport, MetricsError> {
    compare_patterns(a, b, samples_per_edge, DEFAULT_TAU_CM, Alignment::Centroid)
}

pub fn pattern_fscore(a: &Pattern, b: &Pattern, tau: f64) -> Result<f64, MetricsError> {
    Ok(compare_patterns(a, b, DEFAULT_SAMPLES_PER_EDGE, tau, Alignment::Centroid)?.fscore)
}

/// Share of patterns failing the validity check.
pub fn failure_rate(patterns: &[Pattern]) -> f64 {
    if patterns.is_empty() {
        return 0.0;
    }
    patterns.iter().filter(|p| !crate::assembler::check_pattern(p).ok).count() as f64 / patterns.len() as f64
}
