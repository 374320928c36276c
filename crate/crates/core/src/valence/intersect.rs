use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::{boundary_value, MapExpr};
use crate::error::Result;

use super::trace::BoundaryTrace;

/// Crossings flatter than this (radians) are re-examined before acceptance.
pub const TANGENCY_ANGLE: f64 = 1e-3;
const MAX_COLLECTED: usize = 4096;
const REFINE_SAMPLES: usize = 64;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplicityReport {
    pub simple: bool,
    /// Parameters `(t_a, t_b)` of the first accepted crossing, `t_a < t_b`.
    pub first_intersection: Option<(f64, f64)>,
    pub point: Option<Complex64>,
    /// Crossings found by the polyline sweep (capped).
    pub crossings_found: usize,
    /// Near-tangent or short-loop crossings that refinement rejected.
    pub rejected: usize,
}

#[derive(Clone, Copy, Debug)]
struct Crossing {
    i: usize,
    j: usize,
    s: f64,
    u: f64,
    point: Complex64,
    angle: f64,
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Intersection of `[a, b]` and `[c, d]` as `(s, u)` with point `a + s(b−a)`.
/// Collinear overlaps return the overlap start.
fn segment_intersection(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Option<(f64, f64)> {
    let r = b - a;
    let q = d - c;
    let denom = cross(r, q);
    let ac = c - a;
    if denom == 0.0 {
        if cross(ac, r) != 0.0 {
            return None;
        }
        let rr = r.norm_sqr();
        if rr == 0.0 {
            return None;
        }
        let t0 = (ac.re * r.re + ac.im * r.im) / rr;
        let t1 = t0 + (q.re * r.re + q.im * r.im) / rr;
        let (lo, hi) = (t0.min(t1), t0.max(t1));
        if hi < 0.0 || lo > 1.0 {
            return None;
        }
        let s = lo.max(0.0);
        let qq = q.norm_sqr();
        let p = a + r * s;
        let u = if qq == 0.0 { 0.0 } else { ((p - c).re * q.re + (p - c).im * q.im) / qq };
        return Some((s, u.clamp(0.0, 1.0)));
    }
    let s = cross(ac, q) / denom;
    let u = cross(ac, r) / denom;
    if (0.0..=1.0).contains(&s) && (0.0..=1.0).contains(&u) {
        Some((s, u))
    } else {
        None
    }
}

fn crossing_angle(r: Complex64, q: Complex64) -> f64 {
    if r.norm() == 0.0 || q.norm() == 0.0 {
        return 0.0;
    }
    let a = (q / r).arg().abs();
    a.min(std::f64::consts::PI - a)
}

/// All crossings of non-adjacent segments of the closed polyline, capped.
fn polyline_crossings(points: &[Complex64], cap: usize) -> Vec<Crossing> {
    let n = points.len();
    if n < 4 {
        return Vec::new();
    }
    let seg = |i: usize| (points[i], points[(i + 1) % n]);
    let mut order: Vec<usize> = (0..n).collect();
    let min_x = |i: usize| {
        let (a, b) = seg(i);
        a.re.min(b.re)
    };
    order.sort_by(|&a, &b| min_x(a).total_cmp(&min_x(b)).then(a.cmp(&b)));
    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for &i in &order {
        let (a, b) = seg(i);
        let lo = a.re.min(b.re);
        active.retain(|&j| {
            let (c, d) = seg(j);
            c.re.max(d.re) >= lo
        });
        let (ylo, yhi) = (a.im.min(b.im), a.im.max(b.im));
        for &j in &active {
            let (i0, j0) = (i.min(j), i.max(j));
            if j0 - i0 == 1 || (i0 == 0 && j0 == n - 1) {
                continue;
            }
            let (c, d) = seg(j);
            if c.im.max(d.im) < ylo || c.im.min(d.im) > yhi {
                continue;
            }
            let (pa, pb) = seg(i0);
            let (qa, qb) = seg(j0);
            if let Some((s, u)) = segment_intersection(pa, pb, qa, qb) {
                out.push(Crossing {
                    i: i0,
                    j: j0,
                    s,
                    u,
                    point: pa + (pb - pa) * s,
                    angle: crossing_angle(pb - pa, qb - qa),
                });
                if out.len() >= cap {
                    break;
                }
            }
        }
        if out.len() >= cap {
            break;
        }
        active.push(i);
    }
    out.sort_by_key(|x| (x.i, x.j));
    out
}

/// Removes consecutive duplicates (and a last point equal to the first),
/// keeping parameters aligned.
fn dedup_closed(params: &[f64], points: &[Complex64]) -> (Vec<f64>, Vec<Complex64>) {
    let mut t = Vec::with_capacity(points.len());
    let mut p: Vec<Complex64> = Vec::with_capacity(points.len());
    for (k, &z) in points.iter().enumerate() {
        if p.last() == Some(&z) {
            continue;
        }
        t.push(params.get(k).copied().unwrap_or(k as f64));
        p.push(z);
    }
    while p.len() > 1 && p.last() == p.first() {
        p.pop();
        t.pop();
    }
    (t, p)
}

fn param_at(t: &[f64], i: usize, s: f64) -> f64 {
    let n = t.len();
    let t0 = t[i];
    let t1 = if i + 1 < n { t[i + 1] } else { t[0] + 2.0 * std::f64::consts::PI };
    t0 + s * (t1 - t0)
}

fn report(t: &[f64], c: Option<Crossing>, found: usize, rejected: usize) -> SimplicityReport {
    match c {
        None => SimplicityReport {
            simple: true,
            first_intersection: None,
            point: None,
            crossings_found: found,
            rejected,
        },
        Some(c) => {
            let ta = param_at(t, c.i, c.s);
            let tb = param_at(t, c.j, c.u);
            SimplicityReport {
                simple: false,
                first_intersection: Some((ta.min(tb), ta.max(tb))),
                point: Some(c.point),
                crossings_found: found,
                rejected,
            }
        }
    }
}

/// Pairwise test over non-adjacent segments of the closed polyline,
/// reporting the crossing with the smallest segment indices.
pub fn is_simple(trace: &BoundaryTrace) -> SimplicityReport {
    let (t, p) = dedup_closed(&trace.params, &trace.points);
    let crossings = polyline_crossings(&p, MAX_COLLECTED);
    let found = crossings.len();
    report(&t, crossings.into_iter().next(), found, 0)
}

/// As [`is_simple`], but near-tangent crossings and crossings between
/// segments at most two steps apart are resampled from `expr` before being
/// accepted.
pub fn is_simple_refined(expr: &MapExpr, trace: &BoundaryTrace) -> Result<SimplicityReport> {
    let (t, p) = dedup_closed(&trace.params, &trace.points);
    let n = p.len();
    let crossings = polyline_crossings(&p, MAX_COLLECTED);
    let found = crossings.len();
    let mut rejected = 0;
    let is_bridge = |i: usize| {
        let t0 = t[i];
        let t1 = param_at(&t, i, 1.0);
        trace
            .excluded
            .iter()
            .any(|&e| (t0 < e && e < t1) || (t0 < e + 2.0 * std::f64::consts::PI && e + 2.0 * std::f64::consts::PI < t1))
    };
    for c in crossings {
        let gap = (c.j - c.i).min(n - (c.j - c.i));
        let suspicious = c.angle < TANGENCY_ANGLE || gap <= 2;
        if !suspicious || is_bridge(c.i) || is_bridge(c.j) {
            return Ok(report(&t, Some(c), found, rejected));
        }
        if resampled_crossing(expr, &t, c)? {
            return Ok(report(&t, Some(c), found, rejected));
        }
        rejected += 1;
    }
    Ok(report(&t, None, found, rejected))
}

/// Resamples both parameter intervals densely and retests them.
fn resampled_crossing(expr: &MapExpr, t: &[f64], c: Crossing) -> Result<bool> {
    let sample = |i: usize| -> Result<Vec<Complex64>> {
        let a = t[i];
        let b = param_at(t, i, 1.0);
        (0..=REFINE_SAMPLES)
            .map(|k| boundary_value(expr, a + (b - a) * k as f64 / REFINE_SAMPLES as f64))
            .collect()
    };
    let first = sample(c.i)?;
    let second = sample(c.j)?;
    let touching = c.j == c.i + 1 || (c.i == 0 && c.j + 1 == t.len());
    for (k, w) in first.windows(2).enumerate() {
        for (m, v) in second.windows(2).enumerate() {
            // When the two intervals share an endpoint, skip the two
            // subsegments that meet there.
            if touching && ((c.j == c.i + 1 && k == REFINE_SAMPLES - 1 && m == 0) || (c.i == 0 && k == 0 && m == REFINE_SAMPLES - 1)) {
                continue;
            }
            if segment_intersection(w[0], w[1], v[0], v[1]).is_some() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}
