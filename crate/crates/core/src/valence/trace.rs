use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{boundary_value, MapExpr};
use crate::error::{Error, Result};

/// Chord tolerance, absolute or relative to the diameter of a coarse trace.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum ChordTol {
    Absolute(f64),
    Relative(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceOptions {
    pub chord_tol: ChordTol,
    /// Maximal turning angle between consecutive chords, radians.
    pub max_turn: f64,
    /// Half-width of the parameter window excluded around each singular
    /// boundary parameter.
    pub collar: f64,
    pub initial_points: usize,
    pub max_points: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            chord_tol: ChordTol::Relative(2e-3),
            max_turn: 0.2,
            collar: 1e-4,
            initial_points: 1024,
            max_points: 400_000,
        }
    }
}

/// Polyline approximation of `t ↦ f(e^{it})`, `t ∈ (−π, π]` increasing.
///
/// With excluded parameters the polyline is bridged across each collar by a
/// chord; the closing segment joins the last point to the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub params: Vec<f64>,
    pub points: Vec<Complex64>,
    pub adaptive: bool,
    /// Absolute chord tolerance the refinement aimed for.
    pub chord_tol: f64,
    /// False when the point budget stopped refinement early.
    pub complete: bool,
    pub excluded: Vec<f64>,
}

impl BoundaryTrace {
    /// Builds a trace from explicit samples (closed by the last-to-first
    /// segment).
    pub fn from_points(params: Vec<f64>, points: Vec<Complex64>) -> Self {
        Self {
            params,
            points,
            adaptive: false,
            chord_tol: f64::INFINITY,
            complete: true,
            excluded: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(min, max)` corners of the bounding box.
    pub fn bounding_box(&self) -> (Complex64, Complex64) {
        let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
        let mut hi = -lo;
        for p in &self.points {
            lo.re = lo.re.min(p.re);
            lo.im = lo.im.min(p.im);
            hi.re = hi.re.max(p.re);
            hi.im = hi.im.max(p.im);
        }
        (lo, hi)
    }

    pub fn diameter(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    /// Winding number of the closed polyline about `w`.
    pub fn winding_about(&self, w: Complex64) -> i64 {
        polyline_winding(&self.points, w)
    }

    /// CSV with header `t,re,im`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,re,im\n");
        for (t, p) in self.params.iter().zip(&self.points) {
            s.push_str(&format!("{t},{},{}\n", p.re, p.im));
        }
        s
    }

    /// Plain SVG polyline with a viewBox fitted to the bounding box
    /// (image y axis flipped so that the picture is upright).
    pub fn to_svg(&self) -> String {
        let (lo, hi) = self.bounding_box();
        let span = (hi - lo).re.max((hi - lo).im).max(1e-300);
        let pad = 0.02 * span;
        let stroke = span / 600.0;
        let mut pts = String::new();
        for p in self.points.iter().chain(self.points.first()) {
            pts.push_str(&format!("{},{} ", p.re, -p.im));
        }
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n\
             <polyline fill=\"none\" stroke=\"black\" stroke-width=\"{}\" points=\"{}\"/>\n</svg>\n",
            lo.re - pad,
            -hi.im - pad,
            (hi - lo).re + 2.0 * pad,
            (hi - lo).im + 2.0 * pad,
            stroke,
            pts.trim_end()
        )
    }
}

/// Winding number of the closed polyline `points` about `w`, by summing
/// principal arguments of consecutive ratios.
pub fn polyline_winding(points: &[Complex64], w: Complex64) -> i64 {
    let n = points.len();
    if n < 2 {
        return 0;
    }
    let mut total = 0.0;
    for i in 0..n {
        let a = points[i] - w;
        let b = points[(i + 1) % n] - w;
        total += (b / a).arg();
    }
    (total / (2.0 * PI)).round() as i64
}

/// Distance from `w` to the closed polyline.
pub fn polyline_distance(points: &[Complex64], w: Complex64) -> f64 {
    let n = points.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        best = best.min(segment_distance(points[i], points[(i + 1) % n], w));
    }
    best
}

fn segment_distance(a: Complex64, b: Complex64, w: Complex64) -> f64 {
    let d = b - a;
    let len2 = d.norm_sqr();
    if len2 == 0.0 {
        return (w - a).norm();
    }
    let s = ((w - a) * d.conj()).re / len2;
    (w - (a + d * s.clamp(0.0, 1.0))).norm()
}

/// Parameter arcs of `(−π, π]` with collars around `singular` removed.
pub(crate) fn parameter_arcs(singular: &[f64], collar: f64) -> Vec<(f64, f64)> {
    let mut cuts: Vec<(f64, f64)> = singular.iter().map(|&s| (s - collar, s + collar)).collect();
    cuts.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut arcs = Vec::new();
    let mut start = -PI;
    let mut end = PI;
    for &(lo, hi) in &cuts {
        // Cuts straddling the seam at ±π trim both ends.
        if lo < -PI {
            start = start.max(hi);
            end = end.min(lo + 2.0 * PI);
            continue;
        }
        if hi > PI {
            end = end.min(lo);
            start = start.max(hi - 2.0 * PI);
            continue;
        }
    }
    let mut cur = start;
    for &(lo, hi) in &cuts {
        if lo < -PI || hi > PI {
            continue;
        }
        if lo > cur {
            arcs.push((cur, lo.min(end)));
        }
        cur = cur.max(hi);
    }
    if cur < end {
        arcs.push((cur, end));
    }
    arcs.retain(|(a, b)| b > a);
    arcs
}

fn turn(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let u = b - a;
    let v = c - b;
    if u.norm() == 0.0 || v.norm() == 0.0 {
        return 0.0;
    }
    (v / u).arg().abs()
}

/// Adaptive trace with the given chord tolerance and default options.
pub fn trace_boundary(expr: &MapExpr, chord_tol: ChordTol) -> Result<BoundaryTrace> {
    trace_boundary_with(
        expr,
        TraceOptions {
            chord_tol,
            ..TraceOptions::default()
        },
    )
}

/// Samples `f(e^{it})` and bisects parameter intervals until every chord is
/// at most the tolerance and every turning angle at most `max_turn`.
pub fn trace_boundary_with(expr: &MapExpr, opts: TraceOptions) -> Result<BoundaryTrace> {
    let singular = expr.boundary_singular_params();
    let arcs = parameter_arcs(&singular, opts.collar);
    if arcs.is_empty() {
        return Err(Error::InvalidArgument("no boundary parameters left after exclusions".into()));
    }
    let total_len: f64 = arcs.iter().map(|(a, b)| b - a).sum();
    let eval = |t: f64| boundary_value(expr, t);

    let mut params = Vec::new();
    for &(a, b) in &arcs {
        let n = ((opts.initial_points as f64 * (b - a) / total_len).ceil() as usize).max(4);
        for k in 0..=n {
            params.push(a + (b - a) * k as f64 / n as f64);
        }
    }
    params.dedup();
    let mut points: Vec<Complex64> = params.par_iter().map(|&t| eval(t)).collect::<Result<_>>()?;

    let tol = match opts.chord_tol {
        ChordTol::Absolute(v) => v,
        ChordTol::Relative(rel) => {
            let tr = BoundaryTrace::from_points(params.clone(), points.clone());
            rel * tr.diameter().max(1e-300)
        }
    };
    // Arc ends: no refinement across an excluded collar.
    let is_bridge = |t0: f64, t1: f64| arcs.iter().all(|&(a, b)| !(t0 >= a && t1 <= b));
    let min_dt = 1e-13;
    let mut complete = true;

    loop {
        let n = params.len();
        let mut split = vec![false; n.saturating_sub(1)];
        for i in 0..n - 1 {
            if is_bridge(params[i], params[i + 1]) || params[i + 1] - params[i] < min_dt {
                continue;
            }
            let chord = (points[i + 1] - points[i]).norm();
            if chord > tol {
                split[i] = true;
                continue;
            }
            if chord < 1e-3 * tol {
                continue;
            }
            let bent_before = i > 0
                && !is_bridge(params[i - 1], params[i])
                && turn(points[i - 1], points[i], points[i + 1]) > opts.max_turn;
            let bent_after = i + 2 < n
                && !is_bridge(params[i + 1], params[i + 2])
                && turn(points[i], points[i + 1], points[i + 2]) > opts.max_turn;
            if bent_before || bent_after {
                split[i] = true;
            }
        }
        let todo: Vec<usize> = (0..split.len()).filter(|&i| split[i]).collect();
        if todo.is_empty() {
            break;
        }
        if n + todo.len() > opts.max_points {
            complete = false;
            break;
        }
        let mids: Vec<(f64, Complex64)> = todo
            .par_iter()
            .map(|&i| {
                let t = 0.5 * (params[i] + params[i + 1]);
                eval(t).map(|v| (t, v))
            })
            .collect::<Result<_>>()?;
        let mut new_params = Vec::with_capacity(n + mids.len());
        let mut new_points = Vec::with_capacity(n + mids.len());
        let mut m = 0;
        for i in 0..n {
            new_params.push(params[i]);
            new_points.push(points[i]);
            if m < todo.len() && todo[m] == i {
                new_params.push(mids[m].0);
                new_points.push(mids[m].1);
                m += 1;
            }
        }
        params = new_params;
        points = new_points;
    }

    Ok(BoundaryTrace {
        params,
        points,
        adaptive: true,
        chord_tol: tol,
        complete,
        excluded: singular,
    })
}
