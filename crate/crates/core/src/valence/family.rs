use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{boundary_value, MapExpr};
use crate::error::{Error, Result};

use super::intersect::is_simple_refined;
use super::trace::{trace_boundary, BoundaryTrace, ChordTol};
use super::winding::winding_number_circle;

/// Radius of the argument-principle contour standing in for `r → 1⁻`.
pub const LIMIT_RADIUS: f64 = 1.0 - 1e-4;
/// Ratio between the stated approximate valence growth and `C`.
pub const REFERENCE_SLOPE: f64 = 100.0 / 63.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignChangeReport {
    pub count: usize,
    /// Localized parameters of the sign changes.
    pub crossings: Vec<f64>,
    pub range: (f64, f64),
}

fn bisect_re(expr: &MapExpr, mut a: f64, mut b: f64, sa: f64) -> Result<f64> {
    for _ in 0..60 {
        if b - a < 1e-13 {
            break;
        }
        let m = 0.5 * (a + b);
        let v = boundary_value(expr, m)?.re;
        if v == 0.0 {
            return Ok(m);
        }
        if v.signum() == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

/// Sign changes of `t ↦ Re f(e^{it})` over `(lo, hi]`, read off the adaptive
/// boundary trace and localized by bisection. Values within a relative
/// `1e-12` of zero are skipped.
pub fn sign_change_report(expr: &MapExpr, lo: f64, hi: f64) -> Result<SignChangeReport> {
    let trace = trace_boundary(expr, ChordTol::Relative(1e-3))?;
    sign_changes_on_trace(expr, &trace, lo, hi)
}

fn sign_changes_on_trace(expr: &MapExpr, trace: &BoundaryTrace, lo: f64, hi: f64) -> Result<SignChangeReport> {
    let eps = 1e-12 * trace.diameter().max(1e-300);
    let mut last: Option<(f64, f64)> = None;
    let mut brackets = Vec::new();
    for (&t, p) in trace.params.iter().zip(&trace.points) {
        if t <= lo || t > hi || p.re.abs() <= eps {
            continue;
        }
        let s = p.re.signum();
        if let Some((t0, s0)) = last {
            if s != s0 {
                brackets.push((t0, t, s0));
            }
        }
        last = Some((t, s));
    }
    let crossings = brackets
        .par_iter()
        .map(|&(a, b, s)| bisect_re(expr, a, b, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(SignChangeReport {
        count: crossings.len(),
        crossings,
        range: (lo, hi),
    })
}

/// Sign changes of `Re f(e^{it})` on `(0, π]`.
pub fn sign_changes_real(expr: &MapExpr) -> Result<usize> {
    Ok(sign_change_report(expr, 0.0, PI)?.count)
}

/// Sign changes of `Re f(e^{it})` on the whole circle `(−π, π]`.
pub fn sign_changes_full(expr: &MapExpr) -> Result<usize> {
    Ok(sign_change_report(expr, -PI - 1.0, PI)?.count)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalCReport {
    pub zeta: Complex64,
    pub estimate: f64,
    /// Last `C` found simple and first `C` found non-simple.
    pub bracket: (f64, f64),
    /// False when a finer retrace of the bracket ends disagreed with the
    /// bisection predicate.
    pub monotone: bool,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriticalCOptions {
    pub tol_c: f64,
    pub lower: f64,
    pub upper: f64,
    pub max_upper: f64,
    pub chord_tol: f64,
}

impl Default for CriticalCOptions {
    fn default() -> Self {
        Self {
            tol_c: 0.01,
            lower: 1.0,
            upper: 10.0,
            max_upper: 160.0,
            chord_tol: 2e-3,
        }
    }
}

/// Whether the boundary curve of the family member `(c, ζ)` is simple.
pub fn family_curve_is_simple(c: f64, zeta: Complex64, chord_tol: f64) -> Result<bool> {
    let f = MapExpr::example_family(c, zeta);
    let trace = trace_boundary(&f, ChordTol::Relative(chord_tol))?;
    Ok(is_simple_refined(&f, &trace)?.simple)
}

pub fn critical_c(zeta: Complex64, tol_c: f64) -> Result<CriticalCReport> {
    critical_c_with(
        zeta,
        CriticalCOptions {
            tol_c,
            ..CriticalCOptions::default()
        },
    )
}

/// Bisection on `C` of the simpleness of the traced boundary curve.
pub fn critical_c_with(zeta: Complex64, opts: CriticalCOptions) -> Result<CriticalCReport> {
    if !(opts.tol_c > 0.0) || !(opts.lower < opts.upper) {
        return Err(Error::InvalidArgument("critical C needs tol_c > 0 and lower < upper".into()));
    }
    let mut evals = 0;
    let mut simple = |c: f64, chord: f64| {
        evals += 1;
        family_curve_is_simple(c, zeta, chord)
    };
    let mut lo = opts.lower;
    let mut hi = opts.upper;
    if !simple(lo, opts.chord_tol)? {
        return Err(Error::InvalidArgument(format!("boundary curve already non-simple at C = {lo}")));
    }
    while simple(hi, opts.chord_tol)? {
        lo = hi;
        hi *= 2.0;
        if hi > opts.max_upper {
            return Err(Error::NonConvergence {
                what: "critical C bracket",
                achieved: lo,
                requested: opts.max_upper,
            });
        }
    }
    while hi - lo > opts.tol_c {
        let m = 0.5 * (lo + hi);
        if simple(m, opts.chord_tol)? {
            lo = m;
        } else {
            hi = m;
        }
    }
    let fine = 0.25 * opts.chord_tol;
    let monotone = simple(lo, fine)? && !simple(hi, fine)?;
    Ok(CriticalCReport {
        zeta,
        estimate: 0.5 * (lo + hi),
        bracket: (lo, hi),
        monotone,
        evaluations: evals,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ValenceMethod {
    SignCount,
    Winding,
    Preimage,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ValenceLocation {
    Point { w: Complex64 },
    Arc { from: f64, to: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValenceEstimate {
    pub method: ValenceMethod,
    pub value: u32,
    pub at: ValenceLocation,
    pub cross_checked: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValenceOptions {
    /// Points per side of the image-plane sample grid.
    pub grid: usize,
    pub chord_tol: f64,
    /// Sample points closer than this multiple of the chord tolerance to the
    /// curve are skipped.
    pub guard: f64,
    pub cross_check: bool,
}

impl Default for ValenceOptions {
    fn default() -> Self {
        Self {
            grid: 96,
            chord_tol: 1e-3,
            guard: 3.0,
            cross_check: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValenceReport {
    pub estimate: ValenceEstimate,
    /// Winding value → number of grid samples.
    pub histogram: BTreeMap<i64, usize>,
    pub samples: usize,
    pub skipped: usize,
    /// Argument-principle count at the maximizing sample, if computed.
    pub contour_count: Option<i64>,
}

/// Winding numbers of the closed polyline about a row of points on the line
/// `Im = y`, by signed crossings of the rightward ray. Entries are `None`
/// when a crossing lies within `guard` of the point.
fn row_windings(points: &[Complex64], y: f64, xs: &[f64], guard: f64) -> Vec<Option<i64>> {
    let n = points.len();
    let mut hits: Vec<(f64, i64)> = Vec::new();
    for k in 0..n {
        let a = points[k];
        let b = points[(k + 1) % n];
        let up = a.im <= y && b.im > y;
        let down = a.im > y && b.im <= y;
        if up || down {
            let x = a.re + (y - a.im) * (b.re - a.re) / (b.im - a.im);
            hits.push((x, if up { 1 } else { -1 }));
        }
    }
    hits.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut suffix = vec![0i64; hits.len() + 1];
    for k in (0..hits.len()).rev() {
        suffix[k] = suffix[k + 1] + hits[k].1;
    }
    xs.iter()
        .map(|&x| {
            let idx = hits.partition_point(|h| h.0 <= x);
            let near = [idx.checked_sub(1), Some(idx)]
                .into_iter()
                .flatten()
                .filter_map(|i| hits.get(i))
                .any(|h| (h.0 - x).abs() < guard);
            (!near).then(|| suffix[idx])
        })
        .collect()
}

/// Maximal winding number of the boundary curve about image-plane samples,
/// optionally confirmed by the argument principle on `|z| = 1 − 10⁻⁴`.
pub fn valence_estimate(expr: &MapExpr, opts: ValenceOptions) -> Result<ValenceReport> {
    let trace = trace_boundary(expr, ChordTol::Relative(opts.chord_tol))?;
    valence_from_trace(expr, &trace, opts)
}

pub fn valence_from_trace(expr: &MapExpr, trace: &BoundaryTrace, opts: ValenceOptions) -> Result<ValenceReport> {
    let (lo, hi) = trace.bounding_box();
    let g = opts.grid.max(2);
    let guard = opts.guard * trace.chord_tol;
    // Cell centers, offset to avoid rows through sampled vertices.
    let xs: Vec<f64> = (0..g).map(|i| lo.re + (hi.re - lo.re) * (i as f64 + 0.5) / g as f64).collect();
    let ys: Vec<f64> = (0..g).map(|j| lo.im + (hi.im - lo.im) * (j as f64 + 0.4999) / g as f64).collect();
    let rows: Vec<Vec<Option<i64>>> = ys.par_iter().map(|&y| row_windings(&trace.points, y, &xs, guard)).collect();

    let mut histogram = BTreeMap::new();
    let mut skipped = 0;
    let mut best: Option<(i64, Complex64)> = None;
    for (j, row) in rows.iter().enumerate() {
        for (i, v) in row.iter().enumerate() {
            match v {
                None => skipped += 1,
                Some(k) => {
                    *histogram.entry(*k).or_insert(0) += 1;
                    let k_abs = k.abs();
                    if best.is_none_or(|(b, _)| k_abs > b) {
                        best = Some((k_abs, Complex64::new(xs[i], ys[j])));
                    }
                }
            }
        }
    }
    let (value, w) = best.unwrap_or((0, Complex64::new(f64::NAN, f64::NAN)));
    let contour_count = if opts.cross_check && w.re.is_finite() {
        winding_number_circle(expr, w, Complex64::new(0.0, 0.0), LIMIT_RADIUS).ok().map(|r| r.value)
    } else {
        None
    };
    Ok(ValenceReport {
        estimate: ValenceEstimate {
            method: ValenceMethod::Winding,
            value: value as u32,
            at: ValenceLocation::Point { w },
            cross_checked: contour_count == Some(value),
        },
        histogram,
        samples: g * g - skipped,
        skipped,
        contour_count,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopePoint {
    pub c: f64,
    pub valence: u32,
    pub cross_checked: bool,
    pub sign_changes_half: usize,
    pub sign_changes_full: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub zeta: Complex64,
    pub per_c: Vec<SlopePoint>,
    /// Least-squares slope of valence against `C` through the origin.
    pub slope: f64,
    pub reference_slope: f64,
    /// Valence nondecreasing in `C`.
    pub monotone: bool,
}

pub fn valence_slope(zeta: Complex64, c_list: &[f64], opts: ValenceOptions) -> Result<SlopeReport> {
    if c_list.iter().any(|&c| !(c > 0.0)) {
        return Err(Error::InvalidArgument("valence slope needs positive C values".into()));
    }
    let mut per_c = Vec::with_capacity(c_list.len());
    for &c in c_list {
        let f = MapExpr::example_family(c, zeta);
        let trace = trace_boundary(&f, ChordTol::Relative(opts.chord_tol))?;
        let v = valence_from_trace(&f, &trace, opts)?;
        let half = sign_changes_on_trace(&f, &trace, 0.0, PI)?.count;
        let full = sign_changes_on_trace(&f, &trace, -PI - 1.0, PI)?.count;
        per_c.push(SlopePoint {
            c,
            valence: v.estimate.value,
            cross_checked: v.estimate.cross_checked,
            sign_changes_half: half,
            sign_changes_full: full,
        });
    }
    let (num, den) = per_c
        .iter()
        .fold((0.0, 0.0), |(n, d), p| (n + p.c * p.valence as f64, d + p.c * p.c));
    let mut sorted: Vec<&SlopePoint> = per_c.iter().collect();
    sorted.sort_by(|a, b| a.c.total_cmp(&b.c));
    let monotone = sorted.windows(2).all(|w| w[0].valence <= w[1].valence);
    Ok(SlopeReport {
        zeta,
        per_c,
        slope: num / den,
        reference_slope: REFERENCE_SLOPE,
        monotone,
    })
}
