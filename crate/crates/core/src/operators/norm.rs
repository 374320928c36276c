use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::pointwise::{disc_weight, MapOps};
use crate::analytic::MapExpr;
use crate::error::{Error, Result};

/// Lower estimate of `sup |g(z)| (1 − |z|²)^p` over the disc.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate {
    pub value: f64,
    pub argmax: Complex64,
    /// `(r, sup over the ring |z| = r)` in evaluation order.
    pub ladder: Vec<(f64, f64)>,
    pub converged: bool,
}

/// Grid parameters for [`weighted_sup_norm_with`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNormOptions {
    pub p: f64,
    pub tol: f64,
    pub r_cap: f64,
    /// Angular density factor: a ring of radius `r` gets
    /// `⌈2π · density / (1 − r)^{1/2}⌉` points.
    pub density: f64,
    pub max_ring_points: usize,
    /// Total evaluation budget; exceeding it stops refinement.
    pub budget: usize,
    pub polish_rounds: usize,
}

impl Default for SupNormOptions {
    fn default() -> Self {
        Self {
            p: 1.0,
            tol: 1e-6,
            r_cap: 1.0 - 1e-7,
            density: 16.0,
            max_ring_points: 1 << 19,
            budget: 20_000_000,
            polish_rounds: 3,
        }
    }
}

/// Evaluates a field that may legitimately blow up: singular and critical
/// points count as `+∞`, other failures propagate.
fn eval_field<F>(field: &F, z: Complex64) -> Result<f64>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    match field(z) {
        Ok(v) if v.is_nan() => Ok(f64::INFINITY),
        Ok(v) => Ok(v),
        Err(Error::Singular { .. } | Error::CriticalPoint { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    }
}

/// Parallel max with a deterministic argmax: ties go to the lowest index.
pub(crate) fn par_argmax<T, F>(items: &[T], f: F) -> Result<Option<(usize, f64)>>
where
    T: Sync,
    F: Fn(&T) -> Result<f64> + Sync,
{
    let values: Vec<f64> = items.par_iter().map(&f).collect::<Result<_>>()?;
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in values.into_iter().enumerate() {
        if best.is_none_or(|(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    Ok(best)
}

fn ring_radii(r_cap: f64) -> Vec<f64> {
    let mut rs: Vec<f64> = (0..16).map(|j| j as f64 / 16.0).collect();
    for k in 1..=24 {
        let r = 1.0 - 0.5f64.powi(k);
        if r < r_cap {
            rs.push(r);
        }
    }
    rs.push(r_cap);
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    rs
}

fn ring_points(r: f64, opts: &SupNormOptions) -> usize {
    if r == 0.0 {
        return 1;
    }
    let n = (2.0 * PI * opts.density / (1.0 - r).sqrt()).ceil() as usize;
    n.clamp(8, opts.max_ring_points)
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, iters: usize) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// `sup |g(z)| (1 − |z|²)^p` with the default grid and the given `p`,
/// relative convergence tolerance and radius cap.
pub fn weighted_sup_norm<F>(field: F, p: f64, tol: f64, r_cap: f64) -> Result<NormEstimate>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    weighted_sup_norm_with(
        field,
        SupNormOptions {
            p,
            tol,
            r_cap,
            ..SupNormOptions::default()
        },
    )
}

/// Layered polar grid (rings `j/16` and `1 − 2^{−k}` up to `r_cap`), then
/// golden-section polish around the best point. `field` returns the
/// unweighted modulus `|g(z)|`.
pub fn weighted_sup_norm_with<F>(field: F, opts: SupNormOptions) -> Result<NormEstimate>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    if !(opts.r_cap > 0.0 && opts.r_cap < 1.0) {
        return Err(Error::InvalidArgument(format!("r_cap must lie in (0, 1), got {}", opts.r_cap)));
    }
    let weighted = |z: Complex64| -> Result<f64> {
        let w = disc_weight(z).max(0.0).powf(opts.p);
        let v = eval_field(&field, z)?;
        // 0·∞ only happens on |z| = 1, which the grid never visits.
        Ok(if w == 0.0 { 0.0 } else { v * w })
    };

    let mut best = f64::NEG_INFINITY;
    let mut argmax = Complex64::new(0.0, 0.0);
    let mut best_ring = 0usize;
    let mut ladder = Vec::new();
    let mut history = Vec::new();
    let mut evaluations = 0usize;
    let mut exhausted = false;
    let radii = ring_radii(opts.r_cap);

    for (ri, &r) in radii.iter().enumerate() {
        let n = ring_points(r, &opts);
        if evaluations + n > opts.budget {
            exhausted = true;
            break;
        }
        evaluations += n;
        let idx: Vec<usize> = (0..n).collect();
        let point = |k: usize| Complex64::from_polar(r, 2.0 * PI * k as f64 / n as f64);
        let (k, v) = par_argmax(&idx, |&k| weighted(point(k)))?.expect("ring is non-empty");
        ladder.push((r, v));
        if v > best {
            best = v;
            argmax = point(k);
            best_ring = ri;
        }
        if r >= 0.5 {
            history.push(best);
        }
    }

    let converged = !exhausted
        && best.is_finite()
        && history.len() >= 2
        && {
            let last = history[history.len() - 1];
            let prev = history[history.len() - 2];
            (last - prev).abs() <= opts.tol * last.abs().max(f64::MIN_POSITIVE)
        };

    if best.is_finite() && opts.polish_rounds > 0 && argmax.norm() > 0.0 {
        let r0 = argmax.norm();
        let lo_r = if best_ring > 0 { radii[best_ring - 1] } else { 0.0 };
        let hi_r = radii.get(best_ring + 1).copied().unwrap_or(opts.r_cap).min(opts.r_cap);
        let n = ring_points(r0, &opts) as f64;
        let mut dtheta = 2.0 * PI / n;
        let (mut r_lo, mut r_hi) = (lo_r, hi_r);
        let mut cur = argmax;
        let score = |z: Complex64| weighted(z).unwrap_or(f64::NEG_INFINITY);
        for _ in 0..opts.polish_rounds {
            let th = cur.arg();
            let (t, v) = golden_max(
                |t| score(Complex64::from_polar(cur.norm(), t)),
                th - dtheta,
                th + dtheta,
                40,
            );
            if v > best {
                best = v;
                cur = Complex64::from_polar(cur.norm(), t);
            }
            let th = cur.arg();
            let (r, v) = golden_max(|r| score(Complex64::from_polar(r, th)), r_lo, r_hi, 40);
            if v > best {
                best = v;
                cur = Complex64::from_polar(r, th);
            }
            dtheta *= 0.25;
            let span = 0.25 * (r_hi - r_lo);
            r_lo = (cur.norm() - span).max(0.0);
            r_hi = (cur.norm() + span).min(opts.r_cap);
        }
        argmax = cur;
    }

    Ok(NormEstimate {
        value: best,
        argmax,
        ladder,
        converged,
    })
}

/// `‖P(f)‖` with weight `(1 − |z|²)`.
pub fn pre_schwarzian_norm(expr: &MapExpr, opts: SupNormOptions) -> Result<NormEstimate> {
    let ops = MapOps::new(expr);
    weighted_sup_norm_with(|z| Ok(ops.pre_schwarzian(z)?.norm()), SupNormOptions { p: 1.0, ..opts })
}

/// `‖S(f)‖` with weight `(1 − |z|²)²`.
pub fn schwarzian_norm(expr: &MapExpr, opts: SupNormOptions) -> Result<NormEstimate> {
    let ops = MapOps::new(expr);
    weighted_sup_norm_with(|z| Ok(ops.schwarzian(z)?.norm()), SupNormOptions { p: 2.0, ..opts })
}

/// Bloch norm `sup |f'(z)| (1 − |z|²)`.
pub fn bloch_norm(expr: &MapExpr, opts: SupNormOptions) -> Result<NormEstimate> {
    let d = expr.derivative();
    weighted_sup_norm_with(|z| Ok(d.value_at(z)?.norm()), SupNormOptions { p: 1.0, ..opts })
}

/// Normal-function norm `sup f#(z) (1 − |z|²)`.
pub fn normal_norm(expr: &MapExpr, opts: SupNormOptions) -> Result<NormEstimate> {
    let ops = MapOps::new(expr);
    weighted_sup_norm_with(|z| ops.spherical_derivative(z), SupNormOptions { p: 1.0, ..opts })
}

/// One side-by-side comparison `lhs ≤ rhs`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
    pub gap: f64,
}

impl InequalityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        let slack = 1e-9 * (1.0 + rhs.abs());
        Self {
            lhs,
            rhs,
            holds: lhs <= rhs + slack,
            gap: rhs - lhs,
        }
    }
}

/// Both norm inequalities between `‖S‖` (weight 2) and `‖P‖` (weight 1):
/// `‖S‖ ≤ 4‖P‖ + ½‖P‖²` and `‖P‖ ≤ 2 + 2(1 + ½‖S‖)^{1/2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormInequalityReport {
    pub pre_schwarzian: NormEstimate,
    pub schwarzian: NormEstimate,
    pub schwarzian_from_pre: InequalityCheck,
    pub pre_from_schwarzian: InequalityCheck,
}

pub fn norm_inequality_report(expr: &MapExpr) -> Result<NormInequalityReport> {
    norm_inequality_report_with(expr, SupNormOptions::default())
}

pub fn norm_inequality_report_with(expr: &MapExpr, opts: SupNormOptions) -> Result<NormInequalityReport> {
    let p = pre_schwarzian_norm(expr, opts)?;
    let s = schwarzian_norm(expr, opts)?;
    let forward = InequalityCheck::new(s.value, 4.0 * p.value + 0.5 * p.value * p.value);
    let converse = InequalityCheck::new(p.value, 2.0 + 2.0 * (1.0 + 0.5 * s.value).sqrt());
    Ok(NormInequalityReport {
        pre_schwarzian: p,
        schwarzian: s,
        schwarzian_from_pre: forward,
        pre_from_schwarzian: converse,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hyperbolic_distance;
    use crate::sampling::uniform_pairs;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constant_field() {
        let est = weighted_sup_norm(|_| Ok(2.5), 0.0, 1e-9, 1.0 - 1e-7).unwrap();
        assert_eq!(est.value, 2.5);
        assert!(est.converged);
        assert!(est.ladder.iter().all(|(_, v)| *v <= est.value));
    }

    #[test]
    fn koebe_pre_schwarzian_norm() {
        let est = pre_schwarzian_norm(&MapExpr::Koebe, SupNormOptions::default()).unwrap();
        assert!((est.value - 6.0).abs() < 1e-3, "{}", est.value);
        assert!(est.value <= 6.0 + 1e-9);
        assert!(est.argmax.re > 0.99 && est.argmax.im.abs() < 1e-3);
    }

    #[test]
    fn odd_poly_pre_schwarzian_norm() {
        let est = pre_schwarzian_norm(&MapExpr::odd_poly(2), SupNormOptions::default()).unwrap();
        assert!((est.value - 8.0).abs() < 5e-2, "{}", est.value);
    }

    #[test]
    fn koebe_inequalities() {
        let rep = norm_inequality_report(&MapExpr::Koebe).unwrap();
        assert!(rep.schwarzian_from_pre.holds);
        assert!(rep.pre_from_schwarzian.holds);
        assert!((rep.schwarzian.value - 6.0).abs() < 1e-6);
        assert!((rep.schwarzian_from_pre.rhs - 42.0).abs() < 1e-2);
        assert!(rep.pre_from_schwarzian.gap.abs() < 1e-2);
    }

    #[test]
    fn affine_inequalities() {
        let rep = norm_inequality_report(&MapExpr::affine(c(0.1, 0.0), c(2.0, 1.0))).unwrap();
        assert_eq!(rep.schwarzian_from_pre.lhs, 0.0);
        assert_eq!(rep.schwarzian_from_pre.rhs, 0.0);
        assert_eq!(rep.pre_from_schwarzian.rhs, 4.0);
    }

    #[test]
    fn random_polynomials_satisfy_both_inequalities() {
        let opts = SupNormOptions {
            density: 4.0,
            ..SupNormOptions::default()
        };
        for seed in 0..5u64 {
            let coeffs: Vec<Complex64> = uniform_pairs(seed, 4)
                .into_iter()
                .enumerate()
                .map(|(k, (a, b))| match k {
                    0 => c(a - 0.5, b - 0.5),
                    1 => c(1.0, 0.0),
                    _ => c(a - 0.5, b - 0.5) * 0.15,
                })
                .collect();
            let rep = norm_inequality_report_with(&MapExpr::polynomial(coeffs), opts).unwrap();
            assert!(rep.schwarzian_from_pre.holds && rep.pre_from_schwarzian.holds, "{rep:?}");
        }
    }

    #[test]
    fn bloch_and_normal_lipschitz_bounds() {
        let f = MapExpr::polynomial(vec![c(0.0, 0.0), c(1.0, 0.0), c(0.3, 0.1)]);
        let opts = SupNormOptions {
            density: 4.0,
            ..SupNormOptions::default()
        };
        let bloch = bloch_norm(&f, opts).unwrap().value;
        let normal = normal_norm(&f, opts).unwrap().value;
        assert!(bloch >= 1.0);
        let pts = uniform_pairs(11, 400);
        for pair in pts.chunks(2) {
            let z = Complex64::from_polar(0.95 * pair[0].0.sqrt(), 2.0 * PI * pair[0].1);
            let w = Complex64::from_polar(0.95 * pair[1].0.sqrt(), 2.0 * PI * pair[1].1);
            let d = hyperbolic_distance(z, w);
            let (fz, fw) = (f.value_at(z).unwrap(), f.value_at(w).unwrap());
            assert!((fz - fw).norm() <= (bloch + 1e-6) * d);
            let chi = crate::geometry::chordal_distance(fz.into(), fw.into());
            assert!(chi <= (normal + 1e-6) * d);
        }
    }

    #[test]
    fn critical_points_give_infinite_norm() {
        let est = pre_schwarzian_norm(&MapExpr::monomial(2), SupNormOptions::default()).unwrap();
        assert!(est.value.is_infinite());
        assert!(!est.converged);
    }
}
