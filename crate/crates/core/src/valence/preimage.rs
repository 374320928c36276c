use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::quad::QuadTol;
use crate::analytic::{segment_integral, MapExpr};
use crate::error::Result;
use crate::geometry::{pseudo_hyperbolic_distance, CarlesonSquare, Region};
use crate::sampling::halton;

use super::winding::winding_number_circle;

pub const DEFAULT_SEEDS: usize = 1024;
/// Pseudo-hyperbolic distance below which two roots are the same root.
pub const DEDUP_DISTANCE: f64 = 1e-4;
const NEWTON_ITERATIONS: usize = 80;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreimageSet {
    pub target: Complex64,
    pub points: Vec<Complex64>,
    /// `|f(z_i) − w|`, recomputed from scratch for each root.
    pub residuals: Vec<f64>,
    pub tol: f64,
    /// True when a winding count on an enclosing circle matched.
    pub cross_checked: bool,
    pub winding_count: Option<i64>,
    pub seeds: usize,
}

impl PreimageSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Damped Newton iteration on `f(z) − w`. Antiderivative values are carried
/// along the iterates by segment integrals of `f'`.
fn newton(expr: &MapExpr, deriv: &MapExpr, w: Complex64, z0: Complex64, tol: f64) -> Result<Option<Complex64>> {
    let mut z = z0;
    let mut fz = expr.value_at(z)?;
    let closed = expr.is_closed_form();
    for _ in 0..NEWTON_ITERATIONS {
        let g = fz - w;
        if g.norm() <= 0.1 * tol {
            break;
        }
        let d = match deriv.eval_jet(z) {
            Ok(j) => j.f,
            Err(_) => return Ok(None),
        };
        if d.norm() == 0.0 {
            return Ok(None);
        }
        let mut step = g / d;
        let room = 0.5 * (1.0 - z.norm());
        if step.norm() > room {
            step *= room / step.norm();
        }
        let next = z - step;
        fz = if closed {
            expr.value_at(next)?
        } else {
            fz + segment_integral(deriv, z, next, QuadTol::internal())?
        };
        z = next;
        if step.norm() < 1e-16 * (1.0 + z.norm()) {
            break;
        }
    }
    if !closed {
        fz = expr.value_at(z)?;
    }
    Ok(((fz - w).norm() <= tol).then_some(z))
}

/// Roots of `f(z) = w` inside `region`, found by Newton from Halton seeds and
/// deduplicated in seed order.
pub fn preimages(expr: &MapExpr, w: Complex64, region: &Region, n_seeds: usize, tol: f64) -> Result<PreimageSet> {
    let deriv = expr.derivative();
    let seeds: Vec<Complex64> = (1..)
        .map(|i| halton::<2>(i as u64))
        .take(8 * n_seeds)
        .filter_map(|[u, v]| region.sample_point(u, v))
        .take(n_seeds)
        .collect();
    let found: Vec<Option<Complex64>> = seeds
        .par_iter()
        .map(|&s| newton(expr, &deriv, w, s, tol))
        .collect::<Result<_>>()?;
    let mut points: Vec<Complex64> = Vec::new();
    for z in found.into_iter().flatten() {
        if !region.contains(z) {
            continue;
        }
        if points.iter().all(|&p| pseudo_hyperbolic_distance(p, z) >= DEDUP_DISTANCE) {
            points.push(z);
        }
    }
    let residuals = points
        .par_iter()
        .map(|&z| expr.value_at(z).map(|v| (v - w).norm()))
        .collect::<Result<Vec<_>>>()?;
    let mut set = PreimageSet {
        target: w,
        points,
        residuals,
        tol,
        cross_checked: false,
        winding_count: None,
        seeds: seeds.len(),
    };
    cross_check(expr, &mut set, region);
    Ok(set)
}

/// Compares the root count with a winding number on a circle that encloses
/// exactly the roots inside the region. Skipped for regions that are not discs.
fn cross_check(expr: &MapExpr, set: &mut PreimageSet, region: &Region) {
    let (center, rho) = match region {
        Region::UnitDisc => {
            let m = set.points.iter().map(|z| z.norm()).fold(0.0, f64::max);
            (Complex64::new(0.0, 0.0), if set.points.is_empty() { 0.99 } else { 0.5 * (1.0 + m) })
        }
        _ => match region.as_disc() {
            Some(d) if d.center.norm() + d.radius < 1.0 => (d.center, d.radius),
            _ => return,
        },
    };
    if let Ok(res) = winding_number_circle(expr, set.target, center, rho) {
        let inside = set.points.iter().filter(|z| (**z - center).norm() < res.radius).count() as i64;
        set.winding_count = Some(res.value);
        set.cross_checked = res.value == inside;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlesonSum {
    pub sum: f64,
    /// `sum / ℓ(Q)^{1/2}`
    pub ratio: f64,
    pub members: usize,
}

/// `Σ_{z ∈ Q} (1 − |z|)^{1/2}` and its ratio to `ℓ(Q)^{1/2}`.
pub fn carleson_sum(pre: &PreimageSet, q: &CarlesonSquare) -> CarlesonSum {
    let mut sum = 0.0;
    let mut members = 0;
    for z in pre.points.iter().filter(|z| q.contains(**z)) {
        sum += (1.0 - z.norm()).sqrt();
        members += 1;
    }
    CarlesonSum {
        sum,
        ratio: sum / q.arclength.sqrt(),
        members,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountingPoint {
    pub r: f64,
    pub count: i64,
    /// `n(f, r, w) √(1 − r)`
    pub scaled: f64,
}

/// `n(f, r, w) √(1 − r)` along a ladder of radii.
pub fn counting_bound_profile(expr: &MapExpr, w: Complex64, r_ladder: &[f64]) -> Result<Vec<CountingPoint>> {
    r_ladder
        .iter()
        .map(|&r| {
            let n = winding_number_circle(expr, w, Complex64::new(0.0, 0.0), r)?.value;
            Ok(CountingPoint {
                r,
                count: n,
                scaled: n as f64 * (1.0 - r).sqrt(),
            })
        })
        .collect()
}

/// `1 − 2^{−k}` for `k = 1..=levels`.
pub fn geometric_ladder(levels: u32) -> Vec<f64> {
    (1..=levels).map(|k| 1.0 - 0.5f64.powi(k as i32)).collect()
}
