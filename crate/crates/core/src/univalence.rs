//! Univalence criteria evaluated over regions.
//!
//! Verdicts are grid-based: a criterion "holds" when the sampled maximum of
//! its quantity stays below the threshold up to `tol`. Sampling can refute a
//! univalence claim (a collision) but never certify one.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::MapExpr;
use crate::error::{Error, Result};
use crate::geometry::{hyperbolic_distance, Region};
use crate::operators::{par_argmax, MapOps};
use crate::sampling::{halton, uniform_pairs};

/// Default grid resolution for verdicts.
pub const DEFAULT_RES: usize = 48;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub region: Region,
    pub holds: bool,
    pub worst_point: Complex64,
    /// `threshold − quantity` at the worst point; `−∞` at a critical point.
    pub worst_margin: f64,
    pub max_quantity: f64,
    pub threshold: f64,
    pub samples_evaluated: usize,
}

/// Maximizes `quantity` over `points` and compares it with `threshold`.
/// Singular and critical points count as infinite quantity.
pub fn grid_verdict<F>(
    criterion: &str,
    region: Region,
    points: &[Complex64],
    threshold: f64,
    tol: f64,
    quantity: F,
) -> Result<CriterionReport>
where
    F: Fn(Complex64) -> Result<f64> + Sync,
{
    let best = par_argmax(points, |&z| match quantity(z) {
        Ok(v) if v.is_nan() => Ok(f64::INFINITY),
        Ok(v) => Ok(v),
        Err(Error::CriticalPoint { .. } | Error::Singular { .. }) => Ok(f64::INFINITY),
        Err(e) => Err(e),
    })?;
    let (i, q) = best.ok_or_else(|| Error::InvalidArgument("region grid is empty".into()))?;
    let margin = threshold - q;
    Ok(CriterionReport {
        criterion: criterion.to_string(),
        region,
        holds: margin >= -tol,
        worst_point: points[i],
        worst_margin: margin,
        max_quantity: q,
        threshold,
        samples_evaluated: points.len(),
    })
}

/// Becker's criterion `|z P(f)(z)| (1 − |z|²) ≤ 1` on a region grid.
pub fn becker_verdict(expr: &MapExpr, region: Region, tol: f64) -> Result<CriterionReport> {
    becker_verdict_with(expr, region, tol, DEFAULT_RES)
}

pub fn becker_verdict_with(expr: &MapExpr, region: Region, tol: f64, res: usize) -> Result<CriterionReport> {
    let ops = MapOps::new(expr);
    grid_verdict("becker", region, &region.grid(res), 1.0, tol, |z| ops.becker_quantity_z(z))
}

/// Unweighted variant `|P(f)(z)| (1 − |z|²) ≤ 1`.
pub fn becker_unweighted_verdict(expr: &MapExpr, region: Region, tol: f64, res: usize) -> Result<CriterionReport> {
    let ops = MapOps::new(expr);
    grid_verdict("becker-z", region, &region.grid(res), 1.0, tol, |z| ops.becker_quantity(z))
}

/// Nehari's criterion `|S(f)(z)| (1 − |z|²)² ≤ 2`.
pub fn nehari_verdict(expr: &MapExpr, region: Region, tol: f64, res: usize) -> Result<CriterionReport> {
    let ops = MapOps::new(expr);
    grid_verdict("nehari", region, &region.grid(res), 2.0, tol, |z| ops.nehari_quantity(z))
}

/// `a(C) = 1 − (1 + C)^{−2}`.
pub fn horodisc_constant(c: f64) -> f64 {
    1.0 - (1.0 + c).powi(-2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HvVerdict {
    pub c: f64,
    /// Univalence on the whole disc (the case `C ≤ 1`).
    pub holds_on_disc: bool,
    pub horodisc_a: f64,
    pub guarantee: String,
    /// Grid check of the growth condition itself (quantity `−margin`).
    pub condition: CriterionReport,
}

/// Checks `|P(f)(z)| (1 − |z|²) ≤ 1 + C(1 − |z|)` on a disc grid and
/// returns the resulting univalence guarantee.
pub fn hv_verdict(expr: &MapExpr, c: f64, tol: f64) -> Result<HvVerdict> {
    hv_verdict_with(expr, c, tol, DEFAULT_RES)
}

pub fn hv_verdict_with(expr: &MapExpr, c: f64, tol: f64, res: usize) -> Result<HvVerdict> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidArgument(format!("C must be positive and finite, got {c}")));
    }
    let ops = MapOps::new(expr);
    let region = Region::UnitDisc;
    let condition = grid_verdict("hv", region, &region.grid(res), 0.0, tol, |z| {
        Ok(-ops.hv_margin(c, z)?)
    })?;
    if !condition.holds {
        return Err(Error::ConditionViolated {
            criterion: "hv".into(),
            z: condition.worst_point,
            margin: condition.worst_margin,
        });
    }
    let a = horodisc_constant(c);
    let (holds_on_disc, guarantee) = if c <= 1.0 {
        (true, "univalent on the unit disc".to_string())
    } else {
        (false, format!("univalent on every horodisc D(a e^{{iθ}}, 1 − a) with a = {a}"))
    };
    Ok(HvVerdict {
        c,
        holds_on_disc,
        horodisc_a: a,
        guarantee,
        condition,
    })
}

/// `max_{0 ≤ r < 1} r (1 + C(1 − r))` on a fine grid; at most 1 for `C ≤ 1`,
/// which is the reduction of the growth condition to Becker's criterion.
pub fn hv_becker_reduction_max(c: f64, n: usize) -> f64 {
    (0..n)
        .map(|k| {
            let r = k as f64 / n as f64;
            r * (1.0 + c * (1.0 - r))
        })
        .fold(0.0, f64::max)
}

/// `g = f ∘ T` with `T(z) = e^{iθ}(a + (1 − a) z)`, mapping 𝔻 onto the
/// horodisc at `e^{iθ}`.
pub fn horodisc_pullback(expr: &MapExpr, a: f64, theta: f64) -> MapExpr {
    let rot = Complex64::from_polar(1.0, theta);
    MapExpr::compose(expr.clone(), MapExpr::affine(rot * a, rot * (1.0 - a)))
}

/// Grid maximum of `|P(g)(z)| (1 − |z|²)` for `g = f ∘ T` with `a = a(C)`;
/// at most 1 whenever `f` satisfies the growth condition with constant `C`.
pub fn horodisc_transform_check(expr: &MapExpr, c: f64, theta: f64, res: usize) -> Result<CriterionReport> {
    horodisc_transform_check_at(expr, horodisc_constant(c), theta, res, 1e-9)
}

pub fn horodisc_transform_check_at(
    expr: &MapExpr,
    a: f64,
    theta: f64,
    res: usize,
    tol: f64,
) -> Result<CriterionReport> {
    let g = horodisc_pullback(expr, a, theta);
    let ops = MapOps::new(&g);
    let region = Region::UnitDisc;
    grid_verdict("hv-transform", region, &region.grid(res), 1.0, tol, |z| ops.becker_quantity(z))
}

/// `h(t) = (1 + C(1 − t)) / (1 − t²)`.
pub fn lemma_h(c: f64, t: f64) -> f64 {
    (1.0 + c * (1.0 - t)) / (1.0 - t * t)
}

/// Derivative of [`lemma_h`].
pub fn lemma_h_prime(c: f64, t: f64) -> f64 {
    let d = 1.0 - t * t;
    (-c * t * t + 2.0 * (1.0 + c) * t - c) / (d * d)
}

/// Minimizer `t_C = (1 + C − (1 + 2C)^{1/2}) / C` of [`lemma_h`].
pub fn lemma_t_c(c: f64) -> f64 {
    (1.0 + c - (1.0 + 2.0 * c).sqrt()) / c
}

/// The majorant `h(t) (1 − |z|²)/(1 + C)²` with `t = |a(C) + z/(1 + C)²|`.
pub fn lemma_majorant(c: f64, z: Complex64) -> f64 {
    lemma_majorant_polar(c, z.norm(), z.arg())
}

/// [`lemma_majorant`] at `z = r e^{iθ}`. Near `z = 1` both `1 − |z|²` and
/// `1 − t²` vanish, so they are formed from `1 − r` and `sin(θ/2)` without
/// cancellation: `1 − t² = (2(1 − Re z) − |1 − z|²/s)/s`, `s = (1 + C)²`.
pub fn lemma_majorant_polar(c: f64, r: f64, theta: f64) -> f64 {
    let s = (1.0 + c) * (1.0 + c);
    let sin2 = (0.5 * theta).sin().powi(2);
    let one_minus_x = (1.0 - r) + 2.0 * r * sin2;
    let dist2 = (1.0 - r) * (1.0 - r) + 4.0 * r * sin2;
    let one_minus_t2 = (2.0 * one_minus_x - dist2 / s) / s;
    let t = (horodisc_constant(c) + Complex64::from_polar(r, theta) / s).norm();
    let one_minus_t = one_minus_t2 / (1.0 + t);
    (1.0 + c * one_minus_t) * (1.0 - r) * (1.0 + r) / (s * one_minus_t2)
}

/// Maximum of [`lemma_majorant`] over an `n × n` polar grid of 𝔻 with
/// additional boundary layers `1 − 2^{−k}`, `k ≤ 30`.
pub fn lemma41_max(c: f64, n: usize) -> f64 {
    let mut radii: Vec<f64> = (0..n).map(|j| j as f64 / n as f64).collect();
    radii.extend((1..=30).map(|k| 1.0 - 0.5f64.powi(k)));
    radii
        .par_iter()
        .map(|&r| {
            (0..n)
                .map(|k| lemma_majorant_polar(c, r, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollisionReport {
    pub found: bool,
    pub z1: Complex64,
    pub z2: Complex64,
    pub image_gap: f64,
    pub pairs_tested: usize,
    pub seed: u64,
}

/// Minimum hyperbolic separation of a reported collision.
pub const SEPARATION_FLOOR: f64 = 0.05;

fn newton_match(
    f: &MapExpr,
    df: &MapExpr,
    region: &Region,
    target: Complex64,
    start: Complex64,
    tol: f64,
) -> Option<(Complex64, f64)> {
    let mut z = start;
    for _ in 0..40 {
        let v = f.value_at(z).ok()? - target;
        if v.norm() < tol {
            return Some((z, v.norm()));
        }
        let d = df.value_at(z).ok()?;
        if d.norm() < 1e-300 {
            return None;
        }
        let step = v / d;
        z -= step;
        if !region.contains(z) {
            return None;
        }
    }
    let gap = (f.value_at(z).ok()? - target).norm();
    (gap < tol).then_some((z, gap))
}

/// Samples point pairs (half Halton, half seeded uniform) and searches for
/// two separated points with the same image.
///
/// Pairs whose Newton step from `z2` toward the preimage of `f(z1)` is short
/// compared with the distance to the boundary are refined by Newton's method
/// on `f(z) − f(z1)`. The first pair in sampling order wins, so the report
/// replays exactly from its seed.
pub fn injectivity_sample(
    expr: &MapExpr,
    region: Region,
    n_pairs: usize,
    seed: u64,
    collision_tol: f64,
) -> Result<CollisionReport> {
    let df = expr.derivative();
    let n_halton = n_pairs / 2;
    let uniform = uniform_pairs(seed, 2 * (n_pairs - n_halton));
    let pairs: Vec<(Option<Complex64>, Option<Complex64>)> = (0..n_pairs)
        .map(|i| {
            if i < n_halton {
                let h = halton::<4>(i as u64 + seed.wrapping_mul(7919) % 1_000_003);
                (region.sample_point(h[0], h[1]), region.sample_point(h[2], h[3]))
            } else {
                let j = 2 * (i - n_halton);
                let (a, b) = uniform[j];
                let (c, d) = uniform[j + 1];
                (region.sample_point(a, b), region.sample_point(c, d))
            }
        })
        .collect();

    let tested = pairs
        .iter()
        .filter(|(a, b)| a.is_some() && b.is_some())
        .count();

    let hit = pairs.par_iter().find_map_first(|pair| {
        let (Some(z1), Some(z2)) = *pair else { return None };
        if hyperbolic_distance(z1, z2) <= SEPARATION_FLOOR {
            return None;
        }
        let w = expr.value_at(z1).ok()?;
        let v2 = expr.value_at(z2).ok()?;
        let d2 = df.value_at(z2).ok()?;
        let step = ((v2 - w) / d2).norm();
        if !(step < 0.25 * (1.0 - z2.norm())) {
            return None;
        }
        let (z, gap) = newton_match(expr, &df, &region, w, z2, collision_tol)?;
        (hyperbolic_distance(z1, z) > SEPARATION_FLOOR).then_some((z1, z, gap))
    });

    Ok(match hit {
        Some((z1, z2, gap)) => CollisionReport {
            found: true,
            z1,
            z2,
            image_gap: gap,
            pairs_tested: tested,
            seed,
        },
        None => CollisionReport {
            found: false,
            z1: Complex64::new(0.0, 0.0),
            z2: Complex64::new(0.0, 0.0),
            image_gap: f64::INFINITY,
            pairs_tested: tested,
            seed,
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LimsupClass {
    PreimageClusteringGuaranteed,
    NoConclusion,
    LocallyUnivalentCompatible,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LimsupReport {
    pub zeta: Complex64,
    /// `(r, |P(f)(rζ)| (1 − r²))` along `r = 1 − 2^{−k}`.
    pub values: Vec<(f64, f64)>,
    pub limsup_estimate: f64,
    pub classification: LimsupClass,
}

/// Radial estimate of `limsup |P(f)(w)| (1 − |w|²)` as `w → ζ`, classified
/// by the thresholds 6 (clustering of preimages forced) and 1.
pub fn local_becker_limsup(expr: &MapExpr, zeta: Complex64, n_points: usize) -> Result<LimsupReport> {
    if n_points == 0 {
        return Err(Error::InvalidArgument("n_points must be positive".into()));
    }
    let ops = MapOps::new(expr);
    let zeta = zeta / zeta.norm();
    let values = (1..=n_points)
        .map(|k| {
            let r = 1.0 - 0.5f64.powi(k as i32);
            Ok((r, ops.becker_quantity(zeta * r)?))
        })
        .collect::<Result<Vec<_>>>()?;
    let tail = &values[n_points - n_points.div_ceil(3)..];
    let est = tail.iter().map(|(_, v)| *v).fold(f64::NEG_INFINITY, f64::max);
    let classification = if est > 6.0 {
        LimsupClass::PreimageClusteringGuaranteed
    } else if est < 1.0 {
        LimsupClass::LocallyUnivalentCompatible
    } else {
        LimsupClass::NoConclusion
    };
    Ok(LimsupReport {
        zeta,
        values,
        limsup_estimate: est,
        classification,
    })
}

/// Hypotheses of the converse bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum ConverseMode {
    /// Univalent in the discs `D(C/(1+C) e^{iθ}, 1/(1+C))`:
    /// `|P(f)(z)| (1 − |z|²) ≤ 2 + 4/r_z` for `|z| > C/(1+C)`.
    Th3 { c: f64 },
    /// Univalent in the discs `D(a e^{iθ}, 1 − a)`:
    /// `|P(f)(z)| (1 − |z|) ≤ 4` for `a ≤ |z| < 1`.
    Th2 { a: f64 },
}

/// `r_a` with `r_a² = (|a| − C/(1+C)) / (|a| (1 − |a| C/(1+C)))`.
pub fn th3_radius(c: f64, abs_a: f64) -> Result<f64> {
    let k = c / (1.0 + c);
    if !(abs_a > k && abs_a < 1.0) {
        return Err(Error::Inapplicable(format!(
            "|a| = {abs_a} must lie in (C/(1+C), 1) = ({k}, 1)"
        )));
    }
    Ok(((abs_a - k) / (abs_a * (1.0 - abs_a * k))).sqrt())
}

/// Verifies the converse bound of `mode` on a grid of its annulus. The
/// caller is responsible for the univalence hypothesis.
pub fn converse_bound_check(expr: &MapExpr, mode: ConverseMode, res: usize, tol: f64) -> Result<CriterionReport> {
    let ops = MapOps::new(expr);
    match mode {
        ConverseMode::Th2 { a } => {
            let region = Region::Annulus { r_min: a, r_max: 1.0 };
            grid_verdict("th2-bound", region, &region.grid(res), 4.0, tol, |z| {
                Ok(ops.pre_schwarzian(z)?.norm() * (1.0 - z.norm()))
            })
        }
        ConverseMode::Th3 { c } => {
            let k = c / (1.0 + c);
            let region = Region::Annulus { r_min: k, r_max: 1.0 };
            let pts: Vec<Complex64> = region.grid(res).into_iter().filter(|z| z.norm() > k).collect();
            // Normalized so that the threshold is 0: quantity minus bound.
            grid_verdict("th3-bound", region, &pts, 0.0, tol, |z| {
                let r_a = th3_radius(c, z.norm())?;
                Ok(ops.becker_quantity(z)? - (2.0 + 4.0 / r_a))
            })
        }
    }
}
