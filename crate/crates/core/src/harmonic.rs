//! Sense-preserving harmonic maps `f = h + ḡ`: dilatation, Jacobian,
//! harmonic pre-Schwarzian and Schwarzian, and the associated criteria.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::MapExpr;
use crate::error::{Error, Result};
use crate::geometry::{hyperbolic_distance, hyperbolic_midpoint, Region};
use crate::operators::{disc_weight, par_argmax, MapOps};
use crate::univalence::{grid_verdict, CriterionReport};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HarmonicMap {
    pub h: MapExpr,
    pub g: MapExpr,
}

/// Per-point data shared by the harmonic operators.
struct Local {
    p_h: Complex64,
    s_h: Complex64,
    omega: Complex64,
    d_omega: Complex64,
    d2_omega: Complex64,
}

impl HarmonicMap {
    /// Normalizes `g(0) = 0` by subtracting the constant.
    pub fn new(h: MapExpr, g: MapExpr) -> Result<Self> {
        let g0 = g.value_at(Complex64::new(0.0, 0.0))?;
        let g = if g0 == Complex64::new(0.0, 0.0) {
            g
        } else {
            MapExpr::sum(vec![g, MapExpr::constant(-g0)])
        };
        Ok(Self { h, g })
    }

    /// The analytic map `h` viewed as `h + 0̄`.
    pub fn analytic(h: MapExpr) -> Self {
        Self {
            h,
            g: MapExpr::constant(Complex64::new(0.0, 0.0)),
        }
    }

    /// Descriptor of `ω = g'/h'`. When `g'` is a constant multiple of `h'`
    /// the dilatation is returned as that constant, so that its derivatives
    /// vanish exactly.
    pub fn omega_expr(&self) -> MapExpr {
        let dg = drop_zero_terms(self.g.derivative());
        let dh = drop_zero_terms(self.h.derivative());
        let same = |a: &MapExpr, b: &MapExpr| serde_json::to_value(a).ok() == serde_json::to_value(b).ok();
        if same(&dg, &dh) {
            return MapExpr::constant(Complex64::new(1.0, 0.0));
        }
        if let MapExpr::Scale { c, expr } = &dg {
            if same(expr, &dh) {
                return MapExpr::constant(*c);
            }
        }
        MapExpr::quotient(dg, dh)
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.h.value_at(z)? + self.g.value_at(z)?.conj())
    }

    fn local(&self, z: Complex64) -> Result<Local> {
        let ops = MapOps::new(&self.h);
        let (p_h, dp_h) = ops.pre_schwarzian_jet(z)?;
        let w = self.omega_expr().eval_jet(z)?;
        Ok(Local {
            p_h,
            s_h: dp_h - 0.5 * p_h * p_h,
            omega: w.f,
            d_omega: w.df,
            d2_omega: w.d2f,
        })
    }

    fn sense_preserving(&self, z: Complex64) -> Result<Local> {
        let l = self.local(z)?;
        if l.omega.norm() >= 1.0 {
            return Err(Error::Degenerate { z });
        }
        Ok(l)
    }
}

/// Removes zero constants from a sum, as left by the `g(0) = 0` shift.
fn drop_zero_terms(e: MapExpr) -> MapExpr {
    match e {
        MapExpr::Sum { terms } => {
            let mut kept: Vec<MapExpr> = terms
                .into_iter()
                .filter(|t| !matches!(t, MapExpr::Constant { c } if *c == Complex64::new(0.0, 0.0)))
                .collect();
            match kept.len() {
                0 => MapExpr::constant(Complex64::new(0.0, 0.0)),
                1 => kept.pop().unwrap(),
                _ => MapExpr::sum(kept),
            }
        }
        other => other,
    }
}

/// `ω = g'/h'`
pub fn dilatation(map: &HarmonicMap, z: Complex64) -> Result<Complex64> {
    let dh = MapOps::new(&map.h).derivative_jet(z)?.f;
    let dg = map.g.derivative().eval_jet(z)?.f;
    Ok(dg / dh)
}

/// `J = |h'|² − |g'|²`
pub fn jacobian(map: &HarmonicMap, z: Complex64) -> Result<f64> {
    let dh = map.h.derivative().eval_jet(z)?.f;
    let dg = map.g.derivative().eval_jet(z)?.f;
    Ok(dh.norm_sqr() - dg.norm_sqr())
}

/// `P(f) = P(h) − ω̄ω'/(1 − |ω|²)`
pub fn harmonic_pre_schwarzian(map: &HarmonicMap, z: Complex64) -> Result<Complex64> {
    let l = map.sense_preserving(z)?;
    Ok(l.p_h - l.omega.conj() * l.d_omega / (1.0 - l.omega.norm_sqr()))
}

/// `S(f) = S(h) + ω̄/(1 − |ω|²)·(P(h)ω' − ω'') − (3/2)(ω̄ω'/(1 − |ω|²))²`
pub fn harmonic_schwarzian(map: &HarmonicMap, z: Complex64) -> Result<Complex64> {
    let l = map.sense_preserving(z)?;
    let k = l.omega.conj() / (1.0 - l.omega.norm_sqr());
    let t = k * l.d_omega;
    Ok(l.s_h + k * (l.p_h * l.d_omega - l.d2_omega) - 1.5 * t * t)
}

/// `|P(f)|(1 − |z|²) + |ω'|(1 − |z|²)/(1 − |ω|²)`
pub fn harmonic_becker_quantity(map: &HarmonicMap, z: Complex64) -> Result<f64> {
    let l = map.sense_preserving(z)?;
    let m = 1.0 - l.omega.norm_sqr();
    let p = l.p_h - l.omega.conj() * l.d_omega / m;
    let w = disc_weight(z);
    Ok(p.norm() * w + l.d_omega.norm() * w / m)
}

fn infinite_if_degenerate(v: Result<f64>) -> Result<f64> {
    match v {
        Err(Error::Degenerate { .. }) => Ok(f64::INFINITY),
        other => other,
    }
}

/// Grid verdict of the harmonic Becker-type criterion (threshold 1).
/// Points with `|ω| ≥ 1` count as violations.
pub fn harmonic_becker_verdict(map: &HarmonicMap, region: Region, tol: f64, res: usize) -> Result<CriterionReport> {
    let pts = region.grid(res);
    grid_verdict("harmonic-becker", region, &pts, 1.0, tol, |z| {
        infinite_if_degenerate(harmonic_becker_quantity(map, z))
    })
}

/// Labels for the harmonic Schwarzian criteria.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HarmonicConfig {
    /// Unknown sharp constant of the harmonic Nehari-type criterion; used
    /// only to label reports.
    pub delta0: f64,
    /// Exponent of `(1 − |z|²)` in the separation hypothesis.
    pub schwarzian_exponent: f64,
}

impl Default for HarmonicConfig {
    fn default() -> Self {
        Self {
            delta0: 0.5,
            schwarzian_exponent: 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationHypothesisReport {
    pub c: f64,
    pub exponent: f64,
    /// `sup |S(f)|(1 − |z|²)^e / (1 + C(1 − |z|))` over the grid: the
    /// smallest `δ₀` for which the hypothesis holds there.
    pub required_delta0: f64,
    pub worst_point: Complex64,
    /// Whether the configured `δ₀` would cover it (a label, not a verdict).
    pub within_configured_delta0: bool,
    pub config: HarmonicConfig,
}

pub fn separation_hypothesis(map: &HarmonicMap, c: f64, cfg: HarmonicConfig, res: usize) -> Result<SeparationHypothesisReport> {
    let pts = Region::UnitDisc.grid(res);
    let best = par_argmax(&pts, |&z| {
        let s = match harmonic_schwarzian(map, z) {
            Ok(s) => s,
            Err(Error::Degenerate { .. } | Error::CriticalPoint { .. } | Error::Singular { .. }) => return Ok(f64::INFINITY),
            Err(e) => return Err(e),
        };
        Ok(s.norm() * disc_weight(z).powf(cfg.schwarzian_exponent) / (1.0 + c * (1.0 - z.norm())))
    })?;
    let (i, v) = best.ok_or_else(|| Error::InvalidArgument("empty grid".into()))?;
    Ok(SeparationHypothesisReport {
        c,
        exponent: cfg.schwarzian_exponent,
        required_delta0: v,
        worst_point: pts[i],
        within_configured_delta0: v <= cfg.delta0,
        config: cfg,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationQuery {
    pub z1: Complex64,
    pub z2: Complex64,
    pub c: f64,
}

/// `log((2 − √(Cu))/√(Cu))` with `u = 1 − |ξ|`; needs `0 < u < 1/C`.
pub fn separation_bound_at_gap(c: f64, u: f64) -> Result<f64> {
    if !(c > 0.0) || !(u > 0.0) || u * c >= 1.0 {
        return Err(Error::Inapplicable(format!("separation bound needs 0 < 1 − |ξ| < 1/C (C = {c}, 1 − |ξ| = {u})")));
    }
    let s = (c * u).sqrt();
    Ok(((2.0 - s) / s).ln())
}

/// Lower bound for `d_H(z1, z2)` at the hyperbolic midpoint `ξ` of the pair.
pub fn separation_bound(q: SeparationQuery) -> Result<f64> {
    let xi = hyperbolic_midpoint(q.z1, q.z2);
    separation_bound_at_gap(q.c, 1.0 - xi.norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparationReport {
    pub bound: f64,
    pub distance: f64,
    pub holds: bool,
    /// `|f(z1) − f(z2)|`
    pub image_gap: f64,
}

/// Compares `d_H(z1, z2)` with the separation bound for a pair with a
/// common image.
pub fn separation_check(map: &HarmonicMap, q: SeparationQuery) -> Result<SeparationReport> {
    let f1 = map.value(q.z1)?;
    let f2 = map.value(q.z2)?;
    let gap = (f1 - f2).norm();
    if gap > 1e-8 * (1.0 + f1.norm()) {
        return Err(Error::InvalidArgument(format!("points do not share an image (gap {gap:e})")));
    }
    let bound = separation_bound(q)?;
    let distance = hyperbolic_distance(q.z1, q.z2);
    Ok(SeparationReport {
        bound,
        distance,
        holds: distance >= bound,
        image_gap: gap,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaReport {
    pub z0: Complex64,
    pub max_modulus: f64,
    pub argmax: Complex64,
    /// Samples with `|Ω| ≥ 1`.
    pub violations: usize,
    pub samples: usize,
}

/// `max |Ω|` with `Ω(z) = (g(z) − g(z0))/(h(z) − h(z0))` over the given
/// samples; samples within `1e-9` of `z0` are skipped.
pub fn omega_map_check(map: &HarmonicMap, z0: Complex64, samples: &[Complex64]) -> Result<OmegaReport> {
    let h0 = map.h.value_at(z0)?;
    let g0 = map.g.value_at(z0)?;
    let pts: Vec<Complex64> = samples.iter().copied().filter(|z| (z - z0).norm() > 1e-9).collect();
    let vals: Vec<f64> = {
        use rayon::prelude::*;
        pts.par_iter()
            .map(|&z| Ok(((map.g.value_at(z)? - g0) / (map.h.value_at(z)? - h0)).norm()))
            .collect::<Result<_>>()?
    };
    let (i, m) = vals
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    Ok(OmegaReport {
        z0,
        max_modulus: m,
        argmax: pts.get(i).copied().unwrap_or(z0),
        violations: vals.iter().filter(|&&v| v >= 1.0).count(),
        samples: pts.len(),
    })
}

/// `max |f|` over a polar grid of `|z| ≤ r`.
pub fn max_modulus(map: &HarmonicMap, r: f64, res: usize) -> Result<f64> {
    let pts: Vec<Complex64> = Region::UnitDisc.grid(res).into_iter().filter(|z| z.norm() <= r).collect();
    let best = par_argmax(&pts, |&z| Ok(map.value(z)?.norm()))?;
    Ok(best.map_or(0.0, |(_, v)| v))
}
