use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::quad::{adaptive_gk, QuadTol};
use crate::analytic::MapExpr;
use crate::error::{Error, Result};

const START_NODES: usize = 256;
const MAX_NODES: usize = 1 << 20;
const NUDGES: usize = 8;
/// Largest admissible distance from an integer of the contour integral.
pub const ROUNDING_RESIDUAL: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    pub value: i64,
    /// Radius actually used (after nudging).
    pub radius: f64,
    pub nodes: usize,
    pub residual: f64,
    /// `min |f − w|` over the contour nodes.
    pub margin: f64,
}

/// `(f, f')` at `n` equispaced nodes of the circle `|z − center| = rho`.
///
/// Maps given by an antiderivative are continued along the circle by arc
/// integrals of `f'`, so that only one full evaluation of `f` is needed.
pub(crate) fn circle_values(
    expr: &MapExpr,
    deriv: &MapExpr,
    center: Complex64,
    rho: f64,
    n: usize,
) -> Result<Vec<(Complex64, Complex64)>> {
    let node = |k: usize| center + Complex64::from_polar(rho, 2.0 * PI * k as f64 / n as f64);
    let derivs: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|k| deriv.eval_jet(node(k)).map(|j| j.f))
        .collect::<Result<_>>()?;
    let values: Vec<Complex64> = if expr.is_closed_form() {
        (0..n).into_par_iter().map(|k| expr.value_at(node(k))).collect::<Result<_>>()?
    } else {
        let step = 2.0 * PI / n as f64;
        let incs: Vec<Complex64> = (0..n - 1)
            .into_par_iter()
            .map(|k| {
                let phi0 = step * k as f64;
                adaptive_gk(
                    |phi| {
                        let e = Complex64::from_polar(rho, phi);
                        Ok(deriv.value_at(center + e)? * Complex64::i() * e)
                    },
                    phi0,
                    phi0 + step,
                    QuadTol::internal(),
                )
            })
            .collect::<Result<_>>()?;
        let mut v = Vec::with_capacity(n);
        v.push(expr.value_at(node(0))?);
        for inc in incs {
            let last = *v.last().unwrap();
            v.push(last + inc);
        }
        v
    };
    Ok(values.into_iter().zip(derivs).collect())
}

/// Number of solutions of `f(z) = w` in `|z| < r`, counted with
/// multiplicity.
pub fn winding_number(expr: &MapExpr, w: Complex64, r: f64) -> Result<i64> {
    Ok(winding_number_circle(expr, w, Complex64::new(0.0, 0.0), r)?.value)
}

/// Argument principle on `|z − center| = rho`.
///
/// The trapezoid value of `(1/2πi)∮ f'/(f − w)` and the summed argument
/// increments must agree and the former must be within
/// [`ROUNDING_RESIDUAL`] of an integer; otherwise the node count doubles.
/// A contour passing too close to a preimage is nudged outward and inward.
pub fn winding_number_circle(expr: &MapExpr, w: Complex64, center: Complex64, rho: f64) -> Result<WindingResult> {
    if !(rho > 0.0) || center.norm() + rho >= 1.0 {
        return Err(Error::Domain { z: center + rho });
    }
    let deriv = expr.derivative();
    let room = 1.0 - center.norm() - rho;
    let mut radii = vec![rho];
    for j in 0..NUDGES {
        let d = (1e-6 * rho * 4f64.powi(j as i32)).min(0.5 * room);
        radii.push(rho + d);
        radii.push(rho - d);
    }
    let mut failure = Error::ContourThroughTarget { r: rho };
    for &r in &radii {
        match winding_at(expr, &deriv, w, center, r) {
            Ok(Some(res)) => return Ok(res),
            Ok(None) => continue,
            // A preimage just off the contour; a wider nudge may resolve it.
            Err(e @ Error::NonConvergence { .. }) => failure = e,
            Err(e) => return Err(e),
        }
    }
    Err(failure)
}

fn winding_at(
    expr: &MapExpr,
    deriv: &MapExpr,
    w: Complex64,
    center: Complex64,
    rho: f64,
) -> Result<Option<WindingResult>> {
    let mut n = START_NODES;
    let mut last = f64::NAN;
    while n <= MAX_NODES {
        let vals = circle_values(expr, deriv, center, rho, n)?;
        let scale = vals.iter().map(|(f, _)| f.norm()).fold(w.norm(), f64::max);
        let margin = vals.iter().map(|(f, _)| (f - w).norm()).fold(f64::INFINITY, f64::min);
        if margin <= 1e-12 * (1.0 + scale) {
            return Ok(None);
        }
        let mut arg_sum = 0.0;
        let mut coarse = false;
        for k in 0..n {
            let a = vals[k].0 - w;
            let b = vals[(k + 1) % n].0 - w;
            let d = (b / a).arg();
            if d.abs() > 0.5 * PI {
                coarse = true;
            }
            arg_sum += d;
        }
        let mut integral = Complex64::new(0.0, 0.0);
        for (k, (f, df)) in vals.iter().enumerate() {
            let e = Complex64::from_polar(rho, 2.0 * PI * k as f64 / n as f64);
            integral += df * e / (f - w);
        }
        integral /= n as f64;
        let rounded = integral.re.round();
        let residual = (integral - rounded).norm();
        let by_args = (arg_sum / (2.0 * PI)).round();
        if !coarse && residual < ROUNDING_RESIDUAL && rounded == by_args {
            return Ok(Some(WindingResult {
                value: rounded as i64,
                radius: rho,
                nodes: n,
                residual,
                margin,
            }));
        }
        last = residual;
        n *= 2;
    }
    Err(Error::NonConvergence {
        what: "winding number",
        achieved: last,
        requested: ROUNDING_RESIDUAL,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simple_counts() {
        assert_eq!(winding_number(&MapExpr::monomial(2), c(0.0, 0.0), 0.5).unwrap(), 2);
        assert_eq!(winding_number(&MapExpr::Identity, c(0.3, 0.0), 0.5).unwrap(), 1);
        assert_eq!(winding_number(&MapExpr::Identity, c(0.3, 0.0), 0.2).unwrap(), 0);
        assert_eq!(winding_number(&MapExpr::monomial(3), c(0.1, 0.05), 0.9).unwrap(), 3);
    }

    #[test]
    fn contour_through_target_is_nudged() {
        let r = winding_number_circle(&MapExpr::Identity, c(0.5, 0.0), c(0.0, 0.0), 0.5).unwrap();
        assert!(r.radius != 0.5);
        assert!(r.value == 0 || r.value == 1);
    }

    #[test]
    fn koebe_counts_once() {
        for w in [c(0.0, 0.0), c(1.0, 2.0), c(-0.2, 0.01)] {
            assert_eq!(winding_number(&MapExpr::Koebe, w, 0.99).unwrap(), 1, "{w}");
        }
    }

    #[test]
    fn primitive_maps_use_continued_values() {
        let f = MapExpr::example_family(1.0, c(1.0, 0.0));
        let w = f.value_at(c(0.2, 0.3)).unwrap();
        assert_eq!(winding_number(&f, w, 0.95).unwrap(), 1);
        assert_eq!(winding_number(&f, w, 0.1).unwrap(), 0);
    }
}
