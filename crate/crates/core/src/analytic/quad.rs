//! Adaptive Gauss–Kronrod quadrature for complex-valued integrands of a real
//! parameter.
//!
//! Panels are bisected in order of decreasing error estimate, so integrable
//! endpoint singularities are handled by geometric shrinking of the panels
//! next to the endpoint. Kronrod nodes never touch the panel ends.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// 8-point Gauss–Legendre nodes and weights on [-1, 1].
const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];

/// Composite 8-point Gauss–Legendre rule on `pieces` equal subintervals.
/// Smooth in the endpoints, which nested adaptive rules are not.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize) -> f64 {
    let h = (b - a) / pieces as f64;
    let mut total = 0.0;
    for k in 0..pieces {
        let c = a + h * (k as f64 + 0.5);
        for &(x, w) in &GL8 {
            total += w * f(c + 0.5 * h * x);
        }
    }
    0.5 * h * total
}

/// Absolute/relative tolerance pair; the effective target is
/// `max(abs, rel * |integral|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_panels: usize,
}

impl QuadTol {
    pub const fn absolute(abs: f64) -> Self {
        Self {
            abs,
            rel: 0.0,
            max_panels: 4000,
        }
    }

    /// Tolerance used for internal antiderivative evaluations.
    pub const fn internal() -> Self {
        Self {
            abs: 1e-14,
            rel: 1e-13,
            max_panels: 4000,
        }
    }

    fn target(&self, total: Complex64) -> f64 {
        self.abs.max(self.rel * total.norm())
    }
}

#[derive(Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64)>
where
    F: Fn(f64) -> Result<Complex64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    let value = kron * h;
    let err = ((kron - gauss) * h).norm();
    Ok((value, err))
}

/// Integrates `f` over `[a, b]` (either orientation).
pub fn adaptive_gk<F>(f: F, a: f64, b: f64, tol: QuadTol) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    if a == b {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (v0, e0) = gk15(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(Panel {
        a,
        b,
        value: v0,
        error: e0,
    });
    let mut total = v0;
    let mut total_err = e0;
    let mut panels = 1usize;

    while total_err > tol.target(total) {
        if panels >= tol.max_panels {
            return Err(Error::NonConvergence {
                what: "adaptive quadrature",
                achieved: total_err,
                requested: tol.target(total),
            });
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid == worst.a || mid == worst.b {
            // Panel width at machine resolution; keep what we have.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            total_err = heap.iter().map(|p| p.error).sum();
            continue;
        }
        let (vl, el) = gk15(&f, worst.a, mid)?;
        let (vr, er) = gk15(&f, mid, worst.b)?;
        total += vl + vr - worst.value;
        total_err += el + er - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: vl,
            error: el,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: vr,
            error: er,
        });
        panels += 1;
        // Re-sum periodically to avoid drift from incremental updates.
        if panels.is_multiple_of(64) {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(heap.iter().map(|p| p.value).sum())
}

/// Real-valued convenience wrapper around [`adaptive_gk`].
pub fn adaptive_gk_real<F>(f: F, a: f64, b: f64, tol: QuadTol) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    adaptive_gk(|t| f(t).map(|v| Complex64::new(v, 0.0)), a, b, tol).map(|c| c.re)
}
