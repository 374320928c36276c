use num_complex::Complex64;

use crate::analytic::{Jet2, MapExpr};
use crate::error::{Error, Result};

/// Below this modulus `f'` is treated as a genuine zero.
pub const CRITICAL_THRESHOLD: f64 = 1e-300;

/// `1 − |z|²`, accurate near the unit circle.
pub fn disc_weight(z: Complex64) -> f64 {
    let n = z.norm();
    (1.0 - n) * (1.0 + n)
}

/// A map together with its derivative descriptor, so that `f'`, `f''` and
/// `f'''` come from one closed-form jet of `f'`.
///
/// Only [`MapOps::spherical_derivative`] needs `f` itself, which is the
/// expensive part for maps given by an antiderivative.
#[derive(Clone, Debug)]
pub struct MapOps {
    expr: MapExpr,
    derivative: MapExpr,
}

impl MapOps {
    pub fn new(expr: &MapExpr) -> Self {
        Self {
            expr: expr.clone(),
            derivative: expr.derivative(),
        }
    }

    pub fn expr(&self) -> &MapExpr {
        &self.expr
    }

    /// `(f', f'', f''')` at `z`.
    pub fn derivative_jet(&self, z: Complex64) -> Result<Jet2> {
        let j = self.derivative.eval_jet(z)?;
        if j.f.norm() < CRITICAL_THRESHOLD {
            return Err(Error::CriticalPoint { z });
        }
        Ok(j)
    }

    /// `(P, P')` with `P = f''/f'`.
    pub fn pre_schwarzian_jet(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let j = self.derivative_jet(z)?;
        let p = j.df / j.f;
        let dp = j.d2f / j.f - p * p;
        Ok((p, dp))
    }

    pub fn pre_schwarzian(&self, z: Complex64) -> Result<Complex64> {
        let j = self.derivative_jet(z)?;
        Ok(j.df / j.f)
    }

    pub fn schwarzian(&self, z: Complex64) -> Result<Complex64> {
        let (p, dp) = self.pre_schwarzian_jet(z)?;
        Ok(dp - 0.5 * p * p)
    }

    /// `|f'(z)| / (1 + |f(z)|²)`
    pub fn spherical_derivative(&self, z: Complex64) -> Result<f64> {
        let df = self.derivative.eval_jet(z)?.f;
        let f = self.expr.value_at(z)?;
        Ok(df.norm() / (1.0 + f.norm_sqr()))
    }

    /// `|P(f)(z)| (1 − |z|²)`
    pub fn becker_quantity(&self, z: Complex64) -> Result<f64> {
        Ok(self.pre_schwarzian(z)?.norm() * disc_weight(z))
    }

    /// `|z P(f)(z)| (1 − |z|²)`
    pub fn becker_quantity_z(&self, z: Complex64) -> Result<f64> {
        Ok((z * self.pre_schwarzian(z)?).norm() * disc_weight(z))
    }

    /// `|S(f)(z)| (1 − |z|²)²`
    pub fn nehari_quantity(&self, z: Complex64) -> Result<f64> {
        let w = disc_weight(z);
        Ok(self.schwarzian(z)?.norm() * w * w)
    }

    /// `1 + C(1 − |z|) − |P(f)(z)| (1 − |z|²)`; nonnegative exactly where
    /// the horodisc growth condition holds at `z`.
    pub fn hv_margin(&self, c: f64, z: Complex64) -> Result<f64> {
        Ok(1.0 + c * (1.0 - z.norm()) - self.becker_quantity(z)?)
    }
}

pub fn pre_schwarzian(expr: &MapExpr, z: Complex64) -> Result<Complex64> {
    MapOps::new(expr).pre_schwarzian(z)
}

pub fn schwarzian(expr: &MapExpr, z: Complex64) -> Result<Complex64> {
    MapOps::new(expr).schwarzian(z)
}

pub fn spherical_derivative(expr: &MapExpr, z: Complex64) -> Result<f64> {
    MapOps::new(expr).spherical_derivative(z)
}

pub fn becker_quantity(expr: &MapExpr, z: Complex64) -> Result<f64> {
    MapOps::new(expr).becker_quantity(z)
}

pub fn becker_quantity_z(expr: &MapExpr, z: Complex64) -> Result<f64> {
    MapOps::new(expr).becker_quantity_z(z)
}

pub fn nehari_quantity(expr: &MapExpr, z: Complex64) -> Result<f64> {
    MapOps::new(expr).nehari_quantity(z)
}

pub fn hv_margin(expr: &MapExpr, c: f64, z: Complex64) -> Result<f64> {
    MapOps::new(expr).hv_margin(c, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    const ONE: Complex64 = Complex64::new(1.0, 0.0);
    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn pre_schwarzian_examples() {
        assert_eq!(pre_schwarzian(&MapExpr::Identity, c(0.3, 0.2)).unwrap(), ZERO);
        assert!((pre_schwarzian(&MapExpr::Koebe, ZERO).unwrap() - 4.0).norm() < 1e-14);
        let p = 1.7;
        for z in [c(0.3, 0.1), c(-0.6, 0.5), c(0.9, -0.05)] {
            let got = pre_schwarzian(&MapExpr::neg_power(p), z).unwrap();
            let want = (p + 1.0) / (ONE - z);
            assert!((got - want).norm() < 1e-12 * want.norm());
        }
    }

    #[test]
    fn critical_point_is_reported() {
        let sq = MapExpr::monomial(2);
        assert!(matches!(pre_schwarzian(&sq, ZERO), Err(Error::CriticalPoint { .. })));
    }

    #[test]
    fn schwarzian_examples() {
        let aff = MapExpr::affine(c(1.0, 2.0), c(0.5, -0.3));
        assert_eq!(schwarzian(&aff, c(0.2, 0.7)).unwrap(), ZERO);
        assert!((schwarzian(&MapExpr::Koebe, ZERO).unwrap() + 6.0).norm() < 1e-13);
        for z in [c(0.5, 0.0), c(0.1, 0.6), c(-0.7, -0.2)] {
            let want = -6.0 / ((ONE - z * z) * (ONE - z * z));
            let got = schwarzian(&MapExpr::Koebe, z).unwrap();
            assert!((got - want).norm() < 1e-12 * want.norm());
        }
    }

    #[test]
    fn schwarzian_matches_finite_differences_of_pre_schwarzian() {
        let ops = MapOps::new(&MapExpr::Koebe);
        let z = c(0.3, -0.4);
        let h = 1e-5;
        let fd = (ops.pre_schwarzian(z + h).unwrap() - ops.pre_schwarzian(z - h).unwrap()) / (2.0 * h);
        let p = ops.pre_schwarzian(z).unwrap();
        let s = ops.schwarzian(z).unwrap();
        assert!((s - (fd - 0.5 * p * p)).norm() < 1e-7 * s.norm());
    }

    #[test]
    fn spherical_derivative_examples() {
        assert_eq!(spherical_derivative(&MapExpr::Identity, ZERO).unwrap(), 1.0);
        assert_eq!(spherical_derivative(&MapExpr::constant(c(2.0, 1.0)), c(0.4, 0.0)).unwrap(), 0.0);
        // k(0.5) = 2, k'(0.5) = 12
        let v = spherical_derivative(&MapExpr::Koebe, c(0.5, 0.0)).unwrap();
        assert!((v - 2.4).abs() < 1e-14, "{v}");
    }

    #[test]
    fn becker_examples() {
        assert_eq!(becker_quantity(&MapExpr::Identity, c(0.4, 0.1)).unwrap(), 0.0);
        assert_eq!(becker_quantity_z(&MapExpr::Identity, c(0.4, 0.1)).unwrap(), 0.0);
        for r in [0.1, 0.5, 0.9, 0.999] {
            let v = becker_quantity(&MapExpr::neg_power(3.0), c(r, 0.0)).unwrap();
            assert!((v - 4.0 * (1.0 + r)).abs() < 1e-12);
        }
    }

    #[test]
    fn nehari_examples() {
        let aff = MapExpr::affine(c(0.0, 1.0), c(2.0, 0.0));
        assert_eq!(nehari_quantity(&aff, c(0.3, 0.3)).unwrap(), 0.0);
        assert!((nehari_quantity(&MapExpr::Koebe, c(0.0, 0.5)).unwrap() - 2.16).abs() < 1e-12);
    }

    #[test]
    fn hv_margin_examples() {
        let z = c(0.3, -0.5);
        assert!((hv_margin(&MapExpr::Identity, 1.0, z).unwrap() - (2.0 - z.norm())).abs() < 1e-15);
        assert!(hv_margin(&MapExpr::Koebe, 1.0, c(0.9, 0.0)).unwrap() < 0.0);
        let f = MapExpr::example_family(2.0, c(0.0, -1.0));
        let ops = MapOps::new(&f);
        for k in 0..64 {
            let z = Complex64::from_polar(0.999 * (k as f64 / 64.0).sqrt(), 2.0 * PI * k as f64 / 13.0);
            assert!(ops.hv_margin(2.0, z).unwrap() >= -1e-12);
            let p = ops.pre_schwarzian(z).unwrap();
            let want = ONE / (ONE - z * z) + c(0.0, -1.0);
            assert!((p - want).norm() < 1e-12 * want.norm());
        }
    }

    fn disc_point() -> impl Strategy<Value = Complex64> {
        (0.0f64..0.9, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    fn inner_map() -> impl Strategy<Value = MapExpr> {
        (disc_point(), 0.2f64..0.9, -PI..PI).prop_map(|(a, s, t)| {
            // a + s e^{it} z maps 𝔻 into a disc about a; keep it inside 𝔻.
            let s = s * (1.0 - a.norm());
            MapExpr::affine(a, Complex64::from_polar(s, t))
        })
    }

    proptest! {
        #[test]
        fn pre_schwarzian_chain_rule(z in disc_point(), t in inner_map(), p in 0.5f64..3.0) {
            let f = MapExpr::neg_power(p);
            let g = MapExpr::compose(f.clone(), t.clone());
            let tj = t.eval_jet(z).unwrap();
            let lhs = pre_schwarzian(&g, z).unwrap();
            let rhs = pre_schwarzian(&f, tj.f).unwrap() * tj.df + tj.d2f / tj.df;
            prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
        }

        #[test]
        fn schwarzian_mobius_invariance(z in disc_point(), a in disc_point(), m in disc_point()) {
            let f = MapExpr::Koebe;
            let inner = MapExpr::compose(f.clone(), MapExpr::mobius(a));
            let phi = MapExpr::mobius(a).eval_jet(z).unwrap();
            let lhs = schwarzian(&inner, z).unwrap();
            let rhs = schwarzian(&f, phi.f).unwrap() * phi.df * phi.df;
            prop_assert!((lhs - rhs).norm() < 1e-9 * (1.0 + lhs.norm()));

            // outer Möbius M(w) = (w − m)/(1 + w) keeps S(f)
            let outer = MapExpr::compose(
                MapExpr::quotient(MapExpr::affine(-m, ONE), MapExpr::affine(ONE, ONE)),
                MapExpr::neg_power(0.7),
            );
            let s0 = schwarzian(&MapExpr::neg_power(0.7), z).unwrap();
            let s1 = schwarzian(&outer, z).unwrap();
            prop_assert!((s0 - s1).norm() < 1e-9 * (1.0 + s0.norm()));
        }

        #[test]
        fn koebe_nehari_is_six_on_the_real_axis(x in -0.999f64..0.999) {
            let v = nehari_quantity(&MapExpr::Koebe, c(x, 0.0)).unwrap();
            prop_assert!((v - 6.0).abs() < 1e-10);
        }
    }
}
