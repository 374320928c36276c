use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::jet::Jet2;
use super::quad::{adaptive_gk, QuadTol};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Spacing of the cached boundary checkpoints for antiderivatives.
pub const CHECKPOINT_STEP: f64 = PI / 512.0;
const CHECKPOINTS: usize = 1025;

/// Descriptor of an analytic map of the unit disc.
///
/// Every node evaluates to a second-order jet. Maps that are only known
/// through their derivative (`PrimitiveOf`, `ExampleFamily`) are evaluated by
/// path integration; their derivatives stay in closed form.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MapExpr {
    Identity,
    Constant {
        c: Complex64,
    },
    /// `z ↦ a + b z`
    Affine {
        a: Complex64,
        b: Complex64,
    },
    /// Disc automorphism `z ↦ (a − z)/(1 − ā z)`.
    Mobius {
        a: Complex64,
    },
    /// Principal branch of `z^p`.
    Power {
        p: f64,
    },
    Exp,
    /// Coefficients in ascending order.
    Polynomial {
        coeffs: Vec<Complex64>,
    },
    Sum {
        terms: Vec<MapExpr>,
    },
    Product {
        factors: Vec<MapExpr>,
    },
    Quotient {
        num: Box<MapExpr>,
        den: Box<MapExpr>,
    },
    Scale {
        c: Complex64,
        expr: Box<MapExpr>,
    },
    /// `outer ∘ inner`
    Compose {
        outer: Box<MapExpr>,
        inner: Box<MapExpr>,
    },
    /// `z / (1 − z)^2`
    Koebe,
    /// `(1 − z)^(2n + 1)`
    OddPoly {
        n: u32,
    },
    /// `(1 − z)^(−p)`
    NegPower {
        p: f64,
    },
    /// The map with `f(−1) = 0` and
    /// `f'(z) = −i ((1 + z)/(1 − z))^(1/2) exp(C ζ z / 2)`.
    ExampleFamily {
        c: f64,
        #[serde(with = "zeta_serde")]
        zeta: Complex64,
        #[serde(skip)]
        cache: PrimitiveCache,
    },
    /// `base_value + ∫_base^z integrand`.
    PrimitiveOf {
        integrand: Box<MapExpr>,
        base: Complex64,
        base_value: Complex64,
        #[serde(skip)]
        cache: PrimitiveCache,
    },
}

/// Shared lazily-filled state of an antiderivative node. Clones of a
/// descriptor share it; it is safe to use from several threads.
#[derive(Clone, Default)]
pub struct PrimitiveCache(Arc<CacheInner>);

#[derive(Default)]
struct CacheInner {
    integrand: OnceLock<MapExpr>,
    hub: OnceLock<Result<(Complex64, Complex64)>>,
    checkpoints: OnceLock<Vec<Option<Complex64>>>,
}

impl fmt::Debug for PrimitiveCache {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PrimitiveCache")
    }
}

pub(crate) mod zeta_serde {
    use num_complex::Complex64;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Name(String),
        Pair([f64; 2]),
    }

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Pair([re, im]) => Ok(Complex64::new(re, im)),
            Repr::Name(s) => match s.trim() {
                "1" => Ok(Complex64::new(1.0, 0.0)),
                "-1" => Ok(Complex64::new(-1.0, 0.0)),
                "i" => Ok(Complex64::new(0.0, 1.0)),
                "-i" => Ok(Complex64::new(0.0, -1.0)),
                other => Err(D::Error::custom(format!(
                    "zeta must be \"1\", \"-1\", \"i\", \"-i\" or [re, im], got \"{other}\""
                ))),
            },
        }
    }
}

fn checked(z: Complex64, j: Jet2) -> Result<Jet2> {
    if j.is_finite() {
        Ok(j)
    } else {
        Err(Error::Singular { z })
    }
}

fn power_jet(w: Complex64, p: f64) -> Result<Jet2> {
    if p == 0.0 {
        return Ok(Jet2::constant(ONE));
    }
    if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
        let n = p as i32;
        if n < 0 && w == ZERO {
            return Err(Error::Singular { z: w });
        }
        let d1 = if n == 0 { ZERO } else { p * w.powi(n - 1) };
        let d2 = if n == 0 || n == 1 {
            ZERO
        } else {
            p * (p - 1.0) * w.powi(n - 2)
        };
        return checked(w, Jet2::new(w.powi(n), d1, d2));
    }
    if w == ZERO {
        return Err(Error::Singular { z: w });
    }
    let v = w.powf(p);
    checked(w, Jet2::new(v, p * v / w, p * (p - 1.0) * v / (w * w)))
}

fn power_value(w: Complex64, p: f64) -> Result<Complex64> {
    if p == 0.0 {
        return Ok(ONE);
    }
    if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
        if p < 0.0 && w == ZERO {
            return Err(Error::Singular { z: w });
        }
        return Ok(w.powi(p as i32));
    }
    if w == ZERO {
        return if p > 0.0 { Ok(ZERO) } else { Err(Error::Singular { z: w }) };
    }
    Ok(w.powf(p))
}

fn poly_jet(coeffs: &[Complex64], z: Complex64) -> Jet2 {
    let (mut p, mut d1, mut d2) = (ZERO, ZERO, ZERO);
    for &c in coeffs.iter().rev() {
        d2 = d2 * z + 2.0 * d1;
        d1 = d1 * z + p;
        p = p * z + c;
    }
    Jet2::new(p, d1, d2)
}

impl MapExpr {
    pub fn constant(c: Complex64) -> Self {
        MapExpr::Constant { c }
    }

    pub fn affine(a: Complex64, b: Complex64) -> Self {
        MapExpr::Affine { a, b }
    }

    pub fn mobius(a: Complex64) -> Self {
        MapExpr::Mobius { a }
    }

    pub fn power(p: f64) -> Self {
        MapExpr::Power { p }
    }

    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        MapExpr::Polynomial { coeffs }
    }

    /// `z^n` as a polynomial.
    pub fn monomial(n: usize) -> Self {
        let mut coeffs = vec![ZERO; n + 1];
        coeffs[n] = ONE;
        MapExpr::Polynomial { coeffs }
    }

    pub fn sum(terms: Vec<MapExpr>) -> Self {
        MapExpr::Sum { terms }
    }

    pub fn product(factors: Vec<MapExpr>) -> Self {
        MapExpr::Product { factors }
    }

    pub fn quotient(num: MapExpr, den: MapExpr) -> Self {
        MapExpr::Quotient {
            num: Box::new(num),
            den: Box::new(den),
        }
    }

    pub fn scale(c: Complex64, expr: MapExpr) -> Self {
        MapExpr::Scale {
            c,
            expr: Box::new(expr),
        }
    }

    pub fn compose(outer: MapExpr, inner: MapExpr) -> Self {
        MapExpr::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        }
    }

    pub fn odd_poly(n: u32) -> Self {
        MapExpr::OddPoly { n }
    }

    pub fn neg_power(p: f64) -> Self {
        MapExpr::NegPower { p }
    }

    pub fn example_family(c: f64, zeta: Complex64) -> Self {
        MapExpr::ExampleFamily {
            c,
            zeta,
            cache: PrimitiveCache::default(),
        }
    }

    pub fn primitive_of(integrand: MapExpr, base: Complex64, base_value: Complex64) -> Self {
        MapExpr::PrimitiveOf {
            integrand: Box::new(integrand),
            base,
            base_value,
            cache: PrimitiveCache::default(),
        }
    }

    /// Closed-form derivative of the example family.
    pub fn example_family_derivative(c: f64, zeta: Complex64) -> MapExpr {
        let sqrt_plus = MapExpr::compose(MapExpr::power(0.5), MapExpr::affine(ONE, ONE));
        let inv_sqrt_minus = MapExpr::compose(MapExpr::power(-0.5), MapExpr::affine(ONE, -ONE));
        let exp = MapExpr::compose(MapExpr::Exp, MapExpr::affine(ZERO, 0.5 * c * zeta));
        MapExpr::scale(-I, MapExpr::product(vec![sqrt_plus, inv_sqrt_minus, exp]))
    }

    /// Derivative descriptor. Exact for every node kind.
    pub fn derivative(&self) -> MapExpr {
        use MapExpr::*;
        match self {
            Identity => MapExpr::constant(ONE),
            Constant { .. } => MapExpr::constant(ZERO),
            Affine { b, .. } => MapExpr::constant(*b),
            Mobius { a } => MapExpr::scale(
                Complex64::new(a.norm_sqr() - 1.0, 0.0),
                MapExpr::compose(MapExpr::power(-2.0), MapExpr::affine(ONE, -a.conj())),
            ),
            Power { p } => {
                if *p == 0.0 {
                    MapExpr::constant(ZERO)
                } else {
                    MapExpr::scale(Complex64::new(*p, 0.0), MapExpr::power(p - 1.0))
                }
            }
            Exp => Exp,
            Polynomial { coeffs } => {
                let d: Vec<Complex64> = coeffs
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, c)| c * k as f64)
                    .collect();
                MapExpr::polynomial(d)
            }
            Sum { terms } => MapExpr::sum(terms.iter().map(|t| t.derivative()).collect()),
            Product { factors } => {
                let terms = (0..factors.len())
                    .map(|i| {
                        let fs = factors
                            .iter()
                            .enumerate()
                            .map(|(j, f)| if i == j { f.derivative() } else { f.clone() })
                            .collect();
                        MapExpr::product(fs)
                    })
                    .collect();
                MapExpr::sum(terms)
            }
            Quotient { num, den } => MapExpr::quotient(
                MapExpr::sum(vec![
                    MapExpr::product(vec![num.derivative(), (**den).clone()]),
                    MapExpr::scale(
                        -ONE,
                        MapExpr::product(vec![(**num).clone(), den.derivative()]),
                    ),
                ]),
                MapExpr::product(vec![(**den).clone(), (**den).clone()]),
            ),
            Scale { c, expr } => MapExpr::scale(*c, expr.derivative()),
            Compose { outer, inner } => MapExpr::product(vec![
                MapExpr::compose(outer.derivative(), (**inner).clone()),
                inner.derivative(),
            ]),
            Koebe => MapExpr::product(vec![
                MapExpr::affine(ONE, ONE),
                MapExpr::compose(MapExpr::power(-3.0), MapExpr::affine(ONE, -ONE)),
            ]),
            OddPoly { n } => {
                let m = 2 * n + 1;
                MapExpr::scale(
                    Complex64::new(-(m as f64), 0.0),
                    MapExpr::compose(MapExpr::power((m - 1) as f64), MapExpr::affine(ONE, -ONE)),
                )
            }
            NegPower { p } => MapExpr::scale(
                Complex64::new(*p, 0.0),
                MapExpr::compose(MapExpr::power(-p - 1.0), MapExpr::affine(ONE, -ONE)),
            ),
            ExampleFamily { c, zeta, .. } => MapExpr::example_family_derivative(*c, *zeta),
            PrimitiveOf { integrand, .. } => (**integrand).clone(),
        }
    }

    /// True when no node needs path integration.
    pub fn is_closed_form(&self) -> bool {
        use MapExpr::*;
        match self {
            ExampleFamily { .. } | PrimitiveOf { .. } => false,
            Sum { terms } => terms.iter().all(|t| t.is_closed_form()),
            Product { factors } => factors.iter().all(|t| t.is_closed_form()),
            Quotient { num, den } => num.is_closed_form() && den.is_closed_form(),
            Scale { expr, .. } => expr.is_closed_form(),
            Compose { outer, inner } => outer.is_closed_form() && inner.is_closed_form(),
            _ => true,
        }
    }

    /// Declared finite points near which the map is unbounded; `None` when
    /// the descriptor does not allow them to be determined. Branch points
    /// with a continuous value (`z^p`, `p > 0`) are not listed.
    pub fn singular_points(&self) -> Option<Vec<Complex64>> {
        use MapExpr::*;
        match self {
            Identity | Constant { .. } | Affine { .. } | Exp | Polynomial { .. } | OddPoly { .. } => {
                Some(vec![])
            }
            Power { p } => Some(if *p >= 0.0 { vec![] } else { vec![ZERO] }),
            Mobius { a } => Some(if *a == ZERO { vec![] } else { vec![ONE / a.conj()] }),
            Koebe | ExampleFamily { .. } => Some(vec![ONE]),
            NegPower { p } => Some(if *p == 0.0 { vec![] } else { vec![ONE] }),
            Sum { terms } => union(terms.iter()),
            Product { factors } => union(factors.iter()),
            Quotient { num, den } => union([num.as_ref(), den.as_ref()].into_iter()),
            Scale { expr, .. } => expr.singular_points(),
            PrimitiveOf { integrand, .. } => integrand.singular_points(),
            Compose { outer, inner } => {
                let outer_pts = outer.singular_points()?;
                let mut pts = inner.singular_points()?;
                if outer_pts.is_empty() {
                    return Some(pts);
                }
                match inner.as_ref() {
                    Affine { a, b } if *b != ZERO => {
                        pts.extend(outer_pts.iter().map(|s| (s - a) / b));
                        Some(pts)
                    }
                    Mobius { a } => {
                        pts.extend(outer_pts.iter().filter_map(|s| {
                            let d = ONE - a.conj() * s;
                            (d != ZERO).then(|| (a - s) / d)
                        }));
                        Some(pts)
                    }
                    Identity => {
                        pts.extend(outer_pts);
                        Some(pts)
                    }
                    _ => None,
                }
            }
        }
    }

    /// Parameters `t ∈ (−π, π]` with `e^{it}` a declared singular point.
    pub fn boundary_singular_params(&self) -> Vec<f64> {
        let mut ts: Vec<f64> = self
            .singular_points()
            .unwrap_or_default()
            .into_iter()
            .filter(|s| (s.norm() - 1.0).abs() < 1e-12)
            .map(|s| s.arg())
            .collect();
        ts.sort_by(f64::total_cmp);
        ts.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
        ts
    }

    /// Evaluates the jet at any point where the descriptor is analytic,
    /// without the unit-disc domain check.
    pub fn jet_at(&self, z: Complex64) -> Result<Jet2> {
        use MapExpr::*;
        let j = match self {
            Identity => Jet2::variable(z),
            Constant { c } => Jet2::constant(*c),
            Affine { a, b } => Jet2::new(a + b * z, *b, ZERO),
            Mobius { a } => {
                let d = ONE - a.conj() * z;
                if d == ZERO {
                    return Err(Error::Singular { z });
                }
                let k = a.norm_sqr() - 1.0;
                Jet2::new((a - z) / d, k / (d * d), 2.0 * a.conj() * k / (d * d * d))
            }
            Power { p } => power_jet(z, *p).map_err(|_| Error::Singular { z })?,
            Exp => {
                let e = z.exp();
                Jet2::new(e, e, e)
            }
            Polynomial { coeffs } => poly_jet(coeffs, z),
            Sum { terms } => {
                let mut acc = Jet2::constant(ZERO);
                for t in terms {
                    acc = acc + t.jet_at(z)?;
                }
                acc
            }
            Product { factors } => {
                let mut acc = Jet2::constant(ONE);
                for f in factors {
                    acc = acc * f.jet_at(z)?;
                }
                acc
            }
            Quotient { num, den } => {
                let d = den.jet_at(z)?;
                if d.f == ZERO {
                    return Err(Error::Singular { z });
                }
                num.jet_at(z)? / d
            }
            Scale { c, expr } => expr.jet_at(z)?.scale(*c),
            Compose { outer, inner } => {
                let h = inner.jet_at(z)?;
                let g = outer.jet_at(h.f).map_err(|_| Error::Singular { z })?;
                Jet2::compose(g, h)
            }
            Koebe => {
                let u = ONE - z;
                if u == ZERO {
                    return Err(Error::Singular { z });
                }
                let u2 = u * u;
                Jet2::new(z / u2, (ONE + z) / (u2 * u), (4.0 + 2.0 * z) / (u2 * u2))
            }
            OddPoly { n } => {
                let m = (2 * n + 1) as i32;
                let u = ONE - z;
                let mf = m as f64;
                Jet2::new(
                    u.powi(m),
                    -mf * u.powi(m - 1),
                    mf * (mf - 1.0) * u.powi(m - 2),
                )
            }
            NegPower { p } => {
                let u = ONE - z;
                if u == ZERO {
                    return Err(Error::Singular { z });
                }
                let v = power_value(u, -p)?;
                Jet2::new(v, p * v / u, p * (p + 1.0) * v / (u * u))
            }
            ExampleFamily { .. } | PrimitiveOf { .. } => {
                let d = self.primitive_integrand().jet_at(z)?;
                Jet2::new(self.primitive_value(z)?, d.f, d.df)
            }
        };
        checked(z, j)
    }

    /// Value only; cheaper than [`MapExpr::jet_at`].
    pub fn value_at(&self, z: Complex64) -> Result<Complex64> {
        use MapExpr::*;
        let v = match self {
            Identity => z,
            Constant { c } => *c,
            Affine { a, b } => a + b * z,
            Mobius { a } => {
                let d = ONE - a.conj() * z;
                if d == ZERO {
                    return Err(Error::Singular { z });
                }
                (a - z) / d
            }
            Power { p } => power_value(z, *p).map_err(|_| Error::Singular { z })?,
            Exp => z.exp(),
            Polynomial { coeffs } => coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c),
            Sum { terms } => {
                let mut acc = ZERO;
                for t in terms {
                    acc += t.value_at(z)?;
                }
                acc
            }
            Product { factors } => {
                let mut acc = ONE;
                for f in factors {
                    acc *= f.value_at(z)?;
                }
                acc
            }
            Quotient { num, den } => {
                let d = den.value_at(z)?;
                if d == ZERO {
                    return Err(Error::Singular { z });
                }
                num.value_at(z)? / d
            }
            Scale { c, expr } => c * expr.value_at(z)?,
            Compose { outer, inner } => {
                let h = inner.value_at(z)?;
                outer.value_at(h).map_err(|_| Error::Singular { z })?
            }
            Koebe => {
                let u = ONE - z;
                if u == ZERO {
                    return Err(Error::Singular { z });
                }
                z / (u * u)
            }
            OddPoly { n } => (ONE - z).powi((2 * n + 1) as i32),
            NegPower { p } => {
                let u = ONE - z;
                if u == ZERO {
                    return Err(Error::Singular { z });
                }
                power_value(u, -p)?
            }
            ExampleFamily { .. } | PrimitiveOf { .. } => self.primitive_value(z)?,
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Singular { z })
        }
    }

    /// Jet at an interior point of the unit disc.
    pub fn eval_jet(&self, z: Complex64) -> Result<Jet2> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain { z });
        }
        self.jet_at(z)
    }

    fn cache(&self) -> Option<&PrimitiveCache> {
        match self {
            MapExpr::ExampleFamily { cache, .. } | MapExpr::PrimitiveOf { cache, .. } => Some(cache),
            _ => None,
        }
    }

    /// Integrand of an antiderivative node; panics on other kinds.
    fn primitive_integrand(&self) -> &MapExpr {
        match self {
            MapExpr::PrimitiveOf { integrand, .. } => integrand,
            MapExpr::ExampleFamily { c, zeta, cache } => cache
                .0
                .integrand
                .get_or_init(|| MapExpr::example_family_derivative(*c, *zeta)),
            _ => unreachable!("not an antiderivative node"),
        }
    }

    fn primitive_base(&self) -> (Complex64, Complex64) {
        match self {
            MapExpr::PrimitiveOf {
                base, base_value, ..
            } => (*base, *base_value),
            MapExpr::ExampleFamily { .. } => (-ONE, ZERO),
            _ => unreachable!("not an antiderivative node"),
        }
    }

    /// Anchor point and value used for interior evaluations: the origin when
    /// the integrand is regular there, otherwise the base point.
    fn primitive_hub(&self) -> Result<(Complex64, Complex64)> {
        let cache = self.cache().expect("antiderivative node");
        cache
            .0
            .hub
            .get_or_init(|| {
                let (base, base_value) = self.primitive_base();
                let integrand = self.primitive_integrand();
                if base == ZERO || integrand.value_at(ZERO).is_err() {
                    return Ok((base, base_value));
                }
                let v = segment_integral(integrand, base, ZERO, QuadTol::internal())?;
                Ok((ZERO, base_value + v))
            })
            .clone()
    }

    fn primitive_value(&self, z: Complex64) -> Result<Complex64> {
        let (base, base_value) = self.primitive_base();
        if z == base {
            return Ok(base_value);
        }
        if (z.norm() - 1.0).abs() < 1e-12 {
            return self.primitive_boundary_value(z.arg());
        }
        let (hub, hub_value) = self.primitive_hub()?;
        Ok(hub_value + segment_integral(self.primitive_integrand(), hub, z, QuadTol::internal())?)
    }

    fn checkpoints(&self) -> &[Option<Complex64>] {
        let cache = self.cache().expect("antiderivative node");
        cache.0.checkpoints.get_or_init(|| {
            let hub = self.primitive_hub();
            let integrand = self.primitive_integrand();
            let (base, base_value) = self.primitive_base();
            (0..CHECKPOINTS)
                .into_par_iter()
                .map(|k| {
                    let t = -PI + k as f64 * CHECKPOINT_STEP;
                    let z = Complex64::from_polar(1.0, t);
                    if (z - base).norm() < 1e-14 {
                        return Some(base_value);
                    }
                    let (h, hv) = hub.clone().ok()?;
                    segment_integral(integrand, h, z, QuadTol::internal())
                        .ok()
                        .map(|v| hv + v)
                })
                .collect()
        })
    }

    fn primitive_boundary_value(&self, t: f64) -> Result<Complex64> {
        let t = normalize_angle(t);
        let z = Complex64::from_polar(1.0, t);
        let singular = self.primitive_integrand().boundary_singular_params();
        if singular.iter().any(|s| angle_dist(*s, t) < 1e-15) {
            return Err(Error::Singular { z });
        }
        let cps = self.checkpoints();
        let pos = (t + PI) / CHECKPOINT_STEP;
        let near = pos.round() as i64;
        let candidates = [near, near - 1, near + 1, pos.floor() as i64, pos.ceil() as i64 + 1, near - 2];
        for k in candidates {
            if k < 0 || k as usize >= CHECKPOINTS {
                continue;
            }
            let Some(value) = cps[k as usize] else { continue };
            let tk = -PI + k as f64 * CHECKPOINT_STEP;
            let (lo, hi) = if tk < t { (tk, t) } else { (t, tk) };
            if singular.iter().any(|s| *s >= lo && *s <= hi) {
                continue;
            }
            let integrand = self.primitive_integrand();
            let arc = adaptive_gk(
                |s| {
                    let w = Complex64::from_polar(1.0, s);
                    Ok(integrand.value_at(w)? * I * w)
                },
                tk,
                t,
                QuadTol::internal(),
            )?;
            return Ok(value + arc);
        }
        Err(Error::Singular { z })
    }
}

fn union<'a>(items: impl Iterator<Item = &'a MapExpr>) -> Option<Vec<Complex64>> {
    let mut out = Vec::new();
    for it in items {
        out.extend(it.singular_points()?);
    }
    Some(out)
}

/// Wraps an angle into (−π, π].
pub fn normalize_angle(t: f64) -> f64 {
    let mut x = t.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

fn angle_dist(a: f64, b: f64) -> f64 {
    normalize_angle(a - b).abs()
}

pub(crate) fn segment_integral(
    integrand: &MapExpr,
    z0: Complex64,
    z1: Complex64,
    tol: QuadTol,
) -> Result<Complex64> {
    let dz = z1 - z0;
    if dz == ZERO {
        return Ok(ZERO);
    }
    adaptive_gk(|s| Ok(integrand.value_at(z0 + s * dz)? * dz), 0.0, 1.0, tol)
}

/// Jet of `expr` at an interior point `z`.
pub fn eval_jet(expr: &MapExpr, z: Complex64) -> Result<Jet2> {
    expr.eval_jet(z)
}

/// `∫ derivative_expr` along the straight segment `[z0, z1]` to absolute
/// accuracy `tol`.
pub fn integrate_path(
    derivative_expr: &MapExpr,
    z0: Complex64,
    z1: Complex64,
    tol: f64,
) -> Result<Complex64> {
    segment_integral(derivative_expr, z0, z1, QuadTol::absolute(tol))
}

/// Jet of the continuous extension at `e^{it}`. For antiderivative nodes
/// `d2f` is NaN where the integrand has a branch point.
pub fn boundary_jet(expr: &MapExpr, t: f64) -> Result<Jet2> {
    let t = normalize_angle(t);
    let z = Complex64::from_polar(1.0, t);
    if expr
        .boundary_singular_params()
        .iter()
        .any(|s| angle_dist(*s, t) < 1e-15)
    {
        return Err(Error::Singular { z });
    }
    match expr {
        MapExpr::ExampleFamily { .. } | MapExpr::PrimitiveOf { .. } => {
            let integrand = expr.primitive_integrand();
            let df = integrand.value_at(z)?;
            // The extension may be C^1 only (branch point of the integrand).
            let d2f = integrand
                .jet_at(z)
                .map(|j| j.df)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN));
            Ok(Jet2::new(expr.primitive_boundary_value(t)?, df, d2f))
        }
        _ => expr.jet_at(z),
    }
}

/// Value of the continuous extension at `e^{it}`.
pub fn boundary_value(expr: &MapExpr, t: f64) -> Result<Complex64> {
    let t = normalize_angle(t);
    let z = Complex64::from_polar(1.0, t);
    match expr {
        MapExpr::ExampleFamily { .. } | MapExpr::PrimitiveOf { .. } => {
            expr.primitive_boundary_value(t)
        }
        _ => {
            if expr
                .boundary_singular_params()
                .iter()
                .any(|s| angle_dist(*s, t) < 1e-15)
            {
                return Err(Error::Singular { z });
            }
            expr.value_at(z)
        }
    }
}
