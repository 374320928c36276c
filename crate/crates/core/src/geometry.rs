//! Geometry of the unit disc.
//!
//! The hyperbolic segment between `a` and `b` is parameterized as
//! `t ↦ φ_a(φ_a(b) t)`. Since `φ_a` is an isometry swapping `0` and `a`,
//! `d_H(a, segment_point(a, b, t)) = artanh(ρ t)` with `ρ = |φ_a(b)|`.
//! Equating this with half of `artanh ρ` gives the midpoint parameter
//! `t* = tanh(½ artanh ρ) / ρ`, which tends to ½ as `ρ → 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic::normalize_angle;

/// Disc automorphism `φ_a(z) = (a − z)/(1 − ā z)`.
pub fn mobius(a: Complex64, z: Complex64) -> Complex64 {
    (a - z) / (1.0 - a.conj() * z)
}

/// Pseudo-hyperbolic distance `|φ_z(w)|`.
pub fn pseudo_hyperbolic_distance(z: Complex64, w: Complex64) -> f64 {
    mobius(z, w).norm().min(1.0)
}

/// Hyperbolic distance `½ log((1 + |φ_z(w)|)/(1 − |φ_z(w)|))`.
pub fn hyperbolic_distance(z: Complex64, w: Complex64) -> f64 {
    // The symmetric form avoids cancellation when both points are close.
    let num = (z - w).norm();
    let den = (1.0 - z.conj() * w).norm();
    (num / den).min(1.0).atanh()
}

/// A point of the extended plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChordalValue {
    Finite(Complex64),
    Infinity,
}

impl From<Complex64> for ChordalValue {
    fn from(z: Complex64) -> Self {
        if z.is_finite() {
            ChordalValue::Finite(z)
        } else {
            ChordalValue::Infinity
        }
    }
}

/// Chordal distance on the Riemann sphere, normalized so that `χ ≤ 1`.
pub fn chordal_distance(z: ChordalValue, w: ChordalValue) -> f64 {
    match (z, w) {
        (ChordalValue::Infinity, ChordalValue::Infinity) => 0.0,
        (ChordalValue::Finite(z), ChordalValue::Infinity)
        | (ChordalValue::Infinity, ChordalValue::Finite(z)) => 1.0 / (1.0 + z.norm_sqr()).sqrt(),
        (ChordalValue::Finite(z), ChordalValue::Finite(w)) => {
            (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
        }
    }
}

/// Point `φ_a(φ_a(b) t)` of the hyperbolic segment `[a, b]`.
pub fn segment_point(a: Complex64, b: Complex64, t: f64) -> Complex64 {
    mobius(a, mobius(a, b) * t)
}

/// Midpoint parameter `t*` for the segment with `ρ = |φ_a(b)|`.
pub fn midpoint_parameter(rho: f64) -> f64 {
    if rho < 1e-8 {
        // tanh(x/2)/tanh(x) = ½ + x²/8 + …, and x ≈ ρ here.
        0.5 + rho * rho / 8.0
    } else {
        (0.5 * rho.atanh()).tanh() / rho
    }
}

/// Hyperbolic midpoint of `[z1, z2]`.
pub fn hyperbolic_midpoint(z1: Complex64, z2: Complex64) -> Complex64 {
    if z1 == z2 {
        return z1;
    }
    let rho = mobius(z1, z2).norm();
    segment_point(z1, z2, midpoint_parameter(rho))
}

/// Euclidean disc `D(center, radius)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Disc {
    pub center: Complex64,
    pub radius: f64,
}

impl Disc {
    pub fn new(center: Complex64, radius: f64) -> Self {
        Self { center, radius }
    }

    pub fn unit() -> Self {
        Self::new(Complex64::new(0.0, 0.0), 1.0)
    }

    /// Open-disc membership.
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    pub fn boundary_point(&self, phi: f64) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, phi)
    }

    /// True when the disc is internally tangent to the unit circle.
    pub fn is_horodisc(&self) -> bool {
        (self.center.norm() + self.radius - 1.0).abs() <= 1e-12
    }
}

/// The pseudo-hyperbolic disc `{z : |φ_α(z)| < ρ}` as a Euclidean disc.
pub fn pseudohyperbolic_disc(alpha: Complex64, rho: f64) -> Disc {
    let a2 = alpha.norm_sqr();
    let den = 1.0 - a2 * rho * rho;
    Disc::new(alpha * ((1.0 - rho * rho) / den), (1.0 - a2) * rho / den)
}

/// The horodisc `D(a e^{iθ}, 1 − a)`.
pub fn horodisc(theta: f64, a: f64) -> Disc {
    Disc::new(Complex64::from_polar(a, theta), 1.0 - a)
}

/// Carleson square over the arc of length `arclength` centred at
/// `e^{i theta_center}`. The arc is half-open: `[θ − ℓ/2, θ + ℓ/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarlesonSquare {
    pub theta_center: f64,
    pub arclength: f64,
}

impl CarlesonSquare {
    pub fn new(theta_center: f64, arclength: f64) -> Self {
        Self {
            theta_center,
            arclength,
        }
    }

    pub fn whole_disc() -> Self {
        Self::new(0.0, 2.0 * PI)
    }

    /// Inner radius `1 − ℓ/(2π)`.
    pub fn inner_radius(&self) -> f64 {
        1.0 - self.arclength / (2.0 * PI)
    }

    pub fn arc_contains(&self, theta: f64) -> bool {
        if self.arclength >= 2.0 * PI {
            return true;
        }
        let start = self.theta_center - 0.5 * self.arclength;
        (theta - start).rem_euclid(2.0 * PI) < self.arclength
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.norm() >= self.inner_radius() && self.arc_contains(z.arg())
    }

    /// The `2^level` squares whose arcs partition the circle, starting at
    /// angle `−π`.
    pub fn dyadic(level: u32) -> Vec<CarlesonSquare> {
        let n = 1usize << level;
        let len = 2.0 * PI / n as f64;
        (0..n)
            .map(|k| CarlesonSquare::new(normalize_angle(-PI + (k as f64 + 0.5) * len), len))
            .collect()
    }
}

/// Carleson membership test.
pub fn carleson_contains(q: &CarlesonSquare, z: Complex64) -> bool {
    q.contains(z)
}

/// Subsets of the disc on which criteria and sampling run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    #[default]
    UnitDisc,
    /// `D(center, radius) ∩ 𝔻`
    Disc { center: Complex64, radius: f64 },
    /// `D(a e^{iθ}, 1 − a)`
    Horodisc { theta: f64, a: f64 },
    /// `r_min ≤ |z| < r_max`
    Annulus { r_min: f64, r_max: f64 },
    Carleson { theta_center: f64, arclength: f64 },
    /// `{z ∈ 𝔻 : Re z > min_re}`
    HalfDisc { min_re: f64 },
}

impl From<Disc> for Region {
    fn from(d: Disc) -> Self {
        Region::Disc {
            center: d.center,
            radius: d.radius,
        }
    }
}

impl From<CarlesonSquare> for Region {
    fn from(q: CarlesonSquare) -> Self {
        Region::Carleson {
            theta_center: q.theta_center,
            arclength: q.arclength,
        }
    }
}

/// Radii `j/n` followed by the boundary ladder `1 − 2^{−k}` (`k ≤ layers`),
/// all strictly below `r_max`.
fn radial_nodes(r_min: f64, r_max: f64, n: usize, layers: u32) -> Vec<f64> {
    let mut rs: Vec<f64> = (0..n)
        .map(|j| r_min + (r_max - r_min) * j as f64 / n as f64)
        .collect();
    for k in 1..=layers {
        rs.push(r_max - (r_max - r_min) * 0.5f64.powi(k as i32));
    }
    rs.retain(|r| *r >= r_min && *r < r_max);
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    rs
}

fn angular_count(res: usize, r: f64, gap: f64) -> usize {
    let base = (2.0 * PI * r * res as f64).ceil() as usize;
    let boundary = (res as f64 / (4.0 * gap.max(1e-300).sqrt())).ceil() as usize;
    base.max(boundary).clamp(1, 16 * res).max(if r == 0.0 { 1 } else { 8 })
}

impl Region {
    pub fn horodisc(theta: f64, a: f64) -> Self {
        Region::Horodisc { theta, a }
    }

    /// Enclosing Euclidean disc (clipped to 𝔻 by `contains`).
    pub fn as_disc(&self) -> Option<Disc> {
        match *self {
            Region::UnitDisc => Some(Disc::unit()),
            Region::Disc { center, radius } => Some(Disc::new(center, radius)),
            Region::Horodisc { theta, a } => Some(horodisc(theta, a)),
            _ => None,
        }
    }

    pub fn contains(&self, z: Complex64) -> bool {
        if !(z.norm() < 1.0) {
            return false;
        }
        match *self {
            Region::UnitDisc => true,
            Region::Disc { center, radius } => (z - center).norm() < radius,
            Region::Horodisc { theta, a } => horodisc(theta, a).contains(z),
            Region::Annulus { r_min, r_max } => z.norm() >= r_min && z.norm() < r_max,
            Region::Carleson {
                theta_center,
                arclength,
            } => CarlesonSquare::new(theta_center, arclength).contains(z),
            Region::HalfDisc { min_re } => z.re > min_re,
        }
    }

    /// Deterministic evaluation grid: polar rings with geometric layers
    /// toward the outer boundary. `res` controls ring and angular density.
    pub fn grid(&self, res: usize) -> Vec<Complex64> {
        let res = res.max(2);
        let layers = 20;
        let mut pts = Vec::new();
        match *self {
            Region::UnitDisc | Region::HalfDisc { .. } => {
                for r in radial_nodes(0.0, 1.0, res, layers) {
                    polar_ring(&mut pts, Complex64::new(0.0, 0.0), r, 1.0 - r, res, 0.0, 2.0 * PI);
                }
            }
            Region::Disc { .. } | Region::Horodisc { .. } => {
                let d = self.as_disc().expect("disc-shaped region");
                for rho in radial_nodes(0.0, d.radius, res, layers) {
                    polar_ring(&mut pts, d.center, rho, 1.0 - rho / d.radius, res, 0.0, 2.0 * PI);
                }
            }
            Region::Annulus { r_min, r_max } => {
                for r in radial_nodes(r_min, r_max, res, layers) {
                    polar_ring(&mut pts, Complex64::new(0.0, 0.0), r, r_max - r, res, 0.0, 2.0 * PI);
                }
            }
            Region::Carleson {
                theta_center,
                arclength,
            } => {
                let q = CarlesonSquare::new(theta_center, arclength);
                let start = theta_center - 0.5 * arclength.min(2.0 * PI);
                let span = arclength.min(2.0 * PI);
                for r in radial_nodes(q.inner_radius().max(0.0), 1.0, res, layers) {
                    polar_ring(&mut pts, Complex64::new(0.0, 0.0), r, 1.0 - r, res, start, span);
                }
            }
        }
        pts.retain(|z| self.contains(*z));
        pts
    }

    /// Maps `(u, v) ∈ [0,1)²` to a point; `None` when the image falls
    /// outside the region (callers reject and resample).
    pub fn sample_point(&self, u: f64, v: f64) -> Option<Complex64> {
        let z = match *self {
            Region::UnitDisc | Region::HalfDisc { .. } => {
                Complex64::from_polar(u.sqrt(), 2.0 * PI * v)
            }
            Region::Disc { .. } | Region::Horodisc { .. } => {
                let d = self.as_disc().expect("disc-shaped region");
                d.center + Complex64::from_polar(d.radius * u.sqrt(), 2.0 * PI * v)
            }
            Region::Annulus { r_min, r_max } => {
                let r2 = r_min * r_min + u * (r_max * r_max - r_min * r_min);
                Complex64::from_polar(r2.sqrt(), 2.0 * PI * v)
            }
            Region::Carleson {
                theta_center,
                arclength,
            } => {
                let r0 = (1.0 - arclength / (2.0 * PI)).max(0.0);
                let r2 = r0 * r0 + u * (1.0 - r0 * r0);
                let span = arclength.min(2.0 * PI);
                Complex64::from_polar(r2.sqrt(), theta_center - 0.5 * span + span * v)
            }
        };
        self.contains(z).then_some(z)
    }
}

fn polar_ring(
    out: &mut Vec<Complex64>,
    center: Complex64,
    r: f64,
    gap: f64,
    res: usize,
    start: f64,
    span: f64,
) {
    if r == 0.0 {
        out.push(center);
        return;
    }
    let n = angular_count(res, r, gap);
    let n = ((n as f64) * span / (2.0 * PI)).ceil().max(1.0) as usize;
    for k in 0..n {
        let phi = start + span * k as f64 / n as f64;
        out.push(center + Complex64::from_polar(r, phi));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn disc_point() -> impl Strategy<Value = Complex64> {
        (0.0f64..0.95, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
    }

    #[test]
    fn mobius_examples() {
        assert!(mobius(c(0.5, 0.0), c(0.5, 0.0)).norm() < 1e-15);
        assert_eq!(mobius(c(0.5, 0.0), c(0.0, 0.0)), c(0.5, 0.0));
        let expected = c(0.5, -0.5) / c(1.0, -0.25);
        assert!((mobius(c(0.5, 0.0), c(0.0, 0.5)) - expected).norm() < 1e-15);
    }

    #[test]
    fn distances() {
        assert_eq!(hyperbolic_distance(c(0.0, 0.0), c(0.0, 0.0)), 0.0);
        assert!((hyperbolic_distance(c(0.0, 0.0), c(0.6, 0.0)) - 2f64.ln()).abs() < 1e-15);
        let z = ChordalValue::Finite(c(0.0, 0.0));
        assert_eq!(chordal_distance(z, ChordalValue::Infinity), 1.0);
        assert_eq!(chordal_distance(z, z), 0.0);
        let one = ChordalValue::Finite(c(1.0, 0.0));
        assert!((chordal_distance(one, ChordalValue::Infinity) - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn segments_and_midpoints() {
        let a = c(0.2, -0.3);
        let b = c(-0.5, 0.4);
        assert!((segment_point(a, b, 0.0) - a).norm() < 1e-15);
        assert!((segment_point(a, b, 1.0) - b).norm() < 1e-15);
        assert!((segment_point(c(0.0, 0.0), c(0.8, 0.0), 0.5) - c(0.4, 0.0)).norm() < 1e-15);
        assert_eq!(hyperbolic_midpoint(a, a), a);

        // Oracle: solve d_H(0, m) = d_H(m, 0.6) on the real axis by bisection.
        let (mut lo, mut hi) = (0.0, 0.6);
        for _ in 0..200 {
            let m = 0.5 * (lo + hi);
            if hyperbolic_distance(c(0.0, 0.0), c(m, 0.0)) < hyperbolic_distance(c(m, 0.0), c(0.6, 0.0)) {
                lo = m;
            } else {
                hi = m;
            }
        }
        let m = hyperbolic_midpoint(c(0.0, 0.0), c(0.6, 0.0));
        assert!((m - c(lo, 0.0)).norm() < 1e-12);
        assert!((m.re - 1.0 / 3.0).abs() < 1e-14, "{m}");
    }

    #[test]
    fn pseudohyperbolic_discs() {
        let d = pseudohyperbolic_disc(c(0.0, 0.0), 0.5);
        assert_eq!(d, Disc::new(c(0.0, 0.0), 0.5));
        let d = pseudohyperbolic_disc(c(0.5, 0.0), 0.5);
        assert!((d.center - c(0.4, 0.0)).norm() < 1e-15);
        assert!((d.radius - 0.4).abs() < 1e-15);
    }

    #[test]
    fn horodiscs() {
        assert_eq!(horodisc(0.0, 0.0), Disc::unit());
        let h = horodisc(0.0, 0.75);
        assert_eq!(h, Disc::new(c(0.75, 0.0), 0.25));
        let h = horodisc(PI / 2.0, 0.9375);
        assert!((h.center - c(0.0, 0.9375)).norm() < 1e-15);
        assert!((h.radius - 0.0625).abs() < 1e-15);
        assert!(h.is_horodisc());
    }

    #[test]
    fn carleson_membership() {
        let full = CarlesonSquare::whole_disc();
        assert!(full.contains(c(0.0, 0.0)));
        assert!(full.contains(c(-0.3, 0.7)));
        let q = CarlesonSquare::new(0.0, PI);
        assert!(!q.contains(c(0.0, 0.0)));
        assert!(q.contains(c(0.9, 0.0)));
        assert!(q.contains(Complex64::from_polar(0.9, -PI / 2.0)));
        assert!(!q.contains(Complex64::from_polar(0.9, PI / 2.0)));
    }

    #[test]
    fn dyadic_squares_partition_the_circle() {
        let qs = CarlesonSquare::dyadic(3);
        for k in 0..1000 {
            let t = -PI + 2.0 * PI * (k as f64 + 0.37) / 1000.0;
            let z = Complex64::from_polar(0.99, t);
            assert_eq!(qs.iter().filter(|q| q.contains(z)).count(), 1);
        }
    }

    #[test]
    fn region_grids_stay_inside() {
        let regions = [
            Region::UnitDisc,
            Region::horodisc(0.3, 0.9375),
            Region::Annulus { r_min: 0.5, r_max: 1.0 },
            Region::Carleson { theta_center: 1.0, arclength: 0.5 },
            Region::HalfDisc { min_re: 0.05 },
            Region::Disc { center: c(0.5, 0.0), radius: 0.7 },
        ];
        for r in regions {
            let g = r.grid(16);
            assert!(!g.is_empty(), "{r:?}");
            assert!(g.iter().all(|z| r.contains(*z)));
        }
        let g = Region::horodisc(0.0, 0.75).grid(16);
        assert!(g.iter().any(|z| z.re > 0.999));
    }

    #[test]
    fn region_json() {
        let r: Region = serde_json::from_str(r#"{"kind":"horodisc","theta":0.0,"a":0.75}"#).unwrap();
        assert_eq!(r, Region::horodisc(0.0, 0.75));
    }

    proptest! {
        #[test]
        fn mobius_is_an_involution(a in disc_point(), z in disc_point()) {
            prop_assert!((mobius(a, mobius(a, z)) - z).norm() < 1e-12);
        }

        #[test]
        fn hyperbolic_distance_is_mobius_invariant(a in disc_point(), z in disc_point(), w in disc_point()) {
            let d0 = hyperbolic_distance(z, w);
            let d1 = hyperbolic_distance(mobius(a, z), mobius(a, w));
            prop_assert!((d0 - d1).abs() < 1e-10 * (1.0 + d0));
        }

        #[test]
        fn metric_axioms(x in disc_point(), y in disc_point(), z in disc_point()) {
            prop_assert_eq!(hyperbolic_distance(x, y), hyperbolic_distance(y, x));
            prop_assert!(hyperbolic_distance(x, z) <= hyperbolic_distance(x, y) + hyperbolic_distance(y, z) + 1e-12);
            let (cx, cy, cz) = (ChordalValue::from(x / (1.0 - x.norm())), ChordalValue::from(y), ChordalValue::Infinity);
            prop_assert_eq!(chordal_distance(cx, cy), chordal_distance(cy, cx));
            prop_assert!(chordal_distance(cx, cz) <= chordal_distance(cx, cy) + chordal_distance(cy, cz) + 1e-12);
            prop_assert!(chordal_distance(cx, cy) <= 1.0);
        }

        #[test]
        fn segment_lies_in_diameter_disc(z in disc_point(), w in disc_point(), t in 0.0f64..=1.0) {
            let p = segment_point(z, w, t);
            let centre = 0.5 * (z + w);
            let rad = 0.5 * (z - w).norm();
            prop_assert!((p - centre).norm() <= rad + 1e-12);
            prop_assert!(1.0 - p.norm() <= 1.0 - centre.norm() + rad + 1e-12);
        }

        #[test]
        fn midpoint_is_equidistant(z in disc_point(), w in disc_point()) {
            let m = hyperbolic_midpoint(z, w);
            prop_assert!((hyperbolic_distance(z, m) - hyperbolic_distance(m, w)).abs() < 1e-10);
        }

        #[test]
        fn pseudohyperbolic_disc_boundary(a in disc_point(), rho in 0.01f64..0.99, phi in -PI..PI) {
            let d = pseudohyperbolic_disc(a, rho);
            let z = d.boundary_point(phi);
            prop_assert!((mobius(a, z).norm() - rho).abs() < 1e-10);
        }
    }
}
