//! Property tests across modules.

use std::f64::consts::PI;

use horodisc::analytic::MapExpr;
use horodisc::distortion::{envelope_integral_between, Envelope};
use horodisc::experiments::running_bound;
use horodisc::geometry::{hyperbolic_distance, hyperbolic_midpoint, pseudo_hyperbolic_distance};
use horodisc::harmonic::separation_bound_at_gap;
use horodisc::operators::{hv_margin, pre_schwarzian, schwarzian};
use horodisc::univalence::{horodisc_constant, lemma_majorant, th3_radius};
use horodisc::valence::{polyline_winding, preimages, winding_number_circle};
use horodisc::{Complex64, Region};
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn disc_point(r_max: f64) -> impl Strategy<Value = Complex64> {
    (0.0..r_max, -PI..PI).prop_map(|(r, t)| Complex64::from_polar(r, t))
}

fn unit(t: f64) -> Complex64 {
    Complex64::from_polar(1.0, t)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn family_satisfies_growth_condition(cc in 0.05f64..40.0, t in -PI..PI, z in disc_point(0.999)) {
        let f = MapExpr::example_family(cc, unit(t));
        let m = hv_margin(&f, cc, z).unwrap();
        prop_assert!(m >= -1e-12, "margin {m}");
    }

    #[test]
    fn pre_schwarzian_ignores_affine_postcomposition(z in disc_point(0.9), a in disc_point(3.0), b in disc_point(3.0)) {
        prop_assume!(a.norm() > 1e-3);
        let f = MapExpr::Koebe;
        let g = MapExpr::compose(MapExpr::affine(b, a), f.clone());
        let (p, q) = (pre_schwarzian(&f, z).unwrap(), pre_schwarzian(&g, z).unwrap());
        prop_assert!((p - q).norm() <= 1e-10 * (1.0 + p.norm()));
    }

    #[test]
    fn schwarzian_is_invariant_under_inversion(z in disc_point(0.9), cc in 0.5f64..8.0) {
        let f = MapExpr::compose(MapExpr::Exp, MapExpr::affine(c(0.3, 0.0), c(cc, 0.0)));
        let g = MapExpr::quotient(MapExpr::constant(c(1.0, 0.0)), f.clone());
        let (s, t) = (schwarzian(&f, z).unwrap(), schwarzian(&g, z).unwrap());
        prop_assert!((s - t).norm() <= 1e-9 * (1.0 + s.norm()));
    }

    #[test]
    fn monomial_counts(k in 1usize..6, rho in 0.2f64..0.95, w in disc_point(1.0)) {
        // z^k = w has k roots of modulus |w|^{1/k}.
        let root = w.norm().powf(1.0 / k as f64);
        prop_assume!((root - rho).abs() > 1e-3 && w.norm() > 1e-6);
        let f = MapExpr::monomial(k);
        let n = winding_number_circle(&f, w, c(0.0, 0.0), rho).unwrap().value;
        prop_assert_eq!(n, if root < rho { k as i64 } else { 0 });
        let pre = preimages(&f, w, &Region::Disc { center: c(0.0, 0.0), radius: rho }, 256, 1e-12).unwrap();
        prop_assert_eq!(pre.len() as i64, n);
        prop_assert!(pre.residuals.iter().all(|&r| r <= 1e-12));
    }

    #[test]
    fn horodisc_constant_is_increasing(a in 0.0f64..100.0, b in 0.0f64..100.0) {
        prop_assume!(a < b);
        let (x, y) = (horodisc_constant(a), horodisc_constant(b));
        prop_assert!((0.0..1.0).contains(&x) && x < y);
    }

    #[test]
    fn lemma_majorant_stays_below_one(cc in 0.01f64..60.0, z in disc_point(0.999999)) {
        prop_assert!(lemma_majorant(cc, z) <= 1.0 + 1e-9);
    }

    #[test]
    fn th3_radius_lies_in_unit_interval(cc in 0.1f64..20.0, s in 0.001f64..0.999) {
        let k = cc / (1.0 + cc);
        let abs_a = k + s * (1.0 - k);
        let r = th3_radius(cc, abs_a).unwrap();
        prop_assert!(r > 0.0 && r < 1.0);
        prop_assert!(th3_radius(cc, k * s).is_err());
    }

    #[test]
    fn separation_bound_decreases_in_gap(cc in 0.1f64..50.0, s in 0.01f64..0.98, ds in 0.001f64..0.01) {
        let u = s / cc;
        let v = (s + ds).min(0.999) / cc;
        prop_assert!(separation_bound_at_gap(cc, u).unwrap() > separation_bound_at_gap(cc, v).unwrap());
        prop_assert!(separation_bound_at_gap(cc, 1.5 / cc).is_err());
    }

    #[test]
    fn midpoint_is_equidistant(z in disc_point(0.99), w in disc_point(0.99)) {
        let m = hyperbolic_midpoint(z, w);
        let (a, b) = (hyperbolic_distance(z, m), hyperbolic_distance(m, w));
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + a));
        prop_assert!(pseudo_hyperbolic_distance(z, w) < 1.0);
    }

    #[test]
    fn envelope_integral_is_additive(b in 0.0f64..3.0, x in 0.0f64..0.9, y in 0.0f64..0.9, z in 0.0f64..0.9) {
        let mut v = [x, y, z];
        v.sort_by(f64::total_cmp);
        let env = Envelope::psi(b, 1.0, 0.5);
        let ab = envelope_integral_between(&env, v[0], v[1]).unwrap();
        let bc = envelope_integral_between(&env, v[1], v[2]).unwrap();
        let ac = envelope_integral_between(&env, v[0], v[2]).unwrap();
        prop_assert!((ab + bc - ac).abs() <= 1e-9 * (1.0 + ac));
    }

    #[test]
    fn running_bound_dominates(v in proptest::collection::vec(0.0f64..10.0, 1..20)) {
        let k = running_bound(&v);
        prop_assert!(k.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(k.iter().zip(&v).all(|(a, b)| a >= b));
        prop_assert_eq!(*k.last().unwrap(), v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    }

    #[test]
    fn polygon_winding_matches_circle(n in 3usize..40, turns in 1i64..4, w in disc_point(0.5)) {
        let pts: Vec<Complex64> = (0..n * turns as usize)
            .map(|k| unit(2.0 * PI * k as f64 / n as f64))
            .collect();
        // The polygon inscribed in the unit circle contains the disc of radius cos(π/n).
        prop_assume!(w.norm() < (PI / n as f64).cos() - 1e-9);
        prop_assert_eq!(polyline_winding(&pts, w), turns);
    }
}
