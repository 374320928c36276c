//! Hyperbolic distance, Möbius involutions, hyperbolic midpoints, horodiscs
//! and Carleson squares.
use horodisc::geometry::{
    horodisc, hyperbolic_distance, hyperbolic_midpoint, mobius, pseudohyperbolic_disc, segment_point,
};
use horodisc::{CarlesonSquare, Complex64};

fn main() {
    let z = Complex64::new(0.3, -0.4);
    let w = Complex64::new(-0.5, 0.2);
    let a = Complex64::new(0.1, 0.6);
    println!("d_H(z, w)               = {:.12}", hyperbolic_distance(z, w));
    println!("d_H(φ_a z, φ_a w)       = {:.12}", hyperbolic_distance(mobius(a, z), mobius(a, w)));
    println!("φ_a(φ_a(z)) − z         = {:.2e}", (mobius(a, mobius(a, z)) - z).norm());

    let m = hyperbolic_midpoint(z, w);
    println!("midpoint                = {m:.6}");
    println!("d_H(z, m) − d_H(m, w)   = {:.2e}", hyperbolic_distance(z, m) - hyperbolic_distance(m, w));
    println!("segment point at t=0.25 = {:.6}", segment_point(z, w, 0.25));

    let d = pseudohyperbolic_disc(Complex64::new(0.5, 0.0), 0.5);
    println!("Δ(0.5, 0.5): center {:.6}, radius {:.6}", d.center, d.radius);

    let h = horodisc(0.0, 0.9375);
    println!("horodisc a = 0.9375: center {:.4}, radius {:.4}", h.center, h.radius);

    for q in CarlesonSquare::dyadic(2) {
        println!("dyadic square at θ = {:+.4}, ℓ = {:.4}", q.theta_center, q.arclength);
    }
}
