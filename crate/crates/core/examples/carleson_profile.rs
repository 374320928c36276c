//! Preimage counts n(f, r, w) along radii tending to 1 and Carleson sums
//! over dyadic squares.
use horodisc::experiments::{running_bound, spiral_target, COUNTING_LADDER};
use horodisc::valence::{carleson_sum, counting_bound_profile, preimages};
use horodisc::{CarlesonSquare, Complex64, MapExpr, Region};

fn main() -> horodisc::Result<()> {
    let f = MapExpr::example_family(30.0, Complex64::new(0.0, -1.0));
    let w = spiral_target()?;
    let profile = counting_bound_profile(&f, w, &COUNTING_LADDER)?;
    let scaled: Vec<f64> = profile.iter().map(|p| p.scaled).collect();
    for (p, k) in profile.iter().zip(running_bound(&scaled)) {
        println!("r = {:6}: n = {}, n√(1−r) = {:.5}, running max {:.5}", p.r, p.count, p.scaled, k);
    }

    let pre = preimages(&f, w, &Region::UnitDisc, 2048, 1e-8)?;
    println!("{} preimages found", pre.len());
    for q in CarlesonSquare::dyadic(2) {
        let s = carleson_sum(&pre, &q);
        println!("square θ = {:+.3}, ℓ = {:.3}: {} members, Σ√(1−|z|) / √ℓ = {:.5}", q.theta_center, q.arclength, s.members, s.ratio);
    }
    Ok(())
}
