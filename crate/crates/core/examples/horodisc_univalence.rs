//! The growth condition |P(f)|(1−|z|²) ≤ 1 + C(1−|z|), the horodisc
//! constant a(C), and the transformed Becker check on each horodisc.
use std::f64::consts::PI;

use horodisc::univalence::{
    horodisc_constant, horodisc_transform_check, hv_verdict, injectivity_sample, lemma41_max,
};
use horodisc::{Complex64, MapExpr, Region};

fn main() -> horodisc::Result<()> {
    let c = 3.0;
    let f = MapExpr::example_family(c, Complex64::new(0.0, -1.0));
    let v = hv_verdict(&f, c, 1e-9)?;
    println!("growth condition holds: {} ; {}", v.condition.holds, v.guarantee);
    println!("a(C) = {}", horodisc_constant(c));
    println!("lemma majorant max = {:.12}", lemma41_max(c, 2000));
    for theta in [0.0, PI / 2.0, PI] {
        let t = horodisc_transform_check(&f, c, theta, 48)?;
        let a = v.horodisc_a;
        let region = Region::Disc { center: Complex64::from_polar(a, theta), radius: 1.0 - a };
        let col = injectivity_sample(&f, region, 4000, 11, 1e-10)?;
        println!(
            "θ = {theta:.4}: transformed Becker max {:.9}, collision found: {}",
            t.max_quantity, col.found
        );
    }
    Ok(())
}
