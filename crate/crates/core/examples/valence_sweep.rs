//! Valence of the family members as C grows, with the histogram of winding
//! numbers over the image plane.
use horodisc::valence::{trace_boundary, valence_from_trace, valence_slope, ChordTol, ValenceOptions};
use horodisc::{Complex64, MapExpr};

fn main() -> horodisc::Result<()> {
    let zeta = Complex64::new(0.0, -1.0);
    let cs = [1.0, 2.5, 5.0, 10.0, 20.0, 30.0];
    let sweep = valence_slope(zeta, &cs, ValenceOptions::default())?;
    for p in &sweep.per_c {
        println!("C = {:>4}: valence {} (cross-checked {}), Re f sign changes {}/{}", p.c, p.valence, p.cross_checked, p.sign_changes_half, p.sign_changes_full);
    }
    println!("slope {:.4} (reference {:.4}), monotone {}", sweep.slope, sweep.reference_slope, sweep.monotone);

    let f = MapExpr::example_family(30.0, zeta);
    let trace = trace_boundary(&f, ChordTol::Relative(1e-3))?;
    let v = valence_from_trace(&f, &trace, ValenceOptions::default())?;
    println!("C = 30 winding histogram: {:?}", v.histogram);
    Ok(())
}
