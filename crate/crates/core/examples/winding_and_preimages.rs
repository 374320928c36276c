//! Counting preimages three ways: argument principle, Newton search, and the
//! polyline winding of the boundary trace.
use horodisc::valence::{preimages, trace_boundary, winding_number_circle, ChordTol};
use horodisc::{Complex64, MapExpr, Region};

fn main() -> horodisc::Result<()> {
    let cube = MapExpr::monomial(3);
    let w = Complex64::new(0.1, 0.05);
    let wind = winding_number_circle(&cube, w, Complex64::new(0.0, 0.0), 0.99)?;
    let pre = preimages(&cube, w, &Region::UnitDisc, 512, 1e-12)?;
    let trace = trace_boundary(&cube, ChordTol::Relative(1e-3))?;
    println!("z³ = {w}: winding {} ({} nodes), Newton {} roots, trace winding {}", wind.value, wind.nodes, pre.len(), trace.winding_about(w));

    let f = MapExpr::example_family(10.0, Complex64::new(0.0, -1.0));
    let w = f.value_at(Complex64::new(0.4, -0.5))?;
    let pre = preimages(&f, w, &Region::UnitDisc, 1024, 1e-9)?;
    println!("family C = 10: {} preimages of f(0.4 − 0.5i), winding cross-check {:?} ({})", pre.len(), pre.winding_count, pre.cross_checked);
    for (z, r) in pre.points.iter().zip(&pre.residuals) {
        println!("  z = {z:.6}  |f(z) − w| = {r:.1e}");
    }
    Ok(())
}
