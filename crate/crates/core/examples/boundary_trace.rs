//! Adaptive boundary trace of a family member and its self-intersection
//! test. Pass a path to also write the trace as CSV.
use horodisc::valence::{is_simple_refined, trace_boundary, ChordTol};
use horodisc::{Complex64, MapExpr};

fn main() -> horodisc::Result<()> {
    let zeta = Complex64::new(0.0, -1.0);
    for c in [1.0, 2.5, 10.0] {
        let f = MapExpr::example_family(c, zeta);
        let trace = trace_boundary(&f, ChordTol::Relative(2e-3))?;
        let s = is_simple_refined(&f, &trace)?;
        println!(
            "C = {c:>4}: {} points, simple {}, first crossing {:?}",
            trace.len(),
            s.simple,
            s.point
        );
        if let Some(path) = std::env::args().nth(1) {
            std::fs::write(format!("{path}-c{c}.csv"), trace.to_csv())?;
        }
    }
    Ok(())
}
