//! Becker and Nehari verdicts with witnesses, and the converse bound for
//! univalent maps.
use horodisc::univalence::{becker_verdict, converse_bound_check, nehari_verdict, ConverseMode};
use horodisc::{Complex64, MapExpr, Region};

fn main() -> horodisc::Result<()> {
    let maps = [
        ("identity", MapExpr::Identity),
        ("family C=1, ζ=1", MapExpr::example_family(1.0, Complex64::new(1.0, 0.0))),
        ("Koebe", MapExpr::Koebe),
        ("z²", MapExpr::monomial(2)),
    ];
    for (name, f) in &maps {
        let b = becker_verdict(f, Region::UnitDisc, 1e-9)?;
        let n = nehari_verdict(f, Region::UnitDisc, 1e-9, 48)?;
        println!(
            "{name:18} becker {:5} (max {:.4} at {:.3})  nehari {:5} (max {:.4})",
            b.holds, b.max_quantity, b.worst_point, n.holds, n.max_quantity
        );
    }
    let th2 = converse_bound_check(&MapExpr::Koebe, ConverseMode::Th2 { a: 0.0 }, 48, 1e-9)?;
    println!("Koebe |P|(1−|z|) ≤ 4: {} (max {:.6})", th2.holds, th2.max_quantity);
    Ok(())
}
