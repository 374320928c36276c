//! Bisection for the smallest C at which the boundary curve of the family
//! stops being simple, for each boundary direction ζ.
use horodisc::valence::critical_c;
use horodisc::Complex64;

fn main() -> horodisc::Result<()> {
    for (name, zeta) in [("1", Complex64::new(1.0, 0.0)), ("-1", Complex64::new(-1.0, 0.0)), ("-i", Complex64::new(0.0, -1.0))] {
        let r = critical_c(zeta, 0.01)?;
        println!("ζ = {name:>2}: C* ≈ {:.3} in [{:.4}, {:.4}] ({} traces)", r.estimate, r.bracket.0, r.bracket.1, r.evaluations);
    }
    Ok(())
}
