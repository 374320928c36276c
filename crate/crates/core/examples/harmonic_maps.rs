//! Harmonic maps h + conj(g): dilatation, harmonic pre-Schwarzian and
//! Schwarzian, the harmonic Becker verdict and the separation bound.
use horodisc::harmonic::{
    dilatation, harmonic_becker_verdict, harmonic_pre_schwarzian, harmonic_schwarzian, jacobian,
    separation_bound_at_gap,
};
use horodisc::{Complex64, HarmonicMap, MapExpr, Region};

fn main() -> horodisc::Result<()> {
    let g = MapExpr::polynomial(vec![0.0.into(), 0.0.into(), 0.25.into()]);
    let f = HarmonicMap::new(MapExpr::Identity, g)?;
    let z = Complex64::new(0.3, 0.4);
    println!("ω(z) = {:.6}, J(z) = {:.6}", dilatation(&f, z)?, jacobian(&f, z)?);
    println!("P_H(z) = {:.6}, S_H(z) = {:.6}", harmonic_pre_schwarzian(&f, z)?, harmonic_schwarzian(&f, z)?);
    let b = harmonic_becker_verdict(&f, Region::UnitDisc, 1e-9, 32)?;
    println!("harmonic Becker: holds {} (max {:.6})", b.holds, b.max_quantity);

    for c in [1.0, 4.0] {
        println!(
            "C = {c}: bound at 1−|ξ| = 1/(4C) is {:.12}, at 1/(9C) is {:.12}",
            separation_bound_at_gap(c, 0.25 / c)?,
            separation_bound_at_gap(c, 1.0 / (9.0 * c))?
        );
    }
    Ok(())
}
