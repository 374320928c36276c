//! Pre-Schwarzian, Schwarzian and the weighted sup-norms, with the two norm
//! inequalities relating ‖S‖ and ‖P‖.
use horodisc::operators::{
    becker_quantity, nehari_quantity, norm_inequality_report, pre_schwarzian, pre_schwarzian_norm, schwarzian,
    SupNormOptions,
};
use horodisc::{Complex64, MapExpr};

fn main() -> horodisc::Result<()> {
    let k = MapExpr::Koebe;
    let z = Complex64::new(0.5, 0.2);
    println!("Koebe P(z) = {:.6}", pre_schwarzian(&k, z)?);
    println!("Koebe S(z) = {:.6}", schwarzian(&k, z)?);
    println!("|S|(1−|z|²)² at 0.7 = {:.12}", nehari_quantity(&k, Complex64::new(0.7, 0.0))?);
    println!("|P|(1−|z|²) at 0.7  = {:.12}", becker_quantity(&k, Complex64::new(0.7, 0.0))?);

    for n in 1..=3 {
        let est = pre_schwarzian_norm(&MapExpr::odd_poly(n), SupNormOptions::default())?;
        println!("‖P((1−z)^{})‖ ≈ {:.7} (sharp value {})", 2 * n + 1, est.value, 4 * n);
    }

    let r = norm_inequality_report(&k)?;
    println!("‖P(k)‖ = {:.7}, ‖S(k)‖ = {:.7}", r.pre_schwarzian.value, r.schwarzian.value);
    println!(
        "‖S‖ ≤ 4‖P‖ + ½‖P‖²: {} ; ‖P‖ ≤ 2 + 2√(1 + ½‖S‖): {} (gap {:.2e})",
        r.schwarzian_from_pre.holds, r.pre_from_schwarzian.holds, r.pre_from_schwarzian.gap
    );
    Ok(())
}
