//! Envelope conditions and the radial growth bounds they give.
use horodisc::distortion::{
    condition_i_estimate, condition_ii_integral, default_ladder, growth_bound_check, Envelope, EnvelopeKind,
};
use horodisc::{Complex64, MapExpr};

fn main() -> horodisc::Result<()> {
    let envs = [
        ("B/(1−t), B = 2", Envelope::rational(2.0)),
        ("B/(1−t), B = 1", Envelope::rational(1.0)),
        ("ψ, B = C = 1, ε = 0.5", Envelope::psi(1.0, 1.0, 0.5)),
    ];
    for (name, env) in &envs {
        let i = condition_i_estimate(env, &default_ladder(env.start))?;
        let ii = condition_ii_integral(env, 1e-6)?;
        println!("{name:24} (i) limsup ≈ {:.6} finite {}; (ii) {:?}", i.limsup_estimate, i.finite, ii.status);
    }

    // |P(f)| ≤ 2/(1 − t) + 1 along the positive ray for the C = 1 member.
    let f = MapExpr::example_family(1.0, Complex64::new(1.0, 0.0));
    let env = Envelope::sum(vec![EnvelopeKind::Rational { b: 2.0 }, EnvelopeKind::Constant { c: 1.0 }]);
    let g = growth_bound_check(&f, &env, Complex64::new(1.0, 0.0), 0.0, &[0.5, 0.9, 0.99])?;
    for p in &g.points {
        println!("r = {:5}: |f'| {:.5} ≤ {:.5}; |Δf| {:.5} ≤ {:.5}", p.r, p.derivative, p.derivative_bound, p.displacement, p.displacement_bound);
    }
    Ok(())
}
