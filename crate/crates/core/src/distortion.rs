//! Radial envelopes of the pre-Schwarzian and the growth bounds they imply
//! for `|f'|` and `|f|`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::quad::{adaptive_gk_real, gauss_legendre, QuadTol};
use crate::analytic::MapExpr;
use crate::error::{Error, Result};
use crate::operators::MapOps;

const ENVELOPE_TOL: QuadTol = QuadTol {
    abs: 1e-15,
    rel: 1e-11,
    max_panels: 4000,
};
// Nested integrals carry the inner quadrature noise.
const OUTER_TOL: QuadTol = QuadTol {
    abs: 1e-14,
    rel: 1e-9,
    max_panels: 4000,
};

/// Shape of an envelope `φ` on `[R, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvelopeKind {
    /// `B / (1 − t²)`
    Rational { b: f64 },
    /// `C / (1 − t²) · (log(e / (1 − t)))^{−(1+ε)}`
    LogPower { c: f64, eps: f64 },
    /// `c`
    Constant { c: f64 },
    Sum { terms: Vec<EnvelopeKind> },
    /// Piecewise linear through `(t_i, φ_i)`, constant beyond the ends.
    Tabulated { t: Vec<f64>, phi: Vec<f64> },
}

impl EnvelopeKind {
    /// `φ(1 − u)`
    fn eval_gap(&self, u: f64) -> f64 {
        let w = u * (2.0 - u);
        match self {
            Self::Rational { b } => b / w,
            Self::LogPower { c, eps } => c / w * (1.0 - u.ln()).powf(-(1.0 + eps)),
            Self::Constant { c } => *c,
            Self::Sum { terms } => terms.iter().map(|k| k.eval_gap(u)).sum(),
            Self::Tabulated { .. } => self.eval(1.0 - u),
        }
    }

    fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Rational { .. } | Self::LogPower { .. } | Self::Constant { .. } => self.eval_gap(1.0 - t),
            Self::Sum { terms } => terms.iter().map(|k| k.eval(t)).sum(),
            Self::Tabulated { t: ts, phi } => {
                let k = ts.partition_point(|&s| s <= t);
                if k == 0 {
                    phi[0]
                } else if k == ts.len() {
                    phi[k - 1]
                } else {
                    let s = (t - ts[k - 1]) / (ts[k] - ts[k - 1]);
                    phi[k - 1] + s * (phi[k] - phi[k - 1])
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("envelope: {m}")));
        match self {
            Self::Rational { b } if !(*b >= 0.0) => bad("B must be nonnegative"),
            Self::LogPower { c, eps } if !(*c >= 0.0 && *eps > 0.0) => bad("LogPower needs C ≥ 0 and ε > 0"),
            Self::Constant { c } if !(*c >= 0.0) => bad("constant must be nonnegative"),
            Self::Sum { terms } => terms.iter().try_for_each(|k| k.validate()),
            Self::Tabulated { t, phi } => {
                if t.is_empty() || t.len() != phi.len() {
                    bad("tabulated nodes and values must be nonempty and of equal length")
                } else if t.windows(2).any(|w| !(w[0] < w[1])) {
                    bad("tabulated nodes must increase")
                } else if phi.iter().any(|v| !(*v >= 0.0)) {
                    bad("tabulated values must be nonnegative")
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    #[serde(flatten)]
    pub kind: EnvelopeKind,
    /// Domain start `R`.
    #[serde(default)]
    pub start: f64,
}

impl Envelope {
    pub fn new(kind: EnvelopeKind, start: f64) -> Result<Self> {
        kind.validate()?;
        if !(0.0..1.0).contains(&start) {
            return Err(Error::InvalidArgument(format!("envelope start {start} outside [0, 1)")));
        }
        Ok(Self { kind, start })
    }

    pub fn rational(b: f64) -> Self {
        Self::new(EnvelopeKind::Rational { b }, 0.0).expect("valid rational envelope")
    }

    pub fn log_power(c: f64, eps: f64) -> Self {
        Self::new(EnvelopeKind::LogPower { c, eps }, 0.0).expect("valid log-power envelope")
    }

    /// `B/(1 − t²) + C/(1 − t²) · (log(e/(1 − t)))^{−(1+ε)}`
    pub fn psi(b: f64, c: f64, eps: f64) -> Self {
        Self::sum(vec![EnvelopeKind::Rational { b }, EnvelopeKind::LogPower { c, eps }])
    }

    pub fn sum(terms: Vec<EnvelopeKind>) -> Self {
        Self::new(EnvelopeKind::Sum { terms }, 0.0).expect("valid sum envelope")
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.kind.eval(t)
    }

    /// `φ(1 − u)`, accurate for small gaps `u`.
    pub fn eval_gap(&self, u: f64) -> f64 {
        self.kind.eval_gap(u)
    }
}

/// Breakpoints from gap `ua` down to gap `ub < ua`, including the dyadic
/// gaps `2^{−k}` in between. Integration runs in the gap variable `u = 1 − t`
/// so that points close to 1 keep full relative precision.
fn dyadic_gaps(ua: f64, ub: f64) -> Vec<f64> {
    let mut cuts = vec![ua];
    let mut u = 1.0;
    while u > ub {
        if u < ua {
            cuts.push(u);
        }
        u *= 0.5;
    }
    cuts.push(ub);
    cuts
}

fn integral_gap(env: &Envelope, ua: f64, ub: f64) -> Result<f64> {
    let mut total = 0.0;
    for w in dyadic_gaps(ua, ub).windows(2) {
        total += adaptive_gk_real(|u| Ok(env.eval_gap(u)), w[1], w[0], ENVELOPE_TOL)?;
    }
    Ok(total)
}

/// `∫_a^b φ(t) dt`, split at dyadic points toward 1.
pub fn envelope_integral_between(env: &Envelope, a: f64, b: f64) -> Result<f64> {
    if !(a <= b) || b >= 1.0 {
        return Err(Error::InvalidArgument(format!("envelope integral over [{a}, {b}]")));
    }
    integral_gap(env, 1.0 - a, 1.0 - b)
}

/// `∫_R^r φ(t) dt`.
pub fn envelope_integral(env: &Envelope, r: f64) -> Result<f64> {
    if r < env.start {
        return Err(Error::InvalidArgument(format!("r = {r} below the envelope start {}", env.start)));
    }
    envelope_integral_between(env, env.start, r)
}

/// `∫_R^{1−u} φ(t) dt` for an exactly known gap `u`.
pub fn envelope_integral_gap(env: &Envelope, u: f64) -> Result<f64> {
    if !(u > 0.0 && u <= 1.0 - env.start) {
        return Err(Error::InvalidArgument(format!("gap {u} outside (0, 1 − R]")));
    }
    integral_gap(env, 1.0 - env.start, u)
}

/// `∫_{1−p}^{1−v} φ` by a fixed rule on each dyadic piece, smooth in `v`.
fn inner_gap(env: &Envelope, p: f64, v: f64) -> f64 {
    dyadic_gaps(p, v)
        .windows(2)
        .map(|w| gauss_legendre(|u| env.eval_gap(u), w[1], w[0], 8))
        .sum()
}

/// `∫_{1−ua}^{1−ub} exp(∫_{1−ua}^s φ) ds`, one adaptive integral per piece.
fn exp_integral_gap(env: &Envelope, ua: f64, ub: f64) -> Result<f64> {
    let mut base = 0.0;
    let mut total = 0.0;
    for w in dyadic_gaps(ua, ub).windows(2) {
        let (p, q) = (w[0], w[1]);
        total += adaptive_gk_real(|v| Ok((base + inner_gap(env, p, v)).exp()), q, p, OUTER_TOL)?;
        base += integral_gap(env, p, q)?;
    }
    Ok(total)
}

/// `1 − 2^{−k}` for `k = 1..=30`, kept above the envelope start.
pub fn default_ladder(start: f64) -> Vec<f64> {
    (1..=30)
        .map(|k| 1.0 - 0.5f64.powi(k))
        .filter(|&r| r >= start)
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionIReport {
    /// `(r, (1 − r) exp(∫_R^r φ))`
    pub values: Vec<(f64, f64)>,
    /// Max over the last third of the ladder.
    pub limsup_estimate: f64,
    pub finite: bool,
}

/// Ladder values of `(1 − r) exp(∫_R^r φ)` and a finiteness call on the
/// tail: finite when the tail max stays below 10 times the tail median, or
/// when the tail never rises above its first value.
pub fn condition_i_estimate(env: &Envelope, r_ladder: &[f64]) -> Result<ConditionIReport> {
    if r_ladder.len() < 3 {
        return Err(Error::InvalidArgument("condition (i) needs at least three ladder points".into()));
    }
    let values: Vec<(f64, f64)> = r_ladder
        .par_iter()
        .map(|&r| envelope_integral_gap(env, 1.0 - r).map(|i| (r, (1.0 - r) * i.exp())))
        .collect::<Result<_>>()?;
    let tail_len = values.len().div_ceil(3);
    let tail: Vec<f64> = values[values.len() - tail_len..].iter().map(|v| v.1).collect();
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sorted = tail.clone();
    sorted.sort_by(f64::total_cmp);
    let median = sorted[sorted.len() / 2];
    let finite = max.is_finite() && (max < 10.0 * median || max <= tail[0]);
    Ok(ConditionIReport {
        values,
        limsup_estimate: max,
        finite,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntegralStatus {
    Convergent,
    Divergent,
    Indeterminate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionIiReport {
    pub status: IntegralStatus,
    /// Partial sum plus geometric tail estimate, when convergent.
    pub value: Option<f64>,
    pub partial_sum: f64,
    /// Integrals over the dyadic panels `[1 − 2^{−k}, 1 − 2^{−k−1}]`.
    pub panels: Vec<f64>,
}

/// Partial sums beyond this declare divergence.
pub const DIVERGENCE_CAP: f64 = 1e12;
/// Panel ratio at or above which consecutive panels count as non-decaying.
const FLAT_RATIO: f64 = 0.97;
const FLAT_RUN: usize = 8;
const MAX_PANELS: usize = 52;

/// `∫_R^1 exp(∫_R^s φ) ds` over dyadic panels toward 1.
///
/// Convergent once the geometric tail bound after a decaying panel is below
/// `tol`; divergent when partial sums pass [`DIVERGENCE_CAP`] or when eight
/// consecutive panel ratios are at least 0.97 (a panel sum that no longer
/// decays cannot reach the cap within double precision).
pub fn condition_ii_integral(env: &Envelope, tol: f64) -> Result<ConditionIiReport> {
    let mut panels = Vec::new();
    let mut partial = 0.0f64;
    let mut ua = 1.0 - env.start;
    let mut base = 0.0f64;
    let mut flat = 0;
    let first_k = (1..).find(|&k| 0.5f64.powi(k) < ua).unwrap_or(1);
    for k in first_k..first_k + MAX_PANELS as i32 {
        let ub = 0.5f64.powi(k);
        let outer = base.exp() * exp_integral_gap(env, ua, ub)?;
        base += integral_gap(env, ua, ub)?;
        ua = ub;
        partial += outer;
        panels.push(outer);
        if !partial.is_finite() || partial > DIVERGENCE_CAP {
            return Ok(ConditionIiReport {
                status: IntegralStatus::Divergent,
                value: None,
                partial_sum: partial,
                panels,
            });
        }
        let n = panels.len();
        if n >= 2 {
            let ratio = panels[n - 1] / panels[n - 2];
            if ratio >= FLAT_RATIO {
                flat += 1;
                if flat >= FLAT_RUN {
                    return Ok(ConditionIiReport {
                        status: IntegralStatus::Divergent,
                        value: None,
                        partial_sum: partial,
                        panels,
                    });
                }
            } else {
                flat = 0;
                let tail = panels[n - 1] * ratio / (1.0 - ratio);
                if n >= 4 && tail < tol && panels[n - 2] / panels[n - 3] < FLAT_RATIO {
                    return Ok(ConditionIiReport {
                        status: IntegralStatus::Convergent,
                        value: Some(partial + tail),
                        partial_sum: partial,
                        panels,
                    });
                }
            }
        }
    }
    Ok(ConditionIiReport {
        status: IntegralStatus::Indeterminate,
        value: None,
        partial_sum: partial,
        panels,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthPoint {
    pub r: f64,
    pub derivative: f64,
    /// `|f'(ρζ)| exp(∫_ρ^r φ)`
    pub derivative_bound: f64,
    /// `|f(rζ) − f(ρζ)|`
    pub displacement: f64,
    /// `|f'(ρζ)| ∫_ρ^r exp(∫_ρ^s φ) ds`
    pub displacement_bound: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GrowthReport {
    pub zeta: Complex64,
    pub rho: f64,
    pub points: Vec<GrowthPoint>,
    pub holds: bool,
    /// Largest `|P(f)(tζ)| − φ(t)` seen while checking the hypothesis.
    pub hypothesis_margin: f64,
}

const HYPOTHESIS_SAMPLES: usize = 512;

/// Pointwise check of the radial growth bounds along `[ρ, r]ζ` after
/// verifying `|P(f)(tζ)| ≤ φ(t)` on a grid of the ray.
pub fn growth_bound_check(
    expr: &MapExpr,
    env: &Envelope,
    zeta: Complex64,
    rho: f64,
    r_list: &[f64],
) -> Result<GrowthReport> {
    let zeta = zeta / zeta.norm();
    if rho < env.start || r_list.iter().any(|&r| !(r >= rho && r < 1.0)) {
        return Err(Error::InvalidArgument("need R ≤ ρ ≤ r < 1 along the ray".into()));
    }
    let ops = MapOps::new(expr);
    let r_max = r_list.iter().copied().fold(rho, f64::max);
    let mut ts: Vec<f64> = (0..=HYPOTHESIS_SAMPLES)
        .map(|k| rho + (r_max - rho) * k as f64 / HYPOTHESIS_SAMPLES as f64)
        .collect();
    ts.extend_from_slice(r_list);
    let excess: Vec<(f64, f64)> = ts
        .par_iter()
        .map(|&t| {
            let p = ops.pre_schwarzian(zeta * t)?.norm();
            let phi = env.eval(t);
            Ok((t, (p - phi) / (1.0 + phi)))
        })
        .collect::<Result<_>>()?;
    let (t_worst, worst) = excess.iter().copied().fold((rho, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    if worst > 1e-9 {
        return Err(Error::ConditionViolated {
            criterion: "envelope".into(),
            z: zeta * t_worst,
            margin: -worst,
        });
    }

    let d_rho = ops.derivative_jet(zeta * rho)?.f.norm();
    let f_rho = expr.value_at(zeta * rho)?;
    let points: Vec<GrowthPoint> = r_list
        .par_iter()
        .map(|&r| {
            let derivative = ops.derivative_jet(zeta * r)?.f.norm();
            let derivative_bound = d_rho * envelope_integral_between(env, rho, r)?.exp();
            let displacement = (expr.value_at(zeta * r)? - f_rho).norm();
            let growth = exp_integral_gap(env, 1.0 - rho, 1.0 - r)?;
            let displacement_bound = d_rho * growth;
            let slack = |v: f64, b: f64| v <= b * (1.0 + 1e-9) + 1e-12;
            Ok(GrowthPoint {
                r,
                derivative,
                derivative_bound,
                displacement,
                displacement_bound,
                holds: slack(derivative, derivative_bound) && slack(displacement, displacement_bound),
            })
        })
        .collect::<Result<_>>()?;
    Ok(GrowthReport {
        zeta,
        rho,
        holds: points.iter().all(|p| p.holds),
        points,
        hypothesis_margin: worst,
    })
}
