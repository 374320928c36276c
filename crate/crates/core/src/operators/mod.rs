//! Pre-Schwarzian and Schwarzian derivatives, the Becker, Nehari and
//! horodisc growth quantities, and weighted sup-norm estimates.
//!
//! `P(f) = f''/f'` and `S(f) = P' − P²/2`. Every value here comes from the
//! closed-form jet of `f'`, so `S(f)` uses `f'''` without finite differences.

mod norm;
mod pointwise;

pub(crate) use norm::par_argmax;
pub use norm::{
    bloch_norm, normal_norm, norm_inequality_report, norm_inequality_report_with,
    pre_schwarzian_norm, schwarzian_norm, weighted_sup_norm, weighted_sup_norm_with,
    InequalityCheck, NormEstimate, NormInequalityReport, SupNormOptions,
};
pub use pointwise::{
    becker_quantity, becker_quantity_z, hv_margin, nehari_quantity, pre_schwarzian, schwarzian,
    spherical_derivative, disc_weight, MapOps, CRITICAL_THRESHOLD,
};
