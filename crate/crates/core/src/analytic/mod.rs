//! Map descriptors, second-order jets and path integration.

mod expr;
mod jet;
pub mod quad;

pub use expr::{
    boundary_jet, boundary_value, eval_jet, integrate_path, normalize_angle, MapExpr,
    PrimitiveCache, CHECKPOINT_STEP,
};
pub use jet::Jet2;
pub(crate) use expr::{segment_integral, zeta_serde};
