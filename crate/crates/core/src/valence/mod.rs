//! Valence measurement: boundary traces, simpleness, argument-principle
//! counts, preimages, Carleson sums and the example family experiments.

mod family;
mod intersect;
mod preimage;
mod trace;
mod winding;

pub use family::{
    critical_c, critical_c_with, family_curve_is_simple, sign_change_report, sign_changes_full, sign_changes_real,
    valence_estimate, valence_from_trace, valence_slope, CriticalCOptions, CriticalCReport, SignChangeReport,
    SlopePoint, SlopeReport, ValenceEstimate, ValenceLocation, ValenceMethod, ValenceOptions, ValenceReport,
    LIMIT_RADIUS, REFERENCE_SLOPE,
};
pub use intersect::{is_simple, is_simple_refined, SimplicityReport, TANGENCY_ANGLE};
pub use preimage::{
    carleson_sum, counting_bound_profile, geometric_ladder, preimages, CarlesonSum, CountingPoint, PreimageSet,
    DEDUP_DISTANCE, DEFAULT_SEEDS,
};
pub use trace::{polyline_distance, polyline_winding, trace_boundary, trace_boundary_with, BoundaryTrace, ChordTol, TraceOptions};
pub use winding::{winding_number, winding_number_circle, WindingResult, ROUNDING_RESIDUAL};
