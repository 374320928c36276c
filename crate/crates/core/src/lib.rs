//! Numerical function theory on the unit disc.
//!
//! `horodisc` evaluates locally univalent analytic and harmonic maps of the
//! unit disc together with their first derivatives, and builds on that:
//!
//! - [`analytic`]: map descriptors ([`MapExpr`]), second-order jets and path
//!   integration for maps given through their derivative;
//! - [`geometry`]: disc automorphisms, hyperbolic and chordal metrics,
//!   hyperbolic segments, pseudo-hyperbolic discs, horodiscs, Carleson squares;
//! - [`operators`]: pre-Schwarzian and Schwarzian derivatives, the Becker,
//!   Nehari and horodisc growth quantities, and weighted sup-norm estimates;
//! - [`univalence`]: criterion verdicts over regions, the horodisc constant
//!   `a(C) = 1 - (1 + C)^-2`, sampled injectivity falsification and the
//!   converse bounds for maps univalent in horodiscs;
//! - [`valence`]: boundary traces, self-intersection tests, argument-principle
//!   winding numbers, Newton preimage search and Carleson sums;
//! - [`distortion`]: envelope functions and the growth bounds they imply;
//! - [`harmonic`]: harmonic maps `h + conj(g)`, dilatation and the harmonic
//!   pre-Schwarzian/Schwarzian;
//! - [`experiments`]: JSON configs, reports and canned reproduction runs used
//!   by the `horodisc` binary.
//!
//! ```
//! use horodisc::{operators, MapExpr};
//! use num_complex::Complex64;
//!
//! let k = MapExpr::Koebe;
//! let p = operators::pre_schwarzian(&k, Complex64::new(0.0, 0.0)).unwrap();
//! assert!((p - Complex64::new(4.0, 0.0)).norm() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod distortion;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod harmonic;
pub mod operators;
pub mod sampling;
pub mod univalence;
pub mod valence;

pub use analytic::{Jet2, MapExpr};
pub use error::{Error, Result};
pub use geometry::{CarlesonSquare, ChordalValue, Disc, Region};
pub use harmonic::HarmonicMap;

pub use num_complex::Complex64;
