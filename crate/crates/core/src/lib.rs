//! Exact certification of mean-distance inequalities in the plane.
//!
//! Given primary points `c₁…cₙ` and secondary points `c′₁…c′ₘ`, the crate
//! proves `λ·Σᵢ ‖v − cᵢ‖ ≥ λ′·Σⱼ ‖v − c′ⱼ‖` for every `v ∈ ℝ²` by combining
//!
//! - a far-field certificate ([`farfield`]) covering `‖v‖ > ρ`, and
//! - an integer-grid certificate ([`gridcert`]) covering the box `[−ρ, ρ]²`,
//!
//! and then uses the inequality to decide which orderings of the combined
//! point set can never be realized by sorting distance sums ([`ordering`]).
//! All verdicts are computed in exact integer or rational arithmetic.

pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod farfield;
pub mod geometry;
pub mod gridcert;
pub mod instance;
pub mod ordering;

pub use error::{Error, Result};
pub use exact_arith::Rational;
pub use geometry::Point2;
pub use instance::{Instance, Label, Weights};
