//! Limiting surface anchoring energy of colloidal particles in a nematic
//! liquid crystal under tangential anchoring and an aligning field.
//!
//! The crate evaluates `E₀(M; n∞) = ⁴√24 ∫_M (1 − √(1 − (ν·n∞)²)) dH²` on
//! analytic, revolution and mesh surfaces, finds the critical orientations
//! `n∞` on the sphere, and builds the tangential boundary director field
//! together with its point defects.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod direction;
pub mod energy;
pub mod error;
pub mod numerics;
pub mod orient;
pub mod profile1d;
pub mod qtensor;
pub mod surfaces;
pub mod tangentfield;
pub mod validation;

pub use direction::Direction;
pub use error::{Error, Result};
pub use numerics::{Vec3, FOURTH_ROOT_24};
pub use qtensor::QTensor;
