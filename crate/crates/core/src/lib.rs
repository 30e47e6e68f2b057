//! Closed space curves from loop groups.
//!
//! Curves in R³ are encoded by extended frames F_λ(t) ∈ SL₂(C), and new closed
//! curves are produced by dressing multiply wrapped circles with simple
//! factors. The crate provides:
//!
//! - [`algebra`]: 2×2 complex matrices, su₂ ≅ R³, the trace-free exponential
//!   and projective lines.
//! - [`frames`]: extended frames, the Sym formula, monodromy and curvature
//!   recovery.
//! - [`dressing`]: simple factors and their closed-form dressing action.
//! - [`circleton`]: resonance points, circleton synthesis, curvature, energy
//!   and enumeration.
//! - [`loopgroup`]: a numerical Birkhoff factorization used as an independent
//!   check, the Symes map and spectral data of finite-type potentials.
//! - [`export`] and [`cli`]: file formats and the command line.

// negated comparisons route NaN to the failure branch
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod circleton;
pub mod cli;
pub mod dressing;
pub mod error;
pub mod export;
pub mod frames;
pub mod loopgroup;

pub use algebra::{Matrix2C, ProjectiveLine, Su2Vector};
pub use circleton::{make_circleton, CircletonSpec};
pub use error::{Error, Result};
pub use frames::{CurveSamples, FrameFamily};
