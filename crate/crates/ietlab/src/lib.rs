//! Exact-arithmetic laboratory for a family of non-uniquely ergodic
//! interval exchange transformations built from a parametrized cycle on the
//! Rauzy diagram.
//!
//! The crate constructs the family (base permutation, loop and cycle words,
//! closed-form transition matrices, parameter schedules), runs symbolic and
//! length-realized Rauzy–Veech induction with Zorich acceleration, computes
//! the ⌊n/2⌋ invariant measures as truncated normalized matrix products,
//! verifies the measure-estimate lemmas exactly, and evaluates the
//! Hausdorff-dimension estimate series with certified log comparisons.
//!
//! Everything that decides a verdict is exact: rational arithmetic for the
//! dynamics, arbitrary-precision integers for the matrices, and interval
//! arithmetic with precision escalation for the few genuinely
//! transcendental comparisons.

#![allow(clippy::manual_is_multiple_of)]

pub mod dimension;
pub mod error;
pub mod family;
pub mod iet;
pub mod lemmas;
pub mod logs;
pub mod matrix;
pub mod measure;
pub mod rauzy;
pub mod report;

pub use error::{Error, Result};
pub use family::{
    base_permutation, cycle_word, loop_word, theta_closed_form, validate_family, verified_theta,
    FamilyReport, ParameterSchedule,
};
pub use iet::{Iet, LengthVector, Permutation};
pub use matrix::TransitionMatrix;
pub use measure::{MeasureLab, ProductColumn, ReturnTimes};
pub use rauzy::{
    realize_word, realized_step, symbolic_step, word_transition, MoveType, RauzyMove, RauzyState,
    RunWord, StopReason,
};
