//! Submultiplicative weights, their directional rates and envelopes.

mod envelope;
mod function;

pub use envelope::{
    direction_set, envelope_bound_check, envelope_set, pi_g_membership, EnvelopeReport, EnvelopeSet, EnvelopeShape,
    UpperBound, DEFAULT_DIRECTIONS, MEMBERSHIP_TOL,
};
pub use function::{beta_of_direction, check_growth_condition, Factor, GrowthFunction, GROWTH_CONDITION_NOTE};
