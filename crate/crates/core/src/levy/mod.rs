//! Levy triplets and the exponents built from them.

mod exponent;
mod kappa;
mod measure;
mod moments;
mod projection;
mod subordination;
mod symbol;
mod triplet;

pub use exponent::{evaluate_exponent, evaluate_extension};
pub use kappa::{evaluate_generalized, Coefficient, GeneralizedKappa};
pub use measure::{Atom, JumpMeasure, RadialFamily, RadialKind};
pub use moments::{check_weight_moment, MomentResult};
pub use projection::project_triplet;
pub use subordination::{subordinate_symbol, BernsteinSpec};
pub use symbol::{ClosedForm, Symbol};
pub use triplet::LevyTriplet;
