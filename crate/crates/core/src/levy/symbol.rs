use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::exponent::{evaluate_exponent, evaluate_extension};
use super::kappa::{evaluate_generalized, evaluate_generalized_extension, GeneralizedKappa};
use super::triplet::LevyTriplet;
use crate::error::{check_dim, Error, Result};

/// Closed-form multipliers outside the triplet class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum ClosedForm {
    /// `c |ξ|^α`
    PowerNorm { c: f64, alpha: f64 },
    /// `1 + |ξ|²`
    OnePlusSquare,
}

/// An evaluable multiplier `m(ξ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Symbol {
    Triplet(LevyTriplet),
    Generalized(GeneralizedKappa),
    ClosedForm { dim: usize, form: ClosedForm },
    /// `factor · m(ξ)`
    Scaled { factor: f64, inner: Box<Symbol> },
}

impl Symbol {
    pub fn brownian(n: usize) -> Self {
        Symbol::Triplet(LevyTriplet::brownian(n))
    }

    pub fn stable(n: usize, alpha: f64) -> Self {
        Symbol::ClosedForm {
            dim: n,
            form: ClosedForm::PowerNorm { c: 1.0, alpha },
        }
    }

    pub fn one_plus_square(n: usize) -> Self {
        Symbol::ClosedForm {
            dim: n,
            form: ClosedForm::OnePlusSquare,
        }
    }

    /// `|ξ|⁴` in generalized form.
    pub fn biharmonic(n: usize) -> Self {
        Symbol::Generalized(GeneralizedKappa::biharmonic(n))
    }

    pub fn scaled(self, factor: f64) -> Self {
        Symbol::Scaled {
            factor,
            inner: Box::new(self),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Symbol::Triplet(t) => t.dim(),
            Symbol::Generalized(k) => k.dim,
            Symbol::ClosedForm { dim, .. } => *dim,
            Symbol::Scaled { inner, .. } => inner.dim(),
        }
    }

    pub fn triplet(&self) -> Option<&LevyTriplet> {
        match self {
            Symbol::Triplet(t) => Some(t),
            Symbol::Scaled { inner, .. } => inner.triplet(),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Symbol::Triplet(t) => t.validate(),
            Symbol::Generalized(k) => k.validate(),
            Symbol::ClosedForm { dim, form } => {
                if *dim == 0 {
                    return Err(Error::InvalidParameter("dimension must be at least 1".into()));
                }
                match form {
                    ClosedForm::PowerNorm { c, alpha } if !(c.is_finite() && *alpha > 0.0) => Err(
                        Error::InvalidParameter(format!("power symbol needs finite c and α > 0, got c={c}, α={alpha}")),
                    ),
                    _ => Ok(()),
                }
            }
            Symbol::Scaled { factor, inner } => {
                if !(factor.is_finite() && *factor != 0.0) {
                    return Err(Error::InvalidParameter(format!("scale factor {factor} must be finite and nonzero")));
                }
                inner.validate()
            }
        }
    }

    pub fn evaluate(&self, xi: &[f64]) -> Result<Complex64> {
        match self {
            Symbol::Triplet(t) => evaluate_exponent(t, xi),
            Symbol::Generalized(k) => evaluate_generalized(k, xi),
            Symbol::ClosedForm { dim, form } => {
                check_dim(*dim, xi.len())?;
                let r2: f64 = xi.iter().map(|v| v * v).sum();
                let r = r2.sqrt();
                Ok(Complex64::new(
                    match form {
                        ClosedForm::PowerNorm { c, alpha } => {
                            if r == 0.0 {
                                0.0
                            } else {
                                c * r.powf(*alpha)
                            }
                        }
                        ClosedForm::OnePlusSquare => 1.0 + r2,
                    },
                    0.0,
                ))
            }
            Symbol::Scaled { factor, inner } => Ok(inner.evaluate(xi)? * *factor),
        }
    }

    /// `m(-iη)` where an extension exists in closed form.
    pub fn extension(&self, eta: &[f64]) -> Result<f64> {
        match self {
            Symbol::Triplet(t) => evaluate_extension(t, eta),
            Symbol::Generalized(k) => evaluate_generalized_extension(k, eta),
            Symbol::ClosedForm { dim, form } => {
                check_dim(*dim, eta.len())?;
                let r2: f64 = eta.iter().map(|v| v * v).sum();
                match form {
                    ClosedForm::OnePlusSquare => Ok(1.0 - r2),
                    ClosedForm::PowerNorm { c, alpha } => {
                        let half = alpha / 2.0;
                        if half.fract() != 0.0 {
                            return Err(Error::Unsupported(format!(
                                "|ξ|^{alpha} has no entire extension for non-even α"
                            )));
                        }
                        Ok(c * (-r2).powi(half as i32))
                    }
                }
            }
            Symbol::Scaled { factor, inner } => Ok(factor * inner.extension(eta)?),
        }
    }

    /// Short human-readable label.
    pub fn label(&self) -> String {
        match self {
            Symbol::Triplet(t) => {
                let mut parts = Vec::new();
                if t.b.iter().any(|v| *v != 0.0) {
                    parts.push("drift");
                }
                if t.has_gaussian_part() {
                    parts.push("diffusion");
                }
                if !t.nu.is_zero() {
                    parts.push("jumps");
                }
                if parts.is_empty() {
                    "zero triplet".into()
                } else {
                    format!("triplet ({})", parts.join(" + "))
                }
            }
            Symbol::Generalized(k) => format!("generalized exponent of order {}", k.order),
            Symbol::ClosedForm { form, .. } => match form {
                ClosedForm::PowerNorm { c, alpha } => format!("{c}|ξ|^{alpha}"),
                ClosedForm::OnePlusSquare => "1+|ξ|²".into(),
            },
            Symbol::Scaled { factor, inner } => format!("{factor}·({})", inner.label()),
        }
    }
}
