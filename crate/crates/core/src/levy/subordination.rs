use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::symbol::Symbol;
use crate::error::{Error, Result};

/// Laplace exponent of a subordinator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BernsteinSpec {
    /// `√x` on the principal branch
    SquareRoot,
    Identity,
    /// `a + b x` with `a, b ≥ 0`
    Affine { a: f64, b: f64 },
}

impl BernsteinSpec {
    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        match self {
            BernsteinSpec::SquareRoot => {
                if z.im == 0.0 && z.re < 0.0 {
                    return Err(Error::BranchCut { re: z.re, im: z.im });
                }
                Ok(z.sqrt())
            }
            BernsteinSpec::Identity => Ok(z),
            BernsteinSpec::Affine { a, b } => {
                if *a < 0.0 || *b < 0.0 {
                    return Err(Error::InvalidParameter(format!("affine Bernstein function needs a, b >= 0, got {a}, {b}")));
                }
                Ok(z * *b + *a)
            }
        }
    }
}

/// `f_S(-iτ + ψ(ξ))`, the exponent of the space-time process `(S_t, X_{S_t})`.
pub fn subordinate_symbol(spec: BernsteinSpec, psi: &Symbol, tau: f64, xi: &[f64]) -> Result<Complex64> {
    let z = Complex64::new(0.0, -tau) + psi.evaluate(xi)?;
    spec.apply(z)
}
