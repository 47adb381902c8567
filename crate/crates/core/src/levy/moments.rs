use serde::{Deserialize, Serialize};

use super::measure::{JumpMeasure, Tail, RADIAL_TOL};
use crate::error::{check_dim, Result};
use crate::growth::GrowthFunction;
use crate::linalg::norm;
use crate::quadrature::{integrate, integrate_to_infinity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MomentResult {
    Finite { value: f64 },
    Infinite { reason: String },
}

impl MomentResult {
    pub fn is_finite(&self) -> bool {
        matches!(self, MomentResult::Finite { .. })
    }
}

/// `∫_{|y|≥1} g(y) ν(dy)`.
///
/// Divergence for radial families is decided by comparing the weight's
/// growth class with the family's tail before any quadrature runs.
pub fn check_weight_moment(nu: &JumpMeasure, weight: &GrowthFunction) -> Result<MomentResult> {
    let n = weight.dim;
    let mut total = 0.0;
    for atom in &nu.atoms {
        check_dim(n, atom.position.len())?;
        if norm(&atom.position) >= 1.0 {
            total += atom.mass * weight.value(&atom.position);
        }
    }
    for family in &nu.radial {
        let lo = family.inner.max(1.0);
        let hi = family.hi();
        if lo >= hi {
            continue;
        }
        match family.tail() {
            Tail::Compact => {}
            Tail::Power { alpha } => match weight.polynomial_degree() {
                Some(d) if d < alpha => {}
                Some(d) => {
                    return Ok(MomentResult::Infinite {
                        reason: format!(
                            "weight of polynomial degree {d} against a jump tail |y|^(-1-{alpha}) in radius"
                        ),
                    })
                }
                None => {
                    return Ok(MomentResult::Infinite {
                        reason: format!("superpolynomial weight against a power-law jump tail of index {alpha}"),
                    })
                }
            },
            Tail::Exponential { rate } => {
                let g_rate = weight.max_rate();
                if g_rate >= rate {
                    return Ok(MomentResult::Infinite {
                        reason: format!("exponential weight rate {g_rate} against jump tail decay rate {rate}"),
                    });
                }
            }
        }
        let f = |r: f64| {
            let avg = weight.spherical_average(r).unwrap_or(f64::NAN);
            avg * family.profile(n, r).unwrap_or(f64::NAN)
        };
        total += if hi.is_finite() {
            integrate(f, lo, hi, RADIAL_TOL)?.value
        } else {
            integrate_to_infinity(f, lo, RADIAL_TOL)?.value
        };
    }
    Ok(MomentResult::Finite { value: total })
}
