//! Conditionally positive definite exponents of order `2s`: a polynomial of
//! degree `2s` plus a jump part compensated to order `2s - 1`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::measure::JumpMeasure;
use super::triplet::LevyTriplet;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, norm};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Coefficient {
    /// Multi-index `α`.
    pub alpha: Vec<u32>,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedKappa {
    pub dim: usize,
    /// Order `s ≥ 1`.
    pub order: usize,
    /// Sparse `c_α`; absent multi-indices are zero.
    #[serde(default)]
    pub coefficients: Vec<Coefficient>,
    #[serde(default)]
    pub nu: JumpMeasure,
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// `i^k`
fn i_pow(k: u32) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl GeneralizedKappa {
    pub fn new(dim: usize, order: usize, coefficients: Vec<Coefficient>, nu: JumpMeasure) -> Result<Self> {
        let k = Self {
            dim,
            order,
            coefficients,
            nu,
        };
        k.validate()?;
        Ok(k)
    }

    /// Order-one form of a triplet: `c_{e_j} = -b_j`, `c_{2e_j} = -Q_jj`,
    /// `c_{e_j+e_k} = -Q_jk`.
    pub fn from_triplet(t: &LevyTriplet) -> Self {
        let n = t.dim();
        let mut coefficients = Vec::new();
        for j in 0..n {
            if t.b[j] != 0.0 {
                let mut alpha = vec![0; n];
                alpha[j] = 1;
                coefficients.push(Coefficient { alpha, c: -t.b[j] });
            }
        }
        for j in 0..n {
            for k in j..n {
                if t.q[j][k] != 0.0 {
                    let mut alpha = vec![0; n];
                    alpha[j] += 1;
                    alpha[k] += 1;
                    coefficients.push(Coefficient { alpha, c: -t.q[j][k] });
                }
            }
        }
        Self {
            dim: n,
            order: 1,
            coefficients,
            nu: t.nu.clone(),
        }
    }

    /// `|ξ|^{2k}` in one dimension, as a pure polynomial of order `k`.
    pub fn even_power_1d(k: usize) -> Self {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        Self {
            dim: 1,
            order: k,
            coefficients: vec![Coefficient {
                alpha: vec![2 * k as u32],
                c: sign * factorial(2 * k as u32),
            }],
            nu: JumpMeasure::zero(),
        }
    }

    /// `|ξ|⁴ = Σ ξ_j⁴ + 2 Σ_{j<k} ξ_j² ξ_k²` as an order-two polynomial.
    pub fn biharmonic(n: usize) -> Self {
        let mut coefficients = Vec::new();
        for j in 0..n {
            let mut alpha = vec![0; n];
            alpha[j] = 4;
            coefficients.push(Coefficient { alpha, c: 24.0 });
            for k in j + 1..n {
                let mut alpha = vec![0; n];
                alpha[j] = 2;
                alpha[k] = 2;
                coefficients.push(Coefficient { alpha, c: 8.0 });
            }
        }
        Self {
            dim: n,
            order: 2,
            coefficients,
            nu: JumpMeasure::zero(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidParameter("order s must be a positive integer".into()));
        }
        let max_degree = 2 * self.order as u32;
        for (i, coef) in self.coefficients.iter().enumerate() {
            check_dim(self.dim, coef.alpha.len())?;
            let deg: u32 = coef.alpha.iter().sum();
            if deg > max_degree {
                return Err(Error::InvalidParameter(format!(
                    "multi-index {:?} has degree {deg} > 2s = {max_degree}",
                    coef.alpha
                )));
            }
            if !coef.c.is_finite() {
                return Err(Error::InvalidParameter(format!("coefficient {:?} is not finite", coef.alpha)));
            }
            if self.coefficients[..i].iter().any(|o| o.alpha == coef.alpha) {
                return Err(Error::InvalidParameter(format!("duplicate multi-index {:?}", coef.alpha)));
            }
        }
        self.nu.validate(self.dim)
    }

    fn polynomial(&self, xi: &[f64]) -> Complex64 {
        self.coefficients
            .iter()
            .map(|coef| {
                let deg: u32 = coef.alpha.iter().sum();
                let mono: f64 = coef.alpha.iter().zip(xi).map(|(&a, &x)| x.powi(a as i32)).product();
                let afact: f64 = coef.alpha.iter().map(|&a| factorial(a)).product();
                i_pow(deg) * (coef.c * mono / afact)
            })
            .sum()
    }
}

/// `1 - e^{iu} + Σ_{k=1}^{2s-1} (iu)^k / k!`.
fn compensated_cis_order(order: usize, u: f64) -> Complex64 {
    let top = 2 * order as u32;
    if u.abs() < 1.0 {
        // remainder -Σ_{k≥2s} (iu)^k / k!
        let mut sum = Complex64::new(0.0, 0.0);
        let mut mag = u.abs().powi(top as i32) / factorial(top);
        for k in top..top + 30 {
            let signed = i_pow(k) * (mag * if u < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 });
            sum -= signed;
            mag *= u.abs() / (k + 1) as f64;
            if mag < 1e-18 * sum.norm() {
                break;
            }
        }
        sum
    } else {
        let mut v = Complex64::new(1.0, 0.0) - Complex64::new(0.0, u).exp();
        let mut term = Complex64::new(1.0, 0.0);
        for k in 1..top {
            term *= Complex64::new(0.0, u) / k as f64;
            v += term;
        }
        v
    }
}

pub fn evaluate_generalized(kappa: &GeneralizedKappa, xi: &[f64]) -> Result<Complex64> {
    check_dim(kappa.dim, xi.len())?;
    let mut v = kappa.polynomial(xi);
    if xi.iter().all(|x| *x == 0.0) {
        return Ok(v);
    }
    for atom in &kappa.nu.atoms {
        let u = dot(&atom.position, xi);
        let term = if norm(&atom.position) < 1.0 {
            compensated_cis_order(kappa.order, u)
        } else {
            super::exponent::one_minus_cis(u)
        };
        v += term * atom.mass;
    }
    let s = norm(xi);
    for family in &kappa.nu.radial {
        v += family.exponent_integral(kappa.dim, kappa.order, s)?;
    }
    Ok(v)
}

/// `κ(-iη)` for atomic jump parts; radial families are not extended.
pub(crate) fn evaluate_generalized_extension(kappa: &GeneralizedKappa, eta: &[f64]) -> Result<f64> {
    check_dim(kappa.dim, eta.len())?;
    if !kappa.nu.radial.is_empty() {
        return Err(Error::Unsupported("extension of generalized exponents with radial families".into()));
    }
    // i^{|α|} (-i)^{|α|} = 1
    let mut v: f64 = kappa
        .coefficients
        .iter()
        .map(|coef| {
            let mono: f64 = coef.alpha.iter().zip(eta).map(|(&a, &x)| x.powi(a as i32)).product();
            let afact: f64 = coef.alpha.iter().map(|&a| factorial(a)).product();
            coef.c * mono / afact
        })
        .sum();
    let top = 2 * kappa.order as u32;
    for atom in &kappa.nu.atoms {
        let u = dot(&atom.position, eta);
        v += atom.mass
            * if norm(&atom.position) < 1.0 {
                let mut partial = 1.0 - u.exp();
                let mut term = 1.0;
                for k in 1..top {
                    term *= u / k as f64;
                    partial += term;
                }
                partial
            } else {
                -u.exp_m1()
            };
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::exponent::evaluate_exponent;
    use crate::levy::measure::{Atom, RadialFamily};

    #[test]
    fn fourth_power() {
        let k = GeneralizedKappa::even_power_1d(2);
        assert_eq!(k.coefficients[0].c, 24.0);
        assert!((evaluate_generalized(&k, &[2.0]).unwrap() - Complex64::new(16.0, 0.0)).norm() < 1e-12);
        assert_eq!(evaluate_generalized(&k, &[0.0]).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn constant_term_survives_at_origin() {
        let k = GeneralizedKappa::new(1, 1, vec![Coefficient { alpha: vec![0], c: 3.0 }], JumpMeasure::zero()).unwrap();
        assert_eq!(evaluate_generalized(&k, &[0.0]).unwrap(), Complex64::new(3.0, 0.0));
    }

    #[test]
    fn rejects_degree_above_two_s() {
        let bad = GeneralizedKappa::new(1, 1, vec![Coefficient { alpha: vec![3], c: 1.0 }], JumpMeasure::zero());
        assert!(bad.is_err());
    }

    #[test]
    fn order_one_reproduces_triplet() {
        let nu = JumpMeasure::from_atoms(vec![
            Atom::new(vec![0.3, 0.1], 1.2),
            Atom::new(vec![-1.5, 2.0], 0.4),
        ])
        .with_radial(RadialFamily::stable_like(0.5, 1.3).with_cutoffs(0.0, Some(4.0)));
        let t = LevyTriplet::new(vec![0.7, -0.2], vec![vec![1.0, 0.3], vec![0.3, 0.5]], nu).unwrap();
        let k = GeneralizedKappa::from_triplet(&t);
        for xi in [[0.1, 0.2], [1.0, -3.0], [5.0, 0.5], [-0.01, 0.0], [2.0, 2.0]] {
            let a = evaluate_exponent(&t, &xi).unwrap();
            let b = evaluate_generalized(&k, &xi).unwrap();
            assert!((a - b).norm() < 1e-10, "{xi:?}: {a} vs {b}");
        }
    }

    #[test]
    fn order_two_small_atom_is_fourth_order_remainder() {
        // 1 - e^{iu} + iu - u²/2 - iu³/6, evaluated directly
        let u: f64 = 0.5;
        let z = Complex64::new(0.0, u);
        let direct = Complex64::new(1.0, 0.0) - z.exp() + z + z * z / 2.0 + z * z * z / 6.0;
        let got = compensated_cis_order(2, u);
        assert!((got - direct).norm() < 1e-15);
        let got_neg = compensated_cis_order(2, -u);
        assert!((got_neg - direct.conj()).norm() < 1e-15);
    }
}
