//! Submultiplicative weights `g: ℝⁿ → [1, ∞)` built from a small set of
//! parametric factors.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, norm};
use crate::quadrature::{integrate, Tolerance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor {
    /// `(1 + |x|)^λ`
    Poly { lambda: f64 },
    /// `Λ(x)^β = (1 + |x|²)^{β/2}`
    LambdaWeight { beta: f64 },
    /// `e^{α|x|^γ}`, `γ ∈ [0, 1]`
    StretchedExp { alpha: f64, gamma: f64 },
    /// `max{e^{x·v}, 1}`
    HalfExp { v: Vec<f64> },
    /// `log^β(|x| + e)`
    LogWeight { beta: f64 },
}

impl Factor {
    fn ln_value(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        match self {
            Factor::Poly { lambda } => lambda * r.ln_1p(),
            Factor::LambdaWeight { beta } => 0.5 * beta * (r * r).ln_1p(),
            Factor::StretchedExp { alpha, gamma } => alpha * r.powf(*gamma),
            Factor::HalfExp { v } => dot(x, v).max(0.0),
            Factor::LogWeight { beta } => beta * (r + std::f64::consts::E).ln().ln(),
        }
    }

    fn value(&self, x: &[f64]) -> f64 {
        let r = norm(x);
        match self {
            Factor::Poly { lambda } => (1.0 + r).powf(*lambda),
            Factor::LambdaWeight { beta } => (1.0 + dot(x, x)).powf(0.5 * beta),
            Factor::StretchedExp { alpha, gamma } => (alpha * r.powf(*gamma)).exp(),
            Factor::HalfExp { v } => dot(x, v).max(0.0).exp(),
            Factor::LogWeight { beta } => (r + std::f64::consts::E).ln().powf(*beta),
        }
    }

    fn constant(&self) -> f64 {
        match self {
            Factor::LambdaWeight { beta } => 2f64.powf(beta / 2.0),
            Factor::LogWeight { beta } => 2f64.powf(*beta),
            _ => 1.0,
        }
    }

    fn beta(&self, omega: &[f64]) -> f64 {
        match self {
            Factor::StretchedExp { alpha, gamma } if *gamma == 1.0 => *alpha,
            Factor::HalfExp { v } => dot(omega, v).max(0.0),
            _ => 0.0,
        }
    }

    fn is_radial(&self) -> bool {
        !matches!(self, Factor::HalfExp { v } if v.iter().any(|c| *c != 0.0))
    }

    /// Polynomial degree for polynomially dominated factors, `None` otherwise.
    fn degree(&self) -> Option<f64> {
        match self {
            Factor::Poly { lambda } => Some(*lambda),
            Factor::LambdaWeight { beta } => Some(*beta),
            Factor::LogWeight { .. } => Some(0.0),
            Factor::StretchedExp { alpha, gamma } => (*alpha == 0.0 || *gamma == 0.0).then_some(0.0),
            Factor::HalfExp { v } => v.iter().all(|c| *c == 0.0).then_some(0.0),
        }
    }

    fn max_rate(&self) -> f64 {
        match self {
            Factor::StretchedExp { alpha, gamma } if *gamma == 1.0 => *alpha,
            Factor::HalfExp { v } => norm(v),
            _ => 0.0,
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            Factor::Poly { lambda } if !(*lambda >= 0.0 && lambda.is_finite()) => bad(format!("poly exponent {lambda} must be >= 0")),
            Factor::LambdaWeight { beta } if !(*beta >= 0.0 && beta.is_finite()) => bad(format!("Λ exponent {beta} must be >= 0")),
            Factor::LogWeight { beta } if !(*beta >= 0.0 && beta.is_finite()) => bad(format!("log exponent {beta} must be >= 0")),
            Factor::StretchedExp { alpha, gamma } if !(*alpha >= 0.0 && alpha.is_finite() && (0.0..=1.0).contains(gamma)) => {
                bad(format!("stretched exponential needs α >= 0 and γ in [0, 1], got α={alpha}, γ={gamma}"))
            }
            Factor::HalfExp { v } => {
                check_dim(n, v.len())?;
                if v.iter().any(|c| !c.is_finite()) {
                    return bad("half-exponential vector must be finite".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn label(&self) -> String {
        match self {
            Factor::Poly { lambda } => format!("(1+|x|)^{lambda}"),
            Factor::LambdaWeight { beta } => format!("Λ(x)^{beta}"),
            Factor::StretchedExp { alpha, gamma } => format!("e^{{{alpha}|x|^{gamma}}}"),
            Factor::HalfExp { v } => format!("max{{e^{{x·{v:?}}},1}}"),
            Factor::LogWeight { beta } => format!("log^{beta}(|x|+e)"),
        }
    }
}

/// Product of one to three factors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthFunction {
    pub dim: usize,
    pub factors: Vec<Factor>,
}

impl GrowthFunction {
    pub fn new(dim: usize, factors: Vec<Factor>) -> Result<Self> {
        let g = Self { dim, factors };
        g.validate()?;
        Ok(g)
    }

    fn single(dim: usize, f: Factor) -> Self {
        Self { dim, factors: vec![f] }
    }

    pub fn poly(dim: usize, lambda: f64) -> Self {
        Self::single(dim, Factor::Poly { lambda })
    }

    pub fn lambda_weight(dim: usize, beta: f64) -> Self {
        Self::single(dim, Factor::LambdaWeight { beta })
    }

    pub fn stretched_exp(dim: usize, alpha: f64, gamma: f64) -> Self {
        Self::single(dim, Factor::StretchedExp { alpha, gamma })
    }

    pub fn exponential(dim: usize, alpha: f64) -> Self {
        Self::stretched_exp(dim, alpha, 1.0)
    }

    pub fn half_exp(v: Vec<f64>) -> Self {
        let dim = v.len();
        Self::single(dim, Factor::HalfExp { v })
    }

    pub fn log_weight(dim: usize, beta: f64) -> Self {
        Self::single(dim, Factor::LogWeight { beta })
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("growth function dimension must be at least 1".into()));
        }
        if self.factors.is_empty() || self.factors.len() > 3 {
            return Err(Error::InvalidParameter(format!(
                "growth functions take 1 to 3 factors, got {}",
                self.factors.len()
            )));
        }
        self.factors.iter().try_for_each(|f| f.validate(self.dim))
    }

    pub fn ln_value(&self, x: &[f64]) -> f64 {
        self.factors.iter().map(|f| f.ln_value(x)).sum()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.factors.iter().map(|f| f.value(x)).product()
    }

    /// Constant `c` in `g(x+y) ≤ c g(x) g(y)`.
    pub fn submultiplicative_constant(&self) -> f64 {
        self.factors.iter().map(Factor::constant).product()
    }

    /// Directional rate `β(ω) = lim ln g(rω) / r`, from the closed forms.
    pub fn beta(&self, omega: &[f64]) -> f64 {
        self.factors.iter().map(|f| f.beta(omega)).sum()
    }

    pub fn is_radial(&self) -> bool {
        self.factors.iter().all(Factor::is_radial)
    }

    /// Total polynomial degree, `None` when `g` outgrows every polynomial.
    pub fn polynomial_degree(&self) -> Option<f64> {
        self.factors.iter().map(Factor::degree).sum()
    }

    /// Largest exponential rate over all directions.
    pub fn max_rate(&self) -> f64 {
        self.factors.iter().map(Factor::max_rate).sum()
    }

    /// True when every factor has zero directional rate and `Π_g = {0}`.
    pub fn envelope_is_trivial(&self) -> bool {
        self.max_rate() == 0.0
    }

    pub fn label(&self) -> String {
        self.factors.iter().map(Factor::label).collect::<Vec<_>>().join("·")
    }

    /// Average of `g(rω)` over the unit sphere.
    pub(crate) fn spherical_average(&self, r: f64) -> Result<f64> {
        let n = self.dim;
        let mut e1 = vec![0.0; n];
        e1[0] = 1.0;
        if self.is_radial() {
            return Ok(self.value(&e1.iter().map(|c| c * r).collect::<Vec<_>>()));
        }
        let tol = Tolerance::new(1e-11, 0.0);
        match n {
            1 => Ok(0.5 * (self.value(&[r]) + self.value(&[-r]))),
            2 => {
                let f = |th: f64| self.value(&[r * th.cos(), r * th.sin()]);
                Ok(integrate(f, 0.0, 2.0 * std::f64::consts::PI, tol)?.value / (2.0 * std::f64::consts::PI))
            }
            3 => {
                let outer = |phi: f64| {
                    integrate(
                        |u: f64| {
                            let s = (1.0 - u * u).max(0.0).sqrt();
                            self.value(&[r * s * phi.cos(), r * s * phi.sin(), r * u])
                        },
                        -1.0,
                        1.0,
                        tol,
                    )
                    .map(|v| v.value)
                    .unwrap_or(f64::NAN)
                };
                let v = integrate(outer, 0.0, 2.0 * std::f64::consts::PI, tol)?.value;
                Ok(v / (4.0 * std::f64::consts::PI))
            }
            _ => Err(Error::Unsupported(format!("spherical averages in dimension {n}"))),
        }
    }

    /// Numerical `β(ω)` with an error bar.
    ///
    /// For each factor, the second difference `[L(4s) - 2L(2s) + L(s)]/s` of
    /// `L(r) = ln g(rω)` cancels constant and logarithmic terms exactly and
    /// converges to the linear rate; three nodes `s = r_max/4, r_max/8,
    /// r_max/16` are combined by Aitken's Δ², and the spread of the nodes is
    /// reported as the error bar.
    pub fn beta_numeric(&self, omega: &[f64], r_max: f64) -> Result<(f64, f64)> {
        check_unit(omega)?;
        check_dim(self.dim, omega.len())?;
        let mut total = 0.0;
        let mut spread = 0.0;
        for f in &self.factors {
            let l = |r: f64| f.ln_value(&omega.iter().map(|c| c * r).collect::<Vec<_>>());
            let d = |s: f64| (l(4.0 * s) - 2.0 * l(2.0 * s) + l(s)) / s;
            let d0 = d(r_max / 4.0);
            let d1 = d(r_max / 8.0);
            let d2 = d(r_max / 16.0);
            let denom = d0 - 2.0 * d1 + d2;
            let est = if denom.abs() > 1e-300 { d0 - (d0 - d1).powi(2) / denom } else { d0 };
            total += if est.is_finite() { est } else { d0 };
            spread += (d0 - d1).abs().max((d1 - d2).abs());
        }
        Ok((total, spread))
    }
}

pub(crate) fn check_unit(omega: &[f64]) -> Result<()> {
    let nrm = norm(omega);
    if (nrm - 1.0).abs() > 1e-12 {
        return Err(Error::NonUnitDirection { norm: nrm });
    }
    Ok(())
}

/// `β(ω)` via the analytic fast path.
pub fn beta_of_direction(g: &GrowthFunction, omega: &[f64], _r_max: f64) -> Result<f64> {
    check_unit(omega)?;
    check_dim(g.dim, omega.len())?;
    Ok(g.beta(omega))
}

/// `lim_{|x|→∞} Λ(x)^{-k} h(x) = 0`, decided from the factor classes.
///
/// This condition implies the so-called GRS-condition.
pub fn check_growth_condition(h: &GrowthFunction, k: u32) -> bool {
    match h.polynomial_degree() {
        Some(d) => d < f64::from(k),
        None => false,
    }
}

pub const GROWTH_CONDITION_NOTE: &str = "Λ^{-k} h → 0 at infinity implies the so-called GRS-condition";
