use serde::{Deserialize, Serialize};

use super::measure::JumpMeasure;
use crate::error::{check_dim, Error, Result};
use crate::linalg::sym_eigenvalues;

/// Levy triplet `(b, Q, ν)` on `ℝⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevyTriplet {
    pub b: Vec<f64>,
    #[serde(rename = "Q", alias = "q")]
    pub q: Vec<Vec<f64>>,
    #[serde(default)]
    pub nu: JumpMeasure,
}

impl LevyTriplet {
    /// Validating constructor; `Q` is symmetrised.
    pub fn new(b: Vec<f64>, q: Vec<Vec<f64>>, nu: JumpMeasure) -> Result<Self> {
        let t = Self { b, q, nu };
        t.validate()?;
        Ok(t.symmetrised())
    }

    pub fn brownian(n: usize) -> Self {
        Self::diffusion(vec![0.0; n], identity(n))
    }

    pub fn diffusion(b: Vec<f64>, q: Vec<Vec<f64>>) -> Self {
        Self {
            b,
            q,
            nu: JumpMeasure::zero(),
        }
    }

    pub fn pure_jump(nu: JumpMeasure, n: usize) -> Self {
        Self {
            b: vec![0.0; n],
            q: zeros(n),
            nu,
        }
    }

    pub fn drift(b: Vec<f64>) -> Self {
        let n = b.len();
        Self {
            b,
            q: zeros(n),
            nu: JumpMeasure::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.b.len()
    }

    fn symmetrised(mut self) -> Self {
        let n = self.dim();
        for i in 0..n {
            for j in i + 1..n {
                let m = 0.5 * (self.q[i][j] + self.q[j][i]);
                self.q[i][j] = m;
                self.q[j][i] = m;
            }
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        if n == 0 {
            return Err(Error::InvalidTriplet("dimension must be at least 1".into()));
        }
        check_dim(n, self.q.len())?;
        for row in &self.q {
            check_dim(n, row.len())?;
        }
        if self.b.iter().chain(self.q.iter().flatten()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidTriplet("drift and covariance must be finite".into()));
        }
        for i in 0..n {
            for j in 0..i {
                let scale = self.q[i][j].abs().max(self.q[j][i].abs()).max(1.0);
                if (self.q[i][j] - self.q[j][i]).abs() > 1e-9 * scale {
                    return Err(Error::InvalidTriplet(format!("Q is not symmetric at ({i}, {j})")));
                }
            }
        }
        let min_eig = sym_eigenvalues(&self.q).into_iter().fold(f64::INFINITY, f64::min);
        if min_eig < -1e-12 {
            return Err(Error::InvalidTriplet(format!(
                "Q is not positive semidefinite (smallest eigenvalue {min_eig:.3e})"
            )));
        }
        self.nu.validate(n)
    }

    /// Whether `Q` has a nonzero entry.
    pub fn has_gaussian_part(&self) -> bool {
        self.q.iter().flatten().any(|v| *v != 0.0)
    }
}

pub(crate) fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

pub(crate) fn zeros(n: usize) -> Vec<Vec<f64>> {
    vec![vec![0.0; n]; n]
}
