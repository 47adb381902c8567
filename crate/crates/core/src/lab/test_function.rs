use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{GridField, GridParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TestKind {
    /// `exp(-1/(1-|x/a|²))` on `|x| < a`.
    Mollifier,
    /// `exp(-|x|²/(2σ²))` cut off at `|x| = a`. Keep `a/σ ≳ 8.5` so the jump
    /// at the cutoff sits below double precision.
    GaussianTruncated { sigma: f64 },
}

/// Compactly supported bump `φ` centred at `center` with support radius `scale`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    #[serde(flatten)]
    pub kind: TestKind,
    pub center: Vec<f64>,
    pub scale: f64,
}

impl TestFunction {
    pub fn mollifier(center: Vec<f64>, scale: f64) -> Self {
        Self {
            kind: TestKind::Mollifier,
            center,
            scale,
        }
    }

    pub fn gaussian(center: Vec<f64>, sigma: f64, scale: f64) -> Self {
        Self {
            kind: TestKind::GaussianTruncated { sigma },
            center,
            scale,
        }
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.scale > 0.0 && self.scale.is_finite()) || self.center.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "test function needs finite center and positive scale, got {:?}, {}",
                self.center, self.scale
            )));
        }
        if let TestKind::GaussianTruncated { sigma } = self.kind {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::InvalidParameter(format!("gaussian width {sigma} must be positive")));
            }
        }
        Ok(())
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let d2: f64 = x.iter().zip(&self.center).map(|(a, c)| (a - c) * (a - c)).sum();
        let a2 = self.scale * self.scale;
        if d2 >= a2 {
            return 0.0;
        }
        match self.kind {
            TestKind::Mollifier => (-1.0 / (1.0 - d2 / a2)).exp(),
            TestKind::GaussianTruncated { sigma } => (-d2 / (2.0 * sigma * sigma)).exp(),
        }
    }

    /// `T_h φ = φ(· - h)`.
    pub fn shifted(&self, h: &[f64]) -> Self {
        Self {
            center: self.center.iter().zip(h).map(|(c, s)| c + s).collect(),
            ..self.clone()
        }
    }

    /// `φ̃ = φ(-·)`.
    pub fn reflected(&self) -> Self {
        Self {
            center: self.center.iter().map(|c| -c).collect(),
            ..self.clone()
        }
    }

    /// Errors unless the support stays `margin` away from the box boundary.
    pub fn check_margin(&self, half_length: f64, margin: f64) -> Result<()> {
        let reach = self.center.iter().map(|c| c.abs()).fold(0.0, f64::max) + self.scale;
        if reach > half_length - margin + 1e-12 {
            return Err(Error::SupportMargin { margin, half_length });
        }
        Ok(())
    }

    pub fn sample(&self, grid: GridParams) -> Result<GridField> {
        crate::error::check_dim(self.dim(), grid.dim)?;
        self.validate()?;
        GridField::from_fn(grid, true, true, |x| Complex64::new(self.value(x), 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mollifier_peak_and_support() {
        let phi = TestFunction::mollifier(vec![1.0], 2.0);
        assert!((phi.value(&[1.0]) - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(phi.value(&[3.0]), 0.0);
        assert_eq!(phi.value(&[-1.0]), 0.0);
    }

    #[test]
    fn shift_and_reflection() {
        let phi = TestFunction::gaussian(vec![0.5, 0.0], 0.3, 2.0);
        let x = [0.9, -0.2];
        assert!((phi.shifted(&[1.0, 1.0]).value(&[1.9, 0.8]) - phi.value(&x)).abs() < 1e-14);
        assert_eq!(phi.reflected().value(&[-0.9, 0.2]), phi.value(&x));
    }

    #[test]
    fn margin_checks() {
        let phi = TestFunction::mollifier(vec![1.0], 2.0);
        assert!(phi.check_margin(8.0, 2.0).is_ok());
        assert!(matches!(phi.check_margin(4.0, 2.0), Err(Error::SupportMargin { .. })));
    }
}
