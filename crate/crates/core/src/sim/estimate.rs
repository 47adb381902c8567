use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rng::{pairwise_sum, pairwise_sum_real};

/// Monte Carlo mean with its standard error `s / √M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub value: Complex64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl McEstimate {
    /// For complex samples `s² = Σ|Z - Z̄|² / (M - 1)`.
    pub fn from_complex(samples: &[Complex64], seed: u64) -> Self {
        let m = samples.len();
        let mean = pairwise_sum(samples) / m as f64;
        let dev: Vec<f64> = samples.iter().map(|z| (z - mean).norm_sqr()).collect();
        let var = if m > 1 { pairwise_sum_real(&dev) / (m - 1) as f64 } else { 0.0 };
        Self {
            value: mean,
            std_error: (var / m as f64).sqrt(),
            samples: m,
            seed,
        }
    }

    pub fn from_real(samples: &[f64], seed: u64) -> Self {
        let m = samples.len();
        let mean = pairwise_sum_real(samples) / m as f64;
        let dev: Vec<f64> = samples.iter().map(|v| (v - mean) * (v - mean)).collect();
        let var = if m > 1 { pairwise_sum_real(&dev) / (m - 1) as f64 } else { 0.0 };
        Self {
            value: Complex64::new(mean, 0.0),
            std_error: (var / m as f64).sqrt(),
            samples: m,
            seed,
        }
    }

    /// `|value - reference| / std_error`. Agreement to roundoff counts as
    /// 0σ, so deterministic estimates are not judged by their roundoff
    /// scatter; a zero-variance mismatch is infinitely far.
    pub fn deviation_sigma(&self, reference: Complex64) -> f64 {
        let d = (self.value - reference).norm();
        if d <= 1e-12 * reference.norm().max(1.0) {
            0.0
        } else if self.std_error > 0.0 {
            d / self.std_error
        } else {
            f64::INFINITY
        }
    }
}

/// Reproducibility record attached to every simulation output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    /// Inner cutoffs of the radial families that were simulated.
    pub epsilon: Vec<f64>,
}

/// An estimate set against its analytic target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub estimate: McEstimate,
    pub reference: Complex64,
    pub deviation_sigma: f64,
}

impl Comparison {
    pub fn new(estimate: McEstimate, reference: Complex64) -> Self {
        Self {
            deviation_sigma: estimate.deviation_sigma(reference),
            estimate,
            reference,
        }
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.deviation_sigma <= sigmas
    }
}
