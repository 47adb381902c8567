use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{GridField, GridParams};
use super::multiplier::{required_margin, weak_residual_detail};
use super::test_function::TestFunction;
use crate::error::{check_dim, Error, Result};
use crate::levy::Symbol;
use crate::spectral::WitnessSpec;

/// Default pass threshold for normalised residuals.
pub const HARMONICITY_THRESHOLD: f64 = 1e-6;

const MIN_HALF_LENGTH: f64 = 8.0;
const COMMENSURATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessField {
    pub field: GridField,
    /// Set when the box was stretched to fit whole periods.
    pub adjustment: Option<String>,
}

fn frequencies(spec: &WitnessSpec) -> Option<&[f64]> {
    match spec {
        WitnessSpec::ComplexExponential { gamma } | WitnessSpec::CosineAverage { gamma } => Some(gamma),
        _ => None,
    }
}

/// `N = 1024` on the line, `256` per axis in the plane, and the smallest
/// multiple of the witness period that is at least 8.
pub fn default_grid(spec: &WitnessSpec) -> Result<GridParams> {
    let dim = spec.dim();
    let points = if dim == 1 { 1024 } else { 256 };
    let mut half = MIN_HALF_LENGTH;
    if let Some(g) = frequencies(spec).and_then(|g| g.iter().find(|v| **v != 0.0)) {
        let period = 2.0 * std::f64::consts::PI / g.abs();
        half = (MIN_HALF_LENGTH / period).ceil() * period;
    }
    GridParams::new(dim, points, half)
}

/// Smallest `L' ≥ L` with `L' γ_j / π` integral for every component.
fn commensurate_half_length(gamma: &[f64], half: f64) -> Option<f64> {
    let units: Vec<f64> = gamma
        .iter()
        .filter(|g| **g != 0.0)
        .map(|g| std::f64::consts::PI / g.abs())
        .collect();
    let Some(&u0) = units.first() else {
        return Some(half);
    };
    let is_int = |v: f64| (v - v.round()).abs() <= COMMENSURATE_TOL * v.abs().max(1.0);
    let start = (half / u0 - COMMENSURATE_TOL).ceil().max(1.0) as u64;
    (start..start + 10_000)
        .map(|k| k as f64 * u0)
        .find(|l| units.iter().all(|u| is_int(l / u)))
}

fn poly_value(coefficients: &[f64], t: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

/// Closed-form value of the witness at `x`.
pub fn witness_value(spec: &WitnessSpec, x: &[f64]) -> Complex64 {
    let dot = |v: &[f64]| v.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
    match spec {
        WitnessSpec::ComplexExponential { gamma } => Complex64::from_polar(1.0, dot(gamma)),
        WitnessSpec::RealExponential { theta } => Complex64::new(dot(theta).exp(), 0.0),
        WitnessSpec::CosineAverage { gamma } => Complex64::new(0.5 * (1.0 + dot(gamma).cos()), 0.0),
        WitnessSpec::Polynomial { dim, coefficients } => {
            let t = if *dim == 1 { x[0] } else { x.iter().map(|v| v * v).sum::<f64>().sqrt() };
            Complex64::new(poly_value(coefficients, t), 0.0)
        }
    }
}

/// Samples the witness. Oscillating witnesses get their box stretched to a
/// whole number of periods; if no such length exists nearby the field is
/// tagged non-periodic.
pub fn make_witness(spec: &WitnessSpec, grid: GridParams) -> Result<WitnessField> {
    check_dim(spec.dim(), grid.dim)?;
    grid.validate()?;
    let mut grid = grid;
    let mut adjustment = None;
    let mut periodic = false;
    if let Some(gamma) = frequencies(spec) {
        match commensurate_half_length(gamma, grid.half_length) {
            Some(l) => {
                periodic = true;
                if (l - grid.half_length).abs() > 1e-12 * grid.half_length {
                    adjustment = Some(format!(
                        "box half-length raised from {} to {l} to fit whole periods",
                        grid.half_length
                    ));
                    grid.half_length = l;
                }
            }
            None => {
                adjustment = Some("no commensurate box length found; witness treated as non-periodic".into());
            }
        }
    } else if let WitnessSpec::Polynomial { coefficients, .. } = spec {
        periodic = coefficients.iter().skip(1).all(|c| *c == 0.0);
    }
    let real = !matches!(spec, WitnessSpec::ComplexExponential { gamma } if gamma.iter().any(|g| *g != 0.0));
    let field = GridField::from_fn(grid, real, periodic, |x| witness_value(spec, x))?;
    Ok(WitnessField { field, adjustment })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    pub phi: TestFunction,
    pub residual_re: f64,
    pub residual_im: f64,
    /// `⟨p, φ⟩` in right-hand-side mode, zero otherwise.
    pub expected: f64,
    pub normalizer: f64,
    pub normalized: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truncation_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicityReport {
    pub witness: WitnessSpec,
    pub symbol: String,
    pub grid: GridParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjustment: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<Vec<f64>>,
    pub entries: Vec<ResidualEntry>,
    pub max_normalized: f64,
    pub threshold: f64,
    pub pass: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct HarmonicityOptions {
    /// Defaults to [`default_grid`].
    pub grid: Option<GridParams>,
    /// Coefficients of `p` (same convention as polynomial witnesses); checks
    /// `⟨f, m̃(D)φ⟩ = ⟨p, φ⟩` instead of `= 0`.
    pub rhs: Option<Vec<f64>>,
    /// Defaults to [`HARMONICITY_THRESHOLD`].
    pub threshold: Option<f64>,
}

/// Worst normalised residual over the supplied test functions. Residuals are
/// normalised by `‖m̃(D)φ‖₁`, except for real exponentials where the weight
/// itself grows and `∫|f||m̃(D)φ|` is used.
pub fn verify_harmonicity(
    spec: &WitnessSpec,
    m: &Symbol,
    phis: &[TestFunction],
    options: &HarmonicityOptions,
) -> Result<HarmonicityReport> {
    if phis.is_empty() {
        return Err(Error::InvalidParameter("at least one test function is required".into()));
    }
    let grid = match options.grid {
        Some(g) => g,
        None => default_grid(spec)?,
    };
    let witness = make_witness(spec, grid)?;
    let f = &witness.field;
    let margin = required_margin(f);
    let exponential = matches!(spec, WitnessSpec::RealExponential { .. });
    let rhs_spec = options.rhs.as_ref().map(|c| WitnessSpec::Polynomial {
        dim: spec.dim(),
        coefficients: c.clone(),
    });

    let mut entries = Vec::with_capacity(phis.len());
    let mut warnings = Vec::new();
    for phi in phis {
        let d = weak_residual_detail(f, m, phi, margin)?;
        if let Some(w) = d.diagnostics.warning() {
            warnings.push(w);
        }
        let expected = match &rhs_spec {
            Some(p) => {
                let pf = GridField::from_fn(f.grid, true, false, |x| witness_value(p, x) * phi.value(x))?;
                pf.integral().re
            }
            None => 0.0,
        };
        let normalizer = if exponential { d.weighted_l1 } else { d.image_l1 };
        let deviation = (d.residual - expected).norm();
        let normalized = if normalizer > 0.0 { deviation / normalizer } else { deviation };
        entries.push(ResidualEntry {
            phi: phi.clone(),
            residual_re: d.residual.re,
            residual_im: d.residual.im,
            expected,
            normalizer,
            normalized,
            truncation_bound: (!f.periodic).then_some(d.truncation_bound),
        });
    }
    let max_normalized = entries.iter().map(|e| e.normalized).fold(0.0, f64::max);
    let threshold = options.threshold.unwrap_or(HARMONICITY_THRESHOLD);
    Ok(HarmonicityReport {
        witness: spec.clone(),
        symbol: m.label(),
        grid: f.grid,
        adjustment: witness.adjustment,
        rhs: options.rhs.clone(),
        entries,
        max_normalized,
        threshold,
        pass: max_normalized < threshold,
        warnings,
    })
}

/// Weak residual at `N, 2N, 4N, …` on a fixed box, for convergence plots.
pub fn resolution_study(
    spec: &WitnessSpec,
    m: &Symbol,
    phi: &TestFunction,
    grid: GridParams,
    doublings: usize,
) -> Result<Vec<(usize, Complex64)>> {
    let base = make_witness(spec, grid)?.field.grid;
    (0..=doublings)
        .map(|k| {
            let g = GridParams::new(base.dim, base.points << k, base.half_length)?;
            let f = make_witness(spec, g)?.field;
            let d = weak_residual_detail(&f, m, phi, required_margin(&f))?;
            Ok((g.points, d.residual))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{JumpMeasure, LevyTriplet};
    use std::f64::consts::PI;

    #[test]
    fn complex_exponential_samples() {
        let spec = WitnessSpec::ComplexExponential { gamma: vec![2.0 * PI] };
        let w = make_witness(&spec, GridParams::new(1, 256, 1.0).unwrap()).unwrap();
        assert!(w.adjustment.is_none());
        assert!(w.field.periodic && !w.field.real);
        for (i, z) in w.field.samples.iter().enumerate() {
            let x = w.field.grid.point(i)[0];
            assert!((z - Complex64::from_polar(1.0, 2.0 * PI * x)).norm() < 1e-14);
        }
    }

    #[test]
    fn box_is_stretched_to_whole_periods() {
        let spec = WitnessSpec::CosineAverage { gamma: vec![3.0] };
        let w = make_witness(&spec, GridParams::new(1, 256, 1.0).unwrap()).unwrap();
        assert!(w.adjustment.is_some());
        let l = w.field.grid.half_length;
        assert!((l * 3.0 / PI - (l * 3.0 / PI).round()).abs() < 1e-9 && l >= 1.0);
        assert!((w.field.samples[0].re - 0.5 * (1.0 + (-3.0 * l).cos())).abs() < 1e-14);
    }

    #[test]
    fn polynomial_samples_square() {
        let spec = WitnessSpec::Polynomial { dim: 1, coefficients: vec![0.0, 0.0, 1.0] };
        let w = make_witness(&spec, GridParams::new(1, 64, 2.0).unwrap()).unwrap();
        assert!(!w.field.periodic && w.field.real);
        assert_eq!(w.field.samples[1].re, (-2.0f64 + 1.0 / 16.0).powi(2));
    }

    #[test]
    fn default_grid_length() {
        let g = default_grid(&WitnessSpec::CosineAverage { gamma: vec![2.0 * PI] }).unwrap();
        assert_eq!((g.points, g.half_length), (1024, 8.0));
        let g = default_grid(&WitnessSpec::ComplexExponential { gamma: vec![0.3, 0.0] }).unwrap();
        assert_eq!(g.points, 256);
        assert!(g.half_length >= 8.0 && g.half_length < 8.0 + 2.0 * PI / 0.3);
    }

    #[test]
    fn linear_function_is_brownian_harmonic() {
        let spec = WitnessSpec::Polynomial { dim: 1, coefficients: vec![0.0, 1.0] };
        let phis = [TestFunction::gaussian(vec![0.0], 0.4, 3.5), TestFunction::mollifier(vec![1.0], 2.0)];
        let r = verify_harmonicity(&spec, &Symbol::brownian(1), &phis, &HarmonicityOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn square_with_constant_rhs() {
        let spec = WitnessSpec::Polynomial { dim: 1, coefficients: vec![0.0, 0.0, 1.0] };
        let phis = [TestFunction::gaussian(vec![0.5], 0.4, 3.5)];
        let plain = verify_harmonicity(&spec, &Symbol::brownian(1), &phis, &HarmonicityOptions::default()).unwrap();
        assert!(!plain.pass);
        let opts = HarmonicityOptions {
            rhs: Some(vec![-1.0]),
            ..Default::default()
        };
        let r = verify_harmonicity(&spec, &Symbol::brownian(1), &phis, &opts).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn biharmonic_square_norm() {
        let spec = WitnessSpec::Polynomial { dim: 2, coefficients: vec![0.0, 0.0, 1.0] };
        let phis = [TestFunction::gaussian(vec![0.2, -0.1], 0.42, 3.6)];
        let r = verify_harmonicity(&spec, &Symbol::biharmonic(2), &phis, &HarmonicityOptions::default()).unwrap();
        assert!(r.pass, "{r:?}");
        // |x|² is not harmonic for the Laplacian.
        let r = verify_harmonicity(&spec, &Symbol::brownian(2), &phis, &HarmonicityOptions::default()).unwrap();
        assert!(!r.pass);
    }

    #[test]
    fn exponential_witness_for_drift_diffusion() {
        // ψ(-iθ) = -bθ - ½θ² vanishes at θ = -2 for b = 1.
        let t = LevyTriplet::new(vec![1.0], vec![vec![1.0]], JumpMeasure::zero()).unwrap();
        let spec = WitnessSpec::RealExponential { theta: vec![-2.0] };
        let phis = [TestFunction::gaussian(vec![0.0], 0.3, 2.8)];
        let opts = HarmonicityOptions {
            grid: Some(GridParams::new(1, 1024, 8.0).unwrap()),
            ..Default::default()
        };
        let r = verify_harmonicity(&spec, &Symbol::Triplet(t), &phis, &opts).unwrap();
        assert!(r.pass, "{r:#?}");
        let e = &r.entries[0];
        assert!(e.truncation_bound.unwrap() < 1e-5 * e.normalizer, "{e:?}");
    }

    #[test]
    fn resolution_is_stable() {
        let spec = WitnessSpec::CosineAverage { gamma: vec![2.0 * PI] };
        let m = Symbol::Triplet(LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1));
        let phi = TestFunction::mollifier(vec![0.0], 2.0);
        let rows = resolution_study(&spec, &m, &phi, GridParams::new(1, 256, 8.0).unwrap(), 2).unwrap();
        assert_eq!(rows.len(), 3);
        for w in rows.windows(2) {
            assert!((w[0].1 - w[1].1).norm() < 1e-5);
        }
    }
}
