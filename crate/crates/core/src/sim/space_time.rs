use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::estimate::{Manifest, McEstimate};
use super::increment::IncrementSampler;
use super::rng::{derive_seed, try_run_replicas};
use crate::error::{check_dim, Error, Result};
use crate::levy::LevyTriplet;
use crate::linalg::dot;

/// Closed-form functions of `(s, x)` for space-time harmonicity checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceTimeFunction {
    Constant { value: f64 },
    /// `x_index`
    Coordinate { index: usize },
    /// `|x|² - rate·s`
    SquareMinusTime { rate: f64 },
    /// `e^{θ·x - rate·s}`
    ExpMartingale { theta: Vec<f64>, rate: f64 },
}

impl SpaceTimeFunction {
    pub fn evaluate(&self, s: f64, x: &[f64]) -> f64 {
        match self {
            SpaceTimeFunction::Constant { value } => *value,
            SpaceTimeFunction::Coordinate { index } => x[*index],
            SpaceTimeFunction::SquareMinusTime { rate } => dot(x, x) - rate * s,
            SpaceTimeFunction::ExpMartingale { theta, rate } => (dot(theta, x) - rate * s).exp(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            SpaceTimeFunction::Constant { value } => format!("{value}"),
            SpaceTimeFunction::Coordinate { index } => format!("x_{index}"),
            SpaceTimeFunction::SquareMinusTime { rate } => format!("|x|² - {rate}s"),
            SpaceTimeFunction::ExpMartingale { theta, rate } => format!("exp(θ·x - {rate}s), θ = {theta:?}"),
        }
    }

    fn check(&self, dim: usize) -> Result<()> {
        match self {
            SpaceTimeFunction::Coordinate { index } if *index >= dim => Err(Error::InvalidParameter(format!(
                "coordinate {index} out of range for dimension {dim}"
            ))),
            SpaceTimeFunction::ExpMartingale { theta, .. } => check_dim(dim, theta.len()),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimePoint {
    pub s: f64,
    pub x: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeEntry {
    pub s: f64,
    pub x: Vec<f64>,
    pub t: f64,
    pub target: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub deviation_sigma: f64,
    /// Set when `f` overflowed at some sampled argument; the entry is then
    /// excluded from the verdict.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flagged: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceTimeReport {
    pub function: SpaceTimeFunction,
    pub entries: Vec<SpaceTimeEntry>,
    pub max_deviation_sigma: f64,
    pub flagged: usize,
    pub pass: bool,
    pub manifest: Manifest,
}

/// Acceptance gate in standard errors.
pub const SIGMA_GATE: f64 = 4.0;

/// For each `t`, draws `m` increments once (common random numbers across the
/// points) and compares `E f(s+t, x+X_t)` with `f(s, x)`.
pub fn space_time_check(
    f: &SpaceTimeFunction,
    triplet: &LevyTriplet,
    t_list: &[f64],
    points: &[SpaceTimePoint],
    m: usize,
    seed: u64,
) -> Result<SpaceTimeReport> {
    let n = triplet.dim();
    f.check(n)?;
    for p in points {
        check_dim(n, p.x.len())?;
    }
    if m == 0 {
        return Err(Error::InvalidParameter("at least one sample required".into()));
    }
    let sampler = IncrementSampler::new(triplet)?;
    let mut entries = Vec::new();
    for (k, &t) in t_list.iter().enumerate() {
        let inc = try_run_replicas(m, derive_seed(seed, k as u64), |rng| sampler.sample(t, rng))?;
        for p in points {
            let values: Vec<f64> = inc
                .iter()
                .map(|dx| {
                    let y: Vec<f64> = p.x.iter().zip(dx).map(|(a, b)| a + b).collect();
                    f.evaluate(p.s + t, &y)
                })
                .collect();
            let target = f.evaluate(p.s, &p.x);
            let flagged = (!values.iter().all(|v| v.is_finite()) || !target.is_finite())
                .then(|| "non-finite function value at a sampled argument".to_string());
            let est = McEstimate::from_real(&values, seed);
            entries.push(SpaceTimeEntry {
                s: p.s,
                x: p.x.clone(),
                t,
                target,
                estimate: est.value.re,
                std_error: est.std_error,
                deviation_sigma: if flagged.is_some() {
                    f64::NAN
                } else {
                    est.deviation_sigma(Complex64::new(target, 0.0))
                },
                flagged,
            });
        }
    }
    let live = entries.iter().filter(|e| e.flagged.is_none());
    let max_deviation_sigma = live.map(|e| e.deviation_sigma).fold(0.0, f64::max);
    let flagged = entries.iter().filter(|e| e.flagged.is_some()).count();
    Ok(SpaceTimeReport {
        function: f.clone(),
        entries,
        max_deviation_sigma,
        flagged,
        pass: max_deviation_sigma <= SIGMA_GATE,
        manifest: Manifest {
            seed,
            samples: m,
            step: None,
            epsilon: sampler.epsilon().to_vec(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub s: f64,
    pub x: Vec<f64>,
    /// `E f(0, x + X_{|s|})`.
    pub estimate: McEstimate,
    /// The closed form of `f` continued to the same negative time.
    pub closed_form: f64,
    pub deviation_sigma: f64,
}

/// `f(s, x) := E f(0, x + X_{|s|})` for `s < 0`, compared with the closed
/// form of `f` at the same point.
pub fn extend_space_time(
    f: &SpaceTimeFunction,
    triplet: &LevyTriplet,
    s: f64,
    x: &[f64],
    m: usize,
    seed: u64,
) -> Result<ExtensionReport> {
    if !(s < 0.0) {
        return Err(Error::Precondition(format!("extension needs s < 0, got {s}")));
    }
    let n = triplet.dim();
    f.check(n)?;
    check_dim(n, x.len())?;
    let sampler = IncrementSampler::new(triplet)?;
    let values = try_run_replicas(m, seed, |rng| {
        sampler.sample(-s, rng).map(|dx| {
            let y: Vec<f64> = x.iter().zip(&dx).map(|(a, b)| a + b).collect();
            f.evaluate(0.0, &y)
        })
    })?;
    let estimate = McEstimate::from_real(&values, seed);
    let closed_form = f.evaluate(s, x);
    Ok(ExtensionReport {
        s,
        x: x.to_vec(),
        deviation_sigma: estimate.deviation_sigma(Complex64::new(closed_form, 0.0)),
        estimate,
        closed_form,
    })
}
