//! The envelope `Π_g = {ξ : ξ·ω ≤ β(ω) for all ω}` and the bounds that tie
//! `g` to its directional rates.

use serde::{Deserialize, Serialize};

use super::function::{check_unit, Factor, GrowthFunction};
use crate::error::{check_dim, Result};
use crate::linalg::{dot, norm};

pub const MEMBERSHIP_TOL: f64 = 1e-9;
pub const DEFAULT_DIRECTIONS: usize = 256;
const MIN_DIRECTIONS: usize = 64;

/// Deterministic direction sample on `𝕊^{n-1}`, always containing `±e_j`.
///
/// `{±1}` in one dimension, equally spaced angles in two, a Fibonacci
/// lattice in three.
pub fn direction_set(n: usize, count: usize) -> Vec<Vec<f64>> {
    let count = count.max(MIN_DIRECTIONS);
    let mut dirs: Vec<Vec<f64>> = match n {
        1 => return vec![vec![1.0], vec![-1.0]],
        2 => (0..count)
            .map(|k| {
                let th = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
                vec![th.cos(), th.sin()]
            })
            .collect(),
        _ => {
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            (0..count)
                .map(|k| {
                    let z = 1.0 - 2.0 * (k as f64 + 0.5) / count as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let th = golden * k as f64;
                    let mut v = vec![0.0; n];
                    v[0] = rho * th.cos();
                    v[1] = rho * th.sin();
                    v[2] = z;
                    v
                })
                .collect()
        }
    };
    for j in 0..n {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; n];
            e[j] = sign;
            dirs.push(e);
        }
    }
    dirs
}

/// `ξ·ω ≤ β(ω) + 1e-9` over the direction sample plus `±ξ/|ξ|`.
pub fn pi_g_membership(g: &GrowthFunction, xi: &[f64], direction_count: usize) -> bool {
    if xi.len() != g.dim {
        return false;
    }
    let r = norm(xi);
    if r == 0.0 {
        return true;
    }
    let mut dirs = direction_set(g.dim, direction_count);
    let u: Vec<f64> = xi.iter().map(|c| c / r).collect();
    dirs.push(u.iter().map(|c| -c).collect());
    dirs.push(u);
    dirs.iter().all(|w| dot(xi, w) <= g.beta(w) + MEMBERSHIP_TOL)
}

/// Shape of `Π_g`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum EnvelopeShape {
    PointOrigin,
    Ball { radius: f64 },
    Segment { from: Vec<f64>, to: Vec<f64> },
    HalfSpaces { directions: Vec<Vec<f64>>, betas: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeSet {
    pub shape: EnvelopeShape,
    pub tolerance: f64,
}

impl EnvelopeSet {
    pub fn contains(&self, xi: &[f64]) -> bool {
        let tol = self.tolerance;
        match &self.shape {
            EnvelopeShape::PointOrigin => norm(xi) <= tol,
            EnvelopeShape::Ball { radius } => norm(xi) <= radius + tol,
            EnvelopeShape::Segment { from, to } => {
                let d: Vec<f64> = to.iter().zip(from).map(|(a, b)| a - b).collect();
                let p: Vec<f64> = xi.iter().zip(from).map(|(a, b)| a - b).collect();
                let len2 = dot(&d, &d);
                let t = if len2 > 0.0 { (dot(&p, &d) / len2).clamp(0.0, 1.0) } else { 0.0 };
                let off: Vec<f64> = p.iter().zip(&d).map(|(a, b)| a - t * b).collect();
                norm(&off) <= tol
            }
            EnvelopeShape::HalfSpaces { directions, betas } => {
                directions.iter().zip(betas).all(|(w, b)| dot(xi, w) <= b + tol)
            }
        }
    }
}

/// Exact shapes where every factor's envelope is a point, a ball or a
/// segment and their Minkowski sum stays in that class; a sampled half-space
/// intersection otherwise.
pub fn envelope_set(g: &GrowthFunction, direction_count: usize) -> EnvelopeSet {
    let n = g.dim;
    let mut ball = 0.0;
    let mut segments: Vec<Vec<f64>> = Vec::new();
    for f in &g.factors {
        match f {
            Factor::StretchedExp { alpha, gamma } if *gamma == 1.0 && *alpha > 0.0 => ball += alpha,
            Factor::HalfExp { v } if v.iter().any(|c| *c != 0.0) => segments.push(v.clone()),
            _ => {}
        }
    }
    let shape = match (ball > 0.0, segments.len()) {
        (false, 0) => EnvelopeShape::PointOrigin,
        (true, 0) => EnvelopeShape::Ball { radius: ball },
        (false, 1) => EnvelopeShape::Segment {
            from: vec![0.0; n],
            to: segments.pop().unwrap(),
        },
        _ => {
            let directions = direction_set(n, direction_count);
            let betas = directions.iter().map(|w| g.beta(w)).collect();
            EnvelopeShape::HalfSpaces { directions, betas }
        }
    };
    EnvelopeSet {
        shape,
        tolerance: MEMBERSHIP_TOL,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub epsilon: f64,
    /// Smallest sample radius beyond which `g(rω) ≤ e^{(β+ε)r}` holds on the
    /// whole rest of the sample; `None` if the last sample already fails.
    pub r_epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeReport {
    pub beta: f64,
    pub lower_bound_holds: bool,
    /// Sample radii where `g(rω) < e^{β r}`.
    pub lower_bound_violations: Vec<f64>,
    pub upper_bounds: Vec<UpperBound>,
}

/// Checks `g(rω) ≥ e^{β(ω) r}` on the sample and locates where
/// `g(rω) ≤ e^{(β(ω)+ε) r}` takes over for `ε ∈ {0.1, 0.01}`.
pub fn envelope_bound_check(g: &GrowthFunction, omega: &[f64], r_samples: &[f64]) -> Result<EnvelopeReport> {
    check_unit(omega)?;
    check_dim(g.dim, omega.len())?;
    if r_samples.iter().any(|r| !(*r > 0.0)) {
        return Err(crate::Error::InvalidParameter("radius samples must be positive".into()));
    }
    let beta = g.beta(omega);
    let mut rs = r_samples.to_vec();
    rs.sort_by(f64::total_cmp);
    let ln_g = |r: f64| g.ln_value(&omega.iter().map(|c| c * r).collect::<Vec<_>>());
    let lower_bound_violations: Vec<f64> = rs
        .iter()
        .copied()
        .filter(|&r| ln_g(r) < beta * r - 1e-12 * (1.0 + beta * r))
        .collect();
    let upper_bounds = [0.1, 0.01]
        .iter()
        .map(|&eps| {
            let mut r_epsilon = None;
            for &r in rs.iter().rev() {
                if ln_g(r) <= (beta + eps) * r {
                    r_epsilon = Some(r);
                } else {
                    break;
                }
            }
            UpperBound { epsilon: eps, r_epsilon }
        })
        .collect();
    Ok(EnvelopeReport {
        beta,
        lower_bound_holds: lower_bound_violations.is_empty(),
        lower_bound_violations,
        upper_bounds,
    })
}
