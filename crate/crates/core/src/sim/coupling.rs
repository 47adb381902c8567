use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::estimate::Manifest;
use super::increment::IncrementSampler;
use super::rng::{run_replicas, try_run_replicas};
use crate::error::{check_dim, Error, Result};
use crate::levy::LevyTriplet;
use crate::linalg::{dot, norm};

/// Empirical law of the coupling time of the mirror coupling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingCdf {
    pub x: f64,
    pub y: f64,
    pub times: Vec<f64>,
    /// `P(τ ≤ t)` at each time.
    pub cdf: Vec<f64>,
    pub std_error: Vec<f64>,
    /// Reflection-principle law `2(1 - Φ(|x-y| / (2√(Qt))))`.
    pub analytic: Vec<f64>,
    pub manifest: Manifest,
}

impl CouplingCdf {
    /// Value at the last grid time `≤ t`.
    pub fn at(&self, t: f64) -> Option<(f64, f64)> {
        let i = self.times.iter().rposition(|s| *s <= t + 1e-12)?;
        Some((self.cdf[i], self.std_error[i]))
    }
}

/// `2(1 - Φ(d / (2√(Qt))))`.
pub fn reflection_first_passage(distance: f64, q: f64, t: f64) -> f64 {
    if distance == 0.0 {
        return 1.0;
    }
    libm::erfc(distance.abs() / (2.0 * (2.0 * q * t).sqrt()))
}

/// Runs `X` from `x` and its mirror image about `(x+y)/2` from `y`. The
/// difference `D = (x-y) + 2√Q B` is simulated exactly on the step grid and a
/// crossing inside a step is detected with the Brownian-bridge probability
/// `exp(-2 D_k D_{k+1} / (4Q h))`.
pub fn reflection_coupling(
    triplet: &LevyTriplet,
    x: f64,
    y: f64,
    horizon: f64,
    step: f64,
    m: usize,
    seed: u64,
) -> Result<CouplingCdf> {
    if triplet.dim() != 1 {
        return Err(Error::Unsupported("reflection coupling is implemented on the line".into()));
    }
    let q = triplet.q[0][0];
    if !(q > 0.0) || !triplet.nu.is_zero() {
        return Err(Error::Unsupported(
            "reflection coupling needs Q > 0 and no jumps; use lattice_coupling_demo for pure-jump cases".into(),
        ));
    }
    if !(step > 0.0 && horizon >= step) || m == 0 {
        return Err(Error::InvalidParameter("need 0 < step <= horizon and m > 0".into()));
    }
    let steps = (horizon / step).round() as usize;
    let sigma = 2.0 * (q * step).sqrt();
    let d0 = x - y;
    // Index of the step in which the paths meet; 0 means at time 0.
    let hit = run_replicas(m, seed, |rng| -> Option<usize> {
        if d0 == 0.0 {
            return Some(0);
        }
        let mut d = d0;
        for k in 1..=steps {
            let next = d + sigma * rng.sample::<f64, _>(StandardNormal);
            if next * d <= 0.0 {
                return Some(k);
            }
            let p = (-2.0 * d * next / (sigma * sigma)).exp();
            if rng.random::<f64>() < p {
                return Some(k);
            }
            d = next;
        }
        None
    });
    let mut counts = vec![0usize; steps + 1];
    for k in hit.into_iter().flatten() {
        counts[k] += 1;
    }
    let mf = m as f64;
    let mut times = Vec::with_capacity(steps + 1);
    let mut cdf = Vec::with_capacity(steps + 1);
    let mut std_error = Vec::with_capacity(steps + 1);
    let mut analytic = Vec::with_capacity(steps + 1);
    let mut acc = 0usize;
    for (k, c) in counts.iter().enumerate() {
        acc += c;
        let t = k as f64 * step;
        let p = acc as f64 / mf;
        times.push(t);
        cdf.push(p);
        std_error.push((p * (1.0 - p) / mf).sqrt());
        analytic.push(if k == 0 {
            f64::from(u8::from(d0 == 0.0))
        } else {
            reflection_first_passage(d0, q, t)
        });
    }
    Ok(CouplingCdf {
        x,
        y,
        times,
        cdf,
        std_error,
        analytic,
        manifest: Manifest {
            seed,
            samples: m,
            step: Some(step),
            epsilon: Vec::new(),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeDemoReport {
    pub base_vector: Vec<f64>,
    /// `dist(x - y, ℤ·base)`.
    pub lattice_distance: f64,
    /// Smallest `|X_t - Y_t|` over all paths and grid times.
    pub min_distance: f64,
    pub never_met: bool,
    pub horizon: f64,
    pub manifest: Manifest,
}

fn float_gcd(mut a: f64, mut b: f64, tol: f64) -> f64 {
    while b > tol {
        let r = a % b;
        a = b;
        b = if r > b - tol { 0.0 } else { r };
    }
    a
}

/// `v` such that every atom is an integer multiple of `v`, if one exists.
pub fn lattice_base(triplet: &LevyTriplet) -> Option<Vec<f64>> {
    let atoms = &triplet.nu.atoms;
    let first = atoms.first()?;
    let r0 = norm(&first.position);
    let u: Vec<f64> = first.position.iter().map(|v| v / r0).collect();
    let scale = atoms.iter().map(|a| norm(&a.position)).fold(0.0, f64::max);
    let tol = 1e-9 * scale;
    let mut g = 0.0;
    for a in atoms {
        let c = dot(&a.position, &u);
        let off: f64 = a.position.iter().zip(&u).map(|(p, e)| (p - c * e).powi(2)).sum::<f64>().sqrt();
        if off > tol {
            return None;
        }
        g = if g == 0.0 { c.abs() } else { float_gcd(g.max(c.abs()), g.min(c.abs()), tol) };
    }
    (g > 1e-6 * scale).then(|| u.iter().map(|e| e * g).collect())
}

/// Pure-jump processes on a lattice started from points whose difference is
/// off the lattice never meet: `X_t - Y_t ∈ (x - y) + ℤ·base`.
pub fn lattice_coupling_demo(
    triplet: &LevyTriplet,
    x: &[f64],
    y: &[f64],
    horizon: f64,
    step: f64,
    m: usize,
    seed: u64,
) -> Result<LatticeDemoReport> {
    let n = triplet.dim();
    check_dim(n, x.len())?;
    check_dim(n, y.len())?;
    if triplet.has_gaussian_part() || !triplet.nu.radial.is_empty() {
        return Err(Error::Precondition("lattice demo needs an atomic jump measure and Q = 0".into()));
    }
    let base = lattice_base(triplet).ok_or_else(|| Error::Precondition("atoms do not lie on a common lattice".into()))?;
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let k = (dot(&d, &base) / dot(&base, &base)).round();
    let lattice_distance = norm(&d.iter().zip(&base).map(|(a, b)| a - k * b).collect::<Vec<_>>());
    if lattice_distance < 1e-9 {
        return Err(Error::Precondition(
            "x - y lies in the jump lattice; the processes can meet and the demo is vacuous".into(),
        ));
    }
    if !(step > 0.0 && horizon > 0.0) || m == 0 {
        return Err(Error::InvalidParameter("need positive step, horizon and sample count".into()));
    }
    let sampler = IncrementSampler::new(triplet)?;
    let steps = (horizon / step).ceil() as usize;
    let mins = try_run_replicas(m, seed, |rng| -> Result<f64> {
        let mut a = x.to_vec();
        let mut b = y.to_vec();
        let mut best = norm(&d);
        for _ in 0..steps {
            for (v, dv) in a.iter_mut().zip(sampler.sample(step, rng)?) {
                *v += dv;
            }
            for (v, dv) in b.iter_mut().zip(sampler.sample(step, rng)?) {
                *v += dv;
            }
            let gap: Vec<f64> = a.iter().zip(&b).map(|(p, q)| p - q).collect();
            best = best.min(norm(&gap));
        }
        Ok(best)
    })?;
    let min_distance = mins.into_iter().fold(f64::INFINITY, f64::min);
    Ok(LatticeDemoReport {
        base_vector: base,
        lattice_distance,
        min_distance,
        never_met: min_distance >= lattice_distance - 1e-9,
        horizon,
        manifest: Manifest {
            seed,
            samples: m,
            step: Some(step),
            epsilon: Vec::new(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{Atom, JumpMeasure};

    #[test]
    fn mirror_coupling_matches_reflection_principle() {
        let r = reflection_coupling(&LevyTriplet::brownian(1), 1.0, -1.0, 1.0, 0.05, 20_000, 5).unwrap();
        let (p, se) = r.at(1.0).unwrap();
        assert!((reflection_first_passage(2.0, 1.0, 1.0) - 0.317_310_507_862_914).abs() < 1e-12);
        assert!((p - 0.317_310_507_862_914).abs() < 4.0 * se, "{p} ± {se}");
        assert!(r.cdf.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn equal_starts_meet_immediately() {
        let r = reflection_coupling(&LevyTriplet::brownian(1), 0.3, 0.3, 1.0, 0.1, 1000, 1).unwrap();
        assert!(r.cdf.iter().all(|p| *p == 1.0));
    }

    #[test]
    fn jumps_are_rejected() {
        let t = LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1);
        assert!(matches!(reflection_coupling(&t, 0.0, 1.0, 1.0, 0.1, 100, 1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn lattice_inference() {
        let t = LevyTriplet::pure_jump(
            JumpMeasure::from_atoms(vec![Atom::new(vec![2.0], 1.0), Atom::new(vec![-3.0], 0.5)]),
            1,
        );
        assert!((lattice_base(&t).unwrap()[0].abs() - 1.0).abs() < 1e-9);
        let t = LevyTriplet::pure_jump(
            JumpMeasure::from_atoms(vec![Atom::new(vec![1.0], 1.0), Atom::new(vec![std::f64::consts::SQRT_2], 1.0)]),
            1,
        );
        assert!(lattice_base(&t).is_none());
    }

    #[test]
    fn lattice_paths_never_meet() {
        let t = LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1);
        let r = lattice_coupling_demo(&t, &[0.5], &[0.0], 5.0, 0.5, 2000, 2).unwrap();
        assert!(r.never_met && r.min_distance >= 0.5 - 1e-12, "{r:?}");
        let sym = LevyTriplet::pure_jump(
            JumpMeasure::from_atoms(vec![Atom::new(vec![1.0], 1.0), Atom::new(vec![-1.0], 1.0)]),
            1,
        );
        let r = lattice_coupling_demo(&sym, &[0.25], &[0.0], 5.0, 0.5, 2000, 2).unwrap();
        assert!(r.never_met && (r.lattice_distance - 0.25).abs() < 1e-12);
        assert!(matches!(lattice_coupling_demo(&t, &[1.0], &[0.0], 1.0, 0.5, 10, 1), Err(Error::Precondition(_))));
    }
}
