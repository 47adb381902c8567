use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::estimate::{Comparison, Manifest, McEstimate};
use super::increment::IncrementSampler;
use super::rng::{run_replicas, try_run_replicas, SimRng};
use crate::error::{check_dim, Error, Result};
use crate::levy::{evaluate_exponent, subordinate_symbol, BernsteinSpec, LevyTriplet, Symbol};
use crate::linalg::dot;

pub const MIN_SAMPLES: usize = 1000;

fn check_samples(m: usize) -> Result<()> {
    if m < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!("at least {MIN_SAMPLES} samples required, got {m}")));
    }
    Ok(())
}

/// One-half-stable subordinator with Laplace exponent `√x`:
/// `S_t = t² / (2Z²)`, so `E e^{-uS_t} = e^{-t√u}`.
pub fn sample_stable_subordinator(t: f64, rng: &mut SimRng) -> f64 {
    loop {
        let z: f64 = rng.sample(StandardNormal);
        if z != 0.0 {
            return t * t / (2.0 * z * z);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharReport {
    pub t: f64,
    pub xi: Vec<f64>,
    #[serde(flatten)]
    pub comparison: Comparison,
    pub manifest: Manifest,
}

/// Mean of `e^{iξ·X_t}` over `m` draws, against `e^{-tψ(ξ)}`.
pub fn empirical_char(triplet: &LevyTriplet, t: f64, xi: &[f64], m: usize, seed: u64) -> Result<CharReport> {
    check_dim(triplet.dim(), xi.len())?;
    check_samples(m)?;
    let sampler = IncrementSampler::new(triplet)?;
    let values = try_run_replicas(m, seed, |rng| {
        sampler.sample(t, rng).map(|x| Complex64::from_polar(1.0, dot(xi, &x)))
    })?;
    let reference = (-evaluate_exponent(triplet, xi)? * t).exp();
    Ok(CharReport {
        t,
        xi: xi.to_vec(),
        comparison: Comparison::new(McEstimate::from_complex(&values, seed), reference),
        manifest: Manifest {
            seed,
            samples: m,
            step: None,
            epsilon: sampler.epsilon().to_vec(),
        },
    })
}

/// `E e^{-u S_t}` against `e^{-t√u}`.
pub fn subordinator_laplace(t: f64, u: f64, m: usize, seed: u64) -> Result<Comparison> {
    check_samples(m)?;
    if !(t > 0.0 && u >= 0.0) {
        return Err(Error::InvalidParameter(format!("need t > 0 and u >= 0, got t={t}, u={u}")));
    }
    let values = run_replicas(m, seed, |rng| (-u * sample_stable_subordinator(t, rng)).exp());
    Ok(Comparison::new(
        McEstimate::from_real(&values, seed),
        Complex64::new((-t * u.sqrt()).exp(), 0.0),
    ))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubordinatedCharReport {
    pub t: f64,
    pub tau: f64,
    pub xi: Vec<f64>,
    #[serde(flatten)]
    pub comparison: Comparison,
    pub manifest: Manifest,
}

/// `E e^{i(τ S_t + ξ·X_{S_t})}` against `e^{-t√(-iτ + ψ(ξ))}`.
pub fn subordinated_char(
    triplet: &LevyTriplet,
    t: f64,
    tau: f64,
    xi: &[f64],
    m: usize,
    seed: u64,
) -> Result<SubordinatedCharReport> {
    check_dim(triplet.dim(), xi.len())?;
    check_samples(m)?;
    let sampler = IncrementSampler::new(triplet)?;
    let values = try_run_replicas(m, seed, |rng| {
        let s = sample_stable_subordinator(t, rng);
        sampler.sample(s, rng).map(|x| Complex64::from_polar(1.0, tau * s + dot(xi, &x)))
    })?;
    let exponent = subordinate_symbol(BernsteinSpec::SquareRoot, &Symbol::Triplet(triplet.clone()), tau, xi)?;
    Ok(SubordinatedCharReport {
        t,
        tau,
        xi: xi.to_vec(),
        comparison: Comparison::new(McEstimate::from_complex(&values, seed), (-exponent * t).exp()),
        manifest: Manifest {
            seed,
            samples: m,
            step: None,
            epsilon: sampler.epsilon().to_vec(),
        },
    })
}

/// Sample correlation of `X_s` and `X_{s+h} - X_s` (first coordinate).
pub fn increment_correlation(triplet: &LevyTriplet, s: f64, h: f64, m: usize, seed: u64) -> Result<f64> {
    check_samples(m)?;
    let sampler = IncrementSampler::new(triplet)?;
    let pairs = try_run_replicas(m, seed, |rng| -> Result<(f64, f64)> {
        Ok((sampler.sample(s, rng)?[0], sampler.sample(h, rng)?[0]))
    })?;
    let mf = m as f64;
    let (ma, mb) = pairs.iter().fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1));
    let (ma, mb) = (ma / mf, mb / mf);
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for (a, b) in &pairs {
        sab += (a - ma) * (b - mb);
        saa += (a - ma) * (a - ma);
        sbb += (b - mb) * (b - mb);
    }
    Ok(if saa > 0.0 && sbb > 0.0 { sab / (saa * sbb).sqrt() } else { 0.0 })
}

/// Kolmogorov–Smirnov distance between two samples.
pub fn ks_distance(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::JumpMeasure;
    use crate::sim::rng::derive_seed;

    #[test]
    fn brownian_char() {
        let r = empirical_char(&LevyTriplet::brownian(1), 1.0, &[1.0], 20_000, 1).unwrap();
        assert!((r.comparison.reference.re - (-0.5f64).exp()).abs() < 1e-15);
        assert!(r.comparison.within(4.0), "{r:?}");
    }

    #[test]
    fn drift_char_is_pure_phase() {
        let r = empirical_char(&LevyTriplet::drift(vec![1.0]), 2.0, &[1.0], 1000, 1).unwrap();
        assert!((r.comparison.reference - Complex64::from_polar(1.0, 2.0)).norm() < 1e-15);
        assert_eq!(r.comparison.deviation_sigma, 0.0);
    }

    #[test]
    fn poisson_mean() {
        let s = IncrementSampler::new(&LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1)).unwrap();
        let xs = run_replicas(20_000, 4, |rng| s.sample(1.0, rng).unwrap()[0]);
        let e = McEstimate::from_real(&xs, 4);
        assert!(e.deviation_sigma(Complex64::new(1.0, 0.0)) < 4.0);
    }

    #[test]
    fn subordinator_cdf_at_one() {
        // P(t²/(2Z²) ≤ 1) = P(|Z| ≥ 1/√2) = erfc(1/2).
        let m = 40_000;
        let hits = run_replicas(m, 11, |rng| f64::from(u8::from(sample_stable_subordinator(1.0, rng) <= 1.0)));
        let e = McEstimate::from_real(&hits, 11);
        assert!(e.deviation_sigma(Complex64::new(libm::erfc(0.5), 0.0)) < 4.0, "{e:?}");
    }

    #[test]
    fn subordinator_scaling() {
        let a = run_replicas(20_000, derive_seed(2, 0), |rng| sample_stable_subordinator(1.5, rng));
        let b = run_replicas(20_000, derive_seed(2, 1), |rng| 2.25 * sample_stable_subordinator(1.0, rng));
        assert!(ks_distance(&a, &b) < 0.02);
    }

    #[test]
    fn laplace_gate() {
        for (k, u) in [0.5, 1.0, 2.0].into_iter().enumerate() {
            let c = subordinator_laplace(1.0, u, 20_000, k as u64).unwrap();
            assert!(c.within(4.0), "u={u}: {c:?}");
        }
    }

    #[test]
    fn sample_floor() {
        assert!(empirical_char(&LevyTriplet::brownian(1), 1.0, &[1.0], 10, 1).is_err());
    }
}
