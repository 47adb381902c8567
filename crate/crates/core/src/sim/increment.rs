use rand::Rng;
use rand_distr::{Distribution, Poisson, StandardNormal};
use serde::{Deserialize, Serialize};

use super::estimate::Manifest;
use super::rng::{replica_rng, SimRng};
use crate::error::{Error, Result};
use crate::levy::{LevyTriplet, RadialFamily, RadialKind};
use crate::linalg::{mat_vec, norm, psd_sqrt};

const MAX_REJECTIONS: usize = 1_000_000;

/// Radius sampler for one radial family on `(inner, outer)`.
#[derive(Debug, Clone)]
enum RadiusLaw {
    /// `ρ ∝ r^{-1-α}`: inverse CDF in closed form.
    Stable { alpha: f64, lo: f64, hi: f64 },
    /// `ρ ∝ r^{n-1} e^{-λr}`: inverse CDF by bisection on the closed-form mass.
    Exponential { family: RadialFamily, n: usize, total: f64 },
    /// Sample the source and project onto the first axis, rejecting outside
    /// the cutoffs.
    Projected {
        source: Box<JumpSource>,
        scale: f64,
        lo: f64,
        hi: f64,
    },
}

#[derive(Debug, Clone)]
struct JumpSource {
    dim: usize,
    law: RadiusLaw,
}

impl JumpSource {
    fn new(family: &RadialFamily, n: usize) -> Result<(Self, f64)> {
        if family.infinite_activity() {
            return Err(Error::TruncationRequired);
        }
        let lo = family.inner;
        let hi = family.outer.unwrap_or(f64::INFINITY);
        let rate = family.mass(n, lo, hi)?;
        let law = match &family.kind {
            RadialKind::StableLike { alpha, .. } => RadiusLaw::Stable { alpha: *alpha, lo, hi },
            RadialKind::TruncatedExponential { .. } => RadiusLaw::Exponential {
                family: family.clone(),
                n,
                total: rate,
            },
            RadialKind::Pushforward { source, source_dim, scale } => {
                // |w| ≤ scale |y|, so only source jumps beyond lo/scale can land
                // inside the cutoffs.
                let mut restricted = (**source).clone();
                restricted.inner = restricted.inner.max(lo / scale);
                if restricted.outer.is_some_and(|r| r <= restricted.inner) {
                    restricted.outer = None;
                }
                let (src, _) = JumpSource::new(&restricted, *source_dim)?;
                RadiusLaw::Projected {
                    source: Box::new(src),
                    scale: *scale,
                    lo,
                    hi,
                }
            }
        };
        Ok((Self { dim: n, law }, rate))
    }

    fn sample(&self, rng: &mut SimRng) -> Result<Vec<f64>> {
        match &self.law {
            RadiusLaw::Projected { source, scale, lo, hi } => {
                for _ in 0..MAX_REJECTIONS {
                    let w = scale * source.sample(rng)?[0];
                    if w.abs() > *lo && w.abs() < *hi {
                        return Ok(vec![w]);
                    }
                }
                Err(Error::Unsupported("pushforward jump sampler exceeded its rejection budget".into()))
            }
            _ => {
                let r = self.radius(rng)?;
                let dir = uniform_direction(self.dim, rng);
                Ok(dir.into_iter().map(|d| d * r).collect())
            }
        }
    }

    fn radius(&self, rng: &mut SimRng) -> Result<f64> {
        let u: f64 = rng.random();
        match &self.law {
            RadiusLaw::Stable { alpha, lo, hi } => {
                let a = lo.powf(-alpha);
                let b = if hi.is_finite() { hi.powf(-alpha) } else { 0.0 };
                Ok((a - u * (a - b)).powf(-1.0 / alpha))
            }
            RadiusLaw::Exponential { family, n, total } => {
                let target = u * total;
                let lo = family.inner;
                let mut hi = family.outer.unwrap_or(f64::INFINITY);
                if hi.is_infinite() {
                    hi = lo.max(1.0);
                    while family.mass(*n, lo, hi)? < target {
                        hi *= 2.0;
                    }
                }
                let (mut a, mut b) = (lo, hi);
                for _ in 0..200 {
                    let mid = 0.5 * (a + b);
                    if family.mass(*n, lo, mid)? < target {
                        a = mid;
                    } else {
                        b = mid;
                    }
                    if b - a <= 1e-14 * b {
                        break;
                    }
                }
                Ok(0.5 * (a + b))
            }
            RadiusLaw::Projected { .. } => unreachable!("projected sources sample whole jumps"),
        }
    }
}

fn uniform_direction(n: usize, rng: &mut SimRng) -> Vec<f64> {
    if n == 1 {
        return vec![if rng.random::<bool>() { 1.0 } else { -1.0 }];
    }
    loop {
        let v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let r = norm(&v);
        if r > 1e-12 {
            return v.into_iter().map(|x| x / r).collect();
        }
    }
}

/// Precomputed sampler for `X_t` under a triplet: drift, Gaussian factor and
/// compound-Poisson jump sources.
#[derive(Debug, Clone)]
pub struct IncrementSampler {
    dim: usize,
    /// `b - ∫_{|y|<1} y ν(dy)`; radial families are symmetric and drop out.
    b_eff: Vec<f64>,
    sqrt_q: Option<Vec<Vec<f64>>>,
    atoms: Vec<(Vec<f64>, f64)>,
    families: Vec<(JumpSource, f64)>,
    total_rate: f64,
    epsilon: Vec<f64>,
}

impl IncrementSampler {
    /// Fails with [`Error::TruncationRequired`] when a radial family has
    /// infinitely many small jumps; set its `inner` cutoff first.
    pub fn new(triplet: &LevyTriplet) -> Result<Self> {
        triplet.validate()?;
        let n = triplet.dim();
        let mut b_eff = triplet.b.clone();
        let mut atoms = Vec::new();
        for atom in &triplet.nu.atoms {
            if norm(&atom.position) < 1.0 {
                for (b, y) in b_eff.iter_mut().zip(&atom.position) {
                    *b -= atom.mass * y;
                }
            }
            atoms.push((atom.position.clone(), atom.mass));
        }
        let mut families = Vec::new();
        for family in &triplet.nu.radial {
            let (src, rate) = JumpSource::new(family, n)?;
            if rate > 0.0 {
                families.push((src, rate));
            }
        }
        let total_rate = atoms.iter().map(|a| a.1).sum::<f64>() + families.iter().map(|f| f.1).sum::<f64>();
        Ok(Self {
            dim: n,
            b_eff,
            sqrt_q: triplet.has_gaussian_part().then(|| psd_sqrt(&triplet.q)),
            atoms,
            families,
            total_rate,
            epsilon: triplet.nu.radial.iter().map(|f| f.inner).collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Expected number of jumps per unit time.
    pub fn jump_rate(&self) -> f64 {
        self.total_rate
    }

    pub fn epsilon(&self) -> &[f64] {
        &self.epsilon
    }

    pub fn is_gaussian_free(&self) -> bool {
        self.sqrt_q.is_none()
    }

    pub fn sample(&self, t: f64, rng: &mut SimRng) -> Result<Vec<f64>> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("time {t} must be positive")));
        }
        let mut x: Vec<f64> = self.b_eff.iter().map(|b| b * t).collect();
        if let Some(l) = &self.sqrt_q {
            let z: Vec<f64> = (0..self.dim).map(|_| rng.sample::<f64, _>(StandardNormal) * t.sqrt()).collect();
            for (xi, gi) in x.iter_mut().zip(mat_vec(l, &z)) {
                *xi += gi;
            }
        }
        if self.total_rate > 0.0 {
            let count = Poisson::new(self.total_rate * t)
                .map_err(|e| Error::InvalidParameter(format!("jump intensity: {e}")))?
                .sample(rng) as u64;
            for _ in 0..count {
                let jump = self.sample_jump(rng)?;
                for (xi, j) in x.iter_mut().zip(jump) {
                    *xi += j;
                }
            }
        }
        Ok(x)
    }

    fn sample_jump(&self, rng: &mut SimRng) -> Result<Vec<f64>> {
        let mut u = rng.random::<f64>() * self.total_rate;
        for (pos, mass) in &self.atoms {
            if u < *mass {
                return Ok(pos.clone());
            }
            u -= mass;
        }
        for (src, rate) in &self.families {
            if u < *rate {
                return src.sample(rng);
            }
            u -= rate;
        }
        // Roundoff at the top of the last bin.
        match self.families.last() {
            Some((src, _)) => src.sample(rng),
            None => Ok(self.atoms.last().expect("positive rate has a source").0.clone()),
        }
    }
}

/// `X_t` for one draw; builds the sampler each call, so prefer
/// [`IncrementSampler`] inside loops.
pub fn sample_increment(triplet: &LevyTriplet, t: f64, rng: &mut SimRng) -> Result<Vec<f64>> {
    IncrementSampler::new(triplet)?.sample(t, rng)
}

/// A discretely observed path `t ↦ x + X_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathSample {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub manifest: Manifest,
}

impl PathSample {
    pub fn write_csv<W: std::io::Write>(&self, mut out: W) -> std::io::Result<()> {
        let dim = self.states.first().map_or(0, Vec::len);
        let cols: Vec<String> = (0..dim).map(|i| format!("x{i}")).collect();
        writeln!(out, "# columns: t,{}", cols.join(","))?;
        writeln!(
            out,
            "# seed={} step={} epsilon={:?}",
            self.manifest.seed,
            self.manifest.step.unwrap_or(0.0),
            self.manifest.epsilon
        )?;
        for (t, x) in self.times.iter().zip(&self.states) {
            let vals: Vec<String> = x.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(out, "{t:.17e},{}", vals.join(","))?;
        }
        Ok(())
    }
}

/// Path on the grid `0, h, 2h, …, horizon` (the last step may be shorter).
pub fn sample_path(triplet: &LevyTriplet, start: &[f64], horizon: f64, step: f64, seed: u64) -> Result<PathSample> {
    crate::error::check_dim(triplet.dim(), start.len())?;
    if !(step > 0.0 && horizon > 0.0) {
        return Err(Error::InvalidParameter("step and horizon must be positive".into()));
    }
    let sampler = IncrementSampler::new(triplet)?;
    let mut rng = replica_rng(seed, 0);
    let steps = (horizon / step - 1e-9).ceil() as usize;
    let mut times = vec![0.0];
    let mut states = vec![start.to_vec()];
    for k in 1..=steps {
        let t = (k as f64 * step).min(horizon);
        let dt = t - times[k - 1];
        let inc = sampler.sample(dt, &mut rng)?;
        let next = states[k - 1].iter().zip(inc).map(|(a, b)| a + b).collect();
        times.push(t);
        states.push(next);
    }
    Ok(PathSample {
        times,
        states,
        manifest: Manifest {
            seed,
            samples: 1,
            step: Some(step),
            epsilon: sampler.epsilon().to_vec(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{JumpMeasure, RadialFamily};

    #[test]
    fn infinite_activity_needs_truncation() {
        let t = LevyTriplet::pure_jump(JumpMeasure::zero().with_radial(RadialFamily::stable_like(1.0, 1.5)), 1);
        assert!(matches!(IncrementSampler::new(&t), Err(Error::TruncationRequired)));
        let t = LevyTriplet::pure_jump(
            JumpMeasure::zero().with_radial(RadialFamily::stable_like(1.0, 1.5).with_cutoffs(0.1, None)),
            1,
        );
        assert!(IncrementSampler::new(&t).is_ok());
    }

    #[test]
    fn small_atoms_are_compensated() {
        let t = LevyTriplet::pure_jump(JumpMeasure::dirac(vec![0.5], 2.0), 1);
        let s = IncrementSampler::new(&t).unwrap();
        assert_eq!(s.b_eff, vec![-1.0]);
        assert_eq!(s.jump_rate(), 2.0);
    }

    #[test]
    fn drift_only_is_deterministic() {
        let t = LevyTriplet::drift(vec![1.0, -2.0]);
        let mut rng = replica_rng(1, 0);
        assert_eq!(sample_increment(&t, 0.5, &mut rng).unwrap(), vec![0.5, -1.0]);
    }

    #[test]
    fn stable_radii_respect_cutoffs() {
        let fam = RadialFamily::stable_like(1.0, 0.8).with_cutoffs(0.2, Some(3.0));
        let (src, _) = JumpSource::new(&fam, 2).unwrap();
        let mut rng = replica_rng(3, 0);
        for _ in 0..1000 {
            let r = norm(&src.sample(&mut rng).unwrap());
            assert!(r > 0.2 - 1e-12 && r < 3.0 + 1e-12);
        }
    }

    #[test]
    fn exponential_radius_median() {
        // n = 1: radius ~ Exp(λ), median ln 2 / λ.
        let fam = RadialFamily::truncated_exponential(1.0, 2.0);
        let (src, _) = JumpSource::new(&fam, 1).unwrap();
        let mut rng = replica_rng(5, 0);
        let mut r: Vec<f64> = (0..4001).map(|_| src.radius(&mut rng).unwrap()).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[2000] - 2f64.ln() / 2.0).abs() < 0.03);
    }

    #[test]
    fn paths_start_at_origin_and_reproduce() {
        let t = LevyTriplet::brownian(2);
        let p = sample_path(&t, &[1.0, 2.0], 1.0, 0.3, 9).unwrap();
        assert_eq!(p.states[0], vec![1.0, 2.0]);
        assert_eq!(p.times.len(), 5);
        assert!((p.times[4] - 1.0).abs() < 1e-15);
        assert!(p.times.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(p, sample_path(&t, &[1.0, 2.0], 1.0, 0.3, 9).unwrap());
    }
}
