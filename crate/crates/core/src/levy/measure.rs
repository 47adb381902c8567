//! Jump measures: finite atomic parts plus named radially symmetric families.
//!
//! Radial families are integrated in polar coordinates. Because they are
//! symmetric, only spherical averages of the integrands matter:
//! `A_n(u)` is the average of `e^{iuω₁}` over the unit sphere and `B_n(u)` the
//! average of `e^{uω₁}`. Both depend on the dimension only through the moments
//! `E[ω₁^{2j}]`, so dimensions 1 to 3 are supported for radial families.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::norm;
use crate::quadrature::{integrate, integrate_oscillatory, integrate_to_infinity, Tolerance};

/// A point mass of the jump measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub position: Vec<f64>,
    pub mass: f64,
}

impl Atom {
    pub fn new(position: Vec<f64>, mass: f64) -> Self {
        Self { position, mass }
    }
}

/// Parametric radial density, `ν(dy) = ρ(|y|) dy` restricted to `inner < |y| < outer`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RadialKind {
    /// `c |y|^{-n-α}`, `α ∈ (0, 2)`.
    StableLike { c: f64, alpha: f64 },
    /// `c e^{-rate |y|}`.
    TruncatedExponential { c: f64, rate: f64 },
    /// One-dimensional image of an `n`-dimensional radial family under
    /// `y ↦ x·y` with `|x| = scale`. Produced by triplet projection.
    Pushforward {
        source: Box<RadialFamily>,
        source_dim: usize,
        scale: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialFamily {
    #[serde(flatten)]
    pub kind: RadialKind,
    /// Inner cutoff `ε ≥ 0`.
    #[serde(default)]
    pub inner: f64,
    /// Outer cutoff `R`; `None` means unbounded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer: Option<f64>,
}

/// Tail behaviour of a family on `|y| → ∞`, used to decide moment finiteness
/// analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Tail {
    Compact,
    Power { alpha: f64 },
    Exponential { rate: f64 },
}

pub(crate) const RADIAL_TOL: Tolerance = Tolerance::new(1e-11, 1e-15);
const INNER_TOL: Tolerance = Tolerance::new(1e-12, 1e-16);

/// Surface area of the unit sphere in `ℝⁿ` (counting measure `2` for `n = 1`).
pub(crate) fn sphere_area(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => 2.0 * std::f64::consts::PI,
        3 => 4.0 * std::f64::consts::PI,
        _ => unreachable!("radial families are validated to n <= 3"),
    }
}

/// `E[ω₁^{2j}]` for `ω` uniform on the sphere.
fn sphere_moment(n: usize, j: usize) -> f64 {
    match n {
        1 => 1.0,
        2 => {
            // C(2j, j) / 4^j
            let mut v = 1.0;
            for k in 1..=j {
                v *= (j + k) as f64 / (4.0 * k as f64);
            }
            v
        }
        3 => 1.0 / (2 * j + 1) as f64,
        _ => unreachable!(),
    }
}

/// `A_n(u)`: spherical average of `e^{iuω₁}`.
fn avg_oscillatory(n: usize, u: f64) -> f64 {
    match n {
        1 => u.cos(),
        2 => libm::j0(u),
        3 => {
            if u.abs() < 1e-4 {
                1.0 - u * u / 6.0 + u.powi(4) / 120.0
            } else {
                u.sin() / u
            }
        }
        _ => unreachable!(),
    }
}

/// `B_n(u)`: spherical average of `e^{uω₁}`.
fn avg_exponential(n: usize, u: f64) -> f64 {
    match n {
        1 => u.cosh(),
        2 => bessel_i0(u),
        3 => {
            if u.abs() < 1e-4 {
                1.0 + u * u / 6.0 + u.powi(4) / 120.0
            } else {
                u.sinh() / u
            }
        }
        _ => unreachable!(),
    }
}

fn bessel_i0(u: f64) -> f64 {
    let q = 0.25 * u * u;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 1.0;
    while term > 1e-17 * sum {
        term *= q / (k * k);
        sum += term;
        k += 1.0;
        if k > 4000.0 {
            break;
        }
    }
    sum
}

/// Coefficient `(-1)^{j+1} E[ω₁^{2j}] / (2j)!` of `u^{2j}` in `1 - A_n(u)`.
fn osc_coeff(n: usize, j: usize) -> f64 {
    let mut fact = 1.0;
    for k in 1..=2 * j {
        fact *= k as f64;
    }
    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
    sign * sphere_moment(n, j) / fact
}

/// Spherical average of the compensated integrand
/// `1 - e^{iuω₁} + Σ_{k=1}^{2s-1} (iuω₁)^k / k!`. Odd terms average out; the
/// result is the tail `Σ_{j≥s}` of the even Taylor series.
pub(crate) fn compensated_avg(n: usize, order: usize, u: f64) -> f64 {
    let u = u.abs();
    if u < 2.0 {
        let u2 = u * u;
        let mut sum = 0.0;
        let mut pow = u2.powi(order as i32);
        for j in order..order + 40 {
            let term = osc_coeff(n, j) * pow;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
            pow *= u2;
        }
        sum
    } else {
        let mut v = 1.0 - avg_oscillatory(n, u);
        let u2 = u * u;
        let mut pow = u2;
        for j in 1..order {
            // subtract the j-th even Taylor term of 1 - A_n
            v -= osc_coeff(n, j) * pow;
            pow *= u2;
        }
        v
    }
}

/// Spherical average of `1 - e^{uω₁} + uω₁` (compensated, order 1).
fn compensated_ext_avg(n: usize, u: f64) -> f64 {
    let u = u.abs();
    if u < 2.0 {
        let u2 = u * u;
        let mut sum = 0.0;
        let mut pow = u2;
        for j in 1..60 {
            let term = -osc_coeff(n, j).abs() * pow;
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
            pow *= u2;
        }
        sum
    } else {
        1.0 - avg_exponential(n, u)
    }
}

impl RadialFamily {
    pub fn stable_like(c: f64, alpha: f64) -> Self {
        Self {
            kind: RadialKind::StableLike { c, alpha },
            inner: 0.0,
            outer: None,
        }
    }

    pub fn truncated_exponential(c: f64, rate: f64) -> Self {
        Self {
            kind: RadialKind::TruncatedExponential { c, rate },
            inner: 0.0,
            outer: None,
        }
    }

    pub fn with_cutoffs(mut self, inner: f64, outer: Option<f64>) -> Self {
        self.inner = inner;
        self.outer = outer;
        self
    }

    pub(crate) fn hi(&self) -> f64 {
        self.outer.unwrap_or(f64::INFINITY)
    }

    pub(crate) fn validate(&self, n: usize) -> Result<()> {
        if !(1..=3).contains(&n) {
            return Err(Error::InvalidMeasure(format!(
                "radial families are supported in dimensions 1 to 3, got {n}"
            )));
        }
        if !(self.inner >= 0.0 && self.inner.is_finite()) {
            return Err(Error::InvalidMeasure(format!("inner cutoff {} must be finite and >= 0", self.inner)));
        }
        if let Some(r) = self.outer {
            if !(r > self.inner) {
                return Err(Error::InvalidMeasure(format!(
                    "outer cutoff {r} must exceed inner cutoff {}",
                    self.inner
                )));
            }
        }
        match &self.kind {
            RadialKind::StableLike { c, alpha } => {
                if !(*c > 0.0 && c.is_finite()) {
                    return Err(Error::InvalidMeasure(format!("stable-like constant {c} must be positive")));
                }
                if !(*alpha > 0.0 && *alpha < 2.0) {
                    return Err(Error::InvalidMeasure(format!("stable index {alpha} must lie in (0, 2)")));
                }
            }
            RadialKind::TruncatedExponential { c, rate } => {
                if !(*c > 0.0 && c.is_finite() && *rate > 0.0 && rate.is_finite()) {
                    return Err(Error::InvalidMeasure(format!(
                        "truncated-exponential needs c > 0 and rate > 0, got c={c}, rate={rate}"
                    )));
                }
            }
            RadialKind::Pushforward { source, source_dim, scale } => {
                if n != 1 {
                    return Err(Error::InvalidMeasure("pushforward families live in dimension 1".into()));
                }
                if !(*scale > 0.0) {
                    return Err(Error::InvalidMeasure("pushforward scale must be positive".into()));
                }
                source.validate(*source_dim)?;
            }
        }
        Ok(())
    }

    /// True when the family has infinitely many small jumps (`ν(ε<|y|<1) = ∞`).
    pub fn infinite_activity(&self) -> bool {
        match &self.kind {
            RadialKind::StableLike { .. } => self.inner == 0.0,
            RadialKind::TruncatedExponential { .. } => false,
            RadialKind::Pushforward { source, .. } => source.infinite_activity(),
        }
    }

    /// Density `ρ(r)` with respect to Lebesgue measure in `ℝⁿ`, ignoring cutoffs.
    fn density(&self, n: usize, r: f64) -> Result<f64> {
        Ok(match &self.kind {
            RadialKind::StableLike { c, alpha } => c * r.powf(-(n as f64) - alpha),
            RadialKind::TruncatedExponential { c, rate } => c * (-rate * r).exp(),
            RadialKind::Pushforward { source, source_dim, scale } => {
                pushforward_density(source, *source_dim, *scale, r)?
            }
        })
    }

    /// Radial mass density `S_{n-1} r^{n-1} ρ(r)` inside the cutoffs.
    pub(crate) fn profile(&self, n: usize, r: f64) -> Result<f64> {
        if r <= self.inner || r >= self.hi() || r <= 0.0 {
            return Ok(0.0);
        }
        Ok(sphere_area(n) * r.powi(n as i32 - 1) * self.density(n, r)?)
    }

    pub(crate) fn tail(&self) -> Tail {
        if self.outer.is_some() {
            return Tail::Compact;
        }
        match &self.kind {
            RadialKind::StableLike { alpha, .. } => Tail::Power { alpha: *alpha },
            RadialKind::TruncatedExponential { rate, .. } => Tail::Exponential { rate: *rate },
            RadialKind::Pushforward { source, scale, .. } => match source.tail() {
                Tail::Compact => Tail::Compact,
                Tail::Power { alpha } => Tail::Power { alpha },
                Tail::Exponential { rate } => Tail::Exponential { rate: rate / scale },
            },
        }
    }

    /// `ν(a < |y| < b)` intersected with the support.
    pub fn mass(&self, n: usize, a: f64, b: f64) -> Result<f64> {
        let lo = a.max(self.inner);
        let hi = b.min(self.hi());
        if hi <= lo {
            return Ok(0.0);
        }
        match &self.kind {
            RadialKind::StableLike { c, alpha } => {
                if lo == 0.0 {
                    return Ok(f64::INFINITY);
                }
                let upper = if hi.is_finite() { hi.powf(-alpha) } else { 0.0 };
                Ok(c * sphere_area(n) * (lo.powf(-alpha) - upper) / alpha)
            }
            RadialKind::TruncatedExponential { c, rate } => {
                let anti = |r: f64| -> f64 {
                    if r.is_infinite() {
                        return 0.0;
                    }
                    // ∫ r^{n-1} e^{-λr} dr = -e^{-λr} Σ_k (n-1)!/k! r^k / λ^{n-k}
                    let mut s = 0.0;
                    let mut fact_ratio = 1.0; // (n-1)!/k! for k = n-1 down
                    for k in (0..n).rev() {
                        s += fact_ratio * r.powi(k as i32) / rate.powi((n - k) as i32);
                        fact_ratio *= k as f64;
                    }
                    -(-rate * r).exp() * s
                };
                Ok(c * sphere_area(n) * (anti(hi) - anti(lo)))
            }
            RadialKind::Pushforward { .. } => {
                let f = |r: f64| self.profile(n, r).unwrap_or(f64::NAN);
                let v = if hi.is_finite() {
                    integrate(f, lo, hi, RADIAL_TOL)?
                } else {
                    integrate_to_infinity(f, lo, RADIAL_TOL)?
                };
                Ok(v.value)
            }
        }
    }

    /// `∫ K(|y| s) ν(dy)` where `K` is the order-`order` compensated spherical
    /// average on the small-jump shell and `1 - A_n` on the big-jump shell.
    /// With `order = 1` this is the radial contribution to the Levy–Khintchine
    /// exponent at `|ξ| = s`.
    pub(crate) fn exponent_integral(&self, n: usize, order: usize, s: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        let small_hi = self.hi().min(1.0);
        let mut total = 0.0;
        if self.inner < small_hi {
            total += self.small_shell(n, order, s, self.inner, small_hi)?;
        }
        let big_lo = self.inner.max(1.0);
        if big_lo < self.hi() {
            total += self.big_shell(n, s, big_lo)?;
        }
        Ok(total)
    }

    fn small_shell(&self, n: usize, order: usize, s: f64, lo: f64, hi: f64) -> Result<f64> {
        let integrand = |r: f64| compensated_avg(n, order, r * s) * self.profile(n, r).unwrap_or(f64::NAN);
        match &self.kind {
            RadialKind::StableLike { c, alpha } => {
                // termwise integration of the Taylor series on [lo, δ] where rs ≤ 1
                let delta = (1.0 / s).clamp(lo, hi);
                let mut series = 0.0;
                if delta > lo {
                    let cs = c * sphere_area(n);
                    let mut spow = s.powi(2 * order as i32);
                    for j in order..order + 40 {
                        let e = 2.0 * j as f64 - alpha;
                        let lo_term = if lo > 0.0 { lo.powf(e) } else { 0.0 };
                        let term = cs * osc_coeff(n, j) * spow * (delta.powf(e) - lo_term) / e;
                        series += term;
                        if term.abs() <= 1e-18 * series.abs() {
                            break;
                        }
                        spow *= s * s;
                    }
                }
                let rest = if delta < hi {
                    integrate(integrand, delta, hi, RADIAL_TOL)?.value
                } else {
                    0.0
                };
                Ok(series + rest)
            }
            _ => Ok(integrate(integrand, lo, hi, RADIAL_TOL)?.value),
        }
    }

    fn big_shell(&self, n: usize, s: f64, lo: f64) -> Result<f64> {
        let hi = self.hi();
        let half_period = std::f64::consts::PI / s;
        if hi.is_finite() {
            let f = |r: f64| (1.0 - avg_oscillatory(n, r * s)) * self.profile(n, r).unwrap_or(f64::NAN);
            return Ok(integrate_oscillatory(f, lo, hi, half_period, RADIAL_TOL)?.value);
        }
        let mass = self.mass(n, lo, hi)?;
        let osc = integrate_oscillatory(
            |r: f64| avg_oscillatory(n, r * s) * self.profile(n, r).unwrap_or(f64::NAN),
            lo,
            hi,
            half_period,
            RADIAL_TOL,
        )?;
        Ok(mass - osc.value)
    }

    /// Radial contribution to `ψ(-iη)` at `|η| = h`.
    pub(crate) fn extension_integral(&self, n: usize, h: f64) -> Result<f64> {
        if h == 0.0 {
            return Ok(0.0);
        }
        let hi = self.hi();
        let mut total = 0.0;
        let small_hi = hi.min(1.0);
        if self.inner < small_hi {
            let lo = self.inner;
            let integrand = |r: f64| compensated_ext_avg(n, r * h) * self.profile(n, r).unwrap_or(f64::NAN);
            total += match &self.kind {
                RadialKind::StableLike { c, alpha } => {
                    let delta = (1.0 / h).clamp(lo, small_hi);
                    let cs = c * sphere_area(n);
                    let mut series = 0.0;
                    let mut hpow = h * h;
                    for j in 1..60 {
                        let e = 2.0 * j as f64 - alpha;
                        let lo_term = if lo > 0.0 { lo.powf(e) } else { 0.0 };
                        let term = -cs * osc_coeff(n, j).abs() * hpow * (delta.powf(e) - lo_term) / e;
                        series += term;
                        if term.abs() <= 1e-18 * series.abs() {
                            break;
                        }
                        hpow *= h * h;
                    }
                    let rest = if delta < small_hi {
                        integrate(integrand, delta, small_hi, RADIAL_TOL)?.value
                    } else {
                        0.0
                    };
                    series + rest
                }
                _ => integrate(integrand, lo, small_hi, RADIAL_TOL)?.value,
            };
        }
        let big_lo = self.inner.max(1.0);
        if big_lo < hi {
            let finite = match self.tail() {
                Tail::Compact => true,
                Tail::Power { .. } => false,
                Tail::Exponential { rate } => h < rate,
            };
            if !finite {
                return Err(Error::ExtensionUndefined { direction: vec![h] });
            }
            let f = |r: f64| (1.0 - avg_exponential(n, r * h)) * self.profile(n, r).unwrap_or(f64::NAN);
            total += if hi.is_finite() {
                integrate(f, big_lo, hi, RADIAL_TOL)?.value
            } else {
                integrate_to_infinity(f, big_lo, RADIAL_TOL)?.value
            };
        }
        Ok(total)
    }
}

/// One-dimensional density at `w > 0` of the image of an `n`-dimensional
/// radial family under a linear functional of norm `scale`.
fn pushforward_density(source: &RadialFamily, source_dim: usize, scale: f64, w: f64) -> Result<f64> {
    let a = w.abs() / scale;
    let m = a.max(source.inner);
    let big_r = source.hi();
    if m >= big_r {
        return Ok(0.0);
    }
    let rho = |r: f64| source.density(source_dim, r).unwrap_or(f64::NAN);
    match source_dim {
        1 => Ok(if a > source.inner && a < big_r { rho(a) / scale } else { 0.0 }),
        2 => {
            let u_lo = (m * m - a * a).max(0.0).sqrt();
            let f = |u: f64| rho((a * a + u * u).sqrt());
            let v = if big_r.is_finite() {
                let u_hi = (big_r * big_r - a * a).sqrt();
                integrate(f, u_lo, u_hi, INNER_TOL)?
            } else {
                integrate_to_infinity(f, u_lo, INNER_TOL)?
            };
            Ok(2.0 * v.value / scale)
        }
        3 => {
            // 2π ∫_m^R ρ(r) r dr
            let v = match &source.kind {
                RadialKind::StableLike { c, alpha } => {
                    let upper = if big_r.is_finite() { big_r.powf(-1.0 - alpha) } else { 0.0 };
                    c * (m.powf(-1.0 - alpha) - upper) / (1.0 + alpha)
                }
                RadialKind::TruncatedExponential { c, rate } => {
                    let anti = |r: f64| {
                        if r.is_infinite() {
                            0.0
                        } else {
                            -(-rate * r).exp() * (r / rate + 1.0 / (rate * rate))
                        }
                    };
                    c * (anti(big_r) - anti(m))
                }
                RadialKind::Pushforward { .. } => {
                    return Err(Error::Unsupported("nested pushforward families".into()));
                }
            };
            Ok(2.0 * std::f64::consts::PI * v / scale)
        }
        _ => Err(Error::Unsupported(format!("pushforward from dimension {source_dim}"))),
    }
}

/// Levy measure: atoms plus radial families on `ℝⁿ \ {0}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct JumpMeasure {
    #[serde(default)]
    pub atoms: Vec<Atom>,
    #[serde(default)]
    pub radial: Vec<RadialFamily>,
}

impl JumpMeasure {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_atoms(atoms: Vec<Atom>) -> Self {
        Self { atoms, radial: Vec::new() }
    }

    pub fn dirac(position: Vec<f64>, mass: f64) -> Self {
        Self::from_atoms(vec![Atom::new(position, mass)])
    }

    pub fn with_radial(mut self, family: RadialFamily) -> Self {
        self.radial.push(family);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.radial.is_empty()
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for atom in &self.atoms {
            if atom.position.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: atom.position.len(),
                });
            }
            if !(atom.mass > 0.0 && atom.mass.is_finite()) {
                return Err(Error::InvalidMeasure(format!("atom mass {} must be positive", atom.mass)));
            }
            if atom.position.iter().any(|v| !v.is_finite()) || norm(&atom.position) == 0.0 {
                return Err(Error::InvalidMeasure("atoms must sit at finite nonzero positions".into()));
            }
        }
        for family in &self.radial {
            family.validate(n)?;
        }
        Ok(())
    }

    /// `∫ min{1, |y|²} ν(dy)`; finite for every representable measure.
    pub fn levy_integral(&self, n: usize) -> Result<f64> {
        let mut total: f64 = self
            .atoms
            .iter()
            .map(|a| {
                let r = norm(&a.position);
                a.mass * (r * r).min(1.0)
            })
            .sum();
        for family in &self.radial {
            let small_hi = family.hi().min(1.0);
            if family.inner < small_hi {
                total += match &family.kind {
                    RadialKind::StableLike { c, alpha } => {
                        let lo = family.inner;
                        c * sphere_area(n) * (small_hi.powf(2.0 - alpha) - lo.powf(2.0 - alpha)) / (2.0 - alpha)
                    }
                    _ => {
                        integrate(
                            |r| r * r * family.profile(n, r).unwrap_or(f64::NAN),
                            family.inner,
                            small_hi,
                            RADIAL_TOL,
                        )?
                        .value
                    }
                };
            }
            total += family.mass(n, 1.0, f64::INFINITY)?;
        }
        Ok(total)
    }
}
