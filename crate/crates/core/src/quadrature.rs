//! Adaptive Gauss–Kronrod quadrature and a Wynn-accelerated oscillatory tail
//! integrator.
//!
//! Everything here is real-valued: the radially symmetric jump families only
//! ever need real integrals (odd parts cancel on spheres).

use crate::error::{Error, Result};

/// Requested accuracy for an integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
}

impl Tolerance {
    pub const fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-9, 1e-14)
    }
}

/// Integral value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the 7-point rule embedded at odd Kronrod nodes.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    (value, error)
}

/// Adaptive G7/K15 integration of `f` over the finite interval `[a, b]`.
///
/// Subdivides the interval with the largest error estimate until the summed
/// error is below the tolerance. Fails with [`Error::Quadrature`] carrying the
/// achieved error when the subdivision budget runs out.
pub fn integrate<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Integral> {
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "integration bounds must be finite, got [{a}, {b}]"
        )));
    }
    const MAX_INTERVALS: usize = 4000;
    let (v0, e0) = gk15(&mut f, a, b);
    let mut intervals = vec![(a, b, v0, e0)];
    let mut total = v0;
    let mut total_err = e0;
    while total_err > tol.target(total) {
        if intervals.len() >= MAX_INTERVALS || !total.is_finite() {
            return Err(Error::Quadrature {
                achieved: total_err,
                requested: tol.target(total),
            });
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |acc, (i, iv)| if iv.3 > acc.1 { (i, iv.3) } else { acc });
        let (lo, hi, v, e) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // interval has collapsed to floating-point resolution
            return Err(Error::Quadrature {
                achieved: total_err,
                requested: tol.target(total),
            });
        }
        let (v1, e1) = gk15(&mut f, lo, mid);
        let (v2, e2) = gk15(&mut f, mid, hi);
        total += v1 + v2 - v;
        total_err += e1 + e2 - e;
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    // re-sum to shed accumulated update roundoff
    let value = intervals.iter().map(|iv| iv.2).sum();
    let error = intervals.iter().map(|iv| iv.3).sum();
    Ok(Integral { value, error })
}

/// Integral over `[a, ∞)` of a non-oscillating integrand, mapped onto a
/// finite interval by `r = a + t/(1-t)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(mut f: F, a: f64, tol: Tolerance) -> Result<Integral> {
    integrate(
        |t| {
            if t >= 1.0 {
                return 0.0;
            }
            let one_minus = 1.0 - t;
            let r = a + t / one_minus;
            let jac = 1.0 / (one_minus * one_minus);
            let v = f(r) * jac;
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// Wynn's epsilon algorithm applied to a sequence of partial sums; returns the
/// best extrapolant of the last complete table column.
pub fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    if n < 3 {
        return partial_sums.last().copied().unwrap_or(0.0);
    }
    // eps_{-1} = 0, eps_0 = S_k
    let mut prev: Vec<f64> = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = *partial_sums.last().unwrap();
    let mut col = 0usize;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for k in 0..cur.len() - 1 {
            let diff = cur[k + 1] - cur[k];
            let prev_term = prev[k + 1];
            if diff == 0.0 {
                // converged exactly; propagate the limit
                next.push(f64::INFINITY);
            } else {
                next.push(prev_term + 1.0 / diff);
            }
        }
        col += 1;
        if col % 2 == 0 {
            if let Some(&v) = next.last() {
                if v.is_finite() {
                    best = v;
                } else {
                    break;
                }
            }
        }
        prev = cur;
        cur = next;
    }
    best
}

/// Integral over `[a, end)` (with `end` possibly infinite) of an integrand
/// oscillating with half-period `half_period`.
///
/// The range is cut into half-period panels; for infinite ranges the partial
/// sums are accelerated with Wynn's epsilon algorithm and the iteration stops
/// when successive extrapolants agree to the tolerance.
pub fn integrate_oscillatory<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    end: f64,
    half_period: f64,
    tol: Tolerance,
) -> Result<Integral> {
    if end <= a {
        return Ok(Integral { value: 0.0, error: 0.0 });
    }
    let panel_tol = Tolerance::new(tol.rel * 0.1, tol.abs * 0.1);
    if end.is_finite() {
        let panels = ((end - a) / half_period).ceil().max(1.0) as usize;
        if panels > 200_000 {
            return Err(Error::Quadrature {
                achieved: f64::INFINITY,
                requested: tol.abs,
            });
        }
        let mut value = 0.0;
        let mut error = 0.0;
        for k in 0..panels {
            let lo = a + k as f64 * half_period;
            let hi = (lo + half_period).min(end);
            let part = integrate(&mut f, lo, hi, panel_tol)?;
            value += part.value;
            error += part.error;
        }
        return Ok(Integral { value, error });
    }
    const MAX_PANELS: usize = 20_000;
    const MIN_PANELS: usize = 12;
    let mut sums: Vec<f64> = Vec::new();
    let mut running = 0.0;
    let mut quad_err = 0.0;
    let mut last_extrap = f64::NAN;
    let mut agree = 0usize;
    for k in 0..MAX_PANELS {
        let lo = a + k as f64 * half_period;
        let hi = lo + half_period;
        let part = integrate(&mut f, lo, hi, panel_tol)?;
        running += part.value;
        quad_err += part.error;
        sums.push(running);
        if sums.len() >= MIN_PANELS {
            let window = &sums[sums.len().saturating_sub(40)..];
            let extrap = wynn_epsilon(window);
            let diff = (extrap - last_extrap).abs();
            let target = tol.target(extrap);
            if diff <= target && (running - extrap).abs() <= 1e6 * target.max(part.value.abs()) {
                agree += 1;
                if agree >= 2 {
                    return Ok(Integral {
                        value: extrap,
                        error: diff + quad_err,
                    });
                }
            } else {
                agree = 0;
            }
            last_extrap = extrap;
        }
    }
    Err(Error::Quadrature {
        achieved: (sums[sums.len() - 1] - last_extrap).abs(),
        requested: tol.abs,
    })
}
