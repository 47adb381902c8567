use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::grid::{fft_nd, GridField, GridParams};
use super::test_function::TestFunction;
use crate::error::{check_dim, Error, Result};
use crate::levy::Symbol;

/// Energy fraction within two bins of Nyquist above which a warning is raised.
pub const ALIASING_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralDiagnostics {
    /// Share of the input's spectral energy in bins `|k| ≥ N/2 - 2` along any axis.
    pub nyquist_fraction: f64,
}

impl SpectralDiagnostics {
    pub fn warning(&self) -> Option<String> {
        (self.nyquist_fraction > ALIASING_THRESHOLD).then(|| {
            format!(
                "possible aliasing: {:.2e} of the spectral energy lies within 2 bins of Nyquist",
                self.nyquist_fraction
            )
        })
    }
}

/// Which symbol the grid sees: `m(ξ)` or the reflected `m̃(ξ) = m(-ξ)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Orientation {
    Direct,
    Reflected,
}

pub fn apply_multiplier(m: &Symbol, f: &GridField) -> Result<GridField> {
    Ok(apply_with_diagnostics(m, f)?.0)
}

pub fn apply_with_diagnostics(m: &Symbol, f: &GridField) -> Result<(GridField, SpectralDiagnostics)> {
    apply_oriented(m, f, Orientation::Direct)
}

/// `m̃(D) f` with `m̃(ξ) = m(-ξ)` evaluated directly (not by conjugation).
pub fn apply_reflected(m: &Symbol, f: &GridField) -> Result<(GridField, SpectralDiagnostics)> {
    apply_oriented(m, f, Orientation::Reflected)
}

fn apply_oriented(m: &Symbol, f: &GridField, orientation: Orientation) -> Result<(GridField, SpectralDiagnostics)> {
    let grid = f.grid;
    check_dim(m.dim(), grid.dim)?;
    let mut spec = f.samples.clone();
    fft_nd(&mut spec, &grid, false);
    let diagnostics = SpectralDiagnostics {
        nyquist_fraction: nyquist_fraction(&spec, &grid),
    };
    let symbol = symbol_on_grid(m, &grid, orientation)?;
    spec.iter_mut().zip(&symbol).for_each(|(z, s)| *z *= s);
    fft_nd(&mut spec, &grid, true);
    let mut out = GridField {
        grid,
        samples: spec,
        real: false,
        periodic: f.periodic,
    };
    if f.real {
        let scale = out.max_abs().max(1.0);
        if out.max_imag() <= 1e-12 * scale {
            out.samples.iter_mut().for_each(|z| z.im = 0.0);
            out.real = true;
        }
    }
    Ok((out, diagnostics))
}

fn symbol_on_grid(m: &Symbol, grid: &GridParams, orientation: Orientation) -> Result<Vec<Complex64>> {
    (0..grid.total())
        .into_par_iter()
        .map(|i| {
            let mut xi = grid.frequency_point(i);
            if orientation == Orientation::Reflected {
                xi.iter_mut().for_each(|v| *v = -*v);
            }
            m.evaluate(&xi)
        })
        .collect()
}

fn nyquist_fraction(spec: &[Complex64], grid: &GridParams) -> f64 {
    let n = grid.points;
    let near = |j: usize| {
        let k = if j < n / 2 { j as i64 } else { j as i64 - n as i64 };
        k.unsigned_abs() as usize + 2 >= n / 2
    };
    let mut total = 0.0;
    let mut edge = 0.0;
    for (i, z) in spec.iter().enumerate() {
        let e = z.norm_sqr();
        total += e;
        let flagged = match grid.dim {
            1 => near(i),
            _ => near(i / n) || near(i % n),
        };
        if flagged {
            edge += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        edge / total
    }
}

/// Everything `weak_residual` computes along the way.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualDetail {
    pub residual: Complex64,
    /// `‖m̃(D)φ‖₁` on the padded grid.
    pub image_l1: f64,
    /// `∫ |f| |m̃(D)φ|` over the region the pairing used.
    pub weighted_l1: f64,
    /// For non-periodic `f`: `sup |f|` over the support of `φ` widened by the
    /// margin, times `∫_{outside box} |m̃(D)φ|`. Bounds the part of the pairing
    /// the finite box cannot see.
    pub truncation_bound: f64,
    pub diagnostics: SpectralDiagnostics,
}

/// Support margin demanded of test functions paired with `f`.
pub fn required_margin(f: &GridField) -> f64 {
    if f.periodic {
        f.grid.half_length / 4.0
    } else {
        f.grid.half_length / 2.0
    }
}

/// `⟨f, m̃(D)φ⟩`.
pub fn weak_residual(f: &GridField, m: &Symbol, phi: &TestFunction) -> Result<Complex64> {
    Ok(weak_residual_detail(f, m, phi, required_margin(f))?.residual)
}

/// The pairing uses a 2× zero-padded grid for `m̃(D)φ`. A periodic `f` is
/// extended periodically over the padded box (exact for on-grid
/// frequencies); a non-periodic `f` is paired only over its own box.
pub fn weak_residual_detail(f: &GridField, m: &Symbol, phi: &TestFunction, margin: f64) -> Result<ResidualDetail> {
    let grid = f.grid;
    check_dim(phi.dim(), grid.dim)?;
    if margin < 0.0 {
        return Err(Error::InvalidParameter(format!("margin {margin} must be non-negative")));
    }
    phi.check_margin(grid.half_length, margin)?;
    let padded = grid.padded();
    let phi_field = phi.sample(padded)?;
    let (image, diagnostics) = apply_reflected(m, &phi_field)?;

    let n = grid.points;
    let w = padded.spacing().powi(grid.dim as i32);
    // Padded index -> (inner index, inside box?).
    let locate = |idx: usize| -> (usize, bool) {
        let fold = |j: usize| ((j + n / 2) % n, (n / 2..n / 2 + n).contains(&j));
        match grid.dim {
            1 => fold(idx),
            _ => {
                let (r, ri) = fold(idx / (2 * n));
                let (c, ci) = fold(idx % (2 * n));
                (r * n + c, ri && ci)
            }
        }
    };

    let mut residual = Complex64::new(0.0, 0.0);
    let mut weighted = 0.0;
    let mut outside = 0.0;
    let mut image_l1 = 0.0;
    for (idx, g) in image.samples.iter().enumerate() {
        let (inner, inside) = locate(idx);
        image_l1 += g.norm();
        if f.periodic || inside {
            let fv = f.samples[inner];
            residual += fv * g;
            weighted += fv.norm() * g.norm();
        } else {
            outside += g.norm();
        }
    }
    let truncation_bound = if f.periodic {
        0.0
    } else {
        let reach = phi.scale + margin;
        let near = f
            .samples
            .iter()
            .enumerate()
            .filter(|(i, _)| crate::linalg::norm(&sub(&grid.point(*i), &phi.center)) <= reach)
            .map(|(_, z)| z.norm())
            .fold(0.0, f64::max);
        near * outside * w
    };
    Ok(ResidualDetail {
        residual: residual * w,
        image_l1: image_l1 * w,
        weighted_l1: weighted * w,
        truncation_bound,
        diagnostics,
    })
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{JumpMeasure, LevyTriplet};
    use std::f64::consts::PI;

    fn grid1(n: usize, l: f64) -> GridParams {
        GridParams::new(1, n, l).unwrap()
    }

    fn poisson_unit() -> Symbol {
        Symbol::Triplet(LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1))
    }

    #[test]
    fn half_laplacian_eigenfunction() {
        let g = grid1(256, 3.0 * PI);
        let f = GridField::from_fn(g, false, true, |x| Complex64::from_polar(1.0, x[0])).unwrap();
        let out = apply_multiplier(&Symbol::brownian(1), &f).unwrap();
        for (a, b) in out.samples.iter().zip(&f.samples) {
            assert!((a - b * 0.5).norm() < 1e-10);
        }
    }

    #[test]
    fn constant_is_killed() {
        let g = GridParams::new(2, 64, 2.0).unwrap();
        let f = GridField::from_fn(g, true, true, |_| Complex64::new(1.0, 0.0)).unwrap();
        let out = apply_multiplier(&Symbol::brownian(2), &f).unwrap();
        assert!(out.max_abs() < 1e-14);
        assert!(out.real);
    }

    #[test]
    fn lattice_symbol_annihilates_cosine() {
        // 1 - e^{±2πi} = 0 by hand.
        let g = grid1(256, 4.0);
        let f = GridField::from_fn(g, true, true, |x| Complex64::new((2.0 * PI * x[0]).cos(), 0.0)).unwrap();
        let out = apply_multiplier(&poisson_unit(), &f).unwrap();
        assert!(out.max_abs() < 1e-8);
    }

    #[test]
    fn drift_uses_reflection_not_conjugation() {
        // m = -iξ (drift b=1): m̃(D) e^{ix} = m(-1) e^{ix} = i e^{ix}.
        let t = LevyTriplet::new(vec![1.0], vec![vec![0.0]], JumpMeasure::zero()).unwrap();
        let g = grid1(64, PI);
        let f = GridField::from_fn(g, false, true, |x| Complex64::from_polar(1.0, x[0])).unwrap();
        let (out, _) = apply_reflected(&Symbol::Triplet(t), &f).unwrap();
        for (a, b) in out.samples.iter().zip(&f.samples) {
            assert!((a - b * Complex64::i()).norm() < 1e-12);
        }
    }

    #[test]
    fn aliasing_warning() {
        let g = grid1(64, 1.0);
        // Nyquist-bin oscillation.
        let f = GridField::from_fn(g, true, true, |x| Complex64::new((32.0 * PI * x[0]).cos(), 0.0)).unwrap();
        let (_, d) = apply_with_diagnostics(&Symbol::brownian(1), &f).unwrap();
        assert!(d.warning().is_some());
        let smooth = GridField::from_fn(g, true, true, |x| Complex64::new((PI * x[0]).cos(), 0.0)).unwrap();
        let (_, d) = apply_with_diagnostics(&Symbol::brownian(1), &smooth).unwrap();
        assert!(d.warning().is_none());
    }

    #[test]
    fn constant_residual_vanishes() {
        let g = grid1(1024, 8.0);
        let f = GridField::from_fn(g, true, true, |_| Complex64::new(1.0, 0.0)).unwrap();
        let phi = TestFunction::mollifier(vec![0.3], 2.0);
        for m in [Symbol::brownian(1), poisson_unit(), Symbol::stable(1, 1.5)] {
            assert!(weak_residual(&f, &m, &phi).unwrap().norm() < 1e-9, "{}", m.label());
        }
    }

    #[test]
    fn square_under_half_laplacian() {
        // ½(-d²/dx²) x² = -1, so the pairing returns -∫φ.
        let g = grid1(1024, 8.0);
        let f = GridField::from_fn(g, true, false, |x| Complex64::new(x[0] * x[0], 0.0)).unwrap();
        let phi = TestFunction::gaussian(vec![0.5], 0.4, 3.5);
        let r = weak_residual(&f, &Symbol::brownian(1), &phi).unwrap();
        let mass = phi.sample(g).unwrap().integral().re;
        assert!((r.re + mass).abs() < 1e-6, "{r} vs {}", -mass);
        assert!(r.im.abs() < 1e-9);
    }

    #[test]
    fn margin_is_enforced() {
        let g = grid1(256, 4.0);
        let f = GridField::from_fn(g, true, true, |_| Complex64::new(1.0, 0.0)).unwrap();
        let phi = TestFunction::mollifier(vec![2.0], 1.5);
        assert!(matches!(weak_residual(&f, &Symbol::brownian(1), &phi), Err(Error::SupportMargin { .. })));
    }
}
