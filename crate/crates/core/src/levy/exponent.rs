//! Characteristic exponents from Levy triplets, on the real line of
//! frequencies and on the imaginary axis `ξ = -iη`.

use num_complex::Complex64;

use super::triplet::LevyTriplet;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{dot, norm, quad_form};

/// `1 - e^{iu}` split into real and imaginary parts without cancellation.
pub(crate) fn one_minus_cis(u: f64) -> Complex64 {
    let h = (0.5 * u).sin();
    Complex64::new(2.0 * h * h, -u.sin())
}

/// `u - sin u`, accurate for small `u`.
fn u_minus_sin(u: f64) -> f64 {
    if u.abs() < 0.1 {
        let u2 = u * u;
        u * u2 / 6.0 * (1.0 - u2 / 20.0 * (1.0 - u2 / 42.0 * (1.0 - u2 / 72.0)))
    } else {
        u - u.sin()
    }
}

/// `1 - e^{iu} + iu`.
pub(crate) fn compensated_cis(u: f64) -> Complex64 {
    let h = (0.5 * u).sin();
    Complex64::new(2.0 * h * h, u_minus_sin(u))
}

/// `e^u - 1 - u`, accurate for small `u`.
fn exp_remainder(u: f64) -> f64 {
    if u.abs() < 0.1 {
        let mut term = u * u / 2.0;
        let mut sum = term;
        for k in 3..12 {
            term *= u / k as f64;
            sum += term;
        }
        sum
    } else {
        u.exp_m1() - u
    }
}

/// Levy–Khintchine exponent `ψ(ξ)`.
///
/// Atoms are summed exactly; radial families contribute a real term depending
/// only on `|ξ|`.
pub fn evaluate_exponent(triplet: &LevyTriplet, xi: &[f64]) -> Result<Complex64> {
    let n = triplet.dim();
    check_dim(n, xi.len())?;
    if xi.iter().all(|v| *v == 0.0) {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut re = 0.5 * quad_form(&triplet.q, xi);
    let mut im = -dot(&triplet.b, xi);
    for atom in &triplet.nu.atoms {
        let u = dot(&atom.position, xi);
        let term = if norm(&atom.position) < 1.0 {
            compensated_cis(u)
        } else {
            one_minus_cis(u)
        };
        re += atom.mass * term.re;
        im += atom.mass * term.im;
    }
    let s = norm(xi);
    for family in &triplet.nu.radial {
        re += family.exponent_integral(n, 1, s)?;
    }
    Ok(Complex64::new(re, im))
}

/// Analytic extension `ψ(-iη)`, real-valued.
///
/// Fails with [`Error::ExtensionUndefined`] when `∫_{|y|≥1} e^{y·η} ν(dy)`
/// diverges.
pub fn evaluate_extension(triplet: &LevyTriplet, eta: &[f64]) -> Result<f64> {
    let n = triplet.dim();
    check_dim(n, eta.len())?;
    if eta.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    let mut v = -dot(&triplet.b, eta) - 0.5 * quad_form(&triplet.q, eta);
    for atom in &triplet.nu.atoms {
        let u = dot(&atom.position, eta);
        v += atom.mass
            * if norm(&atom.position) < 1.0 {
                -exp_remainder(u)
            } else {
                -u.exp_m1()
            };
    }
    let h = norm(eta);
    for family in &triplet.nu.radial {
        v += family.extension_integral(n, h).map_err(|e| match e {
            Error::ExtensionUndefined { .. } => Error::ExtensionUndefined { direction: eta.to_vec() },
            other => other,
        })?;
    }
    Ok(v)
}
