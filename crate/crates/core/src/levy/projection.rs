use super::measure::{Atom, JumpMeasure, RadialFamily, RadialKind};
use super::triplet::LevyTriplet;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm, quad_form};

/// `π^{(n-1)/2} Γ((1+α)/2) / Γ((n+α)/2)`: the mass of the `(n-1)`-dimensional
/// slice integral that turns `|y|^{-n-α}` in `ℝⁿ` into `|w|^{-1-α}` on the line.
fn stable_slice_constant(n: usize, alpha: f64) -> f64 {
    std::f64::consts::PI.powf((n as f64 - 1.0) / 2.0) * libm::tgamma((1.0 + alpha) / 2.0)
        / libm::tgamma((n as f64 + alpha) / 2.0)
}

fn project_family(family: &RadialFamily, n: usize, scale: f64) -> Result<RadialFamily> {
    let outer = family.outer.map(|r| r * scale);
    if n == 1 {
        let kind = match &family.kind {
            RadialKind::StableLike { c, alpha } => RadialKind::StableLike {
                c: c * scale.powf(*alpha),
                alpha: *alpha,
            },
            RadialKind::TruncatedExponential { c, rate } => RadialKind::TruncatedExponential {
                c: c / scale,
                rate: rate / scale,
            },
            RadialKind::Pushforward { source, source_dim, scale: s0 } => RadialKind::Pushforward {
                source: source.clone(),
                source_dim: *source_dim,
                scale: s0 * scale,
            },
        };
        return Ok(RadialFamily {
            kind,
            inner: family.inner * scale,
            outer,
        });
    }
    match &family.kind {
        RadialKind::StableLike { c, alpha } if family.inner == 0.0 => {
            if family.outer.is_some() {
                return Err(Error::Unsupported(
                    "projection of a stable-like family with zero inner cutoff and finite outer cutoff".into(),
                ));
            }
            Ok(RadialFamily::stable_like(
                c * stable_slice_constant(n, *alpha) * scale.powf(*alpha),
                *alpha,
            ))
        }
        RadialKind::Pushforward { .. } => Err(Error::Unsupported("pushforward families are one-dimensional".into())),
        _ => Ok(RadialFamily {
            kind: RadialKind::Pushforward {
                source: Box::new(family.clone()),
                source_dim: n,
                scale,
            },
            inner: 0.0,
            outer,
        }),
    }
}

/// Triplet of the one-dimensional process `x·X_t`.
///
/// The drift correction uses the indicator of `|z| < 1` for the original
/// compensation, which is what makes `ψ^x(t) = ψ(t x)` hold exactly. Radial
/// families are symmetric, so they do not shift the drift.
pub fn project_triplet(triplet: &LevyTriplet, x: &[f64]) -> Result<LevyTriplet> {
    let n = triplet.dim();
    crate::error::check_dim(n, x.len())?;
    let scale = norm(x);
    if scale == 0.0 {
        return Err(Error::InvalidParameter("projection direction must be nonzero".into()));
    }
    let mut b = dot(x, &triplet.b);
    let mut atoms = Vec::new();
    for atom in &triplet.nu.atoms {
        let w = dot(x, &atom.position);
        let inside_new = if w.abs() < 1.0 { 1.0 } else { 0.0 };
        let inside_old = if norm(&atom.position) < 1.0 { 1.0 } else { 0.0 };
        b += atom.mass * w * (inside_new - inside_old);
        if w != 0.0 {
            atoms.push(Atom::new(vec![w], atom.mass));
        }
    }
    let radial = triplet
        .nu
        .radial
        .iter()
        .map(|f| project_family(f, n, scale))
        .collect::<Result<Vec<_>>>()?;
    Ok(LevyTriplet {
        b: vec![b],
        q: vec![vec![quad_form(&triplet.q, x)]],
        nu: JumpMeasure { atoms, radial },
    })
}
