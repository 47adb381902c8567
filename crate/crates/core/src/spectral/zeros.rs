//! Grid search for zero sets, with golden-section refinement and lattice
//! recognition.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::levy::Symbol;
use crate::linalg::{dot, lstsq_coords, norm, to_dmatrix};

/// Search box `[-R, R]ⁿ`, grid step and acceptance tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchParams {
    pub box_radius: f64,
    pub grid_step: f64,
    pub tol: f64,
}

impl SearchParams {
    pub fn new(box_radius: f64, grid_step: f64, tol: f64) -> Self {
        Self {
            box_radius,
            grid_step,
            tol,
        }
    }

    /// `R = 20` with step `0.05` on the line and `0.1` in the plane; three
    /// dimensions use `R = 10`, step `0.25` to keep the grid near 5·10⁵ points.
    pub fn default_for(n: usize) -> Self {
        match n {
            1 => Self::new(20.0, 0.05, 1e-8),
            2 => Self::new(20.0, 0.1, 1e-8),
            _ => Self::new(10.0, 0.25, 1e-8),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Zero {
    pub point: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Classification {
    Empty,
    OriginOnly,
    Lattice { generators: Vec<Vec<f64>> },
    NonLattice,
    Undetermined { reason: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSetReport {
    pub dim: usize,
    pub zeros: Vec<Zero>,
    pub classification: Classification,
    pub box_radius: f64,
    pub grid_step: f64,
    pub tol: f64,
    /// Candidates whose refinement stopped between `tol` and `10·tol`.
    pub stalled: Vec<Zero>,
}

impl ZeroSetReport {
    /// Nonzero zeros ordered by norm, lexicographically greatest first among
    /// ties, so `+2π` is preferred over `-2π`.
    pub fn nonzero_by_norm(&self) -> Vec<&Zero> {
        let h = self.grid_step;
        let mut v: Vec<&Zero> = self.zeros.iter().filter(|z| norm(&z.point) > h).collect();
        v.sort_by(|a, b| {
            let (na, nb) = (norm(&a.point), norm(&b.point));
            if (na - nb).abs() > h / 2.0 {
                na.total_cmp(&nb)
            } else {
                lex_cmp(&b.point, &a.point)
            }
        });
        v
    }

    pub fn is_origin_only_or_empty(&self) -> bool {
        matches!(self.classification, Classification::OriginOnly | Classification::Empty)
    }
}

fn lex_cmp(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.total_cmp(y) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Zero set of `|m|` for a symbol.
pub fn find_zero_set(symbol: &Symbol, box_radius: f64, grid_step: f64, tol: f64) -> Result<ZeroSetReport> {
    let params = SearchParams::new(box_radius, grid_step, tol);
    find_zeros_of(|x| symbol.evaluate(x).map(|v| v.norm()), symbol.dim(), params)
}

const REFINE_ITERS: usize = 60;
const MIN_REFINE_STEP: f64 = 1e-12;

/// Zero set of a nonnegative function on the grid. Points where `f` is
/// infinite are never candidates.
pub fn find_zeros_of<F>(f: F, dim: usize, params: SearchParams) -> Result<ZeroSetReport>
where
    F: Fn(&[f64]) -> Result<f64> + Sync,
{
    let SearchParams {
        box_radius,
        grid_step: h,
        tol,
    } = params;
    if !(1..=3).contains(&dim) {
        return Err(Error::Unsupported(format!("dense zero search in dimension {dim}")));
    }
    if !(box_radius > 0.0 && h > 0.0 && tol > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "search needs positive box radius, step and tolerance, got R={box_radius}, h={h}, tol={tol}"
        )));
    }
    let k = (box_radius / h + 1e-9).floor() as i64;
    if k < 1 {
        return Err(Error::EmptyGrid);
    }
    let side = (2 * k + 1) as usize;
    let total = side.pow(dim as u32);
    let coords = |mut idx: usize| -> Vec<i64> {
        let mut c = vec![0i64; dim];
        for slot in c.iter_mut().rev() {
            *slot = (idx % side) as i64 - k;
            idx /= side;
        }
        c
    };
    let point = |c: &[i64]| -> Vec<f64> { c.iter().map(|&i| i as f64 * h).collect() };
    let values: Vec<f64> = (0..total)
        .into_par_iter()
        .map(|idx| f(&point(&coords(idx))))
        .collect::<Result<Vec<_>>>()?;
    let flat = |c: &[i64]| -> Option<usize> {
        let mut idx = 0usize;
        for &ci in c {
            if ci < -k || ci > k {
                return None;
            }
            idx = idx * side + (ci + k) as usize;
        }
        Some(idx)
    };

    let candidates: Vec<Vec<f64>> = (0..total)
        .into_par_iter()
        .filter_map(|idx| {
            let v = values[idx];
            if !v.is_finite() {
                return None;
            }
            let c = coords(idx);
            let mut max_diff: f64 = 0.0;
            for axis in 0..dim {
                for d in [-1i64, 1] {
                    let mut nb = c.clone();
                    nb[axis] += d;
                    if let Some(j) = flat(&nb) {
                        let w = values[j];
                        if w < v {
                            return None;
                        }
                        if w.is_finite() {
                            max_diff = max_diff.max(w - v);
                        }
                    }
                }
            }
            (v <= 10.0 * tol + max_diff).then(|| point(&c))
        })
        .collect();

    let refined: Vec<(Vec<f64>, f64)> = candidates
        .par_iter()
        .map(|x0| refine(&f, x0, h, tol))
        .collect::<Result<Vec<_>>>()?;

    let mut zeros = Vec::new();
    let mut stalled = Vec::new();
    for (p, r) in refined {
        if r <= tol {
            zeros.push(Zero { point: p, residual: r });
        } else if r <= 10.0 * tol {
            stalled.push(Zero { point: p, residual: r });
        }
    }
    let mut zeros = dedupe(zeros, h / 2.0);
    zeros.sort_by(|a, b| lex_cmp(&a.point, &b.point));
    let mut stalled = dedupe(stalled, h / 2.0);
    stalled.retain(|s| zeros.iter().all(|z| dist(&z.point, &s.point) > h / 2.0));
    stalled.sort_by(|a, b| lex_cmp(&a.point, &b.point));

    let classification = if !stalled.is_empty() {
        Classification::Undetermined {
            reason: format!("{} candidate(s) stalled above the tolerance during refinement", stalled.len()),
        }
    } else {
        classify(&zeros, dim, box_radius, h)
    };
    Ok(ZeroSetReport {
        dim,
        zeros,
        classification,
        box_radius,
        grid_step: h,
        tol,
        stalled,
    })
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn golden_section<G: FnMut(f64) -> f64>(mut g: G, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let mut fc = g(c);
    let mut fd = g(d);
    for _ in 0..REFINE_ITERS {
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = g(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = g(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Search directions for refinement: the axes, then the normalised
/// diagonals `e_i ± e_j`. Complex symbols have degenerate zeros whose
/// valleys run diagonally, where pure coordinate descent zig-zags.
fn refine_directions(n: usize) -> Vec<Vec<f64>> {
    let mut dirs = Vec::new();
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        dirs.push(e);
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i + 1..n {
            for sign in [1.0, -1.0] {
                let mut e = vec![0.0; n];
                e[i] = s;
                e[j] = sign * s;
                dirs.push(e);
            }
        }
    }
    dirs
}

/// Golden-section line searches on `±step` brackets along the axes (and
/// diagonals, plus the last sweep's displacement, in several dimensions),
/// shrinking the bracket by 4 per sweep until the value drops below `tol`.
fn refine<F>(f: &F, x0: &[f64], h: f64, tol: f64) -> Result<(Vec<f64>, f64)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut x = x0.to_vec();
    let mut best = f(&x)?;
    let mut step = h;
    let mut err = None;
    let dirs = refine_directions(x.len());
    while best > tol && step >= MIN_REFINE_STEP {
        let start = x.clone();
        let mut line = |x: &mut Vec<f64>, best: &mut f64, dir: &[f64], reach: f64| {
            let base = x.clone();
            let (t, v) = golden_section(
                |t| {
                    let y: Vec<f64> = base.iter().zip(dir).map(|(b, d)| b + t * d).collect();
                    match f(&y) {
                        Ok(v) if v.is_nan() => f64::INFINITY,
                        Ok(v) => v,
                        Err(e) => {
                            err = Some(e);
                            f64::INFINITY
                        }
                    }
                },
                -reach,
                reach,
            );
            if v < *best {
                *best = v;
                *x = base.iter().zip(dir).map(|(b, d)| b + t * d).collect();
            }
        };
        for dir in &dirs {
            line(&mut x, &mut best, dir, step);
        }
        if x.len() > 1 {
            let disp: Vec<f64> = x.iter().zip(&start).map(|(a, b)| a - b).collect();
            let len = norm(&disp);
            if len > 0.0 {
                let dir: Vec<f64> = disp.iter().map(|d| d / len).collect();
                line(&mut x, &mut best, &dir, 2.0 * len.max(step));
            }
        }
        if let Some(e) = err.take() {
            return Err(e);
        }
        step /= 4.0;
    }
    Ok((x, best))
}

fn dedupe(points: Vec<Zero>, radius: f64) -> Vec<Zero> {
    let cell = |p: &[f64]| -> Vec<i64> { p.iter().map(|c| (c / radius).floor() as i64).collect() };
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let mut kept: Vec<Zero> = Vec::new();
    let mut sorted = points;
    sorted.sort_by(|a, b| a.residual.total_cmp(&b.residual).then_with(|| lex_cmp(&a.point, &b.point)));
    'outer: for z in sorted {
        let c = cell(&z.point);
        let n = c.len();
        for offset in 0..3usize.pow(n as u32) {
            let mut key = c.clone();
            let mut o = offset;
            for slot in key.iter_mut() {
                *slot += (o % 3) as i64 - 1;
                o /= 3;
            }
            if let Some(ids) = buckets.get(&key) {
                if ids.iter().any(|&i| dist(&kept[i].point, &z.point) <= radius) {
                    continue 'outer;
                }
            }
        }
        buckets.entry(c).or_default().push(kept.len());
        kept.push(z);
    }
    kept
}

fn classify(zeros: &[Zero], dim: usize, box_radius: f64, h: f64) -> Classification {
    if zeros.is_empty() {
        return Classification::Empty;
    }
    if zeros.iter().all(|z| norm(&z.point) <= h) {
        return Classification::OriginOnly;
    }
    match detect_lattice(zeros, dim, box_radius, h) {
        Some(generators) => Classification::Lattice { generators },
        None => Classification::NonLattice,
    }
}

fn detect_lattice(zeros: &[Zero], dim: usize, box_radius: f64, h: f64) -> Option<Vec<Vec<f64>>> {
    // the origin has to be part of any lattice
    if !zeros.iter().any(|z| norm(&z.point) <= h) {
        return None;
    }
    let mut by_norm: Vec<&Zero> = zeros.iter().filter(|z| norm(&z.point) > h).collect();
    by_norm.sort_by(|a, b| norm(&a.point).total_cmp(&norm(&b.point)).then_with(|| lex_cmp(&b.point, &a.point)));
    let mut gens: Vec<Vec<f64>> = Vec::new();
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for z in by_norm {
        if gens.len() == dim {
            break;
        }
        let mut r = z.point.clone();
        for q in &ortho {
            let c = dot(&r, q);
            for (ri, qi) in r.iter_mut().zip(q) {
                *ri -= c * qi;
            }
        }
        let rn = norm(&r);
        if rn > h {
            if norm(&z.point) <= 2.0 * h {
                // zeros packed at grid resolution: a continuum, not a lattice
                return None;
            }
            gens.push(z.point.clone());
            ortho.push(r.iter().map(|c| c / rn).collect());
        }
    }
    if gens.is_empty() {
        return None;
    }
    let mut ints: Vec<Vec<f64>> = Vec::with_capacity(zeros.len());
    for z in zeros {
        let c = lstsq_coords(&gens, &z.point)?;
        let k: Vec<f64> = c.iter().map(|v| v.round()).collect();
        let mut resid = z.point.clone();
        for (ki, g) in k.iter().zip(&gens) {
            for (ri, gi) in resid.iter_mut().zip(g) {
                *ri -= ki * gi;
            }
        }
        if norm(&resid) >= h / 10.0 {
            return None;
        }
        ints.push(k);
    }
    // every lattice point well inside the box must have been found
    let inner = box_radius - h;
    let bounds: Vec<i64> = gens.iter().map(|g| (box_radius / norm(g)).ceil() as i64 + 1).collect();
    let mut idx = vec![0i64; gens.len()];
    for (slot, b) in idx.iter_mut().zip(&bounds) {
        *slot = -b;
    }
    loop {
        let mut p = vec![0.0; dim];
        for (ki, g) in idx.iter().zip(&gens) {
            for (pi, gi) in p.iter_mut().zip(g) {
                *pi += *ki as f64 * gi;
            }
        }
        if p.iter().all(|c| c.abs() <= inner) && !zeros.iter().any(|z| dist(&z.point, &p) <= h) {
            return None;
        }
        let mut j = 0;
        loop {
            if j == idx.len() {
                return Some(refine_generators(&gens, &ints, zeros));
            }
            idx[j] += 1;
            if idx[j] > bounds[j] {
                idx[j] = -bounds[j];
                j += 1;
            } else {
                break;
            }
        }
    }
}

/// Least-squares fit `Z ≈ K G` over all zeros with their integer coordinates.
fn refine_generators(gens: &[Vec<f64>], ints: &[Vec<f64>], zeros: &[Zero]) -> Vec<Vec<f64>> {
    let k = to_dmatrix(ints);
    let z = to_dmatrix(&zeros.iter().map(|z| z.point.clone()).collect::<Vec<_>>());
    let ktk = k.transpose() * &k;
    let fitted = match ktk.try_inverse() {
        Some(inv) => {
            let g = inv * k.transpose() * z;
            (0..g.nrows()).map(|i| (0..g.ncols()).map(|j| g[(i, j)]).collect()).collect()
        }
        None => gens.to_vec(),
    };
    fitted
        .into_iter()
        .map(|g: Vec<f64>| {
            let first = g.iter().copied().find(|c| c.abs() > 1e-12).unwrap_or(0.0);
            if first < 0.0 {
                g.iter().map(|c| -c).collect()
            } else {
                g
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::{JumpMeasure, LevyTriplet};
    use std::f64::consts::PI;

    fn poisson() -> Symbol {
        Symbol::Triplet(LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1))
    }

    #[test]
    fn brownian_plane_is_origin_only() {
        let r = find_zero_set(&Symbol::brownian(2), 10.0, 0.1, 1e-8).unwrap();
        assert_eq!(r.classification, Classification::OriginOnly);
    }

    #[test]
    fn unit_atom_gives_two_pi_lattice() {
        let r = find_zero_set(&poisson(), 10.0, 0.05, 1e-8).unwrap();
        let Classification::Lattice { generators } = &r.classification else {
            panic!("{:?}", r.classification)
        };
        assert_eq!(generators.len(), 1);
        assert!((generators[0][0] - 2.0 * PI).abs() < 1e-6);
        assert_eq!(r.zeros.len(), 3);
        for z in &r.zeros {
            assert!(poisson().evaluate(&z.point).unwrap().norm() <= 1e-8);
        }
    }

    #[test]
    fn stable_power_is_origin_only() {
        let r = find_zero_set(&Symbol::stable(1, 1.5), 20.0, 0.05, 1e-8).unwrap();
        assert_eq!(r.classification, Classification::OriginOnly);
    }

    #[test]
    fn one_plus_square_has_no_zeros() {
        let r = find_zero_set(&Symbol::one_plus_square(1), 20.0, 0.05, 1e-8).unwrap();
        assert_eq!(r.classification, Classification::Empty);
    }

    #[test]
    fn pure_drift_real_part_is_a_continuum() {
        let t = LevyTriplet::drift(vec![1.0]);
        let r = find_zeros_of(
            |x| crate::levy::evaluate_exponent(&t, x).map(|v| v.re.abs()),
            1,
            SearchParams::new(5.0, 0.05, 1e-8),
        )
        .unwrap();
        assert_eq!(r.classification, Classification::NonLattice);
    }

    #[test]
    fn square_lattice_in_the_plane() {
        let nu = JumpMeasure::from_atoms(vec![
            crate::levy::Atom::new(vec![1.0, 0.0], 1.0),
            crate::levy::Atom::new(vec![0.0, 1.0], 1.0),
        ]);
        let s = Symbol::Triplet(LevyTriplet::pure_jump(nu, 2));
        let r = find_zero_set(&s, 8.0, 0.1, 1e-8).unwrap();
        let Classification::Lattice { generators } = &r.classification else {
            panic!("{:?}", r.classification)
        };
        assert_eq!(generators.len(), 2, "{generators:?} {:?}", r.zeros);
        for g in generators {
            assert!((norm(g) - 2.0 * PI).abs() < 1e-6);
        }
        assert_eq!(r.zeros.len(), 9);
    }

    #[test]
    fn grid_too_coarse_is_an_error() {
        assert!(matches!(find_zero_set(&poisson(), 0.01, 0.05, 1e-8), Err(Error::EmptyGrid)));
    }

    #[test]
    fn scaling_does_not_move_zeros() {
        let a = find_zero_set(&poisson(), 10.0, 0.05, 1e-8).unwrap();
        let b = find_zero_set(&poisson().scaled(2.0), 10.0, 0.05, 1e-8).unwrap();
        assert_eq!(a.zeros.len(), b.zeros.len());
        for (za, zb) in a.zeros.iter().zip(&b.zeros) {
            assert!(dist(&za.point, &zb.point) < 1e-6);
        }
    }
}
