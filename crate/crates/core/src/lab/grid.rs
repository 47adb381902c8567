use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Box `[-L, L)ⁿ` sampled with `N` points per axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridParams {
    pub dim: usize,
    pub points: usize,
    pub half_length: f64,
}

impl GridParams {
    pub fn new(dim: usize, points: usize, half_length: f64) -> Result<Self> {
        let p = Self {
            dim,
            points,
            half_length,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=2).contains(&self.dim) {
            return Err(Error::Unsupported(format!("grid fields in dimension {}", self.dim)));
        }
        if self.points < 64 || !self.points.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "points per axis must be a power of two >= 64, got {}",
                self.points
            )));
        }
        if !(self.half_length > 0.0 && self.half_length.is_finite()) {
            return Err(Error::InvalidParameter(format!("half length {} must be positive", self.half_length)));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    pub fn total(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points).map(|j| -self.half_length + j as f64 * h).collect()
    }

    /// Point for a row-major flat index (last axis fastest).
    pub fn point(&self, idx: usize) -> Vec<f64> {
        let h = self.spacing();
        let n = self.points;
        match self.dim {
            1 => vec![-self.half_length + idx as f64 * h],
            _ => vec![
                -self.half_length + (idx / n) as f64 * h,
                -self.half_length + (idx % n) as f64 * h,
            ],
        }
    }

    /// Angular frequency of FFT bin `j`; the Nyquist bin is read as `-N/2`.
    pub fn frequency(&self, j: usize) -> f64 {
        let n = self.points as i64;
        let k = if (j as i64) < n / 2 { j as i64 } else { j as i64 - n };
        std::f64::consts::PI * k as f64 / self.half_length
    }

    pub fn frequency_point(&self, idx: usize) -> Vec<f64> {
        let n = self.points;
        match self.dim {
            1 => vec![self.frequency(idx)],
            _ => vec![self.frequency(idx / n), self.frequency(idx % n)],
        }
    }

    /// Same spacing on twice the box.
    pub fn padded(&self) -> Self {
        Self {
            dim: self.dim,
            points: 2 * self.points,
            half_length: 2.0 * self.half_length,
        }
    }
}

/// Complex samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub grid: GridParams,
    pub samples: Vec<Complex64>,
    /// Values are real up to roundoff.
    pub real: bool,
    /// Sampled function is periodic on the box, so grid multipliers act exactly.
    pub periodic: bool,
}

impl GridField {
    pub fn from_fn<F>(grid: GridParams, real: bool, periodic: bool, f: F) -> Result<Self>
    where
        F: Fn(&[f64]) -> Complex64 + Sync,
    {
        grid.validate()?;
        let samples = (0..grid.total()).into_par_iter().map(|i| f(&grid.point(i))).collect();
        Ok(Self {
            grid,
            samples,
            real,
            periodic,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.samples.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Trapezoid (= rectangle on a periodic grid) integral.
    pub fn integral(&self) -> Complex64 {
        let w = self.grid.spacing().powi(self.grid.dim as i32);
        self.samples.iter().sum::<Complex64>() * w
    }

    pub fn l1_norm(&self) -> f64 {
        let w = self.grid.spacing().powi(self.grid.dim as i32);
        self.samples.iter().map(|z| z.norm()).sum::<f64>() * w
    }

    /// CSV with coordinate columns then `re,im`; a `# columns:` comment
    /// heads the file.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        match self.grid.dim {
            1 => writeln!(out, "# columns: x,re,im")?,
            _ => writeln!(out, "# columns: x,y,re,im")?,
        }
        for (i, z) in self.samples.iter().enumerate() {
            for c in self.grid.point(i) {
                write!(out, "{c:.17e},")?;
            }
            writeln!(out, "{:.17e},{:.17e}", z.re, z.im)?;
        }
        Ok(())
    }

    /// Little-endian f64 dump: header `[dim, N, N or 1, L, real, periodic, 0, 0]`
    /// followed by interleaved `re, im` samples in row-major order.
    pub fn to_binary(&self) -> Vec<u8> {
        let g = &self.grid;
        let header = [
            g.dim as f64,
            g.points as f64,
            if g.dim == 2 { g.points as f64 } else { 1.0 },
            g.half_length,
            f64::from(u8::from(self.real)),
            f64::from(u8::from(self.periodic)),
            0.0,
            0.0,
        ];
        let mut bytes = Vec::with_capacity(8 * (header.len() + 2 * self.samples.len()));
        for v in header {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        for z in &self.samples {
            bytes.extend_from_slice(&z.re.to_le_bytes());
            bytes.extend_from_slice(&z.im.to_le_bytes());
        }
        bytes
    }

    pub fn from_binary(bytes: &[u8]) -> Result<Self> {
        let bad = || Error::InvalidParameter("malformed grid field dump".into());
        if bytes.len() % 8 != 0 || bytes.len() < 64 {
            return Err(bad());
        }
        let vals: Vec<f64> = bytes
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
            .collect();
        let grid = GridParams::new(vals[0] as usize, vals[1] as usize, vals[3])?;
        let body = &vals[8..];
        if body.len() != 2 * grid.total() {
            return Err(bad());
        }
        Ok(Self {
            grid,
            samples: body.chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect(),
            real: vals[4] != 0.0,
            periodic: vals[5] != 0.0,
        })
    }
}

/// In-place forward or inverse transform along every axis; the inverse is
/// normalised.
pub(crate) fn fft_nd(data: &mut [Complex64], grid: &GridParams, inverse: bool) {
    let n = grid.points;
    let mut planner = FftPlanner::<f64>::new();
    let plan = if inverse {
        planner.plan_fft_inverse(n)
    } else {
        planner.plan_fft_forward(n)
    };
    match grid.dim {
        1 => plan.process(data),
        _ => {
            data.par_chunks_mut(n).for_each(|row| plan.process(row));
            let mut t = transpose(data, n);
            t.par_chunks_mut(n).for_each(|row| plan.process(row));
            data.copy_from_slice(&transpose(&t, n));
        }
    }
    if inverse {
        let scale = 1.0 / grid.total() as f64;
        data.iter_mut().for_each(|z| *z *= scale);
    }
}

fn transpose(data: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); data.len()];
    for i in 0..n {
        for j in 0..n {
            out[j * n + i] = data[i * n + j];
        }
    }
    out
}
