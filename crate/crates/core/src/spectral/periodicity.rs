use serde::{Deserialize, Serialize};

use super::zeros::{Classification, ZeroSetReport};
use crate::error::{Error, Result};
use crate::linalg::inverse;

/// Periods shared by all bounded solutions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "group", rename_all = "snake_case")]
pub enum PeriodicityGroup {
    /// Every translation is a period: solutions are constant.
    FullSpace,
    LatticeDual { generators: Vec<Vec<f64>> },
    /// Lower-rank lattices leave a continuous factor that is not represented.
    NotComputed { reason: String },
}

/// `{x : γ·x ∈ 2πℤ for all γ}` for a full-rank lattice given by row
/// generators `G`, returned as the rows of `2π (G⁻¹)ᵀ`.
pub fn dual_lattice(generators: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = generators.len();
    if generators.iter().any(|g| g.len() != n) {
        return Err(Error::InvalidParameter("dual lattice needs a square generator matrix".into()));
    }
    let inv = inverse(generators).ok_or_else(|| Error::InvalidParameter("lattice generators are singular".into()))?;
    Ok((0..n)
        .map(|i| (0..n).map(|j| 2.0 * std::f64::consts::PI * inv[j][i]).collect())
        .collect())
}

pub fn periodicity_group(report: &ZeroSetReport) -> Result<PeriodicityGroup> {
    match &report.classification {
        Classification::OriginOnly | Classification::Empty => Ok(PeriodicityGroup::FullSpace),
        Classification::Lattice { generators } => {
            if generators.len() < report.dim {
                return Ok(PeriodicityGroup::NotComputed {
                    reason: format!("lattice of rank {} in dimension {}", generators.len(), report.dim),
                });
            }
            Ok(PeriodicityGroup::LatticeDual {
                generators: dual_lattice(generators)?,
            })
        }
        Classification::NonLattice => Err(Error::NonLattice),
        Classification::Undetermined { reason } => {
            Err(Error::Precondition(format!("zero set classification undetermined: {reason}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn report(classification: Classification, dim: usize) -> ZeroSetReport {
        ZeroSetReport {
            dim,
            zeros: vec![],
            classification,
            box_radius: 1.0,
            grid_step: 0.1,
            tol: 1e-8,
            stalled: vec![],
        }
    }

    #[test]
    fn origin_only_is_full_space() {
        assert_eq!(periodicity_group(&report(Classification::OriginOnly, 1)).unwrap(), PeriodicityGroup::FullSpace);
    }

    #[test]
    fn two_pi_lattice_has_integer_periods() {
        let r = report(Classification::Lattice { generators: vec![vec![2.0 * PI]] }, 1);
        let PeriodicityGroup::LatticeDual { generators } = periodicity_group(&r).unwrap() else { panic!() };
        assert!((generators[0][0] - 1.0).abs() < 1e-15);
        let r2 = report(
            Classification::Lattice {
                generators: vec![vec![2.0 * PI, 0.0], vec![0.0, 2.0 * PI]],
            },
            2,
        );
        let PeriodicityGroup::LatticeDual { generators } = periodicity_group(&r2).unwrap() else { panic!() };
        assert!((generators[0][0] - 1.0).abs() < 1e-15 && generators[0][1].abs() < 1e-15);
        assert!((generators[1][1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn dual_of_dual_round_trips() {
        for g in [vec![vec![3.7]], vec![vec![1.5, 0.0], vec![0.0, 0.25]], vec![vec![2.0, 1.0], vec![0.5, 3.0]]] {
            let back = dual_lattice(&dual_lattice(&g).unwrap()).unwrap();
            for (a, b) in back.iter().flatten().zip(g.iter().flatten()) {
                assert!((a - b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn non_lattice_is_refused() {
        assert!(matches!(periodicity_group(&report(Classification::NonLattice, 1)), Err(Error::NonLattice)));
    }
}
