//! Zero sets of symbols and the verdicts drawn from them.

mod periodicity;
mod verdicts;
mod zeros;

pub use periodicity::{dual_lattice, periodicity_group, PeriodicityGroup};
pub use verdicts::{
    coupling_verdict, liouville_verdict, polynomial_liouville_verdict, strong_liouville_verdict, Certificate, Verdict,
    VerdictKind, VerdictStatus, WitnessSpec,
};
pub use zeros::{find_zero_set, find_zeros_of, Classification, SearchParams, Zero, ZeroSetReport};
