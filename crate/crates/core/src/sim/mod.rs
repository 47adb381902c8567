//! Seeded Monte Carlo for Levy increments, the one-half-stable subordinator,
//! space-time harmonicity and coupling demonstrations.

mod characteristic;
mod coupling;
mod estimate;
mod increment;
mod rng;
mod space_time;

pub use characteristic::{
    empirical_char, increment_correlation, ks_distance, sample_stable_subordinator, subordinated_char,
    subordinator_laplace, CharReport, SubordinatedCharReport, MIN_SAMPLES,
};
pub use coupling::{
    lattice_base, lattice_coupling_demo, reflection_coupling, reflection_first_passage, CouplingCdf,
    LatticeDemoReport,
};
pub use estimate::{Comparison, Manifest, McEstimate};
pub use increment::{sample_increment, sample_path, IncrementSampler, PathSample};
pub use rng::{derive_seed, pairwise_sum, pairwise_sum_real, replica_rng, run_replicas, try_run_replicas, SimRng};
pub use space_time::{
    extend_space_time, space_time_check, ExtensionReport, SpaceTimeEntry, SpaceTimeFunction, SpaceTimePoint,
    SpaceTimeReport, SIGMA_GATE,
};
