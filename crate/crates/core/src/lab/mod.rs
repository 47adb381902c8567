//! Fourier multipliers on periodic boxes and weak residuals `⟨f, m̃(D)φ⟩`.

mod grid;
mod multiplier;
mod test_function;
mod witness;

pub use grid::{GridField, GridParams};
pub use multiplier::{
    apply_multiplier, apply_reflected, apply_with_diagnostics, required_margin, weak_residual, weak_residual_detail,
    ResidualDetail, SpectralDiagnostics, ALIASING_THRESHOLD,
};
pub use test_function::{TestFunction, TestKind};
pub use witness::{
    default_grid, make_witness, resolution_study, verify_harmonicity, witness_value, HarmonicityOptions,
    HarmonicityReport, ResidualEntry, WitnessField, HARMONICITY_THRESHOLD,
};
