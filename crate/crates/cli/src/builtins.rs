use liouville_core::growth::GrowthFunction;
use liouville_core::levy::{JumpMeasure, LevyTriplet, RadialFamily, Symbol};
use liouville_core::spectral::WitnessSpec;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Category {
    Symbol,
    Growth,
    Witness,
}

#[derive(Debug, Clone, Serialize)]
pub struct Entry {
    pub category: Category,
    pub name: String,
    /// Definition in the notation used throughout the reports.
    pub notation: String,
    /// A JSON fragment that can be pasted into a scenario.
    pub example: Value,
}

fn entry<T: Serialize>(category: Category, name: &str, notation: &str, example: &T) -> Entry {
    Entry {
        category,
        name: name.into(),
        notation: notation.into(),
        example: serde_json::to_value(example).expect("builtin serializes"),
    }
}

pub fn catalog() -> Vec<Entry> {
    let poisson = LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1);
    let drift_diffusion = LevyTriplet::diffusion(vec![1.0, 0.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    let stable_jumps = LevyTriplet::pure_jump(
        JumpMeasure::zero().with_radial(RadialFamily::stable_like(1.0, 1.5).with_cutoffs(0.1, None)),
        1,
    );
    let exp_jumps = LevyTriplet::pure_jump(JumpMeasure::zero().with_radial(RadialFamily::truncated_exponential(1.0, 2.0)), 1);
    vec![
        entry(Category::Symbol, "brownian", "½|ξ|²", &Symbol::brownian(1)),
        entry(Category::Symbol, "stable", "stable |ξ|^α", &Symbol::stable(1, 1.5)),
        entry(Category::Symbol, "one_plus_square", "1+|ξ|²", &Symbol::one_plus_square(1)),
        entry(Category::Symbol, "biharmonic", "|ξ|⁴", &Symbol::biharmonic(2)),
        entry(Category::Symbol, "poisson", "1−e^{iξ} (ν = δ₁)", &Symbol::Triplet(poisson)),
        entry(Category::Symbol, "drift", "−ib·ξ", &Symbol::Triplet(LevyTriplet::drift(vec![1.0]))),
        entry(Category::Symbol, "drift_diffusion", "−ib·ξ + ½ξ·Qξ", &Symbol::Triplet(drift_diffusion)),
        entry(Category::Symbol, "stable_like_jumps", "c|y|^{-n-α} on ε ≤ |y|", &Symbol::Triplet(stable_jumps)),
        entry(Category::Symbol, "exponential_jumps", "c e^{-λ|y|}", &Symbol::Triplet(exp_jumps)),
        entry(Category::Growth, "poly", "(1+|x|)^λ", &GrowthFunction::poly(2, 3.0)),
        entry(Category::Growth, "lambda_weight", "Λ(x)^β = (1+|x|²)^{β/2}", &GrowthFunction::lambda_weight(2, 2.0)),
        entry(Category::Growth, "stretched_exp", "e^{α|x|^β} for β ∈ [0,1]", &GrowthFunction::stretched_exp(2, 1.0, 0.5)),
        entry(Category::Growth, "half_exp", "max{e^{x·v}, 1}", &GrowthFunction::half_exp(vec![1.0, 0.0])),
        entry(Category::Growth, "log_weight", "log^β(|x|+e)", &GrowthFunction::log_weight(2, 2.0)),
        entry(
            Category::Witness,
            "complex_exponential",
            "e^{iγ·x}",
            &WitnessSpec::ComplexExponential { gamma: vec![2.0 * std::f64::consts::PI] },
        ),
        entry(Category::Witness, "real_exponential", "e^{θ·x}", &WitnessSpec::RealExponential { theta: vec![-2.0, 0.0] }),
        entry(
            Category::Witness,
            "polynomial",
            "Σ c_k x^k (|x|^k for n ≥ 2)",
            &WitnessSpec::Polynomial { dim: 1, coefficients: vec![0.0, 0.0, 1.0] },
        ),
        entry(
            Category::Witness,
            "cosine_average",
            "½(1+cos(ξ⁰·x))",
            &WitnessSpec::CosineAverage { gamma: vec![2.0 * std::f64::consts::PI] },
        ),
    ]
}

pub fn render_text(entries: &[Entry]) -> String {
    let mut out = String::new();
    for (cat, title) in [
        (Category::Symbol, "symbols"),
        (Category::Growth, "growth families"),
        (Category::Witness, "witness kinds"),
    ] {
        out.push_str(title);
        out.push('\n');
        for e in entries.iter().filter(|e| e.category == cat) {
            out.push_str(&format!("  {:<20} {}\n", e.name, e.notation));
        }
    }
    out
}
