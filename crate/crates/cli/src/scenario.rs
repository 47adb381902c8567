use std::path::Path;

use liouville_core::growth::GrowthFunction;
use liouville_core::lab::{GridParams, TestFunction};
use liouville_core::levy::{LevyTriplet, Symbol};
use liouville_core::sim::{SpaceTimeFunction, SpaceTimePoint};
use liouville_core::spectral::{SearchParams, WitnessSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub symbol: Symbol,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthFunction>,
    #[serde(default)]
    pub analyses: Vec<Analysis>,
    /// Zero-set search; defaults depend on the dimension.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchParams>,
    /// Residual grid; defaults to the witness's own default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridParams>,
    #[serde(default)]
    pub monte_carlo: MonteCarlo,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonteCarlo {
    pub samples: usize,
}

impl Default for MonteCarlo {
    fn default() -> Self {
        Self { samples: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "analysis", rename_all = "snake_case", deny_unknown_fields)]
pub enum Analysis {
    ZeroSet,
    Liouville,
    Polynomial {
        beta: f64,
    },
    Strong,
    Coupling {
        #[serde(default)]
        strong_feller: bool,
    },
    Residual {
        witness: WitnessSpec,
        test_functions: Vec<TestFunction>,
        /// Right-hand-side polynomial coefficients.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rhs: Option<Vec<f64>>,
        /// Extra resolution doublings for a convergence table.
        #[serde(default)]
        doublings: usize,
    },
    Simulation {
        checks: Vec<SimCheck>,
    },
    BetaTable {
        #[serde(default = "default_directions")]
        directions: usize,
        #[serde(default = "default_r_max")]
        r_max: f64,
    },
    GrowthCondition {
        k: u32,
    },
    Periodicity,
    /// `m` along a ray, for plotting.
    Slice {
        direction: Vec<f64>,
        r_max: f64,
        points: usize,
    },
}

fn default_directions() -> usize {
    16
}

fn default_r_max() -> f64 {
    200.0
}

impl Analysis {
    pub fn name(&self) -> &'static str {
        match self {
            Analysis::ZeroSet => "zero_set",
            Analysis::Liouville => "liouville",
            Analysis::Polynomial { .. } => "polynomial",
            Analysis::Strong => "strong",
            Analysis::Coupling { .. } => "coupling",
            Analysis::Residual { .. } => "residual",
            Analysis::Simulation { .. } => "simulation",
            Analysis::BetaTable { .. } => "beta_table",
            Analysis::GrowthCondition { .. } => "growth_condition",
            Analysis::Periodicity => "periodicity",
            Analysis::Slice { .. } => "slice",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum SimCheck {
    CharFunction {
        t: f64,
        xi: Vec<Vec<f64>>,
    },
    SubordinatorLaplace {
        t: f64,
        u: Vec<f64>,
    },
    SubordinatedChar {
        t: f64,
        /// `(τ, ξ)` pairs.
        points: Vec<(f64, Vec<f64>)>,
    },
    SpaceTime {
        function: SpaceTimeFunction,
        t_list: Vec<f64>,
        points: Vec<SpaceTimePoint>,
    },
    Extension {
        function: SpaceTimeFunction,
        s: f64,
        x: Vec<f64>,
    },
    ReflectionCoupling {
        x: f64,
        y: f64,
        horizon: f64,
        step: f64,
    },
    LatticeCoupling {
        x: Vec<f64>,
        y: Vec<f64>,
        horizon: f64,
        step: f64,
    },
}

impl SimCheck {
    pub fn name(&self) -> &'static str {
        match self {
            SimCheck::CharFunction { .. } => "char_function",
            SimCheck::SubordinatorLaplace { .. } => "subordinator_laplace",
            SimCheck::SubordinatedChar { .. } => "subordinated_char",
            SimCheck::SpaceTime { .. } => "space_time",
            SimCheck::Extension { .. } => "extension",
            SimCheck::ReflectionCoupling { .. } => "reflection_coupling",
            SimCheck::LatticeCoupling { .. } => "lattice_coupling",
        }
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| CliError::Schema {
            path: e.path().to_string(),
            message: e.inner().to_string(),
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn search_params(&self) -> SearchParams {
        self.search.unwrap_or_else(|| SearchParams::default_for(self.symbol.dim()))
    }

    pub fn triplet(&self) -> Option<&LevyTriplet> {
        match &self.symbol {
            Symbol::Triplet(t) => Some(t),
            _ => None,
        }
    }

    /// Checks that every analysis can be set up from the declared specs.
    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |path: String, message: String| CliError::Invalid { path, message };
        self.symbol.validate().map_err(|e| invalid("symbol".into(), e.to_string()))?;
        let n = self.symbol.dim();
        if let Some(g) = &self.growth {
            g.validate().map_err(|e| invalid("growth".into(), e.to_string()))?;
            if g.dim != n {
                return Err(invalid("growth.dim".into(), format!("growth dimension {} differs from symbol dimension {n}", g.dim)));
            }
        }
        if let Some(p) = &self.search {
            if !(p.box_radius > 0.0 && p.grid_step > 0.0 && p.grid_step < p.box_radius && p.tol > 0.0) {
                return Err(invalid("search".into(), "need 0 < grid_step < box_radius and tol > 0".into()));
            }
        }
        if let Some(g) = &self.grid {
            g.validate().map_err(|e| invalid("grid".into(), e.to_string()))?;
        }
        if self.monte_carlo.samples < liouville_core::sim::MIN_SAMPLES {
            return Err(invalid(
                "monte_carlo.samples".into(),
                format!("at least {} samples required", liouville_core::sim::MIN_SAMPLES),
            ));
        }
        for (i, a) in self.analyses.iter().enumerate() {
            let at = |field: &str| format!("analyses[{i}]{field}");
            match a {
                Analysis::Strong | Analysis::BetaTable { .. } if self.growth.is_none() => {
                    return Err(invalid(at(""), format!("{} needs a growth function", a.name())));
                }
                Analysis::Strong if self.triplet().is_none() => {
                    return Err(invalid(at(""), "strong needs a triplet symbol".into()));
                }
                Analysis::GrowthCondition { .. } if self.growth.is_none() => {
                    return Err(invalid(at(""), "growth_condition needs a growth function".into()));
                }
                Analysis::Polynomial { beta } if !(*beta >= 0.0) => {
                    return Err(invalid(at(".beta"), format!("β = {beta} must be non-negative")));
                }
                Analysis::Coupling { .. } if self.triplet().is_none() => {
                    return Err(invalid(at(""), "coupling needs a triplet symbol".into()));
                }
                Analysis::Residual {
                    witness,
                    test_functions,
                    ..
                } => {
                    if witness.dim() != n || !(1..=2).contains(&n) {
                        return Err(invalid(at(".witness"), format!("witness must have the symbol's dimension {n} (1 or 2)")));
                    }
                    if test_functions.is_empty() {
                        return Err(invalid(at(".test_functions"), "at least one test function".into()));
                    }
                    for (j, phi) in test_functions.iter().enumerate() {
                        phi.validate().map_err(|e| invalid(at(&format!(".test_functions[{j}]")), e.to_string()))?;
                        if phi.dim() != n {
                            return Err(invalid(at(&format!(".test_functions[{j}].center")), "dimension mismatch".into()));
                        }
                    }
                }
                Analysis::Simulation { checks } => {
                    let Some(t) = self.triplet() else {
                        return Err(invalid(at(""), "simulation needs a triplet symbol".into()));
                    };
                    for (j, c) in checks.iter().enumerate() {
                        validate_check(c, t.dim()).map_err(|m| invalid(at(&format!(".checks[{j}]")), m))?;
                    }
                }
                Analysis::Slice { direction, points, r_max } => {
                    if direction.len() != n || *points < 2 || !(*r_max > 0.0) {
                        return Err(invalid(at(""), "slice needs a direction of the symbol's dimension, r_max > 0, points >= 2".into()));
                    }
                }
                Analysis::BetaTable { directions, .. } if *directions == 0 => {
                    return Err(invalid(at(".directions"), "at least one direction".into()));
                }
                _ => {}
            }
        }
        Ok(())
    }
}

fn validate_check(c: &SimCheck, n: usize) -> Result<(), String> {
    let positive = |v: f64, what: &str| {
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(format!("{what} must be positive"))
        }
    };
    match c {
        SimCheck::CharFunction { t, xi } => {
            positive(*t, "t")?;
            if xi.iter().any(|x| x.len() != n) {
                return Err("frequency dimension mismatch".into());
            }
        }
        SimCheck::SubordinatorLaplace { t, u } => {
            positive(*t, "t")?;
            if u.iter().any(|v| *v < 0.0) {
                return Err("Laplace arguments must be non-negative".into());
            }
        }
        SimCheck::SubordinatedChar { t, points } => {
            positive(*t, "t")?;
            if points.iter().any(|(_, x)| x.len() != n) {
                return Err("frequency dimension mismatch".into());
            }
        }
        SimCheck::SpaceTime { t_list, points, .. } => {
            for t in t_list {
                positive(*t, "t")?;
            }
            if points.iter().any(|p| p.x.len() != n) {
                return Err("point dimension mismatch".into());
            }
        }
        SimCheck::Extension { x, .. } => {
            if x.len() != n {
                return Err("point dimension mismatch".into());
            }
        }
        SimCheck::ReflectionCoupling { horizon, step, .. } | SimCheck::LatticeCoupling { horizon, step, .. } => {
            positive(*horizon, "horizon")?;
            positive(*step, "step")?;
            if let SimCheck::LatticeCoupling { x, y, .. } = c {
                if x.len() != n || y.len() != n {
                    return Err("start point dimension mismatch".into());
                }
            }
        }
    }
    Ok(())
}
