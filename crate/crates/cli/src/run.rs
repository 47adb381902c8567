use std::time::Instant;

use liouville_core::growth::{beta_of_direction, check_growth_condition, direction_set, GROWTH_CONDITION_NOTE};
use liouville_core::lab::{resolution_study, verify_harmonicity, HarmonicityOptions};
use liouville_core::levy::LevyTriplet;
use liouville_core::sim::{
    derive_seed, empirical_char, extend_space_time, lattice_coupling_demo, reflection_coupling, space_time_check,
    subordinated_char, subordinator_laplace, SIGMA_GATE,
};
use liouville_core::spectral::{
    coupling_verdict, find_zero_set, liouville_verdict, periodicity_group, polynomial_liouville_verdict,
    strong_liouville_verdict, Certificate, Verdict,
};
use liouville_core::Error;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::{AnalysisOutcome, AnalysisTiming, OutcomeStatus, Report, Timing, ToolInfo};
use crate::scenario::{Analysis, Scenario, SimCheck};

type Outcome = Result<(Value, String), Error>;

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

fn certificate_note(c: &Certificate) -> String {
    format!("box R={}, grid step {}, tol {:e}", c.box_radius, c.grid_step, c.tol)
}

fn verdict_outcome(v: Verdict) -> (Value, String) {
    let holds = v.holds();
    let status = serde_json::to_value(v.status).unwrap();
    let mut summary = format!(
        "holds={} (status {}) [{}]",
        holds.map_or("undetermined".to_string(), |h| h.to_string()),
        status.as_str().unwrap_or("?"),
        certificate_note(&v.certificate)
    );
    if let Some(w) = &v.witness {
        summary.push_str(&format!("; witness {}", w.describe()));
    }
    (json!({ "holds": holds, "verdict": to_value(&v) }), summary)
}

fn require_triplet(s: &Scenario) -> Result<&LevyTriplet, Error> {
    s.triplet()
        .ok_or_else(|| Error::Unsupported(format!("analysis needs a triplet symbol, got {}", s.symbol.label())))
}

fn require_growth(s: &Scenario) -> Result<&liouville_core::growth::GrowthFunction, Error> {
    s.growth
        .as_ref()
        .ok_or_else(|| Error::Precondition("analysis needs a growth function".into()))
}

fn gate(sigma: f64) -> bool {
    sigma <= SIGMA_GATE
}

fn run_check(check: &SimCheck, t: &LevyTriplet, m: usize, seed: u64) -> Outcome {
    let (value, pass) = match check {
        SimCheck::CharFunction { t: horizon, xi } => {
            let rows = xi
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    let r = empirical_char(t, *horizon, x, m, derive_seed(seed, k as u64))?;
                    let mut v = to_value(&r);
                    v["pass"] = json!(gate(r.comparison.deviation_sigma));
                    Ok(v)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let pass = rows.iter().all(|r| r["pass"] == json!(true));
            (json!({ "rows": rows }), pass)
        }
        SimCheck::SubordinatorLaplace { t: horizon, u } => {
            let rows = u
                .iter()
                .enumerate()
                .map(|(k, u)| {
                    let c = subordinator_laplace(*horizon, *u, m, derive_seed(seed, k as u64))?;
                    Ok(json!({ "t": horizon, "u": u, "pass": gate(c.deviation_sigma), "comparison": to_value(&c) }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let pass = rows.iter().all(|r| r["pass"] == json!(true));
            (json!({ "rows": rows }), pass)
        }
        SimCheck::SubordinatedChar { t: horizon, points } => {
            let rows = points
                .iter()
                .enumerate()
                .map(|(k, (tau, xi))| {
                    let r = subordinated_char(t, *horizon, *tau, xi, m, derive_seed(seed, k as u64))?;
                    let mut v = to_value(&r);
                    v["pass"] = json!(gate(r.comparison.deviation_sigma));
                    Ok(v)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let pass = rows.iter().all(|r| r["pass"] == json!(true));
            (json!({ "rows": rows }), pass)
        }
        SimCheck::SpaceTime { function, t_list, points } => {
            let r = space_time_check(function, t, t_list, points, m, seed)?;
            (to_value(&r), r.pass)
        }
        SimCheck::Extension { function, s, x } => {
            let r = extend_space_time(function, t, *s, x, m, seed)?;
            let pass = gate(r.deviation_sigma);
            (to_value(&r), pass)
        }
        SimCheck::ReflectionCoupling { x, y, horizon, step } => {
            let r = reflection_coupling(t, *x, *y, *horizon, *step, m, seed)?;
            let last = r.times.len() - 1;
            let se = r.std_error[last];
            let dev = r.cdf[last] - r.analytic[last];
            let sigma = if dev.abs() <= 1e-12 { 0.0 } else if se > 0.0 { dev.abs() / se } else { f64::INFINITY };
            let mut v = to_value(&r);
            v["at_horizon"] = json!({
                "t": r.times[last],
                "empirical": r.cdf[last],
                "std_error": se,
                "analytic": r.analytic[last],
                "deviation_sigma": sigma,
            });
            (v, gate(sigma))
        }
        SimCheck::LatticeCoupling { x, y, horizon, step } => {
            let r = lattice_coupling_demo(t, x, y, *horizon, *step, m, seed)?;
            (to_value(&r), r.never_met)
        }
    };
    let summary = format!("{}: {}", check.name(), if pass { "pass" } else { "FAIL" });
    let mut value = value;
    value["check"] = json!(check.name());
    value["pass"] = json!(pass);
    Ok((value, summary))
}

fn execute(s: &Scenario, analysis: &Analysis, seed: u64) -> Outcome {
    let params = s.search_params();
    let m = s.monte_carlo.samples;
    match analysis {
        Analysis::ZeroSet => {
            let r = find_zero_set(&s.symbol, params.box_radius, params.grid_step, params.tol)?;
            let class = to_value(&r.classification);
            let summary = format!(
                "{} zero(s), class {} [{}]",
                r.zeros.len(),
                class["class"].as_str().unwrap_or("?"),
                certificate_note(&params.into())
            );
            Ok((to_value(&r), summary))
        }
        Analysis::Liouville => Ok(verdict_outcome(liouville_verdict(&s.symbol, params)?)),
        Analysis::Polynomial { beta } => Ok(verdict_outcome(polynomial_liouville_verdict(&s.symbol, *beta, params)?)),
        Analysis::Strong => Ok(verdict_outcome(strong_liouville_verdict(
            require_triplet(s)?,
            require_growth(s)?,
            params,
        )?)),
        Analysis::Coupling { strong_feller } => {
            Ok(verdict_outcome(coupling_verdict(require_triplet(s)?, *strong_feller, params)?))
        }
        Analysis::Residual {
            witness,
            test_functions,
            rhs,
            doublings,
        } => {
            let options = HarmonicityOptions {
                grid: s.grid,
                rhs: rhs.clone(),
                threshold: None,
            };
            let r = verify_harmonicity(witness, &s.symbol, test_functions, &options)?;
            let mut value = json!({ "report": to_value(&r) });
            if *doublings > 0 {
                let rows = resolution_study(witness, &s.symbol, &test_functions[0], r.grid, *doublings)?;
                value["convergence"] = rows
                    .iter()
                    .map(|(n, z)| json!({ "points": n, "re": z.re, "im": z.im }))
                    .collect();
            }
            let summary = format!(
                "{}: max normalized residual {:.3e} ({}) on N={}, L={}",
                witness.describe(),
                r.max_normalized,
                if r.pass { "pass" } else { "FAIL" },
                r.grid.points,
                r.grid.half_length
            );
            Ok((value, summary))
        }
        Analysis::Simulation { checks } => {
            let t = require_triplet(s)?;
            let mut rows = Vec::with_capacity(checks.len());
            let mut lines = Vec::with_capacity(checks.len());
            for (j, c) in checks.iter().enumerate() {
                let (v, line) = run_check(c, t, m, derive_seed(seed, j as u64))?;
                rows.push(v);
                lines.push(line);
            }
            let pass = rows.iter().all(|r| r["pass"] == json!(true));
            Ok((json!({ "samples": m, "pass": pass, "checks": rows }), lines.join("; ")))
        }
        Analysis::BetaTable { directions, r_max } => {
            let g = require_growth(s)?;
            let rows = direction_set(g.dim, *directions)
                .into_iter()
                .map(|w| {
                    let analytic = beta_of_direction(g, &w, *r_max)?;
                    let (numeric, _) = g.beta_numeric(&w, *r_max)?;
                    let mut row = json!({ "omega": w, "beta": analytic, "beta_numeric": numeric });
                    if g.dim == 2 {
                        row["angle"] = json!(w[1].atan2(w[0]));
                    }
                    Ok(row)
                })
                .collect::<Result<Vec<_>, Error>>()?;
            let worst = rows
                .iter()
                .map(|r| (r["beta"].as_f64().unwrap_or(0.0) - r["beta_numeric"].as_f64().unwrap_or(0.0)).abs())
                .fold(0.0, f64::max);
            let summary = format!("{} directions, max |β - β_numeric| = {worst:.2e}", rows.len());
            Ok((json!({ "growth": g.label(), "r_max": r_max, "rows": rows }), summary))
        }
        Analysis::GrowthCondition { k } => {
            let g = require_growth(s)?;
            let holds = check_growth_condition(g, *k);
            Ok((
                json!({ "k": k, "holds": holds, "note": GROWTH_CONDITION_NOTE }),
                format!("Λ^-{k} · {} → 0: {holds}", g.label()),
            ))
        }
        Analysis::Periodicity => {
            let r = find_zero_set(&s.symbol, params.box_radius, params.grid_step, params.tol)?;
            let (group, summary) = match periodicity_group(&r) {
                Ok(g) => {
                    let v = to_value(&g);
                    let line = format!("group {}", v["group"].as_str().unwrap_or("?"));
                    (v, line)
                }
                Err(Error::NonLattice) => (Value::Null, "zero set is not a lattice; group not computed".into()),
                Err(e) => return Err(e),
            };
            Ok((
                json!({ "group": group, "zero_report": to_value(&r) }),
                format!("{summary} [{}]", certificate_note(&params.into())),
            ))
        }
        Analysis::Slice {
            direction,
            r_max,
            points,
        } => {
            let len = direction.iter().map(|v| v * v).sum::<f64>().sqrt();
            if len == 0.0 {
                return Err(Error::InvalidParameter("slice direction is zero".into()));
            }
            let w: Vec<f64> = direction.iter().map(|v| v / len).collect();
            let rows = (0..*points)
                .map(|k| {
                    let r = r_max * k as f64 / (*points - 1) as f64;
                    let xi: Vec<f64> = w.iter().map(|c| c * r).collect();
                    let z = s.symbol.evaluate(&xi)?;
                    Ok(json!({ "r": r, "xi": xi, "re": z.re, "im": z.im, "abs": z.norm() }))
                })
                .collect::<Result<Vec<_>, Error>>()?;
            Ok((json!({ "direction": w, "rows": rows }), format!("{points} points along {w:?}")))
        }
    }
}

/// Runs every analysis (concurrently; results are kept in declaration
/// order). Analysis `i` is seeded with `derive_seed(seed, i)`.
pub fn run_scenario(scenario: &Scenario, seed_override: Option<u64>) -> (Report, Timing) {
    let seed = seed_override.unwrap_or(scenario.seed);
    let start = Instant::now();
    let results: Vec<(AnalysisOutcome, f64)> = scenario
        .analyses
        .par_iter()
        .enumerate()
        .map(|(i, a)| {
            let analysis_seed = derive_seed(seed, i as u64);
            let t0 = Instant::now();
            let outcome = match execute(scenario, a, analysis_seed) {
                Ok((value, summary)) => AnalysisOutcome {
                    index: i,
                    analysis: a.name().into(),
                    seed: analysis_seed,
                    status: OutcomeStatus::Completed,
                    result: Some(value),
                    error: None,
                    summary,
                },
                Err(e) => AnalysisOutcome {
                    index: i,
                    analysis: a.name().into(),
                    seed: analysis_seed,
                    status: OutcomeStatus::Failed,
                    result: None,
                    error: Some(e.to_string()),
                    summary: format!("error: {e}"),
                },
            };
            (outcome, t0.elapsed().as_secs_f64())
        })
        .collect();
    let timing = Timing {
        analyses: results
            .iter()
            .map(|(o, secs)| AnalysisTiming {
                index: o.index,
                analysis: o.analysis.clone(),
                wall_clock_seconds: *secs,
            })
            .collect(),
        total_seconds: start.elapsed().as_secs_f64(),
        threads: rayon::current_num_threads(),
    };
    let report = Report {
        tool: ToolInfo::default(),
        scenario: scenario.clone(),
        seed,
        analyses: results.into_iter().map(|(o, _)| o).collect(),
    };
    (report, timing)
}
