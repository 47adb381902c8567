//! Liouville, polynomial, strong and coupling verdicts from zero sets.

use serde::{Deserialize, Serialize};

use super::zeros::{find_zero_set, find_zeros_of, Classification, SearchParams, ZeroSetReport};
use crate::error::{Error, Result};
use crate::growth::{pi_g_membership, GrowthFunction, DEFAULT_DIRECTIONS};
use crate::levy::{check_weight_moment, evaluate_exponent, evaluate_extension, LevyTriplet, MomentResult, Symbol};
use crate::linalg::{dot, norm, quad_form};

/// Closed-form function that multiplier-lab can sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessSpec {
    /// `e^{iγ·x}`
    ComplexExponential { gamma: Vec<f64> },
    /// `e^{θ·x}`
    RealExponential { theta: Vec<f64> },
    /// `Σ_k c_k x^k` on the line, `Σ_k c_k |x|^k` in higher dimensions.
    Polynomial { dim: usize, coefficients: Vec<f64> },
    /// `½(1 + cos(γ·x))`
    CosineAverage { gamma: Vec<f64> },
}

impl WitnessSpec {
    pub fn dim(&self) -> usize {
        match self {
            WitnessSpec::ComplexExponential { gamma } | WitnessSpec::CosineAverage { gamma } => gamma.len(),
            WitnessSpec::RealExponential { theta } => theta.len(),
            WitnessSpec::Polynomial { dim, .. } => *dim,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            WitnessSpec::ComplexExponential { gamma } => format!("e^{{iγ·x}}, γ = {gamma:?}"),
            WitnessSpec::RealExponential { theta } => format!("e^{{θ·x}}, θ = {theta:?}"),
            WitnessSpec::Polynomial { coefficients, .. } => format!("polynomial with coefficients {coefficients:?}"),
            WitnessSpec::CosineAverage { gamma } => format!("½(1+cos(γ·x)), γ = {gamma:?}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictKind {
    Liouville,
    PolynomialLiouville,
    StrongLiouville,
    Coupling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VerdictStatus {
    Holds,
    Fails,
    /// Coupling condition holds but strong Feller was not declared.
    ConditionHolds,
    /// Coupling condition fails; strong Feller was not declared.
    ConditionFails,
    Undetermined,
}

/// The numerical scope every verdict is relative to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub box_radius: f64,
    pub grid_step: f64,
    pub tol: f64,
}

impl From<SearchParams> for Certificate {
    fn from(p: SearchParams) -> Self {
        Self {
            box_radius: p.box_radius,
            grid_step: p.grid_step,
            tol: p.tol,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub kind: VerdictKind,
    pub status: VerdictStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    pub assumptions: Vec<String>,
    pub certificate: Certificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zero_report: Option<ZeroSetReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extension_report: Option<ZeroSetReport>,
}

impl Verdict {
    /// `Some(true/false)` for decided verdicts (including the coupling
    /// condition without the strong Feller declaration), `None` when
    /// undetermined.
    pub fn holds(&self) -> Option<bool> {
        match self.status {
            VerdictStatus::Holds | VerdictStatus::ConditionHolds => Some(true),
            VerdictStatus::Fails | VerdictStatus::ConditionFails => Some(false),
            VerdictStatus::Undetermined => None,
        }
    }

    fn new(kind: VerdictKind, status: VerdictStatus, params: SearchParams) -> Self {
        Self {
            kind,
            status,
            witness: None,
            max_degree: None,
            assumptions: vec![scope_note(params)],
            certificate: params.into(),
            zero_report: None,
            extension_report: None,
        }
    }
}

fn scope_note(p: SearchParams) -> String {
    format!(
        "zero set searched on [-{r}, {r}]^n with grid step {h} and tolerance {t:e}; conclusions hold relative to this search only",
        r = p.box_radius,
        h = p.grid_step,
        t = p.tol
    )
}

fn smallest_nonzero(report: &ZeroSetReport) -> Option<Vec<f64>> {
    report.nonzero_by_norm().first().map(|z| z.point.clone())
}

fn liouville_from_report(kind: VerdictKind, report: ZeroSetReport, params: SearchParams) -> Verdict {
    let status = match &report.classification {
        Classification::Empty | Classification::OriginOnly => VerdictStatus::Holds,
        Classification::Lattice { .. } | Classification::NonLattice => VerdictStatus::Fails,
        Classification::Undetermined { .. } => VerdictStatus::Undetermined,
    };
    let mut v = Verdict::new(kind, status, params);
    if status == VerdictStatus::Fails {
        v.witness = smallest_nonzero(&report).map(|gamma| WitnessSpec::ComplexExponential { gamma });
    }
    if report.classification == Classification::Empty {
        v.assumptions
            .push("zero set is empty: f ≡ 0 is the only constant solution (only constant is 0)".into());
    }
    v.zero_report = Some(report);
    v
}

/// Bounded solutions of `m(D)f = 0` are constant iff `{m = 0} ⊆ {0}`.
pub fn liouville_verdict(symbol: &Symbol, params: SearchParams) -> Result<Verdict> {
    let report = find_zero_set(symbol, params.box_radius, params.grid_step, params.tol)?;
    Ok(liouville_from_report(VerdictKind::Liouville, report, params))
}

fn jump_measure(symbol: &Symbol) -> Option<&crate::levy::JumpMeasure> {
    match symbol {
        Symbol::Triplet(t) => Some(&t.nu),
        Symbol::Generalized(k) => Some(&k.nu),
        Symbol::Scaled { inner, .. } => jump_measure(inner),
        Symbol::ClosedForm { .. } => None,
    }
}

fn require_moment(nu: &crate::levy::JumpMeasure, g: &GrowthFunction) -> Result<f64> {
    match check_weight_moment(nu, g)? {
        MomentResult::Finite { value } => Ok(value),
        MomentResult::Infinite { reason } => Err(Error::Precondition(format!(
            "∫_{{|y|≥1}} {} ν(dy) diverges ({reason})",
            g.label()
        ))),
    }
}

/// Polynomially bounded solutions (`|f| ≤ C Λ^β`) are polynomials of degree
/// at most `⌊β⌋`, capped at 1 for one-dimensional Levy generators.
pub fn polynomial_liouville_verdict(symbol: &Symbol, beta: f64, params: SearchParams) -> Result<Verdict> {
    if !(beta >= 0.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("β = {beta} must be finite and >= 0")));
    }
    let n = symbol.dim();
    let weight = GrowthFunction::lambda_weight(n, beta);
    let mut notes = Vec::new();
    if let Some(nu) = jump_measure(symbol) {
        let m = require_moment(nu, &weight)?;
        notes.push(format!("checked: ∫_{{|y|≥1}} Λ(y)^{beta} ν(dy) = {m:.6e} is finite"));
    } else {
        notes.push("closed-form symbol: mapping of test functions into the weighted space is trusted".into());
    }
    let report = find_zero_set(symbol, params.box_radius, params.grid_step, params.tol)?;
    let mut v = liouville_from_report(VerdictKind::PolynomialLiouville, report, params);
    let mut degree = beta.floor() as u32;
    if n == 1 && symbol.triplet().is_some() {
        degree = degree.min(1);
        notes.push("one-dimensional Levy generator: solutions are affine, degree capped at 1".into());
    }
    v.max_degree = Some(degree);
    v.assumptions.extend(notes);
    Ok(v)
}

/// Among `{b, Qb, ±e_i}`, directions `c` with `c·Qc > 0` and `b·c ≠ 0` give
/// nonzero extension zeros `τc`, `τ = -2 b·c / (c·Qc)`, of a drift-diffusion
/// exponent.
fn drift_diffusion_zeros(t: &LevyTriplet) -> Vec<Vec<f64>> {
    let n = t.dim();
    let qb = crate::linalg::mat_vec(&t.q, &t.b);
    let mut candidates = vec![t.b.clone(), qb];
    for i in 0..n {
        let mut e = vec![0.0; n];
        e[i] = 1.0;
        candidates.push(e);
    }
    candidates
        .into_iter()
        .filter_map(|c| {
            let cqc = quad_form(&t.q, &c);
            let bc = dot(&t.b, &c);
            (cqc > 1e-14 && bc.abs() > 1e-14).then(|| {
                let tau = -2.0 * bc / cqc;
                c.iter().map(|ci| tau * ci).collect()
            })
        })
        .collect()
}

/// Positive solutions bounded by `g` are constant iff the real zero set is
/// `{0}` and no nonzero zero of `ψ(-i·)` lies in `Π_g`.
pub fn strong_liouville_verdict(triplet: &LevyTriplet, g: &GrowthFunction, params: SearchParams) -> Result<Verdict> {
    triplet.validate()?;
    g.validate()?;
    crate::error::check_dim(triplet.dim(), g.dim)?;
    let m = require_moment(&triplet.nu, g)?;
    let symbol = Symbol::Triplet(triplet.clone());
    let report = find_zero_set(&symbol, params.box_radius, params.grid_step, params.tol)?;
    let mut v = Verdict::new(VerdictKind::StrongLiouville, VerdictStatus::Holds, params);
    v.assumptions
        .push(format!("checked: ∫_{{|y|≥1}} {} ν(dy) = {m:.6e} is finite", g.label()));
    match &report.classification {
        Classification::Undetermined { .. } => {
            v.status = VerdictStatus::Undetermined;
            v.zero_report = Some(report);
            return Ok(v);
        }
        Classification::Lattice { .. } | Classification::NonLattice => {
            v.status = VerdictStatus::Fails;
            v.witness = smallest_nonzero(&report).map(|gamma| WitnessSpec::CosineAverage { gamma });
            v.zero_report = Some(report);
            return Ok(v);
        }
        _ => {}
    }
    v.zero_report = Some(report);

    if g.envelope_is_trivial() {
        v.assumptions
            .push(format!("Π_g = {{0}} for g = {}: extension zeros cannot lie in it", g.label()));
        return Ok(v);
    }
    if triplet.nu.is_zero() {
        if let Some(theta) = drift_diffusion_zeros(triplet)
            .into_iter()
            .find(|th| pi_g_membership(g, th, DEFAULT_DIRECTIONS))
        {
            v.status = VerdictStatus::Fails;
            v.assumptions
                .push("drift-diffusion: extension zero τc with τ = -2b·c/(c·Qc) found in closed form".into());
            v.witness = Some(WitnessSpec::RealExponential { theta });
            return Ok(v);
        }
    }
    // only the part of the box that can meet Π_g matters
    let reach = g.max_rate() * 1.05;
    let ext_params = SearchParams::new(params.box_radius.min(reach.max(params.grid_step * 2.0)), params.grid_step, params.tol);
    let ext = find_zeros_of(
        |eta| match evaluate_extension(triplet, eta) {
            Ok(val) => Ok(val.abs()),
            Err(Error::ExtensionUndefined { .. }) => Ok(f64::INFINITY),
            Err(e) => Err(e),
        },
        triplet.dim(),
        ext_params,
    )?;
    let h = params.grid_step;
    let offending = ext
        .zeros
        .iter()
        .filter(|z| norm(&z.point) > h)
        .filter(|z| pi_g_membership(g, &z.point, DEFAULT_DIRECTIONS))
        .max_by(|a, b| norm(&a.point).total_cmp(&norm(&b.point)));
    if let Some(z) = offending {
        v.status = VerdictStatus::Fails;
        v.witness = Some(WitnessSpec::RealExponential { theta: z.point.clone() });
    } else if matches!(ext.classification, Classification::Undetermined { .. }) {
        v.status = VerdictStatus::Undetermined;
    }
    v.extension_report = Some(ext);
    Ok(v)
}

/// Coupling holds for strong Feller processes iff `Re ψ` vanishes only at 0.
/// Without the declaration only the condition is reported.
pub fn coupling_verdict(triplet: &LevyTriplet, strong_feller_declared: bool, params: SearchParams) -> Result<Verdict> {
    triplet.validate()?;
    let report = find_zeros_of(
        |xi| evaluate_exponent(triplet, xi).map(|v| v.re.abs()),
        triplet.dim(),
        params,
    )?;
    let condition = match &report.classification {
        Classification::Empty | Classification::OriginOnly => Some(true),
        Classification::Lattice { .. } | Classification::NonLattice => Some(false),
        Classification::Undetermined { .. } => None,
    };
    let status = match (condition, strong_feller_declared) {
        (None, _) => VerdictStatus::Undetermined,
        (Some(true), true) => VerdictStatus::Holds,
        (Some(false), true) => VerdictStatus::Fails,
        (Some(true), false) => VerdictStatus::ConditionHolds,
        (Some(false), false) => VerdictStatus::ConditionFails,
    };
    let mut v = Verdict::new(VerdictKind::Coupling, status, params);
    v.assumptions.push(if strong_feller_declared {
        "strong Feller property declared by the user, not verified".into()
    } else {
        "strong Feller not declared: only the condition {Re ψ = 0} = {0} is reported".into()
    });
    v.zero_report = Some(report);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::levy::JumpMeasure;
    use std::f64::consts::PI;

    fn p1() -> SearchParams {
        SearchParams::default_for(1)
    }

    fn poisson() -> LevyTriplet {
        LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1)
    }

    #[test]
    fn liouville_both_directions() {
        assert_eq!(liouville_verdict(&Symbol::brownian(1), p1()).unwrap().holds(), Some(true));
        let v = liouville_verdict(&Symbol::Triplet(poisson()), p1()).unwrap();
        assert_eq!(v.holds(), Some(false));
        let Some(WitnessSpec::ComplexExponential { gamma }) = v.witness else { panic!() };
        assert!((gamma[0] - 2.0 * PI).abs() < 1e-6);
    }

    #[test]
    fn empty_zero_set_annotated() {
        let v = liouville_verdict(&Symbol::one_plus_square(1), p1()).unwrap();
        assert_eq!(v.holds(), Some(true));
        assert!(v.assumptions.iter().any(|a| a.contains("only constant is 0")));
    }

    #[test]
    fn polynomial_degree_caps() {
        let v = polynomial_liouville_verdict(&Symbol::biharmonic(1), 2.0, p1()).unwrap();
        assert_eq!((v.holds(), v.max_degree), (Some(true), Some(2)));
        let v = polynomial_liouville_verdict(&Symbol::brownian(1), 2.0, p1()).unwrap();
        assert_eq!((v.holds(), v.max_degree), (Some(true), Some(1)));
        let v = polynomial_liouville_verdict(&Symbol::Triplet(poisson()), 0.0, p1()).unwrap();
        assert_eq!(v.holds(), Some(false));
    }

    #[test]
    fn polynomial_moment_precondition() {
        let nu = JumpMeasure::zero().with_radial(crate::levy::RadialFamily::stable_like(1.0, 1.5));
        let s = Symbol::Triplet(LevyTriplet::pure_jump(nu, 1));
        assert!(matches!(polynomial_liouville_verdict(&s, 2.0, p1()), Err(Error::Precondition(_))));
    }

    #[test]
    fn drift_diffusion_strong_counterexample() {
        let t = LevyTriplet::diffusion(vec![1.0, 0.0], vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
        let params = SearchParams::default_for(2);
        let v = strong_liouville_verdict(&t, &GrowthFunction::exponential(2, 2.5), params).unwrap();
        assert_eq!(v.holds(), Some(false));
        let Some(WitnessSpec::RealExponential { theta }) = &v.witness else { panic!() };
        assert!((theta[0] + 2.0).abs() < 1e-12 && theta[1].abs() < 1e-12);
        let v = strong_liouville_verdict(&t, &GrowthFunction::poly(2, 3.0), params).unwrap();
        assert_eq!(v.holds(), Some(true));
    }

    #[test]
    fn brownian_strong_liouville_holds() {
        let v = strong_liouville_verdict(&LevyTriplet::brownian(1), &GrowthFunction::exponential(1, 2.0), p1()).unwrap();
        assert_eq!(v.holds(), Some(true));
    }

    #[test]
    fn jump_extension_zero_inside_envelope() {
        // ψ(-iη) = -bη + (1 - e^{η}); with b = -1/2 the nonzero root is
        // bracketed in [-3, -0.5] and located by bisection
        let t = LevyTriplet::new(vec![-0.5], vec![vec![0.0]], JumpMeasure::dirac(vec![1.0], 1.0)).unwrap();
        let f = |e: f64| 0.5 * e + 1.0 - e.exp();
        let (mut lo, mut hi) = (-3.0, -0.5);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if f(lo) * f(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        let v = strong_liouville_verdict(&t, &GrowthFunction::exponential(1, 2.0), p1()).unwrap();
        assert_eq!(v.holds(), Some(false), "{:?}", v.extension_report);
        let Some(WitnessSpec::RealExponential { theta }) = &v.witness else { panic!() };
        assert!((theta[0] - lo).abs() < 1e-6, "{theta:?} vs {lo}");
    }

    #[test]
    fn coupling_cases() {
        let params = p1();
        assert_eq!(coupling_verdict(&LevyTriplet::brownian(1), true, params).unwrap().status, VerdictStatus::Holds);
        let drift = coupling_verdict(&LevyTriplet::drift(vec![1.0]), true, params).unwrap();
        assert_eq!(drift.holds(), Some(false));
        let lattice = coupling_verdict(&poisson(), false, params).unwrap();
        assert_eq!(lattice.status, VerdictStatus::ConditionFails);
        assert_eq!(lattice.holds(), Some(false));
    }
}
