use liouville_core::lab::{
    apply_multiplier, apply_reflected, make_witness, resolution_study, weak_residual, GridField, GridParams,
    TestFunction,
};
use liouville_core::levy::{Atom, JumpMeasure, LevyTriplet, Symbol};
use liouville_core::spectral::WitnessSpec;
use liouville_core::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn zoo() -> Vec<Symbol> {
    vec![
        Symbol::brownian(1),
        Symbol::stable(1, 1.5),
        Symbol::one_plus_square(1),
        Symbol::biharmonic(1),
        Symbol::Triplet(LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1)),
        Symbol::Triplet(
            LevyTriplet::new(
                vec![0.7],
                vec![vec![0.3]],
                JumpMeasure::from_atoms(vec![Atom::new(vec![0.4], 1.0), Atom::new(vec![-2.0], 0.5)]),
            )
            .unwrap(),
        ),
    ]
}

fn pairing(a: &GridField, b: &GridField) -> Complex64 {
    let w = a.grid.spacing();
    a.samples.iter().zip(&b.samples).map(|(x, y)| x * y).sum::<Complex64>() * w
}

/// Trigonometric polynomial with on-grid frequencies `π k / L`.
fn trig(grid: GridParams, coeffs: &[(i32, f64, f64)]) -> GridField {
    let l = grid.half_length;
    GridField::from_fn(grid, false, true, |x| {
        coeffs
            .iter()
            .map(|(k, re, im)| Complex64::new(*re, *im) * Complex64::from_polar(1.0, PI * f64::from(*k) * x[0] / l))
            .sum()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5))]

    #[test]
    fn adjoint_identity(
        which in 0usize..6,
        coeffs in prop::collection::vec((-20i32..20, -1.0f64..1.0, -1.0f64..1.0), 1..5),
        c in -2.0f64..2.0,
    ) {
        let m = &zoo()[which];
        let grid = GridParams::new(1, 512, 8.0).unwrap();
        let f = trig(grid, &coeffs);
        let phi = TestFunction::mollifier(vec![c], 3.0).sample(grid).unwrap();
        let lhs = pairing(&apply_multiplier(m, &f).unwrap(), &phi);
        let rhs = pairing(&f, &apply_reflected(m, &phi).unwrap().0);
        let scale = lhs.norm().max(rhs.norm()).max(1e-12);
        prop_assert!((lhs - rhs).norm() <= 1e-8 * scale, "{lhs} vs {rhs}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn linearity(
        which in 0usize..6,
        f in prop::collection::vec((-30i32..30, -1.0f64..1.0, -1.0f64..1.0), 1..4),
        g in prop::collection::vec((-30i32..30, -1.0f64..1.0, -1.0f64..1.0), 1..4),
        a in -3.0f64..3.0,
        b in -3.0f64..3.0,
    ) {
        let m = &zoo()[which];
        let grid = GridParams::new(1, 256, 4.0).unwrap();
        let (ff, gg) = (trig(grid, &f), trig(grid, &g));
        let mut combo = ff.clone();
        for (z, w) in combo.samples.iter_mut().zip(&gg.samples) {
            *z = *z * a + w * b;
        }
        let lhs = apply_multiplier(m, &combo).unwrap();
        let (mf, mg) = (apply_multiplier(m, &ff).unwrap(), apply_multiplier(m, &gg).unwrap());
        // FFT roundoff in every bin is amplified by |m|, so the error is
        // measured against sup|m| · (|a| sup|f| + |b| sup|g|).
        let m_sup = (0..grid.points).map(|j| m.evaluate(&[grid.frequency(j)]).unwrap().norm()).fold(0.0, f64::max);
        let scale = (m_sup * (a.abs() * ff.max_abs() + b.abs() * gg.max_abs())).max(1e-300);
        for ((l, x), y) in lhs.samples.iter().zip(&mf.samples).zip(&mg.samples) {
            prop_assert!((l - (x * a + y * b)).norm() <= 1e-12 * scale, "{} vs scale {scale}", (l - (x * a + y * b)).norm());
        }
    }
}

#[test]
fn constants_scale_by_symbol_at_origin() {
    let grid = GridParams::new(1, 128, 3.0).unwrap();
    let one = GridField::from_fn(grid, true, true, |_| Complex64::new(1.0, 0.0)).unwrap();
    for m in zoo() {
        let m0 = m.evaluate(&[0.0]).unwrap();
        let out = apply_multiplier(&m, &one).unwrap();
        for z in &out.samples {
            assert!((z - m0).norm() <= 1e-14 * (1.0 + m0.norm()), "{}", m.label());
        }
    }
}

#[test]
fn acceptance_residuals_are_resolution_stable() {
    let poisson = Symbol::Triplet(LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1));
    let cases: Vec<(WitnessSpec, Symbol, TestFunction, f64)> = vec![
        (
            WitnessSpec::Polynomial { dim: 1, coefficients: vec![1.0] },
            Symbol::brownian(1),
            TestFunction::mollifier(vec![0.0], 2.0),
            1e-9,
        ),
        (
            WitnessSpec::CosineAverage { gamma: vec![2.0 * PI] },
            poisson,
            TestFunction::mollifier(vec![0.3], 2.0),
            1e-6,
        ),
        (
            WitnessSpec::Polynomial { dim: 1, coefficients: vec![0.0, 0.0, 1.0] },
            Symbol::brownian(1),
            TestFunction::gaussian(vec![0.5], 0.4, 3.5),
            1e-6,
        ),
    ];
    for (spec, m, phi, tol) in cases {
        let rows = resolution_study(&spec, &m, &phi, GridParams::new(1, 512, 8.0).unwrap(), 1).unwrap();
        assert!((rows[0].1 - rows[1].1).norm() < 10.0 * tol, "{}: {rows:?}", spec.describe());
    }
}

#[test]
fn witness_fields_reproduce_bitwise() {
    let spec = WitnessSpec::ComplexExponential { gamma: vec![2.0 * PI, PI] };
    let g = GridParams::new(2, 64, 2.0).unwrap();
    let a = make_witness(&spec, g).unwrap().field;
    let b = make_witness(&spec, g).unwrap().field;
    assert_eq!(a.to_binary(), b.to_binary());
}

#[test]
fn cosine_residual_under_lattice_symbol() {
    let poisson = Symbol::Triplet(LevyTriplet::pure_jump(JumpMeasure::dirac(vec![1.0], 1.0), 1));
    let f = make_witness(
        &WitnessSpec::CosineAverage { gamma: vec![2.0 * PI] },
        GridParams::new(1, 1024, 8.0).unwrap(),
    )
    .unwrap()
    .field;
    let phi = TestFunction::mollifier(vec![0.0], 2.0);
    let l1 = phi.sample(f.grid).unwrap().l1_norm();
    assert!(weak_residual(&f, &poisson, &phi).unwrap().norm() < 1e-6 * l1);
}
