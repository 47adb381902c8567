use liouville_core::levy::{
    evaluate_exponent, evaluate_extension, evaluate_generalized, project_triplet, subordinate_symbol, Atom,
    BernsteinSpec, GeneralizedKappa, JumpMeasure, LevyTriplet, RadialFamily, Symbol,
};
use liouville_core::Complex64;
use proptest::prelude::*;

fn atomic_triplet(n: usize) -> impl Strategy<Value = LevyTriplet> {
    let b = prop::collection::vec(-2.0f64..2.0, n);
    let l = prop::collection::vec(-1.0f64..1.0, n * n);
    let atoms = prop::collection::vec(
        (prop::collection::vec(-3.0f64..3.0, n), 0.05f64..2.0),
        0..4,
    );
    (b, l, atoms).prop_filter_map("atoms away from the origin", move |(b, l, atoms)| {
        // Q = L Lᵀ is positive semidefinite by construction.
        let q: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| l[i * n + k] * l[j * n + k]).sum()).collect())
            .collect();
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .filter(|(p, _)| p.iter().map(|v| v * v).sum::<f64>() > 1e-4)
            .map(|(p, m)| Atom::new(p, m))
            .collect();
        LevyTriplet::new(b, q, JumpMeasure::from_atoms(atoms)).ok()
    })
}

fn with_radial(t: LevyTriplet) -> LevyTriplet {
    let nu = t.nu.clone().with_radial(RadialFamily::stable_like(0.3, 1.2));
    LevyTriplet::new(t.b.clone(), t.q.clone(), nu).unwrap()
}

/// Independent oracle: `ψ(-iη)` by direct summation with complex arithmetic.
fn naive_extension(t: &LevyTriplet, eta: &[f64]) -> f64 {
    let xi: Vec<Complex64> = eta.iter().map(|e| Complex64::new(0.0, -e)).collect();
    let i = Complex64::i();
    let dot = |a: &[f64], z: &[Complex64]| a.iter().zip(z).map(|(x, y)| y * *x).sum::<Complex64>();
    let mut psi = -i * dot(&t.b, &xi);
    for (j, row) in t.q.iter().enumerate() {
        psi += xi[j] * dot(row, &xi) * 0.5;
    }
    for a in &t.nu.atoms {
        let u = dot(&a.position, &xi);
        let r = a.position.iter().map(|v| v * v).sum::<f64>().sqrt();
        let comp = if r < 1.0 { i * u } else { Complex64::new(0.0, 0.0) };
        psi += (Complex64::new(1.0, 0.0) - (i * u).exp() + comp) * a.mass;
    }
    psi.re
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponent_vanishes_at_origin(t in atomic_triplet(2)) {
        let t = with_radial(t);
        prop_assert_eq!(evaluate_exponent(&t, &[0.0, 0.0]).unwrap(), Complex64::new(0.0, 0.0));
        let k = GeneralizedKappa::from_triplet(&t);
        prop_assert_eq!(evaluate_generalized(&k, &[0.0, 0.0]).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn real_part_nonnegative(t in atomic_triplet(2), xi in prop::collection::vec(-20.0f64..20.0, 2)) {
        let t = with_radial(t);
        prop_assert!(evaluate_exponent(&t, &xi).unwrap().re >= -1e-12);
    }

    #[test]
    fn conjugate_symmetry(t in atomic_triplet(3), xi in prop::collection::vec(-10.0f64..10.0, 3)) {
        let neg: Vec<f64> = xi.iter().map(|v| -v).collect();
        let a = evaluate_exponent(&t, &xi).unwrap();
        let b = evaluate_exponent(&t, &neg).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * (1.0 + a.norm()));
    }

    #[test]
    fn projection_consistency(
        t in atomic_triplet(2),
        x in prop::collection::vec(-2.0f64..2.0, 2),
        s in -5.0f64..5.0,
    ) {
        prop_assume!(x.iter().map(|v| v * v).sum::<f64>() > 1e-3);
        let p = project_triplet(&t, &x).unwrap();
        let sx: Vec<f64> = x.iter().map(|v| v * s).collect();
        let a = evaluate_exponent(&p, &[s]).unwrap();
        let b = evaluate_exponent(&t, &sx).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * (1.0 + b.norm()), "{a} vs {b}");
    }

    #[test]
    fn extension_matches_complex_summation(t in atomic_triplet(2), eta in prop::collection::vec(-1.5f64..1.5, 2)) {
        let v = evaluate_extension(&t, &eta).unwrap();
        let oracle = naive_extension(&t, &eta);
        prop_assert!((v - oracle).abs() <= 1e-10 * (1.0 + oracle.abs()), "{v} vs {oracle}");
    }

    #[test]
    fn identity_subordination_is_exact(t in atomic_triplet(1), tau in -3.0f64..3.0, xi in -4.0f64..4.0) {
        let psi = Symbol::Triplet(t.clone());
        let v = subordinate_symbol(BernsteinSpec::Identity, &psi, tau, &[xi]).unwrap();
        prop_assert_eq!(v, Complex64::new(0.0, -tau) + evaluate_exponent(&t, &[xi]).unwrap());
    }

    #[test]
    fn first_order_kappa_is_the_exponent(t in atomic_triplet(2), xi in prop::collection::vec(-5.0f64..5.0, 2)) {
        let k = GeneralizedKappa::from_triplet(&t);
        let a = evaluate_generalized(&k, &xi).unwrap();
        let b = evaluate_exponent(&t, &xi).unwrap();
        prop_assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()));
    }
}
