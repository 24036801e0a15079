use cherednik::exactalg::{ParamScalar, Scalar};
use cherednik::hecke::{
    hecke_dimension, orbifold_presentation, signature_verdict, specialize_tau_zero, sphere_obstruction, todd_coxeter,
    Geometry, HeckeAlgebraPresentation, OrbifoldSignature, Verdict,
};
use cherednik::kz::{hecke_root_check, monodromy_exact, monodromy_numeric, LocalModel};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = ParamScalar> {
    (-20i64..=20, 1i64..=41).prop_map(|(n, d)| ParamScalar::rational(n, d))
}

fn model(n: u32, c: &[ParamScalar], eta: &ParamScalar) -> LocalModel {
    LocalModel::new(n, c[..n as usize - 1].to_vec(), eta.clone()).unwrap()
}

/// Parameters with |c|, |η| < 1/2.
fn window() -> impl Strategy<Value = ParamScalar> {
    (-24i64..=24, 50i64..=60).prop_map(|(n, d)| ParamScalar::rational(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn tau_is_linear(
        n in 2u32..=6,
        c1 in prop::collection::vec(small_rational(), 5),
        c2 in prop::collection::vec(small_rational(), 5),
        e1 in small_rational(),
        e2 in small_rational(),
    ) {
        let a = model(n, &c1, &e1).tau();
        let b = model(n, &c2, &e2).tau();
        let sum_c: Vec<ParamScalar> = c1.iter().zip(&c2).map(|(x, y)| x.add(y)).collect();
        let s = model(n, &sum_c, &e1.add(&e2)).tau();
        for j in 0..n as usize {
            prop_assert_eq!(&s.coeffs[j], &a.coeffs[j].add(&b.coeffs[j]));
        }
    }

    #[test]
    fn monodromy_satisfies_hecke_polynomial(
        n in 2u32..=5,
        c in prop::collection::vec(window(), 4),
        eta in window(),
    ) {
        let m = model(n, &c, &eta);
        prop_assert!(hecke_root_check(&m).passed);
        if !monodromy_exact(&m).unwrap().resonant {
            let r = monodromy_numeric(&m, 4096).unwrap();
            prop_assert!(r.hecke_residual.unwrap() < 1e-8, "{:?}", r.hecke_residual);
            prop_assert!(r.max_deviation.unwrap() < 1e-8);
        }
    }

    #[test]
    fn dihedral_orbifold_orders(n in 2u32..=12) {
        let sig = OrbifoldSignature::new(0, vec![2, 2, n]).unwrap();
        let p = orbifold_presentation(&sig);
        let rep = todd_coxeter(&p, 10_000).unwrap();
        prop_assert_eq!(rep.degree, 2 * n as usize);
        prop_assert!(rep.relators_trivial(&p));
    }

    #[test]
    fn cyclic_hecke_rank_is_flat(n in 1u32..=6, k in 1u32..=3) {
        let h = HeckeAlgebraPresentation::cyclic(n, k);
        let r = hecke_dimension(&h, n as usize + 1, 1000).unwrap();
        prop_assert_eq!(r.rank_at_cap, n as usize);
        prop_assert_eq!(r.rank_at_cap_plus_one, n as usize);
        prop_assert!(specialize_tau_zero(&h, 1000).local_relations_unipotent);
    }
}

/// Good spherical genus-0 signatures with nontrivial group.
fn spherical_catalog() -> Vec<OrbifoldSignature> {
    let mut out = Vec::new();
    for n in 2..=7 {
        out.push(OrbifoldSignature::new(0, vec![n, n]).unwrap());
        out.push(OrbifoldSignature::new(0, vec![2, 2, n]).unwrap());
    }
    for last in [3, 4, 5] {
        out.push(OrbifoldSignature::new(0, vec![2, 3, last]).unwrap());
    }
    out
}

#[test]
fn obstruction_nonzero_with_trivial_epsilon() {
    for sig in spherical_catalog() {
        assert_eq!(sig.geometry(), Geometry::Spherical, "{sig}");
        let r = sphere_obstruction(&sig, 10_000).unwrap();
        assert!(r.form_nonzero(), "{sig}");
        assert!(r.epsilon_is_one, "{sig}: {}", r.epsilon);
        assert!(r.passed(), "{sig}: {r:?}");
        let v = signature_verdict(&sig, 10_000);
        assert_eq!(v.verdict, Verdict::ExpectedNotFlat);
        assert!(v.consistent, "{sig}");
    }
}

#[test]
fn bad_orbifolds_are_rejected_by_the_obstruction() {
    // S²(4,6) has Γ = ℤ/2, so c_1 does not have order 4
    let sig = OrbifoldSignature::new(0, vec![4, 6]).unwrap();
    assert_eq!(todd_coxeter(&orbifold_presentation(&sig), 1000).unwrap().degree, 2);
    assert!(sphere_obstruction(&sig, 1000).is_err());
    let v = signature_verdict(&sig, 1000);
    assert_eq!(v.verdict, Verdict::ExpectedNotFlat);
    assert!(!v.consistent);
}

#[test]
fn rk4_is_fourth_order() {
    for (n, c, eta) in [(2u32, vec![ParamScalar::rational(1, 7)], ParamScalar::rational(-1, 5)),
        (3, vec![ParamScalar::rational(1, 10), ParamScalar::rational(-1, 8)], ParamScalar::rational(1, 9))]
    {
        let m = LocalModel::new(n, c, eta).unwrap();
        let err = |steps| monodromy_numeric(&m, steps).unwrap().max_deviation.unwrap();
        for steps in [16, 32] {
            let ratio = err(steps) / err(2 * steps);
            assert!((12.0..20.0).contains(&ratio), "n={n} steps={steps}: ratio {ratio}");
        }
    }
}

#[test]
fn euclidean_and_hyperbolic_do_not_close() {
    for s in ["g=0;2,3,7", "g=0;2,4,5", "g=0;3,3,3", "g=0;2,2,2,2", "g=1", "g=2"] {
        let sig: OrbifoldSignature = s.parse().unwrap();
        assert_ne!(sig.geometry(), Geometry::Spherical, "{s}");
        let v = signature_verdict(&sig, 5_000);
        assert_eq!(v.verdict, Verdict::ExpectedFlat, "{s}");
        assert!(v.consistent, "{s}");
    }
}
