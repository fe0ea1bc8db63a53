//! Property tests over random parameters and elements.

use proptest::prelude::*;

use toeplitz_triples::bounds::{check_lineq, check_seminorm_sandwich};
use toeplitz_triples::instances::build_circle;
use toeplitz_triples::linalg::{hermitian_eigen, operator_norm};
use toeplitz_triples::random::{random_hermitian, random_matrix, seeded};
use toeplitz_triples::triple::{
    commutator_formula_check, comparison_factors, scaling_identity_check, validate_params,
};
use toeplitz_triples::{CMatrix, ExtElement, Params, SplitState, TruncatedTriple};

/// `(α, β)` with `α > 0`, `β > 0` and `αβ ≤ 1`.
fn params() -> impl Strategy<Value = Params> {
    (0.01f64..4.0, 0.0f64..1.0).prop_map(|(a, u)| Params::new(a, (0.01 + u * (1.0 / a - 0.01)).max(0.01).min(1.0 / a)))
}

fn element(n: usize, seed: u64) -> ExtElement {
    let c = build_circle(n).unwrap();
    let mut rng = seeded(seed);
    ExtElement::new(random_hermitian(c.dim(), &mut rng), random_hermitian(c.triple.n_p(), &mut rng))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn eigendecomposition_reconstructs(n in 1usize..9, seed in any::<u64>()) {
        let m = random_hermitian(n, &mut seeded(seed));
        let e = hermitian_eigen(&m).unwrap();
        prop_assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
        let lambda = CMatrix::from_real_diag(&e.values);
        let back = &(&e.vectors * &lambda) * &e.vectors.adjoint();
        prop_assert!(back.max_abs_diff(&m) <= 1e-10 * (1.0 + m.max_abs()));
    }

    #[test]
    fn operator_norm_is_submultiplicative(n in 1usize..7, seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = random_matrix(n, n, &mut rng);
        let b = random_matrix(n, n, &mut rng);
        let (na, nb) = (operator_norm(&a), operator_norm(&b));
        prop_assert!(operator_norm(&(&a * &b)) <= na * nb * (1.0 + 1e-12));
        prop_assert!(a.max_abs() <= na * (1.0 + 1e-12));
    }

    #[test]
    fn generated_params_are_valid(p in params()) {
        prop_assert!(validate_params(p).is_ok());
    }

    #[test]
    fn comparison_factors_invert(p in params(), q in params()) {
        let (s, r) = comparison_factors(p, q).unwrap();
        let (s2, r2) = comparison_factors(q, p).unwrap();
        prop_assert!(s <= r);
        prop_assert!((s * r2 - 1.0).abs() <= 1e-12 && (r * s2 - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn seminorms_sandwich_and_lineq(p in params(), q in params(), seed in any::<u64>()) {
        let c = build_circle(3).unwrap();
        let t = element(3, seed);
        let (lo, hi) = check_seminorm_sandwich(&c.triple, &t, p, q, 1e-9).unwrap();
        prop_assert!(lo.pass && hi.pass, "{:?} {:?}", lo, hi);
        let (a, k) = check_lineq(&c.triple, &t, p, 1e-9).unwrap();
        prop_assert!(a.pass && k.pass, "{:?} {:?}", a, k);
    }

    #[test]
    fn commutator_blocks_and_scaling(p in params(), q in params(), seed in any::<u64>()) {
        let c = build_circle(3).unwrap();
        let t = element(3, seed);
        prop_assert!(commutator_formula_check(&c.triple, &t, p, 1e-10).unwrap().pass);
        prop_assert!(scaling_identity_check(&c.triple, p, q, 1e-10).unwrap().pass);
    }

    #[test]
    fn states_are_normalised(weight in 0.0f64..=1.0, idx in 0usize..24, seed in any::<u64>()) {
        let c = build_circle(3).unwrap();
        let nu = toeplitz_triples::random::random_density(c.triple.n_p(), 2, &mut seeded(seed));
        let phi = SplitState::new(&c.triple, weight, nu, c.delta(24, idx)).unwrap();
        let one = phi.evaluate(&c.triple, &ExtElement::unit(&c.triple)).unwrap();
        prop_assert!((one - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn arbitrary_lists_build_or_error(modes in prop::collection::vec((any::<f64>(), any::<bool>()), 0..12)) {
        let (dirac, mask): (Vec<f64>, Vec<bool>) = modes.into_iter().unzip();
        if let Ok(t) = TruncatedTriple::new("prop", dirac, mask) {
            prop_assert!(t.dirac().iter().all(|d| d.is_finite()));
            prop_assert!(t.d_p().iter().all(|d| *d != 0.0));
        }
    }
}
