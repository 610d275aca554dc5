//! Property-based cross-checks between the exact and numeric layers.

use num_traits::Zero;
use proptest::prelude::*;

use subcocycle_core::intmatrix::big_to_f64;
use subcocycle_core::lyapunov::{entrywise_bound, mc_exponent, McPlan, SamplerKind};
use subcocycle_core::trig::build_cocycle_matrix;
use subcocycle_core::{IntPolynomial, Substitution};

fn substitution_strategy(d: usize) -> impl Strategy<Value = Substitution> {
    proptest::collection::vec(proptest::collection::vec(0..d, 1..=4), d)
        .prop_map(|images| Substitution::new(images).unwrap())
}

fn pair_with_point() -> impl Strategy<Value = (Substitution, Substitution, Vec<f64>)> {
    (2usize..=4).prop_flat_map(|d| {
        (
            substitution_strategy(d),
            substitution_strategy(d),
            proptest::collection::vec(0.0..1.0f64, d),
        )
    })
}

fn single() -> impl Strategy<Value = Substitution> {
    (2usize..=4).prop_flat_map(substitution_strategy)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cocycle_identity_for_composition((z1, z2, xi) in pair_with_point()) {
        // M_{z1 o z2}(xi) = M_{z2}(S1^t xi) * M_{z1}(xi)
        let d = z1.dim();
        let composed = Substitution::compose(&z1, &z2).unwrap();
        let lhs = build_cocycle_matrix(&composed).evaluate(&xi);
        let s1t = z1.substitution_matrix().transpose();
        let mut pushed = vec![0.0f64; d];
        for (i, slot) in pushed.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &x) in xi.iter().enumerate() {
                acc += big_to_f64(s1t.entry(i, j)) * x;
            }
            *slot = acc.rem_euclid(1.0);
        }
        let rhs = build_cocycle_matrix(&z2)
            .evaluate(&pushed)
            .mul(&build_cocycle_matrix(&z1).evaluate(&xi));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-9);
    }

    #[test]
    fn matrix_of_composition_is_product((z1, z2, _xi) in pair_with_point()) {
        let composed = Substitution::compose(&z1, &z2).unwrap();
        let lhs = composed.substitution_matrix();
        let rhs = z1.substitution_matrix().mul(&z2.substitution_matrix());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn mahler_measure_is_nonnegative(coeffs in proptest::collection::vec(-9i64..=9, 1..=7)) {
        let p = IntPolynomial::from_i64(&coeffs);
        prop_assume!(!p.is_zero());
        // integer polynomials have Mahler measure >= 1, so log measure >= 0
        let m = subcocycle_core::algebra::mahler_jensen(&p).unwrap();
        prop_assert!(m >= -1e-9, "m = {m} for {coeffs:?}");
    }

    #[test]
    fn primitivity_matches_brute_force(z in single()) {
        let d = z.dim();
        let s = z.substitution_matrix();
        let bound = d * d - 2 * d + 2;
        let brute = (1..=bound as u32).any(|k| {
            let p = s.pow(k);
            (0..d).all(|i| (0..d).all(|j| !p.entry(i, j).is_zero()))
        });
        prop_assert_eq!(z.is_primitive(), brute);
    }

    #[test]
    fn grammar_round_trip(z in single()) {
        let text = z.to_grammar();
        let back = Substitution::parse(&text).unwrap();
        prop_assert_eq!(z, back);
    }
}

#[test]
fn level_one_estimate_respects_entrywise_bound() {
    let zeta = Substitution::parse("0 -> 01\n1 -> 10").unwrap();
    let plan = McPlan { seed: 9, samples: 300, k: 1, sampler: SamplerKind::Kronecker };
    let e = mc_exponent(&zeta, &plan).unwrap();
    let bound = entrywise_bound(&zeta, 1).unwrap();
    assert!(e.value <= bound + 3.0 * e.sigma);
}
