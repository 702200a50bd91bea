mod common;

use common::{connected_graph, permutation};
use num_bigint::BigInt;
use num_rational::BigRational;
use planar_limits_core::generators::{grid, path};
use planar_limits_core::transport::{
    builtin_transports, imtp_check, invariance_spot_check, truncate, Combination, DegreeTransport,
    DistanceKernel, DistanceWeighted, FiniteRootedMeasure, GraphContext, RootLaw, TransportFunction,
};
use proptest::prelude::*;

fn q(p: u32, d: u32) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn builtins_satisfy_the_principle_exactly(graphs in proptest::collection::vec(connected_graph(7), 1..4)) {
        let mu = FiniteRootedMeasure::unbiased(graphs).unwrap();
        for f in builtin_transports() {
            prop_assert!(imtp_check(&mu, &f).equal(), "{}", f.name());
        }
    }

    #[test]
    fn check_is_linear_in_f(
        graphs in proptest::collection::vec(connected_graph(6), 1..3),
        coeffs in proptest::collection::vec((0u32..5, 1u32..4), 14),
        root_weights in proptest::collection::vec(1u32..5, 7),
    ) {
        // A biased root law makes lhs and rhs differ, so linearity is tested
        // on both sides independently.
        let g = graphs[0].clone();
        let total: u32 = root_weights[..g.n()].iter().sum();
        let law = RootLaw::Explicit(root_weights[..g.n()].iter().map(|&w| q(w, total)).collect());
        let mu = FiniteRootedMeasure::new(vec![(g, q(1, 1), law)]).unwrap();
        let terms: Vec<(BigRational, Box<dyn TransportFunction>)> =
            builtin_transports().into_iter().zip(&coeffs).map(|(f, &(p, d))| (q(p, d), f)).collect();
        let mut lhs = q(0, 1);
        let mut rhs = q(0, 1);
        for (c, f) in &terms {
            let r = imtp_check(&mu, f);
            lhs += c * r.lhs;
            rhs += c * r.rhs;
        }
        let combined = imtp_check(&mu, &Combination::new(terms).unwrap());
        prop_assert_eq!(combined.lhs, lhs);
        prop_assert_eq!(combined.rhs, rhs);
    }

    #[test]
    fn builtins_are_isomorphism_invariant(
        (g, perm) in connected_graph(7).prop_flat_map(|g| { let n = g.n(); (Just(g), permutation(n)) })
    ) {
        for f in builtin_transports() {
            prop_assert!(invariance_spot_check(&f, &g, &perm), "{}", f.name());
        }
    }

    #[test]
    fn truncation_is_monotone_and_converges(g in connected_graph(7), k in 1u32..6) {
        let ctx = GraphContext::new(&g);
        let f = DegreeTransport;
        let small = truncate(f, q(k, 1)).unwrap();
        let large = truncate(f, q(k + 1, 1)).unwrap();
        let huge = truncate(f, q(1000, 1)).unwrap();
        for x in 0..g.n() {
            for y in 0..g.n() {
                let v = f.eval(&ctx, x, y);
                prop_assert!(small.eval(&ctx, x, y) <= large.eval(&ctx, x, y));
                prop_assert!(large.eval(&ctx, x, y) <= v.clone());
                prop_assert_eq!(huge.eval(&ctx, x, y), v);
            }
        }
    }
}

#[test]
fn biased_center_of_p3() {
    let mu = FiniteRootedMeasure::rooted_at(path(3), 1).unwrap();
    let leafward = planar_limits_core::transport::IndicatorTransport::new(
        planar_limits_core::transport::Relation::AdjacentToLeaf,
        planar_limits_core::transport::Weight::Constant(q(1, 1)),
    )
    .unwrap();
    let r = imtp_check(&mu, &leafward);
    assert_eq!((r.lhs, r.rhs), (q(2, 1), q(0, 1)));
}

#[test]
fn grid_sequence_is_consistent_under_truncation() {
    let measures: Vec<_> = (2..7).map(|n| FiniteRootedMeasure::unbiased(vec![grid(n)]).unwrap()).collect();
    let ks: Vec<BigRational> = [1, 2, 3, 5, 8].iter().map(|&k| q(k, 1)).collect();
    let report = planar_limits_core::transport::imtp_limit_consistency(
        &measures,
        &DistanceWeighted(DistanceKernel::Geometric),
        &ks,
    )
    .unwrap();
    assert!(report.all_equal());
    assert!(report.monotone_in_k());
}
