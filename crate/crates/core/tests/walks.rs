use planar_limits_core::generators::{
    complete, complete_binary_tree, cycle, grid, path, random_bounded_triangulation, substitution_tree,
    SubstitutionRule,
};
use planar_limits_core::walks::{
    distributions, growth_profile, phi, phi_curve, return_probabilities, PhiMode, WalkSpec,
};
use planar_limits_core::Graph;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_corpus() -> Vec<(&'static str, Graph)> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    vec![
        ("grid10", grid(10)),
        ("tree5", complete_binary_tree(5).graph().clone()),
        ("cycle9", cycle(9)),
        ("k5", complete(5)),
        ("triangulation150", random_bounded_triangulation(150, 7, &mut rng).unwrap().graph()),
    ]
}

#[test]
fn monte_carlo_agrees_with_exact_within_four_standard_errors() {
    for (name, g) in small_corpus() {
        for n in [3, 20, 200] {
            let exact = phi(&g, &WalkSpec::new(n, PhiMode::Exact).unwrap()).unwrap();
            let mc = phi(&g, &WalkSpec::new(n, PhiMode::MonteCarlo { samples: 40_000, seed: n as u64 }).unwrap())
                .unwrap();
            let tol = 4.0 * mc.stderr.max(1e-3 / 4.0);
            assert!((mc.value - exact.value).abs() <= tol, "{name} n={n}: {} vs {}", mc.value, exact.value);
        }
    }
}

#[test]
fn sampled_starts_agree_with_exact() {
    let g = grid(12);
    let exact = phi(&g, &WalkSpec::new(144, PhiMode::Exact).unwrap()).unwrap();
    let sampled = phi(&g, &WalkSpec::new(144, PhiMode::SampledStarts { starts: 60, seed: 2 }).unwrap()).unwrap();
    assert!((sampled.value - exact.value).abs() <= 4.0 * sampled.stderr);
    assert_eq!(exact.stderr, 0.0);
}

#[test]
fn phi_is_nonincreasing_in_every_mode() {
    let g = grid(9);
    for mode in [PhiMode::Exact, PhiMode::MonteCarlo { samples: 5000, seed: 1 }, PhiMode::Auto { seed: 3 }] {
        let curve = phi_curve(&g, &WalkSpec::new(300, mode).unwrap()).unwrap();
        assert!(curve.windows(2).all(|w| w[1].value <= w[0].value));
    }
}

#[test]
fn distribution_iteration_is_normalized_and_respects_parity() {
    for (_, g) in small_corpus() {
        for d in distributions(&g, 0, 40).unwrap() {
            assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
    let bipartite = [grid(6), cycle(8), path(9), complete_binary_tree(4).graph().clone()];
    for g in bipartite {
        let p = return_probabilities(&g, 1, 41).unwrap();
        for t in (1..=41).step_by(2) {
            assert_eq!(p[t], 0.0);
        }
        assert!(p[2] > 0.0);
    }
}

#[test]
fn growth_exponents() {
    let g = grid(257);
    let centre = 128 * 257 + 128;
    let alpha = growth_profile(&g, centre, 128).unwrap().alpha.unwrap();
    assert!((alpha - 2.0).abs() < 0.1, "grid alpha {alpha}");

    let rule = SubstitutionRule::star3();
    let t = substitution_tree(&rule, 6).unwrap();
    let (start, _) = rule.marked();
    let ecc = t.eccentricity(start);
    let alpha = growth_profile(&t, start, ecc).unwrap().alpha.unwrap();
    assert!((alpha - rule.growth_exponent()).abs() < 0.15, "tree alpha {alpha}");
}
