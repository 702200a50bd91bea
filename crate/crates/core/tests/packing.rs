use planar_limits_core::generators::{hex_patch_map, icosahedron, random_bounded_triangulation};
use planar_limits_core::packing::{
    deepest_vertex, fit_in_unit_disk, normalize_to_root, pack, ring_ratio_stats, BoundaryCondition, SolverOptions,
};
use planar_limits_core::supported::{count_supported, PointSet};
use planar_limits_core::PlanarMap;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn relabel(map: &PlanarMap, perm: &[usize]) -> PlanarMap {
    let mut rot = vec![Vec::new(); map.n()];
    for v in 0..map.n() {
        rot[perm[v]] = map.rotation(v).iter().map(|&w| perm[w]).collect();
    }
    PlanarMap::new(rot).unwrap()
}

fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

#[test]
fn relabeled_maps_give_congruent_packings() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let map = random_bounded_triangulation(300, 8, &mut rng).unwrap();
    let bc = BoundaryCondition::default_for(&map);
    let (p, _) = pack(&map, &bc, &SolverOptions::default(), 1e-8).unwrap();

    let mut perm: Vec<usize> = (0..map.n()).collect();
    perm.shuffle(&mut rng);
    let map2 = relabel(&map, &perm);
    let bc2 = BoundaryCondition { outer: bc.outer.iter().map(|&v| perm[v]).collect(), radii: bc.radii.clone() };
    let (q, _) = pack(&map2, &bc2, &SolverOptions::default(), 1e-8).unwrap();

    let scale = p.radii.iter().copied().fold(0.0, f64::max);
    for v in 0..map.n() {
        assert!((p.radii[v] - q.radii[perm[v]]).abs() <= 1e-8 * scale);
    }
    for u in (0..map.n()).step_by(7) {
        for v in (0..map.n()).step_by(11) {
            let d1 = dist(p.centers[u], p.centers[v]);
            let d2 = dist(q.centers[perm[u]], q.centers[perm[v]]);
            assert!((d1 - d2).abs() <= 1e-7 * scale);
        }
    }
}

#[test]
fn packings_are_tangent_and_non_overlapping() {
    for seed in 0..8 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let map = random_bounded_triangulation(400, 8, &mut rng).unwrap();
        let bc = BoundaryCondition::default_for(&map);
        let (p, sol) = pack(&map, &bc, &SolverOptions::default(), 1e-8).unwrap();
        let g = map.graph();
        assert!(sol.residual <= 1e-10);
        assert!(p.scaled_tangency_residual(&g) <= 1e-8);
        assert!(p.max_overlap(&g) <= 1e-8 * p.radii.iter().copied().fold(0.0, f64::max));
    }
    let (p, _) = pack(&icosahedron(), &BoundaryCondition::default_for(&icosahedron()), &SolverOptions::default(), 1e-8)
        .unwrap();
    assert!(p.scaled_tangency_residual(&icosahedron().graph()) <= 1e-8);
}

#[test]
fn normalization_removes_similarities() {
    let map = hex_patch_map(6);
    let bc = BoundaryCondition::default_for(&map);
    let (p, _) = pack(&map, &bc, &SolverOptions::default(), 1e-8).unwrap();
    let root = deepest_vertex(&map, &bc);
    let base = normalize_to_root(&p, root);
    assert!((base.radii[root] - 1.0).abs() < 1e-12);
    for (a, b) in [(0.25, [3.0, -1.0]), (7.0, [-40.0, 2.5])] {
        let moved = normalize_to_root(&p.similarity(a, b), root);
        for v in 0..p.len() {
            let reach = 1.0 + base.centers[v][0].hypot(base.centers[v][1]);
            assert!(dist(moved.centers[v], base.centers[v]) < 1e-9 * reach);
            assert!((moved.radii[v] - base.radii[v]).abs() < 1e-9 * base.radii[v].max(1.0));
        }
    }
    let unit = fit_in_unit_disk(&p);
    assert!(unit.centers.iter().zip(&unit.radii).all(|(c, r)| c[0].hypot(c[1]) + r <= 1.0 + 1e-12));
}

#[test]
fn hex_packing_is_regular_near_the_center() {
    let map = hex_patch_map(8);
    let bc = BoundaryCondition::default_for(&map);
    let (p, _) = pack(&map, &bc, &SolverOptions::default(), 1e-8).unwrap();
    let stats = ring_ratio_stats(&p, &map, &bc, 0, 2).unwrap();
    assert!(stats.max_ratio < 1.5, "{stats:?}");
    assert_eq!(stats.disks, 19);
}

#[test]
fn packing_centers_are_supported_sets() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let map = random_bounded_triangulation(250, 8, &mut rng).unwrap();
    let (p, _) = pack(&map, &BoundaryCondition::default_for(&map), &SolverOptions::default(), 1e-8).unwrap();
    let c = PointSet::new(p.centers.clone()).unwrap();
    let supported = count_supported(&c, 0.5, 2).unwrap();
    assert!(supported > 0);
}
