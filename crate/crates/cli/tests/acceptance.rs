//! Acceptance suite: one PASS/FAIL line per criterion, with the measured
//! quantities. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use planar_limits::analysis::{analyze_support, redraw_seed};
use planar_limits_core::canonical_code;
use planar_limits_core::convergence::{ball_distribution, degree_deficiency_census};
use planar_limits_core::generators::{
    complete, complete_binary_tree, cycle, grid, hex_patch, icosahedron, octahedron, path, random_bounded_triangulation,
    random_planar_map, star, substitution_tree, tetrahedron, triangulate_faces, SubstitutionRule,
};
use planar_limits_core::graph::ball;
use planar_limits_core::packing::{
    angle_sum, boundary_distances, centers, deepest_vertex, pack, ring_ratio_stats, BoundaryCondition,
    SolverOptions,
};
use planar_limits_core::supported::{count_supported, sample_tiling, verify_flow_bound};
use planar_limits_core::transport::{builtin_transports, imtp_check, FiniteRootedMeasure, IndicatorTransport, Relation, Weight};
use planar_limits_core::walks::{growth_profile, phi, phi_curve, PhiMode, WalkSpec};
use planar_limits_core::{Error, Graph, PlanarMap, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn uniform_points(n: usize, rng: &mut ChaCha8Rng) -> PointSet {
    PointSet::new((0..n).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect()).unwrap()
}

fn grid_points(n: usize) -> PointSet {
    PointSet::new((0..n * n).map(|i| [(i % n) as f64, (i / n) as f64]).collect()).unwrap()
}

/// Sizes spread log-uniformly over `lo..=hi`.
fn log_uniform(rng: &mut ChaCha8Rng, lo: usize, hi: usize) -> usize {
    let t: f64 = rng.gen();
    ((lo as f64).ln() + t * ((hi as f64).ln() - (lo as f64).ln())).exp().round() as usize
}

fn criterion_1() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut runs = 0;
    let mut failures = Vec::new();
    let mut tightest: f64 = 0.0;
    let mut redraws = 0;
    for set in 0..200u64 {
        let n = log_uniform(&mut rng, 10, 2000);
        let c = uniform_points(n, &mut rng);
        let delta = if set % 2 == 0 { 0.5 } else { 0.25 };
        for s in [2, 4, 8, 16] {
            let mut attempt = 0;
            let report = loop {
                let t = sample_tiling(delta, redraw_seed(set, attempt)).unwrap();
                match verify_flow_bound(&c, &t, s, None) {
                    Err(Error::BoundaryDegenerate) => attempt += 1,
                    r => break r.unwrap(),
                }
            };
            redraws += attempt;
            runs += 1;
            tightest = tightest.max(report.supported_squares as f64 / report.bound);
            if !(report.level_a_exact() && report.bound_ok() && report.telescoped_ok()) {
                failures.push(format!("set {set} (|C|={n}) s={s}"));
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{runs} runs, level-a sum = |C| and #supported squares <= 2|C|/s in all but {} (max fill of the bound {tightest:.3}, {redraws} tiling redraws){}",
            failures.len(),
            if failures.is_empty() { String::new() } else { format!("; failing: {}", failures.join(", ")) }
        ),
    )
}

struct Series {
    name: &'static str,
    sets: Vec<PointSet>,
}

fn packing_centers(n: usize, seed: u64) -> PointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let map = random_bounded_triangulation(n, 8, &mut rng).unwrap();
    let (p, _) = pack(&map, &BoundaryCondition::default_for(&map), &SolverOptions::default(), 1e-8).unwrap();
    centers(&p)
}

/// Far enough past the lattice margins (12 at δ=1/2, 48 at δ=1/4) for the
/// ratio to turn over.
const S_VALUES: [usize; 7] = [2, 4, 8, 16, 32, 64, 128];

fn criterion_2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let series = vec![
        Series { name: "grid", sets: [10, 20, 40, 70].iter().map(|&n| grid_points(n)).collect() },
        Series { name: "uniform", sets: [100, 400, 1600, 5000].iter().map(|&n| uniform_points(n, &mut rng)).collect() },
        Series {
            name: "packing",
            sets: [100, 400, 1600, 5000].iter().enumerate().map(|(i, &n)| packing_centers(n, 20 + i as u64)).collect(),
        },
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    let mut city_pairs = 0;
    let mut city_violations = 0;
    let mut s_trend = Vec::new();
    for delta in [0.5, 0.25] {
        let mut c_delta: f64 = 0.0;
        for ser in &series {
            let mut per_s = Vec::new();
            let mut sups = Vec::new();
            for (i, c) in ser.sets.iter().enumerate() {
                let a = analyze_support(c, delta, &S_VALUES, 100 + i as u64).unwrap();
                for row in &a.rows {
                    city_pairs += row.city_checks;
                    city_violations += row.city_violations;
                    pass &= row.flow.all_ok();
                    // Independent recount through the per-point predicate.
                    if c.len() <= 1600 {
                        pass &= row.supported == count_supported(c, delta, row.s).unwrap();
                    }
                }
                let ratios: Vec<f64> = a.rows.iter().map(|r| r.ratio).collect();
                let sup = ratios.iter().copied().fold(0.0, f64::max);
                // Bounded in s: the ratio peaks before the largest threshold.
                let (tail, head) = ratios.split_last().unwrap();
                if sup > 0.0 && *tail >= head.iter().copied().fold(0.0, f64::max) {
                    s_trend.push(format!("{} |C|={}", ser.name, c.len()));
                }
                sups.push(sup);
                per_s.push(a.rows.iter().map(|r| format!("{:.2}", r.ratio)).collect::<Vec<_>>().join("/"));
            }
            // No growth trend: the largest set does not exceed the smaller
            // ones by more than a quarter.
            let (last, earlier) = sups.split_last().unwrap();
            let earlier_max = earlier.iter().copied().fold(0.0, f64::max);
            let trend_ok = *last <= 1.25 * earlier_max;
            pass &= trend_ok;
            c_delta = c_delta.max(sups.iter().copied().fold(0.0, f64::max));
            parts.push(format!(
                "δ={delta} {}: N·s/|C| at s=2..128 by size [{}]{}",
                ser.name,
                per_s.join(", "),
                if trend_ok { "" } else { " (TREND)" }
            ));
        }
        parts.push(format!("c({delta}) observed {c_delta:.2}"));
    }
    pass &= city_violations == 0 && s_trend.is_empty();
    if !s_trend.is_empty() {
        parts.push(format!("still growing at s=128: {}", s_trend.join(", ")));
    }
    parts.push(format!("city implication held on {city_pairs} supported city pairs, {city_violations} violations"));
    outcome(pass, parts.join("; "))
}

struct PackedMap {
    map: PlanarMap,
    bc: BoundaryCondition,
    packing: planar_limits_core::Packing,
    residual: f64,
}

fn corpus_50() -> Vec<PackedMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    (0..50)
        .map(|_| {
            let n = log_uniform(&mut rng, 100, 2000);
            let map = random_bounded_triangulation(n, 8, &mut rng).unwrap();
            let bc = BoundaryCondition::default_for(&map);
            let (packing, sol) = pack(&map, &bc, &SolverOptions::default(), 1e-8).unwrap();
            PackedMap { map, bc, packing, residual: sol.residual }
        })
        .collect()
}

fn criterion_3(corpus: &[PackedMap]) -> Outcome {
    let tet = tetrahedron();
    let bc = BoundaryCondition::default_for(&tet);
    let (p, _) = pack(&tet, &bc, &SolverOptions::default(), 1e-8).unwrap();
    let inner = (0..4).find(|v| !bc.outer.contains(v)).unwrap();
    let descartes = 1.0 / (3.0 + 2.0 * 3f64.sqrt());
    let tet_err = (p.radii[inner] - descartes).abs();
    let mut pass = tet_err < 1e-8;

    let tol = 1e-8;
    let (mut worst_angle, mut worst_tangency, mut worst_overlap): (f64, f64, f64) = (0.0, 0.0, f64::NEG_INFINITY);
    for pm in corpus {
        let g = pm.map.graph();
        let interior: Vec<usize> = (0..g.n()).filter(|v| !pm.bc.outer.contains(v)).collect();
        let angle = interior
            .iter()
            .map(|&v| (angle_sum(&pm.map, &pm.packing.radii, v) - std::f64::consts::TAU).abs())
            .fold(0.0, f64::max);
        let max_r = pm.packing.radii.iter().copied().fold(0.0, f64::max);
        worst_angle = worst_angle.max(angle.max(pm.residual));
        worst_tangency = worst_tangency.max(pm.packing.scaled_tangency_residual(&g));
        worst_overlap = worst_overlap.max(pm.packing.max_overlap(&g) / max_r);
    }
    pass &= worst_angle < tol && worst_tangency < 10.0 * tol && worst_overlap < 10.0 * tol;
    outcome(
        pass,
        format!(
            "tetrahedron inner radius error {tet_err:.1e}; {} triangulations: max angle residual {worst_angle:.1e}, tangency {worst_tangency:.1e}, overlap {worst_overlap:.1e} (relative to the largest radius)",
            corpus.len()
        ),
    )
}

fn criterion_4(corpus: &[PackedMap]) -> Outcome {
    let mut points = Vec::new();
    let mut skipped = 0;
    for pm in corpus {
        let root = deepest_vertex(&pm.map, &pm.bc);
        if boundary_distances(&pm.map, &pm.bc)[root] < 3 {
            skipped += 1;
            continue;
        }
        let stats = ring_ratio_stats(&pm.packing, &pm.map, &pm.bc, root, 2).unwrap();
        points.push((pm.map.n() as f64, stats.max_ratio));
    }
    let constant = points.iter().map(|p| p.1).fold(0.0, f64::max);
    // Least-squares slope of log ratio against log size.
    let k = points.len() as f64;
    let (mx, my) = (
        points.iter().map(|p| p.0.ln()).sum::<f64>() / k,
        points.iter().map(|p| p.1.ln()).sum::<f64>() / k,
    );
    let sxy: f64 = points.iter().map(|p| (p.0.ln() - mx) * (p.1.ln() - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0.ln() - mx).powi(2)).sum();
    let slope = sxy / sxx;
    let mut sorted = points.clone();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let half = sorted.len() / 2;
    let small_max = sorted[..half].iter().map(|p| p.1).fold(0.0, f64::max);
    let large_max = sorted[half..].iter().map(|p| p.1).fold(0.0, f64::max);
    let pass = points.len() >= 40 && constant.is_finite() && slope.abs() < 0.2 && large_max <= 2.0 * small_max;
    outcome(
        pass,
        format!(
            "{} roots at depth >= 3 ({skipped} skipped): max radius ratio at d=2 is {constant:.2}; log-log slope vs size {slope:+.3}; max over smaller half {small_max:.2}, larger half {large_max:.2}",
            points.len()
        ),
    )
}

fn criterion_5() -> Outcome {
    let exact = |g: &Graph, n| phi(g, &WalkSpec::new(n, PhiMode::Exact).unwrap()).unwrap().value;
    let k2 = exact(&complete(2), 2);
    let c4 = exact(&cycle(4), 2);
    let mut pass = k2 == 0.0 && c4 == 0.5;
    let mut parts = vec![format!("φ(2,K2) = {k2}, φ(2,C4) = {c4}")];
    let mut scaled = Vec::new();
    let mut monotone = true;
    for n in [8usize, 16, 32, 64] {
        let g = grid(n);
        let mode = if n <= 32 { PhiMode::Exact } else { PhiMode::SampledStarts { starts: 128, seed: 5 } };
        let curve = phi_curve(&g, &WalkSpec::new(n * n, mode).unwrap()).unwrap();
        monotone &= curve.windows(2).all(|w| w[1].value <= w[0].value);
        let last = curve.last().unwrap();
        let v = last.value * (n as f64).ln();
        scaled.push(v);
        parts.push(format!("n={n}: φ(n²)·ln n = {v:.4} (±{:.4}, {} starts)", last.stderr * (n as f64).ln(), last.samples));
    }
    let lower = scaled.iter().copied().fold(f64::INFINITY, f64::min);
    let upper = scaled.iter().copied().fold(0.0, f64::max);
    // Bounded below: no decay toward zero across the range.
    pass &= monotone && lower > 0.0 && lower >= 0.5 * upper;
    parts.push(format!("inf {lower:.4}, monotone in horizon: {monotone}"));
    outcome(pass, parts.join("; "))
}

fn criterion_6() -> Outcome {
    let rule = SubstitutionRule::star3();
    let t = substitution_tree(&rule, 8).unwrap();
    let o = rule.marked().0;
    let tree_alpha = growth_profile(&t, o, t.eccentricity(o)).unwrap().alpha.unwrap();
    let target = 3f64.ln() / 2f64.ln();

    let p = path(2001);
    let path_alpha = growth_profile(&p, 1000, 1000).unwrap().alpha.unwrap();
    let g = grid(257);
    let grid_alpha = growth_profile(&g, 128 * 257 + 128, 128).unwrap().alpha.unwrap();
    let pass = (tree_alpha - target).abs() <= 0.1 && (path_alpha - 1.0).abs() <= 0.05 && (grid_alpha - 2.0).abs() <= 0.1;
    outcome(
        pass,
        format!(
            "star3 n=8 ({} vertices): α = {tree_alpha:.4} vs log3/log2 = {target:.4}; path α = {path_alpha:.4}; grid α = {grid_alpha:.4}",
            t.n()
        ),
    )
}

fn imtp_corpus() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = vec![
        path(2),
        path(3),
        path(7),
        star(4),
        star(6),
        cycle(5),
        cycle(8),
        complete(4),
        complete(5),
        grid(3),
        grid(4),
        complete_binary_tree(3).graph().clone(),
        hex_patch(1),
        hex_patch(2),
        tetrahedron().graph(),
        octahedron().graph(),
        icosahedron().graph(),
        substitution_tree(&SubstitutionRule::star3(), 2).unwrap(),
    ];
    for _ in 0..2 {
        out.push(random_planar_map(14, 6, 0.4, &mut rng).unwrap().graph());
    }
    out
}

fn criterion_7() -> Outcome {
    let corpus = imtp_corpus();
    let fs = builtin_transports();
    let mut checks = 0;
    let mut failures = Vec::new();
    let mut measures: Vec<(String, FiniteRootedMeasure)> = corpus
        .iter()
        .enumerate()
        .map(|(i, g)| (format!("graph {i}"), FiniteRootedMeasure::unbiased(vec![g.clone()]).unwrap()))
        .collect();
    measures.push(("corpus mixture".into(), FiniteRootedMeasure::unbiased(corpus.clone()).unwrap()));
    for (name, mu) in &measures {
        for f in &fs {
            checks += 1;
            if !imtp_check(mu, f).equal() {
                failures.push(format!("{name}/{}", f.name()));
            }
        }
    }
    let leaf = IndicatorTransport::new(Relation::AdjacentToLeaf, Weight::Constant(BigRational::from_integer(1.into()))).unwrap();
    let biased = imtp_check(&FiniteRootedMeasure::rooted_at(path(3), 1).unwrap(), &leaf);
    let two = BigRational::from_integer(BigInt::from(2));
    let p3_ok = biased.lhs == two && biased.rhs == BigRational::from_integer(BigInt::from(0));
    outcome(
        failures.is_empty() && p3_ok && corpus.len() == 20,
        format!(
            "{checks} exact checks ({} measures × {} transports), {} unequal; biased P3: lhs = {}, rhs = {}",
            measures.len(),
            fs.len(),
            failures.len(),
            biased.lhs,
            biased.rhs
        ),
    )
}

fn criterion_8() -> Outcome {
    let wheel = canonical_code(&ball(&hex_patch(2), 0, 1));
    let masses: Vec<f64> = (0..=7).map(|i| ball_distribution(&hex_patch(1 << i), 1).unwrap().mass_f64(&wheel)).collect();
    let monotone = masses.windows(2).all(|w| w[1] > w[0]);
    let last = *masses.last().unwrap();

    let mut deficiencies = vec![
        ("icosahedron", degree_deficiency_census(&icosahedron()).unwrap()),
        ("octahedron", degree_deficiency_census(&octahedron()).unwrap()),
        ("tetrahedron", degree_deficiency_census(&tetrahedron()).unwrap()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut random_max = 0;
    let mut random_count = 0;
    for _ in 0..40 {
        let n = log_uniform(&mut rng, 10, 3000);
        let t = random_bounded_triangulation(n, 6, &mut rng).unwrap();
        random_max = random_max.max(degree_deficiency_census(&t).unwrap());
        random_count += 1;
    }
    deficiencies.push(("random M=6 (max)", random_max));
    let pass = monotone
        && last > 0.97
        && deficiencies[0].1 == 12
        && deficiencies.iter().all(|d| d.1 <= 12);
    outcome(
        pass,
        format!(
            "degree-6 wheel mass for radius 2^0..2^7: [{}], increasing: {monotone}; deficiency counts: {} over {random_count} random maps",
            masses.iter().map(|m| format!("{m:.4}")).collect::<Vec<_>>().join(", "),
            deficiencies.iter().map(|(n, d)| format!("{n} {d}")).collect::<Vec<_>>().join(", ")
        ),
    )
}

/// Vertex growth constant, fixed from measurement (observed below 3).
const VERTEX_RATIO_BOUND: f64 = 4.0;
/// Each corner of a face gains at most two edges at its vertex, and inner
/// cycle vertices have degree at most 6, so degrees at most triple.
const DEGREE_RATIO_BOUND: f64 = 3.0;

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (mut max_v, mut max_d): (f64, f64) = (0.0, 0.0);
    let mut bad = 0;
    for _ in 0..100 {
        let n = log_uniform(&mut rng, 10, 1500);
        let m = rng.gen_range(6..=9);
        let keep = rng.gen_range(0.0..1.0);
        let g = random_planar_map(n, m, keep, &mut rng).unwrap();
        let t = triangulate_faces(&g, g.max_degree()).unwrap();
        let contains = g.graph().edges().all(|(u, v)| t.map.has_edge(u, v));
        if !(t.map.is_sphere_triangulation() && contains) {
            bad += 1;
        }
        max_v = max_v.max(t.vertex_ratio);
        max_d = max_d.max(t.map.max_degree() as f64 / g.max_degree() as f64);
    }
    outcome(
        bad == 0 && max_v <= VERTEX_RATIO_BOUND && max_d <= DEGREE_RATIO_BOUND,
        format!(
            "100 maps: {bad} outputs not a triangulation containing the input; max |V(T)|/|V(G)| = {max_v:.3} (bound {VERTEX_RATIO_BOUND}), max maxdeg(T)/maxdeg(G) = {max_d:.3} (bound {DEGREE_RATIO_BOUND})"
        ),
    )
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> (Outcome, Duration) {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if let Some(limit) = limit {
        if took > limit {
            o.pass = false;
            o.detail.push_str(&format!("; runtime {took:.1?} exceeds {limit:?}"));
        }
    }
    (o, took)
}

fn report(failed: &mut usize, name: &str, (o, t): (Outcome, Duration)) {
    println!("{} criterion {name} [{t:.1?}]: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    *failed += usize::from(!o.pass);
}

fn main() {
    let mut failed = 0;
    report(&mut failed, "1 flow bound exactness", timed(Some(Duration::from_secs(60)), criterion_1));
    report(&mut failed, "2 supported-point scarcity", timed(None, criterion_2));
    let start = Instant::now();
    let corpus = corpus_50();
    let build = start.elapsed();
    let (mut o3, t3) = timed(None, || criterion_3(&corpus));
    let t3 = t3 + build;
    if t3 > Duration::from_secs(120) {
        o3.pass = false;
        o3.detail.push_str(&format!("; runtime {t3:.1?} exceeds 2 min"));
    }
    report(&mut failed, "3 circle packing correctness", (o3, t3));
    report(&mut failed, "4 ring-lemma boundedness", timed(None, || criterion_4(&corpus)));
    report(&mut failed, "5 non-return probability", timed(Some(Duration::from_secs(300)), criterion_5));
    report(&mut failed, "6 growth exponents", timed(None, criterion_6));
    report(&mut failed, "7 mass transport exactness", timed(None, criterion_7));
    report(&mut failed, "8 census convergence", timed(None, criterion_8));
    report(&mut failed, "9 embedding bound", timed(None, criterion_9));
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
