use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use planar_limits_core::convergence::{ball_distribution, convergence_diagnostic, tv_distance_exact};
use planar_limits_core::packing::{
    boundary_distances, centers, deepest_vertex, fit_in_unit_disk, normalize_to_root, pack, ring_ratio_stats,
    BoundaryCondition, SolverOptions,
};
use planar_limits_core::transport::{builtin_transports, imtp_check, FiniteRootedMeasure, RootLaw};
use planar_limits_core::walks::{growth_profile, phi_curve, return_probabilities, PhiMode, WalkSpec};
use planar_limits_core::{Graph, PlanarMap};
use serde_json::{json, Value};

use crate::analysis::analyze_support;
use crate::config::{
    CensusArgs, Command, GenerateArgs, ImtpArgs, PackArgs, PipelineArgs, SupportedArgs, WalkArgs,
};
use crate::error::{CliError, Result};
use crate::family::{Cloud, Family, Instance};
use crate::io::{self, fraction};
use crate::sweep;

/// Runs a resolved command and returns the files it wrote.
pub fn run(cmd: &Command) -> Result<Vec<PathBuf>> {
    let out = cmd.out_dir();
    match cmd {
        Command::Generate(a) => generate(cmd, a, &out),
        Command::Pack(a) => pack_cmd(cmd, a, &out),
        Command::Supported(a) => supported(cmd, a, &out),
        Command::Walk(a) => walk(cmd, a, &out),
        Command::Census(a) => census(cmd, a, &out),
        Command::Imtp(a) => imtp(cmd, a, &out),
        Command::Pipeline(a) => pipeline(cmd, a, &out),
    }
}

fn need<T: Copy>(x: Option<T>) -> T {
    x.expect("command was resolved")
}

fn load_instance(graph: Option<&Path>, generator: Option<&str>, seed: u64) -> Result<Instance> {
    match (graph, generator) {
        (Some(path), _) => {
            let f = io::read_graph(path)?;
            Ok(Instance { graph: f.graph, map: f.map, root: f.root, notes: Value::Null })
        }
        (None, Some(spec)) => spec.parse::<Family>()?.build(seed),
        (None, None) => Err(CliError::Usage("no input graph".into())),
    }
}

fn require_map(inst: &Instance) -> Result<&PlanarMap> {
    inst.map
        .as_ref()
        .ok_or_else(|| CliError::Usage("this command needs a planar map (a graph file with `rot` lines)".into()))
}

fn generate(cmd: &Command, a: &GenerateArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let family: Family = a.generator.as_deref().unwrap_or_default().parse()?;
    let inst = family.build(need(a.seed))?;
    let graph_path = out.join("graph.txt");
    match &inst.map {
        Some(map) => io::write_map(&graph_path, map, inst.root, cmd)?,
        None => io::write_graph(&graph_path, &inst.graph, inst.root, cmd)?,
    }
    let g = &inst.graph;
    let report = json!({
        "family": family.to_string(),
        "vertices": g.n(),
        "edges": g.m(),
        "max_degree": g.max_degree(),
        "connected": g.is_connected(),
        "planar_map": inst.map.is_some(),
        "euler_characteristic": inst.map.as_ref().map(|m| m.euler_characteristic()),
        "sphere_triangulation": inst.map.as_ref().map(|m| m.is_sphere_triangulation()),
        "root": inst.root,
        "notes": inst.notes,
    });
    let report_path = out.join("report.json");
    io::write_json(&report_path, cmd, report)?;
    Ok(vec![graph_path, report_path])
}

fn pack_cmd(cmd: &Command, a: &PackArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let inst = load_instance(a.graph.as_deref(), a.generator.as_deref(), need(a.seed))?;
    let map = require_map(&inst)?;
    let bc = BoundaryCondition::default_for(map);
    let opts = SolverOptions { tol: need(a.tol), max_sweeps: need(a.max_sweeps), ..SolverOptions::default() };
    let (p, sol) = pack(map, &bc, &opts, need(a.layout_tol))?;
    let g = map.graph();
    let root = deepest_vertex(map, &bc);
    let depth = boundary_distances(map, &bc)[root];
    let d = need(a.radius);
    let ring = ring_ratio_stats(&p, map, &bc, root, d).ok();
    let max_r = p.radii.iter().copied().fold(0.0, f64::max);

    let mut written = Vec::new();
    let normalized = normalize_to_root(&p, root);
    let path = out.join("packing.csv");
    io::write_packing(&path, &normalized, cmd)?;
    written.push(path);
    if need(a.unit_disk) {
        let path = out.join("packing_unit_disk.csv");
        io::write_packing(&path, &fit_in_unit_disk(&p), cmd)?;
        written.push(path);
    }
    let report = json!({
        "vertices": map.n(),
        "outer_face": bc.outer,
        "sweeps": sol.sweeps,
        "newton_steps": sol.newton_steps,
        "angle_residual": sol.residual,
        "tangency_residual": p.scaled_tangency_residual(&g),
        "max_overlap": p.max_overlap(&g).max(0.0) / max_r,
        "root": root,
        "root_depth": depth,
        "ring": ring.map(|r| json!({
            "distance": d,
            "disks": r.disks,
            "max_ratio": r.max_ratio,
            "max_neighbor_ratio": r.max_neighbor_ratio,
        })),
    });
    let path = out.join("report.json");
    io::write_json(&path, cmd, report)?;
    written.push(path);
    Ok(written)
}

fn supported(cmd: &Command, a: &SupportedArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let seed = need(a.seed);
    let c = match (&a.points, &a.cloud) {
        (Some(path), _) => io::read_points(path)?,
        (None, Some(spec)) => planar_limits_core::PointSet::new(spec.parse::<Cloud>()?.points(seed))?,
        (None, None) => return Err(CliError::Usage("no point set".into())),
    };
    let pool = sweep::pool(need(a.jobs))?;
    let analysis = pool.install(|| analyze_support(&c, need(a.delta), &a.s, seed))?;
    let mut written = Vec::new();
    if a.cloud.is_some() {
        let path = out.join("points.csv");
        io::write_points(&path, c.points(), cmd)?;
        written.push(path);
    }
    let path = out.join("report.json");
    io::write_json(&path, cmd, analysis.to_json())?;
    written.push(path);
    Ok(written)
}

fn walk(cmd: &Command, a: &WalkArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let seed = need(a.seed);
    let inst = load_instance(a.graph.as_deref(), a.generator.as_deref(), seed)?;
    let g = &inst.graph;
    let horizon = need(a.horizon);
    let samples = need(a.samples);
    let mode = match a.mode.as_deref() {
        Some("exact") => PhiMode::Exact,
        Some("sampled") => PhiMode::SampledStarts { starts: samples, seed },
        Some("mc") => PhiMode::MonteCarlo { samples, seed },
        _ => PhiMode::Auto { seed },
    };
    let curve = phi_curve(g, &WalkSpec::new(horizon, mode)?)?;
    let root = a.root.or(inst.root).unwrap_or(0);
    if root >= g.n() {
        return Err(CliError::Usage(format!("--root {root} out of range for {} vertices", g.n())));
    }
    let returns = return_probabilities(g, root, horizon)?;
    let r_max = a.radius.unwrap_or_else(|| g.eccentricity(root));
    let growth = growth_profile(g, root, r_max)?;

    let phi_rows: Vec<Vec<String>> = curve
        .iter()
        .map(|e| vec![e.horizon.to_string(), io::format_float(e.value), io::format_float(e.stderr)])
        .collect();
    let return_rows: Vec<Vec<String>> =
        returns.iter().enumerate().map(|(n, p)| vec![n.to_string(), io::format_float(*p)]).collect();
    let growth_rows: Vec<Vec<String>> =
        growth.sizes.iter().enumerate().map(|(r, s)| vec![r.to_string(), s.to_string()]).collect();
    let paths = [out.join("phi.csv"), out.join("returns.csv"), out.join("growth.csv"), out.join("report.json")];
    io::write_csv(&paths[0], cmd, &["n", "phi", "stderr"], &phi_rows)?;
    io::write_csv(&paths[1], cmd, &["n", "p"], &return_rows)?;
    io::write_csv(&paths[2], cmd, &["r", "ball_size"], &growth_rows)?;
    let last = curve.last().expect("horizon is positive");
    let report = json!({
        "vertices": g.n(),
        "root": root,
        "phi": { "horizon": last.horizon, "value": last.value, "stderr": last.stderr, "samples": last.samples },
        "growth": { "max_radius": r_max, "fit_radii": growth.fit_radii, "alpha": growth.alpha },
    });
    io::write_json(&paths[3], cmd, report)?;
    Ok(paths.to_vec())
}

fn graph_list(files: &[PathBuf], gens: &[String], seed: u64) -> Result<Vec<(String, Graph)>> {
    let mut out = Vec::new();
    for f in files {
        out.push((f.display().to_string(), io::read_graph(f)?.graph));
    }
    for spec in gens {
        out.push((spec.clone(), spec.parse::<Family>()?.build(seed)?.graph));
    }
    Ok(out)
}

fn census(cmd: &Command, a: &CensusArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let graphs = graph_list(&a.graph, &a.generator, need(a.seed))?;
    let radius = need(a.radius);
    let pool = sweep::pool(need(a.jobs))?;
    let censuses = sweep::par_map(&pool, &graphs, |(_, g)| ball_distribution(g, radius))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let mut written = Vec::new();
    for (i, ((name, _), d)) in graphs.iter().zip(&censuses).enumerate() {
        let path = out.join(format!("census_{i}.json"));
        let mut body = io::census_json(d);
        body["graph"] = json!(name);
        io::write_json(&path, cmd, body)?;
        written.push(path);
    }
    let plain: Vec<Graph> = graphs.iter().map(|(_, g)| g.clone()).collect();
    let radii: Vec<usize> = (0..=radius).collect();
    let rows = pool.install(|| convergence_diagnostic(&plain, &radii))?;
    let mut csv_rows = Vec::new();
    for row in &rows {
        for (i, tv) in row.consecutive_tv.iter().enumerate() {
            csv_rows.push(vec![row.radius.to_string(), i.to_string(), io::format_float(*tv)]);
        }
    }
    let exact_tv: Vec<String> = censuses
        .windows(2)
        .map(|w| tv_distance_exact(&w[0], &w[1]).map(|q| fraction(&q)))
        .collect::<Result<_, _>>()?;
    let path = out.join("diagnostic.csv");
    io::write_csv(&path, cmd, &["radius", "pair", "tv"], &csv_rows)?;
    written.push(path);
    let report = json!({
        "graphs": graphs.iter().map(|(n, g)| json!({ "name": n, "vertices": g.n() })).collect::<Vec<_>>(),
        "radius": radius,
        "support_sizes": censuses.iter().map(|d| d.support_size()).collect::<Vec<_>>(),
        "consecutive_tv_exact": exact_tv,
        "diagnostic": rows.iter().map(|r| json!({
            "radius": r.radius,
            "consecutive_tv": r.consecutive_tv,
            "non_cauchy": r.non_cauchy,
        })).collect::<Vec<_>>(),
    });
    let path = out.join("report.json");
    io::write_json(&path, cmd, report)?;
    written.push(path);
    Ok(written)
}

fn imtp(cmd: &Command, a: &ImtpArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let graphs: Vec<Graph> = graph_list(&a.graph, &a.generator, need(a.seed))?.into_iter().map(|p| p.1).collect();
    let mu = match a.root {
        None => FiniteRootedMeasure::unbiased(graphs)?,
        Some(o) => {
            let w = BigRational::new(BigInt::from(1), BigInt::from(graphs.len()));
            let entries = graphs
                .into_iter()
                .map(|g| {
                    if o >= g.n() {
                        return Err(CliError::Usage(format!("--root {o} out of range for {} vertices", g.n())));
                    }
                    let mut law = vec![BigRational::from_integer(0.into()); g.n()];
                    law[o] = BigRational::from_integer(1.into());
                    Ok((g, w.clone(), RootLaw::Explicit(law)))
                })
                .collect::<Result<Vec<_>>>()?;
            FiniteRootedMeasure::new(entries)?
        }
    };
    let mut all_equal = true;
    let results: Vec<Value> = builtin_transports()
        .iter()
        .map(|f| {
            let r = imtp_check(&mu, f);
            all_equal &= r.equal();
            json!({
                "transport": f.name(),
                "lhs": fraction(&r.lhs),
                "rhs": fraction(&r.rhs),
                "equal": r.equal(),
                "per_graph": r.per_graph.iter().map(|(l, r)| json!({ "lhs": fraction(l), "rhs": fraction(r) })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let report = json!({ "unbiased": mu.is_unbiased(), "all_equal": all_equal, "transports": results });
    let path = out.join("report.json");
    io::write_json(&path, cmd, report)?;
    Ok(vec![path])
}

fn pipeline(cmd: &Command, a: &PipelineArgs, out: &Path) -> Result<Vec<PathBuf>> {
    let family: Family = a.generator.as_deref().unwrap_or_default().parse()?;
    let first = need(a.seed);
    let seeds: Vec<u64> = (0..need(a.runs) as u64).map(|i| first.wrapping_add(i)).collect();
    let opts = SolverOptions { tol: need(a.tol), ..SolverOptions::default() };
    let delta = need(a.delta);
    let pool = sweep::pool(need(a.jobs))?;
    let results = sweep::par_map(&pool, &seeds, |&seed| -> Result<_> {
        let inst = family.build(seed)?;
        let map = require_map(&inst)?;
        let bc = BoundaryCondition::default_for(map);
        let (p, sol) = pack(map, &bc, &opts, 1e-8)?;
        let c = centers(&p);
        let analysis = analyze_support(&c, delta, &a.s, seed)?;
        Ok((seed, p, sol, analysis))
    });
    let mut written = Vec::new();
    let mut runs = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        let (seed, p, sol, analysis) = r?;
        let dir = out.join(format!("run_{i}"));
        let (pp, cp) = (dir.join("packing.csv"), dir.join("points.csv"));
        io::write_packing(&pp, &p, cmd)?;
        io::write_points(&cp, &p.centers, cmd)?;
        written.extend([pp, cp]);
        runs.push(json!({
            "seed": seed,
            "vertices": p.len(),
            "sweeps": sol.sweeps,
            "newton_steps": sol.newton_steps,
            "angle_residual": sol.residual,
            "support": analysis.to_json(),
        }));
    }
    let all_ok = runs.iter().all(|r| r["support"]["all_ok"] == json!(true));
    let path = out.join("report.json");
    io::write_json(&path, cmd, json!({ "runs": runs, "all_ok": all_ok }))?;
    written.push(path);
    Ok(written)
}
