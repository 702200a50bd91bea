//! Text formats.
//!
//! * Graphs: a header `n m`, then `m` lines `u v` with `u < v`, then an
//!   optional `root o` line. Planar maps add one `rot v: w1 w2 ...` line per
//!   vertex listing its neighbors counterclockwise.
//! * Packings: CSV `vertex,cx,cy,r`.
//! * Point sets: CSV `x,y`.
//! * Censuses: JSON with the radius and one `{code, count, mass}` entry per
//!   atom; codes are hex, masses are exact `p/q` strings.
//!
//! Floats are written with 17 significant digits so files read back to the
//! same bits. Every file starts with a `# config: {...}` line (or, for JSON,
//! carries a `config` field); lines starting with `#` are skipped on input.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use planar_limits_core::convergence::BallDistribution;
use planar_limits_core::packing::Packing;
use planar_limits_core::{BallCode, Graph, PlanarMap, PointSet};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CliError, Result};

/// Contents of a graph file.
#[derive(Debug, Clone)]
pub struct GraphFile {
    pub graph: Graph,
    pub root: Option<usize>,
    pub map: Option<PlanarMap>,
}

pub fn config_line<C: Serialize>(config: &C) -> String {
    format!("# config: {}", serde_json::to_string(config).expect("config serializes"))
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn create(path: &Path) -> Result<fs::File> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::File::create(path).map_err(|e| CliError::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    create(path)?.write_all(text.as_bytes()).map_err(|e| CliError::io(path, e))
}

fn graph_body(g: &Graph, root: Option<usize>) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        s.push_str(&format!("{} {}\n", u.min(v), u.max(v)));
    }
    if let Some(o) = root {
        s.push_str(&format!("root {o}\n"));
    }
    s
}

pub fn write_graph<C: Serialize>(path: &Path, g: &Graph, root: Option<usize>, config: &C) -> Result<()> {
    write_text(path, &format!("{}\n{}", config_line(config), graph_body(g, root)))
}

pub fn write_map<C: Serialize>(path: &Path, map: &PlanarMap, root: Option<usize>, config: &C) -> Result<()> {
    let mut s = format!("{}\n{}", config_line(config), graph_body(&map.graph(), root));
    for v in 0..map.n() {
        let nb: Vec<String> = map.rotation(v).iter().map(|w| w.to_string()).collect();
        s.push_str(&format!("rot {v}: {}\n", nb.join(" ")));
    }
    write_text(path, &s)
}

pub fn read_graph(path: &Path) -> Result<GraphFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_graph(&text, path)
}

fn parse_usize(tok: Option<&str>, path: &Path, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| CliError::parse(path, line, format!("missing {what}")))?
        .parse()
        .map_err(|_| CliError::parse(path, line, format!("bad {what}")))
}

pub fn parse_graph(text: &str, path: &Path) -> Result<GraphFile> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hl, header) = lines.next().ok_or_else(|| CliError::parse(path, 1, "empty graph file"))?;
    let mut toks = header.split_whitespace();
    let n = parse_usize(toks.next(), path, hl, "vertex count")?;
    let m = parse_usize(toks.next(), path, hl, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut root = None;
    let mut rot: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (ln, line) in lines {
        if let Some(rest) = line.strip_prefix("root") {
            root = Some(parse_usize(rest.split_whitespace().next(), path, ln, "root")?);
        } else if let Some(rest) = line.strip_prefix("rot") {
            let (v, nb) = rest
                .split_once(':')
                .ok_or_else(|| CliError::parse(path, ln, "expected `rot v: ...`"))?;
            let v = parse_usize(Some(v.trim()), path, ln, "rotation vertex")?;
            let nb = nb
                .split_whitespace()
                .map(|t| parse_usize(Some(t), path, ln, "rotation entry"))
                .collect::<Result<Vec<_>>>()?;
            if rot.insert(v, nb).is_some() {
                return Err(CliError::parse(path, ln, format!("second rotation for vertex {v}")));
            }
        } else {
            let mut t = line.split_whitespace();
            let u = parse_usize(t.next(), path, ln, "edge endpoint")?;
            let v = parse_usize(t.next(), path, ln, "edge endpoint")?;
            if u >= v {
                return Err(CliError::parse(path, ln, format!("edge `{u} {v}` must have u < v")));
            }
            edges.push((u, v));
        }
    }
    if edges.len() != m {
        return Err(CliError::parse(path, hl, format!("header announces {m} edges, found {}", edges.len())));
    }
    let graph = Graph::from_edges(n, &edges)?;
    if let Some(o) = root.filter(|&o| o >= n) {
        return Err(CliError::parse(path, hl, format!("root {o} out of range")));
    }
    let map = if rot.is_empty() {
        None
    } else {
        if rot.len() != n || rot.keys().next_back() != Some(&(n - 1)) {
            return Err(CliError::parse(path, hl, "rotation lines must cover every vertex"));
        }
        let map = PlanarMap::new(rot.into_values().collect())?;
        if map.graph() != graph {
            return Err(CliError::parse(path, hl, "rotation system disagrees with the edge list"));
        }
        Some(map)
    };
    Ok(GraphFile { graph, root, map })
}

fn csv_writer<C: Serialize>(path: &Path, config: &C, header: &[&str]) -> Result<csv::Writer<fs::File>> {
    let mut f = create(path)?;
    writeln!(f, "{}", config_line(config)).map_err(|e| CliError::io(path, e))?;
    let mut w = csv::Writer::from_writer(f);
    w.write_record(header).map_err(|e| CliError::Csv { path: path.into(), source: e })?;
    Ok(w)
}

fn csv_reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let f = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    Ok(csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(f))
}

/// Writes rows of already formatted fields under a config line and header.
pub fn write_csv<C: Serialize>(path: &Path, config: &C, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv_writer(path, config, header)?;
    let err = |e| CliError::Csv { path: path.into(), source: e };
    for row in rows {
        w.write_record(row).map_err(err)?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

pub fn write_packing<C: Serialize>(path: &Path, p: &Packing, config: &C) -> Result<()> {
    let rows: Vec<Vec<String>> = (0..p.len())
        .map(|v| {
            let [cx, cy] = p.centers[v];
            vec![v.to_string(), format_float(cx), format_float(cy), format_float(p.radii[v])]
        })
        .collect();
    write_csv(path, config, &["vertex", "cx", "cy", "r"], &rows)
}

fn float_field(rec: &csv::StringRecord, i: usize, path: &Path, line: usize) -> Result<f64> {
    rec.get(i)
        .and_then(|t| t.trim().parse().ok())
        .ok_or_else(|| CliError::parse(path, line, format!("bad number in column {}", i + 1)))
}

pub fn read_packing(path: &Path) -> Result<Packing> {
    let mut rows = Vec::new();
    for (i, rec) in csv_reader(path)?.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Csv { path: path.into(), source: e })?;
        let line = rec.position().map_or(i + 2, |p| p.line() as usize);
        let v: usize = rec
            .get(0)
            .and_then(|t| t.trim().parse().ok())
            .ok_or_else(|| CliError::parse(path, line, "bad vertex id"))?;
        let c = [float_field(&rec, 1, path, line)?, float_field(&rec, 2, path, line)?];
        rows.push((v, c, float_field(&rec, 3, path, line)?));
    }
    rows.sort_by_key(|r| r.0);
    if rows.iter().enumerate().any(|(i, r)| r.0 != i) {
        return Err(CliError::parse(path, 1, "vertex ids must be 0..n without gaps"));
    }
    Ok(Packing { centers: rows.iter().map(|r| r.1).collect(), radii: rows.iter().map(|r| r.2).collect() })
}

pub fn write_points<C: Serialize>(path: &Path, pts: &[[f64; 2]], config: &C) -> Result<()> {
    let rows: Vec<Vec<String>> = pts.iter().map(|p| vec![format_float(p[0]), format_float(p[1])]).collect();
    write_csv(path, config, &["x", "y"], &rows)
}

pub fn read_points(path: &Path) -> Result<PointSet> {
    let mut pts = Vec::new();
    for (i, rec) in csv_reader(path)?.records().enumerate() {
        let rec = rec.map_err(|e| CliError::Csv { path: path.into(), source: e })?;
        let line = rec.position().map_or(i + 2, |p| p.line() as usize);
        pts.push([float_field(&rec, 0, path, line)?, float_field(&rec, 1, path, line)?]);
    }
    Ok(PointSet::new(pts)?)
}

pub fn fraction(q: &BigRational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

pub fn parse_fraction(s: &str) -> Option<BigRational> {
    let (p, q) = s.split_once('/')?;
    let (p, q): (BigInt, BigInt) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
    if q == BigInt::from(0) {
        return None;
    }
    Some(BigRational::new(p, q))
}

pub fn census_json(d: &BallDistribution) -> Value {
    let atoms: Vec<Value> = d
        .atoms()
        .map(|(code, count)| {
            json!({ "code": hex::encode(code.as_bytes()), "count": count, "mass": fraction(&d.mass(code)) })
        })
        .collect();
    json!({ "radius": d.radius(), "total": d.total(), "atoms": atoms })
}

pub fn census_from_json(v: &Value) -> Result<BallDistribution> {
    let bad = |m: &str| CliError::Usage(format!("census JSON: {m}"));
    let radius = v["radius"].as_u64().ok_or_else(|| bad("missing radius"))? as usize;
    let mut counts = BTreeMap::new();
    for atom in v["atoms"].as_array().ok_or_else(|| bad("missing atoms"))? {
        let code = atom["code"].as_str().ok_or_else(|| bad("atom without code"))?;
        let bytes = hex::decode(code).map_err(|_| bad("code is not hex"))?;
        let count = atom["count"].as_u64().ok_or_else(|| bad("atom without count"))?;
        counts.insert(BallCode::from_bytes(bytes), count);
    }
    Ok(BallDistribution::from_counts(radius, counts)?)
}

/// Pretty JSON object with the config stored under `config`.
pub fn write_json<C: Serialize>(path: &Path, config: &C, body: Value) -> Result<()> {
    let mut obj = serde_json::Map::new();
    obj.insert("config".into(), serde_json::to_value(config)?);
    match body {
        Value::Object(m) => obj.extend(m),
        other => {
            obj.insert("data".into(), other);
        }
    }
    let text = serde_json::to_string_pretty(&Value::Object(obj))?;
    write_text(path, &(text + "\n"))
}
