//! Named graph families and point clouds, written `name:arg:arg...`.

use std::fmt;
use std::str::FromStr;

use planar_limits_core::generators::{
    complete, complete_binary_tree, cycle, grid_map, hex_patch_coordinates, hex_patch_map, icosahedron,
    octahedron, path, quad_subdivision, random_bounded_triangulation, random_planar_map, star,
    substitution_tree, tetrahedron, tree_to_triangulation, triangulate_faces, SubstitutionRule,
};
use planar_limits_core::{Graph, PlanarMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Star(usize),
    Complete(usize),
    Grid(usize),
    BinaryTree(usize),
    Hex(usize),
    Tetrahedron,
    Octahedron,
    Icosahedron,
    Quad(usize),
    /// Random sphere triangulation: vertex budget, maximum degree.
    Triangulation(usize, usize),
    /// Random connected plane map: vertex budget, maximum degree, keep probability.
    Planar(usize, usize, f64),
    /// Zigzag face triangulation of a random plane map.
    Faces(usize, usize, f64),
    /// Substitution tree from the three-edge star rule, `n` iterations.
    Star3(usize),
    /// Caterpillar substitution: spine length, legs per spine vertex, iterations.
    Caterpillar(usize, usize, usize),
    /// Icosahedra glued along the `n`-th star3 substitution tree.
    Glued(usize),
}

/// A generated instance.
#[derive(Debug, Clone)]
pub struct Instance {
    pub graph: Graph,
    pub map: Option<PlanarMap>,
    pub root: Option<usize>,
    /// Family-specific measurements.
    pub notes: Value,
}

impl Instance {
    fn graph(graph: Graph, root: Option<usize>) -> Self {
        Self { graph, map: None, root, notes: Value::Null }
    }

    fn map(map: PlanarMap, root: Option<usize>) -> Self {
        Self { graph: map.graph(), map: Some(map), root, notes: Value::Null }
    }

    /// A tree or a graph of maximum degree 2 is planar under any rotation.
    fn trivially_planar(graph: Graph, root: Option<usize>) -> Self {
        let rot = (0..graph.n()).map(|v| graph.neighbors(v).to_vec()).collect();
        let map = PlanarMap::new(rot).ok().filter(|m| m.check_planar().is_ok());
        Self { graph, map, root, notes: Value::Null }
    }
}

fn arg<T: FromStr>(parts: &[&str], i: usize, spec: &str) -> Result<T> {
    parts
        .get(i)
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| CliError::Usage(format!("generator `{spec}`: argument {i} missing or malformed")))
}

impl FromStr for Family {
    type Err = CliError;

    fn from_str(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let a = |i| arg::<usize>(&parts, i, spec);
        let expect = |k: usize| {
            if parts.len() == k + 1 {
                Ok(())
            } else {
                Err(CliError::Usage(format!("generator `{spec}` takes {k} argument(s)")))
            }
        };
        let fam = match parts[0] {
            "path" => expect(1).and(a(1).map(Family::Path)),
            "cycle" => expect(1).and(a(1).map(Family::Cycle)),
            "star" => expect(1).and(a(1).map(Family::Star)),
            "complete" => expect(1).and(a(1).map(Family::Complete)),
            "grid" => expect(1).and(a(1).map(Family::Grid)),
            "tree" => expect(1).and(a(1).map(Family::BinaryTree)),
            "hex" => expect(1).and(a(1).map(Family::Hex)),
            "tetrahedron" => expect(0).map(|_| Family::Tetrahedron),
            "octahedron" => expect(0).map(|_| Family::Octahedron),
            "icosahedron" => expect(0).map(|_| Family::Icosahedron),
            "quad" => expect(1).and(a(1).map(Family::Quad)),
            "triangulation" => expect(2).and_then(|_| Ok(Family::Triangulation(a(1)?, a(2)?))),
            "planar" => expect(3).and_then(|_| Ok(Family::Planar(a(1)?, a(2)?, arg(&parts, 3, spec)?))),
            "faces" => expect(3).and_then(|_| Ok(Family::Faces(a(1)?, a(2)?, arg(&parts, 3, spec)?))),
            "star3" => expect(1).and(a(1).map(Family::Star3)),
            "caterpillar" => expect(3).and_then(|_| Ok(Family::Caterpillar(a(1)?, a(2)?, a(3)?))),
            "glued" => expect(1).and(a(1).map(Family::Glued)),
            other => Err(CliError::Usage(format!("unknown generator `{other}`"))),
        }?;
        fam.validate()?;
        Ok(fam)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Path(n) => write!(f, "path:{n}"),
            Family::Cycle(n) => write!(f, "cycle:{n}"),
            Family::Star(n) => write!(f, "star:{n}"),
            Family::Complete(n) => write!(f, "complete:{n}"),
            Family::Grid(n) => write!(f, "grid:{n}"),
            Family::BinaryTree(d) => write!(f, "tree:{d}"),
            Family::Hex(r) => write!(f, "hex:{r}"),
            Family::Tetrahedron => write!(f, "tetrahedron"),
            Family::Octahedron => write!(f, "octahedron"),
            Family::Icosahedron => write!(f, "icosahedron"),
            Family::Quad(n) => write!(f, "quad:{n}"),
            Family::Triangulation(n, m) => write!(f, "triangulation:{n}:{m}"),
            Family::Planar(n, m, k) => write!(f, "planar:{n}:{m}:{k}"),
            Family::Faces(n, m, k) => write!(f, "faces:{n}:{m}:{k}"),
            Family::Star3(n) => write!(f, "star3:{n}"),
            Family::Caterpillar(d, b, n) => write!(f, "caterpillar:{d}:{b}:{n}"),
            Family::Glued(n) => write!(f, "glued:{n}"),
        }
    }
}

impl Family {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(CliError::Usage(format!("generator `{self}`: {m}")));
        match *self {
            Family::Path(n) | Family::Complete(n) | Family::Grid(n) if n == 0 => bad("size must be positive"),
            Family::Cycle(n) if n < 3 => bad("a cycle needs at least 3 vertices"),
            Family::Star3(n) | Family::Caterpillar(_, _, n) | Family::Glued(n) if n == 0 => {
                bad("iteration count must be positive")
            }
            Family::Planar(_, _, k) | Family::Faces(_, _, k) if !(0.0..=1.0).contains(&k) => {
                bad("keep probability must lie in [0, 1]")
            }
            _ => Ok(()),
        }
    }

    /// Whether the output depends on the seed.
    pub fn is_random(&self) -> bool {
        matches!(self, Family::Triangulation(..) | Family::Planar(..) | Family::Faces(..))
    }

    pub fn build(&self, seed: u64) -> Result<Instance> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(match *self {
            Family::Path(n) => Instance::trivially_planar(path(n), Some(0)),
            Family::Cycle(n) => Instance::trivially_planar(cycle(n), Some(0)),
            Family::Star(l) => Instance::trivially_planar(star(l), Some(0)),
            Family::Complete(n) => Instance::graph(complete(n), Some(0)),
            Family::Grid(n) => Instance::map(grid_map(n), Some((n / 2) * n + n / 2)),
            Family::BinaryTree(d) => {
                let (g, o) = complete_binary_tree(d).into_parts();
                Instance::trivially_planar(g, Some(o))
            }
            Family::Hex(r) => Instance::map(hex_patch_map(r), Some(0)),
            Family::Tetrahedron => Instance::map(tetrahedron(), Some(0)),
            Family::Octahedron => Instance::map(octahedron(), Some(0)),
            Family::Icosahedron => Instance::map(icosahedron(), Some(0)),
            Family::Quad(n) => {
                let q = quad_subdivision(n);
                let mut inst = Instance::map(q.map, Some(0));
                inst.notes = json!({ "quads": q.quads.len() });
                inst
            }
            Family::Triangulation(n, m) => Instance::map(random_bounded_triangulation(n, m, &mut rng)?, None),
            Family::Planar(n, m, k) => Instance::map(random_planar_map(n, m, k, &mut rng)?, None),
            Family::Faces(n, m, k) => {
                let g = random_planar_map(n, m, k, &mut rng)?;
                let ft = triangulate_faces(&g, m)?;
                let notes = json!({
                    "input_vertices": g.n(),
                    "input_max_degree": g.max_degree(),
                    "vertex_ratio": ft.vertex_ratio,
                    "degree_ratio": ft.degree_ratio,
                    "zigzag_faces": ft.zigzag_faces,
                    "inner_cycle_faces": ft.inner_cycle_faces,
                });
                let mut inst = Instance::map(ft.map, None);
                inst.notes = notes;
                inst
            }
            Family::Star3(n) => substitution(&SubstitutionRule::star3(), n)?,
            Family::Caterpillar(d, b, n) => substitution(&SubstitutionRule::caterpillar(d, b)?, n)?,
            Family::Glued(n) => {
                let tree = substitution_tree(&SubstitutionRule::star3(), n)?;
                Instance::map(tree_to_triangulation(&tree, &icosahedron())?, Some(0))
            }
        })
    }
}

fn substitution(rule: &SubstitutionRule, n: usize) -> Result<Instance> {
    let mut inst = Instance::trivially_planar(substitution_tree(rule, n)?, Some(rule.marked().0));
    inst.notes = json!({ "growth_exponent": rule.growth_exponent() });
    Ok(inst)
}

/// Point sets for the supported-point experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cloud {
    /// `n × n` integer lattice.
    Grid(usize),
    /// `n` uniform points in the unit square.
    Uniform(usize),
    /// Triangular lattice within hex distance `r`.
    Hex(usize),
}

impl FromStr for Cloud {
    type Err = CliError;

    fn from_str(spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 2 {
            return Err(CliError::Usage(format!("point cloud `{spec}` takes one argument")));
        }
        let n: usize = arg(&parts, 1, spec)?;
        match parts[0] {
            "grid" if n >= 2 => Ok(Cloud::Grid(n)),
            "uniform" if n >= 2 => Ok(Cloud::Uniform(n)),
            "hex" if n >= 1 => Ok(Cloud::Hex(n)),
            "grid" | "uniform" | "hex" => Err(CliError::Usage(format!("point cloud `{spec}` has fewer than 2 points"))),
            other => Err(CliError::Usage(format!("unknown point cloud `{other}`"))),
        }
    }
}

impl Cloud {
    pub fn points(&self, seed: u64) -> Vec<[f64; 2]> {
        match *self {
            Cloud::Grid(n) => (0..n * n).map(|i| [(i % n) as f64, (i / n) as f64]).collect(),
            Cloud::Uniform(n) => {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                (0..n).map(|_| [rng.gen::<f64>(), rng.gen::<f64>()]).collect()
            }
            Cloud::Hex(r) => hex_patch_coordinates(r),
        }
    }
}
