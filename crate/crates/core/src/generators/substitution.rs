use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A seed tree with two marked leaves and an orientation of its edges.
///
/// Each step replaces every directed edge `[a, b]` of the current tree by a
/// fresh copy of the seed, with the first marked vertex glued to `a` and the
/// second to `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubstitutionRule {
    seed: Graph,
    start: usize,
    end: usize,
    directed: Vec<(usize, usize)>,
}

impl SubstitutionRule {
    pub fn new(seed: Graph, start: usize, end: usize, directed: Vec<(usize, usize)>) -> Result<Self> {
        let n = seed.n();
        for v in [start, end] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
        if !seed.is_tree() {
            return Err(Error::NotATree);
        }
        if start == end {
            return Err(Error::InvalidParameter(format!("marked vertices coincide ({start})")));
        }
        if seed.degree(start) != 1 || seed.degree(end) != 1 {
            return Err(Error::InvalidParameter("marked vertices must be leaves".into()));
        }
        if directed.len() != seed.m()
            || directed.iter().any(|&(a, b)| a >= n || b >= n || !seed.has_edge(a, b))
        {
            return Err(Error::InvalidParameter("orientation must list every edge once".into()));
        }
        let mut check: Vec<(usize, usize)> =
            directed.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        check.sort_unstable();
        check.dedup();
        if check.len() != seed.m() {
            return Err(Error::InvalidParameter("orientation repeats an edge".into()));
        }
        Ok(Self { seed, start, end, directed })
    }

    /// Orients every edge away from `start` (any orientation is allowed).
    pub fn with_default_orientation(seed: Graph, start: usize, end: usize) -> Result<Self> {
        let dist = seed.bfs_distances(start);
        let directed = seed
            .edges()
            .map(|(a, b)| if dist[a] < dist[b] { (a, b) } else { (b, a) })
            .collect();
        Self::new(seed, start, end, directed)
    }

    /// Star `K_{1,3}` with two marked leaves: 3 edges, marked distance 2.
    pub fn star3() -> Self {
        let seed = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).expect("valid seed");
        Self::with_default_orientation(seed, 0, 2).expect("valid rule")
    }

    /// Path of length `delta` between the marked leaves with `branches` extra
    /// pendant edges hung from interior path vertices (round robin).
    pub fn caterpillar(delta: usize, branches: usize) -> Result<Self> {
        if delta < 2 && branches > 0 {
            return Err(Error::InvalidParameter("pendant edges need an interior vertex".into()));
        }
        if delta == 0 {
            return Err(Error::InvalidParameter("marked vertices must differ".into()));
        }
        let mut edges: Vec<(usize, usize)> = (0..delta).map(|i| (i, i + 1)).collect();
        for b in 0..branches {
            let host = 1 + b % (delta - 1);
            edges.push((host, delta + 1 + b));
        }
        let seed = Graph::from_edges(delta + 1 + branches, &edges)?;
        Self::with_default_orientation(seed, 0, delta)
    }

    pub fn seed(&self) -> &Graph {
        &self.seed
    }

    pub fn marked(&self) -> (usize, usize) {
        (self.start, self.end)
    }

    /// Number of seed edges `k`.
    pub fn edge_count(&self) -> usize {
        self.seed.m()
    }

    /// Distance `Δ` between the marked vertices in the seed.
    pub fn marked_distance(&self) -> usize {
        self.seed.bfs_distances(self.start)[self.end]
    }

    /// The growth exponent `log k / log Δ`.
    pub fn growth_exponent(&self) -> f64 {
        libm::log(self.edge_count() as f64) / libm::log(self.marked_distance() as f64)
    }
}

/// The `n`-th substitution tree `t_n` (`t_1` is the seed). Vertex ids of
/// `t_{n-1}` are kept in `t_n`, so the seed's marked vertices stay marked.
pub fn substitution_tree(rule: &SubstitutionRule, n: usize) -> Result<Graph> {
    if n == 0 {
        return Err(Error::InvalidParameter("substitution depth must be at least 1".into()));
    }
    let seed_n = rule.seed.n();
    let mut vertex_count = seed_n;
    let mut directed = rule.directed.clone();
    for _ in 1..n {
        let mut next = Vec::with_capacity(directed.len() * rule.directed.len());
        for &(a, b) in &directed {
            let mut map = vec![usize::MAX; seed_n];
            map[rule.start] = a;
            map[rule.end] = b;
            for (v, slot) in map.iter_mut().enumerate() {
                if v != rule.start && v != rule.end {
                    *slot = vertex_count;
                    vertex_count += 1;
                }
            }
            next.extend(rule.directed.iter().map(|&(x, y)| (map[x], map[y])));
        }
        directed = next;
    }
    Graph::from_edges(vertex_count, &directed)
}
