//! Finite simple connected graphs with dense vertex indices.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub const UNREACHED: usize = usize::MAX;

/// A finite, simple, connected graph. Adjacency lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph on `n` vertices from an edge list, rejecting loops,
    /// repeated edges, out-of-range endpoints and disconnected input.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let g = Self::from_edges_unchecked_connectivity(n, edges)?;
        if !g.is_connected() {
            return Err(Error::Disconnected);
        }
        Ok(g)
    }

    pub(crate) fn from_edges_unchecked_connectivity(
        n: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::DuplicateEdge(u.min(w[0]), u.max(w[0])));
            }
        }
        Ok(Self { adj })
    }

    /// Builds from adjacency lists that are already known to be symmetric and
    /// simple. Lists are sorted here.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<usize>>) -> Self {
        for list in adj.iter_mut() {
            list.sort_unstable();
        }
        Self { adj }
    }

    pub fn single_vertex() -> Self {
        Self { adj: vec![Vec::new()] }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_distances(0).iter().all(|&d| d != UNREACHED)
    }

    pub fn is_tree(&self) -> bool {
        self.m() + 1 == self.n()
    }

    /// Graph distances from `src`; unreachable vertices get [`UNREACHED`].
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        self.bfs_distances_capped(src, usize::MAX)
    }

    /// BFS that stops expanding beyond distance `cap`.
    pub fn bfs_distances_capped(&self, src: usize, cap: usize) -> Vec<usize> {
        let mut dist = vec![UNREACHED; self.n()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            if dist[u] == cap {
                continue;
            }
            for &w in &self.adj[u] {
                if dist[w] == UNREACHED {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn eccentricity(&self, v: usize) -> usize {
        self.bfs_distances(v).into_iter().max().unwrap_or(0)
    }

    /// Induced subgraph on `vertices` (in the given order, which becomes the
    /// new index order). The caller guarantees the result is connected.
    pub(crate) fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![UNREACHED; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter_map(|&w| (index[w] != UNREACHED).then_some(index[w]))
                    .collect()
            })
            .collect();
        Graph::from_adjacency(adj)
    }

    /// Applies a vertex relabeling: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let mut adj = vec![Vec::new(); self.n()];
        for (v, list) in self.adj.iter().enumerate() {
            adj[perm[v]] = list.iter().map(|&w| perm[w]).collect();
        }
        Graph::from_adjacency(adj)
    }
}

/// A graph with a distinguished root vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootedGraph {
    graph: Graph,
    root: usize,
}

impl RootedGraph {
    pub fn new(graph: Graph, root: usize) -> Result<Self> {
        if root >= graph.n() {
            return Err(Error::VertexOutOfRange { vertex: root, n: graph.n() });
        }
        Ok(Self { graph, root })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn into_parts(self) -> (Graph, usize) {
        (self.graph, self.root)
    }

    /// The closed ball `B(o, r)`: the subgraph induced on vertices within
    /// graph distance `r` of the root. The root of the result is vertex 0 and
    /// the remaining vertices are numbered in BFS order.
    pub fn ball(&self, r: usize) -> RootedGraph {
        ball(&self.graph, self.root, r)
    }
}

/// The closed ball of radius `r` around `center`, rooted at `center`.
pub fn ball(g: &Graph, center: usize, r: usize) -> RootedGraph {
    let dist = g.bfs_distances_capped(center, r);
    let mut order: Vec<usize> = (0..g.n()).filter(|&v| dist[v] != UNREACHED).collect();
    order.sort_by_key(|&v| (dist[v], v));
    RootedGraph { graph: g.induced(&order), root: 0 }
}

/// Maximum vertex degree.
pub fn max_degree(g: &Graph) -> usize {
    g.max_degree()
}
