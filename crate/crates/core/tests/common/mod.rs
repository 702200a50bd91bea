#![allow(dead_code)]

use planar_limits_core::Graph;
use proptest::prelude::*;

/// Connected graph on `n` vertices: a random spanning tree plus extra edges.
pub fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
        let pairs = n * (n - 1) / 2;
        (Just(n), parents, proptest::collection::vec(any::<bool>(), pairs), 0.0..0.6f64)
            .prop_map(|(n, parents, extra, density)| build(n, &parents, &extra, density))
    })
}

fn build(n: usize, parents: &[usize], extra: &[bool], density: f64) -> Graph {
    let mut edges: Vec<(usize, usize)> = parents.iter().enumerate().map(|(i, &p)| (p, i + 1)).collect();
    let mut k = 0;
    // Thin out the extra edges deterministically from the density.
    let keep_every = if density <= 0.0 { usize::MAX } else { (1.0 / density).ceil() as usize };
    for u in 0..n {
        for v in u + 1..n {
            if extra[k] && k % keep_every == 0 && !edges.contains(&(u, v)) {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

pub fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}
