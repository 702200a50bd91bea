//! Graph families: elementary graphs, lattices, trees, polyhedra, and the
//! constructions in the submodules.

mod face_triangulation;
mod gluing;
mod quad;
mod random;
mod substitution;

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::{Graph, RootedGraph};
use crate::planar::PlanarMap;

pub use face_triangulation::{triangulate_faces, FaceTriangulation};
pub use gluing::tree_to_triangulation;
pub use quad::{quad_subdivision, QuadMap};
pub use random::{random_bounded_triangulation, random_planar_map};
pub use substitution::{substitution_tree, SubstitutionRule};

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edges(n, &edges).expect("path is valid")
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edges(n, &edges).expect("cycle is valid")
}

/// `K_{1,leaves}` with the center at vertex 0.
pub fn star(leaves: usize) -> Graph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &edges).expect("star is valid")
}

pub fn complete(n: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            edges.push((u, v));
        }
    }
    Graph::from_edges(n, &edges).expect("complete graph is valid")
}

/// The `n x n` grid; vertex `(i, j)` is `i * n + j`.
pub fn grid(n: usize) -> Graph {
    assert!(n >= 1);
    let mut edges = Vec::with_capacity(2 * n * n);
    for i in 0..n {
        for j in 0..n {
            let v = i * n + j;
            if j + 1 < n {
                edges.push((v, v + 1));
            }
            if i + 1 < n {
                edges.push((v, v + n));
            }
        }
    }
    Graph::from_edges(n * n, &edges).expect("grid is valid")
}

/// The `n x n` grid as a plane map with square faces (`n >= 2`).
pub fn grid_map(n: usize) -> PlanarMap {
    assert!(n >= 2);
    let mut faces = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let v = i * n + j;
            faces.push(vec![v, v + 1, v + n + 1, v + n]);
        }
    }
    PlanarMap::from_faces(n * n, &faces).expect("grid faces are consistent")
}

/// Complete binary tree of the given depth, rooted at the top (vertex 0).
pub fn complete_binary_tree(depth: usize) -> RootedGraph {
    let n = (1usize << (depth + 1)) - 1;
    let edges: Vec<_> = (1..n).map(|v| ((v - 1) / 2, v)).collect();
    RootedGraph::new(Graph::from_edges(n, &edges).expect("tree is valid"), 0)
        .expect("root in range")
}

/// Axial coordinates of the triangular lattice within hex distance `r`,
/// center first.
fn hex_vertices(r: usize) -> (Vec<(i64, i64)>, BTreeMap<(i64, i64), usize>) {
    let r = r as i64;
    let mut coords = vec![(0, 0)];
    for q in -r..=r {
        for s in -r..=r {
            if (q, s) != (0, 0) && q.abs().max(s.abs()).max((q + s).abs()) <= r {
                coords.push((q, s));
            }
        }
    }
    let index = coords.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    (coords, index)
}

/// Ball of radius `r` in the triangular lattice (the hexagonal grid of
/// degree 6), centered at vertex 0.
pub fn hex_patch(r: usize) -> Graph {
    hex_patch_map(r).graph()
}

/// [`hex_patch`] as a disk triangulation. For `r = 0` the single vertex has
/// no faces; callers needing a map should use `r >= 1`.
pub fn hex_patch_map(r: usize) -> PlanarMap {
    if r == 0 {
        return PlanarMap::from_rotation_unchecked(vec![Vec::new()]);
    }
    let (coords, index) = hex_vertices(r);
    let mut faces = Vec::new();
    for &(q, s) in &coords {
        let up = [(q, s), (q + 1, s), (q, s + 1)];
        let down = [(q, s), (q + 1, s - 1), (q + 1, s)];
        for tri in [up, down] {
            if let (Some(&a), Some(&b), Some(&c)) =
                (index.get(&tri[0]), index.get(&tri[1]), index.get(&tri[2]))
            {
                faces.push(vec![a, b, c]);
            }
        }
    }
    PlanarMap::from_faces(coords.len(), &faces).expect("hex faces are consistent")
}

/// Plane coordinates of [`hex_patch`] vertices with unit edge length.
pub fn hex_patch_coordinates(r: usize) -> Vec<[f64; 2]> {
    let h = libm::sqrt(3.0) / 2.0;
    hex_vertices(r)
        .0
        .into_iter()
        .map(|(q, s)| [q as f64 + s as f64 / 2.0, s as f64 * h])
        .collect()
}

pub fn tetrahedron() -> PlanarMap {
    let faces = [vec![0, 1, 3], vec![1, 2, 3], vec![2, 0, 3], vec![0, 2, 1]];
    PlanarMap::from_faces(4, &faces).expect("tetrahedron is valid")
}

pub fn octahedron() -> PlanarMap {
    let faces = [
        vec![0, 1, 3],
        vec![1, 4, 3],
        vec![1, 2, 4],
        vec![2, 5, 4],
        vec![2, 0, 5],
        vec![0, 3, 5],
        vec![3, 4, 5],
        vec![0, 2, 1],
    ];
    PlanarMap::from_faces(6, &faces).expect("octahedron is valid")
}

pub fn icosahedron() -> PlanarMap {
    let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
    let mut pts: Vec<[f64; 3]> = Vec::with_capacity(12);
    for a in [-1.0, 1.0] {
        for b in [-phi, phi] {
            pts.push([0.0, a, b]);
            pts.push([a, b, 0.0]);
            pts.push([b, 0.0, a]);
        }
    }
    let dist2 = |p: [f64; 3], q: [f64; 3]| -> f64 {
        (0..3).map(|i| (p[i] - q[i]) * (p[i] - q[i])).sum()
    };
    let adjacent = |i: usize, j: usize| libm::fabs(dist2(pts[i], pts[j]) - 4.0) < 1e-9;
    let mut faces = Vec::new();
    for a in 0..12 {
        for b in (a + 1)..12 {
            for c in (b + 1)..12 {
                if adjacent(a, b) && adjacent(b, c) && adjacent(a, c) {
                    let (p, q, r) = (pts[a], pts[b], pts[c]);
                    let det = p[0] * (q[1] * r[2] - q[2] * r[1]) - p[1] * (q[0] * r[2] - q[2] * r[0])
                        + p[2] * (q[0] * r[1] - q[1] * r[0]);
                    faces.push(if det > 0.0 { vec![a, b, c] } else { vec![a, c, b] });
                }
            }
        }
    }
    PlanarMap::from_faces(12, &faces).expect("icosahedron is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_sizes() {
        assert_eq!(grid(1).n(), 1);
        let g2 = grid(2);
        assert_eq!((g2.n(), g2.m()), (4, 4));
        assert!((0..4).all(|v| g2.degree(v) == 2));
        assert_eq!((grid(3).n(), grid(3).m()), (9, 12));
    }

    #[test]
    fn grid_map_is_planar() {
        let map = grid_map(5);
        map.check_planar().unwrap();
        assert_eq!(map.faces().len(), 16 + 1);
    }

    #[test]
    fn binary_tree_sizes() {
        assert_eq!(complete_binary_tree(0).graph().n(), 1);
        assert_eq!(complete_binary_tree(3).graph().n(), 15);
        assert_eq!(complete_binary_tree(10).graph().n(), 2047);
    }

    #[test]
    fn hex_patch_sizes_and_degrees() {
        assert_eq!(hex_patch(0).n(), 1);
        let h1 = hex_patch(1);
        assert_eq!(h1.n(), 7);
        assert_eq!(h1.degree(0), 6);
        for r in 2..6 {
            let g = hex_patch(r);
            assert_eq!(g.n(), 3 * r * (r + 1) + 1);
            assert_eq!(g.max_degree(), 6);
            let dist = g.bfs_distances(0);
            for v in 0..g.n() {
                if dist[v] < r {
                    assert_eq!(g.degree(v), 6, "interior vertex {v} at radius {r}");
                }
            }
        }
    }

    #[test]
    fn hex_patch_map_is_disk_triangulation() {
        let map = hex_patch_map(3);
        map.check_planar().unwrap();
        let faces = map.faces();
        let long: Vec<_> = faces.iter().filter(|f| f.len() != 3).collect();
        assert_eq!(long.len(), 1);
        assert_eq!(long[0].len(), 18);
    }
}
