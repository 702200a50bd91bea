use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::planar::{disjoint_faces, PlanarMap};

/// Replaces every vertex of the tree `t` by a copy of the sphere
/// triangulation `tri` and, for every tree edge, glues a face of one copy to a
/// face of the other (orientation reversed). Each copy spends pairwise
/// vertex-disjoint faces, so every vertex is glued to at most one other.
///
/// The copy for tree vertex `v` keeps the numbering of `tri`; copy 0 (tree
/// vertex 0) occupies ids `0..tri.n()`.
pub fn tree_to_triangulation(t: &Graph, tri: &PlanarMap) -> Result<PlanarMap> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    tri.check_sphere_triangulation()?;
    let needed = t.max_degree();
    if needed == 0 {
        return Ok(tri.clone());
    }
    let faces = disjoint_faces(tri, needed)?;
    let nt = tri.n();

    let mut rot: Vec<Vec<usize>> = tri.rotations().to_vec();
    let mut copies: Vec<Vec<usize>> = vec![Vec::new(); t.n()];
    let mut faces_used = vec![0usize; t.n()];
    copies[0] = (0..nt).collect();

    let mut queue = vec![0usize];
    let mut visited = vec![false; t.n()];
    visited[0] = true;
    let mut head = 0;
    while head < queue.len() {
        let parent = queue[head];
        head += 1;
        for &child in t.neighbors(parent) {
            if visited[child] {
                continue;
            }
            visited[child] = true;
            queue.push(child);

            let pf = &faces[faces_used[parent]];
            faces_used[parent] += 1;
            let hole: [usize; 3] = [
                copies[parent][pf[0]],
                copies[parent][pf[1]],
                copies[parent][pf[2]],
            ];
            let cf = &faces[0];
            faces_used[child] = 1;
            // hole (A, B, C) is glued to child face (x, y, z) as A=x, B=z, C=y.
            let partner = [cf[0], cf[2], cf[1]];

            let mut map = vec![usize::MAX; nt];
            for i in 0..3 {
                map[partner[i]] = hole[i];
            }
            for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
                *slot = rot.len();
                rot.push(Vec::new());
            }
            for v in 0..nt {
                if !partner.contains(&v) {
                    rot[map[v]] = tri.rotation(v).iter().map(|&w| map[w]).collect();
                }
            }
            for i in 0..3 {
                let big = hole[i];
                let prev = hole[(i + 2) % 3];
                let next = hole[(i + 1) % 3];
                let small = partner[i];
                let from = partner[(i + 1) % 3];
                let to = partner[(i + 2) % 3];
                let list = tri.rotation(small);
                let d = list.len();
                let start = list.iter().position(|&w| w == from).expect("face corner");
                let fan: Vec<usize> = (1..d)
                    .map(|j| list[(start + j) % d])
                    .take_while(|&w| w != to)
                    .map(|w| map[w])
                    .collect();
                let at = rot[big].iter().position(|&w| w == prev).expect("face corner");
                rot[big].splice(at..at, fan);
                debug_assert_eq!(rot[big][(at + rot[big].len() - 1) % rot[big].len()], next);
            }
            copies[child] = map;
        }
    }
    let map = PlanarMap::new(rot)?;
    map.check_sphere_triangulation()?;
    Ok(map)
}
