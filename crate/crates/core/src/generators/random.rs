use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::generators::tetrahedron;
use crate::planar::PlanarMap;

/// Random sphere triangulation with at most `n` vertices and maximum degree
/// at most `max_degree`, grown from the tetrahedron by inserting vertices into
/// faces and flipping edges. A move is only applied when no degree exceeds
/// the bound; if the process stalls the current triangulation is returned.
pub fn random_bounded_triangulation<R: Rng + ?Sized>(
    n: usize,
    max_degree: usize,
    rng: &mut R,
) -> Result<PlanarMap> {
    if max_degree < 6 {
        return Err(Error::Infeasible(format!(
            "maximum degree {max_degree} < 6 cannot hold for large triangulations"
        )));
    }
    if n < 4 {
        return Err(Error::InvalidParameter(format!("need n >= 4, got {n}")));
    }
    let mut map = tetrahedron();
    let mut stalls = 0usize;
    while map.n() < n && stalls < 100 * n {
        let v = rng.gen_range(0..map.n());
        let d = map.degree(v);
        let i = rng.gen_range(0..d);
        let a = map.rotation(v)[i];
        let b = map.rotation(v)[(i + 1) % d];
        let full = [v, a, b].into_iter().find(|&w| map.degree(w) >= max_degree);
        match full {
            None => {
                let x = map.add_vertex();
                map.insert_before(v, b, x);
                map.insert_before(a, v, x);
                map.insert_before(b, a, x);
                for w in [v, a, b] {
                    map.push_neighbor(x, w);
                }
                legalize(&mut map, x, max_degree);
                balance_flip(&mut map, max_degree, rng);
            }
            Some(w) => {
                stalls += 1;
                relieve(&mut map, w, max_degree, rng);
            }
        }
    }
    debug_assert!(map.is_sphere_triangulation());
    Ok(map)
}

fn flip_allowed(map: &PlanarMap, a: usize, b: usize, max_degree: usize) -> bool {
    let c = map.next_in_face(a, b);
    let d = map.next_in_face(b, a);
    map.degree(c) < max_degree && map.degree(d) < max_degree
}

/// Flips edges opposite the new vertex `x` while this lowers the degree sum
/// of the edge endpoints, as in incremental Delaunay insertion.
fn legalize(map: &mut PlanarMap, x: usize, max_degree: usize) {
    let rot = map.rotation(x).to_vec();
    let mut stack: Vec<(usize, usize)> =
        (0..rot.len()).map(|i| (rot[i], rot[(i + 1) % rot.len()])).collect();
    while let Some((a, b)) = stack.pop() {
        if !map.has_edge(a, b) {
            continue;
        }
        let d = if map.next_in_face(a, b) == x {
            map.next_in_face(b, a)
        } else if map.next_in_face(b, a) == x {
            map.next_in_face(a, b)
        } else {
            continue;
        };
        let improves = map.degree(a) + map.degree(b) > map.degree(x) + map.degree(d) + 2;
        if improves && flip_allowed(map, a, b, max_degree) && map.flip(a, b).is_some() {
            stack.extend([(a, d), (d, b)]);
        }
    }
}

fn balance_flip<R: Rng + ?Sized>(map: &mut PlanarMap, max_degree: usize, rng: &mut R) {
    let a = rng.gen_range(0..map.n());
    let b = *map.rotation(a).choose(rng).expect("vertices have neighbors");
    let c = map.next_in_face(a, b);
    let d = map.next_in_face(b, a);
    let before = map.degree(a) + map.degree(b);
    let after = map.degree(c) + map.degree(d) + 2;
    if before > after && flip_allowed(map, a, b, max_degree) {
        map.flip(a, b);
    }
}

/// Tries to lower the degree of a saturated vertex by flipping one of its
/// edges away.
fn relieve<R: Rng + ?Sized>(map: &mut PlanarMap, w: usize, max_degree: usize, rng: &mut R) {
    let b = *map.rotation(w).choose(rng).expect("vertices have neighbors");
    if flip_allowed(map, w, b, max_degree) {
        map.flip(w, b);
    }
}

/// Random connected plane map: a random bounded triangulation with a random
/// subset of its non-spanning-tree edges removed (each kept with probability
/// `keep`).
pub fn random_planar_map<R: Rng + ?Sized>(
    n: usize,
    max_degree: usize,
    keep: f64,
    rng: &mut R,
) -> Result<PlanarMap> {
    if !(0.0..=1.0).contains(&keep) {
        return Err(Error::InvalidParameter(format!("keep probability {keep} outside [0, 1]")));
    }
    let mut map = random_bounded_triangulation(n, max_degree, rng)?;
    let root = rng.gen_range(0..map.n());
    let mut in_tree = vec![usize::MAX; map.n()];
    in_tree[root] = root;
    let mut order = vec![root];
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        let mut nbrs = map.rotation(u).to_vec();
        nbrs.shuffle(rng);
        for w in nbrs {
            if in_tree[w] == usize::MAX {
                in_tree[w] = u;
                order.push(w);
            }
        }
    }
    let edges: Vec<(usize, usize)> = map.graph().edges().collect();
    for (u, v) in edges {
        let tree_edge = in_tree[u] == v || in_tree[v] == u;
        if !tree_edge && !rng.gen_bool(keep) {
            map.remove_edge(u, v);
        }
    }
    Ok(map)
}
