use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::planar::PlanarMap;

#[derive(Debug, Clone)]
pub struct FaceTriangulation {
    pub map: PlanarMap,
    /// `|V(T)| / |V(G)|`.
    pub vertex_ratio: f64,
    /// `maxdeg(T) / M`.
    pub degree_ratio: f64,
    pub zigzag_faces: usize,
    pub inner_cycle_faces: usize,
}

impl FaceTriangulation {
    /// The measured constant `c` with `|V(T)| <= c |V(G)|` and
    /// `maxdeg(T) <= c M`.
    pub fn constant(&self) -> f64 {
        self.vertex_ratio.max(self.degree_ratio)
    }
}

/// Chords of the zigzag triangulation of a `k`-gon `v_0..v_{k-1}`, as index
/// pairs: `[v_j, v_{k-j}]` for `j = 1..floor(k/2)-1` and `[v_j, v_{k-1-j}]`
/// for `j = 1..floor((k-1)/2)-1`.
pub(crate) fn zigzag_chords(k: usize) -> Vec<(usize, usize)> {
    let mut chords = Vec::new();
    for j in 1..(k / 2).max(1) {
        chords.push((j, k - j));
    }
    for j in 1..((k - 1) / 2).max(1) {
        chords.push((j, k - 1 - j));
    }
    chords
}

/// Inserts chords (index pairs into `walk`) into a face whose boundary `walk`
/// is a simple counterclockwise cycle.
fn insert_chords(map: &mut PlanarMap, walk: &[usize], chords: &[(usize, usize)]) {
    let k = walk.len();
    let mut at: Vec<Vec<usize>> = alloc::vec![Vec::new(); k];
    for &(i, j) in chords {
        at[i].push(j);
        at[j].push(i);
    }
    for (i, targets) in at.iter_mut().enumerate() {
        // Counterclockwise from v_{i+1} the interior sees v_{i+2}, v_{i+3}, ...
        targets.sort_by_key(|&t| (t + k - i) % k);
        let pred = walk[(i + k - 1) % k];
        for &t in targets.iter() {
            map.insert_before(walk[i], pred, walk[t]);
        }
    }
}

fn is_chordless_simple(map: &PlanarMap, walk: &[usize]) -> bool {
    let k = walk.len();
    let mut sorted = walk.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != k {
        return false;
    }
    for i in 0..k {
        for j in (i + 2)..k {
            if (i, j) != (0, k - 1) && map.has_edge(walk[i], walk[j]) {
                return false;
            }
        }
    }
    true
}

/// Extends a connected plane map to a triangulation of the sphere containing
/// it. A face whose boundary is a simple chordless cycle is split by zigzag
/// chords; any other face first gets an inner cycle of the same length,
/// joined to the boundary by a strip of triangles, and the inner cycle is
/// then zigzagged.
///
/// The chord check uses the edges present when the face is processed, which
/// includes chords added in earlier faces, so the output stays simple.
pub fn triangulate_faces(g: &PlanarMap, max_degree: usize) -> Result<FaceTriangulation> {
    if g.n() < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 vertices to triangulate, got {}",
            g.n()
        )));
    }
    if g.max_degree() > max_degree {
        return Err(Error::InvalidParameter(format!(
            "map has degree {} above the bound {max_degree}",
            g.max_degree()
        )));
    }
    g.check_planar()?;
    let faces = g.faces();
    let mut map = g.clone();
    let (mut zigzag_faces, mut inner_cycle_faces) = (0, 0);
    for walk in &faces {
        let k = walk.len();
        if k == 3 {
            continue;
        }
        if is_chordless_simple(&map, walk) {
            insert_chords(&mut map, walk, &zigzag_chords(k));
            zigzag_faces += 1;
            continue;
        }
        inner_cycle_faces += 1;
        let inner: Vec<usize> = (0..k).map(|_| map.add_vertex()).collect();
        for j in 0..k {
            let pred = walk[(j + k - 1) % k];
            map.insert_before(walk[j], pred, inner[j]);
            map.insert_before(walk[j], pred, inner[(j + k - 1) % k]);
        }
        for j in 0..k {
            let u = inner[j];
            map.push_neighbor(u, walk[(j + 1) % k]);
            map.push_neighbor(u, inner[(j + 1) % k]);
            map.push_neighbor(u, inner[(j + k - 1) % k]);
            map.push_neighbor(u, walk[j]);
        }
        insert_chords(&mut map, &inner, &zigzag_chords(k));
    }
    let map = PlanarMap::new(map.rotations().to_vec())?;
    map.check_sphere_triangulation()?;
    Ok(FaceTriangulation {
        vertex_ratio: map.n() as f64 / g.n() as f64,
        degree_ratio: map.max_degree() as f64 / max_degree.max(1) as f64,
        map,
        zigzag_faces,
        inner_cycle_faces,
    })
}
