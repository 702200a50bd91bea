//! Planar maps given by rotation systems.
//!
//! `rotation(v)` lists the neighbors of `v` in counterclockwise order. A dart
//! `u -> w` is followed in its face by `w -> x` where `x` is the neighbor
//! immediately before `u` in the rotation at `w`. Faces are therefore traced
//! with the face on the left; bounded faces come out counterclockwise and the
//! outer face of a plane drawing comes out clockwise.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanarMap {
    rot: Vec<Vec<usize>>,
}

impl PlanarMap {
    /// Validates a rotation system: every edge listed at both ends, no loops
    /// or repeated neighbors, connected.
    pub fn new(rot: Vec<Vec<usize>>) -> Result<Self> {
        let n = rot.len();
        let mut edges = Vec::new();
        for (u, list) in rot.iter().enumerate() {
            for &w in list {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
                if u < w {
                    edges.push((u, w));
                }
                if !rot[w].contains(&u) {
                    return Err(Error::InvalidRotation(format!(
                        "edge {u}-{w} missing from rotation at {w}"
                    )));
                }
            }
        }
        Graph::from_edges(n, &edges)?;
        Ok(Self { rot })
    }

    pub(crate) fn from_rotation_unchecked(rot: Vec<Vec<usize>>) -> Self {
        Self { rot }
    }

    /// Builds a map from counterclockwise face walks covering every edge on
    /// at least one side. Edges seen from one side only become the boundary
    /// of a single extra outer face.
    pub fn from_faces(n: usize, faces: &[Vec<usize>]) -> Result<Self> {
        // succ[w][x] = p: in the rotation at w, p follows x.
        let mut succ: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); n];
        for face in faces {
            let k = face.len();
            if k < 3 {
                return Err(Error::InvalidRotation(format!("face of length {k}")));
            }
            for i in 0..k {
                let p = face[(i + k - 1) % k];
                let w = face[i];
                let x = face[(i + 1) % k];
                if w >= n || p >= n || x >= n {
                    return Err(Error::VertexOutOfRange { vertex: w.max(p).max(x), n });
                }
                if succ[w].insert(x, p).is_some() {
                    return Err(Error::InvalidRotation(format!(
                        "corner at {w} after {x} listed twice"
                    )));
                }
            }
        }
        let mut rot = Vec::with_capacity(n);
        for (w, s) in succ.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidRotation(format!("vertex {w} lies on no face")));
            }
            let has_pred: Vec<usize> = s.values().copied().collect();
            let starts: Vec<usize> =
                s.keys().copied().filter(|x| !has_pred.contains(x)).collect();
            let start = match starts.len() {
                0 => *s.keys().next().unwrap(),
                1 => starts[0],
                _ => {
                    return Err(Error::InvalidRotation(format!(
                        "vertex {w} is pinched between several boundary arcs"
                    )))
                }
            };
            let mut list = vec![start];
            let mut cur = start;
            while let Some(&next) = s.get(&cur) {
                if next == start {
                    break;
                }
                list.push(next);
                cur = next;
            }
            rot.push(list);
        }
        Self::new(rot)
    }

    pub fn n(&self) -> usize {
        self.rot.len()
    }

    pub fn m(&self) -> usize {
        self.rot.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rot[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rot
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rot[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.rot.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rot[u].contains(&v)
    }

    pub fn graph(&self) -> Graph {
        Graph::from_adjacency(self.rot.clone())
    }

    pub(crate) fn position(&self, w: usize, u: usize) -> usize {
        self.rot[w]
            .iter()
            .position(|&x| x == u)
            .unwrap_or_else(|| panic!("{u} is not a neighbor of {w}"))
    }

    /// The dart following `u -> w` in its face.
    pub fn next_in_face(&self, u: usize, w: usize) -> usize {
        let list = &self.rot[w];
        let i = self.position(w, u);
        list[(i + list.len() - 1) % list.len()]
    }

    /// The face walk starting with dart `u -> w`.
    pub fn face_at(&self, u: usize, w: usize) -> Vec<usize> {
        let mut walk = vec![u];
        let (mut a, mut b) = (u, w);
        loop {
            let c = self.next_in_face(a, b);
            if b == u && c == w {
                return walk;
            }
            walk.push(b);
            a = b;
            b = c;
        }
    }

    /// All faces as vertex walks; each dart belongs to exactly one face.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let offsets = self.dart_offsets();
        let mut seen = vec![false; *offsets.last().unwrap()];
        let mut faces = Vec::new();
        for u in 0..self.n() {
            for i in 0..self.rot[u].len() {
                if seen[offsets[u] + i] {
                    continue;
                }
                let w = self.rot[u][i];
                let face = self.face_at(u, w);
                let k = face.len();
                for j in 0..k {
                    let (a, b) = (face[j], face[(j + 1) % k]);
                    seen[offsets[a] + self.position(a, b)] = true;
                }
                faces.push(face);
            }
        }
        faces
    }

    fn dart_offsets(&self) -> Vec<usize> {
        let mut offsets = Vec::with_capacity(self.n() + 1);
        let mut acc = 0;
        offsets.push(0);
        for list in &self.rot {
            acc += list.len();
            offsets.push(acc);
        }
        offsets
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n() as i64 - self.m() as i64 + self.faces().len() as i64
    }

    pub fn check_planar(&self) -> Result<()> {
        let euler = self.euler_characteristic();
        if euler != 2 {
            return Err(Error::NonPlanar { euler });
        }
        Ok(())
    }

    /// Checks that the map is a simple triangulation of the sphere.
    pub fn check_sphere_triangulation(&self) -> Result<()> {
        if self.n() < 3 {
            return Err(Error::NotATriangulation(format!("{} vertices", self.n())));
        }
        let faces = self.faces();
        if let Some(f) = faces.iter().find(|f| f.len() != 3) {
            return Err(Error::NotATriangulation(format!("face of length {}", f.len())));
        }
        let euler = self.n() as i64 - self.m() as i64 + faces.len() as i64;
        if euler != 2 {
            return Err(Error::NonPlanar { euler });
        }
        Ok(())
    }

    pub fn is_sphere_triangulation(&self) -> bool {
        self.check_sphere_triangulation().is_ok()
    }

    // ------------------------------------------------------------ editing

    pub(crate) fn add_vertex(&mut self) -> usize {
        self.rot.push(Vec::new());
        self.rot.len() - 1
    }

    /// Inserts `new` into the rotation at `w`, directly before `before`.
    pub(crate) fn insert_before(&mut self, w: usize, before: usize, new: usize) {
        if self.rot[w].is_empty() {
            self.rot[w].push(new);
            return;
        }
        let i = self.position(w, before);
        self.rot[w].insert(i, new);
    }

    /// Appends to the rotation at a vertex that is being built from scratch.
    pub(crate) fn push_neighbor(&mut self, w: usize, new: usize) {
        self.rot[w].push(new);
    }

    pub(crate) fn remove_edge(&mut self, u: usize, v: usize) {
        let i = self.position(u, v);
        self.rot[u].remove(i);
        let j = self.position(v, u);
        self.rot[v].remove(j);
    }

    /// Flips the diagonal `a-b` of the two triangles on either side of it.
    /// Returns the new diagonal, or `None` when the flip would create a
    /// repeated edge or a vertex of degree below 3.
    pub(crate) fn flip(&mut self, a: usize, b: usize) -> Option<(usize, usize)> {
        let c = self.next_in_face(a, b);
        let d = self.next_in_face(b, a);
        if c == d || self.has_edge(c, d) || self.degree(a) <= 3 || self.degree(b) <= 3 {
            return None;
        }
        if self.next_in_face(b, c) != a || self.next_in_face(a, d) != b {
            return None;
        }
        self.remove_edge(a, b);
        // Face a->b->c: at c, a precedes b; face b->a->d: at d, b precedes a.
        self.insert_before(c, b, d);
        self.insert_before(d, a, c);
        Some((c, d))
    }
}

/// Greedy-then-exhaustive search for `needed` pairwise vertex-disjoint faces.
pub fn disjoint_faces(map: &PlanarMap, needed: usize) -> Result<Vec<Vec<usize>>> {
    let faces = map.faces();
    let mut chosen = Vec::new();
    let mut used = vec![false; map.n()];
    let mut best = 0;
    if search_disjoint(&faces, 0, needed, &mut used, &mut chosen, &mut best, &mut 0) {
        return Ok(chosen.into_iter().map(|i| faces[i].clone()).collect());
    }
    Err(Error::NotEnoughDisjointFaces { needed, found: best })
}

fn search_disjoint(
    faces: &[Vec<usize>],
    start: usize,
    needed: usize,
    used: &mut [bool],
    chosen: &mut Vec<usize>,
    best: &mut usize,
    budget: &mut usize,
) -> bool {
    *best = (*best).max(chosen.len());
    if chosen.len() == needed {
        return true;
    }
    *budget += 1;
    if *budget > 200_000 {
        return false;
    }
    for i in start..faces.len() {
        if faces[i].iter().any(|&v| used[v]) {
            continue;
        }
        for &v in &faces[i] {
            used[v] = true;
        }
        chosen.push(i);
        if search_disjoint(faces, i + 1, needed, used, chosen, best, budget) {
            return true;
        }
        chosen.pop();
        for &v in &faces[i] {
            used[v] = false;
        }
    }
    false
}
