//! Exact canonical codes for rooted graphs and the ball-agreement metric.
//!
//! A [`BallCode`] determines a rooted graph up to rooted isomorphism. Trees
//! are encoded by their canonically ordered parenthesis word; every other
//! graph by the adjacency matrix under a canonical labeling found with
//! individualization and color refinement, root first. Both forms carry a
//! tag byte so the two families never collide.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::graph::{Graph, RootedGraph};

const TAG_TREE: u8 = 0;
const TAG_GENERAL: u8 = 1;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BallCode(Vec<u8>);

impl BallCode {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn from_bytes(bytes: Vec<u8>) -> Self {
        Self(bytes)
    }

    /// Number of vertices of the encoded rooted graph.
    pub fn vertex_count(&self) -> Result<usize> {
        let bytes = self.0.get(1..5).ok_or(Error::MalformedCode)?;
        Ok(u32::from_le_bytes([bytes[0], bytes[1], bytes[2], bytes[3]]) as usize)
    }

    /// Reconstructs a representative rooted graph (root is vertex 0).
    pub fn decode(&self) -> Result<RootedGraph> {
        let n = self.vertex_count()?;
        let bits = BitReader { bytes: &self.0[5..], pos: 0 };
        let graph = match self.0[0] {
            TAG_TREE => decode_tree(n, bits)?,
            TAG_GENERAL => decode_general(n, bits)?,
            _ => return Err(Error::MalformedCode),
        };
        RootedGraph::new(graph, 0)
    }
}

impl fmt::Debug for BallCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BallCode(")?;
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        write!(f, ")")
    }
}

impl fmt::LowerHex for BallCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

struct BitWriter {
    bytes: Vec<u8>,
    len: usize,
}

impl BitWriter {
    fn with_header(tag: u8, n: usize) -> Self {
        let mut bytes = vec![tag];
        bytes.extend_from_slice(&(n as u32).to_le_bytes());
        Self { bytes, len: 0 }
    }

    fn push(&mut self, bit: bool) {
        if self.len % 8 == 0 {
            self.bytes.push(0);
        }
        if bit {
            let last = self.bytes.len() - 1;
            self.bytes[last] |= 0x80 >> (self.len % 8);
        }
        self.len += 1;
    }
}

struct BitReader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl BitReader<'_> {
    fn next(&mut self) -> Result<bool> {
        let byte = self.bytes.get(self.pos / 8).ok_or(Error::MalformedCode)?;
        let bit = byte & (0x80 >> (self.pos % 8)) != 0;
        self.pos += 1;
        Ok(bit)
    }
}

/// Canonical code of a rooted graph: equal codes iff rooted-isomorphic.
pub fn canonical_code(g: &RootedGraph) -> BallCode {
    if g.graph().is_tree() {
        tree_code(g.graph(), g.root())
    } else {
        general_code(g.graph(), g.root())
    }
}

pub fn rooted_isomorphic(a: &RootedGraph, b: &RootedGraph) -> bool {
    a.graph().n() == b.graph().n()
        && a.graph().m() == b.graph().m()
        && canonical_code(a) == canonical_code(b)
}

/// Largest `r` with `B_A(r)` rooted-isomorphic to `B_B(r)`, or `None` when
/// `A` and `B` are rooted-isomorphic.
pub fn agreement_radius(a: &RootedGraph, b: &RootedGraph) -> Option<usize> {
    let ecc_a = a.graph().eccentricity(a.root());
    let ecc_b = b.graph().eccentricity(b.root());
    // Radius-0 balls always agree.
    let mut r = 1;
    loop {
        let ba = a.ball(r);
        let bb = b.ball(r);
        if !rooted_isomorphic(&ba, &bb) {
            return Some(r - 1);
        }
        if r >= ecc_a && r >= ecc_b {
            return None;
        }
        r += 1;
    }
}

/// The metric `2^{-k}` where `k` is the largest radius of ball agreement,
/// and `0` for rooted-isomorphic inputs.
pub fn rooted_distance(a: &RootedGraph, b: &RootedGraph) -> f64 {
    match agreement_radius(a, b) {
        None => 0.0,
        Some(k) => libm::exp2(-(k as f64)),
    }
}

// ---------------------------------------------------------------- trees

fn tree_code(g: &Graph, root: usize) -> BallCode {
    let n = g.n();
    // BFS order, parents and heights.
    let mut parent = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    order.push(root);
    parent[root] = root;
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for &w in g.neighbors(u) {
            if parent[w] == usize::MAX {
                parent[w] = u;
                order.push(w);
            }
        }
    }
    let mut height = vec![0usize; n];
    for &u in order.iter().rev() {
        if u != root {
            let p = parent[u];
            height[p] = height[p].max(height[u] + 1);
        }
    }
    let max_height = height[root];
    let mut by_height: Vec<Vec<usize>> = vec![Vec::new(); max_height + 1];
    for &u in &order {
        by_height[height[u]].push(u);
    }
    // Class ids ordered invariantly: by height, then by sorted child classes.
    let mut class = vec![0u32; n];
    let mut next_id = 0u32;
    for level in &by_height {
        let mut keyed: Vec<(Vec<u32>, usize)> = level
            .iter()
            .map(|&u| {
                let mut key: Vec<u32> = g
                    .neighbors(u)
                    .iter()
                    .filter(|&&w| parent[w] == u && w != root)
                    .map(|&w| class[w])
                    .collect();
                key.sort_unstable();
                (key, u)
            })
            .collect();
        keyed.sort();
        let mut prev: Option<&Vec<u32>> = None;
        for (key, u) in &keyed {
            if prev != Some(key) {
                next_id += 1;
                prev = Some(key);
            }
            class[*u] = next_id - 1;
        }
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &u in &order {
        if u != root {
            children[parent[u]].push(u);
        }
    }
    for list in children.iter_mut() {
        list.sort_by_key(|&w| class[w]);
    }
    let mut writer = BitWriter::with_header(TAG_TREE, n);
    // Iterative DFS emitting 1 on entry and 0 on exit.
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    writer.push(true);
    while let Some(top) = stack.last_mut() {
        let (u, i) = *top;
        if i < children[u].len() {
            top.1 += 1;
            let w = children[u][i];
            writer.push(true);
            stack.push((w, 0));
        } else {
            writer.push(false);
            stack.pop();
        }
    }
    BallCode(writer.bytes)
}

fn decode_tree(n: usize, mut bits: BitReader<'_>) -> Result<Graph> {
    if !bits.next()? {
        return Err(Error::MalformedCode);
    }
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    let mut stack = vec![0usize];
    let mut next = 1usize;
    while let Some(&u) = stack.last() {
        if bits.next()? {
            if next >= n {
                return Err(Error::MalformedCode);
            }
            edges.push((u, next));
            stack.push(next);
            next += 1;
        } else {
            stack.pop();
        }
    }
    if next != n {
        return Err(Error::MalformedCode);
    }
    Graph::from_edges(n, &edges).map_err(|_| Error::MalformedCode)
}

// ---------------------------------------------------------------- general graphs

/// Refines `colors` (ranks `0..c`) to the coarsest equitable refinement.
/// New ranks are ordered by (old rank, sorted neighbor ranks), which is
/// isomorphism invariant.
fn refine(g: &Graph, colors: &mut [u32]) {
    let n = g.n();
    let mut count = distinct(colors);
    loop {
        let mut sigs: Vec<(u32, Vec<u32>, usize)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u32> = g.neighbors(v).iter().map(|&w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb, v)
            })
            .collect();
        sigs.sort_unstable();
        let mut rank = 0u32;
        for i in 0..n {
            if i > 0 && (sigs[i].0 != sigs[i - 1].0 || sigs[i].1 != sigs[i - 1].1) {
                rank += 1;
            }
            colors[sigs[i].2] = rank;
        }
        let new_count = rank as usize + 1;
        if new_count == count {
            return;
        }
        count = new_count;
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut seen: Vec<u32> = colors.to_vec();
    seen.sort_unstable();
    seen.dedup();
    seen.len()
}

fn leaf_code(g: &Graph, colors: &[u32]) -> Vec<u8> {
    let n = g.n();
    let mut order = vec![0usize; n];
    for (v, &c) in colors.iter().enumerate() {
        order[c as usize] = v;
    }
    let mut writer = BitWriter::with_header(TAG_GENERAL, n);
    for i in 0..n {
        for j in (i + 1)..n {
            writer.push(g.has_edge(order[i], order[j]));
        }
    }
    writer.bytes
}

fn search(g: &Graph, mut colors: Vec<u32>, best: &mut Option<Vec<u8>>) {
    refine(g, &mut colors);
    let n = g.n();
    // Target cell: the non-singleton cell with the smallest color.
    let mut cell_size: BTreeMap<u32, usize> = BTreeMap::new();
    for &c in &colors {
        *cell_size.entry(c).or_insert(0) += 1;
    }
    let target = cell_size.iter().find(|&(_, &size)| size > 1).map(|(&c, _)| c);
    let Some(target) = target else {
        let code = leaf_code(g, &colors);
        if best.as_ref().map_or(true, |b| code < *b) {
            *best = Some(code);
        }
        return;
    };
    for v in (0..n).filter(|&v| colors[v] == target) {
        let child: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(u, &c)| 2 * c + u32::from(c == target && u != v))
            .collect();
        search(g, child, best);
    }
}

fn general_code(g: &Graph, root: usize) -> BallCode {
    let colors: Vec<u32> = (0..g.n()).map(|v| u32::from(v != root)).collect();
    let mut best = None;
    search(g, colors, &mut best);
    BallCode(best.expect("search visits at least one leaf"))
}

fn decode_general(n: usize, mut bits: BitReader<'_>) -> Result<Graph> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if bits.next()? {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges).map_err(|_| Error::MalformedCode)
}
