//! Random nested square tilings and the flow bound on `s`-supported squares.
//!
//! Level `n` is the lattice of squares of side `e^β k^n` shifted by
//! `e^β Σ_{m<n} k^m α_m`; each square of level `n + 1` is tiled by `k²`
//! squares of level `n`. Only finitely many levels are ever touched and the
//! shifts `α_m` are derived from the seed per level, so the bi-infinite
//! sequence is never stored.
//!
//! Flow values are multiples of `1/2`; they are accumulated exactly in
//! half-units.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PointSet;
use crate::error::{Error, Result};

/// Terms of the shift series below this many levels are below `k^-24`.
const SHIFT_TERMS: i32 = 24;
const EDGE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TilingHierarchy {
    k: i64,
    beta: f64,
    seed: u64,
}

/// A square of the hierarchy: level and lattice index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Square {
    pub level: i32,
    pub ix: i64,
    pub iy: i64,
}

impl TilingHierarchy {
    /// Explicit hierarchy; `beta` must lie in `[0, ln k)`.
    pub fn new(k: i64, beta: f64, seed: u64) -> Result<Self> {
        if k < 3 {
            return Err(Error::InvalidParameter(format!("k = {k} must be at least 3")));
        }
        if !(beta >= 0.0 && beta < libm::log(k as f64)) {
            return Err(Error::InvalidParameter(format!("beta = {beta} outside [0, ln k)")));
        }
        Ok(Self { k, beta, seed })
    }

    pub fn k(&self) -> i64 {
        self.k
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The shift `α_n ∈ {0, …, k-1}²`.
    pub fn alpha(&self, n: i32) -> (i64, i64) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream((n as i64 as u64).wrapping_add(1 << 40));
        (rng.gen_range(0..self.k), rng.gen_range(0..self.k))
    }

    /// Side length `e^β k^n` of squares at level `n`.
    pub fn side(&self, n: i32) -> f64 {
        libm::exp(self.beta + n as f64 * libm::log(self.k as f64))
    }

    /// Lower-left corner of square `(0, 0)` at level `n`.
    pub fn offset(&self, n: i32) -> [f64; 2] {
        let kf = self.k as f64;
        let (mut x, mut y) = (0.0, 0.0);
        let mut weight = 1.0;
        for j in 1..=SHIFT_TERMS {
            weight /= kf;
            let (ax, ay) = self.alpha(n - j);
            x += weight * ax as f64;
            y += weight * ay as f64;
        }
        let side = self.side(n);
        [side * x, side * y]
    }

    fn fractional_index(&self, p: [f64; 2], n: i32) -> [f64; 2] {
        let o = self.offset(n);
        let side = self.side(n);
        [(p[0] - o[0]) / side, (p[1] - o[1]) / side]
    }

    /// The square of level `n` containing `p`.
    pub fn locate(&self, p: [f64; 2], n: i32) -> Square {
        let [fx, fy] = self.fractional_index(p, n);
        Square { level: n, ix: libm::floor(fx) as i64, iy: libm::floor(fy) as i64 }
    }

    /// Whether `p` is within relative distance `EDGE_EPS` of a square edge at
    /// level `n` (and therefore at every coarser level).
    pub fn on_boundary(&self, p: [f64; 2], n: i32) -> bool {
        self.fractional_index(p, n).iter().any(|&f| {
            let frac = f - libm::floor(f);
            frac < EDGE_EPS || frac > 1.0 - EDGE_EPS
        })
    }

    pub fn parent(&self, s: Square) -> Square {
        let (ax, ay) = self.alpha(s.level);
        Square {
            level: s.level + 1,
            ix: (s.ix - ax).div_euclid(self.k),
            iy: (s.iy - ay).div_euclid(self.k),
        }
    }

    pub fn contains(&self, outer: Square, inner: Square) -> bool {
        if inner.level > outer.level {
            return false;
        }
        let mut s = inner;
        while s.level < outer.level {
            s = self.parent(s);
        }
        s == outer
    }

    pub fn center(&self, s: Square) -> [f64; 2] {
        let o = self.offset(s.level);
        let side = self.side(s.level);
        [o[0] + side * (s.ix as f64 + 0.5), o[1] + side * (s.iy as f64 + 0.5)]
    }

    /// Finest level at which squares are too small to hold two points at
    /// distance `d`.
    fn separating_level(&self, d: f64) -> i32 {
        let n = (libm::log(d / libm::sqrt(2.0)) - self.beta) / libm::log(self.k as f64);
        libm::floor(n) as i32 - 1
    }
}

/// Hierarchy with `k = ⌈20 δ⁻²⌉`, `β` uniform in `[0, ln k)` and independent
/// uniform shifts, all derived from `seed`.
pub fn sample_tiling(delta: f64, seed: u64) -> Result<TilingHierarchy> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1)")));
    }
    let k = libm::ceil(20.0 / (delta * delta) - 1e-9) as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let beta = rng.gen_range(0.0..libm::log(k as f64));
    TilingHierarchy::new(k, beta, seed)
}

/// Occupied squares and point counts for levels `a..=b`.
#[derive(Debug, Clone)]
pub struct SquareCensus {
    tiling: TilingHierarchy,
    first: i32,
    levels: Vec<BTreeMap<(i64, i64), u64>>,
}

impl SquareCensus {
    /// Counts points per square from level `a` up to the first level where a
    /// single square holds every point (or `b` if given).
    pub fn build(c: &PointSet, tiling: &TilingHierarchy, a: i32, b: Option<i32>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InvalidParameter("empty point set".into()));
        }
        if c.points().iter().any(|&p| tiling.on_boundary(p, a)) {
            return Err(Error::BoundaryDegenerate);
        }
        let mut level: BTreeMap<(i64, i64), u64> = BTreeMap::new();
        for &p in c.points() {
            let s = tiling.locate(p, a);
            *level.entry((s.ix, s.iy)).or_insert(0) += 1;
        }
        let mut levels = alloc::vec![level];
        let mut n = a;
        loop {
            let done = match b {
                Some(b) => n >= b,
                None => levels.last().unwrap().len() == 1 && n > a,
            };
            if done {
                break;
            }
            if n - a > 200 {
                return Err(Error::Precondition("points do not merge into one square".into()));
            }
            let mut next: BTreeMap<(i64, i64), u64> = BTreeMap::new();
            for (&(ix, iy), &cnt) in levels.last().unwrap() {
                let p = tiling.parent(Square { level: n, ix, iy });
                *next.entry((p.ix, p.iy)).or_insert(0) += cnt;
            }
            levels.push(next);
            n += 1;
        }
        Ok(Self { tiling: *tiling, first: a, levels })
    }

    /// Census starting at a level fine enough that no square holds two
    /// points.
    pub fn build_auto(c: &PointSet, tiling: &TilingHierarchy) -> Result<Self> {
        let a = if c.len() < 2 {
            0
        } else {
            tiling.separating_level(c.min_distance()?)
        };
        Self::build(c, tiling, a, None)
    }

    pub fn first_level(&self) -> i32 {
        self.first
    }

    pub fn last_level(&self) -> i32 {
        self.first + self.levels.len() as i32 - 1
    }

    pub fn count(&self, s: Square) -> u64 {
        let i = s.level - self.first;
        if i < 0 || i as usize >= self.levels.len() {
            return 0;
        }
        self.levels[i as usize].get(&(s.ix, s.iy)).copied().unwrap_or(0)
    }

    pub fn occupied(&self, level: i32) -> impl Iterator<Item = (Square, u64)> + '_ {
        let i = (level - self.first) as usize;
        self.levels[i]
            .iter()
            .map(move |(&(ix, iy), &c)| (Square { level, ix, iy }, c))
    }

    /// Largest child count for every occupied square at `level > first`.
    fn max_child_counts(&self, level: i32) -> BTreeMap<(i64, i64), u64> {
        let mut out: BTreeMap<(i64, i64), u64> = BTreeMap::new();
        for (child, cnt) in self.occupied(level - 1) {
            let p = self.tiling.parent(child);
            let e = out.entry((p.ix, p.iy)).or_insert(0);
            *e = (*e).max(cnt);
        }
        out
    }

    /// `s`-supported squares at levels `first+1..=last`. Squares at the
    /// first level hold at most one point and none above the last level can
    /// be supported.
    pub fn supported_squares(&self, s: u64) -> Vec<Square> {
        let mut out = Vec::new();
        for level in self.first + 1..=self.last_level() {
            let max_child = self.max_child_counts(level);
            for (sq, cnt) in self.occupied(level) {
                if cnt - max_child[&(sq.ix, sq.iy)] >= s {
                    out.push(sq);
                }
            }
        }
        out
    }

    /// `2 f(child, parent)` for squares in this census.
    pub fn flow_halves(&self, s: u64, from: Square, to: Square) -> i64 {
        if from.level + 1 == to.level {
            if self.tiling.parent(from) == to {
                (2 * self.count(from)).min(s) as i64
            } else {
                0
            }
        } else if from.level == to.level + 1 {
            -self.flow_halves(s, to, from)
        } else {
            0
        }
    }
}

/// Whether `S` is `s`-supported: every child `S'` leaves `|C ∩ S \ S'| >= s`.
/// Empty children are included, so this is `|C ∩ S| - max child count >= s`.
pub fn square_is_s_supported(c: &PointSet, tiling: &TilingHierarchy, sq: Square, s: usize) -> Result<bool> {
    let mut total = 0u64;
    let mut children: BTreeMap<(i64, i64), u64> = BTreeMap::new();
    for &p in c.points() {
        if tiling.locate(p, sq.level) != sq {
            continue;
        }
        if tiling.on_boundary(p, sq.level - 1) {
            return Err(Error::BoundaryDegenerate);
        }
        total += 1;
        let child = tiling.locate(p, sq.level - 1);
        *children.entry((child.ix, child.iy)).or_insert(0) += 1;
    }
    let max_child = children.values().copied().max().unwrap_or(0);
    Ok(total >= s as u64 && total - max_child >= s as u64)
}

/// The flow `f(S', S)`: `min(s/2, |S' ∩ C|)` when `S'` is a child of `S`,
/// its negative when `S` is a child of `S'`, and `0` otherwise.
pub fn flow_value(c: &PointSet, tiling: &TilingHierarchy, s: usize, from: Square, to: Square) -> f64 {
    if from.level + 1 == to.level {
        if tiling.parent(from) != to {
            return 0.0;
        }
        let count = c.points().iter().filter(|&&p| tiling.locate(p, from.level) == from).count();
        (s as f64 / 2.0).min(count as f64)
    } else if from.level == to.level + 1 {
        -flow_value(c, tiling, s, to, from)
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FlowReport {
    pub points: usize,
    pub s: usize,
    pub level_a: i32,
    pub level_b: i32,
    /// `Σ_{S'∈𝔖_a} Σ_{S∈𝔖_{a+1}} f(S', S)`.
    pub level_a_sum: f64,
    /// `Σ_{n=a+1}^{b} Σ_{S∈𝔖_n} Σ_{S'} f(S', S)`.
    pub telescoped_sum: f64,
    pub supported_squares: usize,
    /// `2|C| / s`.
    pub bound: f64,
    /// Every square has nonnegative net inflow.
    pub net_nonnegative: bool,
    /// Every `s`-supported square has net inflow at least `s / 2`.
    pub supported_inflow_ok: bool,
}

impl FlowReport {
    pub fn level_a_exact(&self) -> bool {
        self.level_a_sum == self.points as f64
    }

    pub fn telescoped_ok(&self) -> bool {
        self.telescoped_sum <= self.points as f64
    }

    pub fn bound_ok(&self) -> bool {
        self.supported_squares * self.s <= 2 * self.points
    }

    pub fn all_ok(&self) -> bool {
        self.level_a_exact()
            && self.telescoped_ok()
            && self.bound_ok()
            && self.net_nonnegative
            && self.supported_inflow_ok
    }
}

/// Evaluates the flow identities and the `2|C|/s` bound on supported squares
/// for levels `a..=b` (chosen automatically when `levels` is `None`).
pub fn verify_flow_bound(
    c: &PointSet,
    tiling: &TilingHierarchy,
    s: usize,
    levels: Option<(i32, i32)>,
) -> Result<FlowReport> {
    if s < 2 {
        return Err(Error::InvalidParameter(format!("s = {s} must be at least 2")));
    }
    let census = match levels {
        Some((a, b)) => {
            if b <= a {
                return Err(Error::InvalidParameter(format!("need b > a, got {a}..{b}")));
            }
            SquareCensus::build(c, tiling, a, Some(b + 1))?
        }
        None => SquareCensus::build_auto(c, tiling)?,
    };
    let a = census.first_level();
    let b = match levels {
        Some((_, b)) => b,
        None => census.last_level(),
    };
    if census.occupied(a).any(|(_, cnt)| cnt > 1) {
        return Err(Error::Precondition(format!("a square at level {a} holds more than one point")));
    }
    let s64 = s as u64;
    let half = |cnt: u64| (2 * cnt).min(s64) as i64;

    let level_a_halves: i64 = census.occupied(a).map(|(_, cnt)| half(cnt)).sum();

    let mut telescoped = 0i64;
    let mut net_nonnegative = true;
    let mut supported_inflow_ok = true;
    let mut supported = 0usize;
    for level in a + 1..=b {
        let mut inflow: BTreeMap<(i64, i64), i64> = BTreeMap::new();
        let mut max_child: BTreeMap<(i64, i64), u64> = BTreeMap::new();
        for (child, cnt) in census.occupied(level - 1) {
            let p = tiling.parent(child);
            *inflow.entry((p.ix, p.iy)).or_insert(0) += half(cnt);
            let e = max_child.entry((p.ix, p.iy)).or_insert(0);
            *e = (*e).max(cnt);
        }
        for (sq, cnt) in census.occupied(level) {
            let net = inflow[&(sq.ix, sq.iy)] - half(cnt);
            telescoped += net;
            net_nonnegative &= net >= 0;
            if cnt - max_child[&(sq.ix, sq.iy)] >= s64 {
                supported += 1;
                supported_inflow_ok &= net >= s as i64;
            }
        }
    }
    Ok(FlowReport {
        points: c.len(),
        s,
        level_a: a,
        level_b: b,
        level_a_sum: level_a_halves as f64 / 2.0,
        telescoped_sum: telescoped as f64 / 2.0,
        supported_squares: supported,
        bound: 2.0 * c.len() as f64 / s as f64,
        net_nonnegative,
        supported_inflow_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    #[test]
    fn k_from_delta() {
        assert_eq!(sample_tiling(0.5, 1).unwrap().k(), 80);
        assert_eq!(sample_tiling(0.25, 1).unwrap().k(), 320);
        assert!(sample_tiling(1.0, 1).is_err());
    }

    #[test]
    fn consecutive_sides_differ_by_k() {
        let t = sample_tiling(0.5, 9).unwrap();
        for n in -3..3 {
            let ratio = t.side(n + 1) / t.side(n);
            assert!(libm::fabs(ratio - 80.0) < 1e-9);
        }
    }

    #[test]
    fn seeds_give_different_beta() {
        assert_ne!(sample_tiling(0.5, 1).unwrap().beta(), sample_tiling(0.5, 2).unwrap().beta());
    }

    #[test]
    fn parent_matches_geometry() {
        let t = TilingHierarchy::new(5, 0.3, 17).unwrap();
        let p = [0.37, -1.91];
        for n in -4..3 {
            let child = t.locate(p, n);
            assert_eq!(t.parent(child), t.locate(p, n + 1));
        }
    }

    #[test]
    fn flow_cases() {
        let t = TilingHierarchy::new(5, 0.0, 3).unwrap();
        let c = PointSet::new(vec![[0.1, 0.1]]).unwrap();
        let child = t.locate(c.point(0), -2);
        let parent = t.parent(child);
        assert_eq!(flow_value(&c, &t, 4, child, parent), 1.0);
        assert_eq!(flow_value(&c, &t, 4, parent, child), -1.0);
        let other = Square { ix: parent.ix + 1, ..parent };
        assert_eq!(flow_value(&c, &t, 4, child, other), 0.0);
        let grand = t.parent(parent);
        assert_eq!(flow_value(&c, &t, 4, child, grand), 0.0);
    }

    #[test]
    fn empty_and_small_squares_not_supported() {
        let t = TilingHierarchy::new(5, 0.0, 3).unwrap();
        let c = PointSet::new(vec![[0.1, 0.1], [0.2, 0.3]]).unwrap();
        let far = Square { level: 3, ix: 1000, iy: 1000 };
        assert!(!square_is_s_supported(&c, &t, far, 2).unwrap());
        let sq = t.locate(c.point(0), 5);
        assert!(!square_is_s_supported(&c, &t, sq, 3).unwrap());
    }

    #[test]
    fn split_square_is_exactly_supported() {
        // 2s points split s / s between two children: removing either child
        // leaves exactly s.
        let t = TilingHierarchy::new(4, 0.0, 0).unwrap();
        let s = 3;
        let parent = Square { level: 1, ix: 0, iy: 0 };
        let o = t.offset(1);
        let side0 = t.side(0);
        let a0 = t.alpha(0);
        // Children (0,0) and (3,3) in parent-relative coordinates.
        let child_corner = |jx: i64, jy: i64| {
            let o0 = t.offset(0);
            let ix = a0.0 + jx;
            let iy = a0.1 + jy;
            [o0[0] + side0 * ix as f64, o0[1] + side0 * iy as f64]
        };
        let _ = o;
        let mut pts = Vec::new();
        for (jx, jy) in [(0, 0), (3, 3)] {
            let corner = child_corner(jx, jy);
            for i in 0..s {
                pts.push([corner[0] + 0.2 + 0.2 * i as f64, corner[1] + 0.5]);
            }
        }
        let c = PointSet::new(pts).unwrap();
        for &p in c.points() {
            assert_eq!(t.locate(p, 1), parent);
        }
        assert!(square_is_s_supported(&c, &t, parent, s).unwrap());
        assert!(!square_is_s_supported(&c, &t, parent, s + 1).unwrap());
    }

    #[test]
    fn single_point_has_no_supported_squares() {
        let t = sample_tiling(0.5, 4).unwrap();
        let c = PointSet::new(vec![[0.3, 0.4]]).unwrap();
        let report = verify_flow_bound(&c, &t, 2, None).unwrap();
        assert_eq!(report.supported_squares, 0);
        assert!(report.all_ok());
    }
}
