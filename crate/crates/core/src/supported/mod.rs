//! Supported points of planar point sets.
//!
//! For `w` in a finite set `C` with isolation radius `ρ_w` (distance to the
//! nearest other point), `w` is `(δ, s)`-supported when every disk of radius
//! `δ ρ_w` leaves at least `s` points of `C ∩ B(w, ρ_w / δ)` uncovered. The
//! infimum over disk positions is computed exactly: a disk covering a maximal
//! subset can be moved until two covered points sit on its boundary (or it is
//! centered on a single point), so only pair circles need to be tried.
//! Both balls are closed.

mod cities;
mod tiling;

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};

pub use cities::{cities, city_frequency, city_square, is_city, max_cities_in_square, CityPair};
pub use tiling::{
    flow_value, sample_tiling, square_is_s_supported, verify_flow_bound, FlowReport, Square,
    SquareCensus, TilingHierarchy,
};

/// Relative slack used for closed-ball membership.
const BOUNDARY_EPS: f64 = 1e-9;

/// A finite set of distinct points in the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<[f64; 2]>,
    /// Indices sorted by x coordinate.
    by_x: Vec<usize>,
}

impl PointSet {
    pub fn new(points: Vec<[f64; 2]>) -> Result<Self> {
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coordinate".into()));
        }
        let set = Self::new_unchecked(points);
        for w in set.by_x.windows(2) {
            // Equal points are adjacent in (x, y) order.
            if set.points[w[0]] == set.points[w[1]] {
                return Err(Error::InvalidParameter(format!(
                    "points {} and {} coincide",
                    w[0], w[1]
                )));
            }
        }
        Ok(set)
    }

    pub(crate) fn new_unchecked(points: Vec<[f64; 2]>) -> Self {
        let mut by_x: Vec<usize> = (0..points.len()).collect();
        by_x.sort_by(|&a, &b| {
            points[a][0].total_cmp(&points[b][0]).then(points[a][1].total_cmp(&points[b][1]))
        });
        Self { points, by_x }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[[f64; 2]] {
        &self.points
    }

    pub fn point(&self, i: usize) -> [f64; 2] {
        self.points[i]
    }

    /// `z -> a z + b` applied to every point.
    pub fn similarity(&self, a: f64, b: [f64; 2]) -> PointSet {
        PointSet::new_unchecked(
            self.points.iter().map(|p| [a * p[0] + b[0], a * p[1] + b[1]]).collect(),
        )
    }

    /// Indices of points in the closed disk `B(center, radius)`.
    pub fn within(&self, center: [f64; 2], radius: f64) -> Vec<usize> {
        let r = radius * (1.0 + BOUNDARY_EPS);
        let lo = self.by_x.partition_point(|&i| self.points[i][0] < center[0] - r);
        let mut out = Vec::new();
        for &i in &self.by_x[lo..] {
            let p = self.points[i];
            if p[0] > center[0] + r {
                break;
            }
            if dist(p, center) <= r {
                out.push(i);
            }
        }
        out
    }

    /// Distance from point `w` to its nearest other point.
    pub fn isolation_radius(&self, w: usize) -> Result<f64> {
        if self.len() < 2 {
            return Err(Error::InvalidParameter("isolation radius needs at least 2 points".into()));
        }
        if w >= self.len() {
            return Err(Error::VertexOutOfRange { vertex: w, n: self.len() });
        }
        let p = self.points[w];
        let pos = self.by_x.iter().position(|&i| i == w).expect("indexed point");
        let mut best = f64::INFINITY;
        for &i in &self.by_x[pos + 1..] {
            if self.points[i][0] - p[0] >= best {
                break;
            }
            best = best.min(dist(p, self.points[i]));
        }
        for &i in self.by_x[..pos].iter().rev() {
            if p[0] - self.points[i][0] >= best {
                break;
            }
            best = best.min(dist(p, self.points[i]));
        }
        Ok(best)
    }

    /// Isolation radii of all points.
    pub fn isolation_radii(&self) -> Result<Vec<f64>> {
        (0..self.len()).map(|w| self.isolation_radius(w)).collect()
    }

    /// Smallest distance between two points.
    pub fn min_distance(&self) -> Result<f64> {
        Ok(self.isolation_radii()?.into_iter().fold(f64::INFINITY, f64::min))
    }
}

pub(crate) fn dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    libm::hypot(a[0] - b[0], a[1] - b[1])
}

/// Largest number of `points` inside one closed disk of the given radius.
///
/// Some optimal disk has a point on its boundary. For each point `p`, the
/// centers on the circle of that radius around `p` that cover `q` form an
/// arc; a sweep over the arcs finds the deepest overlap. Points are swept in
/// decreasing order of their neighbor count within `2r`, which bounds what
/// any disk through them can cover.
pub fn max_disk_coverage(points: &[[f64; 2]], radius: f64) -> usize {
    coverage_above(points, radius, 0)
}

/// `max(max_disk_coverage(points, radius), floor)`, skipping the search
/// wherever no disk could beat `floor`.
pub fn coverage_above(points: &[[f64; 2]], radius: f64, floor: usize) -> usize {
    if points.len() <= floor {
        return floor;
    }
    let r = radius * (1.0 + BOUNDARY_EPS);
    // A disk of radius r lies in the 3x3 block of side-r cells around the
    // cell of its center.
    let cell = |p: [f64; 2]| (libm::floor(p[0] / r) as i64, libm::floor(p[1] / r) as i64);
    let mut blocks: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    for &p in points {
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                *blocks.entry((cx + dx, cy + dy)).or_insert(0) += 1;
            }
        }
    }
    if blocks.values().copied().max().unwrap_or(0) <= floor {
        return floor;
    }
    let tau = 2.0 * core::f64::consts::PI;
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a][0].total_cmp(&points[b][0]));
    let xs: Vec<f64> = order.iter().map(|&i| points[i][0]).collect();
    let window = |p: [f64; 2]| {
        let lo = xs.partition_point(|&x| x < p[0] - 2.0 * r);
        let hi = xs.partition_point(|&x| x <= p[0] + 2.0 * r);
        &order[lo..hi]
    };

    // Disks centered on a point give a lower bound; neighbor counts give
    // per-point upper bounds.
    let mut best = floor.max(1);
    let mut reach: Vec<(usize, usize)> = Vec::with_capacity(points.len());
    for (i, &p) in points.iter().enumerate() {
        let (mut near, mut far) = (0, 0);
        for &j in window(p) {
            let d = dist(p, points[j]);
            near += usize::from(d <= r);
            far += usize::from(d <= 2.0 * r);
        }
        best = best.max(near);
        reach.push((far, i));
    }
    reach.sort_unstable_by(|a, b| b.cmp(a));

    let mut events: Vec<(f64, i32)> = Vec::new();
    for &(far, i) in &reach {
        if far <= best {
            break;
        }
        let p = points[i];
        events.clear();
        for &j in window(p) {
            let q = points[j];
            let d = dist(p, q);
            if j == i || d > 2.0 * r {
                continue;
            }
            let theta = libm::atan2(q[1] - p[1], q[0] - p[0]).rem_euclid(tau);
            let alpha = libm::acos((d / (2.0 * r)).min(1.0));
            // Each arc is shorter than a full turn, so a doubled copy
            // covers the wrap-around.
            for shift in [0.0, tau] {
                events.push((theta - alpha + shift, 1));
                events.push((theta + alpha + shift, -1));
            }
        }
        // Entries sort before exits at equal angles: the disk is closed.
        events.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(b.1.cmp(&a.1)));
        let mut depth = 0i32;
        for &(_, e) in &events {
            depth += e;
            best = best.max(depth as usize + 1);
        }
    }
    best
}

fn check_params(delta: f64, s: usize) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1)")));
    }
    if s < 2 {
        return Err(Error::InvalidParameter(format!("s = {s} must be at least 2")));
    }
    Ok(())
}

/// `min_p |C ∩ B(w, ρ_w/δ) \ B(p, δ ρ_w)|`, the number of points that always
/// survive removal of one small disk.
pub fn support_margin(c: &PointSet, w: usize, delta: f64) -> Result<usize> {
    support_margin_capped(c, w, delta, usize::MAX)
}

/// `min(support_margin(c, w, delta), cap)`, which is much cheaper for small
/// caps in dense neighborhoods.
pub fn support_margin_capped(c: &PointSet, w: usize, delta: f64, cap: usize) -> Result<usize> {
    let rho = c.isolation_radius(w)?;
    let local: Vec<[f64; 2]> = c.within(c.point(w), rho / delta).into_iter().map(|i| c.point(i)).collect();
    let floor = local.len().saturating_sub(cap);
    Ok(local.len() - coverage_above(&local, delta * rho, floor))
}

/// Whether `w` is `(δ, s)`-supported in `c`.
pub fn is_supported(c: &PointSet, w: usize, delta: f64, s: usize) -> Result<bool> {
    check_params(delta, s)?;
    if s > c.len() {
        return Ok(false);
    }
    Ok(support_margin_capped(c, w, delta, s)? >= s)
}

/// Number of `(δ, s)`-supported points.
pub fn count_supported(c: &PointSet, delta: f64, s: usize) -> Result<usize> {
    check_params(delta, s)?;
    if c.len() < 2 {
        return Ok(0);
    }
    let mut count = 0;
    for w in 0..c.len() {
        if is_supported(c, w, delta, s)? {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid_points(m: usize) -> PointSet {
        let mut pts = Vec::new();
        for i in 0..m {
            for j in 0..m {
                pts.push([i as f64, j as f64]);
            }
        }
        PointSet::new(pts).unwrap()
    }

    #[test]
    fn isolation_radius_examples() {
        let c = PointSet::new(vec![[0.0, 0.0], [3.0, 0.0]]).unwrap();
        assert_eq!(c.isolation_radius(0).unwrap(), 3.0);
        assert_eq!(c.isolation_radius(1).unwrap(), 3.0);
        let c = PointSet::new(vec![[0.0, 0.0], [1.0, 0.0], [5.0, 0.0]]).unwrap();
        assert_eq!(c.isolation_radius(2).unwrap(), 4.0);
        let g = grid_points(5);
        assert_eq!(g.isolation_radius(12).unwrap(), 1.0);
        let single = PointSet::new(vec![[0.0, 0.0]]).unwrap();
        assert!(single.isolation_radius(0).is_err());
    }

    #[test]
    fn duplicates_rejected() {
        assert!(PointSet::new(vec![[1.0, 2.0], [0.0, 0.0], [1.0, 2.0]]).is_err());
    }

    #[test]
    fn two_points_never_supported() {
        let c = PointSet::new(vec![[0.0, 0.0], [3.0, 0.0]]).unwrap();
        assert!(!is_supported(&c, 0, 0.5, 2).unwrap());
        assert!(!is_supported(&c, 1, 0.5, 2).unwrap());
        assert_eq!(count_supported(&c, 0.5, 2).unwrap(), 0);
    }

    #[test]
    fn grid_center_supported() {
        let c = grid_points(100);
        let w = 50 * 100 + 50;
        assert!(is_supported(&c, w, 0.25, 2).unwrap());
        // 49 lattice points within distance 4 and a disk of radius 1/4 covers one.
        assert_eq!(support_margin(&c, w, 0.25).unwrap(), 48);
    }

    #[test]
    fn capped_margin_agrees() {
        let mut pts = Vec::new();
        let mut x = 0.3f64;
        for _ in 0..300 {
            x = (x * 3.9 * (1.0 - x)).clamp(0.01, 0.99);
            let y = (x * 7.3).fract();
            pts.push([x * x * 10.0, y * 10.0]);
        }
        let c = PointSet::new(pts).unwrap();
        for w in 0..c.len() {
            let m = support_margin(&c, w, 0.25).unwrap();
            for cap in [2, 5, 16] {
                assert_eq!(support_margin_capped(&c, w, 0.25, cap).unwrap(), m.min(cap));
            }
        }
    }

    #[test]
    fn s_above_size_is_false() {
        let c = grid_points(3);
        assert!(!is_supported(&c, 4, 0.5, 10).unwrap());
    }

    #[test]
    fn parameter_domain() {
        let c = grid_points(3);
        assert!(is_supported(&c, 4, 1.0, 2).is_err());
        assert!(is_supported(&c, 4, 0.5, 1).is_err());
    }

    /// Tries every disk through two points and every disk centered on a point.
    fn brute_coverage(points: &[[f64; 2]], radius: f64) -> usize {
        let r = radius * (1.0 + BOUNDARY_EPS);
        let count = |c: [f64; 2]| points.iter().filter(|&&p| dist(p, c) <= r).count();
        let mut best = points.iter().map(|&p| count(p)).max().unwrap_or(0);
        for (i, &p) in points.iter().enumerate() {
            for &q in &points[i + 1..] {
                let d = dist(p, q);
                if d > 2.0 * r {
                    continue;
                }
                let mid = [(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0];
                let h = libm::sqrt((radius * radius - d * d / 4.0).max(0.0));
                let (ux, uy) = ((q[1] - p[1]) / d, (p[0] - q[0]) / d);
                for sign in [1.0, -1.0] {
                    best = best.max(count([mid[0] + sign * h * ux, mid[1] + sign * h * uy]));
                }
            }
        }
        best
    }

    proptest::proptest! {
        #[test]
        fn coverage_matches_brute_force(
            pts in proptest::collection::vec((0u32..40, 0u32..40), 1..40),
            radius in 0.5f64..8.0,
        ) {
            let pts: Vec<[f64; 2]> = pts.iter().map(|&(x, y)| [x as f64 * 0.37, y as f64 * 0.29]).collect();
            let brute = brute_coverage(&pts, radius);
            proptest::prop_assert_eq!(max_disk_coverage(&pts, radius), brute);
            for floor in [0, 3, 10, 50] {
                proptest::prop_assert_eq!(coverage_above(&pts, radius, floor), brute.max(floor));
            }
        }
    }

    #[test]
    fn coverage_of_pair_at_diameter() {
        let pts = [[0.0, 0.0], [2.0, 0.0], [1.0, 0.9]];
        assert_eq!(max_disk_coverage(&pts, 1.0), 3);
        assert_eq!(max_disk_coverage(&pts[..2], 0.99), 1);
    }
}
