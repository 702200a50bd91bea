//! Circle packings of triangulations.
//!
//! Radii are found from angle sums: for an interior vertex `v` the corner
//! angles of the triangles of centers around `v` must add up to `2π`. The
//! solver sweeps the classical uniform-neighbor update and then polishes with
//! Newton steps on log-radii; the Jacobian of the angle sums is a weighted
//! Laplacian with weight `ρ / (r_v + r_w)` per triangle, `ρ` being the
//! triangle's inradius.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::graph::{Graph, UNREACHED};
use crate::planar::PlanarMap;
use crate::supported::PointSet;

const TWO_PI: f64 = 2.0 * PI;

/// The outer face of the triangulation and the radii fixed on it.
///
/// For a sphere triangulation `outer` is a triangle and the remaining
/// vertices are packed inside it. For a disk triangulation `outer` is the
/// boundary walk of the unbounded face.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryCondition {
    pub outer: Vec<usize>,
    pub radii: Vec<f64>,
}

impl BoundaryCondition {
    pub fn outer_triangle(face: [usize; 3], radii: [f64; 3]) -> Self {
        Self { outer: face.to_vec(), radii: radii.to_vec() }
    }

    pub fn uniform(outer: Vec<usize>, radius: f64) -> Self {
        let radii = vec![radius; outer.len()];
        Self { outer, radii }
    }

    /// Unit radii on the unique non-triangular face of a disk triangulation,
    /// or on the face to the left of the first dart at vertex 0 for a sphere
    /// triangulation.
    pub fn default_for(map: &PlanarMap) -> Self {
        let faces = map.faces();
        let outer = faces
            .iter()
            .find(|f| f.len() != 3)
            .cloned()
            .unwrap_or_else(|| map.face_at(0, map.rotation(0)[0]));
        Self::uniform(outer, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Target for `max |θ(v) - 2π|` over interior vertices.
    pub tol: f64,
    pub max_sweeps: usize,
    /// Residual below which sweeping hands over to Newton steps.
    pub newton_switch: f64,
    pub max_newton_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-10, max_sweeps: 1_000_000, newton_switch: 1e-1, max_newton_steps: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadiusSolution {
    pub radii: Vec<f64>,
    pub sweeps: usize,
    pub newton_steps: usize,
    /// Final `max |θ(v) - 2π|` over interior vertices.
    pub residual: f64,
}

/// Corner angle at a disk of radius `r` in the triangle of centers formed with
/// tangent disks of radii `a` and `b`.
pub fn corner_angle(r: f64, a: f64, b: f64) -> f64 {
    let s = libm::sqrt(a * b / ((r + a) * (r + b)));
    2.0 * libm::asin(s.min(1.0))
}

/// Angle sum at `v`, over the triangles between consecutive rotation entries.
pub fn angle_sum(map: &PlanarMap, radii: &[f64], v: usize) -> f64 {
    let rot = map.rotation(v);
    let d = rot.len();
    (0..d).map(|i| corner_angle(radii[v], radii[rot[i]], radii[rot[(i + 1) % d]])).sum()
}

/// Interior/boundary split of a triangulation with an outer face.
struct Frame {
    interior: Vec<usize>,
    is_boundary: Vec<bool>,
    outer_darts: Vec<(usize, usize)>,
}

fn frame(map: &PlanarMap, bc: &BoundaryCondition) -> Result<Frame> {
    if bc.outer.len() != bc.radii.len() || bc.outer.len() < 3 {
        return Err(Error::InvalidParameter("boundary needs at least 3 vertices with radii".into()));
    }
    if let Some(r) = bc.radii.iter().find(|&&r| !(r > 0.0) || !r.is_finite()) {
        return Err(Error::InvalidParameter(format!("boundary radius {r} is not positive")));
    }
    if map.n() < 4 {
        return Err(Error::NotATriangulation(format!(
            "{} vertices: no interior vertex to pack",
            map.n()
        )));
    }
    map.check_planar()?;
    let faces = map.faces();
    let mut outer_walk = None;
    for f in &faces {
        if f.len() != bc.outer.len() {
            continue;
        }
        let mut a = f.clone();
        let mut b = bc.outer.clone();
        a.sort_unstable();
        b.sort_unstable();
        if a == b {
            outer_walk = Some(f.clone());
            break;
        }
    }
    let Some(walk) = outer_walk else {
        return Err(Error::NotATriangulation("outer boundary is not a face".into()));
    };
    if faces.iter().filter(|f| f.len() != 3).any(|f| *f != walk) {
        return Err(Error::NotATriangulation("a non-outer face is not a triangle".into()));
    }
    let mut is_boundary = vec![false; map.n()];
    for &v in &walk {
        is_boundary[v] = true;
    }
    let interior: Vec<usize> = (0..map.n()).filter(|&v| !is_boundary[v]).collect();
    if interior.is_empty() {
        return Err(Error::NotATriangulation("no interior vertex".into()));
    }
    let k = walk.len();
    let outer_darts = (0..k).map(|i| (walk[i], walk[(i + 1) % k])).collect();
    Ok(Frame { interior, is_boundary, outer_darts })
}

fn residual(map: &PlanarMap, radii: &[f64], interior: &[usize]) -> f64 {
    interior
        .iter()
        .map(|&v| libm::fabs(angle_sum(map, radii, v) - TWO_PI))
        .fold(0.0, f64::max)
}

/// Solves for radii realizing `map` as a tangency graph with the given outer
/// radii.
pub fn solve_radii(map: &PlanarMap, bc: &BoundaryCondition, opts: &SolverOptions) -> Result<RadiusSolution> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let fr = frame(map, bc)?;
    let mut radii = vec![1.0; map.n()];
    let scale = bc.radii.iter().copied().fold(0.0, f64::max);
    for &v in &fr.interior {
        radii[v] = 0.1 * scale;
    }
    for (&v, &r) in bc.outer.iter().zip(&bc.radii) {
        radii[v] = r;
    }

    let mut sweeps = 0;
    let mut newton_steps = 0;
    let mut res = residual(map, &radii, &fr.interior);
    loop {
        while res >= opts.tol.max(opts.newton_switch) && sweeps < opts.max_sweeps {
            sweep(map, &mut radii, &fr.interior);
            sweeps += 1;
            if sweeps % 16 == 0 {
                res = residual(map, &radii, &fr.interior);
            }
        }
        res = residual(map, &radii, &fr.interior);
        if res < opts.tol {
            break;
        }
        let before = res;
        let mut stalled = false;
        while res >= opts.tol && newton_steps < opts.max_newton_steps {
            match newton_step(map, &mut radii, &fr, res) {
                Some(r) => res = r,
                None => {
                    stalled = true;
                    break;
                }
            }
            newton_steps += 1;
        }
        if res < opts.tol {
            break;
        }
        if sweeps >= opts.max_sweeps || (!stalled && res >= before) {
            return Err(Error::NoConvergence { iterations: sweeps + newton_steps, residual: res });
        }
        if stalled || newton_steps >= opts.max_newton_steps {
            // Fall back to plain sweeping down to the target.
            let target = opts.tol;
            while res >= target && sweeps < opts.max_sweeps {
                sweep(map, &mut radii, &fr.interior);
                sweeps += 1;
                if sweeps % 64 == 0 {
                    res = residual(map, &radii, &fr.interior);
                }
            }
            res = residual(map, &radii, &fr.interior);
            if res < opts.tol {
                break;
            }
            return Err(Error::NoConvergence { iterations: sweeps + newton_steps, residual: res });
        }
    }
    Ok(RadiusSolution { radii, sweeps, newton_steps, residual: res })
}

/// One Gauss-Seidel pass of the uniform-neighbor update: each interior radius
/// is replaced by the one that would give angle sum `2π` if all its `k`
/// neighbors had the common radius producing the current angle sum.
fn sweep(map: &PlanarMap, radii: &mut [f64], interior: &[usize]) {
    for &v in interior {
        let k = map.degree(v) as f64;
        let theta = angle_sum(map, radii, v);
        let beta = libm::sin(theta / (2.0 * k));
        let delta = libm::sin(PI / k);
        let neighbor = radii[v] * beta / (1.0 - beta);
        radii[v] = neighbor * (1.0 - delta) / delta;
    }
}

/// Sparse symmetric matrix in per-row neighbor form.
struct Laplacian {
    diag: Vec<f64>,
    off: Vec<Vec<(usize, f64)>>,
}

impl Laplacian {
    fn apply(&self, x: &[f64], out: &mut [f64]) {
        for i in 0..x.len() {
            let mut acc = self.diag[i] * x[i];
            for &(j, w) in &self.off[i] {
                acc += w * x[j];
            }
            out[i] = acc;
        }
    }
}

/// Negated Jacobian of the interior angle sums with respect to interior
/// log-radii.
fn angle_laplacian(map: &PlanarMap, radii: &[f64], interior: &[usize], index: &[usize]) -> Laplacian {
    let m = interior.len();
    let mut diag = vec![0.0; m];
    let mut off: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for (i, &v) in interior.iter().enumerate() {
        let rot = map.rotation(v);
        let d = rot.len();
        for t in 0..d {
            let (a, b) = (rot[t], rot[(t + 1) % d]);
            let (rv, ra, rb) = (radii[v], radii[a], radii[b]);
            let rho = libm::sqrt(rv * ra * rb / (rv + ra + rb));
            let wa = rho / (rv + ra);
            let wb = rho / (rv + rb);
            diag[i] += wa + wb;
            for (w, weight) in [(a, wa), (b, wb)] {
                let j = index[w];
                if j != UNREACHED {
                    match off[i].iter_mut().find(|(col, _)| *col == j) {
                        Some(entry) => entry.1 -= weight,
                        None => off[i].push((j, -weight)),
                    }
                }
            }
        }
    }
    Laplacian { diag, off }
}

fn conjugate_gradient(a: &Laplacian, b: &[f64], tol: f64) -> Vec<f64> {
    let n = b.len();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    // Jacobi preconditioner.
    let mut z: Vec<f64> = r.iter().zip(&a.diag).map(|(ri, di)| ri / di).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let b_norm = libm::sqrt(b.iter().map(|v| v * v).sum::<f64>());
    let mut ap = vec![0.0; n];
    for _ in 0..(10 * n).max(100) {
        a.apply(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            break;
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let r_norm = libm::sqrt(r.iter().map(|v| v * v).sum::<f64>());
        if r_norm <= tol * b_norm {
            break;
        }
        for i in 0..n {
            z[i] = r[i] / a.diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    x
}

/// A damped Newton step on log-radii. Returns the new residual, or `None`
/// when no step length improves on `current`.
fn newton_step(map: &PlanarMap, radii: &mut [f64], fr: &Frame, current: f64) -> Option<f64> {
    let mut index = vec![UNREACHED; map.n()];
    for (i, &v) in fr.interior.iter().enumerate() {
        index[v] = i;
    }
    let lap = angle_laplacian(map, radii, &fr.interior, &index);
    let rhs: Vec<f64> = fr.interior.iter().map(|&v| angle_sum(map, radii, v) - TWO_PI).collect();
    let step = conjugate_gradient(&lap, &rhs, 1e-14);
    let saved: Vec<f64> = fr.interior.iter().map(|&v| radii[v]).collect();
    let mut t = 1.0;
    for _ in 0..40 {
        for (i, &v) in fr.interior.iter().enumerate() {
            radii[v] = saved[i] * libm::exp(t * step[i]);
        }
        let res = residual(map, radii, &fr.interior);
        if res < current {
            return Some(res);
        }
        t *= 0.5;
    }
    for (i, &v) in fr.interior.iter().enumerate() {
        radii[v] = saved[i];
    }
    None
}

/// Disk centers and radii indexed by vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Packing {
    pub centers: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.radii.len()
    }

    pub fn is_empty(&self) -> bool {
        self.radii.is_empty()
    }

    fn distance(&self, u: usize, v: usize) -> f64 {
        let [x1, y1] = self.centers[u];
        let [x2, y2] = self.centers[v];
        libm::hypot(x1 - x2, y1 - y2)
    }

    /// `max | |c_u - c_v| - (r_u + r_v) |` over edges.
    pub fn tangency_residual(&self, g: &Graph) -> f64 {
        g.edges()
            .map(|(u, v)| libm::fabs(self.distance(u, v) - (self.radii[u] + self.radii[v])))
            .fold(0.0, f64::max)
    }

    /// Largest relative tangency error, `| |c_u - c_v| / (r_u + r_v) - 1 |`.
    pub fn relative_tangency_residual(&self, g: &Graph) -> f64 {
        g.edges()
            .map(|(u, v)| libm::fabs(self.distance(u, v) / (self.radii[u] + self.radii[v]) - 1.0))
            .fold(0.0, f64::max)
    }

    /// Tangency residual divided by the largest radius.
    pub fn scaled_tangency_residual(&self, g: &Graph) -> f64 {
        let max_r = self.radii.iter().copied().fold(0.0, f64::max);
        self.tangency_residual(g) / max_r
    }

    /// `max (r_u + r_v - |c_u - c_v|)` over non-adjacent pairs; positive
    /// values are overlaps.
    pub fn max_overlap(&self, g: &Graph) -> f64 {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let ka = self.centers[a][0] - self.radii[a];
            let kb = self.centers[b][0] - self.radii[b];
            ka.total_cmp(&kb)
        });
        let max_r = self.radii.iter().copied().fold(0.0, f64::max);
        let mut worst = f64::NEG_INFINITY;
        for (i, &u) in order.iter().enumerate() {
            let right = self.centers[u][0] + self.radii[u];
            for &v in &order[i + 1..] {
                if self.centers[v][0] - self.radii[v] > right + max_r {
                    break;
                }
                if g.has_edge(u, v) {
                    continue;
                }
                worst = worst.max(self.radii[u] + self.radii[v] - self.distance(u, v));
            }
        }
        worst
    }

    pub fn translate(&self, shift: [f64; 2]) -> Packing {
        let centers = self.centers.iter().map(|c| [c[0] + shift[0], c[1] + shift[1]]).collect();
        Packing { centers, radii: self.radii.clone() }
    }

    /// Image under `z -> a z + b` with `a > 0`.
    pub fn similarity(&self, a: f64, b: [f64; 2]) -> Packing {
        let centers = self.centers.iter().map(|c| [a * c[0] + b[0], a * c[1] + b[1]]).collect();
        let radii = self.radii.iter().map(|r| a * r).collect();
        Packing { centers, radii }
    }
}

/// Places the disks: the first inner triangle is laid down counterclockwise
/// and the others are reached across shared edges in BFS order.
/// `tol` bounds the tangency residual of the result in units of the largest
/// radius.
pub fn layout(map: &PlanarMap, radii: &[f64], bc: &BoundaryCondition, tol: f64) -> Result<Packing> {
    let fr = frame(map, bc)?;
    let n = map.n();
    if radii.len() != n {
        return Err(Error::InvalidParameter(format!("{} radii for {n} vertices", radii.len())));
    }
    let is_outer = |a: usize, b: usize| fr.outer_darts.contains(&(a, b));
    let mut centers: Vec<Option<[f64; 2]>> = vec![None; n];

    // Start from a triangle around the vertex farthest from the boundary.
    let start = deepest_vertex_inner(map, &fr.is_boundary);
    let a = start;
    let b = map.rotation(a)[0];
    let c = map.next_in_face(a, b);
    centers[a] = Some([0.0, 0.0]);
    centers[b] = Some([radii[a] + radii[b], 0.0]);
    let alpha = corner_angle(radii[a], radii[b], radii[c]);
    let rc = radii[a] + radii[c];
    centers[c] = Some([rc * libm::cos(alpha), rc * libm::sin(alpha)]);

    // Darts of faces already visited; each face is entered once.
    let mut seen: BTreeSet<(usize, usize)> = [(a, b), (b, c), (c, a)].into_iter().collect();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    queue.extend([(a, b), (b, c), (c, a)]);
    while let Some((x, y)) = queue.pop_front() {
        // Face on the other side of x -> y is y -> x -> w.
        if is_outer(y, x) || seen.contains(&(y, x)) {
            continue;
        }
        let w = map.next_in_face(y, x);
        seen.extend([(y, x), (x, w), (w, y)]);
        queue.extend([(x, w), (w, y)]);
        if centers[w].is_some() {
            continue;
        }
        let (py, px) = (centers[y].unwrap(), centers[x].unwrap());
        let phi = libm::atan2(px[1] - py[1], px[0] - py[0]);
        let angle = phi + corner_angle(radii[y], radii[x], radii[w]);
        let d = radii[y] + radii[w];
        centers[w] = Some([py[0] + d * libm::cos(angle), py[1] + d * libm::sin(angle)]);
    }
    let centers: Vec<[f64; 2]> = centers
        .into_iter()
        .map(|c| c.ok_or_else(|| Error::NotATriangulation("layout did not reach every vertex".into())))
        .collect::<Result<_>>()?;
    let packing = Packing { centers, radii: radii.to_vec() };
    let res = packing.scaled_tangency_residual(&map.graph());
    if !(res <= tol) {
        return Err(Error::LayoutInconsistent { residual: res });
    }
    Ok(packing)
}

fn deepest_vertex_inner(map: &PlanarMap, is_boundary: &[bool]) -> usize {
    let dist = distance_from_set(&map.graph(), is_boundary);
    (0..map.n()).max_by_key(|&v| (dist[v], core::cmp::Reverse(v))).unwrap_or(0)
}

fn distance_from_set(g: &Graph, in_set: &[bool]) -> Vec<usize> {
    let mut dist = vec![UNREACHED; g.n()];
    let mut queue = VecDeque::new();
    for v in 0..g.n() {
        if in_set[v] {
            dist[v] = 0;
            queue.push_back(v);
        }
    }
    while let Some(u) = queue.pop_front() {
        for &w in g.neighbors(u) {
            if dist[w] == UNREACHED {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Combinatorial distance of every vertex from the outer boundary.
pub fn boundary_distances(map: &PlanarMap, bc: &BoundaryCondition) -> Vec<usize> {
    let mut in_set = vec![false; map.n()];
    for &v in &bc.outer {
        in_set[v] = true;
    }
    distance_from_set(&map.graph(), &in_set)
}

/// A vertex at maximal combinatorial distance from the outer boundary.
pub fn deepest_vertex(map: &PlanarMap, bc: &BoundaryCondition) -> usize {
    let dist = boundary_distances(map, bc);
    (0..map.n()).max_by_key(|&v| (dist[v], core::cmp::Reverse(v))).unwrap_or(0)
}

/// Solve, lay out, and report.
pub fn pack(map: &PlanarMap, bc: &BoundaryCondition, opts: &SolverOptions, layout_tol: f64) -> Result<(Packing, RadiusSolution)> {
    let sol = solve_radii(map, bc, opts)?;
    let packing = layout(map, &sol.radii, bc, layout_tol)?;
    Ok((packing, sol))
}

/// Maps the packing by `z -> a z + b` so that the disk of `root` becomes the
/// unit disk centered at the origin.
pub fn normalize_to_root(p: &Packing, root: usize) -> Packing {
    let a = 1.0 / p.radii[root];
    let [cx, cy] = p.centers[root];
    let centers = p.centers.iter().map(|c| [(c[0] - cx) * a, (c[1] - cy) * a]).collect();
    let mut radii: Vec<f64> = p.radii.iter().map(|r| r * a).collect();
    radii[root] = 1.0;
    Packing { centers, radii }
}

/// Scales and translates the packing into the unit disk `B(0, 1)`.
pub fn fit_in_unit_disk(p: &Packing) -> Packing {
    let n = p.len() as f64;
    let cx = p.centers.iter().map(|c| c[0]).sum::<f64>() / n;
    let cy = p.centers.iter().map(|c| c[1]).sum::<f64>() / n;
    let reach = p
        .centers
        .iter()
        .zip(&p.radii)
        .map(|(c, r)| libm::hypot(c[0] - cx, c[1] - cy) + r)
        .fold(0.0, f64::max);
    let a = 1.0 / reach;
    p.similarity(a, [-cx * a, -cy * a])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RingStats {
    /// `max r / min r` over disks within combinatorial distance `d` of the root.
    pub max_ratio: f64,
    /// Largest ratio between radii of adjacent disks in that ball.
    pub max_neighbor_ratio: f64,
    pub disks: usize,
}

/// Radius ratios around `root`, which must be at combinatorial distance at
/// least `d + 1` from the outer boundary.
pub fn ring_ratio_stats(p: &Packing, map: &PlanarMap, bc: &BoundaryCondition, root: usize, d: usize) -> Result<RingStats> {
    let depth = boundary_distances(map, bc)[root];
    if depth < d + 1 {
        return Err(Error::Precondition(format!(
            "root {root} is at distance {depth} from the boundary, need at least {}",
            d + 1
        )));
    }
    let g = map.graph();
    let dist = g.bfs_distances_capped(root, d);
    let ball: Vec<usize> = (0..g.n()).filter(|&v| dist[v] != UNREACHED).collect();
    let max_r = ball.iter().map(|&v| p.radii[v]).fold(0.0, f64::max);
    let min_r = ball.iter().map(|&v| p.radii[v]).fold(f64::INFINITY, f64::min);
    let mut max_neighbor_ratio: f64 = 1.0;
    for &v in &ball {
        for &w in g.neighbors(v) {
            if dist[w] != UNREACHED {
                max_neighbor_ratio = max_neighbor_ratio.max(p.radii[v] / p.radii[w]);
            }
        }
    }
    Ok(RingStats { max_ratio: max_r / min_r, max_neighbor_ratio, disks: ball.len() })
}

/// The set of disk centers.
pub fn centers(p: &Packing) -> PointSet {
    PointSet::new_unchecked(p.centers.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{hex_patch_map, octahedron, random_bounded_triangulation, tetrahedron};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tet_bc() -> BoundaryCondition {
        let map = tetrahedron();
        let face = map.face_at(0, map.rotation(0)[0]);
        BoundaryCondition::outer_triangle([face[0], face[1], face[2]], [1.0, 1.0, 1.0])
    }

    #[test]
    fn tetrahedron_matches_descartes() {
        // Four mutually tangent circles with curvatures 1, 1, 1, k:
        // k = 1 + 1 + 1 + 2 sqrt(1 + 1 + 1) = 3 + 2 sqrt(3).
        let expected = 1.0 / (3.0 + 2.0 * libm::sqrt(3.0));
        let map = tetrahedron();
        let bc = tet_bc();
        let sol = solve_radii(&map, &bc, &SolverOptions::default()).unwrap();
        let inner = (0..4).find(|v| !bc.outer.contains(v)).unwrap();
        assert!(libm::fabs(sol.radii[inner] - expected) < 1e-10);
        let p = layout(&map, &sol.radii, &bc, 1e-8).unwrap();
        assert!(p.tangency_residual(&map.graph()) < 1e-9);
        assert_eq!(centers(&p).len(), 4);
    }

    #[test]
    fn k3_is_rejected() {
        let tri = PlanarMap::from_faces(3, &[alloc::vec![0, 1, 2]]).unwrap();
        let bc = BoundaryCondition::outer_triangle([0, 1, 2], [1.0; 3]);
        assert!(matches!(
            solve_radii(&tri, &bc, &SolverOptions::default()),
            Err(Error::NotATriangulation(_))
        ));
    }

    #[test]
    fn hex_patch_interior_radii_equal() {
        let map = hex_patch_map(4);
        let bc = BoundaryCondition::default_for(&map);
        assert_eq!(bc.outer.len(), 24);
        let sol = solve_radii(&map, &bc, &SolverOptions::default()).unwrap();
        for r in &sol.radii {
            assert!(libm::fabs(r - 1.0) < 1e-9, "{r}");
        }
        let p = layout(&map, &sol.radii, &bc, 1e-8).unwrap();
        let root = deepest_vertex(&map, &bc);
        assert_eq!(root, 0);
        let stats = ring_ratio_stats(&p, &map, &bc, root, 1).unwrap();
        assert!(libm::fabs(stats.max_ratio - 1.0) < 1e-9);
        assert!(ring_ratio_stats(&p, &map, &bc, root, 4).is_err());
    }

    #[test]
    fn residual_recomputed_from_output() {
        let map = octahedron();
        let bc = BoundaryCondition::default_for(&map);
        let sol = solve_radii(&map, &bc, &SolverOptions::default()).unwrap();
        let fr = frame(&map, &bc).unwrap();
        assert!(residual(&map, &sol.radii, &fr.interior) < 1e-10);
    }

    #[test]
    fn angle_sum_decreases_in_own_radius() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let map = random_bounded_triangulation(40, 8, &mut rng).unwrap();
        use rand::Rng;
        for _ in 0..50 {
            let radii: Vec<f64> = (0..map.n()).map(|_| rng.gen_range(0.1..2.0)).collect();
            let v = rng.gen_range(0..map.n());
            let h = 1e-6 * radii[v];
            let mut up = radii.clone();
            up[v] += h;
            assert!(angle_sum(&map, &up, v) < angle_sum(&map, &radii, v));
        }
    }

    #[test]
    fn random_triangulation_packs() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let map = random_bounded_triangulation(300, 8, &mut rng).unwrap();
        let bc = BoundaryCondition::default_for(&map);
        let (p, sol) = pack(&map, &bc, &SolverOptions::default(), 1e-8).unwrap();
        assert!(sol.residual < 1e-10);
        let g = map.graph();
        assert!(p.max_overlap(&g) < 1e-9);
        let q = normalize_to_root(&p, 5);
        assert_eq!(q.radii[5], 1.0);
        assert_eq!(q.centers[5], [0.0, 0.0]);
        for v in 0..g.n() {
            let ratio = q.radii[v] / q.radii[0] - p.radii[v] / p.radii[0];
            assert!(libm::fabs(ratio) < 1e-9 * (p.radii[v] / p.radii[0]));
        }
        let fitted = fit_in_unit_disk(&p);
        for (c, r) in fitted.centers.iter().zip(&fitted.radii) {
            assert!(libm::hypot(c[0], c[1]) + r <= 1.0 + 1e-12);
        }
    }
}
