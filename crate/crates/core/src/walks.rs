//! Simple random walk functionals: non-return probability `φ(n, G)`, return
//! probabilities and volume growth exponents.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Work allowed for [`PhiMode::Auto`] before switching from all starts to a
/// uniform sample of starts, in adjacency entries visited.
pub const EXACT_WORK_BUDGET: u64 = 5_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PhiMode {
    /// Absorbing-chain recursion from every start vertex.
    Exact,
    /// The same recursion from `starts` distinct uniformly chosen vertices.
    SampledStarts { starts: usize, seed: u64 },
    /// `samples` simulated walks from uniform starts.
    MonteCarlo { samples: usize, seed: u64 },
    /// `Exact` if its cost fits [`EXACT_WORK_BUDGET`], otherwise as many
    /// sampled starts as the budget allows (at least 32).
    Auto { seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpec {
    horizon: usize,
    mode: PhiMode,
}

impl WalkSpec {
    pub fn new(horizon: usize, mode: PhiMode) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidParameter("horizon must be at least 1".into()));
        }
        match mode {
            PhiMode::SampledStarts { starts: 0, .. } | PhiMode::MonteCarlo { samples: 0, .. } => {
                Err(Error::InvalidParameter("sample count must be at least 1".into()))
            }
            _ => Ok(Self { horizon, mode }),
        }
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn mode(&self) -> PhiMode {
        self.mode
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiEstimate {
    pub horizon: usize,
    pub value: f64,
    /// Zero when every start was evaluated exactly.
    pub stderr: f64,
    /// Start vertices (exact modes) or walks (Monte Carlo) used.
    pub samples: usize,
}

/// Adjacency in compressed form with inverse degrees.
struct Csr {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    inv_degree: Vec<f64>,
}

impl Csr {
    fn new(g: &Graph) -> Self {
        let mut offsets = vec![0];
        let mut targets = Vec::with_capacity(2 * g.m());
        for u in 0..g.n() {
            targets.extend_from_slice(g.neighbors(u));
            offsets.push(targets.len());
        }
        let inv_degree = (0..g.n()).map(|u| 1.0 / g.degree(u) as f64).collect();
        Self { offsets, targets, inv_degree }
    }

    fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }
}

fn check_walkable(g: &Graph) -> Result<()> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    if g.n() < 2 {
        return Err(Error::InvalidParameter("walk needs at least one edge".into()));
    }
    Ok(())
}

/// Survival curve from `start`: entry `t` is `P(X_j != start, 1 <= j <= t)`
/// for `t = 0..=n`. Mass absorbed at the start is subtracted from the
/// previous value, so the curve is nonincreasing exactly.
fn survival_from(csr: &Csr, start: usize, n: usize) -> Vec<f64> {
    let len = csr.inv_degree.len();
    let mut mass = vec![0.0; len];
    let mut weighted = vec![0.0; len];
    let mut next = vec![0.0; len];
    mass[start] = 1.0;
    let mut curve = Vec::with_capacity(n + 1);
    curve.push(1.0);
    let mut alive = 1.0;
    for _ in 0..n {
        for u in 0..len {
            weighted[u] = mass[u] * csr.inv_degree[u];
        }
        for u in 0..len {
            let mut acc = 0.0;
            for &w in csr.neighbors(u) {
                acc += weighted[w];
            }
            next[u] = acc;
        }
        let absorbed = next[start];
        next[start] = 0.0;
        alive = (alive - absorbed).max(0.0);
        curve.push(alive);
        core::mem::swap(&mut mass, &mut next);
    }
    curve
}

/// Exact `P(X_j != v, 1 <= j <= n)` for the walk started at `v`.
pub fn phi_from(g: &Graph, v: usize, n: usize) -> Result<f64> {
    Ok(*phi_curve_from(g, v, n)?.last().unwrap())
}

/// Survival curve `t -> P_v(X_j != v, 1 <= j <= t)` for `t = 0..=n`.
pub fn phi_curve_from(g: &Graph, v: usize, n: usize) -> Result<Vec<f64>> {
    check_walkable(g)?;
    if v >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
    }
    Ok(survival_from(&Csr::new(g), v, n))
}

/// `φ(n, G)`: probability that the walk from a uniform start avoids the
/// start during steps `1..=n`.
pub fn phi(g: &Graph, spec: &WalkSpec) -> Result<PhiEstimate> {
    Ok(*phi_curve(g, spec)?.last().unwrap())
}

/// `φ(t, G)` for `t = 1..=horizon`, all from the same starts or walks.
pub fn phi_curve(g: &Graph, spec: &WalkSpec) -> Result<Vec<PhiEstimate>> {
    check_walkable(g)?;
    let n = spec.horizon;
    let work = (g.n() as u64).saturating_mul(n as u64).saturating_mul(2 * g.m() as u64);
    let mode = match spec.mode {
        PhiMode::Auto { seed } if work > EXACT_WORK_BUDGET => {
            let per_start = (n as u64 * 2 * g.m() as u64).max(1);
            let starts = (EXACT_WORK_BUDGET / per_start).max(32) as usize;
            PhiMode::SampledStarts { starts: starts.min(g.n()), seed }
        }
        PhiMode::Auto { .. } => PhiMode::Exact,
        m => m,
    };
    match mode {
        PhiMode::Exact => {
            let starts: Vec<usize> = (0..g.n()).collect();
            Ok(average_starts(g, &starts, n, g.n()))
        }
        PhiMode::SampledStarts { starts, seed } => {
            if starts >= g.n() {
                let all: Vec<usize> = (0..g.n()).collect();
                return Ok(average_starts(g, &all, n, g.n()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let chosen = sample(&mut rng, g.n(), starts).into_vec();
            Ok(average_starts(g, &chosen, n, g.n()))
        }
        PhiMode::MonteCarlo { samples, seed } => Ok(monte_carlo(g, n, samples, seed)),
        PhiMode::Auto { .. } => unreachable!(),
    }
}

/// Mean of per-start survival curves, with the standard error of a sample
/// drawn without replacement from `population` starts.
fn average_starts(g: &Graph, starts: &[usize], n: usize, population: usize) -> Vec<PhiEstimate> {
    let csr = Csr::new(g);
    let mut sum = vec![0.0; n + 1];
    let mut sum_sq = vec![0.0; n + 1];
    for &v in starts {
        let curve = survival_from(&csr, v, n);
        for t in 0..=n {
            sum[t] += curve[t];
            sum_sq[t] += curve[t] * curve[t];
        }
    }
    let m = starts.len() as f64;
    let fpc = if starts.len() >= population { 0.0 } else { 1.0 - m / population as f64 };
    (1..=n)
        .map(|t| {
            let mean = sum[t] / m;
            let var = if m > 1.0 { ((sum_sq[t] - m * mean * mean) / (m - 1.0)).max(0.0) } else { 0.0 };
            PhiEstimate { horizon: t, value: mean, stderr: libm::sqrt(var * fpc / m), samples: starts.len() }
        })
        .collect()
}

fn monte_carlo(g: &Graph, n: usize, samples: usize, seed: u64) -> Vec<PhiEstimate> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // returned_at[t] counts walks whose first return is at step t.
    let mut returned_at = vec![0u64; n + 1];
    for _ in 0..samples {
        let start = rng.gen_range(0..g.n());
        let mut x = start;
        for t in 1..=n {
            let nb = g.neighbors(x);
            x = nb[rng.gen_range(0..nb.len())];
            if x == start {
                returned_at[t] += 1;
                break;
            }
        }
    }
    let m = samples as f64;
    let mut survivors = samples as u64;
    (1..=n)
        .map(|t| {
            survivors -= returned_at[t];
            let p = survivors as f64 / m;
            PhiEstimate { horizon: t, value: p, stderr: libm::sqrt(p * (1.0 - p) / m), samples }
        })
        .collect()
}

/// Distribution of `X_t` for the walk from `o`, for `t = 0..=n`.
pub fn distributions(g: &Graph, o: usize, n: usize) -> Result<Vec<Vec<f64>>> {
    check_walkable(g)?;
    if o >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: o, n: g.n() });
    }
    let csr = Csr::new(g);
    let mut cur = vec![0.0; g.n()];
    cur[o] = 1.0;
    let mut out = vec![cur.clone()];
    for _ in 0..n {
        let mut next = vec![0.0; g.n()];
        for u in 0..g.n() {
            if cur[u] != 0.0 {
                let share = cur[u] * csr.inv_degree[u];
                for &w in csr.neighbors(u) {
                    next[w] += share;
                }
            }
        }
        out.push(next.clone());
        cur = next;
    }
    Ok(out)
}

/// `P_o(X_t = o)` for `t = 0..=n`.
pub fn return_probabilities(g: &Graph, o: usize, n: usize) -> Result<Vec<f64>> {
    Ok(distributions(g, o, n)?.into_iter().map(|d| d[o]).collect())
}

/// `P_o(X_n = o)`.
pub fn return_probability(g: &Graph, o: usize, n: usize) -> Result<f64> {
    Ok(*return_probabilities(g, o, n)?.last().unwrap())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthProfile {
    /// `|B(o, r)|` for `r = 0..=r_max`.
    pub sizes: Vec<usize>,
    /// Radii used in the fit.
    pub fit_radii: Vec<usize>,
    /// Least-squares slope of `log |B(o, r)|` against `log r`.
    pub alpha: Option<f64>,
}

/// Ball sizes around `o` and the growth exponent fitted over dyadic radii in
/// `[4, r_max / 2]` (all integer radii in that window if fewer than two are
/// dyadic).
pub fn growth_profile(g: &Graph, o: usize, r_max: usize) -> Result<GrowthProfile> {
    if o >= g.n() {
        return Err(Error::VertexOutOfRange { vertex: o, n: g.n() });
    }
    let ecc = g.eccentricity(o);
    if r_max > ecc {
        return Err(Error::InvalidParameter(format!(
            "r_max = {r_max} exceeds the eccentricity {ecc} of the root"
        )));
    }
    let dist = g.bfs_distances(o);
    let mut sizes = vec![0usize; r_max + 1];
    for d in dist {
        if d <= r_max {
            sizes[d] += 1;
        }
    }
    for r in 1..=r_max {
        sizes[r] += sizes[r - 1];
    }
    let hi = r_max / 2;
    let mut fit_radii: Vec<usize> =
        (2..usize::BITS).map(|e| 1usize << e).take_while(|&r| r <= hi).collect();
    if fit_radii.len() < 2 {
        fit_radii = (4..=hi).collect();
    }
    let alpha = fit_exponent(&sizes, &fit_radii);
    Ok(GrowthProfile { sizes, fit_radii, alpha })
}

/// Least-squares slope of `log sizes[r]` against `log r` over `radii`.
pub fn fit_exponent(sizes: &[usize], radii: &[usize]) -> Option<f64> {
    if radii.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> =
        radii.iter().map(|&r| (libm::log(r as f64), libm::log(sizes[r] as f64))).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}
