//! Ball censuses of finite graphs with a uniformly random root, and
//! total-variation diagnostics for sequences of such censuses.
//!
//! Masses are kept as integer counts over the number of roots, so every
//! identity (total mass, pushforward, distances) is checked exactly.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::canon::{canonical_code, BallCode};
use crate::error::{Error, Result};
use crate::graph::{ball, Graph};
use crate::planar::PlanarMap;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallDistribution {
    radius: usize,
    counts: BTreeMap<BallCode, u64>,
    total: u64,
}

impl BallDistribution {
    /// Distribution with the given atom counts. Counts must be positive.
    pub fn from_counts(radius: usize, counts: BTreeMap<BallCode, u64>) -> Result<Self> {
        if counts.values().any(|&c| c == 0) {
            return Err(Error::InvalidParameter("zero count in census".into()));
        }
        let total = counts.values().sum();
        if total == 0 {
            return Err(Error::InvalidParameter("empty census".into()));
        }
        Ok(Self { radius, counts, total })
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of roots counted.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, code: &BallCode) -> u64 {
        self.counts.get(code).copied().unwrap_or(0)
    }

    pub fn mass(&self, code: &BallCode) -> BigRational {
        BigRational::new(BigInt::from(self.count(code)), BigInt::from(self.total))
    }

    pub fn mass_f64(&self, code: &BallCode) -> f64 {
        self.count(code) as f64 / self.total as f64
    }

    /// Atoms in code order.
    pub fn atoms(&self) -> impl Iterator<Item = (&BallCode, u64)> + '_ {
        self.counts.iter().map(|(c, &n)| (c, n))
    }

    pub fn support_size(&self) -> usize {
        self.counts.len()
    }

    pub fn is_point_mass(&self) -> bool {
        self.counts.len() == 1
    }

    /// Sum of all masses as an exact rational.
    pub fn total_mass(&self) -> BigRational {
        self.counts
            .keys()
            .map(|c| self.mass(c))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// Adds the counts of `other` (a census of further roots).
    pub fn merge(&mut self, other: &BallDistribution) -> Result<()> {
        if self.radius != other.radius {
            return Err(Error::RadiusMismatch(self.radius, other.radius));
        }
        for (code, &n) in &other.counts {
            *self.counts.entry(code.clone()).or_insert(0) += n;
        }
        self.total += other.total;
        Ok(())
    }
}

/// Census of `ball(g, o, r)` over the given roots.
pub fn partial_census(g: &Graph, r: usize, roots: impl IntoIterator<Item = usize>) -> Result<BallDistribution> {
    let mut counts: BTreeMap<BallCode, u64> = BTreeMap::new();
    for o in roots {
        if o >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: o, n: g.n() });
        }
        *counts.entry(canonical_code(&ball(g, o, r))).or_insert(0) += 1;
    }
    BallDistribution::from_counts(r, counts)
}

/// Law of the radius-`r` ball around a uniformly random root.
pub fn ball_distribution(g: &Graph, r: usize) -> Result<BallDistribution> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    partial_census(g, r, 0..g.n())
}

/// `½ Σ |p(c) - q(c)|`, exactly.
pub fn tv_distance_exact(a: &BallDistribution, b: &BallDistribution) -> Result<BigRational> {
    if a.radius != b.radius {
        return Err(Error::RadiusMismatch(a.radius, b.radius));
    }
    let (ta, tb) = (a.total as u128, b.total as u128);
    let mut num: u128 = 0;
    for (code, &ca) in &a.counts {
        let x = ca as u128 * tb;
        let y = b.count(code) as u128 * ta;
        num += x.abs_diff(y);
    }
    for (code, &cb) in &b.counts {
        if !a.counts.contains_key(code) {
            num += cb as u128 * ta;
        }
    }
    Ok(BigRational::new(BigInt::from(num), BigInt::from(2 * ta * tb)))
}

pub fn tv_distance(a: &BallDistribution, b: &BallDistribution) -> Result<f64> {
    Ok(tv_distance_exact(a, b)?.to_f64().unwrap_or(f64::NAN))
}

/// Image of a census under truncation of every ball to radius `r`.
pub fn pushforward(d: &BallDistribution, r: usize) -> Result<BallDistribution> {
    if r > d.radius {
        return Err(Error::InvalidParameter(format!(
            "cannot push a radius-{} census forward to radius {r}",
            d.radius
        )));
    }
    let mut counts: BTreeMap<BallCode, u64> = BTreeMap::new();
    for (code, &n) in &d.counts {
        let small = canonical_code(&code.decode()?.ball(r));
        *counts.entry(small).or_insert(0) += n;
    }
    BallDistribution::from_counts(r, counts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiagnosticRow {
    pub radius: usize,
    /// Total variation between the censuses of graphs `i` and `i + 1`.
    pub consecutive_tv: Vec<f64>,
    /// The last distance exceeds the smallest earlier one, so the sequence
    /// does not look Cauchy at this radius.
    pub non_cauchy: bool,
}

/// Per radius, the total-variation distance between consecutive censuses.
pub fn convergence_diagnostic(graphs: &[Graph], radii: &[usize]) -> Result<Vec<DiagnosticRow>> {
    let mut rows = Vec::with_capacity(radii.len());
    for &r in radii {
        let censuses: Vec<BallDistribution> =
            graphs.iter().map(|g| ball_distribution(g, r)).collect::<Result<_>>()?;
        let consecutive_tv: Vec<f64> = censuses
            .windows(2)
            .map(|w| tv_distance(&w[0], &w[1]))
            .collect::<Result<_>>()?;
        let non_cauchy = match consecutive_tv.split_last() {
            Some((last, earlier)) if !earlier.is_empty() => {
                *last > earlier.iter().copied().fold(f64::INFINITY, f64::min)
            }
            _ => false,
        };
        rows.push(DiagnosticRow { radius: r, consecutive_tv, non_cauchy });
    }
    Ok(rows)
}

/// Number of vertices of degree below 6 in a sphere triangulation with
/// maximum degree at most 6. Euler's formula forces `Σ (6 - deg) = 12`, so
/// the count never exceeds 12.
pub fn degree_deficiency_census(t: &PlanarMap) -> Result<usize> {
    t.check_sphere_triangulation()?;
    if t.max_degree() > 6 {
        return Err(Error::Precondition(format!("maximum degree {} exceeds 6", t.max_degree())));
    }
    let count = (0..t.n()).filter(|&v| t.degree(v) < 6).count();
    if count > 12 {
        return Err(Error::NonPlanar { euler: t.euler_characteristic() });
    }
    Ok(count)
}
