//! Supported-point analysis of one point set against one random tiling.

use planar_limits_core::supported::{
    cities, max_cities_in_square, sample_tiling, square_is_s_supported, support_margin_capped,
    verify_flow_bound, FlowReport,
};
use planar_limits_core::{Error, PointSet, TilingHierarchy};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Result;

/// Tilings tried before giving up on points sitting on square edges.
pub const MAX_REDRAWS: u64 = 16;

#[derive(Debug, Clone)]
pub struct ThresholdRow {
    pub s: usize,
    /// `N(C, δ, s)`.
    pub supported: usize,
    /// `N · s / |C|`.
    pub ratio: f64,
    pub flow: FlowReport,
    /// City pairs `(w, S)` with `w` supported.
    pub city_checks: usize,
    /// Those among them whose square is not `s`-supported.
    pub city_violations: usize,
}

#[derive(Debug, Clone)]
pub struct SupportAnalysis {
    pub points: usize,
    pub delta: f64,
    pub tiling: TilingHierarchy,
    pub redraws: u64,
    pub cities: usize,
    pub max_cities_in_square: usize,
    pub rows: Vec<ThresholdRow>,
}

impl SupportAnalysis {
    /// Flow checks, bounds and city implications all hold.
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.flow.all_ok() && r.city_violations == 0)
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "s": r.s,
                    "supported_points": r.supported,
                    "ratio": r.ratio,
                    "city_checks": r.city_checks,
                    "city_violations": r.city_violations,
                    "flow": flow_json(&r.flow),
                })
            })
            .collect();
        json!({
            "points": self.points,
            "delta": self.delta,
            "tiling": { "k": self.tiling.k(), "beta": self.tiling.beta(), "seed": self.tiling.seed(), "redraws": self.redraws },
            "cities": self.cities,
            "max_cities_in_square": self.max_cities_in_square,
            "thresholds": rows,
            "all_ok": self.all_ok(),
        })
    }
}

pub fn flow_json(f: &FlowReport) -> Value {
    json!({
        "level_a": f.level_a,
        "level_b": f.level_b,
        "level_a_sum": f.level_a_sum,
        "telescoped_sum": f.telescoped_sum,
        "supported_squares": f.supported_squares,
        "bound": f.bound,
        "level_a_exact": f.level_a_exact(),
        "telescoped_ok": f.telescoped_ok(),
        "bound_ok": f.bound_ok(),
        "net_nonnegative": f.net_nonnegative,
        "supported_inflow_ok": f.supported_inflow_ok,
    })
}

/// Support margins of every point, capped at `cap` (parallel in the current
/// pool).
pub fn margins(c: &PointSet, delta: f64, cap: usize) -> Result<Vec<usize>> {
    Ok((0..c.len())
        .into_par_iter()
        .map(|w| support_margin_capped(c, w, delta, cap))
        .collect::<Result<Vec<_>, _>>()?)
}

/// Seed of the `attempt`-th tiling drawn for `seed`.
pub fn redraw_seed(seed: u64, attempt: u64) -> u64 {
    seed.wrapping_add(attempt << 32)
}

fn analyze_with(
    c: &PointSet,
    delta: f64,
    s_values: &[usize],
    margins: &[usize],
    tiling: &TilingHierarchy,
) -> Result<(Vec<ThresholdRow>, usize, usize), Error> {
    let pairs = cities(c, delta, tiling)?;
    let mut rows = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let flow = verify_flow_bound(c, tiling, s, None)?;
        let supported = margins.iter().filter(|&&m| m >= s).count();
        let mut city_checks = 0;
        let mut city_violations = 0;
        for pair in &pairs {
            if margins[pair.point] >= s {
                city_checks += 1;
                if !square_is_s_supported(c, tiling, pair.square, s)? {
                    city_violations += 1;
                }
            }
        }
        rows.push(ThresholdRow {
            s,
            supported,
            ratio: (supported * s) as f64 / c.len() as f64,
            flow,
            city_checks,
            city_violations,
        });
    }
    Ok((rows, pairs.len(), max_cities_in_square(&pairs)))
}

/// Counts supported points for each `s`, checks the flow bound, and checks
/// the city implication on one tiling with `k = ⌈20/δ²⌉`. A tiling with a
/// point on a square edge is redrawn.
pub fn analyze_support(c: &PointSet, delta: f64, s_values: &[usize], seed: u64) -> Result<SupportAnalysis> {
    let m = margins(c, delta, s_values.iter().copied().max().unwrap_or(0))?;
    let mut attempt = 0;
    loop {
        let tiling = sample_tiling(delta, redraw_seed(seed, attempt))?;
        match analyze_with(c, delta, s_values, &m, &tiling) {
            Ok((rows, cities, max_cities_in_square)) => {
                return Ok(SupportAnalysis {
                    points: c.len(),
                    delta,
                    tiling,
                    redraws: attempt,
                    cities,
                    max_cities_in_square,
                    rows,
                })
            }
            Err(Error::BoundaryDegenerate) if attempt + 1 < MAX_REDRAWS => attempt += 1,
            Err(e) => return Err(e.into()),
        }
    }
}
