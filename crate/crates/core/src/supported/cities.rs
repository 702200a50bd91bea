//! Cities: points matched to a square of the hierarchy at their own scale.
//!
//! `w` is a city in `S` when the side of `S` lies in `[4R, 5R]` and `w` is
//! within `R` of the center of `S`, where `R = ρ_w / δ`. Consecutive levels
//! differ in side by `k >= 20`, so at most one level qualifies, and the
//! center condition forces `S` to contain `w`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::ops::Range;

use super::tiling::{sample_tiling, Square, TilingHierarchy};
use super::{dist, PointSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CityPair {
    pub point: usize,
    pub square: Square,
}

fn scale(c: &PointSet, w: usize, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("delta = {delta} outside (0, 1)")));
    }
    Ok(c.isolation_radius(w)? / delta)
}

pub fn is_city(c: &PointSet, w: usize, sq: Square, delta: f64, tiling: &TilingHierarchy) -> Result<bool> {
    let r = scale(c, w, delta)?;
    let side = tiling.side(sq.level);
    Ok(side >= 4.0 * r && side <= 5.0 * r && dist(c.point(w), tiling.center(sq)) <= r)
}

/// The square in which `w` is a city, if any.
pub fn city_square(c: &PointSet, w: usize, delta: f64, tiling: &TilingHierarchy) -> Result<Option<Square>> {
    let r = scale(c, w, delta)?;
    let ln_k = libm::log(tiling.k() as f64);
    let level = libm::ceil((libm::log(4.0 * r) - tiling.beta()) / ln_k) as i32;
    // Guard against rounding at the lower end of the window.
    for n in [level - 1, level] {
        let sq = tiling.locate(c.point(w), n);
        if is_city(c, w, sq, delta, tiling)? {
            return Ok(Some(sq));
        }
    }
    Ok(None)
}

/// All `(w, S)` city pairs for one tiling.
pub fn cities(c: &PointSet, delta: f64, tiling: &TilingHierarchy) -> Result<Vec<CityPair>> {
    let mut out = Vec::new();
    for w in 0..c.len() {
        if let Some(square) = city_square(c, w, delta, tiling)? {
            out.push(CityPair { point: w, square });
        }
    }
    Ok(out)
}

/// Largest number of cities sharing one square.
pub fn max_cities_in_square(pairs: &[CityPair]) -> usize {
    let mut per: BTreeMap<Square, usize> = BTreeMap::new();
    for p in pairs {
        *per.entry(p.square).or_insert(0) += 1;
    }
    per.values().copied().max().unwrap_or(0)
}

/// Fraction of tilings `sample_tiling(delta, seed)`, `seed ∈ seeds`, in
/// which `w` is a city somewhere.
pub fn city_frequency(c: &PointSet, w: usize, delta: f64, seeds: Range<u64>) -> Result<f64> {
    let total = seeds.end.saturating_sub(seeds.start);
    if total == 0 {
        return Err(Error::InvalidParameter("empty seed range".into()));
    }
    let mut hits = 0u64;
    for seed in seeds {
        let tiling = sample_tiling(delta, seed)?;
        if city_square(c, w, delta, &tiling)?.is_some() {
            hits += 1;
        }
    }
    Ok(hits as f64 / total as f64)
}
