//! Transport functions and the intrinsic mass transport principle.
//!
//! A transport function assigns a nonnegative rational mass `f(G, x, y)` to
//! ordered vertex pairs and must depend only on the isomorphism class of
//! `(G, x, y)`. For an unbiased measure (uniform root on each graph) the
//! expected mass sent out of the root equals the expected mass received,
//! since both are the average of `f` over all ordered pairs.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// A graph with all-pairs distances, shared by transport evaluations.
#[derive(Debug, Clone)]
pub struct GraphContext<'a> {
    graph: &'a Graph,
    dist: Vec<Vec<usize>>,
}

impl<'a> GraphContext<'a> {
    pub fn new(graph: &'a Graph) -> Self {
        let dist = (0..graph.n()).map(|v| graph.bfs_distances(v)).collect();
        Self { graph, dist }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn distance(&self, x: usize, y: usize) -> usize {
        self.dist[x][y]
    }
}

pub trait TransportFunction {
    fn eval(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> BigRational;

    fn name(&self) -> String;
}

fn int(v: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `f ≡ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroTransport;

impl TransportFunction for ZeroTransport {
    fn eval(&self, _: &GraphContext<'_>, _: usize, _: usize) -> BigRational {
        BigRational::zero()
    }

    fn name(&self) -> String {
        "zero".into()
    }
}

/// `f(G, x, y) = deg(x)` when `x ~ y`, else 0.
#[derive(Debug, Clone, Copy, Default)]
pub struct DegreeTransport;

impl TransportFunction for DegreeTransport {
    fn eval(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> BigRational {
        if ctx.graph.has_edge(x, y) {
            int(ctx.graph.degree(x))
        } else {
            BigRational::zero()
        }
    }

    fn name(&self) -> String {
        "degree".into()
    }
}

/// Isomorphism-invariant relations between the source `x` and target `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Adjacent,
    Equal,
    DistanceAtMost(usize),
    DistanceExactly(usize),
    SameDegree,
    /// `x ~ y` and `y` is a leaf.
    AdjacentToLeaf,
    /// `x ~ y` and `deg(x) > deg(y)`.
    AdjacentToSmallerDegree,
    Always,
}

impl Relation {
    fn holds(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> bool {
        let g = ctx.graph;
        match *self {
            Relation::Adjacent => g.has_edge(x, y),
            Relation::Equal => x == y,
            Relation::DistanceAtMost(k) => ctx.distance(x, y) <= k,
            Relation::DistanceExactly(k) => ctx.distance(x, y) == k,
            Relation::SameDegree => g.degree(x) == g.degree(y),
            Relation::AdjacentToLeaf => g.has_edge(x, y) && g.degree(y) == 1,
            Relation::AdjacentToSmallerDegree => g.has_edge(x, y) && g.degree(x) > g.degree(y),
            Relation::Always => true,
        }
    }
}

/// Isomorphism-invariant nonnegative weights.
#[derive(Debug, Clone, PartialEq)]
pub enum Weight {
    Constant(BigRational),
    SourceDegree,
    TargetDegree,
    /// `1 / deg(x)`.
    InverseSourceDegree,
    Distance,
}

impl Weight {
    fn value(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> BigRational {
        let g = ctx.graph;
        match self {
            Weight::Constant(c) => c.clone(),
            Weight::SourceDegree => int(g.degree(x)),
            Weight::TargetDegree => int(g.degree(y)),
            Weight::InverseSourceDegree => BigRational::new(BigInt::one(), BigInt::from(g.degree(x).max(1))),
            Weight::Distance => int(ctx.distance(x, y)),
        }
    }
}

/// `f(G, x, y) = 1[relation(x, y)] · weight(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorTransport {
    pub relation: Relation,
    pub weight: Weight,
}

impl IndicatorTransport {
    pub fn new(relation: Relation, weight: Weight) -> Result<Self> {
        if let Weight::Constant(c) = &weight {
            if c.is_negative() {
                return Err(Error::InvalidParameter(format!("negative weight {c}")));
            }
        }
        Ok(Self { relation, weight })
    }
}

impl TransportFunction for IndicatorTransport {
    fn eval(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> BigRational {
        if self.relation.holds(ctx, x, y) {
            self.weight.value(ctx, x, y)
        } else {
            BigRational::zero()
        }
    }

    fn name(&self) -> String {
        format!("indicator({:?}, {:?})", self.relation, self.weight)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceKernel {
    /// `2^{-d(x, y)}`.
    Geometric,
    /// `1 / (1 + d(x, y))`.
    Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistanceWeighted(pub DistanceKernel);

impl TransportFunction for DistanceWeighted {
    fn eval(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> BigRational {
        let d = ctx.distance(x, y);
        let den = match self.0 {
            DistanceKernel::Geometric => BigInt::one() << d,
            DistanceKernel::Harmonic => BigInt::from(d + 1),
        };
        BigRational::new(BigInt::one(), den)
    }

    fn name(&self) -> String {
        format!("distance({:?})", self.0)
    }
}

/// Nonnegative linear combination of transport functions.
pub struct Combination {
    terms: Vec<(BigRational, Box<dyn TransportFunction>)>,
}

impl Combination {
    pub fn new(terms: Vec<(BigRational, Box<dyn TransportFunction>)>) -> Result<Self> {
        if let Some((c, _)) = terms.iter().find(|(c, _)| c.is_negative()) {
            return Err(Error::InvalidParameter(format!("negative coefficient {c}")));
        }
        Ok(Self { terms })
    }
}

impl TransportFunction for Combination {
    fn eval(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> BigRational {
        self.terms
            .iter()
            .fold(BigRational::zero(), |acc, (c, f)| acc + c * f.eval(ctx, x, y))
    }

    fn name(&self) -> String {
        let parts: Vec<String> = self.terms.iter().map(|(c, f)| format!("{c}*{}", f.name())).collect();
        parts.join(" + ")
    }
}

/// `f_k(G, x, y) = f(G, x, y)` when `f(G, x, y) <= k` and `d(x, y) <= k`,
/// else 0.
pub struct Truncated<F> {
    inner: F,
    k: BigRational,
}

impl<F: TransportFunction> TransportFunction for Truncated<F> {
    fn eval(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> BigRational {
        let v = self.inner.eval(ctx, x, y);
        if v <= self.k && int(ctx.distance(x, y)) <= self.k {
            v
        } else {
            BigRational::zero()
        }
    }

    fn name(&self) -> String {
        format!("truncate({}, {})", self.inner.name(), self.k)
    }
}

pub fn truncate<F: TransportFunction>(f: F, k: BigRational) -> Result<Truncated<F>> {
    if !k.is_positive() {
        return Err(Error::InvalidParameter(format!("truncation level {k} must be positive")));
    }
    Ok(Truncated { inner: f, k })
}

impl<T: TransportFunction + ?Sized> TransportFunction for &T {
    fn eval(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> BigRational {
        (**self).eval(ctx, x, y)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

impl<T: TransportFunction + ?Sized> TransportFunction for Box<T> {
    fn eval(&self, ctx: &GraphContext<'_>, x: usize, y: usize) -> BigRational {
        (**self).eval(ctx, x, y)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

/// The built-in library of transport functions.
pub fn builtin_transports() -> Vec<Box<dyn TransportFunction>> {
    let one = || Weight::Constant(BigRational::one());
    let ind = |r, w| Box::new(IndicatorTransport { relation: r, weight: w }) as Box<dyn TransportFunction>;
    alloc::vec![
        Box::new(ZeroTransport),
        Box::new(DegreeTransport),
        ind(Relation::Adjacent, one()),
        ind(Relation::Adjacent, Weight::InverseSourceDegree),
        ind(Relation::Adjacent, Weight::TargetDegree),
        ind(Relation::Equal, one()),
        ind(Relation::DistanceAtMost(2), one()),
        ind(Relation::DistanceExactly(2), Weight::SourceDegree),
        ind(Relation::SameDegree, one()),
        ind(Relation::AdjacentToLeaf, one()),
        ind(Relation::AdjacentToSmallerDegree, Weight::SourceDegree),
        ind(Relation::Always, Weight::Distance),
        Box::new(DistanceWeighted(DistanceKernel::Geometric)),
        Box::new(DistanceWeighted(DistanceKernel::Harmonic)),
    ]
}

#[derive(Debug, Clone, PartialEq)]
pub enum RootLaw {
    Uniform,
    /// Probability of each vertex as root.
    Explicit(Vec<BigRational>),
}

/// A probability measure on finitely many rooted finite graphs.
#[derive(Debug, Clone)]
pub struct FiniteRootedMeasure {
    entries: Vec<(Graph, BigRational, RootLaw)>,
}

impl FiniteRootedMeasure {
    pub fn new(entries: Vec<(Graph, BigRational, RootLaw)>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidParameter("empty measure".into()));
        }
        let mut total = BigRational::zero();
        for (g, w, law) in &entries {
            if w.is_negative() {
                return Err(Error::InvalidParameter(format!("negative weight {w}")));
            }
            total += w;
            if let RootLaw::Explicit(p) = law {
                if p.len() != g.n() || p.iter().any(|x| x.is_negative()) {
                    return Err(Error::InvalidParameter("invalid root law".into()));
                }
                if p.iter().fold(BigRational::zero(), |a, b| a + b) != BigRational::one() {
                    return Err(Error::InvalidParameter("root law does not sum to 1".into()));
                }
            }
        }
        if total != BigRational::one() {
            return Err(Error::InvalidParameter(format!("graph weights sum to {total}")));
        }
        Ok(Self { entries })
    }

    /// Equal weights and uniform roots.
    pub fn unbiased(graphs: Vec<Graph>) -> Result<Self> {
        let w = BigRational::new(BigInt::one(), BigInt::from(graphs.len().max(1)));
        Self::new(graphs.into_iter().map(|g| (g, w.clone(), RootLaw::Uniform)).collect())
    }

    /// One graph with its root fixed at `root`.
    pub fn rooted_at(g: Graph, root: usize) -> Result<Self> {
        if root >= g.n() {
            return Err(Error::VertexOutOfRange { vertex: root, n: g.n() });
        }
        let mut p = alloc::vec![BigRational::zero(); g.n()];
        p[root] = BigRational::one();
        Self::new(alloc::vec![(g, BigRational::one(), RootLaw::Explicit(p))])
    }

    pub fn is_unbiased(&self) -> bool {
        self.entries.iter().all(|(g, _, law)| match law {
            RootLaw::Uniform => true,
            RootLaw::Explicit(p) => {
                let u = BigRational::new(BigInt::one(), BigInt::from(g.n()));
                p.iter().all(|x| *x == u)
            }
        })
    }

    pub fn entries(&self) -> &[(Graph, BigRational, RootLaw)] {
        &self.entries
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ImtpResult {
    /// `E[Σ_v f(G, o, v)]`.
    pub lhs: BigRational,
    /// `E[Σ_v f(G, v, o)]`.
    pub rhs: BigRational,
    /// Per-graph root expectations `(lhs, rhs)`, unweighted.
    pub per_graph: Vec<(BigRational, BigRational)>,
}

impl ImtpResult {
    pub fn equal(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn imtp_check<F: TransportFunction + ?Sized>(mu: &FiniteRootedMeasure, f: &F) -> ImtpResult {
    let mut lhs = BigRational::zero();
    let mut rhs = BigRational::zero();
    let mut per_graph = Vec::with_capacity(mu.entries.len());
    for (g, weight, law) in &mu.entries {
        let ctx = GraphContext::new(g);
        let n = g.n();
        let mut out = alloc::vec![BigRational::zero(); n];
        let mut inn = alloc::vec![BigRational::zero(); n];
        for x in 0..n {
            for y in 0..n {
                let v = f.eval(&ctx, x, y);
                if !v.is_zero() {
                    out[x] += &v;
                    inn[y] += v;
                }
            }
        }
        let (gl, gr) = match law {
            RootLaw::Uniform => {
                let nn = int(n);
                let sum = |v: &[BigRational]| v.iter().fold(BigRational::zero(), |a, b| a + b) / &nn;
                (sum(&out), sum(&inn))
            }
            RootLaw::Explicit(p) => {
                let dot = |v: &[BigRational]| {
                    v.iter().zip(p).fold(BigRational::zero(), |a, (x, q)| a + x * q)
                };
                (dot(&out), dot(&inn))
            }
        };
        lhs += weight * &gl;
        rhs += weight * &gr;
        per_graph.push((gl, gr));
    }
    ImtpResult { lhs, rhs, per_graph }
}

/// Whether `f` gives the same values on `g` and on `g` relabeled by `perm`.
pub fn invariance_spot_check<F: TransportFunction + ?Sized>(f: &F, g: &Graph, perm: &[usize]) -> bool {
    let h = g.relabel(perm);
    let (cg, ch) = (GraphContext::new(g), GraphContext::new(&h));
    (0..g.n()).all(|x| (0..g.n()).all(|y| f.eval(&cg, x, y) == f.eval(&ch, perm[x], perm[y])))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub k: BigRational,
    /// `(lhs, rhs)` of the IMTP for `f_k`, one entry per measure.
    pub values: Vec<(BigRational, BigRational)>,
}

impl LimitRow {
    pub fn all_equal(&self) -> bool {
        self.values.iter().all(|(l, r)| l == r)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
}

impl LimitReport {
    pub fn all_equal(&self) -> bool {
        self.rows.iter().all(LimitRow::all_equal)
    }

    /// Values of `f_k` are nondecreasing in `k` for every measure (rows are
    /// taken in increasing `k`).
    pub fn monotone_in_k(&self) -> bool {
        let mut rows: Vec<&LimitRow> = self.rows.iter().collect();
        rows.sort_by(|a, b| a.k.cmp(&b.k));
        rows.windows(2).all(|w| {
            w[0].values.iter().zip(&w[1].values).all(|(a, b)| a.0 <= b.0 && a.1 <= b.1)
        })
    }
}

/// IMTP for `f_k` along a sequence of unbiased measures, for each `k`.
pub fn imtp_limit_consistency<F: TransportFunction>(
    measures: &[FiniteRootedMeasure],
    f: &F,
    ks: &[BigRational],
) -> Result<LimitReport> {
    if let Some(i) = measures.iter().position(|m| !m.is_unbiased()) {
        return Err(Error::Precondition(format!("measure {i} is not unbiased")));
    }
    let mut rows = Vec::with_capacity(ks.len());
    for k in ks {
        let fk = truncate(f, k.clone())?;
        let values = measures
            .iter()
            .map(|m| {
                let r = imtp_check(m, &fk);
                (r.lhs, r.rhs)
            })
            .collect();
        rows.push(LimitRow { k: k.clone(), values });
    }
    Ok(LimitReport { rows })
}
