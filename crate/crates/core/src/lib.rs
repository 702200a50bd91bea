//! Constructive tooling for bounded-degree planar graphs and their local limits.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only the algorithms:
//!
//! * [`graph`] and [`canon`]: rooted graphs, closed balls, exact canonical codes
//!   and the ball-agreement metric on rooted graphs.
//! * [`planar`]: rotation-system maps, face tracing and triangulation checks.
//! * [`generators`]: grids, trees, hexagonal patches, substitution trees, tree
//!   gluings, the quadrilateral subdivision map, face triangulation and random
//!   bounded-degree triangulations.
//! * [`packing`]: circle packings of triangulations (radii, layout,
//!   normalization, ring ratios).
//! * [`supported`]: isolation radii, `(δ,s)`-supported points, random nested
//!   square tilings, the flow bound and cities.
//! * [`walks`]: non-return probabilities, return probabilities and growth
//!   exponents.
//! * [`convergence`]: rooted-ball censuses and total-variation diagnostics.
//! * [`transport`]: transport functions, truncation and the intrinsic mass
//!   transport check.
//!
//! File formats, reports, parallel sweeps and the command line live in the
//! `planar-limits` companion crate.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod canon;
pub mod convergence;
pub mod error;
pub mod generators;
pub mod graph;
pub mod packing;
pub mod planar;
pub mod supported;
pub mod transport;
pub mod walks;

pub use canon::{canonical_code, rooted_distance, BallCode};
pub use error::{Error, Result};
pub use graph::{Graph, RootedGraph};
pub use packing::{BoundaryCondition, Packing};
pub use planar::PlanarMap;
pub use supported::{PointSet, Square, TilingHierarchy};
