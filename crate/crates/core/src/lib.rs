//! cubecore: a combinatorial engine for finite CAT(0) cube complexes and
//! finite windows of their universal covers.
//!
//! The engine works throughout in the 1-skeleton (median graph) model with
//! the edge-count metric. Cubes are never stored: a complex is a graph whose
//! walls are the theta classes of its edges, and every induced cube subgraph
//! is implicitly filled. The main subsystems:
//!
//! - [`pocset`]: half-space systems as posets with involution, the dual
//!   complex construction, and the duality round trips.
//! - [`graph`]: the [`graph::CubeGraph`] model with wall decomposition,
//!   distances, intervals, medians, hulls and dimension.
//! - [`walls`]: crossing analytics, product decomposition, strong separation,
//!   sectors, pencils, facing triples, and the Helly intersection point.
//! - [`quotients`]: restriction and orbit quotients, essential / half-essential
//!   / trivial wall classification, essential cores and pruning.
//! - [`actions`]: group elements as (partial) automorphisms, and the certified
//!   searches: skewer, flip, double skewer, contracting, Schottky, regular
//!   elements, and the rank-rigidity driver.
//! - [`develop`]: building convex windows of universal covers of finite
//!   nonpositively curved complexes, with deck transformations.
//! - [`cert`]: serializable certificates and the independent checker.
//! - [`format`]: JSON schemas for every file the CLI reads or writes.

pub mod actions;
pub mod bitset;
pub mod cert;
pub mod develop;
pub mod format;
pub mod generate;
pub mod graph;
pub mod pocset;
pub mod quotients;
pub mod walls;

pub use graph::{CubeGraph, Halfspace, Wall};
pub use pocset::Pocset;

use thiserror::Error;

/// Error type shared by every subsystem.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid pocset: {0}")]
    InvalidPocset(String),
    #[error("invalid group element: {0}")]
    InvalidAutomorphism(String),
    #[error("invalid base complex: {0}")]
    InvalidBase(String),
    #[error("invalid input file: {0}")]
    InvalidFormat(String),
    #[error("certificate rejected: {0}")]
    CertificateRejected(String),
    #[error("size budget exceeded: {0}")]
    BudgetExceeded(String),
}

/// Shorthand for results from this crate.
pub type Result<T> = std::result::Result<T, Error>;
