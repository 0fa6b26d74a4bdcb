//! Lazy random walk on `{0, …, N}` whose missing boundary steps are
//! redistributed by a pair of laws `ν0`, `νN`.
//!
//! The crate has an exact layer ([`chain`], [`oracle`]), closed forms
//! ([`spectral`]), explicit couplings ([`coupling`]) and a seeded Monte Carlo
//! harness ([`montecarlo`]).

pub mod acceptance;
pub mod chain;
pub mod coupling;
pub mod montecarlo;
pub mod oracle;
pub mod report;
pub mod spectral;

pub use chain::{Boundary, ChainSpec, Law, PointMassSpec, ProbVector, Site, SpecError};
pub use oracle::{tv, TvCurve};
pub use spectral::{l0_of, lambda_of};
