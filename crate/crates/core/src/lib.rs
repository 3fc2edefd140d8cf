//! Finite-depth Pascal–Bratteli diagrams and their generalized one- and
//! two-sided stationary relatives: explicit edge orderings, the Vershik
//! successor dynamics, and exact tail-invariant measures.
//!
//! The crate is organized by object:
//! - [`diagram`]: the three diagram families, path counting, enumeration;
//! - [`orders`]: {0,1} fiber orderings — canonical, ray-guided, comb-segment,
//!   barrier-based — with their structural audits;
//! - [`vershik`]: successor/predecessor dynamics, tower orbits, barrier DP;
//! - [`measures`]: exact Bernoulli and eigenvector measures and a sampler;
//! - [`subdiagrams`]: concentration-band subdiagrams and measure extension;
//! - [`descriptor`]: JSON/CSV serialization of configurations and results;
//! - [`dot`]: DOT rendering of diagrams and orders;
//! - [`verify`]: the named acceptance checks behind the CLI's `verify`.

pub mod descriptor;
pub mod diagram;
pub mod dot;
pub mod error;
pub mod measures;
pub mod orders;
pub mod subdiagrams;
pub mod verify;
pub mod vershik;

pub use error::{Error, Result};
