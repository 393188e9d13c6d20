//! Planar lattice sums over root-vector sets, their asymptotic expansions,
//! and the special functions and quadrature those expansions rest on.
//!
//! The central object is
//!
//! ```text
//! F_n(Φ) = Σ_{(j,k) ≠ (0,0)} 1/ψ(2πj/n, 2πk/n),   ψ(x) = 1 − (1/|Φ|) Σ cos(s_ℓ·x)
//! ```
//!
//! which is `2|Φ|·tr(ℒ⁺)` for the Laplacian of the matching torus graph.

pub mod asymptotics;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod quadrature;
pub mod special;
pub mod summation;
pub mod sums;

pub use asymptotics::{ErrorOrder, ExpansionTerms, ResidualReport};
pub use error::{Error, Result};
pub use graph::TorusGraph;
pub use lattice::{BoxRadius, GridDomain, GridPoint, LatticeSpec, Parity, Point, QuadraticForm};
pub use special::ComplexValue;
pub use sums::{fn_direct, fn_f1_assembled, gn_digamma, gn_direct, hn_direct, un_direct, Method, SumResult};
