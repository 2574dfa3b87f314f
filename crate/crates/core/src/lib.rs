//! Simulation of four-particle entanglement built by stimulated Raman
//! adiabatic passage (STIRAP) in a two-atom, two-mode cavity, with von
//! Neumann entropy diagnostics along the trajectory.
//!
//! Two three-level atoms in the lambda configuration sit in a lossless
//! two-mode cavity. A counterintuitive Gaussian pulse pair steers the system
//! along a dark state from |g,g,n,mu> towards |f,f,n-2,mu+2>, entangling the
//! atoms with the modes on the way. The crate integrates the amplitude
//! equations, and for every recorded frame evaluates joint entropies, the
//! strong-subadditivity parameter E = S(A,B) + S(A,n) - S(A,B,n) - S(A), the
//! index of correlation, and related checks. The GHZ constructions provide
//! the classic case where E = 0 for a state that is nonetheless entangled.
//!
//! Everything is dimensionless: times are in units of the pulse width tau
//! and rates are multiplied by tau. All functions are pure; values are
//! immutable once built and safe to share across threads.

pub mod dynamics;
pub mod entropy;
mod error;
pub mod model;
pub mod qstate;

pub use error::{Error, Result};
