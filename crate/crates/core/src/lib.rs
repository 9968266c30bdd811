//! Polynomial loop-invariant generation from sample points.
//!
//! Sample a loop's reachable states, compute the vanishing ideal of the
//! samples with Buchberger-Moeller, and keep the basis elements that pass a
//! randomized divisibility filter followed by an exact consecution check.
//! Loops with symbolic initial values are handled by instantiating the
//! parameters and recovering each coefficient by rational interpolation.

pub mod frontend;
pub mod polyring;
pub mod vanishing;
pub mod executor;
pub mod divisibility;
pub mod ratinterp;
pub mod invgen;
pub mod cli;
