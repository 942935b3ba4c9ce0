//! Generalized Landau-Pollak uncertainty bounds.
//!
//! For effects `0 <= A_i <= 1` and any state `rho` the crate evaluates
//!
//! * the pair bound `<A> + <B> <= 1 + ||A^{1/2} B^{1/2}||`,
//! * the multi-effect bound `sum_i <A_i> <= 1 + (sum_{i != j} ||A_i^{1/2} A_j^{1/2}||^2)^{1/2}`,
//!
//! together with the block dilations that turn effects into projections, the
//! Gram-matrix eigenvalue bound they rest on, mutually unbiased bases in
//! dimension 2 and odd prime dimensions, and a separability test built from
//! correlated MUB measurements on two qudits.
//!
//! The `lp` binary drives randomized verification campaigns over all of these.

pub mod bounds;
pub mod campaign;
pub mod cli;
pub mod dilation;
pub mod error;
pub mod linalg;
pub mod mub;
pub mod quantum;
pub mod separability;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use quantum::{Effect, Povm, Pvm, State};
