//! Semidefinite relaxation and rounding for maximum k- versus l-colouring.
//!
//! The pipeline: [`graph`] holds instances and exact colouring values,
//! [`sdp`] solves the vector relaxation, [`round`] and [`derand`] turn vectors
//! into colourings, [`alpha`] computes the rounding constants, [`oracle`]
//! supplies brute-force ground truth, and [`gadget`] builds the reductions.

pub mod alpha;
pub mod derand;
pub mod error;
pub mod gadget;
pub mod gaussian;
pub mod graph;
pub mod oracle;
pub mod quadrature;
pub mod rng;
pub mod round;
pub mod sdp;

pub use error::{Error, ParseError, Result};
pub use graph::{colouring_value, Colouring, Graph, Value};
pub use sdp::{solve_relaxation, GramSolution, SolverOptions};
