//! Seeded simulator and verification harness for oriented growth and
//! two-type competition on the first quadrant of the square lattice.
//!
//! All models are driven by one percolation structure: independent rate-1
//! Poisson arrow processes on the edges `x -> x+(1,0)` and `x -> x+(0,1)`.
//!
//! - [`percolation`] generates the arrows, reproducibly per seed and edge.
//! - [`models`] runs oriented Richardson growth, competition, and their
//!   hostile-environment variants, alone or coupled on one stream.
//! - [`dual`] answers the same questions backward in time along reverse paths.
//! - [`fpp`] holds the first-passage-percolation representation, passage-time
//!   DP, time-constant estimates and the embedded diagonal walk.
//! - [`analysis`] checks region containment, extracts radial shape profiles,
//!   finds monochromatic angular sectors and renders snapshots.
//! - [`verify`] bundles the above into named verification suites, and
//!   [`cli`] exposes everything as subcommands.


// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod analysis;
pub mod cli;
pub mod dual;
pub mod error;
pub mod fpp;
pub mod io;
pub mod models;
pub mod percolation;
pub mod rng;
pub mod stats;
pub mod verify;

pub use error::{Error, Result};
pub use models::{CellState, LatticeState, ModelKind};
pub use percolation::{ArrowEvent, DirectedEdge, Direction, EventWindow, LatticeBox, Site};
