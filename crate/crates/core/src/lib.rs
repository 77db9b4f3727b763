//! Simulation kernels for a two-dimensional random walk on randomly
//! horizontally-oriented lattices, its embedding into a random walk in
//! random scenery, and the continuum limit objects the rescaled walk
//! converges to.
//!
//! The crate is organized around five building blocks:
//!
//! * [`rng`] — splittable, counter-based random streams and the three
//!   sampling primitives (Rademacher, geometric, Gaussian),
//! * [`lattice`] — the orientation field and the lattice Markov chain,
//! * [`embedding`] — vertical walk, local times, scenery sums, geometric
//!   jump bursts, stopping times and the coupled simulation,
//! * [`limit`] — Brownian paths, occupation-time local time profiles,
//!   the self-similar scenery integral and the dependence constants C(n),
//! * [`stats`] — moment estimates, scaling fits, two-sample KS and the
//!   moment-difference dependence test.
//!
//! Everything is deterministic given a master seed: replica r derives its
//! streams from `RngStream::new(seed, r)`, so results do not depend on
//! thread scheduling or replica completion order.

pub mod embedding;
pub mod lattice;
pub mod limit;
pub mod rng;
pub mod stats;

mod error;

pub use error::{Error, Result};
pub use embedding::{EmbeddedTriple, JumpFamily, LocalTimeTable, VerticalPath};
pub use lattice::{LatticeState, LatticeTrajectory, OrientationField};
pub use limit::{BrownianPath, CnTable, ContinuumLocalTime};
pub use rng::{GeometricParam, RngStream};
