//! Classical and quantum equilibria of finite normal-form games.
//!
//! - [`game`]: games, mixed profiles, joint distributions, Nash and correlated regret.
//! - [`solve`]: support enumeration for two-player games and the correlated-equilibrium LP.
//! - [`state`]: density matrices, local Kraus channels and classical-to-quantum lifts.
//! - [`equilibrium`]: quantum utilities and the certified best local deviation
//!   (a POVM problem solved with [`sdp`]).
//! - [`sampling`]: approximate Nash equilibria from samples of a hidden equilibrium.
//! - [`query`] and [`eol`]: a state-vector query-model simulator with hybrid-argument
//!   checks, and END-OF-THE-LINE instances.
//! - [`io`] and [`repro`]: JSON file formats and the reference-value report.
//!
//! Joint strategies are indexed row-major with player 0 varying slowest.

pub mod eol;
pub mod equilibrium;
pub mod error;
pub mod examples;
pub mod game;
pub mod io;
pub mod linalg;
pub mod query;
pub mod repro;
pub mod rng;
pub mod sampling;
pub mod sdp;
pub mod solve;
pub mod state;
pub mod tolerance;

pub use error::{Error, Result};
