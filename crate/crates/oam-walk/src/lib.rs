//! Discrete-time quantum walk in the joint polarization ⊗ orbital-angular-momentum
//! (OAM) space of a light beam, simulated at three equivalent levels of
//! description:
//!
//! - [`walk`] — the abstract coined walk: Hadamard coin, conditional shift on
//!   the OAM lattice, probability distributions and spread statistics;
//! - [`jones`] — the classical-field layer: Jones vectors expanded over OAM,
//!   wave-plate and q-plate matrices, and their compilation into exact
//!   mode-space operators;
//! - [`coherent`] / [`fock`] — the quantum description of the laser
//!   realization: coherent-state amplitudes per mode, and a small (≤ 2 photon)
//!   Fock engine that reproduces two-photon Hong–Ou–Mandel bunching after two
//!   round trips.
//!
//! The [`ring`] module models the ring-interferometer realization, where each
//! round trip applies one walk step and a beam splitter taps a fraction of the
//! circulating power to a windowed OAM-spectrum detector.
//!
//! One convention is used throughout: the coin basis vector ↑ is identified
//! with right circular polarization R and ↓ with L. Under this identification
//! a q-plate followed by a quarter-wave plate at 45° acts exactly as the walk
//! step (coin after shift); see [`jones::factorization_check`].

pub mod batch;
pub mod cli;
pub mod coherent;
pub mod config;
pub mod fock;
pub mod jones;
pub mod mat2;
pub mod output;
pub mod ring;
pub mod walk;

pub use num_complex::Complex64 as C64;

/// Per-operation numerical tolerance (one matrix application, one step).
pub const TOL_OP: f64 = 1e-12;

/// Accumulated tolerance for quantities built up over many operations.
pub const TOL_ACC: f64 = 1e-10;
