//! Quantum state preparation by unitary evolution, projective or continuous
//! measurements, and quantum Zeno locking.
//!
//! The crate simulates two protocols on top of exact diagonalization:
//!
//! - **FUMES** — fixed unitary evolution and measurements: evolve under a
//!   static Hamiltonian, measure every observable simultaneously at peaks of
//!   the deterministic success probability, succeed only on a full target
//!   match.
//! - **Z-FUMES** — FUMES plus Zeno locking of partially correct outcomes,
//!   which decouples the system into shrinking subspaces and turns the
//!   exponential cost of a full match into a sub-linear one.
//!
//! Both operate on the one-dimensional Bose-Hubbard chain ([`bose_hubbard`],
//! [`strategy`], [`sse`]) and on random GUE Hamiltonians with commuting
//! degenerate observables ([`general_control`]). [`toy_model`] carries the
//! multinomial reshuffling model and the closed-form measurement-count
//! estimates; [`ensemble`] runs reproducible trajectory batches in parallel.

pub mod bose_hubbard;
pub mod ensemble;
pub mod error;
pub mod fock;
pub mod general_control;
mod linalg;
pub mod measurement;
pub mod sse;
pub mod strategy;
pub mod toy_model;

pub use error::Error;

pub type Result<T> = std::result::Result<T, Error>;
