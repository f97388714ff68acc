//! Exact diagonalization, free-magnon asymptotics and operator-inequality
//! certificates for the ferromagnetic quantum Heisenberg model.
//!
//! The crate is organised bottom-up:
//!
//! * [`spin`], [`lattice`], [`basis`], [`operator`] and [`hilbert`] build magnon
//!   sector bases and assemble every Hamiltonian-like operator as a sparse matrix.
//! * [`thermo`] and [`gibbs`] turn sector spectra into free energies, gaps and
//!   variational bounds.
//! * [`magnon`] holds the closed-form free-boson quantities and the assembled
//!   finite-temperature envelopes.
//! * [`bound`] certifies operator inequalities on small systems.

pub mod basis;
pub mod bound;
pub mod certificate;
pub mod error;
pub mod exec;
pub mod gibbs;
pub mod hilbert;
pub mod lanczos;
pub mod lattice;
pub mod linalg;
pub mod magnon;
pub mod operator;
pub mod pauli;
pub mod quadrature;
pub mod rng;
pub mod spin;
pub mod thermo;

pub use basis::{MagnonSectorBasis, SiteCap};
pub use certificate::{InequalityCertificate, Verdict};
pub use error::{Error, Result};
pub use exec::Execution;
pub use lattice::{Boundary, SpinLattice};
pub use operator::{DiagonalProjector, HermitianOperator};
pub use spin::SpinMagnitude;
