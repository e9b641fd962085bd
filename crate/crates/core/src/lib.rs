//! Exact diagonalization of the one-dimensional multi-connected
//! Jaynes-Cummings lattice on a ring.
//!
//! The pipeline is [`basis`] -> [`hamiltonian`] -> [`eigensolver`] ->
//! [`observables`]; [`analytics`] holds the single-site polariton formulas and
//! [`sweep`] drives parameter scans and CSV output.

pub mod analytics;
pub mod basis;
pub mod config;
pub mod eigensolver;
pub mod hamiltonian;
pub mod linalg;
pub mod observables;
pub mod oracle;
pub mod sweep;
pub mod validate;

pub use basis::{enumerate_basis, sector_dimension, BasisState, LatticeSpec, SectorBasis};
pub use config::SweepConfig;
pub use eigensolver::{dense_ground_state, lanczos_ground_state, GroundStateResult, SolverOptions};
pub use hamiltonian::{build_hamiltonian, ModelParams, SparseHamiltonian};
pub use observables::{rho1_profile, Rho1Profile};
pub use sweep::{run_point, run_sweep, ResultRow};
