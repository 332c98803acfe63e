//! Randomized product formulas for Hamiltonian simulation, with exact
//! desk-scale error metrics and Monte Carlo verification of the bias,
//! concentration, and saturation bounds that govern them.
//!
//! The crate is organized around five layers:
//!
//! * [`linalg`] — dense complex kernels: Hermitian eigendecomposition,
//!   `exp(-i theta H)`, operator norm, and the exact diamond distance
//!   between unitary channels.
//! * [`hamiltonian`] — weighted Pauli-string (or dense Hermitian) terms,
//!   strength statistics `(lambda, Lambda, p_j)`, and named model builders.
//! * [`formulas`] — plan construction: qDRIFT sampling, first-order
//!   Trotter, Suzuki recursion, randomly permuted Suzuki; realization as
//!   dense unitaries or fast statevector sweeps.
//! * [`metrics`] — worst-case / fixed-input error metrics and the
//!   closed-form bias, tail, and gate-count bounds.
//! * [`experiments`] — seeded Monte Carlo harness emitting tidy CSV/JSON
//!   result tables.

pub mod error;
pub mod experiments;
pub mod formulas;
pub mod hamiltonian;
pub mod linalg;
pub mod metrics;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianEigen, StateVector};

/// Complex scalar used throughout.
pub type Complex = num_complex::Complex64;
