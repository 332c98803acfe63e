//! Shared fixtures for the kernel benchmarks.

use randprod::formulas::{qdrift_sample, ProductFormulaPlan, SeededRng};
use randprod::hamiltonian::Hamiltonian;
use randprod::linalg::{ComplexMatrix, StateVector};

pub fn heisenberg(n: usize) -> Hamiltonian {
    Hamiltonian::heisenberg_1d(n).expect("n >= 2")
}

pub fn qdrift_plan(n: usize, gates: u64) -> (Hamiltonian, ProductFormulaPlan) {
    let hamiltonian = heisenberg(n);
    let mut rng = SeededRng::new(7);
    let plan = qdrift_sample(&hamiltonian, 2.0, gates, &mut rng).expect("valid plan");
    (hamiltonian, plan)
}

/// Deterministic dense Hermitian test matrix.
pub fn dense_hermitian(dim: usize) -> ComplexMatrix {
    let mut rng = SeededRng::new(3);
    let mut matrix = ComplexMatrix::zeros(dim);
    for i in 0..dim {
        for j in i..dim {
            let value = if i == j {
                num_complex::Complex64::new(rng.uniform() - 0.5, 0.0)
            } else {
                num_complex::Complex64::new(rng.uniform() - 0.5, rng.uniform() - 0.5)
            };
            matrix.set(i, j, value);
            matrix.set(j, i, value.conj());
        }
    }
    matrix
}

pub fn uniform_state(n: usize) -> StateVector {
    let dim = 1usize << n;
    let amp = num_complex::Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
    StateVector::new(vec![amp; dim])
}
