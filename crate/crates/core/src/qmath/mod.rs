//! Dense complex linear algebra: matrices, states, partial traces,
//! distance measures and Haar-random unitaries.

mod eigen;
mod matrix;
mod measures;
mod random;
mod states;
mod subsystems;

pub use eigen::{eigh, eigvals_hermitian, expi_hermitian, qr, sqrt_psd, HermitianEigen};
pub use matrix::{basis_vector, cyclic_shift, inner, norm, pauli_x, ComplexMatrix, I, ONE, ZERO};
pub use measures::{fidelity, trace_distance};
pub use random::{ginibre, random_density_matrix, random_pure_state, random_unitary, random_unitary_with};
pub use states::{ConditionalState, DensityMatrix, StateVector, HERMITIAN_TOL, NORM_TOL, PSD_TOL, TRACE_TOL};
pub use subsystems::{apply_to_vector, embed_operator, partial_trace, permute_vector};

/// Kronecker product of two matrices.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

pub fn dagger(a: &ComplexMatrix) -> ComplexMatrix {
    a.dagger()
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> crate::Result<ComplexMatrix> {
    a.try_matmul(b)
}

pub fn is_unitary(a: &ComplexMatrix, tol: f64) -> bool {
    a.is_unitary(tol)
}
