use num_complex::Complex64;

use super::eigen::eigvals_hermitian;
use super::matrix::{self, ComplexMatrix};
use super::subsystems::{apply_to_vector, partial_trace, permute_vector, validate_dims};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-12;
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-12;

/// Pure state on a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex64>,
    dims: Vec<usize>,
}

impl StateVector {
    /// Normalized state; fails if ‖ψ‖ deviates from 1 by more than 1e-12.
    pub fn new(amps: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        let s = Self::unnormalized(amps, dims)?;
        let n = s.norm();
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n));
        }
        Ok(s)
    }

    /// Vector without the normalization check (e.g. projected branches).
    pub fn unnormalized(amps: Vec<Complex64>, dims: Vec<usize>) -> Result<Self> {
        validate_dims(&dims, amps.len())?;
        if amps.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::InvalidArgument("non-finite amplitude".into()));
        }
        Ok(Self { amps, dims })
    }

    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::InvalidArgument(format!("basis index {index} >= {dim}")));
        }
        Self::new(matrix::basis_vector(dim, index), vec![dim])
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        matrix::norm(&self.amps)
    }

    /// ⟨self|other⟩
    pub fn inner(&self, other: &Self) -> Complex64 {
        matrix::inner(&self.amps, &other.amps)
    }

    pub fn kron(&self, other: &Self) -> Self {
        let amps = self.amps.iter().flat_map(|a| other.amps.iter().map(move |b| a * b)).collect();
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        Self { amps, dims }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { amps: self.amps.iter().map(|a| a * s).collect(), dims: self.dims.clone() }
    }

    /// Apply `op` on factors `targets`.
    pub fn apply(&mut self, op: &ComplexMatrix, targets: &[usize]) -> Result<()> {
        apply_to_vector(op, targets, &self.dims, &mut self.amps)
    }

    /// Output factor `j` is input factor `order[j]`.
    pub fn permute(&self, order: &[usize]) -> Result<Self> {
        let amps = permute_vector(&self.amps, &self.dims, order)?;
        Ok(Self { amps, dims: order.iter().map(|&i| self.dims[i]).collect() })
    }

    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amps, &self.amps)
    }

    /// Reduced state on the factors in `keep`.
    pub fn reduced(&self, keep: &[usize]) -> Result<ComplexMatrix> {
        partial_trace(&self.projector(), &self.dims, keep)
    }
}

fn check_hermitian_psd(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let h = m.hermiticity_defect();
    if h > HERMITIAN_TOL {
        return Err(Error::NotHermitian(h));
    }
    let min = eigvals_hermitian(m)?.first().copied().unwrap_or(0.0);
    if min < -PSD_TOL {
        return Err(Error::NotPsd(min));
    }
    Ok(())
}

/// Hermitian, PSD, unit-trace operator with a factor layout.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_hermitian_psd(&mat)?;
        validate_dims(&dims, mat.rows())?;
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        Ok(Self { mat, dims })
    }

    /// Single-factor density matrix.
    pub fn from_matrix(mat: ComplexMatrix) -> Result<Self> {
        let d = mat.rows();
        Self::new(mat, vec![d])
    }

    pub fn pure(state: &StateVector) -> Result<Self> {
        Self::new(state.projector(), state.dims().to_vec())
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { mat: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64), dims: vec![dim] }
    }

    /// Diagonal state from populations; they must be non-negative and sum to 1.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::from_matrix(ComplexMatrix::diagonal(populations))
    }

    /// Hermitian-symmetrised, trace-renormalised wrapper for matrices produced
    /// by exact channel arithmetic, where only round-off separates them from a state.
    pub(crate) fn from_computed(mat: ComplexMatrix, dims: Vec<usize>) -> Self {
        let h = mat.hermitian_part();
        let tr = h.trace().re;
        Self { mat: h.scale_real(1.0 / tr), dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let red = partial_trace(&self.mat, &self.dims, keep)?;
        let mut k = keep.to_vec();
        k.sort_unstable();
        let dims = if k.is_empty() { vec![1] } else { k.iter().map(|&i| self.dims[i]).collect() };
        Ok(Self { mat: red, dims })
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self {
            mat: self.mat.kron(&other.mat),
            dims: self.dims.iter().chain(&other.dims).copied().collect(),
        }
    }

    /// U ρ U†
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        if u.dims() != self.mat.dims() {
            return Err(Error::DimensionMismatch { expected: self.dim(), actual: u.rows() });
        }
        Ok(Self::from_computed(u.matmul(&self.mat).matmul(&u.dagger()), self.dims.clone()))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigvals_hermitian(&self.mat).expect("density matrix is square")
    }
}

/// Post-selected, unnormalised state: Hermitian, PSD, trace in (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalState {
    mat: ComplexMatrix,
    dims: Vec<usize>,
}

impl ConditionalState {
    pub fn new(mat: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_hermitian_psd(&mat)?;
        validate_dims(&dims, mat.rows())?;
        let tr = mat.trace();
        if tr.re <= 0.0 || tr.re > 1.0 + TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidTrace(tr.re));
        }
        Ok(Self { mat, dims })
    }

    /// Hermitian-symmetrised wrapper for exact formula output.
    pub(crate) fn from_computed(mat: ComplexMatrix, dims: Vec<usize>) -> Self {
        Self { mat: mat.hermitian_part(), dims }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Probability of the post-selection that produced this state.
    pub fn trace(&self) -> f64 {
        self.mat.trace().re
    }

    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let red = partial_trace(&self.mat, &self.dims, keep)?;
        let mut k = keep.to_vec();
        k.sort_unstable();
        let dims = if k.is_empty() { vec![1] } else { k.iter().map(|&i| self.dims[i]).collect() };
        Ok(Self { mat: red, dims })
    }

    /// Divide by the trace. Fails for a zero-probability outcome.
    pub fn normalize(&self) -> Result<DensityMatrix> {
        let tr = self.trace();
        if tr <= 0.0 {
            return Err(Error::InvalidTrace(tr));
        }
        Ok(DensityMatrix::from_computed(self.mat.clone(), self.dims.clone()))
    }
}
