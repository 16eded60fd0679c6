use super::eigen::{eigvals_hermitian, sqrt_psd};
use super::states::DensityMatrix;
use crate::error::{Error, Result};

fn check_dims(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), actual: b.dim() });
    }
    Ok(())
}

/// ½ Σ |λ(a − b)|
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a, b)?;
    let diff = a.matrix() - b.matrix();
    let spectrum = eigvals_hermitian(&diff)?;
    Ok(0.5 * spectrum.iter().map(|x| x.abs()).sum::<f64>())
}

/// Uhlmann fidelity Tr √(√a b √a) (not squared).
pub fn fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    check_dims(a, b)?;
    let sa = sqrt_psd(a.matrix())?;
    let inner = sa.matmul(b.matrix()).matmul(&sa).hermitian_part();
    let f: f64 = eigvals_hermitian(&inner)?.iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok(f.min(1.0))
}
