//! Hermitian eigensolver (cyclic complex Jacobi) and spectral matrix functions.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Column `j` is the eigenvector for `values[j]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    /// V f(Λ) V†
    pub fn map(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mapped: Vec<f64> = self.values.iter().map(|&x| f(x)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| self.vectors[(r, k)] * mapped[k] * self.vectors[(c, k)].conj()).sum()
        })
    }
}

/// Full eigen-decomposition of a Hermitian matrix via cyclic Jacobi rotations.
///
/// Only the Hermitian part of the input is used; call sites that need the input
/// to be Hermitian must check it beforehand.
pub fn eigh(m: &ComplexMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    let n = m.rows();
    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|r| (0..n).filter(move |&c| c != r).map(move |c| (r, c)))
            .map(|(r, c)| a[(r, c)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&x, &y| diag[x].total_cmp(&diag[y]));
    let values = order.iter().map(|&i| diag[i]).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Zero the (p, q) entry with a unitary plane rotation G: A ← G†AG, V ← VG.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let g = a[(p, q)];
    let g_abs = g.norm();
    if g_abs < 1e-300 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // First remove the phase of g, then apply a real symmetric Jacobi rotation.
    let phase = g / g_abs;
    let theta = (aqq - app) / (2.0 * g_abs);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let cq = phase.conj();
    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = cq * -s;
    let gqq = cq * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * gpp + akq * gqp;
        a[(k, q)] = akp * gpq + akq * gqq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = gpp.conj() * apk + gqp.conj() * aqk;
        a[(q, k)] = gpq.conj() * apk + gqq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * gpp + vkq * gqp;
        v[(k, q)] = vkp * gpq + vkq * gqq;
    }
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn eigvals_hermitian(m: &ComplexMatrix) -> Result<Vec<f64>> {
    if m.is_square() && m.is_diagonal(0.0) {
        let mut d = m.diag_real();
        d.sort_by(f64::total_cmp);
        return Ok(d);
    }
    Ok(eigh(m)?.values)
}

/// Principal square root of a PSD matrix; negative round-off eigenvalues are clipped.
pub fn sqrt_psd(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if m.is_square() && m.is_diagonal(0.0) {
        let d: Vec<f64> = m.diag_real().into_iter().map(|x| x.max(0.0).sqrt()).collect();
        return Ok(ComplexMatrix::diagonal(&d));
    }
    Ok(eigh(m)?.map(|x| x.max(0.0).sqrt()))
}

/// Matrix exponential exp(iH) of a Hermitian generator.
pub fn expi_hermitian(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = eigh(h)?;
    let n = e.values.len();
    let phases: Vec<Complex64> = e.values.iter().map(|&x| Complex64::from_polar(1.0, x)).collect();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| {
        (0..n).map(|k| e.vectors[(r, k)] * phases[k] * e.vectors[(c, k)].conj()).sum()
    }))
}

/// Thin QR by modified Gram-Schmidt with one re-orthogonalisation pass.
/// R has a real, non-negative diagonal.
pub fn qr(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let (rows, cols) = m.dims();
    let mut q_cols: Vec<Vec<Complex64>> = Vec::with_capacity(cols);
    let mut r = ComplexMatrix::zeros(cols, cols);
    for j in 0..cols {
        let mut v = m.col(j);
        for _pass in 0..2 {
            for (i, qi) in q_cols.iter().enumerate() {
                let proj: Complex64 = qi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                r[(i, j)] += proj;
                for (x, y) in v.iter_mut().zip(qi) {
                    *x -= proj * y;
                }
            }
        }
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        r[(j, j)] = Complex64::new(nrm, 0.0);
        if nrm > 0.0 {
            v.iter_mut().for_each(|x| *x /= nrm);
        }
        q_cols.push(v);
    }
    let q = ComplexMatrix::from_fn(rows, cols, |i, j| q_cols[j][i]);
    (q, r)
}
