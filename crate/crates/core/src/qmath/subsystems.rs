//! Tensor-factor bookkeeping: partial traces, operator embedding and
//! factor permutation. Factors listed left to right are most to least
//! significant in the composite index.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

pub(crate) fn validate_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::InvalidSubsystems(format!("factor dimensions {dims:?}")));
    }
    let product: usize = dims.iter().product();
    if product != total {
        return Err(Error::InvalidSubsystems(format!(
            "factor dimensions {dims:?} multiply to {product}, expected {total}"
        )));
    }
    Ok(())
}

fn validate_indices(indices: &[usize], n_factors: usize) -> Result<()> {
    for (pos, &i) in indices.iter().enumerate() {
        if i >= n_factors {
            return Err(Error::InvalidSubsystems(format!("factor index {i} out of range ({n_factors} factors)")));
        }
        if indices[..pos].contains(&i) {
            return Err(Error::InvalidSubsystems(format!("factor index {i} repeated")));
        }
    }
    Ok(())
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for i in (0..dims.len()).rev() {
        out[i] = index % dims[i];
        index /= dims[i];
    }
    out
}

/// Trace out every factor not listed in `keep`. The kept factors stay in
/// their original relative order. An empty `keep` gives the 1×1 total trace.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
    }
    validate_dims(dims, m.rows())?;
    validate_indices(keep, dims.len())?;
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep_sorted.contains(i)).collect();
    let kept_dims: Vec<usize> = keep_sorted.iter().map(|&i| dims[i]).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let kept_total: usize = kept_dims.iter().product();
    let traced_total: usize = traced_dims.iter().product();
    let st = strides(dims);

    let offset = |kept_idx: usize, traced_idx: usize| -> usize {
        let kd = digits(kept_idx, &kept_dims);
        let td = digits(traced_idx, &traced_dims);
        keep_sorted.iter().zip(&kd).map(|(&f, &d)| st[f] * d).sum::<usize>()
            + traced.iter().zip(&td).map(|(&f, &d)| st[f] * d).sum::<usize>()
    };
    let kept_offsets: Vec<usize> = (0..kept_total).map(|k| offset(k, 0)).collect();
    let traced_offsets: Vec<usize> = (0..traced_total).map(|t| offset(0, t)).collect();

    let mut out = ComplexMatrix::zeros(kept_total, kept_total);
    for (r, &ro) in kept_offsets.iter().enumerate() {
        for (c, &co) in kept_offsets.iter().enumerate() {
            out[(r, c)] = traced_offsets.iter().map(|&t| m[(ro + t, co + t)]).sum();
        }
    }
    Ok(out)
}

/// Lift `op`, acting on the factors `targets` (in the order given), to the
/// full space described by `dims`.
pub fn embed_operator(op: &ComplexMatrix, targets: &[usize], dims: &[usize]) -> Result<ComplexMatrix> {
    validate_indices(targets, dims.len())?;
    let op_dim: usize = targets.iter().map(|&t| dims[t]).product();
    if op.dims() != (op_dim, op_dim) {
        return Err(Error::DimensionMismatch { expected: op_dim, actual: op.rows() });
    }
    let total: usize = dims.iter().product();
    let st = strides(dims);
    let target_dims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&i| dims[i]).collect();
    let rest_total: usize = rest_dims.iter().product();

    let t_offsets: Vec<usize> = (0..op_dim)
        .map(|k| targets.iter().zip(digits(k, &target_dims)).map(|(&f, d)| st[f] * d).sum())
        .collect();
    let mut out = ComplexMatrix::zeros(total, total);
    for r_idx in 0..rest_total {
        let base: usize = rest.iter().zip(digits(r_idx, &rest_dims)).map(|(&f, d)| st[f] * d).sum();
        for (a, &ao) in t_offsets.iter().enumerate() {
            for (b, &bo) in t_offsets.iter().enumerate() {
                out[(base + ao, base + bo)] = op[(a, b)];
            }
        }
    }
    Ok(out)
}

/// Apply `op` on the factors `targets` of a state vector in place.
pub fn apply_to_vector(op: &ComplexMatrix, targets: &[usize], dims: &[usize], amps: &mut [Complex64]) -> Result<()> {
    validate_dims(dims, amps.len())?;
    validate_indices(targets, dims.len())?;
    let target_dims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let op_dim: usize = target_dims.iter().product();
    if op.dims() != (op_dim, op_dim) {
        return Err(Error::DimensionMismatch { expected: op_dim, actual: op.rows() });
    }
    let st = strides(dims);
    let t_offsets: Vec<usize> = (0..op_dim)
        .map(|k| targets.iter().zip(digits(k, &target_dims)).map(|(&f, d)| st[f] * d).sum())
        .collect();
    let rest: Vec<usize> = (0..dims.len()).filter(|i| !targets.contains(i)).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&i| dims[i]).collect();
    let rest_strides: Vec<usize> = rest.iter().map(|&i| st[i]).collect();
    let rest_total: usize = rest_dims.iter().product();

    let mut buf = vec![ZERO; op_dim];
    let mut counter = vec![0usize; rest.len()];
    let mut base = 0usize;
    for _ in 0..rest_total {
        for (slot, &o) in buf.iter_mut().zip(&t_offsets) {
            *slot = amps[base + o];
        }
        for (a, &ao) in t_offsets.iter().enumerate() {
            amps[base + ao] = op.row(a).iter().zip(&buf).map(|(x, y)| x * y).sum();
        }
        // odometer increment over the untouched factors
        for i in (0..rest.len()).rev() {
            counter[i] += 1;
            base += rest_strides[i];
            if counter[i] < rest_dims[i] {
                break;
            }
            base -= rest_strides[i] * rest_dims[i];
            counter[i] = 0;
        }
    }
    Ok(())
}

/// Reorder factors: output factor `j` is input factor `order[j]`.
pub fn permute_vector(amps: &[Complex64], dims: &[usize], order: &[usize]) -> Result<Vec<Complex64>> {
    validate_dims(dims, amps.len())?;
    if order.len() != dims.len() {
        return Err(Error::InvalidSubsystems(format!("permutation {order:?} for {} factors", dims.len())));
    }
    validate_indices(order, dims.len())?;
    let st = strides(dims);
    let new_dims: Vec<usize> = order.iter().map(|&i| dims[i]).collect();
    Ok((0..amps.len())
        .map(|k| {
            let d = digits(k, &new_dims);
            let src: usize = order.iter().zip(&d).map(|(&f, &x)| st[f] * x).sum();
            amps[src]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::matrix::{basis_vector, pauli_x, ONE};

    #[test]
    fn embed_matches_kron() {
        let x = pauli_x();
        let i2 = ComplexMatrix::identity(2);
        let i3 = ComplexMatrix::identity(3);
        let full = embed_operator(&x, &[1], &[3, 2, 2]).unwrap();
        assert_eq!(full, i3.kron(&x).kron(&i2));
    }

    #[test]
    fn embed_respects_target_order() {
        let a = ComplexMatrix::diagonal(&[1.0, 2.0]);
        let b = ComplexMatrix::diagonal(&[1.0, 3.0]);
        let ab = a.kron(&b);
        let direct = embed_operator(&ab, &[0, 1], &[2, 2]).unwrap();
        let swapped = embed_operator(&ab, &[1, 0], &[2, 2]).unwrap();
        assert_eq!(direct, ab);
        assert_eq!(swapped, b.kron(&a));
    }

    #[test]
    fn apply_matches_embed() {
        let dims = [2, 3, 2];
        let op = ComplexMatrix::from_fn(4, 4, |r, c| num_complex::Complex64::new((r + 2 * c) as f64, r as f64 - c as f64));
        let v: Vec<_> = (0..12).map(|k| num_complex::Complex64::new(k as f64, -(k as f64) / 2.0)).collect();
        let full = embed_operator(&op, &[2, 0], &dims).unwrap();
        let expected = full.apply(&v);
        let mut got = v.clone();
        apply_to_vector(&op, &[2, 0], &dims, &mut got).unwrap();
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn trace_over_everything() {
        let m = ComplexMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4]);
        let t = partial_trace(&m, &[2, 2], &[]).unwrap();
        assert_eq!(t.dims(), (1, 1));
        assert!((t[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_pair_reduces_to_mixed() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let psi = vec![ONE * s, ZERO, ZERO, ONE * s];
        let rho = ComplexMatrix::outer(&psi, &psi);
        let red = partial_trace(&rho, &[2, 2], &[0]).unwrap();
        assert!(red.max_abs_diff(&ComplexMatrix::diagonal(&[0.5, 0.5])) < 1e-15);
    }

    #[test]
    fn invalid_layouts() {
        let m = ComplexMatrix::identity(4);
        assert!(partial_trace(&m, &[2, 3], &[0]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[2]).is_err());
        assert!(partial_trace(&m, &[2, 2], &[0, 0]).is_err());
        assert!(embed_operator(&pauli_x(), &[0], &[3, 2]).is_err());
    }

    #[test]
    fn permute_swaps_factors() {
        // |0⟩⊗|2⟩ in dims (2,3) becomes |2⟩⊗|0⟩ in dims (3,2)
        let v = basis_vector(6, 2);
        let p = permute_vector(&v, &[2, 3], &[1, 0]).unwrap();
        assert_eq!(p, basis_vector(6, 4));
    }
}
