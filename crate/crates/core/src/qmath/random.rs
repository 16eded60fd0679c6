use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::eigen::qr;
use super::matrix::ComplexMatrix;
use super::states::{DensityMatrix, StateVector};

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Complex64::new(rng.sample::<f64, _>(StandardNormal) * s, rng.sample::<f64, _>(StandardNormal) * s)
}

/// Ginibre matrix with i.i.d. standard complex normal entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary drawn from `rng`.
///
/// Gram-Schmidt QR of a Ginibre matrix. R comes out with a positive real
/// diagonal, so Q needs no further phase correction.
pub fn random_unitary_with<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim >= 1, "random_unitary: dim must be >= 1");
    qr(&ginibre(dim, dim, rng)).0
}

/// Haar-distributed unitary, deterministic in `seed`.
pub fn random_unitary(dim: usize, seed: u64) -> ComplexMatrix {
    random_unitary_with(dim, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// Haar-random pure state of dimension `dim`.
pub fn random_pure_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let u = random_unitary_with(dim, rng);
    StateVector::new(u.col(0), vec![dim]).expect("unitary column is normalized")
}

/// Hilbert-Schmidt random density matrix G G† / Tr(G G†).
pub fn random_density_matrix<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let g = ginibre(dim, dim, rng);
    let m = g.matmul(&g.dagger());
    let tr = m.trace().re;
    DensityMatrix::from_computed(m.scale_real(1.0 / tr), vec![dim])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dim_one_is_a_phase() {
        let u = random_unitary(1, 5);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitarity_and_determinism() {
        for seed in 0..20 {
            let u = random_unitary(4, seed);
            assert!(u.unitarity_defect() < 1e-10);
            for c in 0..4 {
                let n: f64 = u.col(c).iter().map(|z| z.norm_sqr()).sum();
                assert!((n - 1.0).abs() < 1e-10);
            }
        }
        assert_eq!(random_unitary(3, 42), random_unitary(3, 42));
        assert_ne!(random_unitary(3, 42), random_unitary(3, 43));
    }

    #[test]
    fn haar_first_entry_mean() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 10_000;
        let mean: f64 = (0..n).map(|_| random_unitary_with(2, &mut rng)[(0, 0)].norm_sqr()).sum::<f64>() / n as f64;
        assert!((mean - 0.5).abs() < 0.02, "mean |U00|^2 = {mean}");
    }

    #[test]
    fn random_density_is_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density_matrix(4, &mut rng);
        assert!(DensityMatrix::from_matrix(rho.matrix().clone()).is_ok());
    }
}
