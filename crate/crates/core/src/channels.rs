//! Thermalising unitaries, Kraus extraction and the freedom in choosing a
//! Kraus representation.
//!
//! Two-party interaction unitaries act on probe ⊗ bath with the probe as the
//! most significant factor. Kraus operators are stored with the bath weight
//! folded in, K_{kl} = √c_l ⟨k|U|l⟩, so completeness is checkable on its own.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{partial_trace, ComplexMatrix, DensityMatrix, ONE, ZERO};

pub const COMPLETENESS_TOL: f64 = 1e-10;
pub const UNITARY_TOL: f64 = 1e-10;
/// Operators with Frobenius norm below this are dropped.
pub const PRUNE_NORM: f64 = 1e-14;

/// A Kraus operator labelled by the (output bath index k, input bath index l) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausOperator {
    pub label: (usize, usize),
    pub op: ComplexMatrix,
}

/// Completeness-checked operator-sum representation.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    index_dims: (usize, usize),
    ops: Vec<KrausOperator>,
}

impl KrausSet {
    /// Unlabelled operators; operator j gets label (j, 0).
    pub fn new(ops: Vec<ComplexMatrix>) -> Result<Self> {
        let n = ops.len();
        let labelled = ops.into_iter().enumerate().map(|(j, op)| KrausOperator { label: (j, 0), op }).collect();
        Self::labelled(labelled, (n, 1))
    }

    /// Operators with (k, l) labels drawn from a `index_dims.0 × index_dims.1` grid.
    /// Missing grid entries are zero operators.
    pub fn labelled(ops: Vec<KrausOperator>, index_dims: (usize, usize)) -> Result<Self> {
        let first = ops.first().ok_or_else(|| Error::InvalidArgument("empty Kraus set".into()))?;
        let dim = first.op.rows();
        for k in &ops {
            if k.op.dims() != (dim, dim) {
                return Err(Error::DimensionMismatch { expected: dim, actual: k.op.rows() });
            }
            if k.label.0 >= index_dims.0 || k.label.1 >= index_dims.1 {
                return Err(Error::InvalidArgument(format!("label {:?} outside {:?}", k.label, index_dims)));
            }
        }
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &ops {
            sum = &sum + &k.op.dagger().matmul(&k.op);
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if defect > COMPLETENESS_TOL {
            return Err(Error::IncompleteKraus(defect));
        }
        Ok(Self { dim, index_dims, ops })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn index_dims(&self) -> (usize, usize) {
        self.index_dims
    }

    pub fn operators(&self) -> &[KrausOperator] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Operator with label (k, l), if it survived pruning.
    pub fn get(&self, k: usize, l: usize) -> Option<&ComplexMatrix> {
        self.ops.iter().find(|o| o.label == (k, l)).map(|o| &o.op)
    }
}

/// Unitary acting on the Kraus index k, relating two representations of one channel.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationUnitary(ComplexMatrix);

impl RepresentationUnitary {
    pub fn new(u: ComplexMatrix) -> Result<Self> {
        let defect = u.unitarity_defect();
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self(u))
    }

    pub fn identity(d: usize) -> Self {
        Self(ComplexMatrix::identity(d))
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }
}

/// Σ_{k,l} |k⟩_S⟨l|_S ⊗ |l⟩_B⟨k|_B: exchanges probe and bath states.
pub fn swap_thermalizer(d: usize) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(d * d, d * d);
    for s in 0..d {
        for b in 0..d {
            u[(b * d + s, s * d + b)] = ONE;
        }
    }
    u
}

/// Eigen-decomposition of the bath state as (weight, eigenvector) pairs.
/// Diagonal states keep the standard basis so labels match energy indices.
fn bath_spectrum(bath: &DensityMatrix) -> Result<Vec<(f64, Vec<Complex64>)>> {
    let m = bath.matrix();
    let d = m.rows();
    if m.is_diagonal(0.0) {
        return Ok((0..d).map(|l| (m[(l, l)].re, crate::qmath::basis_vector(d, l))).collect());
    }
    let e = crate::qmath::eigh(m)?;
    Ok(e.values.iter().enumerate().map(|(l, &c)| (c, e.vectors.col(l))).collect())
}

fn check_interaction(u: &ComplexMatrix, bath_dim: usize) -> Result<usize> {
    if !u.is_square() || !u.rows().is_multiple_of(bath_dim) {
        return Err(Error::DimensionMismatch { expected: bath_dim, actual: u.rows() });
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary(defect));
    }
    Ok(u.rows() / bath_dim)
}

/// Weighted Kraus operators √c_l ⟨k|U|l⟩ of the channel ρ_S ↦ Tr_B{U(ρ_S⊗ρ_B)U†}.
pub fn kraus_from_unitary(u: &ComplexMatrix, bath: &DensityMatrix) -> Result<KrausSet> {
    let db = bath.dim();
    let ds = check_interaction(u, db)?;
    let spectrum = bath_spectrum(bath)?;
    let mut ops = Vec::new();
    for (l, (c, e_l)) in spectrum.iter().enumerate() {
        let weight = c.max(0.0).sqrt();
        for k in 0..db {
            let op = ComplexMatrix::from_fn(ds, ds, |s, sp| {
                let row = u.row(s * db + k);
                weight * (0..db).map(|m| row[sp * db + m] * e_l[m]).sum::<Complex64>()
            });
            if op.frobenius_norm() >= PRUNE_NORM {
                ops.push(KrausOperator { label: (k, l), op });
            }
        }
    }
    KrausSet::labelled(ops, (db, db))
}

/// Σ_j K_j ρ K_j†
pub fn apply_kraus(ks: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ks.dim() {
        return Err(Error::DimensionMismatch { expected: ks.dim(), actual: rho.dim() });
    }
    let mut out = ComplexMatrix::zeros(ks.dim(), ks.dim());
    for k in ks.operators() {
        out = &out + &k.op.matmul(rho.matrix()).matmul(&k.op.dagger());
    }
    Ok(DensityMatrix::from_computed(out, rho.dims().to_vec()))
}

/// K'_{kl} = Σ_s u_{ks} K_{sl}: another representation of the same channel.
pub fn transform_representation(ks: &KrausSet, u: &RepresentationUnitary) -> Result<KrausSet> {
    let (kd, ld) = ks.index_dims();
    if u.dim() != kd {
        return Err(Error::DimensionMismatch { expected: kd, actual: u.dim() });
    }
    let um = u.matrix();
    let mut ops = Vec::new();
    for l in 0..ld {
        for k in 0..kd {
            let mut acc = ComplexMatrix::zeros(ks.dim(), ks.dim());
            for s in 0..kd {
                if let Some(op) = ks.get(s, l) {
                    if um[(k, s)] != ZERO {
                        acc = &acc + &op.scale(um[(k, s)]);
                    }
                }
            }
            if acc.frobenius_norm() >= PRUNE_NORM {
                ops.push(KrausOperator { label: (k, l), op: acc });
            }
        }
    }
    KrausSet::labelled(ops, (kd, ld))
}

/// Tr_B{U(ρ_S ⊗ ρ_B)U†} evaluated by global conjugation.
pub fn apply_unitary_channel(u: &ComplexMatrix, rho: &DensityMatrix, bath: &DensityMatrix) -> Result<DensityMatrix> {
    let db = bath.dim();
    let ds = check_interaction(u, db)?;
    if rho.dim() != ds {
        return Err(Error::DimensionMismatch { expected: ds, actual: rho.dim() });
    }
    let joint = rho.matrix().kron(bath.matrix());
    let out = u.matmul(&joint).matmul(&u.dagger());
    let red = partial_trace(&out, &[ds, db], &[0])?;
    Ok(DensityMatrix::from_computed(red, rho.dims().to_vec()))
}

/// Effective single operator T = Tr_B{U(𝕀_S ⊗ ρ_B)}; the cross-term between
/// two independently controlled channels is T⁰ ρ_S T¹†.
pub fn effective_operator(u: &ComplexMatrix, bath: &DensityMatrix) -> Result<ComplexMatrix> {
    let db = bath.dim();
    let ds = check_interaction(u, db)?;
    let product = u.matmul(&ComplexMatrix::identity(ds).kron(bath.matrix()));
    partial_trace(&product, &[ds, db], &[0])
}

fn check_eta(eta: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::OutOfRange { name: "eta", value: eta });
    }
    Ok(())
}

/// Generalized-amplitude-damping interaction on probe ⊗ bath qubit, basis
/// |00⟩, |01⟩, |10⟩, |11⟩ with the probe most significant.
pub fn gadc_unitary(eta: f64) -> Result<ComplexMatrix> {
    check_eta(eta)?;
    let a = (1.0 - eta).sqrt();
    let b = eta.sqrt();
    #[rustfmt::skip]
    let m = [
        1.0, 0.0, 0.0, 0.0,
        0.0, a,   b,   0.0,
        0.0, -b,  a,   0.0,
        0.0, 0.0, 0.0, 1.0,
    ];
    ComplexMatrix::from_real(4, 4, &m)
}

/// GADC interaction extended by the identity on the purification ancilla;
/// factors (probe, bath qubit, ancilla).
pub fn gadc_on_purified(eta: f64) -> Result<ComplexMatrix> {
    Ok(gadc_unitary(eta)?.kron(&ComplexMatrix::identity(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{basis_vector, pauli_x, random_density_matrix, random_unitary, trace_distance, StateVector};
    use crate::thermal::{gibbs_state, purify, HamiltonianSpec, Temperature};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn qubit() -> HamiltonianSpec {
        HamiltonianSpec::qubit(1.0).unwrap()
    }

    fn t(x: f64) -> Temperature {
        Temperature::from_t(x).unwrap()
    }

    #[test]
    fn swap_action() {
        let u = swap_thermalizer(2);
        // |0⟩_S|1⟩_B = index 1 → |1⟩_S|0⟩_B = index 2
        assert_eq!(u.apply(&basis_vector(4, 1)), basis_vector(4, 2));
        assert_eq!(u.matmul(&u), ComplexMatrix::identity(4));
        assert!(swap_thermalizer(3).is_unitary(1e-15));
    }

    #[test]
    fn swap_thermalises_any_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let h = HamiltonianSpec::new(vec![0.0, 0.4, 1.3]).unwrap();
        let bath = gibbs_state(&h, t(0.8));
        for _ in 0..10 {
            let rho = random_density_matrix(3, &mut rng);
            let out = apply_unitary_channel(&swap_thermalizer(3), &rho, &bath).unwrap();
            assert!(trace_distance(&out, &bath).unwrap() < 1e-12);
        }
    }

    #[test]
    fn swap_kraus_operators() {
        let bath = gibbs_state(&qubit(), t(1.0));
        let ks = kraus_from_unitary(&swap_thermalizer(2), &bath).unwrap();
        let c = bath.matrix().diag_real();
        assert_eq!(ks.len(), 4);
        for k in 0..2 {
            for l in 0..2 {
                // √c_l |l⟩⟨k|
                let expected = ComplexMatrix::outer(&basis_vector(2, l), &basis_vector(2, k)).scale_real(c[l].sqrt());
                assert!(ks.get(k, l).unwrap().max_abs_diff(&expected) < 1e-15);
            }
        }
    }

    #[test]
    fn identity_interaction() {
        let bath = gibbs_state(&qubit(), t(2.0));
        let ks = kraus_from_unitary(&ComplexMatrix::identity(4), &bath).unwrap();
        // off-diagonal labels vanish and are pruned; survivors are all ∝ 𝕀
        assert_eq!(ks.len(), 2);
        for k in ks.operators() {
            assert_eq!(k.label.0, k.label.1);
            let scale = k.op[(0, 0)];
            assert!(k.op.max_abs_diff(&ComplexMatrix::identity(2).scale(scale)) < 1e-15);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density_matrix(2, &mut rng);
        assert!(apply_kraus(&ks, &rho).unwrap().matrix().max_abs_diff(rho.matrix()) < 1e-15);
    }

    #[test]
    fn gadc_kraus_matches_global() {
        let bath = gibbs_state(&qubit(), t(1.0));
        let u = gadc_unitary(0.5).unwrap();
        let ks = kraus_from_unitary(&u, &bath).unwrap();
        let excited = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        let via_kraus = apply_kraus(&ks, &excited).unwrap();
        let global = apply_unitary_channel(&u, &excited, &bath).unwrap();
        assert!(via_kraus.matrix().max_abs_diff(global.matrix()) < 1e-12);
    }

    #[test]
    fn kraus_rejects_non_unitary() {
        let bath = gibbs_state(&qubit(), t(1.0));
        let bad = ComplexMatrix::diagonal(&[1.0, 1.0, 1.0, 0.5]);
        assert!(matches!(kraus_from_unitary(&bad, &bath), Err(Error::NotUnitary(_))));
    }

    #[test]
    fn non_diagonal_bath_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let bath = random_density_matrix(2, &mut rng);
        let u = random_unitary(4, 3);
        let ks = kraus_from_unitary(&u, &bath).unwrap();
        let rho = random_density_matrix(2, &mut rng);
        let a = apply_kraus(&ks, &rho).unwrap();
        let b = apply_unitary_channel(&u, &rho, &bath).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn incomplete_sets_are_rejected() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        assert!(matches!(KrausSet::new(vec![half]), Err(Error::IncompleteKraus(_))));
        assert!(KrausSet::new(vec![]).is_err());
        let ks = KrausSet::new(vec![ComplexMatrix::identity(2)]).unwrap();
        assert!(apply_kraus(&ks, &DensityMatrix::maximally_mixed(3)).is_err());
    }

    #[test]
    fn representation_identity_is_noop() {
        let bath = gibbs_state(&qubit(), t(1.0));
        let ks = kraus_from_unitary(&swap_thermalizer(2), &bath).unwrap();
        let same = transform_representation(&ks, &RepresentationUnitary::identity(2)).unwrap();
        assert_eq!(same, ks);
    }

    #[test]
    fn representation_x_preserves_channel() {
        let bath = gibbs_state(&qubit(), t(1.0));
        let ks = kraus_from_unitary(&swap_thermalizer(2), &bath).unwrap();
        let ux = RepresentationUnitary::new(pauli_x()).unwrap();
        let kx = transform_representation(&ks, &ux).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(50);
        for _ in 0..50 {
            let rho = random_density_matrix(2, &mut rng);
            let a = apply_kraus(&ks, &rho).unwrap();
            let b = apply_kraus(&kx, &rho).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        }
    }

    #[test]
    fn representation_under_swap_is_probe_prerotation() {
        // Σ_s u_{ks}|l⟩⟨s| = |l⟩⟨k|·u, i.e. the Kraus set of SWAP·(u ⊗ 𝕀)
        let h = HamiltonianSpec::new(vec![0.0, 0.5, 1.0]).unwrap();
        let bath = gibbs_state(&h, t(1.5));
        let swap = swap_thermalizer(3);
        let u = random_unitary(3, 77);
        let rotated = transform_representation(
            &kraus_from_unitary(&swap, &bath).unwrap(),
            &RepresentationUnitary::new(u.clone()).unwrap(),
        )
        .unwrap();
        let prerotated = kraus_from_unitary(&swap.matmul(&u.kron(&ComplexMatrix::identity(3))), &bath).unwrap();
        for k in 0..3 {
            for l in 0..3 {
                let a = rotated.get(k, l).unwrap();
                let b = prerotated.get(k, l).unwrap();
                assert!(a.max_abs_diff(b) < 1e-12);
            }
        }
    }

    #[test]
    fn representation_invariance_random() {
        let h = HamiltonianSpec::new(vec![0.0, 0.7, 1.1]).unwrap();
        let bath = gibbs_state(&h, t(0.9));
        let ks = kraus_from_unitary(&random_unitary(9, 5), &bath).unwrap();
        let u = RepresentationUnitary::new(random_unitary(3, 6)).unwrap();
        let kt = transform_representation(&ks, &u).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        for _ in 0..20 {
            let rho = random_density_matrix(3, &mut rng);
            assert!(apply_kraus(&ks, &rho).unwrap().matrix().max_abs_diff(apply_kraus(&kt, &rho).unwrap().matrix()) < 1e-12);
        }
        assert!(transform_representation(&ks, &RepresentationUnitary::identity(2)).is_err());
        assert!(RepresentationUnitary::new(ComplexMatrix::diagonal(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn fixed_point_of_swap_channel() {
        let h = HamiltonianSpec::new(vec![0.0, 1.0, 1.0, 2.5]).unwrap();
        for temp in [Temperature::Zero, t(0.5), t(1.0), t(5.0), Temperature::infinite()] {
            let g = gibbs_state(&h, temp);
            let ks = kraus_from_unitary(&swap_thermalizer(4), &g).unwrap();
            let out = apply_kraus(&ks, &g).unwrap();
            assert!(out.matrix().max_abs_diff(g.matrix()) < 1e-12);
        }
    }

    #[test]
    fn gadc_examples() {
        assert_eq!(gadc_unitary(0.0).unwrap(), ComplexMatrix::identity(4));
        assert!(gadc_unitary(0.8).unwrap().unitarity_defect() < 1e-12);
        assert!(gadc_unitary(1.2).is_err());
        assert!(gadc_unitary(-0.1).is_err());
        // η = 1: |01⟩ ↔ |10⟩ with a sign, full thermalisation in one step
        let u = gadc_unitary(1.0).unwrap();
        assert_eq!(u.apply(&basis_vector(4, 2)), basis_vector(4, 1));
        let v = u.apply(&basis_vector(4, 1));
        assert_eq!(v[2], -ONE);
        let bath = gibbs_state(&qubit(), t(1.0));
        let out = apply_unitary_channel(&u, &DensityMatrix::diagonal(&[1.0, 0.0]).unwrap(), &bath).unwrap();
        assert!(trace_distance(&out, &bath).unwrap() < 1e-12);
    }

    #[test]
    fn gadc_purified_examples() {
        assert_eq!(gadc_on_purified(0.0).unwrap(), ComplexMatrix::identity(8));
        assert!(gadc_on_purified(1.5).is_err());
        let eta = 0.35;
        let temp = t(0.7);
        let bath = gibbs_state(&qubit(), temp);
        let mut rng = ChaCha8Rng::seed_from_u64(33);
        let probe = crate::qmath::random_pure_state(2, &mut rng);
        // probe ⊗ (bath, ancilla) purified
        let mut joint = probe.kron(&purify(&qubit(), temp));
        let before_ancilla = joint.reduced(&[2]).unwrap();
        joint.apply(&gadc_on_purified(eta).unwrap(), &[0, 1, 2]).unwrap();
        let probe_out = joint.reduced(&[0]).unwrap();
        let mixed = apply_unitary_channel(&gadc_unitary(eta).unwrap(), &DensityMatrix::pure(&probe).unwrap(), &bath).unwrap();
        assert!(probe_out.max_abs_diff(mixed.matrix()) < 1e-12);
        assert!(joint.reduced(&[2]).unwrap().max_abs_diff(&before_ancilla) < 1e-12);
        let _ = StateVector::basis(2, 0);
    }

    #[test]
    fn gadc_contracts_towards_gibbs() {
        let bath = gibbs_state(&qubit(), t(1.0));
        for eta in [0.2, 0.5, 0.8] {
            let u = gadc_unitary(eta).unwrap();
            for p in [0.0, 0.3, 0.9, 1.0] {
                let rho = DensityMatrix::diagonal(&[1.0 - p, p]).unwrap();
                let before = trace_distance(&rho, &bath).unwrap();
                let after = trace_distance(&apply_unitary_channel(&u, &rho, &bath).unwrap(), &bath).unwrap();
                assert!(after <= (1.0 - eta) * before + 1e-14);
            }
        }
    }

    #[test]
    fn effective_operator_for_swap_is_gibbs() {
        let h = HamiltonianSpec::new(vec![0.0, 0.5, 1.0]).unwrap();
        let g = gibbs_state(&h, t(1.0));
        let op = effective_operator(&swap_thermalizer(3), &g).unwrap();
        assert!(op.max_abs_diff(g.matrix()) < 1e-15);
    }
}
