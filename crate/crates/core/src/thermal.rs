//! Gibbs states, partition functions and purifications (thermofield doubles).
//!
//! Energies are given directly as a spectrum; no Hamiltonian matrix is built.
//! Probe and bath share one [`HamiltonianSpec`], which is how matching
//! spectra between the two are enforced.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qmath::{ComplexMatrix, DensityMatrix, StateVector, ZERO};

/// Finite, non-decreasing energy spectrum E_0 ≤ E_1 ≤ … of dimension ≥ 2.
#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    energies: Vec<f64>,
}

impl HamiltonianSpec {
    pub fn new(energies: Vec<f64>) -> Result<Self> {
        if energies.len() < 2 {
            return Err(Error::InvalidHamiltonian(format!("need at least 2 levels, got {}", energies.len())));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidHamiltonian("non-finite energy".into()));
        }
        if energies.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidHamiltonian("energies must be non-decreasing".into()));
        }
        Ok(Self { energies })
    }

    /// Two-level spectrum (0, gap).
    pub fn qubit(gap: f64) -> Result<Self> {
        Self::new(vec![0.0, gap])
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }
}

/// Temperature with k_B = 1. Absolute zero is an explicit variant rather than
/// an infinite β, so the ground-state limit is exact.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    /// T = 0 (β = ∞).
    Zero,
    /// Finite inverse temperature β ≥ 0; β = 0 is T = ∞.
    Beta(f64),
}

impl Temperature {
    /// From T ∈ [0, ∞]; `f64::INFINITY` maps to β = 0.
    pub fn from_t(t: f64) -> Result<Self> {
        if t.is_nan() || t < 0.0 {
            return Err(Error::OutOfRange { name: "temperature", value: t });
        }
        let beta = 1.0 / t;
        // subnormal T overflows β
        Ok(if beta.is_infinite() { Temperature::Zero } else { Temperature::Beta(beta) })
    }

    pub fn from_beta(beta: f64) -> Result<Self> {
        if beta.is_nan() || beta < 0.0 {
            return Err(Error::OutOfRange { name: "beta", value: beta });
        }
        Ok(if beta.is_infinite() { Temperature::Zero } else { Temperature::Beta(beta) })
    }

    pub fn infinite() -> Self {
        Temperature::Beta(0.0)
    }

    pub fn beta(self) -> f64 {
        match self {
            Temperature::Zero => f64::INFINITY,
            Temperature::Beta(b) => b,
        }
    }

    pub fn t(self) -> f64 {
        match self {
            Temperature::Zero => 0.0,
            Temperature::Beta(0.0) => f64::INFINITY,
            Temperature::Beta(b) => 1.0 / b,
        }
    }
}

/// Boltzmann weights c_n = e^{−βE_n}/Z, together with ln Z.
#[derive(Debug, Clone, PartialEq)]
pub struct GibbsWeights {
    weights: Vec<f64>,
    log_partition: f64,
}

impl GibbsWeights {
    pub fn new(h: &HamiltonianSpec, t: Temperature) -> Self {
        let e = h.energies();
        let e0 = e[0];
        let (weights, log_partition) = match t {
            Temperature::Zero => {
                let ground = e.iter().filter(|&&x| x == e0).count();
                let w = e.iter().map(|&x| if x == e0 { 1.0 / ground as f64 } else { 0.0 }).collect();
                // Z diverges or vanishes with e^{−βE0}; at T = 0 energies are
                // measured from the ground level, leaving the degeneracy g.
                (w, (ground as f64).ln())
            }
            Temperature::Beta(beta) => {
                // shift by the ground energy before exponentiating
                let raw: Vec<f64> = e.iter().map(|&x| (-beta * (x - e0)).exp()).collect();
                let sum: f64 = raw.iter().sum();
                (raw.iter().map(|w| w / sum).collect(), -beta * e0 + sum.ln())
            }
        };
        Self { weights, log_partition }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    /// Z = Tr e^{−βH}; may over- or underflow where ln Z does not.
    pub fn partition(&self) -> f64 {
        self.log_partition.exp()
    }
}

/// Boltzmann weights for `h` at `t`.
pub fn gibbs_weights(h: &HamiltonianSpec, t: Temperature) -> Vec<f64> {
    GibbsWeights::new(h, t).weights
}

/// ρ^β = e^{−βH}/Z, diagonal in the energy basis.
pub fn gibbs_state(h: &HamiltonianSpec, t: Temperature) -> DensityMatrix {
    let w = gibbs_weights(h, t);
    DensityMatrix::diagonal(&w).expect("Gibbs weights form a valid state")
}

/// Thermofield double Σ_n √c_n |n⟩_B|n⟩_A on (bath, ancilla).
pub fn purify(h: &HamiltonianSpec, t: Temperature) -> StateVector {
    let d = h.dim();
    let w = gibbs_weights(h, t);
    let mut amps = vec![ZERO; d * d];
    for (n, c) in w.iter().enumerate() {
        amps[n * d + n] = Complex64::new(c.sqrt(), 0.0);
    }
    StateVector::new(amps, vec![d, d]).expect("weights sum to one")
}

/// One branch of a superposed purification: temperature, global phase φ_x
/// and the ancilla basis |a(b,x)⟩ = B_x|b⟩ given by a unitary B_x.
#[derive(Debug, Clone, PartialEq)]
pub struct PurificationBranch {
    pub temperature: Temperature,
    pub phase: f64,
    pub ancilla_basis: ComplexMatrix,
}

impl PurificationBranch {
    /// Canonical |n,n⟩ pairing with zero phase.
    pub fn canonical(h: &HamiltonianSpec, temperature: Temperature) -> Self {
        Self { temperature, phase: 0.0, ancilla_basis: ComplexMatrix::identity(h.dim()) }
    }
}

/// Two purification branches x ∈ {0, 1} over a shared spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct PurificationSpec {
    hamiltonian: HamiltonianSpec,
    branches: [PurificationBranch; 2],
}

impl PurificationSpec {
    pub fn new(hamiltonian: HamiltonianSpec, branch0: PurificationBranch, branch1: PurificationBranch) -> Result<Self> {
        let d = hamiltonian.dim();
        for b in [&branch0, &branch1] {
            if b.ancilla_basis.dims() != (d, d) {
                return Err(Error::DimensionMismatch { expected: d, actual: b.ancilla_basis.rows() });
            }
            let defect = b.ancilla_basis.unitarity_defect();
            if defect > 1e-10 {
                return Err(Error::NotUnitary(defect));
            }
            if !b.phase.is_finite() {
                return Err(Error::OutOfRange { name: "purification phase", value: b.phase });
            }
        }
        Ok(Self { hamiltonian, branches: [branch0, branch1] })
    }

    /// Canonical bases and zero phases at temperatures (t0, t1).
    pub fn canonical(hamiltonian: HamiltonianSpec, t0: Temperature, t1: Temperature) -> Self {
        let b0 = PurificationBranch::canonical(&hamiltonian, t0);
        let b1 = PurificationBranch::canonical(&hamiltonian, t1);
        Self { hamiltonian, branches: [b0, b1] }
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn branch(&self, x: usize) -> &PurificationBranch {
        &self.branches[x]
    }

    pub fn weights(&self, x: usize) -> Vec<f64> {
        gibbs_weights(&self.hamiltonian, self.branches[x].temperature)
    }
}

/// Σ_b e^{−iφ_x} √c_b |b⟩ ⊗ B_x|b⟩ on (bath, ancilla), normalized to one.
pub fn purify_general(spec: &PurificationSpec, x: usize) -> Result<StateVector> {
    if x > 1 {
        return Err(Error::InvalidArgument(format!("branch index {x} not in {{0, 1}}")));
    }
    let d = spec.hamiltonian.dim();
    let branch = &spec.branches[x];
    let w = spec.weights(x);
    let phase = Complex64::from_polar(1.0, -branch.phase);
    let mut amps = vec![ZERO; d * d];
    for (b, c) in w.iter().enumerate() {
        let amp = phase * c.sqrt();
        for a in 0..d {
            amps[b * d + a] += amp * branch.ancilla_basis[(a, b)];
        }
    }
    StateVector::new(amps, vec![d, d])
}

/// V^{xx'}_{bb'} = ⟨a(b',x')|a(b,x)⟩.
pub fn ancilla_overlap(spec: &PurificationSpec, x: usize, x_prime: usize) -> ComplexMatrix {
    let bx = &spec.branches[x].ancilla_basis;
    let bxp = &spec.branches[x_prime].ancilla_basis;
    // (B_{x'}† B_x)_{b' b}, transposed into (b, b') indexing
    bxp.dagger().matmul(bx).transpose()
}

/// V^{01}.
pub fn ancilla_overlap_matrix(spec: &PurificationSpec) -> ComplexMatrix {
    ancilla_overlap(spec, 0, 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{pauli_x, random_unitary, ONE};

    const C0: f64 = 0.7310585786300049;
    const C1: f64 = 0.2689414213699951;

    fn qubit() -> HamiltonianSpec {
        HamiltonianSpec::qubit(1.0).unwrap()
    }

    #[test]
    fn spectrum_validation() {
        assert!(HamiltonianSpec::new(vec![0.0]).is_err());
        assert!(HamiltonianSpec::new(vec![0.0, f64::NAN]).is_err());
        assert!(HamiltonianSpec::new(vec![1.0, 0.0]).is_err());
        assert!(HamiltonianSpec::new(vec![0.0, 0.0, 1.0]).is_ok());
    }

    #[test]
    fn temperature_markers() {
        assert_eq!(Temperature::from_t(0.0).unwrap(), Temperature::Zero);
        assert_eq!(Temperature::from_t(f64::INFINITY).unwrap(), Temperature::Beta(0.0));
        assert_eq!(Temperature::from_beta(f64::INFINITY).unwrap(), Temperature::Zero);
        assert_eq!(Temperature::from_t(2.0).unwrap().beta(), 0.5);
        assert!(Temperature::from_t(-1.0).is_err());
        assert_eq!(Temperature::from_t(1e-320).unwrap(), Temperature::Zero);
        assert!(Temperature::from_beta(f64::NAN).is_err());
        assert_eq!(Temperature::infinite().t(), f64::INFINITY);
        assert_eq!(Temperature::Zero.beta(), f64::INFINITY);
    }

    #[test]
    fn qubit_gibbs_at_unit_temperature() {
        // direct evaluation e^{−βE_n}/Z
        let z = 1.0 + (-1.0f64).exp();
        let rho = gibbs_state(&qubit(), Temperature::from_t(1.0).unwrap());
        assert!((rho.matrix()[(0, 0)].re - 1.0 / z).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - (-1.0f64).exp() / z).abs() < 1e-15);
        assert!((rho.matrix()[(0, 0)].re - C0).abs() < 1e-15);
        let gw = GibbsWeights::new(&qubit(), Temperature::from_t(1.0).unwrap());
        assert!((gw.partition() - z).abs() < 1e-14);
    }

    #[test]
    fn temperature_limits() {
        let h = HamiltonianSpec::new(vec![0.0, 0.5, 2.0]).unwrap();
        assert_eq!(gibbs_weights(&h, Temperature::Zero), vec![1.0, 0.0, 0.0]);
        let inf = gibbs_weights(&h, Temperature::infinite());
        assert!(inf.iter().all(|w| (w - 1.0 / 3.0).abs() < 1e-15));
    }

    #[test]
    fn degenerate_ground_block() {
        let h = HamiltonianSpec::new(vec![-1.0, -1.0, 3.0]).unwrap();
        assert_eq!(gibbs_weights(&h, Temperature::Zero), vec![0.5, 0.5, 0.0]);
        let w = gibbs_weights(&h, Temperature::from_t(0.7).unwrap());
        assert_eq!(w[0], w[1]);
    }

    #[test]
    fn huge_beta_does_not_overflow() {
        let h = HamiltonianSpec::new(vec![-800.0, 0.0]).unwrap();
        let w = gibbs_weights(&h, Temperature::from_beta(5.0).unwrap());
        assert!(w.iter().all(|x| x.is_finite()));
        assert_eq!(w[0], 1.0);
    }

    #[test]
    fn purification_examples() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let p = purify(&qubit(), Temperature::infinite());
        let expected = [s, 0.0, 0.0, s];
        for (a, e) in p.amplitudes().iter().zip(expected) {
            assert!((a.re - e).abs() < 1e-15 && a.im == 0.0);
        }
        let p = purify(&qubit(), Temperature::Zero);
        assert_eq!(p.amplitudes()[0], ONE);
        let p = purify(&qubit(), Temperature::from_t(1.0).unwrap());
        assert!((p.amplitudes()[0].re - C0.sqrt()).abs() < 1e-15);
        assert!((p.amplitudes()[3].re - C1.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn purification_reduces_to_gibbs() {
        let h = HamiltonianSpec::new(vec![0.0, 0.3, 1.1, 2.0]).unwrap();
        for t in [Temperature::Zero, Temperature::from_t(0.5).unwrap(), Temperature::infinite()] {
            let red = purify(&h, t).reduced(&[0]).unwrap();
            assert!(red.max_abs_diff(gibbs_state(&h, t).matrix()) < 1e-12);
        }
    }

    #[test]
    fn general_purification_examples() {
        let h = qubit();
        let t = Temperature::from_t(1.0).unwrap();
        let canonical = PurificationSpec::canonical(h.clone(), t, t);
        assert_eq!(purify_general(&canonical, 0).unwrap(), purify(&h, t));

        let mut flipped = PurificationBranch::canonical(&h, t);
        flipped.phase = std::f64::consts::PI;
        let spec = PurificationSpec::new(h.clone(), flipped.clone(), flipped).unwrap();
        let psi = purify_general(&spec, 0).unwrap();
        for (a, b) in psi.amplitudes().iter().zip(purify(&h, t).amplitudes()) {
            assert!((a + b).norm() < 1e-15);
        }
        assert!(psi.reduced(&[0]).unwrap().max_abs_diff(gibbs_state(&h, t).matrix()) < 1e-15);

        let x_branch = PurificationBranch { temperature: t, phase: 0.0, ancilla_basis: pauli_x() };
        let spec = PurificationSpec::new(h.clone(), x_branch.clone(), x_branch).unwrap();
        let psi = purify_general(&spec, 1).unwrap();
        // √c0 |0,1⟩ + √c1 |1,0⟩
        assert!((psi.amplitudes()[1].re - C0.sqrt()).abs() < 1e-15);
        assert!((psi.amplitudes()[2].re - C1.sqrt()).abs() < 1e-15);
        assert!(psi.reduced(&[0]).unwrap().max_abs_diff(&ComplexMatrix::diagonal(&[C0, C1])) < 1e-15);
        assert!(purify_general(&spec, 2).is_err());
    }

    #[test]
    fn ancilla_overlaps() {
        let h = qubit();
        let t = Temperature::from_t(1.0).unwrap();
        let same = PurificationSpec::canonical(h.clone(), t, Temperature::Zero);
        assert_eq!(ancilla_overlap_matrix(&same), ComplexMatrix::identity(2));

        let b0 = random_unitary(2, 8);
        let b1 = pauli_x().matmul(&b0);
        let spec = PurificationSpec::new(
            h.clone(),
            PurificationBranch { temperature: t, phase: 0.3, ancilla_basis: b0.clone() },
            PurificationBranch { temperature: t, phase: 0.0, ancilla_basis: b1 },
        )
        .unwrap();
        // direct inner products ⟨a(b',1)|a(b,0)⟩
        let a = |b: usize, x: usize| spec.branch(x).ancilla_basis.col(b);
        let direct = ComplexMatrix::from_fn(2, 2, |b, bp| crate::qmath::inner(&a(bp, 1), &a(b, 0)));
        let v01 = ancilla_overlap_matrix(&spec);
        assert!(v01.max_abs_diff(&direct) < 1e-15);
        assert!(v01.is_unitary(1e-10));
        assert!(ancilla_overlap(&spec, 0, 0).max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert!(ancilla_overlap(&spec, 1, 0).max_abs_diff(&v01.dagger()) < 1e-12);

        // identity branch 0 and X branch 1 give V^{01} = X
        let spec = PurificationSpec::new(
            h.clone(),
            PurificationBranch::canonical(&h, t),
            PurificationBranch { temperature: t, phase: 0.0, ancilla_basis: pauli_x() },
        )
        .unwrap();
        assert_eq!(ancilla_overlap_matrix(&spec), pauli_x());
    }

    #[test]
    fn rejects_non_unitary_basis() {
        let h = qubit();
        let bad = PurificationBranch {
            temperature: Temperature::Zero,
            phase: 0.0,
            ancilla_basis: ComplexMatrix::diagonal(&[1.0, 0.5]),
        };
        assert!(matches!(
            PurificationSpec::new(h.clone(), bad, PurificationBranch::canonical(&h, Temperature::Zero)),
            Err(Error::NotUnitary(_))
        ));
    }

    #[test]
    fn weights_are_monotone() {
        let h = HamiltonianSpec::new(vec![0.0, 0.2, 0.9, 1.5]).unwrap();
        for t in [0.1, 1.0, 7.0] {
            let w = gibbs_weights(&h, Temperature::from_t(t).unwrap());
            assert!(w.windows(2).all(|p| p[0] > p[1]));
            assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }
}
