//! A probe thermalised by one of two baths, chosen coherently by a control qubit.
//!
//! Factor ordering for the global picture is (B₀, B₁, C, S). The control starts
//! in |+⟩ and is afterwards projected onto |φ⟩ = (|0⟩ + e^{iφ}|1⟩)/√2 without
//! renormalisation, so the trace of the conditional probe state is the
//! probability of that outcome.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::{apply_unitary_channel, effective_operator, swap_thermalizer, RepresentationUnitary};
use crate::error::{Error, Result};
use crate::qmath::{
    cyclic_shift, eigh, embed_operator, expi_hermitian, partial_trace, random_unitary_with, ComplexMatrix,
    ConditionalState, DensityMatrix, StateVector, ZERO,
};
use crate::thermal::{gibbs_state, gibbs_weights, purify, HamiltonianSpec, Temperature};

/// Below this visibility the interference phase is reported as 0.
pub const PHASE_CUTOFF: f64 = 1e-12;

/// Interference contrast 𝒱 and phase ψ of P(φ) = ½ + ½𝒱cos(φ + ψ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VisibilityResult {
    pub visibility: f64,
    /// In (−π, π].
    pub phase: f64,
}

impl VisibilityResult {
    /// From the complex cross-term amplitude z with P(φ) = ½ + ½Re(e^{iφ}z).
    pub fn from_cross_term(z: Complex64) -> Self {
        let visibility = z.norm();
        if visibility < PHASE_CUTOFF {
            return Self { visibility, phase: 0.0 };
        }
        let mut phase = z.im.atan2(z.re);
        if phase <= -std::f64::consts::PI {
            phase = std::f64::consts::PI;
        }
        Self { visibility, phase }
    }

    /// ½ + ½𝒱cos(φ + ψ)
    pub fn probability(&self, phi: f64) -> f64 {
        0.5 + 0.5 * self.visibility * (phi + self.phase).cos()
    }
}

/// Unitaries v, w on an enlarged bath⊗ancilla space of dimension `dim`.
///
/// The purified bath (B, A) occupies the first d² basis states, index b·d + a.
#[derive(Debug, Clone, PartialEq)]
pub struct Dilation {
    dim: usize,
    v: ComplexMatrix,
    w: ComplexMatrix,
}

impl Dilation {
    pub fn new(dim: usize, v: ComplexMatrix, w: ComplexMatrix) -> Result<Self> {
        for m in [&v, &w] {
            if m.dims() != (dim, dim) {
                return Err(Error::DimensionMismatch { expected: dim, actual: m.rows() });
            }
            let defect = m.unitarity_defect();
            if defect > 1e-10 {
                return Err(Error::NotUnitary(defect));
            }
        }
        Ok(Self { dim, v, w })
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, v: ComplexMatrix::identity(dim), w: ComplexMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn v(&self) -> &ComplexMatrix {
        &self.v
    }

    pub fn w(&self) -> &ComplexMatrix {
        &self.w
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoBathConfig {
    hamiltonian: HamiltonianSpec,
    temperatures: [Temperature; 2],
    probe: DensityMatrix,
    phi: f64,
    representation: Option<[RepresentationUnitary; 2]>,
    dilation: Option<[Dilation; 2]>,
}

impl TwoBathConfig {
    pub fn new(hamiltonian: HamiltonianSpec, t0: Temperature, t1: Temperature, probe: DensityMatrix) -> Result<Self> {
        if probe.dim() != hamiltonian.dim() {
            return Err(Error::DimensionMismatch { expected: hamiltonian.dim(), actual: probe.dim() });
        }
        Ok(Self { hamiltonian, temperatures: [t0, t1], probe, phi: 0.0, representation: None, dilation: None })
    }

    pub fn with_phi(mut self, phi: f64) -> Result<Self> {
        if !phi.is_finite() {
            return Err(Error::OutOfRange { name: "phi", value: phi });
        }
        self.phi = phi;
        Ok(self)
    }

    /// Kraus-index unitaries u⁰, u¹ for the two branches.
    pub fn with_representation(mut self, u0: RepresentationUnitary, u1: RepresentationUnitary) -> Result<Self> {
        let d = self.hamiltonian.dim();
        for u in [&u0, &u1] {
            if u.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, actual: u.dim() });
            }
        }
        self.representation = Some([u0, u1]);
        Ok(self)
    }

    pub fn with_dilation(mut self, d0: Dilation, d1: Dilation) -> Result<Self> {
        let d = self.hamiltonian.dim();
        for dil in [&d0, &d1] {
            if dil.dim < d * d {
                return Err(Error::DimensionMismatch { expected: d * d, actual: dil.dim });
            }
        }
        self.dilation = Some([d0, d1]);
        Ok(self)
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn temperature(&self, i: usize) -> Temperature {
        self.temperatures[i]
    }

    pub fn probe(&self) -> &DensityMatrix {
        &self.probe
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn representation(&self) -> Option<&[RepresentationUnitary; 2]> {
        self.representation.as_ref()
    }

    pub fn dilation(&self) -> Option<&[Dilation; 2]> {
        self.dilation.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    pub fn bath_state(&self, i: usize) -> DensityMatrix {
        gibbs_state(&self.hamiltonian, self.temperatures[i])
    }

    /// Probe–bath unitary of branch i on (S, B): SWAP·(u^i ⊗ 𝕀).
    ///
    /// Rotating the Kraus index of the SWAP channel by u^i is the same as
    /// pre-rotating the probe by u^i before the exchange.
    pub fn interaction(&self, i: usize) -> ComplexMatrix {
        let d = self.dim();
        let swap = swap_thermalizer(d);
        match &self.representation {
            Some(us) => swap.matmul(&us[i].matrix().kron(&ComplexMatrix::identity(d))),
            None => swap,
        }
    }
}

/// |φ⟩ = (|0⟩ + e^{iφ}|1⟩)/√2
fn control_vector(phi: f64) -> [Complex64; 2] {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    [Complex64::new(s, 0.0), Complex64::from_polar(s, phi)]
}

/// U = U_{B₀S}⊗𝕀_{B₁}⊗|0⟩⟨0|_C + 𝕀_{B₀}⊗U_{B₁S}⊗|1⟩⟨1|_C on (B₀, B₁, C, S).
pub fn controlled_unitary(cfg: &TwoBathConfig) -> Result<ComplexMatrix> {
    let d = cfg.dim();
    let dims = [d, d, 2, d];
    let p0 = embed_operator(&ComplexMatrix::diagonal(&[1.0, 0.0]), &[2], &dims)?;
    let p1 = embed_operator(&ComplexMatrix::diagonal(&[0.0, 1.0]), &[2], &dims)?;
    let u0 = embed_operator(&cfg.interaction(0), &[3, 0], &dims)?;
    let u1 = embed_operator(&cfg.interaction(1), &[3, 1], &dims)?;
    Ok(&u0.matmul(&p0) + &u1.matmul(&p1))
}

fn branch_operators(cfg: &TwoBathConfig) -> Result<[ComplexMatrix; 2]> {
    match &cfg.dilation {
        Some(dil) => Ok([dilated_kraus_operator(cfg, 0, &dil[0])?, dilated_kraus_operator(cfg, 1, &dil[1])?]),
        None => Ok([
            effective_operator(&cfg.interaction(0), &cfg.bath_state(0))?,
            effective_operator(&cfg.interaction(1), &cfg.bath_state(1))?,
        ]),
    }
}

fn assemble(cfg: &TwoBathConfig, ops: &[ComplexMatrix; 2]) -> Result<ConditionalState> {
    let rho = cfg.probe();
    let out0 = apply_unitary_channel(&cfg.interaction(0), rho, &cfg.bath_state(0))?;
    let out1 = apply_unitary_channel(&cfg.interaction(1), rho, &cfg.bath_state(1))?;
    let cross = ops[0].matmul(rho.matrix()).matmul(&ops[1].dagger()).scale(Complex64::from_polar(1.0, cfg.phi()));
    let sum = &(&(&out0.into_matrix() + &out1.into_matrix()) + &cross) + &cross.dagger();
    Ok(ConditionalState::from_computed(sum.scale_real(0.25), vec![cfg.dim()]))
}

/// ¼(ρ^{β₀} + ρ^{β₁} + e^{iφ} T⁰ρ_S T¹† + h.c.) with T^i = ρ^{β_i}u^i.
///
/// When a dilation is configured T^i is the dilated operator instead.
pub fn conditional_probe_state(cfg: &TwoBathConfig) -> Result<ConditionalState> {
    assemble(cfg, &branch_operators(cfg)?)
}

/// Brute-force Tr_{B₀B₁C}{⟨φ|UρU†|φ⟩} on the full (B₀, B₁, C, S) space.
/// Ignores any configured dilation.
pub fn conditional_probe_state_global(cfg: &TwoBathConfig) -> Result<ConditionalState> {
    let d = cfg.dim();
    let dims = [d, d, 2, d];
    let m = evolved_global_state(cfg)?;
    let c = control_vector(cfg.phi());
    let proj = embed_operator(&ComplexMatrix::outer(&c, &c), &[2], &dims)?;
    let projected = proj.matmul(&m).matmul(&proj);
    Ok(ConditionalState::from_computed(partial_trace(&projected, &dims, &[3])?, vec![d]))
}

fn evolved_global_state(cfg: &TwoBathConfig) -> Result<ComplexMatrix> {
    let u = controlled_unitary(cfg)?;
    let plus = ComplexMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5])?;
    let rho =
        cfg.bath_state(0).matrix().kron(cfg.bath_state(1).matrix()).kron(&plus).kron(cfg.probe().matrix());
    Ok(u.matmul(&rho).matmul(&u.dagger()))
}

/// Reduced state of the control after the controlled interaction, by full simulation.
pub fn control_state(cfg: &TwoBathConfig) -> Result<DensityMatrix> {
    let d = cfg.dim();
    let m = evolved_global_state(cfg)?;
    Ok(DensityMatrix::from_computed(partial_trace(&m, &[d, d, 2, d], &[2])?, vec![2]))
}

/// T'^i = ⟨ψ|v† · w(𝕀_A ⊗ U)(|ψ⟩ ⊗ 𝕀_S) with the purified bath embedded in
/// the enlarged space of the dilation.
pub fn dilated_kraus_operator(cfg: &TwoBathConfig, branch: usize, dilation: &Dilation) -> Result<ComplexMatrix> {
    let d = cfg.dim();
    let big = dilation.dim();
    if big < d * d {
        return Err(Error::DimensionMismatch { expected: d * d, actual: big });
    }
    let psi = purify(cfg.hamiltonian(), cfg.temperature(branch));
    let mut reference = psi.amplitudes().to_vec();
    reference.resize(big, ZERO);
    let reference = dilation.v().apply(&reference);
    let u = cfg.interaction(branch);
    let mut t = ComplexMatrix::zeros(d, d);
    for s in 0..d {
        // (B, A, S), interaction on (S, B)
        let mut chi = psi.kron(&StateVector::basis(d, s)?);
        chi.apply(&u, &[2, 0])?;
        let mut amps = chi.into_amplitudes();
        amps.resize(big * d, ZERO);
        let mut out = StateVector::unnormalized(amps, vec![big, d])?;
        out.apply(dilation.w(), &[0])?;
        let a = out.amplitudes();
        for s_out in 0..d {
            t[(s_out, s)] = (0..big).map(|e| reference[e].conj() * a[e * d + s_out]).sum();
        }
    }
    Ok(t)
}

/// Dilated conditional state; requires a configured dilation pair.
pub fn conditional_probe_state_dilated(cfg: &TwoBathConfig) -> Result<ConditionalState> {
    let dil = cfg.dilation().ok_or_else(|| Error::InvalidArgument("no dilation configured".into()))?;
    let ops = [dilated_kraus_operator(cfg, 0, &dil[0])?, dilated_kraus_operator(cfg, 1, &dil[1])?];
    assemble(cfg, &ops)
}

/// 𝒱 = |Tr{T⁰ρ_S T¹†}|, ψ = arg Tr{T⁰ρ_S T¹†}.
pub fn visibility(cfg: &TwoBathConfig) -> Result<VisibilityResult> {
    let ops = branch_operators(cfg)?;
    let z = ops[0].matmul(cfg.probe().matrix()).matmul(&ops[1].dagger()).trace();
    Ok(VisibilityResult::from_cross_term(z))
}

/// Visibility for explicit representation unitaries.
pub fn visibility_for_unitaries(
    h: &HamiltonianSpec,
    t0: Temperature,
    t1: Temperature,
    probe: &DensityMatrix,
    u0: &ComplexMatrix,
    u1: &ComplexMatrix,
) -> Result<VisibilityResult> {
    let cfg = TwoBathConfig::new(h.clone(), t0, t1, probe.clone())?
        .with_representation(RepresentationUnitary::new(u0.clone())?, RepresentationUnitary::new(u1.clone())?)?;
    visibility(&cfg)
}

/// Eigenvalues of ρ_S in decreasing order with matching eigenvectors.
fn decreasing_spectrum(probe: &DensityMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let e = eigh(probe.matrix())?;
    let n = e.values.len();
    let values = e.values.iter().rev().copied().collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| e.vectors[(r, n - 1 - c)]);
    Ok((values, vectors))
}

/// 𝒱_max = Σ_s p_s c_s^{β₀} c_s^{β₁}, p_s decreasing, c_s ordered by energy.
pub fn max_visibility_closed_form(
    h: &HamiltonianSpec,
    t0: Temperature,
    t1: Temperature,
    probe: &DensityMatrix,
) -> Result<f64> {
    if probe.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), actual: probe.dim() });
    }
    let c0 = gibbs_weights(h, t0);
    let c1 = gibbs_weights(h, t1);
    let (p, _) = decreasing_spectrum(probe)?;
    Ok(p.iter().zip(c0.iter().zip(&c1)).map(|(p, (a, b))| p.max(0.0) * a * b).sum())
}

/// u⁰ = u¹ = Σ_s |s⟩⟨e_s|, mapping the s-th most likely eigenvector of ρ_S to
/// the s-th energy level. Attains [`max_visibility_closed_form`].
pub fn argmax_unitaries(probe: &DensityMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let (_, vectors) = decreasing_spectrum(probe)?;
    let u = vectors.dagger();
    Ok((u.clone(), u))
}

/// u¹ = (cyclic shift)·u⁰, which makes ρ^{β₀}ρ^{β₁}u⁰ρ_S u^{1†} traceless.
pub fn zero_visibility_unitaries(h: &HamiltonianSpec, probe: &DensityMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if h.dim() < 2 || probe.dim() != h.dim() {
        return Err(Error::DimensionMismatch { expected: h.dim(), actual: probe.dim() });
    }
    let (u0, _) = argmax_unitaries(probe)?;
    let u1 = cyclic_shift(h.dim()).matmul(&u0);
    Ok((u0, u1))
}

/// Random search for the largest visibility over unitary pairs: `trials` Haar
/// samples, then stochastic local refinement of the best pair.
pub fn max_visibility_search(
    h: &HamiltonianSpec,
    t0: Temperature,
    t1: Temperature,
    probe: &DensityMatrix,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    if trials == 0 {
        return Err(Error::InvalidArgument("search needs at least one trial".into()));
    }
    let d = h.dim();
    if probe.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, actual: probe.dim() });
    }
    // 𝒱 = |Tr{u¹† D u⁰ ρ_S}| with D = ρ^{β₁}ρ^{β₀} diagonal
    let weights: Vec<f64> =
        gibbs_weights(h, t0).iter().zip(gibbs_weights(h, t1)).map(|(a, b)| a * b).collect();
    let diag = ComplexMatrix::diagonal(&weights);
    let rho = probe.matrix();
    let score = |u0: &ComplexMatrix, u1: &ComplexMatrix| u1.dagger().matmul(&diag).matmul(u0).matmul(rho).trace().norm();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = (f64::NEG_INFINITY, ComplexMatrix::identity(d), ComplexMatrix::identity(d));
    for _ in 0..trials {
        let u0 = random_unitary_with(d, &mut rng);
        let u1 = random_unitary_with(d, &mut rng);
        let s = score(&u0, &u1);
        if s > best.0 {
            best = (s, u0, u1);
        }
    }

    let (mut val, mut u0, mut u1) = best;
    let mut step = 0.3;
    while step > 1e-7 {
        let mut improved = false;
        for _ in 0..40 {
            let k0 = expi_hermitian(&random_hermitian(d, step, &mut rng))?;
            let k1 = expi_hermitian(&random_hermitian(d, step, &mut rng))?;
            let c0 = k0.matmul(&u0);
            let c1 = k1.matmul(&u1);
            let s = score(&c0, &c1);
            if s > val {
                (val, u0, u1) = (s, c0, c1);
                improved = true;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    Ok(val)
}

fn random_hermitian<R: Rng + ?Sized>(d: usize, scale: f64, rng: &mut R) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
    });
    g.hermitian_part().scale_real(scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::{pauli_x, random_density_matrix, random_unitary, trace_distance};

    fn t(x: f64) -> Temperature {
        Temperature::from_t(x).unwrap()
    }

    fn qubit() -> HamiltonianSpec {
        HamiltonianSpec::qubit(1.0).unwrap()
    }

    fn ground() -> DensityMatrix {
        DensityMatrix::diagonal(&[1.0, 0.0]).unwrap()
    }

    #[test]
    fn controlled_unitary_structure() {
        let cfg = TwoBathConfig::new(qubit(), t(1.0), t(2.0), ground()).unwrap();
        let u = controlled_unitary(&cfg).unwrap();
        assert!(u.unitarity_defect() < 1e-12);
        let id = TwoBathConfig::new(qubit(), t(1.0), t(2.0), ground())
            .unwrap()
            .with_representation(RepresentationUnitary::identity(2), RepresentationUnitary::identity(2))
            .unwrap();
        assert_eq!(controlled_unitary(&id).unwrap(), u);
    }

    #[test]
    fn zero_temperature_is_fully_coherent() {
        let cfg = TwoBathConfig::new(qubit(), Temperature::Zero, Temperature::Zero, ground()).unwrap();
        let out = conditional_probe_state(&cfg).unwrap();
        assert!(out.matrix().max_abs_diff(ground().matrix()) < 1e-15);
        let v = visibility(&cfg).unwrap();
        assert!((v.visibility - 1.0).abs() < 1e-15);
        assert_eq!(v.phase, 0.0);
    }

    #[test]
    fn equal_temperatures_do_not_thermalise() {
        let cfg = TwoBathConfig::new(qubit(), t(1.0), t(1.0), ground()).unwrap();
        let out = conditional_probe_state(&cfg).unwrap();
        let d = trace_distance(&out.normalize().unwrap(), &cfg.bath_state(0)).unwrap();
        assert!((d - 0.09367210055115428).abs() < 1e-12);
        assert!((out.trace() - 0.7672233226942615).abs() < 1e-12);
    }

    #[test]
    fn visibility_equal_temperatures() {
        let cfg = TwoBathConfig::new(qubit(), t(1.0), t(1.0), ground()).unwrap();
        let v = visibility(&cfg).unwrap();
        assert!((v.visibility - 0.534446645388523).abs() < 1e-12);
        let rc = control_state(&cfg).unwrap();
        assert!((2.0 * rc.matrix()[(0, 1)].norm() - v.visibility).abs() < 1e-12);
    }

    #[test]
    fn analytic_matches_global() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let h = HamiltonianSpec::new(vec![0.0, 0.6, 1.5]).unwrap();
        let cfg = TwoBathConfig::new(h, t(0.7), t(2.5), random_density_matrix(3, &mut rng))
            .unwrap()
            .with_phi(1.1)
            .unwrap()
            .with_representation(
                RepresentationUnitary::new(random_unitary(3, 1)).unwrap(),
                RepresentationUnitary::new(random_unitary(3, 2)).unwrap(),
            )
            .unwrap();
        let a = conditional_probe_state(&cfg).unwrap();
        let b = conditional_probe_state_global(&cfg).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn trace_follows_visibility() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let base = TwoBathConfig::new(qubit(), t(0.4), t(1.3), random_density_matrix(2, &mut rng))
            .unwrap()
            .with_representation(
                RepresentationUnitary::new(random_unitary(2, 10)).unwrap(),
                RepresentationUnitary::new(random_unitary(2, 11)).unwrap(),
            )
            .unwrap();
        let v = visibility(&base).unwrap();
        for k in 0..4 {
            let phi = k as f64 * std::f64::consts::FRAC_PI_2;
            let cfg = base.clone().with_phi(phi).unwrap();
            let tr = conditional_probe_state(&cfg).unwrap().trace();
            assert!((tr - v.probability(phi)).abs() < 1e-10);
        }
    }

    #[test]
    fn identity_dilation_reduces() {
        let cfg = TwoBathConfig::new(qubit(), t(0.8), t(3.0), ground()).unwrap().with_phi(0.3).unwrap();
        let dil = cfg.clone().with_dilation(Dilation::identity(4), Dilation::identity(6)).unwrap();
        let a = conditional_probe_state(&cfg).unwrap();
        let b = conditional_probe_state_dilated(&dil).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
        assert!(conditional_probe_state_dilated(&cfg).is_err());
        assert!(cfg.with_dilation(Dilation::identity(3), Dilation::identity(4)).is_err());
    }

    #[test]
    fn dilation_with_probe_prerotation_reproduces_representation() {
        let h = qubit();
        let (u0, u1) = (random_unitary(2, 21), random_unitary(2, 22));
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density_matrix(2, &mut rng);
        let rep = TwoBathConfig::new(h.clone(), t(0.5), t(1.7), rho.clone())
            .unwrap()
            .with_representation(RepresentationUnitary::new(u0.clone()).unwrap(), RepresentationUnitary::new(u1.clone()).unwrap())
            .unwrap();
        // w applies u^i to the bath factor after the exchange: (B, A) ordering
        let i2 = ComplexMatrix::identity(2);
        let dil = TwoBathConfig::new(h, t(0.5), t(1.7), rho)
            .unwrap()
            .with_dilation(
                Dilation::new(4, ComplexMatrix::identity(4), u0.kron(&i2)).unwrap(),
                Dilation::new(4, ComplexMatrix::identity(4), u1.kron(&i2)).unwrap(),
            )
            .unwrap();
        let a = conditional_probe_state(&rep).unwrap();
        let b = conditional_probe_state_dilated(&dil).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-12);
    }

    #[test]
    fn zero_visibility_construction() {
        let h = qubit();
        let (u0, u1) = zero_visibility_unitaries(&h, &ground()).unwrap();
        assert!(u1.max_abs_diff(&pauli_x().matmul(&u0)) < 1e-15);
        let v = visibility_for_unitaries(&h, t(1.0), t(2.0), &ground(), &u0, &u1).unwrap();
        assert!(v.visibility < 1e-12);
        let h3 = HamiltonianSpec::new(vec![0.0, 1.0, 2.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let rho = random_density_matrix(3, &mut rng);
        let (u0, u1) = zero_visibility_unitaries(&h3, &rho).unwrap();
        assert!(visibility_for_unitaries(&h3, t(1.0), t(2.0), &rho, &u0, &u1).unwrap().visibility < 1e-12);
    }

    #[test]
    fn closed_form_values() {
        let h = qubit();
        let mixed = DensityMatrix::maximally_mixed(2);
        let v = max_visibility_closed_form(&h, t(1.0), t(1.0), &mixed).unwrap();
        assert!((v - 0.30338806675851815).abs() < 1e-12);
        let zero = max_visibility_closed_form(&h, Temperature::Zero, Temperature::Zero, &ground()).unwrap();
        assert!((zero - 1.0).abs() < 1e-15);
        let c0 = gibbs_weights(&h, t(0.5))[0] * gibbs_weights(&h, t(3.0))[0];
        let pure = max_visibility_closed_form(&h, t(0.5), t(3.0), &DensityMatrix::diagonal(&[0.0, 1.0]).unwrap()).unwrap();
        assert!((pure - c0).abs() < 1e-15);
    }

    #[test]
    fn argmax_attains_closed_form() {
        let h = HamiltonianSpec::new(vec![0.0, 0.3, 0.9]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rho = random_density_matrix(3, &mut rng);
        let (u0, u1) = argmax_unitaries(&rho).unwrap();
        let v = visibility_for_unitaries(&h, t(0.6), t(1.9), &rho, &u0, &u1).unwrap().visibility;
        let closed = max_visibility_closed_form(&h, t(0.6), t(1.9), &rho).unwrap();
        assert!((v - closed).abs() < 1e-12);
    }

    #[test]
    fn search_approaches_closed_form() {
        let h = qubit();
        let closed = max_visibility_closed_form(&h, t(1.0), t(1.0), &ground()).unwrap();
        let found = max_visibility_search(&h, t(1.0), t(1.0), &ground(), 500, 1).unwrap();
        assert!(found <= closed + 1e-9);
        assert!(closed - found < 1e-3);
        assert!(max_visibility_search(&h, t(1.0), t(1.0), &ground(), 0, 1).is_err());
    }

    #[test]
    fn representation_changes_cross_terms() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let rho = random_density_matrix(2, &mut rng);
        let plain = TwoBathConfig::new(qubit(), t(0.5), t(0.9), rho.clone()).unwrap();
        let rotated = plain
            .clone()
            .with_representation(RepresentationUnitary::identity(2), RepresentationUnitary::new(random_unitary(2, 30)).unwrap())
            .unwrap();
        let a = conditional_probe_state(&plain).unwrap().normalize().unwrap();
        let b = conditional_probe_state(&rotated).unwrap().normalize().unwrap();
        assert!(trace_distance(&a, &b).unwrap() > 1e-3);
    }

    #[test]
    fn phase_convention() {
        let v = VisibilityResult::from_cross_term(Complex64::new(-0.5, -0.0));
        assert_eq!(v.phase, std::f64::consts::PI);
        let v = VisibilityResult::from_cross_term(Complex64::new(1e-14, 1e-14));
        assert_eq!(v.phase, 0.0);
    }
}
