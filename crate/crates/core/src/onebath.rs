//! A single bath prepared in a superposition of two purifications, tagged by
//! a control qubit, thermalising a probe through a full exchange.
//!
//! Global factor ordering is (A, B, C, S): ancilla, bath, control, probe.
//! The prepared purification itself is reported on (B, A, C).

use num_complex::Complex64;

use crate::channels::swap_thermalizer;
use crate::error::{Error, Result};
use crate::qmath::{
    embed_operator, partial_trace, ComplexMatrix, ConditionalState, DensityMatrix, StateVector, ZERO,
};
use crate::thermal::{ancilla_overlap_matrix, gibbs_state, purify_general, HamiltonianSpec, PurificationSpec, Temperature};
use crate::twobath::VisibilityResult;

/// Overlap W^{01}_{bb'} between the post-interaction ancilla records of the two branches.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrixW(ComplexMatrix);

impl OverlapMatrixW {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OneBathConfig {
    purification: PurificationSpec,
    phi_c: f64,
    probe: DensityMatrix,
    local_unitaries: Option<[ComplexMatrix; 2]>,
}

impl OneBathConfig {
    pub fn new(purification: PurificationSpec, probe: DensityMatrix) -> Result<Self> {
        let d = purification.hamiltonian().dim();
        if probe.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, actual: probe.dim() });
        }
        Ok(Self { purification, phi_c: 0.0, probe, local_unitaries: None })
    }

    /// Canonical purifications at (t0, t1).
    pub fn canonical(h: HamiltonianSpec, t0: Temperature, t1: Temperature, probe: DensityMatrix) -> Result<Self> {
        Self::new(PurificationSpec::canonical(h, t0, t1), probe)
    }

    pub fn with_phi_c(mut self, phi_c: f64) -> Result<Self> {
        if !phi_c.is_finite() {
            return Err(Error::OutOfRange { name: "phi_c", value: phi_c });
        }
        self.phi_c = phi_c;
        Ok(self)
    }

    /// Control-dependent unitaries u^x on ancilla ⊗ bath, applied after the exchange.
    pub fn with_local_unitaries(mut self, u0: ComplexMatrix, u1: ComplexMatrix) -> Result<Self> {
        let d = self.dim();
        for u in [&u0, &u1] {
            if u.dims() != (d * d, d * d) {
                return Err(Error::DimensionMismatch { expected: d * d, actual: u.rows() });
            }
            let defect = u.unitarity_defect();
            if defect > 1e-10 {
                return Err(Error::NotUnitary(defect));
            }
        }
        self.local_unitaries = Some([u0, u1]);
        Ok(self)
    }

    pub fn purification(&self) -> &PurificationSpec {
        &self.purification
    }

    pub fn probe(&self) -> &DensityMatrix {
        &self.probe
    }

    pub fn phi_c(&self) -> f64 {
        self.phi_c
    }

    pub fn dim(&self) -> usize {
        self.purification.hamiltonian().dim()
    }

    /// φ̃ = φ₀ − φ₁ − φ_C
    pub fn phi_tilde(&self) -> f64 {
        self.purification.branch(0).phase - self.purification.branch(1).phase - self.phi_c
    }

    pub fn local_unitary(&self, x: usize) -> ComplexMatrix {
        match &self.local_unitaries {
            Some(us) => us[x].clone(),
            None => ComplexMatrix::identity(self.dim() * self.dim()),
        }
    }

    fn gibbs(&self, x: usize) -> DensityMatrix {
        gibbs_state(self.purification.hamiltonian(), self.purification.branch(x).temperature)
    }
}

/// (1/√2) Σ_x Σ_b e^{−iφ_x} √c_b^{β_x} |b, a(b,x)⟩|x⟩_C on (B, A, C).
pub fn superposed_purification(cfg: &OneBathConfig) -> Result<StateVector> {
    let d = cfg.dim();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let branches = [purify_general(cfg.purification(), 0)?, purify_general(cfg.purification(), 1)?];
    let mut amps = vec![ZERO; d * d * 2];
    for (x, br) in branches.iter().enumerate() {
        for (i, a) in br.amplitudes().iter().enumerate() {
            amps[i * 2 + x] = a * s;
        }
    }
    StateVector::new(amps, vec![d, d, 2])
}

/// ¼[ρ^{β₀} + ρ^{β₁} + (e^{−iφ̃} Σ √(c_b c_{b'}) V^{01}_{bb'} |b⟩⟨b'| + h.c.)]
pub fn conditional_bath_state(cfg: &OneBathConfig) -> Result<ConditionalState> {
    let v = ancilla_overlap_matrix(cfg.purification());
    Ok(assemble(cfg, &v))
}

fn assemble(cfg: &OneBathConfig, overlap: &ComplexMatrix) -> ConditionalState {
    let d = cfg.dim();
    let c0 = cfg.purification().weights(0);
    let c1 = cfg.purification().weights(1);
    let phase = Complex64::from_polar(1.0, -cfg.phi_tilde());
    let cross = ComplexMatrix::from_fn(d, d, |b, bp| phase * (c0[b] * c1[bp]).sqrt() * overlap[(b, bp)]);
    let diag = cfg.gibbs(0).matrix() + cfg.gibbs(1).matrix();
    let sum = &(&diag + &cross) + &cross.dagger();
    ConditionalState::from_computed(sum.scale_real(0.25), vec![d])
}

/// W_{bb'} = ⟨a(b',1)| Tr_B{u^{1†}u⁰ (𝕀_A ⊗ ρ_S)} |a(b,0)⟩.
///
/// After the exchange the bath register carries the probe's input state,
/// which is why ρ_S sits on B.
pub fn overlap_matrix_w(cfg: &OneBathConfig) -> Result<OverlapMatrixW> {
    let d = cfg.dim();
    let m = cfg.local_unitary(1).dagger().matmul(&cfg.local_unitary(0));
    let x = m.matmul(&ComplexMatrix::identity(d).kron(cfg.probe().matrix()));
    let on_a = partial_trace(&x, &[d, d], &[0])?;
    let b0 = &cfg.purification().branch(0).ancilla_basis;
    let b1 = &cfg.purification().branch(1).ancilla_basis;
    Ok(OverlapMatrixW(b1.dagger().matmul(&on_a).matmul(b0).transpose()))
}

/// ¼[ρ^{β₀} + ρ^{β₁} + (e^{−iφ̃} Σ √(c_b c_{b'}) W^{01}_{bb'} |b⟩⟨b'| + h.c.)]
pub fn probe_output(cfg: &OneBathConfig) -> Result<ConditionalState> {
    let w = overlap_matrix_w(cfg)?;
    Ok(assemble(cfg, w.matrix()))
}

/// Ũ = Σ_x [(u^x_{AB} ⊗ 𝕀_S)(𝕀_A ⊗ U_{BS})] ⊗ |x⟩⟨x|_C on (A, B, C, S).
pub fn controlled_unitary(cfg: &OneBathConfig) -> Result<ComplexMatrix> {
    let d = cfg.dim();
    let dims = [d, d, 2, d];
    let exchange = embed_operator(&swap_thermalizer(d), &[3, 1], &dims)?;
    let mut total = ComplexMatrix::zeros(2 * d * d * d, 2 * d * d * d);
    for x in 0..2 {
        let mut px = [0.0; 2];
        px[x] = 1.0;
        let proj = embed_operator(&ComplexMatrix::diagonal(&px), &[2], &dims)?;
        let local = embed_operator(&cfg.local_unitary(x), &[0, 1], &dims)?;
        total = &total + &local.matmul(&exchange).matmul(&proj);
    }
    Ok(total)
}

fn evolved_global_state(cfg: &OneBathConfig) -> Result<ComplexMatrix> {
    let bath = superposed_purification(cfg)?.permute(&[1, 0, 2])?;
    let rho = bath.projector().kron(cfg.probe().matrix());
    let u = controlled_unitary(cfg)?;
    Ok(u.matmul(&rho).matmul(&u.dagger()))
}

/// Brute-force simulation of Ũ followed by projection on |φ_C⟩ and Tr_{AB}.
pub fn probe_output_global(cfg: &OneBathConfig) -> Result<ConditionalState> {
    let d = cfg.dim();
    let dims = [d, d, 2, d];
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let c = [Complex64::new(s, 0.0), Complex64::from_polar(s, cfg.phi_c())];
    let proj = embed_operator(&ComplexMatrix::outer(&c, &c), &[2], &dims)?;
    let m = evolved_global_state(cfg)?;
    let projected = proj.matmul(&m).matmul(&proj);
    Ok(ConditionalState::from_computed(partial_trace(&projected, &dims, &[3])?, vec![d]))
}

/// Reduced control state after the interaction, by full simulation.
pub fn control_state(cfg: &OneBathConfig) -> Result<DensityMatrix> {
    let d = cfg.dim();
    let m = evolved_global_state(cfg)?;
    Ok(DensityMatrix::from_computed(partial_trace(&m, &[d, d, 2, d], &[2])?, vec![2]))
}

/// 𝒱̃ = |Σ_b √(c_b^{β₀} c_b^{β₁}) W^{01}_{bb}|, with P̃ = ½ + ½𝒱̃cos(φ̃ + ψ).
pub fn visibility_onebath(cfg: &OneBathConfig) -> Result<VisibilityResult> {
    let w = overlap_matrix_w(cfg)?;
    let c0 = cfg.purification().weights(0);
    let c1 = cfg.purification().weights(1);
    let z: Complex64 = (0..cfg.dim()).map(|b| (c0[b] * c1[b]).sqrt() * w.matrix()[(b, b)]).sum();
    Ok(VisibilityResult::from_cross_term(z.conj()))
}

/// 𝒱̃_max = Σ_b √(c_b^{β₀} c_b^{β₁}), the fidelity of the two Gibbs states.
pub fn max_visibility_onebath(h: &HamiltonianSpec, t0: Temperature, t1: Temperature) -> f64 {
    let c0 = crate::thermal::gibbs_weights(h, t0);
    let c1 = crate::thermal::gibbs_weights(h, t1);
    c0.iter().zip(&c1).map(|(a, b)| (a * b).sqrt()).sum()
}
