//! Collisional partial thermalisation: a qubit probe meets fresh qubit bath
//! subsystems one at a time through a generalized-amplitude-damping unitary.
//!
//! Two engines are available. [`Engine::Naive`] keeps the two control-branch
//! state vectors over every purified bath subsystem and the probe.
//! [`Engine::Compact`] uses the fact that a subsystem is never touched again
//! after its collision and folds it into per-branch probe operators, so its
//! cost does not grow with the number of collisions.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::channels::{apply_unitary_channel, effective_operator, gadc_unitary};
use crate::error::{Error, Result};
use crate::qmath::{eigh, partial_trace, trace_distance, ComplexMatrix, DensityMatrix, StateVector, ZERO};
use crate::thermal::{gibbs_state, gibbs_weights, purify, HamiltonianSpec, Temperature};
use crate::twobath::VisibilityResult;

pub const DEFAULT_MAX_AMPLITUDES: usize = 4_194_304;
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// A single bath at T₀.
    Plain,
    /// Two baths selected by the control.
    TwoBath,
    /// One bath in a superposition of purifications at T₀ and T₁.
    OneBath,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Engine {
    #[default]
    Compact,
    Naive,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionConfig {
    scenario: Scenario,
    eta: f64,
    collisions: usize,
    temperatures: [Temperature; 2],
    probe: DensityMatrix,
    epsilon: f64,
    gap: f64,
    engine: Engine,
    max_amplitudes: usize,
}

impl CollisionConfig {
    /// Ground-state probe, unit gap, compact engine.
    pub fn new(scenario: Scenario, eta: f64, collisions: usize, t0: Temperature, t1: Temperature) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::OutOfRange { name: "eta", value: eta });
        }
        if collisions == 0 {
            return Err(Error::InvalidArgument("at least one collision is required".into()));
        }
        Ok(Self {
            scenario,
            eta,
            collisions,
            temperatures: [t0, t1],
            probe: DensityMatrix::diagonal(&[1.0, 0.0])?,
            epsilon: DEFAULT_EPSILON,
            gap: 1.0,
            engine: Engine::Compact,
            max_amplitudes: DEFAULT_MAX_AMPLITUDES,
        })
    }

    pub fn plain(eta: f64, collisions: usize, t: Temperature) -> Result<Self> {
        Self::new(Scenario::Plain, eta, collisions, t, t)
    }

    pub fn with_probe(mut self, probe: DensityMatrix) -> Result<Self> {
        if probe.dim() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, actual: probe.dim() });
        }
        self.probe = probe;
        Ok(self)
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::OutOfRange { name: "epsilon", value: epsilon });
        }
        self.epsilon = epsilon;
        Ok(self)
    }

    pub fn with_gap(mut self, gap: f64) -> Result<Self> {
        HamiltonianSpec::qubit(gap)?;
        self.gap = gap;
        Ok(self)
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn with_max_amplitudes(mut self, limit: usize) -> Self {
        self.max_amplitudes = limit;
        self
    }

    pub fn with_scenario(mut self, scenario: Scenario) -> Self {
        self.scenario = scenario;
        self
    }

    pub fn with_temperatures(mut self, t0: Temperature, t1: Temperature) -> Self {
        self.temperatures = [t0, t1];
        self
    }

    pub fn scenario(&self) -> Scenario {
        self.scenario
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn collisions(&self) -> usize {
        self.collisions
    }

    pub fn temperature(&self, i: usize) -> Temperature {
        self.temperatures[i]
    }

    pub fn probe(&self) -> &DensityMatrix {
        &self.probe
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn engine(&self) -> Engine {
        self.engine
    }

    pub fn max_amplitudes(&self) -> usize {
        self.max_amplitudes
    }

    pub fn hamiltonian(&self) -> HamiltonianSpec {
        HamiltonianSpec::qubit(self.gap).expect("gap validated")
    }

    fn gibbs(&self, i: usize) -> DensityMatrix {
        gibbs_state(&self.hamiltonian(), self.temperatures[i])
    }

    /// Amplitudes per branch vector in the naive engine.
    pub fn naive_dimension(&self) -> usize {
        let baths = if self.scenario == Scenario::TwoBath { 2 } else { 1 };
        let qubits = self.collisions.saturating_mul(2 * baths).saturating_add(1);
        u32::try_from(qubits).ok().and_then(|q| 2usize.checked_pow(q)).unwrap_or(usize::MAX)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollisionRecord {
    /// 1-based collision number.
    pub collision: usize,
    /// Distance of the unconditioned probe state from its equilibrium: Gibbs(T₀)
    /// for a single bath, ½(Gibbs(T₀) + Gibbs(T₁)) for the superposed scenarios.
    pub trace_distance: f64,
    pub visibility: Option<VisibilityResult>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CollisionTrace {
    pub records: Vec<CollisionRecord>,
}

impl CollisionTrace {
    pub fn last(&self) -> &CollisionRecord {
        self.records.last().expect("at least one collision")
    }

    pub fn distances(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.trace_distance).collect()
    }
}

/// Accumulated per-collision quantities before they are turned into records.
struct Snapshot {
    branch_states: [ComplexMatrix; 2],
    overlap: Complex64,
}

/// Runs the configured scenario and reports every collision.
pub fn simulate(cfg: &CollisionConfig) -> Result<CollisionTrace> {
    let snapshots = match cfg.engine {
        Engine::Compact => compact(cfg)?,
        Engine::Naive => naive(cfg)?,
    };
    let target = match cfg.scenario {
        Scenario::Plain => cfg.gibbs(0),
        _ => DensityMatrix::from_computed(&cfg.gibbs(0).into_matrix() + &cfg.gibbs(1).into_matrix(), vec![2]),
    };
    let records = snapshots
        .into_iter()
        .enumerate()
        .map(|(r, snap)| {
            let probe = match cfg.scenario {
                Scenario::Plain => snap.branch_states[0].clone(),
                _ => (&snap.branch_states[0] + &snap.branch_states[1]).scale_real(0.5),
            };
            let visibility = match cfg.scenario {
                Scenario::Plain => None,
                Scenario::TwoBath => Some(VisibilityResult::from_cross_term(snap.overlap)),
                Scenario::OneBath => Some(VisibilityResult::from_cross_term(snap.overlap.conj())),
            };
            let probe = DensityMatrix::from_computed(probe, vec![2]);
            Ok(CollisionRecord { collision: r + 1, trace_distance: trace_distance(&probe, &target)?, visibility })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CollisionTrace { records })
}

fn compact(cfg: &CollisionConfig) -> Result<Vec<Snapshot>> {
    let u = gadc_unitary(cfg.eta)?;
    let baths = [cfg.gibbs(0), cfg.gibbs(1)];
    let h = cfg.hamiltonian();
    let mut states = [cfg.probe.clone(), cfg.probe.clone()];
    let mut cross = cfg.probe.matrix().clone();
    let t_ops = [effective_operator(&u, &baths[0])?, effective_operator(&u, &baths[1])?];
    // Tr_A |θ⁰⟩⟨θ¹| for canonical purifications
    let c0 = gibbs_weights(&h, cfg.temperatures[0]);
    let c1 = gibbs_weights(&h, cfg.temperatures[1]);
    let sigma: Vec<f64> = c0.iter().zip(&c1).map(|(a, b)| (a * b).sqrt()).collect();
    let sigma = ComplexMatrix::diagonal(&sigma);
    // subsystems not yet reached still contribute ⟨θ¹|θ⁰⟩ each to the branch overlap
    let untouched = match cfg.scenario {
        Scenario::OneBath => sigma.trace().re,
        _ => 1.0,
    };

    let mut out = Vec::with_capacity(cfg.collisions);
    for r in 1..=cfg.collisions {
        for (state, bath) in states.iter_mut().zip(&baths) {
            *state = apply_unitary_channel(&u, state, bath)?;
        }
        cross = match cfg.scenario {
            Scenario::Plain => cross,
            Scenario::TwoBath => t_ops[0].matmul(&cross).matmul(&t_ops[1].dagger()),
            Scenario::OneBath => {
                let joint = u.matmul(&cross.kron(&sigma)).matmul(&u.dagger());
                partial_trace(&joint, &[2, 2], &[0])?
            }
        };
        out.push(Snapshot {
            branch_states: [states[0].matrix().clone(), states[1].matrix().clone()],
            overlap: cross.trace() * untouched.powi((cfg.collisions - r) as i32),
        });
    }
    Ok(out)
}

/// Branch state vectors over (B, A) pairs followed by the probe.
struct Register {
    branches: [StateVector; 2],
    probe_factor: usize,
}

impl Register {
    /// Bath pairs are laid out bath by bath; for a single bath both branches
    /// share the layout but are prepared at their own temperature.
    fn new(cfg: &CollisionConfig, probe: &StateVector) -> Result<Self> {
        let requested = cfg.naive_dimension();
        if requested > cfg.max_amplitudes {
            return Err(Error::MemoryBudget { requested, limit: cfg.max_amplitudes });
        }
        let h = cfg.hamiltonian();
        let theta = [purify(&h, cfg.temperatures[0]), purify(&h, cfg.temperatures[1])];
        let m = cfg.collisions;
        let build = |temps: &[usize]| -> StateVector {
            let mut v = StateVector::new(vec![Complex64::new(1.0, 0.0)], vec![1]).expect("unit scalar");
            for &i in temps {
                for _ in 0..m {
                    v = v.kron(&theta[i]);
                }
            }
            let v = v.kron(probe);
            let dims = vec![2; v.dims().len() - 1];
            StateVector::new(v.into_amplitudes(), dims).expect("product of normalized states")
        };
        let branches = match cfg.scenario {
            Scenario::TwoBath => [build(&[0, 1]), build(&[0, 1])],
            _ => [build(&[0]), build(&[1])],
        };
        let probe_factor = branches[0].dims().len() - 1;
        Ok(Self { branches, probe_factor })
    }

    /// Factor index of bath subsystem r (0-based) used by branch x.
    fn bath_factor(&self, cfg: &CollisionConfig, x: usize, r: usize) -> usize {
        match cfg.scenario {
            Scenario::TwoBath => 2 * (x * cfg.collisions + r),
            _ => 2 * r,
        }
    }

    fn collide(&mut self, cfg: &CollisionConfig, u: &ComplexMatrix, r: usize) -> Result<()> {
        for x in 0..2 {
            let b = self.bath_factor(cfg, x, r);
            let s = self.probe_factor;
            self.branches[x].apply(u, &[s, b])?;
        }
        Ok(())
    }

    /// Reduced probe state of branch x; the probe is the last factor.
    fn probe_state(&self, x: usize) -> ComplexMatrix {
        let a = self.branches[x].amplitudes();
        let mut m = ComplexMatrix::zeros(2, 2);
        for pair in a.chunks_exact(2) {
            for s in 0..2 {
                for sp in 0..2 {
                    m[(s, sp)] += pair[s] * pair[sp].conj();
                }
            }
        }
        m
    }

    /// ⟨Ψ₁|Ψ₀⟩
    fn overlap(&self) -> Complex64 {
        self.branches[1].inner(&self.branches[0])
    }
}

fn naive(cfg: &CollisionConfig) -> Result<Vec<Snapshot>> {
    let u = gadc_unitary(cfg.eta)?;
    let mut out: Vec<Snapshot> = (0..cfg.collisions)
        .map(|_| Snapshot { branch_states: [ComplexMatrix::zeros(2, 2), ComplexMatrix::zeros(2, 2)], overlap: ZERO })
        .collect();
    // the mixed probe is handled as an ensemble of its eigenvectors
    let e = eigh(cfg.probe.matrix())?;
    for (k, &p) in e.values.iter().enumerate() {
        if p <= 1e-15 {
            continue;
        }
        let eta = StateVector::new(e.vectors.col(k), vec![2])?;
        let mut reg = Register::new(cfg, &eta)?;
        for (r, snap) in out.iter_mut().enumerate() {
            reg.collide(cfg, &u, r)?;
            for x in 0..2 {
                snap.branch_states[x] = &snap.branch_states[x] + &reg.probe_state(x).scale_real(p);
            }
            snap.overlap += reg.overlap() * p;
        }
    }
    Ok(out)
}

/// Trace distance to Gibbs(T₀) after each collision with a single bath.
pub fn thermalization_curve(cfg: &CollisionConfig) -> Result<CollisionTrace> {
    simulate(&cfg.clone().with_scenario(Scenario::Plain))
}

pub fn twobath_collisional_visibility(cfg: &CollisionConfig) -> Result<VisibilityResult> {
    let trace = simulate(&cfg.clone().with_scenario(Scenario::TwoBath))?;
    Ok(trace.last().visibility.expect("superposed scenarios report visibility"))
}

pub fn onebath_collisional_visibility(cfg: &CollisionConfig) -> Result<VisibilityResult> {
    let trace = simulate(&cfg.clone().with_scenario(Scenario::OneBath))?;
    Ok(trace.last().visibility.expect("superposed scenarios report visibility"))
}

/// Least collision number whose trace distance falls below ε.
pub fn collisions_to_threshold(cfg: &CollisionConfig) -> Result<usize> {
    let trace = thermalization_curve(cfg)?;
    trace
        .records
        .iter()
        .find(|r| r.trace_distance < cfg.epsilon)
        .map(|r| r.collision)
        .ok_or(Error::ThresholdNotReached { epsilon: cfg.epsilon, collisions: cfg.collisions })
}

/// Evenly spaced temperature axis shared by both bath temperatures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub t_min: f64,
    pub t_max: f64,
    pub points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { t_min: 0.1, t_max: 5.0, points: 25 }
    }
}

impl GridSpec {
    pub fn new(t_min: f64, t_max: f64, points: usize) -> Result<Self> {
        if !(t_min >= 0.0 && t_min.is_finite()) {
            return Err(Error::OutOfRange { name: "t_min", value: t_min });
        }
        if !(t_max >= t_min && t_max.is_finite()) {
            return Err(Error::OutOfRange { name: "t_max", value: t_max });
        }
        Ok(Self { t_min, t_max, points })
    }

    pub fn values(&self) -> Vec<f64> {
        match self.points {
            0 => Vec::new(),
            1 => vec![self.t_min],
            n => (0..n).map(|k| self.t_min + (self.t_max - self.t_min) * k as f64 / (n - 1) as f64).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatmapCell {
    pub t0: f64,
    pub t1: f64,
    pub visibility: f64,
}

/// Visibility over the (T₀, T₁) grid, row-major with T₀ as the outer index.
/// Cells are computed in parallel.
pub fn visibility_heatmap(grid: &GridSpec, cfg: &CollisionConfig) -> Result<Vec<HeatmapCell>> {
    if cfg.scenario == Scenario::Plain {
        return Err(Error::InvalidArgument("heat maps need a superposed scenario".into()));
    }
    let axis = grid.values();
    let cells: Vec<(f64, f64)> = axis.iter().flat_map(|&a| axis.iter().map(move |&b| (a, b))).collect();
    cells
        .into_par_iter()
        .map(|(t0, t1)| {
            let cell = cfg.clone().with_temperatures(Temperature::from_t(t0)?, Temperature::from_t(t1)?);
            let trace = simulate(&cell)?;
            let visibility = trace.last().visibility.map_or(0.0, |v| v.visibility);
            Ok(HeatmapCell { t0, t1, visibility })
        })
        .collect()
}
