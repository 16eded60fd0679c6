use std::path::Path;

use serde_json::{json, Value};
use thermosup::channels::RepresentationUnitary;
use thermosup::collision::{self, CollisionConfig, Engine, GridSpec, Scenario, DEFAULT_MAX_AMPLITUDES};
use thermosup::onebath::{self, OneBathConfig};
use thermosup::qmath::{trace_distance, DensityMatrix};
use thermosup::thermal::{gibbs_state, GibbsWeights, HamiltonianSpec, PurificationBranch, PurificationSpec, Temperature};
use thermosup::twobath::{self, TwoBathConfig, PHASE_CUTOFF};

use crate::config::{Cli, EngineArg, Experiment, ExperimentConfig, Format, Literal, Params, ScenarioArg};
use crate::error::CliError;
use crate::literals::{format_temperature, parse_probe, parse_temperature, parse_unitary};
use crate::record::{matrix_value, Cell, ResultRecord, Table};

pub const MAX_DIM_ENV: &str = "THERMOSUP_MAX_DIM";

/// A finished run: the JSON record and, for tabular experiments, the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub record: ResultRecord,
    pub table: Option<Table>,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.record.to_json(),
            Format::Csv => match &self.table {
                Some(t) => t.to_csv(),
                None => scalar_table(&self.record).to_csv(),
            },
        }
    }
}

fn scalar_table(record: &ResultRecord) -> Table {
    let rows = record
        .outputs
        .iter()
        .filter_map(|(k, v)| v.as_f64().map(|x| vec![Cell::Text(k.clone()), Cell::Float(x)]))
        .collect();
    Table { header: vec!["quantity", "value"], rows }
}

pub fn default_format(experiment: Experiment) -> Format {
    match experiment {
        Experiment::Collide | Experiment::Heatmap => Format::Csv,
        _ => Format::Json,
    }
}

/// Parse-merge-execute-emit. Returns the rendered output when no `--out` was given.
pub fn run(cli: &Cli) -> Result<Option<String>, CliError> {
    let cfg = ExperimentConfig::from_cli(cli)?;
    let max_dim = max_dim_from_env()?;
    let report = execute(&cfg, max_dim)?;
    let format = cfg.params.format.unwrap_or_else(|| default_format(cfg.experiment));
    let text = report.render(format);
    match &cfg.params.out {
        Some(path) => {
            write_output(path, &text)?;
            Ok(None)
        }
        None => Ok(Some(text)),
    }
}

fn write_output(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })
}

fn max_dim_from_env() -> Result<usize, CliError> {
    match std::env::var(MAX_DIM_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Parse(format!("{MAX_DIM_ENV}={v:?} is not a count"))),
        Err(_) => Ok(DEFAULT_MAX_AMPLITUDES),
    }
}

pub fn execute(cfg: &ExperimentConfig, max_dim: usize) -> Result<Report, CliError> {
    let p = &cfg.params;
    let mut record = ResultRecord::new(cfg.experiment.name());
    let table = match cfg.experiment {
        Experiment::Gibbs => gibbs(p, &mut record)?,
        Experiment::TwoBath => two_bath(p, &mut record)?,
        Experiment::OneBath => one_bath(p, &mut record)?,
        Experiment::Collide => collide(p, &mut record, max_dim)?,
        Experiment::Heatmap => heatmap(p, &mut record, max_dim)?,
        Experiment::MaxVis => max_vis(p, &mut record)?,
    };
    Ok(Report { record, table })
}

fn hamiltonian(p: &Params, record: &mut ResultRecord) -> Result<HamiltonianSpec, CliError> {
    let h = match &p.energies {
        Some(e) => HamiltonianSpec::new(e.clone())?,
        None => HamiltonianSpec::qubit(p.gap.unwrap_or(1.0))?,
    };
    record.input("energies", h.energies().to_vec());
    Ok(h)
}

fn temperature(lit: Option<&Literal>, key: &str, record: &mut ResultRecord) -> Result<Temperature, CliError> {
    let t = match lit {
        Some(l) => parse_temperature(&l.0)?,
        None => Temperature::from_t(1.0)?,
    };
    record.input(key, format_temperature(t));
    Ok(t)
}

fn probe(p: &Params, dim: usize, record: &mut ResultRecord) -> Result<DensityMatrix, CliError> {
    let spec = p.probe.as_deref().unwrap_or("ground");
    record.input("probe", spec);
    parse_probe(spec, dim)
}

fn finite(name: &'static str, x: f64) -> Result<f64, CliError> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::Validation(format!("{name} must be finite")))
    }
}

fn gibbs(p: &Params, record: &mut ResultRecord) -> Result<Option<Table>, CliError> {
    let h = hamiltonian(p, record)?;
    let t = temperature(p.t.as_ref().or(p.t0.as_ref()), "t", record)?;
    let g = GibbsWeights::new(&h, t);
    record.output("weights", g.weights().to_vec());
    record.output("log_partition", g.log_partition());
    record.output("state", matrix_value(gibbs_state(&h, t).matrix()));
    Ok(None)
}

fn two_bath(p: &Params, record: &mut ResultRecord) -> Result<Option<Table>, CliError> {
    let h = hamiltonian(p, record)?;
    let t0 = temperature(p.t0.as_ref(), "t0", record)?;
    let t1 = temperature(p.t1.as_ref(), "t1", record)?;
    let rho = probe(p, h.dim(), record)?;
    let phi = finite("phi", p.phi.unwrap_or(0.0))?;
    record.input("phi", phi);
    let mut cfg = TwoBathConfig::new(h.clone(), t0, t1, rho.clone())?.with_phi(phi)?;
    if p.u0.is_some() || p.u1.is_some() {
        let seed = p.seed.unwrap_or(0);
        let s0 = p.u0.as_deref().unwrap_or("identity");
        let s1 = p.u1.as_deref().unwrap_or("identity");
        record.input("u0", s0);
        record.input("u1", s1);
        record.input("seed", seed);
        let u0 = RepresentationUnitary::new(parse_unitary(s0, h.dim(), seed)?)?;
        let u1 = RepresentationUnitary::new(parse_unitary(s1, h.dim(), seed.wrapping_add(1))?)?;
        cfg = cfg.with_representation(u0, u1)?;
    }
    let state = twobath::conditional_probe_state(&cfg)?;
    let vis = twobath::visibility(&cfg)?;
    record.output("conditional_state", matrix_value(state.matrix()));
    record.output("probability", state.trace());
    record.output("visibility", vis.visibility);
    record.output("phase", vis.phase);
    if state.trace() > 0.0 {
        let normalized = state.normalize()?;
        record.output("trace_distance_to_gibbs_t0", trace_distance(&normalized, &cfg.bath_state(0))?);
    }
    record.output("max_visibility", twobath::max_visibility_closed_form(&h, t0, t1, &rho)?);
    record.tolerance("phase_cutoff", PHASE_CUTOFF);
    Ok(None)
}

fn one_bath(p: &Params, record: &mut ResultRecord) -> Result<Option<Table>, CliError> {
    let h = hamiltonian(p, record)?;
    let t0 = temperature(p.t0.as_ref(), "t0", record)?;
    let t1 = temperature(p.t1.as_ref(), "t1", record)?;
    let rho = probe(p, h.dim(), record)?;
    let phi0 = finite("phi0", p.phi0.unwrap_or(0.0))?;
    let phi1 = finite("phi1", p.phi1.unwrap_or(0.0))?;
    let phi_c = finite("phi_c", p.phi_c.unwrap_or(0.0))?;
    record.input("phi0", phi0);
    record.input("phi1", phi1);
    record.input("phi_c", phi_c);
    let b0 = PurificationBranch { phase: phi0, ..PurificationBranch::canonical(&h, t0) };
    let b1 = PurificationBranch { phase: phi1, ..PurificationBranch::canonical(&h, t1) };
    let spec = PurificationSpec::new(h.clone(), b0, b1)?;
    let mut cfg = OneBathConfig::new(spec, rho)?.with_phi_c(phi_c)?;
    if p.u0.is_some() || p.u1.is_some() {
        let seed = p.seed.unwrap_or(0);
        let s0 = p.u0.as_deref().unwrap_or("identity");
        let s1 = p.u1.as_deref().unwrap_or("identity");
        record.input("u0", s0);
        record.input("u1", s1);
        record.input("seed", seed);
        let d2 = h.dim() * h.dim();
        cfg = cfg.with_local_unitaries(parse_unitary(s0, d2, seed)?, parse_unitary(s1, d2, seed.wrapping_add(1))?)?;
    }
    let out = onebath::probe_output(&cfg)?;
    let vis = onebath::visibility_onebath(&cfg)?;
    record.output("probe_output", matrix_value(out.matrix()));
    record.output("bath_state", matrix_value(onebath::conditional_bath_state(&cfg)?.matrix()));
    record.output("overlap_w", matrix_value(onebath::overlap_matrix_w(&cfg)?.matrix()));
    record.output("probability", out.trace());
    record.output("visibility", vis.visibility);
    record.output("phase", vis.phase);
    record.output("phi_tilde", cfg.phi_tilde());
    record.output("max_visibility", onebath::max_visibility_onebath(&h, t0, t1));
    record.tolerance("phase_cutoff", PHASE_CUTOFF);
    Ok(None)
}

fn collision_config(p: &Params, record: &mut ResultRecord, scenario: Scenario, max_dim: usize) -> Result<CollisionConfig, CliError> {
    let gap = match &p.energies {
        Some(e) if e.len() == 2 => e[1] - e[0],
        Some(e) => return Err(CliError::Validation(format!("collisions need a qubit, got {} levels", e.len()))),
        None => p.gap.unwrap_or(1.0),
    };
    record.input("gap", gap);
    let eta = p.eta.unwrap_or(0.8);
    let m = p.m.unwrap_or(3);
    record.input("eta", eta);
    record.input("m", m);
    let (t0, t1) = if scenario == Scenario::Plain {
        let t = temperature(p.t.as_ref().or(p.t0.as_ref()), "t", record)?;
        (t, t)
    } else {
        (temperature(p.t0.as_ref(), "t0", record)?, temperature(p.t1.as_ref(), "t1", record)?)
    };
    let engine = match p.engine.unwrap_or(EngineArg::Compact) {
        EngineArg::Compact => Engine::Compact,
        EngineArg::Naive => Engine::Naive,
    };
    record.input("engine", if engine == Engine::Naive { "naive" } else { "compact" });
    let rho = probe(p, 2, record)?;
    let epsilon = p.epsilon.unwrap_or(collision::DEFAULT_EPSILON);
    record.input("epsilon", epsilon);
    record.tolerance("max_amplitudes", max_dim as f64);
    Ok(CollisionConfig::new(scenario, eta, m, t0, t1)?
        .with_gap(gap)?
        .with_probe(rho)?
        .with_epsilon(epsilon)?
        .with_engine(engine)
        .with_max_amplitudes(max_dim))
}

fn scenario_name(s: Scenario) -> &'static str {
    match s {
        Scenario::Plain => "plain",
        Scenario::TwoBath => "twobath",
        Scenario::OneBath => "onebath",
    }
}

fn scenario(arg: Option<ScenarioArg>, default: Scenario) -> Scenario {
    match arg {
        Some(ScenarioArg::Plain) => Scenario::Plain,
        Some(ScenarioArg::Twobath) => Scenario::TwoBath,
        Some(ScenarioArg::Onebath) => Scenario::OneBath,
        None => default,
    }
}

fn collide(p: &Params, record: &mut ResultRecord, max_dim: usize) -> Result<Option<Table>, CliError> {
    let sc = scenario(p.scenario, Scenario::Plain);
    record.input("scenario", scenario_name(sc));
    let cfg = collision_config(p, record, sc, max_dim)?;
    let trace = collision::simulate(&cfg)?;
    let records: Vec<Value> = trace
        .records
        .iter()
        .map(|r| {
            let mut v = json!({ "collision": r.collision, "trace_distance": r.trace_distance });
            if let Some(vis) = r.visibility {
                v["visibility"] = json!(vis.visibility);
                v["phase"] = json!(vis.phase);
            }
            v
        })
        .collect();
    record.output("records", records);
    let threshold = trace.records.iter().find(|r| r.trace_distance < cfg.epsilon()).map(|r| r.collision);
    record.output("collisions_to_threshold", threshold);
    if let Some(v) = trace.last().visibility {
        record.output("visibility", v.visibility);
    }
    let rows = trace.records.iter().map(|r| vec![Cell::Int(r.collision), Cell::Float(r.trace_distance)]).collect();
    Ok(Some(Table { header: vec!["collision", "trace_distance"], rows }))
}

fn heatmap(p: &Params, record: &mut ResultRecord, max_dim: usize) -> Result<Option<Table>, CliError> {
    let sc = scenario(p.scenario, Scenario::TwoBath);
    if sc == Scenario::Plain {
        return Err(CliError::Validation("heatmap needs scenario twobath or onebath".into()));
    }
    record.input("scenario", scenario_name(sc));
    let defaults = GridSpec::default();
    let grid = GridSpec::new(
        p.t_min.unwrap_or(defaults.t_min),
        p.t_max.unwrap_or(defaults.t_max),
        p.grid.unwrap_or(defaults.points),
    )?;
    record.input("t_min", grid.t_min);
    record.input("t_max", grid.t_max);
    record.input("grid", grid.points);
    let cfg = collision_config(p, record, sc, max_dim)?;
    // the grid supplies both temperatures
    record.inputs.remove("t0");
    record.inputs.remove("t1");
    let cells = collision::visibility_heatmap(&grid, &cfg)?;
    record.output(
        "cells",
        cells.iter().map(|c| json!({ "t0": c.t0, "t1": c.t1, "visibility": c.visibility })).collect::<Vec<_>>(),
    );
    let rows = cells.iter().map(|c| vec![Cell::Float(c.t0), Cell::Float(c.t1), Cell::Float(c.visibility)]).collect();
    Ok(Some(Table { header: vec!["t0", "t1", "visibility"], rows }))
}

fn max_vis(p: &Params, record: &mut ResultRecord) -> Result<Option<Table>, CliError> {
    let h = hamiltonian(p, record)?;
    let t0 = temperature(p.t0.as_ref(), "t0", record)?;
    let t1 = temperature(p.t1.as_ref(), "t1", record)?;
    let rho = probe(p, h.dim(), record)?;
    let trials = p.trials.unwrap_or(20_000);
    let seed = p.seed.unwrap_or(0);
    record.input("trials", trials);
    record.input("seed", seed);
    let closed = twobath::max_visibility_closed_form(&h, t0, t1, &rho)?;
    let search = twobath::max_visibility_search(&h, t0, t1, &rho, trials, seed)?;
    let (a0, a1) = twobath::argmax_unitaries(&rho)?;
    let (z0, z1) = twobath::zero_visibility_unitaries(&h, &rho)?;
    record.output("closed_form", closed);
    record.output("search", search);
    record.output("argmax_visibility", twobath::visibility_for_unitaries(&h, t0, t1, &rho, &a0, &a1)?.visibility);
    record.output("argmax_u", matrix_value(&a0));
    record.output("zero_visibility", twobath::visibility_for_unitaries(&h, t0, t1, &rho, &z0, &z1)?.visibility);
    record.output("onebath_max", onebath::max_visibility_onebath(&h, t0, t1));
    Ok(None)
}
