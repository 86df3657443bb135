//! JSON-configured simulation scenarios.
//!
//! Times are given in units of `1/κ` (with `κ = √((κ_a² + κ_b²)/2)`) and CSV
//! output reports the dimensionless `κt`. A run writes one CSV per requested
//! series plus a JSON sidecar that is itself a valid config reproducing the
//! CSVs.

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{dark_state, evolve_schrodinger, StateVector, Trajectory};
use crate::entanglement::{negativity_csv, negativity_trajectory, negativity_trajectory_mixed};
use crate::error::{Error, Result};
use crate::hilbert::{BasisState, HilbertSpace};
use crate::lindblad::{
    dark_population, evolve_master, thermal_weights, DensityMatrix, DensityTrajectory, DissipationOptions,
    MasterEquation,
};
use crate::operators::{hamiltonian, Picture, SpinMode, SystemParams};
use crate::output::fmt_f64;

pub const GENERATOR: &str = concat!("nanoent ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialState {
    Basis { atom_exc: usize, n_a: usize, n_b: usize },
    Dark { n: usize },
    /// Cantilever a thermal, cantilever b and atoms in the ground state.
    Thermal { n_bar: f64, cutoff: usize },
    /// `[re, im]` per basis state, in basis order; normalised on load.
    Amplitudes { values: Vec<[f64; 2]> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceSpec {
    Product { atom_cap: usize, cap_a: usize, cap_b: usize },
    Manifold { atom_cap: usize, n: usize },
    Bounded { atom_cap: usize, max: usize },
}

impl SpaceSpec {
    pub fn build(&self) -> HilbertSpace {
        match *self {
            SpaceSpec::Product { atom_cap, cap_a, cap_b } => HilbertSpace::product(atom_cap, cap_a, cap_b),
            SpaceSpec::Manifold { atom_cap, n } => HilbertSpace::manifold(atom_cap, n),
            SpaceSpec::Bounded { atom_cap, max } => HilbertSpace::bounded(atom_cap, max),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    /// End time in units of `1/κ`.
    pub t_end: f64,
    pub samples: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    Populations,
    Negativity,
    DarkPopulations,
}

fn default_tol() -> f64 {
    1e-10
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    /// File stem for outputs.
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub mode: SpinMode,
    #[serde(default)]
    pub picture: Picture,
    pub params: SystemParams,
    #[serde(default)]
    pub cantilever_damping: bool,
    pub initial: InitialState,
    pub space: SpaceSpec,
    pub times: TimeGrid,
    pub outputs: Vec<OutputKind>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            let msg = e.to_string();
            let field = msg
                .split('`')
                .nth(1)
                .map_or_else(|| "<document>".to_string(), str::to_string);
            Error::config(field, msg)
        })
    }

    pub fn stem(&self) -> &str {
        self.name.as_deref().unwrap_or("scenario")
    }

    pub fn is_dissipative(&self) -> bool {
        self.params.gamma_atom > 0.0 || (self.cantilever_damping && self.params.gamma_cant > 0.0)
    }

    /// Sidecar form: this config stamped with the generator version.
    pub fn sidecar_json(&self) -> String {
        let mut c = self.clone();
        c.generator = Some(GENERATOR.to_string());
        serde_json::to_string_pretty(&c).expect("config serialises") + "\n"
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate().map_err(|e| Error::config("params", e.to_string()))?;
        if !(self.times.t_end > 0.0 && self.times.t_end.is_finite()) {
            return Err(Error::config("times.t_end", format!("must be positive, got {}", self.times.t_end)));
        }
        if self.times.samples < 2 {
            return Err(Error::config("times.samples", format!("must be at least 2, got {}", self.times.samples)));
        }
        if !(self.tol > 0.0) {
            return Err(Error::config("tol", format!("must be positive, got {}", self.tol)));
        }
        if self.outputs.is_empty() {
            return Err(Error::config("outputs", "request at least one series"));
        }
        if self.mode == SpinMode::Exact && self.space.build().atom_cap() > self.params.n_atoms {
            return Err(Error::config("space.atom_cap", "exceeds params.n_atoms in exact mode"));
        }
        Ok(())
    }
}

/// Everything needed to run a config, resolved.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub space: Arc<HilbertSpace>,
    /// Incoherent decomposition of the initial state.
    pub components: Vec<(f64, StateVector)>,
    /// Physical sample times.
    pub times: Vec<f64>,
    /// `κt` for each sample.
    pub scaled_times: Vec<f64>,
}

impl Prepared {
    pub fn is_pure(&self) -> bool {
        self.components.len() == 1
    }

    pub fn initial_density(&self) -> Result<DensityMatrix> {
        let parts: Vec<(f64, &StateVector)> = self.components.iter().map(|(w, s)| (*w, s)).collect();
        DensityMatrix::mixture(&self.space, &parts)
    }
}

pub fn prepare(config: &ScenarioConfig) -> Result<Prepared> {
    config.validate()?;
    let space = Arc::new(config.space.build());
    let field = "initial";
    let components = match &config.initial {
        InitialState::Basis { atom_exc, n_a, n_b } => {
            let s = BasisState::new(*atom_exc, *n_a, *n_b);
            let psi = StateVector::basis_state(&space, s).map_err(|e| Error::config(field, e.to_string()))?;
            vec![(1.0, psi)]
        }
        InitialState::Dark { n } => {
            let psi = dark_state(*n, config.params.kappa_a, config.params.kappa_b, &space)
                .map_err(|e| Error::config(field, e.to_string()))?;
            vec![(1.0, psi)]
        }
        InitialState::Thermal { n_bar, cutoff } => {
            let weights = thermal_weights(*n_bar, *cutoff).map_err(|e| Error::config(field, e.to_string()))?;
            let mut parts = Vec::new();
            for (n, w) in weights.into_iter().enumerate() {
                let psi = StateVector::basis_state(&space, BasisState::new(0, n, 0))
                    .map_err(|e| Error::config(field, e.to_string()))?;
                parts.push((w, psi));
            }
            parts
        }
        InitialState::Amplitudes { values } => {
            if values.len() != space.dim() {
                return Err(Error::config(
                    "initial.values",
                    format!("expected {} amplitudes, got {}", space.dim(), values.len()),
                ));
            }
            let v = values.iter().map(|[re, im]| Complex64::new(*re, *im)).collect::<Vec<_>>();
            let psi = StateVector::new(Arc::clone(&space), nalgebra::DVector::from_vec(v))?
                .normalized()
                .map_err(|e| Error::config("initial.values", e.to_string()))?;
            vec![(1.0, psi)]
        }
    };

    let kappa = config.params.kappa_scale();
    let unit = if kappa > 0.0 { 1.0 / kappa } else { 1.0 };
    let n = config.times.samples;
    let scaled_times: Vec<f64> = (0..n).map(|i| config.times.t_end * i as f64 / (n - 1) as f64).collect();
    let times = scaled_times.iter().map(|t| t * unit).collect();
    Ok(Prepared { space, components, times, scaled_times })
}

#[derive(Clone, Debug)]
pub enum Evolution {
    Pure(Trajectory),
    Mixed(DensityTrajectory),
}

/// Run the dynamics; sample times in the result are `κt`.
pub fn simulate(config: &ScenarioConfig) -> Result<(Prepared, Evolution)> {
    let prep = prepare(config)?;
    let h = hamiltonian(&config.params, &prep.space, config.picture, config.mode)?;
    let evolution = if prep.is_pure() && !config.is_dissipative() {
        let mut traj = evolve_schrodinger(&h, &prep.components[0].1, &prep.times, config.tol)?;
        traj.times.clone_from(&prep.scaled_times);
        Evolution::Pure(traj)
    } else {
        let opts = DissipationOptions { cantilever_damping: config.cantilever_damping };
        let eq = MasterEquation::with_hamiltonian(&h, &config.params, config.mode, opts)?;
        let mut traj = evolve_master(&prep.initial_density()?, &eq, &prep.times, config.tol)?;
        traj.times.clone_from(&prep.scaled_times);
        Evolution::Mixed(traj)
    };
    Ok((prep, evolution))
}

fn dark_population_csv(times: &[f64], rhos: &[DensityMatrix], params: &SystemParams) -> Result<String> {
    let space = rhos[0].space();
    let ks: Vec<usize> = (0..=space.max_excitations().min(3))
        .filter(|k| dark_state(*k, params.kappa_a, params.kappa_b, space).is_ok())
        .collect();
    let mut out = String::from("t");
    for k in &ks {
        out.push_str(&format!(",dark_pop_{k}"));
    }
    out.push('\n');
    for (t, rho) in times.iter().zip(rhos) {
        out.push_str(&fmt_f64(*t));
        for k in &ks {
            out.push(',');
            out.push_str(&fmt_f64(dark_population(rho, *k, params)?));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Named output files of one run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunOutput {
    pub files: Vec<(String, String)>,
}

impl RunOutput {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.files.iter().find(|(n, _)| n == name).map(|(_, c)| c.as_str())
    }
}

pub fn run(config: &ScenarioConfig) -> Result<RunOutput> {
    let (_, evolution) = simulate(config)?;
    let stem = config.stem();
    let mut files = Vec::new();
    let rhos: Vec<DensityMatrix> = match &evolution {
        Evolution::Pure(t) => t.states.iter().map(DensityMatrix::from_pure).collect(),
        Evolution::Mixed(t) => t.rhos.clone(),
    };
    let times = match &evolution {
        Evolution::Pure(t) => &t.times,
        Evolution::Mixed(t) => &t.times,
    };
    for kind in &config.outputs {
        let (suffix, body) = match kind {
            OutputKind::Populations => (
                "populations",
                match &evolution {
                    Evolution::Pure(t) => t.to_csv(),
                    Evolution::Mixed(t) => t.to_csv(&config.params)?,
                },
            ),
            OutputKind::Negativity => (
                "negativity",
                negativity_csv(&match &evolution {
                    Evolution::Pure(t) => negativity_trajectory(t),
                    Evolution::Mixed(t) => negativity_trajectory_mixed(t),
                }),
            ),
            OutputKind::DarkPopulations => ("dark_populations", dark_population_csv(times, &rhos, &config.params)?),
        };
        files.push((format!("{stem}_{suffix}.csv"), body));
    }
    files.push((format!("{stem}.json"), config.sidecar_json()));
    Ok(RunOutput { files })
}
