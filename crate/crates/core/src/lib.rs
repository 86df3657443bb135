//! Dynamics and entanglement of two nanocantilevers coupled through a
//! collective atomic spin.
//!
//! The crate covers the truncated tensor-product basis ([`hilbert`]), ladder
//! operators and the resonant RWA Hamiltonian ([`operators`]), unitary
//! evolution and dark states ([`dynamics`]), collective-decay master-equation
//! evolution ([`lindblad`]), bipartite entanglement measures
//! ([`entanglement`]), device-to-rate conversion ([`physical`]), and the
//! JSON-configured scenarios and figure presets used by the CLI
//! ([`scenario`], [`figures`]).

pub mod dynamics;
pub mod entanglement;
pub mod error;
pub mod figures;
pub mod hilbert;
pub mod lindblad;
pub mod modes;
pub mod ode;
pub mod operators;
pub mod output;
pub mod physical;
pub mod scenario;

pub use dynamics::{
    analytic_one_excitation, dark_state, dark_weight_distribution, evolve_schrodinger,
    heisenberg_state, OneExcitationStart, StateVector, Trajectory,
};
pub use error::{Error, Result};
pub use hilbert::{build_space, manifold_space, BasisState, HilbertSpace, Restriction};
pub use operators::{
    annihilation_a, annihilation_b, collective_lowering, dicke_lowering, hamiltonian,
    hp_lowering, normal_mode_frequencies, CMatrix, NormalModes, OperatorMatrix, Picture,
    SpinMode, SystemParams,
};
pub use lindblad::{
    dark_population, evolve_master, lindblad_rhs, steady_state, thermal_mixture, DensityMatrix,
    DensityTrajectory, DissipationOptions, MasterEquation, SteadyState,
};
pub use entanglement::{
    negativity, negativity_trajectory, negativity_trajectory_mixed, partial_trace_atom,
    partial_transpose, participation_ratio, schmidt_decomposition, BipartiteState, Subsystem,
};
pub use physical::{
    coupling_constant, dipole_interaction_ratio, field_gradient, zero_point_amplitude, CouplingReport,
    DeviceParams, Rate,
};
pub use scenario::{run, simulate, Evolution, InitialState, OutputKind, RunOutput, ScenarioConfig, SpaceSpec, TimeGrid};
