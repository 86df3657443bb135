//! Shared fixtures for the criterion benches.

use std::sync::Arc;

use nanoent::{hamiltonian, HilbertSpace, OperatorMatrix, Picture, SpinMode, SystemParams};

pub fn symmetric_params(n_atoms: usize) -> SystemParams {
    SystemParams::symmetric(1.0e4, 1.0, n_atoms)
}

/// Interaction-picture Hamiltonian on the `n`-excitation manifold, atom capped at one.
pub fn manifold_hamiltonian(n: usize) -> OperatorMatrix {
    let space = Arc::new(HilbertSpace::manifold(1, n));
    hamiltonian(&symmetric_params(100), &space, Picture::Interaction, SpinMode::Exact)
        .expect("valid fixture")
}
