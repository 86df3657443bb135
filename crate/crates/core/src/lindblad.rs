//! Dissipative evolution under collective atomic decay
//!
//! ```text
//! dρ/dt = −i[H, ρ] + (Γ/2)(2 Ĵ₋ρĴ₊ − Ĵ₊Ĵ₋ρ − ρĴ₊Ĵ₋)
//! ```
//!
//! `Γ` is the single-spin rate; the collective enhancement (`NΓ` on the first
//! excitation) comes from the `Ĵ₋` matrix elements. An optional cantilever
//! damping channel `γ D[â] + γ D[b̂]` is available as an extension and is off
//! unless requested.
//!
//! The generator is applied directly to the density matrix; steady states are
//! found by integrating forward in time.

use std::collections::BTreeMap;
use std::sync::Arc;

use nalgebra::linalg::SymmetricEigen;
use num_complex::Complex64;

use crate::dynamics::{check_times, dark_mode_basis, dark_state, same_space, weights_from_basis, StateVector};
use crate::error::{Error, Result};
use crate::hilbert::{BasisState, HilbertSpace};
use crate::ode::{Dopri5, OdeOptions};
use crate::operators::{
    annihilation_a, annihilation_b, collective_lowering, hamiltonian, CMatrix, OperatorMatrix, Picture,
    SpinMode, SystemParams,
};
use crate::output::fmt_f64;

pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const MIN_EIGENVALUE: f64 = -1e-8;
/// Negative eigenvalues below this abort an integration.
pub const POSITIVITY_ABORT: f64 = -1e-6;

#[derive(Clone, Debug)]
pub struct DensityMatrix {
    space: Arc<HilbertSpace>,
    entries: CMatrix,
}

fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    SymmetricEigen::new(sym).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

impl DensityMatrix {
    pub fn new(space: Arc<HilbertSpace>, entries: CMatrix) -> Result<Self> {
        let d = space.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: entries.nrows() });
        }
        Ok(Self { space, entries })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let v = psi.amplitudes();
        Self { space: Arc::clone(psi.space()), entries: v * v.adjoint() }
    }

    /// Diagonal (incoherent) mixture of basis states.
    pub fn from_diagonal(space: &Arc<HilbertSpace>, weights: &[(BasisState, f64)]) -> Result<Self> {
        let mut entries = CMatrix::zeros(space.dim(), space.dim());
        for (s, w) in weights {
            let i = space.index_of(s)?;
            entries[(i, i)] += Complex64::new(*w, 0.0);
        }
        Ok(Self { space: Arc::clone(space), entries })
    }

    /// Incoherent mixture of pure states.
    pub fn mixture(space: &Arc<HilbertSpace>, parts: &[(f64, &StateVector)]) -> Result<Self> {
        let mut entries = CMatrix::zeros(space.dim(), space.dim());
        for (w, psi) in parts {
            same_space(space, psi.space())?;
            let v = psi.amplitudes();
            entries += v * v.adjoint() * Complex64::new(*w, 0.0);
        }
        Ok(Self { space: Arc::clone(space), entries })
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn trace(&self) -> Complex64 {
        self.entries.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.entries * &self.entries).trace().re
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).norm()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        min_hermitian_eigenvalue(&self.entries)
    }

    pub fn populations(&self) -> Vec<f64> {
        self.entries.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn population(&self, s: BasisState) -> f64 {
        self.space.find(&s).map_or(0.0, |i| self.entries[(i, i)].re)
    }

    pub fn atom_excited_population(&self) -> f64 {
        self.space
            .basis()
            .iter()
            .enumerate()
            .filter(|(_, s)| s.atom_exc > 0)
            .map(|(i, _)| self.entries[(i, i)].re)
            .sum()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> Result<f64> {
        same_space(&self.space, psi.space())?;
        let v = psi.amplitudes();
        Ok(v.dotc(&(&self.entries * v)).re)
    }

    /// Hermitian to 1e-10, unit trace to 1e-9, smallest eigenvalue ≥ −1e-8.
    pub fn check(&self) -> Result<()> {
        let herm = self.hermiticity_defect();
        let trace = self.trace();
        let min_eig = self.min_eigenvalue();
        if herm > HERMITIAN_TOL {
            return Err(Error::Validation(format!("density matrix not Hermitian (defect {herm:.3e})")));
        }
        if (trace - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::Validation(format!("density matrix trace {trace}")));
        }
        if min_eig < MIN_EIGENVALUE {
            return Err(Error::Validation(format!("density matrix eigenvalue {min_eig:.3e} < 0")));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct CollapseOperator {
    pub rate: f64,
    pub op: CMatrix,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DissipationOptions {
    /// Add `γ D[â] + γ D[b̂]` (extension; off by default).
    pub cantilever_damping: bool,
}

/// Hamiltonian plus collapse channels, with the non-Hermitian effective
/// Hamiltonian precomputed.
#[derive(Clone, Debug)]
pub struct MasterEquation {
    space: Arc<HilbertSpace>,
    h_eff: CMatrix,
    jumps: Vec<(CMatrix, CMatrix)>,
    decay_scale: f64,
}

fn check_closed_under<F>(space: &HilbertSpace, what: &str, lower: F) -> Result<()>
where
    F: Fn(&BasisState) -> Option<BasisState>,
{
    for s in space.basis() {
        if let Some(t) = lower(s) {
            if !space.contains(&t) {
                return Err(Error::Unsupported(format!(
                    "{what} maps {s} to {t}, which is outside the space; use a bounded or product space"
                )));
            }
        }
    }
    Ok(())
}

impl MasterEquation {
    pub fn new(
        space: &Arc<HilbertSpace>,
        params: &SystemParams,
        picture: Picture,
        mode: SpinMode,
        options: DissipationOptions,
    ) -> Result<Self> {
        let h = hamiltonian(params, space, picture, mode)?;
        Self::with_hamiltonian(&h, params, mode, options)
    }

    /// Use a prebuilt Hamiltonian; collapse channels come from `params`.
    pub fn with_hamiltonian(
        h: &OperatorMatrix,
        params: &SystemParams,
        mode: SpinMode,
        options: DissipationOptions,
    ) -> Result<Self> {
        params.validate()?;
        let space = h.space();
        let mut collapse = Vec::new();
        if params.gamma_atom > 0.0 {
            check_closed_under(space, "atomic decay", |s| {
                (s.atom_exc > 0).then(|| BasisState::new(s.atom_exc - 1, s.n_a, s.n_b))
            })?;
            let jm = collective_lowering(space, params.n_atoms, mode)?;
            collapse.push(CollapseOperator { rate: params.gamma_atom, op: jm.into_entries() });
        }
        if options.cantilever_damping && params.gamma_cant > 0.0 {
            check_closed_under(space, "cantilever damping", |s| {
                (s.n_a > 0).then(|| BasisState::new(s.atom_exc, s.n_a - 1, s.n_b))
            })?;
            check_closed_under(space, "cantilever damping", |s| {
                (s.n_b > 0).then(|| BasisState::new(s.atom_exc, s.n_a, s.n_b - 1))
            })?;
            for op in [annihilation_a(space), annihilation_b(space)] {
                collapse.push(CollapseOperator { rate: params.gamma_cant, op: op.into_entries() });
            }
        }
        let scale = if params.gamma_atom > 0.0 { params.gamma_atom } else { 1.0 };
        Ok(Self::from_parts(h, &collapse, scale))
    }

    pub fn from_parts(h: &OperatorMatrix, collapse: &[CollapseOperator], decay_scale: f64) -> Self {
        let mut h_eff = h.entries().clone();
        let mut jumps = Vec::with_capacity(collapse.len());
        for c in collapse {
            let l = &c.op * Complex64::new(c.rate.sqrt(), 0.0);
            let l_dag = l.adjoint();
            h_eff -= (&l_dag * &l) * Complex64::new(0.0, 0.5);
            jumps.push((l, l_dag));
        }
        Self { space: Arc::clone(h.space()), h_eff, jumps, decay_scale }
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    /// Rate used to make the steady-state residual threshold dimensionless:
    /// Γ when atomic decay is on, otherwise 1.
    pub fn decay_scale(&self) -> f64 {
        self.decay_scale
    }

    pub fn rhs(&self, rho: &CMatrix) -> CMatrix {
        let minus_i = Complex64::new(0.0, -1.0);
        let left = &self.h_eff * rho;
        let mut out = (&left - left.adjoint()) * minus_i;
        for (l, l_dag) in &self.jumps {
            out += l * rho * l_dag;
        }
        out
    }
}

/// Right-hand side of the master equation with collective decay only.
pub fn lindblad_rhs(
    rho: &DensityMatrix,
    h: &OperatorMatrix,
    params: &SystemParams,
    mode: SpinMode,
) -> Result<CMatrix> {
    same_space(h.space(), rho.space())?;
    let eq = MasterEquation::with_hamiltonian(h, params, mode, DissipationOptions::default())?;
    Ok(eq.rhs(rho.entries()))
}

#[derive(Clone, Debug)]
pub struct DensityTrajectory {
    pub times: Vec<f64>,
    pub rhos: Vec<DensityMatrix>,
    pub meta: BTreeMap<String, String>,
}

impl DensityTrajectory {
    pub fn space(&self) -> &Arc<HilbertSpace> {
        self.rhos[0].space()
    }

    /// `t, pop_*` per basis state, then `dark_pop_k` for `k = 0..=3` where
    /// the dark state fits in the space.
    pub fn to_csv(&self, params: &SystemParams) -> Result<String> {
        let space = self.space();
        let darks: Vec<(usize, StateVector)> = (0..=3)
            .filter_map(|k| dark_state(k, params.kappa_a, params.kappa_b, space).ok().map(|d| (k, d)))
            .collect();
        let mut header = vec!["t".to_string()];
        header.extend(space.basis().iter().map(|s| format!("pop_{}", s.label())));
        header.extend(darks.iter().map(|(k, _)| format!("dark_pop_{k}")));
        let mut out = header.join(",");
        out.push('\n');
        for (t, rho) in self.times.iter().zip(&self.rhos) {
            let mut row = vec![fmt_f64(*t)];
            row.extend(rho.populations().into_iter().map(fmt_f64));
            for (_, d) in &darks {
                row.push(fmt_f64(rho.expectation(d)?));
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
        Ok(out)
    }
}

fn positivity_guard(t: f64, rho: &CMatrix) -> Result<()> {
    let min_eig = min_hermitian_eigenvalue(rho);
    if min_eig < POSITIVITY_ABORT {
        return Err(Error::Integration {
            t,
            step: f64::NAN,
            reason: format!("density matrix lost positivity (eigenvalue {min_eig:.3e}); tighten the tolerance"),
        });
    }
    Ok(())
}

pub fn evolve_master(
    rho0: &DensityMatrix,
    eq: &MasterEquation,
    times: &[f64],
    tol: f64,
) -> Result<DensityTrajectory> {
    same_space(eq.space(), rho0.space())?;
    check_times(times)?;
    rho0.check()?;

    let mut stepper = Dopri5::new(|_, y: &CMatrix| eq.rhs(y), 0.0, rho0.entries().clone(), OdeOptions::with_tol(tol));
    let mut rhos = Vec::with_capacity(times.len());
    for &t in times {
        stepper.advance_to(t)?;
        positivity_guard(t, stepper.y())?;
        rhos.push(DensityMatrix { space: Arc::clone(rho0.space()), entries: stepper.y().clone() });
    }
    Ok(DensityTrajectory { times: times.to_vec(), rhos, meta: BTreeMap::new() })
}

#[derive(Clone, Debug)]
pub struct SteadyState {
    pub rho: DensityMatrix,
    pub converged: bool,
    pub t_reached: f64,
    /// Frobenius norm of the generator at the returned state.
    pub residual: f64,
}

/// Integrate until `‖dρ/dt‖_F < epsilon · Γ` or `t_max`.
pub fn steady_state(
    rho0: &DensityMatrix,
    eq: &MasterEquation,
    epsilon: f64,
    t_max: f64,
    tol: f64,
) -> Result<SteadyState> {
    if epsilon <= 0.0 {
        return Err(Error::Parameter(format!("epsilon must be positive, got {epsilon}")));
    }
    same_space(eq.space(), rho0.space())?;
    rho0.check()?;
    let threshold = epsilon * eq.decay_scale();

    let mut stepper = Dopri5::new(|_, y: &CMatrix| eq.rhs(y), 0.0, rho0.entries().clone(), OdeOptions::with_tol(tol));
    let mut residual = stepper.dy().norm();
    while residual >= threshold && stepper.t() < t_max {
        stepper.step(t_max)?;
        residual = stepper.dy().norm();
    }
    positivity_guard(stepper.t(), stepper.y())?;
    Ok(SteadyState {
        rho: DensityMatrix { space: Arc::clone(rho0.space()), entries: stepper.y().clone() },
        converged: residual < threshold,
        t_reached: stepper.t(),
        residual,
    })
}

/// Unnormalised geometric occupation `n̄ⁿ / (1 + n̄)ⁿ⁺¹`.
pub fn thermal_occupation(n_bar: f64, n: usize) -> f64 {
    let r = n_bar / (1.0 + n_bar);
    r.powi(n as i32) / (1.0 + n_bar)
}

/// Thermal weights on `0..=cutoff`, renormalised over the truncation.
pub fn thermal_weights(n_bar: f64, cutoff: usize) -> Result<Vec<f64>> {
    if !(n_bar >= 0.0) || !n_bar.is_finite() {
        return Err(Error::Parameter(format!("n_bar must be finite and >= 0, got {n_bar}")));
    }
    if cutoff < 1 {
        return Err(Error::Parameter("thermal cutoff must be >= 1".into()));
    }
    let raw: Vec<f64> = (0..=cutoff).map(|n| thermal_occupation(n_bar, n)).collect();
    let total: f64 = raw.iter().sum();
    Ok(raw.into_iter().map(|p| p / total).collect())
}

/// Cantilever a thermal (truncated at `cutoff`), cantilever b and atoms in
/// their ground states.
pub fn thermal_mixture(n_bar: f64, cutoff: usize, space: &Arc<HilbertSpace>) -> Result<DensityMatrix> {
    let weights = thermal_weights(n_bar, cutoff)?;
    let diag: Vec<(BasisState, f64)> =
        weights.iter().enumerate().map(|(n, w)| (BasisState::new(0, n, 0), *w)).collect();
    for (s, _) in &diag {
        if !space.contains(s) {
            return Err(Error::Capacity(format!("thermal cutoff {cutoff} needs {s} in the space")));
        }
    }
    DensityMatrix::from_diagonal(space, &diag)
}

/// `⟨D_n|ρ|D_n⟩` for the `n`-quantum dark state.
pub fn dark_population(rho: &DensityMatrix, n: usize, params: &SystemParams) -> Result<f64> {
    let d = dark_state(n, params.kappa_a, params.kappa_b, rho.space())?;
    rho.expectation(&d)
}

/// Dark-mode occupation distribution of a mixed state.
pub fn dark_weight_distribution_mixed(rho: &DensityMatrix, params: &SystemParams) -> Result<Vec<f64>> {
    let (vectors, truncated) = dark_mode_basis(rho.space(), params.kappa_a, params.kappa_b)?;
    let m = rho.entries();
    let lost: f64 = truncated.iter().flatten().map(|&i| m[(i, i)].re).sum();
    if lost > 1e-12 {
        return Err(Error::Capacity(format!("state has weight {lost:.3e} in sectors truncated by the cantilever caps")));
    }
    Ok(weights_from_basis(&vectors, |v| {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, ci) in v {
            for (j, cj) in v {
                acc += ci.conj() * m[(*i, *j)] * cj;
            }
        }
        acc.re
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::HilbertSpace;
    use approx::assert_abs_diff_eq;

    fn bounded(n: usize) -> Arc<HilbertSpace> {
        Arc::new(HilbertSpace::bounded(1, n))
    }

    fn decaying(n_gamma_over_kappa: f64) -> SystemParams {
        SystemParams::symmetric(1.0, 1.0, 100).with_decay(n_gamma_over_kappa / 100.0)
    }

    #[test]
    fn von_neumann_limit() {
        let sp = bounded(1);
        let p = SystemParams::symmetric(1.0, 0.7, 100);
        let h = hamiltonian(&p, &sp, Picture::Interaction, SpinMode::Exact).unwrap();
        let psi = StateVector::basis_state(&sp, (0, 1, 0).into()).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let rhs = lindblad_rhs(&rho, &h, &p, SpinMode::Exact).unwrap();
        let expected = (h.entries() * rho.entries() - rho.entries() * h.entries()) * Complex64::new(0.0, -1.0);
        assert!((rhs - expected).norm() < 1e-15);
    }

    #[test]
    fn collective_decay_rate() {
        let sp = bounded(1);
        let gamma = 0.05;
        let mut p = SystemParams::symmetric(1.0, 0.0, 100).with_decay(gamma);
        p.kappa_b = 0.0;
        let h = OperatorMatrix::zeros(Arc::clone(&sp));
        let rho = DensityMatrix::from_diagonal(&sp, &[((1, 0, 0).into(), 1.0)]).unwrap();
        let rhs = lindblad_rhs(&rho, &h, &p, SpinMode::Exact).unwrap();
        let e = sp.index_of(&(1, 0, 0).into()).unwrap();
        let g = sp.index_of(&BasisState::vacuum()).unwrap();
        assert_abs_diff_eq!(rhs[(e, e)].re, -100.0 * gamma, epsilon = 1e-12);
        assert_abs_diff_eq!(rhs[(g, g)].re, 100.0 * gamma, epsilon = 1e-12);
        assert_abs_diff_eq!(rhs.trace().norm(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn dark_projector_is_stationary() {
        let sp = bounded(3);
        let p = decaying(10.0);
        let h = hamiltonian(&p, &sp, Picture::Interaction, SpinMode::Exact).unwrap();
        for n in 0..=3 {
            let d = dark_state(n, 1.0, 1.0, &sp).unwrap();
            let rhs = lindblad_rhs(&DensityMatrix::from_pure(&d), &h, &p, SpinMode::Exact).unwrap();
            assert!(rhs.norm() < 1e-12, "n = {n}: {}", rhs.norm());
        }
    }

    #[test]
    fn manifold_space_rejected_for_decay() {
        let sp = Arc::new(HilbertSpace::manifold(1, 1));
        let eq = MasterEquation::new(&sp, &decaying(10.0), Picture::Interaction, SpinMode::Exact, DissipationOptions::default());
        assert!(matches!(eq, Err(Error::Unsupported(_))));
    }

    #[test]
    fn ground_state_is_constant() {
        let sp = bounded(2);
        let p = decaying(10.0);
        let eq = MasterEquation::new(&sp, &p, Picture::Interaction, SpinMode::Exact, DissipationOptions::default()).unwrap();
        let rho0 = DensityMatrix::from_diagonal(&sp, &[(BasisState::vacuum(), 1.0)]).unwrap();
        let traj = evolve_master(&rho0, &eq, &[0.0, 1.0, 10.0], 1e-10).unwrap();
        for rho in &traj.rhos {
            assert!((rho.entries() - rho0.entries()).norm() < 1e-15);
        }
        let ss = steady_state(&rho0, &eq, 1e-8, 10.0, 1e-10).unwrap();
        assert!(ss.converged);
        assert_eq!(ss.t_reached, 0.0);
    }

    #[test]
    fn thermal_law() {
        // geometric law evaluated by hand for n̄ = 0.3
        let raw: Vec<f64> = (0..=3).map(|n| thermal_occupation(0.3, n)).collect();
        let r: f64 = 0.3 / 1.3;
        for (n, p) in raw.iter().enumerate() {
            assert_abs_diff_eq!(*p, r.powi(n as i32) / 1.3, epsilon = 1e-15);
        }
        assert_abs_diff_eq!(raw[1], 0.1775, epsilon = 1e-4);
        assert_abs_diff_eq!(raw[2], 0.0410, epsilon = 1e-4);
        assert_abs_diff_eq!(raw[3], 0.0095, epsilon = 1e-4);
        let w = thermal_weights(0.3, 3).unwrap();
        assert_abs_diff_eq!(w.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        let mean: f64 = w.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
        assert!(mean <= 0.3);

        let sp = bounded(3);
        let vac = thermal_mixture(0.0, 3, &sp).unwrap();
        assert_abs_diff_eq!(vac.population(BasisState::vacuum()), 1.0);
        assert!(thermal_mixture(-1.0, 3, &sp).is_err());
        assert!(thermal_mixture(0.3, 0, &sp).is_err());
        assert!(matches!(thermal_mixture(0.3, 4, &sp), Err(Error::Capacity(_))));
    }

    #[test]
    fn dark_population_basics() {
        let sp = bounded(2);
        let p = decaying(10.0);
        for n in 0..=2 {
            let d = DensityMatrix::from_pure(&dark_state(n, 1.0, 1.0, &sp).unwrap());
            assert_abs_diff_eq!(dark_population(&d, n, &p).unwrap(), 1.0, epsilon = 1e-14);
        }
        let ground = DensityMatrix::from_diagonal(&sp, &[(BasisState::vacuum(), 1.0)]).unwrap();
        assert_abs_diff_eq!(dark_population(&ground, 1, &p).unwrap(), 0.0);
    }

    #[test]
    fn one_excitation_relaxes_to_half_dark() {
        let sp = bounded(1);
        let p = decaying(10.0);
        let eq = MasterEquation::new(&sp, &p, Picture::Interaction, SpinMode::Exact, DissipationOptions::default()).unwrap();
        let rho0 = DensityMatrix::from_diagonal(&sp, &[((0, 1, 0).into(), 1.0)]).unwrap();
        let ss = steady_state(&rho0, &eq, 1e-8, 500.0, 1e-10).unwrap();
        assert!(ss.converged);
        assert_abs_diff_eq!(ss.rho.population(BasisState::vacuum()), 0.5, epsilon = 1e-6);
        assert_abs_diff_eq!(dark_population(&ss.rho, 1, &p).unwrap(), 0.5, epsilon = 1e-6);
        assert!(ss.rho.atom_excited_population() < 1e-6);
        ss.rho.check().unwrap();
    }

    #[test]
    fn cantilever_damping_extension_empties_everything() {
        let sp = bounded(1);
        let mut p = decaying(10.0);
        p.gamma_cant = 0.5;
        let opts = DissipationOptions { cantilever_damping: true };
        let eq = MasterEquation::new(&sp, &p, Picture::Interaction, SpinMode::Exact, opts).unwrap();
        let rho0 = DensityMatrix::from_pure(&dark_state(1, 1.0, 1.0, &sp).unwrap());
        let ss = steady_state(&rho0, &eq, 1e-9, 200.0, 1e-10).unwrap();
        assert!(ss.converged);
        assert_abs_diff_eq!(ss.rho.population(BasisState::vacuum()), 1.0, epsilon = 1e-6);
    }

    #[test]
    fn mixed_dark_weights_match_pure() {
        let sp = bounded(3);
        let p = decaying(10.0);
        let psi = StateVector::basis_state(&sp, (0, 3, 0).into()).unwrap();
        let pure = crate::dynamics::dark_weight_distribution(&psi, &p).unwrap();
        let mixed = dark_weight_distribution_mixed(&DensityMatrix::from_pure(&psi), &p).unwrap();
        assert_eq!(pure.len(), mixed.len());
        for (a, b) in pure.iter().zip(&mixed) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn population_csv_has_dark_columns() {
        let sp = bounded(1);
        let p = decaying(10.0);
        let rho = DensityMatrix::from_diagonal(&sp, &[(BasisState::vacuum(), 1.0)]).unwrap();
        let traj = DensityTrajectory { times: vec![0.0], rhos: vec![rho], meta: BTreeMap::new() };
        let csv = traj.to_csv(&p).unwrap();
        assert_eq!(
            csv.lines().next().unwrap(),
            "t,pop_0_0_0,pop_0_0_1,pop_0_1_0,pop_1_0_0,dark_pop_0,dark_pop_1"
        );
    }
}
