//! Unitary evolution: adaptive Schrödinger propagation, the closed-form
//! normal-mode (Heisenberg) solution, and dark-state construction.

use std::collections::BTreeMap;
use std::f64::consts::SQRT_2;
use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hilbert::{BasisState, HilbertSpace};
use crate::modes::{real_form, CreationPolynomial, ModeForm};
use crate::ode::{integrate, OdeOptions};
use crate::operators::{normal_mode_frequencies, CMatrix, OperatorMatrix, Picture, SystemParams};
use crate::output::fmt_f64;

pub type CVector = DVector<Complex64>;

/// Relative tolerance used when checking that a Hamiltonian is Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Default local error tolerance of the adaptive integrator.
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Clone, Debug)]
pub struct StateVector {
    space: Arc<HilbertSpace>,
    amplitudes: CVector,
}

impl StateVector {
    pub fn new(space: Arc<HilbertSpace>, amplitudes: CVector) -> Result<Self> {
        if amplitudes.len() != space.dim() {
            return Err(Error::DimensionMismatch { expected: space.dim(), found: amplitudes.len() });
        }
        Ok(Self { space, amplitudes })
    }

    pub fn basis_state(space: &Arc<HilbertSpace>, s: BasisState) -> Result<Self> {
        let idx = space.index_of(&s)?;
        let mut amplitudes = CVector::zeros(space.dim());
        amplitudes[idx] = Complex64::new(1.0, 0.0);
        Ok(Self { space: Arc::clone(space), amplitudes })
    }

    /// Place `(state, amplitude)` pairs; every state must belong to the space.
    pub fn from_pairs(space: &Arc<HilbertSpace>, pairs: &[(BasisState, Complex64)]) -> Result<Self> {
        let mut amplitudes = CVector::zeros(space.dim());
        for (s, z) in pairs {
            let idx = space.find(s).ok_or_else(|| {
                Error::Capacity(format!("{s} lies outside the space (caps {}/{}/{})", space.atom_cap(), space.cap_a(), space.cap_b()))
            })?;
            amplitudes[idx] += z;
        }
        Ok(Self { space: Arc::clone(space), amplitudes })
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn amplitude(&self, s: BasisState) -> Complex64 {
        self.space.find(&s).map_or(Complex64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::InvalidInput("cannot normalise a zero state".into()));
        }
        self.amplitudes.unscale_mut(n);
        Ok(self)
    }

    /// Rotate the global phase so the first nonzero amplitude is real positive.
    pub fn with_canonical_phase(mut self) -> Self {
        if let Some(z) = self.amplitudes.iter().find(|z| z.norm() > 1e-14).copied() {
            let phase = z.conj() / z.norm();
            self.amplitudes.iter_mut().for_each(|a| *a *= phase);
        }
        self
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes.dotc(&other.amplitudes)
    }

    /// Total population in basis states with at least one atomic excitation.
    pub fn atom_excited_population(&self) -> f64 {
        self.space
            .basis()
            .iter()
            .zip(self.amplitudes.iter())
            .filter(|(s, _)| s.atom_exc > 0)
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }
}

/// Sampled states of one run.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<StateVector>,
    pub meta: BTreeMap<String, String>,
}

impl Trajectory {
    pub fn space(&self) -> &Arc<HilbertSpace> {
        self.states[0].space()
    }

    pub fn populations(&self) -> Vec<Vec<f64>> {
        self.states.iter().map(StateVector::populations).collect()
    }

    /// `t, re_*, im_*, pop_*` with one column group per basis state.
    pub fn to_csv(&self) -> String {
        let basis = self.space().basis();
        let mut header = vec!["t".to_string()];
        for s in basis {
            header.push(format!("re_{}", s.label()));
            header.push(format!("im_{}", s.label()));
        }
        header.extend(basis.iter().map(|s| format!("pop_{}", s.label())));
        let mut out = header.join(",");
        out.push('\n');
        for (t, st) in self.times.iter().zip(&self.states) {
            let mut row = vec![fmt_f64(*t)];
            for z in st.amplitudes().iter() {
                row.push(fmt_f64(z.re));
                row.push(fmt_f64(z.im));
            }
            row.extend(st.populations().into_iter().map(fmt_f64));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

pub(crate) fn check_times(times: &[f64]) -> Result<()> {
    if times.is_empty() {
        return Err(Error::InvalidInput("no sample times".into()));
    }
    if times[0] < 0.0 || !times.iter().all(|t| t.is_finite()) {
        return Err(Error::InvalidInput("sample times must be finite and start at t >= 0".into()));
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput("sample times must be strictly increasing".into()));
    }
    Ok(())
}

pub(crate) fn same_space(a: &Arc<HilbertSpace>, b: &Arc<HilbertSpace>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() })
    }
}

/// Integrate `i dψ/dt = Hψ` (ħ = 1) from `t = 0` and sample at `times`.
pub fn evolve_schrodinger(
    h: &OperatorMatrix,
    psi0: &StateVector,
    times: &[f64],
    tol: f64,
) -> Result<Trajectory> {
    same_space(h.space(), psi0.space())?;
    check_times(times)?;
    if !h.is_hermitian(HERMITIAN_TOL) {
        return Err(Error::Validation(format!(
            "Hamiltonian is not Hermitian (‖H − H†‖ = {:.3e})",
            h.hermiticity_defect()
        )));
    }
    if (psi0.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::Validation(format!("initial state has norm {}", psi0.norm())));
    }

    let minus_i_h: CMatrix = h.entries() * Complex64::new(0.0, -1.0);
    let y0 = CMatrix::from_column_slice(psi0.space().dim(), 1, psi0.amplitudes().as_slice());
    let samples = integrate(|_, y| &minus_i_h * y, 0.0, y0, times, OdeOptions::with_tol(tol))?;

    let space = Arc::clone(psi0.space());
    let states = samples
        .into_iter()
        .map(|y| StateVector { space: Arc::clone(&space), amplitudes: CVector::from_column_slice(y.as_slice()) })
        .collect();
    Ok(Trajectory { times: times.to_vec(), states, meta: BTreeMap::new() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OneExcitationStart {
    /// Excitation in cantilever a, `|g,1,0⟩`.
    G10,
    /// Excitation in the atomic gas, `|e,0,0⟩`.
    E00,
}

/// Closed-form interaction-picture solution in the one-excitation manifold
/// (atom capped at one excitation), symmetric coupling `kappa`.
pub fn analytic_one_excitation(kappa: f64, t: f64, initial: OneExcitationStart) -> StateVector {
    let space = Arc::new(HilbertSpace::manifold(1, 1));
    let x = SQRT_2 * kappa * t;
    let (c, s) = (x.cos(), x.sin());
    let re = |v: f64| Complex64::new(v, 0.0);
    let im = |v: f64| Complex64::new(0.0, v);
    let (g10, g01, e00) = match initial {
        OneExcitationStart::G10 => (re(0.5 * (1.0 + c)), re(0.5 * (c - 1.0)), im(-s / SQRT_2)),
        OneExcitationStart::E00 => (im(-s / SQRT_2), im(-s / SQRT_2), re(c)),
    };
    StateVector::from_pairs(
        &space,
        &[(BasisState::new(0, 1, 0), g10), (BasisState::new(0, 0, 1), g01), (BasisState::new(1, 0, 0), e00)],
    )
    .expect("one-excitation basis")
}

fn require_manifold(space: &HilbertSpace, n: usize, atom_max: usize) -> Result<()> {
    for s in 0..=atom_max.min(n) {
        for a in 0..=(n - s) {
            let st = BasisState::new(s, a, n - s - a);
            if !space.contains(&st) {
                return Err(Error::Capacity(format!("{n}-excitation state {st} missing from the space")));
            }
        }
    }
    Ok(())
}

/// `(â†(t))ⁿ |g,0,0⟩`, normalised, with `â†(t)` expanded in the normal modes
/// `p̂±† = (â† + b̂†)/2 ± ĉ†/√2`, `q̂† = (â† − b̂†)/√2`:
///
/// ```text
/// â†(t) = ½ [p̂₊† e^{iΩ₊t} + p̂₋† e^{iΩ₋t} + √2 q̂† e^{iω₀t}]
/// ```
///
/// In the interaction picture `ω₀` is removed from all three frequencies.
/// The HP boson allows up to `n` atomic excitations, so `space` must hold the
/// complete `n`-excitation manifold with `atom_cap ≥ n`.
pub fn heisenberg_state(
    n: usize,
    t: f64,
    params: &SystemParams,
    picture: Picture,
    space: &Arc<HilbertSpace>,
) -> Result<StateVector> {
    let modes = normal_mode_frequencies(params)?;
    require_manifold(space, n, n)?;
    let offset = match picture {
        Picture::Lab => 0.0,
        Picture::Interaction => params.omega0,
    };
    let p_plus = real_form(1.0 / SQRT_2, 0.5, 0.5);
    let p_minus = real_form(-1.0 / SQRT_2, 0.5, 0.5);
    let q = real_form(0.0, 1.0 / SQRT_2, -1.0 / SQRT_2);
    let terms = [
        (p_plus, 1.0, modes.omega_plus - offset),
        (p_minus, 1.0, modes.omega_minus - offset),
        (q, SQRT_2, modes.omega_dark - offset),
    ];
    let mut a_dag_t: ModeForm = [Complex64::new(0.0, 0.0); 3];
    for (form, weight, freq) in terms {
        let phase = Complex64::from_polar(0.5 * weight, freq * t);
        for (acc, f) in a_dag_t.iter_mut().zip(form) {
            *acc += phase * f;
        }
    }
    let amps = CreationPolynomial::power(&a_dag_t, n).on_vacuum();
    StateVector::from_pairs(space, &amps)?.normalized()
}

fn dark_forms(kappa_a: f64, kappa_b: f64) -> Result<(ModeForm, ModeForm)> {
    let r = kappa_a.hypot(kappa_b);
    if r == 0.0 {
        return Err(Error::UndefinedMode);
    }
    // q̂† = (κ_a b̂† − κ_b â†)/r; bright partner p̂† = (κ_a â† + κ_b b̂†)/r
    Ok((real_form(0.0, -kappa_b / r, kappa_a / r), real_form(0.0, kappa_a / r, kappa_b / r)))
}

/// `n` quanta in the dark mode `q̂† = (κ_a b̂† − κ_b â†)/√(κ_a² + κ_b²)`, atoms
/// in the ground state. Global phase: first nonzero amplitude real positive.
pub fn dark_state(n: usize, kappa_a: f64, kappa_b: f64, space: &Arc<HilbertSpace>) -> Result<StateVector> {
    let (q, _) = dark_forms(kappa_a, kappa_b)?;
    let amps = CreationPolynomial::power(&q, n).on_vacuum();
    let present: Vec<_> = amps.into_iter().filter(|(_, z)| z.norm() > 1e-15).collect();
    Ok(StateVector::from_pairs(space, &present)?.normalized()?.with_canonical_phase())
}

/// One q̂-occupation eigenvector inside a sector of fixed atomic excitation
/// and fixed cantilever quanta.
pub(crate) struct DarkModeVector {
    pub k: usize,
    pub entries: Vec<(usize, Complex64)>,
}

/// Orthonormal basis of q̂-occupation eigenvectors for every complete
/// `(atom_exc, n_a + n_b)` sector of `space`, plus the index sets of sectors
/// the caps truncate.
pub(crate) fn dark_mode_basis(
    space: &HilbertSpace,
    kappa_a: f64,
    kappa_b: f64,
) -> Result<(Vec<DarkModeVector>, Vec<Vec<usize>>)> {
    let (q, p) = dark_forms(kappa_a, kappa_b)?;
    let mut sectors: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
    for (i, s) in space.basis().iter().enumerate() {
        sectors.entry((s.atom_exc, s.n_a + s.n_b)).or_default().push(i);
    }
    let mut vectors = Vec::new();
    let mut truncated = Vec::new();
    for ((atom, m), idx) in sectors {
        if idx.len() != m + 1 {
            truncated.push(idx);
            continue;
        }
        for k in 0..=m {
            let poly = CreationPolynomial::power(&q, k);
            let poly = (0..m - k).fold(poly, |acc, _| acc.times(&p));
            let norm = (crate::modes::factorial(k) * crate::modes::factorial(m - k)).sqrt();
            let entries = poly
                .on_vacuum()
                .into_iter()
                .filter(|(_, z)| z.norm() > 1e-15)
                .map(|(s, z)| {
                    let target = BasisState::new(atom, s.n_a, s.n_b);
                    (space.find(&target).expect("complete sector"), z / norm)
                })
                .collect();
            vectors.push(DarkModeVector { k, entries });
        }
    }
    Ok((vectors, truncated))
}

pub(crate) fn weights_from_basis(
    vectors: &[DarkModeVector],
    expectation: impl Fn(&[(usize, Complex64)]) -> f64,
) -> Vec<f64> {
    let mut weights: Vec<f64> = Vec::new();
    for v in vectors {
        let w = expectation(&v.entries);
        if weights.len() <= v.k {
            weights.resize(v.k + 1, 0.0);
        }
        weights[v.k] += w;
    }
    while weights.len() > 1 && weights.last().is_some_and(|w| *w < 1e-14) {
        weights.pop();
    }
    weights
}

/// Marginal distribution of the dark-mode occupation number of `psi`.
///
/// The dark mode involves only the cantilevers, so the distribution is
/// resolved sector by sector in `(atom_exc, n_a + n_b)`. Sectors cut by the
/// cantilever caps must carry no weight.
pub fn dark_weight_distribution(psi: &StateVector, params: &SystemParams) -> Result<Vec<f64>> {
    let (vectors, truncated) = dark_mode_basis(psi.space(), params.kappa_a, params.kappa_b)?;
    let amps = psi.amplitudes();
    let lost: f64 = truncated.iter().flatten().map(|&i| amps[i].norm_sqr()).sum();
    if lost > 1e-12 {
        return Err(Error::Capacity(format!("state has weight {lost:.3e} in sectors truncated by the cantilever caps")));
    }
    Ok(weights_from_basis(&vectors, |v| {
        v.iter().map(|(i, c)| c.conj() * amps[*i]).sum::<Complex64>().norm_sqr()
    }))
}
