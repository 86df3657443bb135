//! Ladder operators on the truncated basis and the resonant RWA Hamiltonian
//!
//! ```text
//! H/ħ = ω₀ (Ĵ_z + N/2 + â†â + b̂†b̂) + κ_a (â Ĵ₊ + h.c.)/√N + κ_b (b̂ Ĵ₊ + h.c.)/√N
//! ```
//!
//! The `N/2` shift removes the constant Ĵ_z offset, so the free part is simply
//! `ω₀` times the total excitation number.
//!
//! `κ` is the *collective* coupling: it already contains the `√N` of a single
//! atomic excitation, and the Hamiltonian divides `Ĵ₊` by `√N`. In the
//! one-excitation manifold the net coupling is therefore exactly `κ` in both
//! spin representations. Readers who treat `κ` as a per-atom rate must rescale
//! every rate by `√N`.

use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{BasisState, HilbertSpace};

pub type CMatrix = DMatrix<Complex64>;

/// Model rates. Units are arbitrary but shared; ħ = 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub omega0: f64,
    pub kappa_a: f64,
    pub kappa_b: f64,
    pub n_atoms: usize,
    /// Single-spin decay rate Γ; the collective channel is `Γ D[Ĵ₋]`.
    #[serde(default)]
    pub gamma_atom: f64,
    /// Cantilever damping rate γ. Only used when cantilever damping is switched on.
    #[serde(default)]
    pub gamma_cant: f64,
}

impl SystemParams {
    pub fn symmetric(omega0: f64, kappa: f64, n_atoms: usize) -> Self {
        Self { omega0, kappa_a: kappa, kappa_b: kappa, n_atoms, gamma_atom: 0.0, gamma_cant: 0.0 }
    }

    pub fn with_decay(mut self, gamma_atom: f64) -> Self {
        self.gamma_atom = gamma_atom;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("omega0", self.omega0 > 0.0),
            ("kappa_a", self.kappa_a >= 0.0),
            ("kappa_b", self.kappa_b >= 0.0),
            ("n_atoms", self.n_atoms >= 1),
            ("gamma_atom", self.gamma_atom >= 0.0),
            ("gamma_cant", self.gamma_cant >= 0.0),
        ];
        for (name, ok) in checks {
            if !ok {
                return Err(Error::Parameter(format!("{name} out of range in {self:?}")));
            }
        }
        Ok(())
    }

    pub fn is_symmetric(&self) -> bool {
        self.kappa_a == self.kappa_b
    }

    /// Rate that sets the dimensionless time unit: `√((κ_a² + κ_b²)/2)`,
    /// equal to `κ` for symmetric coupling.
    pub fn kappa_scale(&self) -> f64 {
        ((self.kappa_a * self.kappa_a + self.kappa_b * self.kappa_b) / 2.0).sqrt()
    }
}

/// How the collective spin is represented on the atomic factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpinMode {
    /// Dicke ladder elements `√(J(J+1) − M(M∓1))`, `J = N/2`.
    #[default]
    Exact,
    /// Linearised Holstein–Primakoff boson, `Ĵ₋ ≈ √N ĉ`.
    Hp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Picture {
    Lab,
    /// Free part dropped. On resonance it commutes with the coupling, so the
    /// interaction-picture Hamiltonian is time independent.
    #[default]
    Interaction,
}

/// Dense operator tied to a basis ordering.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    space: Arc<HilbertSpace>,
    entries: CMatrix,
}

impl OperatorMatrix {
    pub fn new(space: Arc<HilbertSpace>, entries: CMatrix) -> Result<Self> {
        let d = space.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: entries.nrows() });
        }
        Ok(Self { space, entries })
    }

    pub fn zeros(space: Arc<HilbertSpace>) -> Self {
        let d = space.dim();
        Self { space, entries: CMatrix::zeros(d, d) }
    }

    /// Matrix of an operator that maps each basis state to at most one other
    /// basis state. Targets outside the space are dropped (truncation).
    pub fn from_ladder<F>(space: Arc<HilbertSpace>, action: F) -> Self
    where
        F: Fn(&BasisState) -> Option<(BasisState, f64)>,
    {
        let mut op = Self::zeros(space);
        for (col, src) in op.space.basis().iter().enumerate() {
            if let Some((target, amp)) = action(src) {
                if let Some(row) = op.space.find(&target) {
                    op.entries[(row, col)] += Complex64::new(amp, 0.0);
                }
            }
        }
        op
    }

    pub fn space(&self) -> &Arc<HilbertSpace> {
        &self.space
    }

    pub fn entries(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn adjoint(&self) -> Self {
        Self { space: Arc::clone(&self.space), entries: self.entries.adjoint() }
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).norm()
    }

    /// `‖A − A†‖_F ≤ rel_tol · ‖A‖_F`.
    pub fn is_hermitian(&self, rel_tol: f64) -> bool {
        self.hermiticity_defect() <= rel_tol * self.entries.norm().max(f64::MIN_POSITIVE)
    }

    /// Nonzero elements as `row,col,re,im` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,re,im\n");
        for c in 0..self.dim() {
            for r in 0..self.dim() {
                let z = self.entries[(r, c)];
                if z != Complex64::new(0.0, 0.0) {
                    out.push_str(&format!(
                        "{r},{c},{},{}\n",
                        crate::output::fmt_f64(z.re),
                        crate::output::fmt_f64(z.im)
                    ));
                }
            }
        }
        out
    }
}

/// `⟨k−1|Ĵ₋|k⟩` for `k` atomic excitations of `N` atoms, via `M = k − N/2`.
pub fn dicke_lowering_element(n_atoms: usize, k: usize) -> f64 {
    if k == 0 || k > n_atoms {
        return 0.0;
    }
    let j = n_atoms as f64 / 2.0;
    let m = k as f64 - j;
    (j * (j + 1.0) - m * (m - 1.0)).max(0.0).sqrt()
}

/// `⟨k−1|Ĵ₋|k⟩` in the chosen representation.
pub fn spin_lowering_element(mode: SpinMode, n_atoms: usize, k: usize) -> f64 {
    match mode {
        SpinMode::Exact => dicke_lowering_element(n_atoms, k),
        SpinMode::Hp => (n_atoms as f64).sqrt() * (k as f64).sqrt(),
    }
}

pub fn annihilation_a(space: &Arc<HilbertSpace>) -> OperatorMatrix {
    OperatorMatrix::from_ladder(Arc::clone(space), |s| {
        (s.n_a > 0).then(|| (BasisState::new(s.atom_exc, s.n_a - 1, s.n_b), (s.n_a as f64).sqrt()))
    })
}

pub fn annihilation_b(space: &Arc<HilbertSpace>) -> OperatorMatrix {
    OperatorMatrix::from_ladder(Arc::clone(space), |s| {
        (s.n_b > 0).then(|| (BasisState::new(s.atom_exc, s.n_a, s.n_b - 1), (s.n_b as f64).sqrt()))
    })
}

fn check_atom_cap(space: &HilbertSpace, n_atoms: usize) -> Result<()> {
    if space.atom_cap() > n_atoms {
        return Err(Error::Parameter(format!(
            "atom_cap {} exceeds atom count {n_atoms}",
            space.atom_cap()
        )));
    }
    Ok(())
}

/// Exact collective lowering operator Ĵ₋. Use `.adjoint()` for Ĵ₊.
pub fn dicke_lowering(space: &Arc<HilbertSpace>, n_atoms: usize) -> Result<OperatorMatrix> {
    check_atom_cap(space, n_atoms)?;
    Ok(OperatorMatrix::from_ladder(Arc::clone(space), |s| {
        (s.atom_exc > 0).then(|| {
            (
                BasisState::new(s.atom_exc - 1, s.n_a, s.n_b),
                dicke_lowering_element(n_atoms, s.atom_exc),
            )
        })
    }))
}

/// Bosonic lowering operator ĉ on the atomic factor (no `√N`).
pub fn hp_lowering(space: &Arc<HilbertSpace>) -> OperatorMatrix {
    OperatorMatrix::from_ladder(Arc::clone(space), |s| {
        (s.atom_exc > 0)
            .then(|| (BasisState::new(s.atom_exc - 1, s.n_a, s.n_b), (s.atom_exc as f64).sqrt()))
    })
}

/// Ĵ₋ in the requested representation (`√N ĉ` in HP mode).
pub fn collective_lowering(
    space: &Arc<HilbertSpace>,
    n_atoms: usize,
    mode: SpinMode,
) -> Result<OperatorMatrix> {
    if mode == SpinMode::Exact {
        check_atom_cap(space, n_atoms)?;
    }
    Ok(OperatorMatrix::from_ladder(Arc::clone(space), |s| {
        (s.atom_exc > 0).then(|| {
            (
                BasisState::new(s.atom_exc - 1, s.n_a, s.n_b),
                spin_lowering_element(mode, n_atoms, s.atom_exc),
            )
        })
    }))
}

/// Total excitation number `atom_exc + n_a + n_b` (diagonal).
pub fn number_operator(space: &Arc<HilbertSpace>) -> OperatorMatrix {
    let mut op = OperatorMatrix::zeros(Arc::clone(space));
    for (i, s) in space.basis().iter().enumerate() {
        op.entries[(i, i)] = Complex64::new(s.total_excitations() as f64, 0.0);
    }
    op
}

/// System Hamiltonian (ħ = 1).
///
/// Elements are assembled directly from the ladder actions rather than by
/// multiplying truncated matrices, so fixed-excitation manifolds get the full
/// coupling even though `â` and `Ĵ₊` individually leave the manifold.
pub fn hamiltonian(
    params: &SystemParams,
    space: &Arc<HilbertSpace>,
    picture: Picture,
    mode: SpinMode,
) -> Result<OperatorMatrix> {
    params.validate()?;
    if mode == SpinMode::Exact {
        check_atom_cap(space, params.n_atoms)?;
    }
    let sqrt_n = (params.n_atoms as f64).sqrt();
    let mut h = OperatorMatrix::zeros(Arc::clone(space));

    for (col, s) in space.basis().iter().enumerate() {
        if picture == Picture::Lab {
            h.entries[(col, col)] += Complex64::new(params.omega0 * s.total_excitations() as f64, 0.0);
        }
        // ⟨s+1|Ĵ₊|s⟩ = ⟨s|Ĵ₋|s+1⟩
        let j_plus = spin_lowering_element(mode, params.n_atoms, s.atom_exc + 1) / sqrt_n;
        let hops = [
            (params.kappa_a, s.n_a, BasisState::new(s.atom_exc + 1, s.n_a.wrapping_sub(1), s.n_b)),
            (params.kappa_b, s.n_b, BasisState::new(s.atom_exc + 1, s.n_a, s.n_b.wrapping_sub(1))),
        ];
        for (kappa, n, target) in hops {
            if n == 0 || kappa == 0.0 {
                continue;
            }
            if let Some(row) = space.find(&target) {
                let v = Complex64::new(kappa * (n as f64).sqrt() * j_plus, 0.0);
                h.entries[(row, col)] += v;
                h.entries[(col, row)] += v.conj();
            }
        }
    }
    Ok(h)
}

/// Closed-form normal-mode frequencies of the HP Hamiltonian.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalModes {
    pub omega_plus: f64,
    pub omega_minus: f64,
    /// Frequency of the decoupled dark mode q̂, equal to ω₀.
    pub omega_dark: f64,
}

pub fn normal_mode_frequencies(params: &SystemParams) -> Result<NormalModes> {
    if !params.is_symmetric() {
        return Err(Error::Unsupported(format!(
            "closed-form normal modes need kappa_a == kappa_b (got {} and {})",
            params.kappa_a, params.kappa_b
        )));
    }
    let split = std::f64::consts::SQRT_2 * params.kappa_a;
    Ok(NormalModes {
        omega_plus: params.omega0 + split,
        omega_minus: params.omega0 - split,
        omega_dark: params.omega0,
    })
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}
