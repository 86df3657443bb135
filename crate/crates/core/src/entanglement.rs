//! Cantilever–cantilever entanglement: reduced states, partial transpose,
//! negativity, Schmidt probabilities and the participation ratio.
//!
//! Bipartite index convention: `(l, m) ↦ l·d_b + m`, with `l` the quanta in
//! cantilever a and `m` in cantilever b. Pure amplitudes reshape to a
//! `d_a × d_b` matrix with element `(l, m)` = amplitude of `|l⟩_a|m⟩_b`.

use nalgebra::linalg::{SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::dynamics::{StateVector, Trajectory};
use crate::error::{Error, Result};
use crate::lindblad::{DensityMatrix, DensityTrajectory};
use crate::operators::CMatrix;
use crate::output::fmt_f64;

/// Eigenvalues below this count as negative.
pub const NEGATIVE_EIGENVALUE_THRESHOLD: f64 = -1e-12;
/// Purity deficit beyond which a state is treated as mixed.
pub const PURITY_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Two-cantilever density matrix with the atoms traced out.
#[derive(Clone, Debug)]
pub struct BipartiteState {
    dims: (usize, usize),
    rho: CMatrix,
}

impl BipartiteState {
    pub fn new(dims: (usize, usize), rho: CMatrix) -> Result<Self> {
        let d = dims.0 * dims.1;
        if rho.nrows() != d || rho.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: rho.nrows() });
        }
        Ok(Self { dims, rho })
    }

    /// Pure state from a `d_a × d_b` amplitude matrix.
    pub fn from_amplitudes(amps: &CMatrix) -> Self {
        let (da, db) = amps.shape();
        let mut v = CMatrix::zeros(da * db, 1);
        for l in 0..da {
            for m in 0..db {
                v[(l * db + m, 0)] = amps[(l, m)];
            }
        }
        Self { dims: (da, db), rho: &v * v.adjoint() }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.rho * &self.rho).trace().re
    }

    fn idx(&self, l: usize, m: usize) -> usize {
        l * self.dims.1 + m
    }

    /// Reduced state of cantilever a.
    pub fn reduced_a(&self) -> CMatrix {
        let (da, db) = self.dims;
        CMatrix::from_fn(da, da, |l, lp| (0..db).map(|m| self.rho[(self.idx(l, m), self.idx(lp, m))]).sum())
    }

    /// Reduced state of cantilever b.
    pub fn reduced_b(&self) -> CMatrix {
        let (da, db) = self.dims;
        CMatrix::from_fn(db, db, |m, mp| (0..da).map(|l| self.rho[(self.idx(l, m), self.idx(l, mp))]).sum())
    }
}

/// `(ρ_ab)_{(l,m),(l',m')} = Σ_s ρ_{(s,l,m),(s,l',m')}`.
///
/// States on a manifold or bounded space are embedded in the product space
/// `(cap_a + 1) × (cap_b + 1)` first.
pub fn partial_trace_atom(rho: &DensityMatrix) -> BipartiteState {
    let space = rho.space();
    let (da, db) = (space.cap_a() + 1, space.cap_b() + 1);
    let mut out = CMatrix::zeros(da * db, da * db);
    let basis = space.basis();
    let m = rho.entries();
    for (i, si) in basis.iter().enumerate() {
        for (j, sj) in basis.iter().enumerate() {
            if si.atom_exc == sj.atom_exc {
                out[(si.n_a * db + si.n_b, sj.n_a * db + sj.n_b)] += m[(i, j)];
            }
        }
    }
    BipartiteState { dims: (da, db), rho: out }
}

pub fn partial_trace_atom_pure(psi: &StateVector) -> BipartiteState {
    partial_trace_atom(&DensityMatrix::from_pure(psi))
}

/// Swap the row and column labels of one factor.
pub fn partial_transpose(bp: &BipartiteState, subsystem: Subsystem) -> CMatrix {
    let (da, db) = bp.dims;
    let mut out = CMatrix::zeros(da * db, da * db);
    for l in 0..da {
        for m in 0..db {
            for lp in 0..da {
                for mp in 0..db {
                    let (src_row, src_col) = match subsystem {
                        Subsystem::B => (bp.idx(l, mp), bp.idx(lp, m)),
                        Subsystem::A => (bp.idx(lp, m), bp.idx(l, mp)),
                    };
                    out[(bp.idx(l, m), bp.idx(lp, mp))] = bp.rho[(src_row, src_col)];
                }
            }
        }
    }
    out
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let sym = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let mut ev: Vec<f64> = SymmetricEigen::new(sym).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// `max(0, −Σ λᵢ)` over the negative eigenvalues of the partial transpose
/// with respect to `subsystem`.
pub fn negativity_wrt(bp: &BipartiteState, subsystem: Subsystem) -> f64 {
    let neg: f64 = hermitian_eigenvalues(&partial_transpose(bp, subsystem))
        .into_iter()
        .filter(|l| *l < NEGATIVE_EIGENVALUE_THRESHOLD)
        .sum();
    (-neg).max(0.0)
}

pub fn negativity(bp: &BipartiteState) -> f64 {
    negativity_wrt(bp, Subsystem::B)
}

pub fn negativity_trajectory(traj: &Trajectory) -> Vec<(f64, f64)> {
    traj.times
        .iter()
        .zip(&traj.states)
        .map(|(t, psi)| (*t, negativity(&partial_trace_atom_pure(psi))))
        .collect()
}

pub fn negativity_trajectory_mixed(traj: &DensityTrajectory) -> Vec<(f64, f64)> {
    traj.times
        .iter()
        .zip(&traj.rhos)
        .map(|(t, rho)| (*t, negativity(&partial_trace_atom(rho))))
        .collect()
}

pub fn negativity_csv(series: &[(f64, f64)]) -> String {
    let mut out = String::from("t,negativity\n");
    for (t, n) in series {
        out.push_str(&format!("{},{}\n", fmt_f64(*t), fmt_f64(*n)));
    }
    out
}

/// Squared singular values of an amplitude matrix, sorted descending.
pub fn schmidt_probabilities(amps: &CMatrix) -> Vec<f64> {
    let svd = SVD::new(amps.clone(), false, false);
    let mut p: Vec<f64> = svd.singular_values.iter().map(|s| s * s).filter(|p| *p > 1e-15).collect();
    p.sort_by(|a, b| b.total_cmp(a));
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= total);
    p
}

/// Schmidt probabilities of a pure bipartite state.
pub fn schmidt_decomposition(bp: &BipartiteState) -> Result<Vec<f64>> {
    let purity = bp.purity() / (bp.trace() * bp.trace());
    if purity < 1.0 - PURITY_TOL {
        return Err(Error::InvalidInput(format!("Schmidt decomposition needs a pure state (purity {purity:.10})")));
    }
    let (da, db) = bp.dims;
    let sym = (&bp.rho + bp.rho.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(sym);
    let top = eig.eigenvalues.iamax();
    let v = eig.eigenvectors.column(top);
    let amps = CMatrix::from_fn(da, db, |l, m| v[l * db + m]);
    Ok(schmidt_probabilities(&amps))
}

/// Effective number of Schmidt terms, `ζ = 1 / Σ pᵢ²`.
pub fn participation_ratio(bp: &BipartiteState) -> Result<f64> {
    let p = schmidt_decomposition(bp)?;
    Ok(1.0 / p.iter().map(|x| x * x).sum::<f64>())
}
