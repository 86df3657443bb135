//! Truncated tensor-product basis for (collective atom) ⊗ (cantilever a) ⊗ (cantilever b).
//!
//! Basis states are ordered lexicographically on `(atom_exc, n_a, n_b)`. That
//! ordering is part of the public contract: CSV column order and every
//! amplitude vector in this crate follow it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One product-basis label: atomic excitation count plus both vibron numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisState {
    pub atom_exc: usize,
    pub n_a: usize,
    pub n_b: usize,
}

impl BasisState {
    pub const fn new(atom_exc: usize, n_a: usize, n_b: usize) -> Self {
        Self { atom_exc, n_a, n_b }
    }

    pub const fn vacuum() -> Self {
        Self::new(0, 0, 0)
    }

    pub const fn total_excitations(&self) -> usize {
        self.atom_exc + self.n_a + self.n_b
    }

    /// Short label used in CSV headers, e.g. `1_0_0`.
    pub fn label(&self) -> String {
        format!("{}_{}_{}", self.atom_exc, self.n_a, self.n_b)
    }
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{},{}>", self.atom_exc, self.n_a, self.n_b)
    }
}

impl From<(usize, usize, usize)> for BasisState {
    fn from((s, a, b): (usize, usize, usize)) -> Self {
        Self::new(s, a, b)
    }
}

/// Which subset of the capped product space a [`HilbertSpace`] keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Restriction {
    /// Every state within the caps.
    Full,
    /// Only states with exactly this many total excitations.
    Manifold(usize),
    /// States with at most this many total excitations.
    AtMost(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HilbertSpace {
    atom_cap: usize,
    cap_a: usize,
    cap_b: usize,
    restriction: Restriction,
    basis: Vec<BasisState>,
}

impl HilbertSpace {
    fn filtered(
        atom_cap: usize,
        cap_a: usize,
        cap_b: usize,
        restriction: Restriction,
    ) -> Self {
        let mut basis = Vec::new();
        for s in 0..=atom_cap {
            for a in 0..=cap_a {
                for b in 0..=cap_b {
                    let st = BasisState::new(s, a, b);
                    let keep = match restriction {
                        Restriction::Full => true,
                        Restriction::Manifold(n) => st.total_excitations() == n,
                        Restriction::AtMost(n) => st.total_excitations() <= n,
                    };
                    if keep {
                        basis.push(st);
                    }
                }
            }
        }
        Self { atom_cap, cap_a, cap_b, restriction, basis }
    }

    /// Full capped product space; dimension `(atom_cap+1)(cap_a+1)(cap_b+1)`.
    pub fn product(atom_cap: usize, cap_a: usize, cap_b: usize) -> Self {
        Self::filtered(atom_cap, cap_a, cap_b, Restriction::Full)
    }

    /// Fixed-excitation manifold. Cantilever caps are set to `n_exc`; the atom
    /// holds at most `min(atom_cap, n_exc)` excitations.
    pub fn manifold(atom_cap: usize, n_exc: usize) -> Self {
        Self::filtered(atom_cap.min(n_exc), n_exc, n_exc, Restriction::Manifold(n_exc))
    }

    /// Union of the manifolds `0..=max_exc`. Closed under every lowering
    /// operator, which makes it the natural space for dissipative runs.
    pub fn bounded(atom_cap: usize, max_exc: usize) -> Self {
        Self::filtered(atom_cap.min(max_exc), max_exc, max_exc, Restriction::AtMost(max_exc))
    }

    pub fn atom_cap(&self) -> usize {
        self.atom_cap
    }

    pub fn cap_a(&self) -> usize {
        self.cap_a
    }

    pub fn cap_b(&self) -> usize {
        self.cap_b
    }

    pub fn restriction(&self) -> Restriction {
        self.restriction
    }

    pub fn manifold_number(&self) -> Option<usize> {
        match self.restriction {
            Restriction::Manifold(n) => Some(n),
            _ => None,
        }
    }

    pub fn basis(&self) -> &[BasisState] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn state(&self, index: usize) -> BasisState {
        self.basis[index]
    }

    pub fn contains(&self, s: &BasisState) -> bool {
        self.find(s).is_some()
    }

    pub fn find(&self, s: &BasisState) -> Option<usize> {
        self.basis.binary_search(s).ok()
    }

    pub fn index_of(&self, s: &BasisState) -> Result<usize> {
        self.find(s).ok_or(Error::NotAMember(*s))
    }

    pub fn max_excitations(&self) -> usize {
        self.basis.iter().map(BasisState::total_excitations).max().unwrap_or(0)
    }

    /// `index,atom_exc,n_a,n_b` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,atom_exc,n_a,n_b\n");
        for (i, s) in self.basis.iter().enumerate() {
            out.push_str(&format!("{i},{},{},{}\n", s.atom_exc, s.n_a, s.n_b));
        }
        out
    }
}

pub fn build_space(atom_cap: usize, cap_a: usize, cap_b: usize) -> HilbertSpace {
    HilbertSpace::product(atom_cap, cap_a, cap_b)
}

pub fn manifold_space(atom_cap: usize, n_exc: usize) -> HilbertSpace {
    HilbertSpace::manifold(atom_cap, n_exc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_dimensions() {
        assert_eq!(build_space(1, 1, 1).dim(), 8);
        assert_eq!(build_space(1, 3, 3).dim(), 32);
        let vac = build_space(0, 0, 0);
        assert_eq!(vac.basis(), &[BasisState::vacuum()]);
    }

    #[test]
    fn dimension_formula_exhaustive() {
        for s in 0..=4 {
            for a in 0..=4 {
                for b in 0..=4 {
                    assert_eq!(build_space(s, a, b).dim(), (s + 1) * (a + 1) * (b + 1));
                }
            }
        }
    }

    #[test]
    fn manifold_sizes() {
        let m1 = manifold_space(1, 1);
        assert_eq!(
            m1.basis(),
            &[BasisState::new(0, 0, 1), BasisState::new(0, 1, 0), BasisState::new(1, 0, 0)]
        );
        assert_eq!(manifold_space(1, 2).dim(), 5);
        assert_eq!(manifold_space(1, 3).dim(), 7);
        assert_eq!(manifold_space(1, 0).basis(), &[BasisState::vacuum()]);
    }

    #[test]
    fn index_lookup() {
        let full = build_space(1, 1, 1);
        assert_eq!(full.index_of(&BasisState::vacuum()).unwrap(), 0);

        let m1 = manifold_space(1, 1);
        let g10 = m1.index_of(&BasisState::new(0, 1, 0)).unwrap();
        let e00 = m1.index_of(&BasisState::new(1, 0, 0)).unwrap();
        assert!(e00 > g10);

        let err = build_space(1, 3, 3).index_of(&BasisState::new(0, 9, 0)).unwrap_err();
        assert!(err.to_string().contains("|0,9,0>"));
    }

    #[test]
    fn index_round_trip() {
        for space in [build_space(2, 3, 1), manifold_space(3, 3), HilbertSpace::bounded(1, 4)] {
            for (i, s) in space.basis().iter().enumerate() {
                assert_eq!(space.index_of(s).unwrap(), i);
            }
        }
    }

    #[test]
    fn manifolds_partition_bounded_space() {
        let k = 4;
        let full = build_space(2, k, k);
        let mut union: Vec<BasisState> =
            (0..=k).flat_map(|n| manifold_space(2, n).basis().to_vec()).collect();
        union.sort();
        let expected: Vec<BasisState> =
            full.basis().iter().copied().filter(|s| s.total_excitations() <= k).collect();
        assert_eq!(union, expected);
        assert_eq!(HilbertSpace::bounded(2, k).basis(), expected.as_slice());
    }

    #[test]
    fn basis_csv() {
        let csv = manifold_space(1, 1).to_csv();
        assert_eq!(csv, "index,atom_exc,n_a,n_b\n0,0,0,1\n1,0,1,0\n2,1,0,0\n");
    }
}
