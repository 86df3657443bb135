//! Fock-space expansion of products of linear combinations of creation
//! operators acting on the vacuum.
//!
//! A linear form `α ĉ† + β â† + γ b̂†` is stored as `[α, β, γ]`, matching the
//! `(atom_exc, n_a, n_b)` order of [`BasisState`].

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::hilbert::BasisState;

pub type ModeForm = [Complex64; 3];

/// Polynomial in `(ĉ†, â†, b̂†)`; keys are exponents.
#[derive(Clone, Debug, Default)]
pub struct CreationPolynomial {
    terms: BTreeMap<(usize, usize, usize), Complex64>,
}

impl CreationPolynomial {
    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((0, 0, 0), Complex64::new(1.0, 0.0));
        Self { terms }
    }

    pub fn times(&self, form: &ModeForm) -> Self {
        let mut terms = BTreeMap::new();
        for (&(s, a, b), &c) in &self.terms {
            let shifted = [(s + 1, a, b), (s, a + 1, b), (s, a, b + 1)];
            for (key, f) in shifted.into_iter().zip(form) {
                if *f != Complex64::new(0.0, 0.0) {
                    *terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c * f;
                }
            }
        }
        Self { terms }
    }

    pub fn power(form: &ModeForm, n: usize) -> Self {
        (0..n).fold(Self::one(), |p, _| p.times(form))
    }

    /// Amplitudes after acting on the vacuum: `(ĉ†)^k |0⟩ = √k! |k⟩` per mode.
    pub fn on_vacuum(&self) -> Vec<(BasisState, Complex64)> {
        self.terms
            .iter()
            .map(|(&(s, a, b), &c)| {
                let fock = (factorial(s) * factorial(a) * factorial(b)).sqrt();
                (BasisState::new(s, a, b), c * fock)
            })
            .collect()
    }
}

pub fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn real_form(c: f64, a: f64, b: f64) -> ModeForm {
    [Complex64::new(c, 0.0), Complex64::new(a, 0.0), Complex64::new(b, 0.0)]
}
