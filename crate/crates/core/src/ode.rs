//! Dormand–Prince 5(4) integrator for complex matrix-valued ODEs `y' = f(t, y)`.
//!
//! State vectors are carried as `n × 1` matrices so the same stepper serves
//! both Schrödinger and master-equation evolution.

use crate::error::{Error, Result};
use crate::operators::CMatrix;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Largest allowed step; `f64::INFINITY` for none.
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        Self { rtol: 1e-9, atol: 1e-9, max_step: f64::INFINITY, max_steps: 10_000_000 }
    }
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { rtol: tol, atol: tol, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OdeStats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

const SAFETY: f64 = 0.9;
const MIN_FACTOR: f64 = 0.2;
const MAX_FACTOR: f64 = 5.0;

/// Adaptive stepper. Holds the current `(t, y)` and the first-same-as-last
/// derivative so consecutive steps cost six right-hand-side evaluations.
pub struct Dopri5<F> {
    rhs: F,
    t: f64,
    y: CMatrix,
    dy: CMatrix,
    h: f64,
    opts: OdeOptions,
    stats: OdeStats,
}

fn lin(y: &CMatrix, terms: &[(f64, &CMatrix)]) -> CMatrix {
    let mut out = y.clone();
    for (c, k) in terms {
        if *c != 0.0 {
            out.zip_apply(*k, |o, ki| *o += ki * *c);
        }
    }
    out
}

impl<F> Dopri5<F>
where
    F: FnMut(f64, &CMatrix) -> CMatrix,
{
    pub fn new(mut rhs: F, t0: f64, y0: CMatrix, opts: OdeOptions) -> Self {
        let dy = rhs(t0, &y0);
        let scale = y0.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let rate = dy.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let h = if rate > 1e-300 { 0.01 * scale.max(opts.atol) / rate } else { 1e-3 };
        Self {
            rhs,
            t: t0,
            y: y0,
            dy,
            h: h.min(opts.max_step),
            opts,
            stats: OdeStats { rhs_evals: 1, ..OdeStats::default() },
        }
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn y(&self) -> &CMatrix {
        &self.y
    }

    /// Derivative at the current point (no extra evaluation).
    pub fn dy(&self) -> &CMatrix {
        &self.dy
    }

    pub fn stats(&self) -> OdeStats {
        self.stats
    }

    fn error_norm(&self, y_new: &CMatrix, err: &CMatrix) -> f64 {
        let n = err.len().max(1) as f64;
        let sum: f64 = err
            .iter()
            .zip(self.y.iter().zip(y_new.iter()))
            .map(|(e, (a, b))| {
                let sc = self.opts.atol + self.opts.rtol * a.norm().max(b.norm());
                (e.norm() / sc).powi(2)
            })
            .sum();
        (sum / n).sqrt()
    }

    /// Take one accepted step without passing `t_limit`.
    pub fn step(&mut self, t_limit: f64) -> Result<()> {
        let remaining = t_limit - self.t;
        if remaining <= 0.0 {
            return Ok(());
        }
        loop {
            if self.stats.accepted + self.stats.rejected >= self.opts.max_steps {
                return Err(Error::Integration {
                    t: self.t,
                    step: self.h,
                    reason: format!("exceeded {} steps", self.opts.max_steps),
                });
            }
            let last = self.h >= remaining;
            let h = if last { remaining } else { self.h };
            if !last && h <= 1e-14 * self.t.abs().max(1.0) {
                return Err(Error::Integration {
                    t: self.t,
                    step: h,
                    reason: "step size underflow; tolerance too tight or right-hand side not finite"
                        .into(),
                });
            }

            let t = self.t;
            let y = &self.y;
            let k1 = &self.dy;
            let k2 = (self.rhs)(t + C2 * h, &lin(y, &[(h * A21, k1)]));
            let k3 = (self.rhs)(t + C3 * h, &lin(y, &[(h * A31, k1), (h * A32, &k2)]));
            let k4 = (self.rhs)(
                t + C4 * h,
                &lin(y, &[(h * A41, k1), (h * A42, &k2), (h * A43, &k3)]),
            );
            let k5 = (self.rhs)(
                t + C5 * h,
                &lin(y, &[(h * A51, k1), (h * A52, &k2), (h * A53, &k3), (h * A54, &k4)]),
            );
            let k6 = (self.rhs)(
                t + h,
                &lin(
                    y,
                    &[(h * A61, k1), (h * A62, &k2), (h * A63, &k3), (h * A64, &k4), (h * A65, &k5)],
                ),
            );
            let y_new = lin(
                y,
                &[(h * A71, k1), (h * A73, &k3), (h * A74, &k4), (h * A75, &k5), (h * A76, &k6)],
            );
            let k7 = (self.rhs)(t + h, &y_new);
            self.stats.rhs_evals += 6;

            let mut err = CMatrix::zeros(y.nrows(), y.ncols());
            for (c, k) in [(E1, k1), (E3, &k3), (E4, &k4), (E5, &k5), (E6, &k6), (E7, &k7)] {
                err.zip_apply(k, |e, ki| *e += ki * (h * c));
            }
            let norm = self.error_norm(&y_new, &err);
            if !norm.is_finite() {
                return Err(Error::Integration {
                    t,
                    step: h,
                    reason: "non-finite error estimate".into(),
                });
            }

            let factor = if norm == 0.0 {
                MAX_FACTOR
            } else {
                (SAFETY * norm.powf(-0.2)).clamp(MIN_FACTOR, MAX_FACTOR)
            };

            if norm <= 1.0 {
                self.stats.accepted += 1;
                self.t = if last { t_limit } else { t + h };
                self.y = y_new;
                self.dy = k7;
                // Keep the controller's step when the last step was clipped short.
                let proposal = if last { self.h.max(h * factor) } else { h * factor };
                self.h = proposal.min(self.opts.max_step);
                return Ok(());
            }
            self.stats.rejected += 1;
            self.h = h * factor;
        }
    }

    /// Advance exactly to `t_target`.
    pub fn advance_to(&mut self, t_target: f64) -> Result<()> {
        while self.t < t_target {
            self.step(t_target)?;
        }
        Ok(())
    }
}

/// Integrate from `t0` and return `y` at each requested time.
///
/// `times` must be nondecreasing and not before `t0`; sample points are hit
/// exactly (no interpolation).
pub fn integrate<F>(rhs: F, t0: f64, y0: CMatrix, times: &[f64], opts: OdeOptions) -> Result<Vec<CMatrix>>
where
    F: FnMut(f64, &CMatrix) -> CMatrix,
{
    let mut stepper = Dopri5::new(rhs, t0, y0, opts);
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if t < stepper.t() {
            return Err(Error::InvalidInput(format!("sample time {t} precedes {}", stepper.t())));
        }
        stepper.advance_to(t)?;
        out.push(stepper.y().clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn scalar(z: Complex64) -> CMatrix {
        CMatrix::from_element(1, 1, z)
    }

    #[test]
    fn exponential_decay() {
        let times: Vec<f64> = (0..=10).map(|i| i as f64 * 0.5).collect();
        let ys = integrate(|_, y| -y, 0.0, scalar(1.0.into()), &times, OdeOptions::with_tol(1e-11))
            .unwrap();
        for (t, y) in times.iter().zip(&ys) {
            assert!((y[(0, 0)].re - (-t).exp()).abs() < 1e-10);
        }
    }

    #[test]
    fn complex_rotation_keeps_modulus() {
        let i = Complex64::i();
        let ys = integrate(|_, y| y * (-i * 3.0), 0.0, scalar(1.0.into()), &[20.0], OdeOptions::with_tol(1e-12))
            .unwrap();
        let want = (-i * 60.0).exp();
        assert!((ys[0][(0, 0)] - want).norm() < 1e-9);
    }

    #[test]
    fn time_dependent_rhs() {
        // y' = 2t y, y = exp(t²)
        let ys = integrate(|t, y| y * Complex64::from(2.0 * t), 0.0, scalar(1.0.into()), &[1.5], OdeOptions::with_tol(1e-12))
            .unwrap();
        assert!((ys[0][(0, 0)].re - 2.25f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn zero_rhs_is_constant() {
        let ys = integrate(|_, y| y * Complex64::from(0.0), 0.0, scalar(2.0.into()), &[0.0, 1.0, 100.0], OdeOptions::default())
            .unwrap();
        assert!(ys.iter().all(|y| y[(0, 0)] == Complex64::from(2.0)));
    }

    #[test]
    fn blow_up_reports_failure() {
        // y' = y², y(0)=1 diverges at t = 1
        let err = integrate(|_, y| y.component_mul(y), 0.0, scalar(1.0.into()), &[2.0], OdeOptions::with_tol(1e-8))
            .unwrap_err();
        assert!(matches!(err, Error::Integration { .. }), "{err}");
    }

    #[test]
    fn decreasing_times_rejected() {
        let err = integrate(|_, y| -y, 0.0, scalar(1.0.into()), &[1.0, 0.5], OdeOptions::default()).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }
}
