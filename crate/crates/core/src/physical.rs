//! Device parameters to model rates: tip-magnet field gradient, cantilever
//! zero-point amplitude, collective coupling κ, and the ratio of the
//! atom-mediated coupling to the direct tip–tip dipole interaction.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reduced Planck constant (J s), CODATA 2018.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Vacuum permeability (N A⁻²), CODATA 2018.
pub const MU_0: f64 = 1.256_637_062_12e-6;
/// Bohr magneton (J T⁻¹), CODATA 2018.
pub const MU_B: f64 = 9.274_010_078_3e-24;
/// Magnetic moment per nickel atom, in Bohr magnetons.
pub const NICKEL_MOMENT_BOHR: f64 = 0.6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceParams {
    /// Tip-magnet moment (J/T). Defaults to `n_mag · 0.6 μ_B` when omitted.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    /// Magnet–atom distance (m).
    pub d: f64,
    /// Atoms in the gas.
    pub n_atoms: f64,
    /// Effective cantilever mass (kg).
    pub m_eff: f64,
    /// Cantilever angular frequency (rad/s).
    pub omega0: f64,
    /// Atoms in the tip magnet.
    pub n_mag: f64,
    /// Bias field (T); informational only.
    pub b0: f64,
}

impl DeviceParams {
    /// 10⁻¹⁶ kg cantilever at ω₀/2π = 1 MHz, 100 atoms at 250 nm from a
    /// 10⁶-atom nickel tip magnet.
    pub fn reference_setup() -> Self {
        Self {
            mu: None,
            d: 250e-9,
            n_atoms: 100.0,
            m_eff: 1e-16,
            omega0: 2.0 * PI * 1e6,
            n_mag: 1e6,
            b0: 1e-4,
        }
    }

    pub fn moment(&self) -> f64 {
        self.mu.unwrap_or(self.n_mag * NICKEL_MOMENT_BOHR * MU_B)
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("mu", self.moment()),
            ("d", self.d),
            ("n_atoms", self.n_atoms),
            ("m_eff", self.m_eff),
            ("omega0", self.omega0),
            ("n_mag", self.n_mag),
            ("b0", self.b0),
        ];
        for (name, v) in fields {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(name, format!("must be positive and finite, got {v}")));
            }
        }
        Ok(())
    }
}

/// An angular rate with its cycle-frequency reading.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Rate {
    pub rad_per_s: f64,
    pub hz: f64,
}

impl Rate {
    pub fn from_angular(rad_per_s: f64) -> Self {
        Self { rad_per_s, hz: rad_per_s / (2.0 * PI) }
    }
}

/// `G_m = 3 μ μ₀ / (4π d⁴)` in T/m.
pub fn field_gradient(mu: f64, d: f64) -> Result<f64> {
    if !(d > 0.0) {
        return Err(Error::Parameter(format!("distance must be positive, got {d}")));
    }
    Ok(3.0 * mu * MU_0 / (4.0 * PI * d.powi(4)))
}

/// `a₀ = √(ħ / 2 m_eff ω₀)` in m.
pub fn zero_point_amplitude(m_eff: f64, omega0: f64) -> Result<f64> {
    if !(m_eff > 0.0 && omega0 > 0.0) {
        return Err(Error::Parameter(format!("m_eff and omega0 must be positive, got {m_eff}, {omega0}")));
    }
    Ok((HBAR / (2.0 * m_eff * omega0)).sqrt())
}

/// `κ = μ_B G_m √N a₀ / (√8 ħ)`.
pub fn coupling_constant(dev: &DeviceParams) -> Result<Rate> {
    dev.validate()?;
    let g = field_gradient(dev.moment(), dev.d)?;
    let a0 = zero_point_amplitude(dev.m_eff, dev.omega0)?;
    Ok(Rate::from_angular(MU_B * g * dev.n_atoms.sqrt() * a0 / (8f64.sqrt() * HBAR)))
}

/// Atom-mediated over direct tip–tip interaction, `4 d √N / (a₀ N_mag)`.
pub fn dipole_interaction_ratio(dev: &DeviceParams) -> Result<f64> {
    dev.validate()?;
    let a0 = zero_point_amplitude(dev.m_eff, dev.omega0)?;
    Ok(4.0 * dev.d * dev.n_atoms.sqrt() / (a0 * dev.n_mag))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingReport {
    pub field_gradient: f64,
    pub zero_point_amplitude: f64,
    pub kappa: Rate,
    pub dipole_ratio: f64,
}

impl CouplingReport {
    pub fn compute(dev: &DeviceParams) -> Result<Self> {
        dev.validate()?;
        Ok(Self {
            field_gradient: field_gradient(dev.moment(), dev.d)?,
            zero_point_amplitude: zero_point_amplitude(dev.m_eff, dev.omega0)?,
            kappa: coupling_constant(dev)?,
            dipole_ratio: dipole_interaction_ratio(dev)?,
        })
    }

    /// `name,value,unit` table.
    pub fn to_table(&self) -> String {
        let rows = [
            ("field_gradient", self.field_gradient, "T/m"),
            ("zero_point_amplitude", self.zero_point_amplitude, "m"),
            ("kappa", self.kappa.rad_per_s, "rad/s"),
            ("kappa_over_2pi", self.kappa.hz, "Hz"),
            ("dipole_ratio", self.dipole_ratio, "1"),
        ];
        let mut out = String::from("name,value,unit\n");
        for (name, v, unit) in rows {
            out.push_str(&format!("{name},{},{unit}\n", crate::output::fmt_f64(v)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gradient_scaling() {
        let g1 = field_gradient(1e-18, 100e-9).unwrap();
        let g2 = field_gradient(1e-18, 200e-9).unwrap();
        assert_relative_eq!(g1 / g2, 16.0, max_relative = 1e-12);
        assert_eq!(field_gradient(0.0, 1e-7).unwrap(), 0.0);
        assert!(field_gradient(1e-18, 0.0).is_err());
        assert!(field_gradient(1e-18, -1e-7).is_err());
    }

    #[test]
    fn reference_values() {
        // evaluated independently with CODATA constants
        let dev = DeviceParams::reference_setup();
        assert_relative_eq!(field_gradient(dev.moment(), dev.d).unwrap(), 427.346_384_64, max_relative = 1e-9);
        assert_relative_eq!(coupling_constant(&dev).unwrap().rad_per_s, 38.491_035_232, max_relative = 1e-9);
        assert_relative_eq!(dipole_interaction_ratio(&dev).unwrap(), 34.519_687_192, max_relative = 1e-9);
    }

    #[test]
    fn zero_point() {
        let a0 = zero_point_amplitude(1e-16, 2.0 * PI * 1e6).unwrap();
        assert_relative_eq!(a0, 2.897e-13, max_relative = 1e-3);
        assert_relative_eq!(a0 / zero_point_amplitude(4e-16, 2.0 * PI * 1e6).unwrap(), 2.0, max_relative = 1e-12);
        assert_relative_eq!(a0 / zero_point_amplitude(1e-16, 8.0 * PI * 1e6).unwrap(), 2.0, max_relative = 1e-12);
        assert!(zero_point_amplitude(0.0, 1.0).is_err());
    }

    #[test]
    fn coupling_scalings() {
        let dev = DeviceParams::reference_setup();
        let k = coupling_constant(&dev).unwrap();
        let mut more_atoms = dev.clone();
        more_atoms.n_atoms *= 4.0;
        assert_relative_eq!(coupling_constant(&more_atoms).unwrap().rad_per_s / k.rad_per_s, 2.0, max_relative = 1e-12);
        let mut farther = dev.clone();
        farther.d *= 2.0;
        assert_relative_eq!(k.rad_per_s / coupling_constant(&farther).unwrap().rad_per_s, 16.0, max_relative = 1e-12);
        assert_relative_eq!(k.hz * 2.0 * PI, k.rad_per_s, max_relative = 1e-15);
    }

    #[test]
    fn composed_equals_direct_formula() {
        let dev = DeviceParams::reference_setup();
        let mu = dev.n_mag * 0.6 * MU_B;
        let direct = MU_B * (3.0 * mu * MU_0 / (4.0 * PI * dev.d.powi(4))) * dev.n_atoms.sqrt()
            * (HBAR / (2.0 * dev.m_eff * dev.omega0)).sqrt()
            / (8f64.sqrt() * HBAR);
        assert_relative_eq!(coupling_constant(&dev).unwrap().rad_per_s, direct, max_relative = 1e-14);
    }

    #[test]
    fn dipole_ratio_scalings() {
        let dev = DeviceParams::reference_setup();
        let r = dipole_interaction_ratio(&dev).unwrap();
        let mut heavy = dev.clone();
        heavy.m_eff *= 4.0; // halves a₀
        assert_relative_eq!(dipole_interaction_ratio(&heavy).unwrap() / r, 2.0, max_relative = 1e-12);
        let mut big = dev;
        big.n_mag = 1e30;
        assert!(dipole_interaction_ratio(&big).unwrap() < 1e-20);
    }

    #[test]
    fn validation_names_field() {
        let mut dev = DeviceParams::reference_setup();
        dev.d = -1.0;
        let err = coupling_constant(&dev).unwrap_err();
        assert!(err.to_string().contains("`d`"), "{err}");
    }

    #[test]
    fn report_table() {
        let table = CouplingReport::compute(&DeviceParams::reference_setup()).unwrap().to_table();
        assert_eq!(table.lines().count(), 6);
        assert!(table.contains("kappa,"));
    }
}
