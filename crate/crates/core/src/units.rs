//! Physical constants, field parameters and unit conversions.
//!
//! Everything inside the crate is SI: joules, seconds, rad/s, metres and
//! tesla. Conversions to the reporting units (meV, fs, ps) happen at the
//! edges through [`convert`].

use std::fmt;

use crate::error::{domain, Error, Result};

/// Reduced Planck constant, J·s (CODATA 2018, exact).
pub const HBAR: f64 = 1.054_571_817e-34;

/// Elementary charge, C (CODATA 2018, exact).
pub const E_CHARGE: f64 = 1.602_176_634e-19;

/// Fermi velocity of monolayer graphene, m/s.
pub const FERMI_VELOCITY_DEFAULT: f64 = 1.0e6;

/// One milli-electronvolt in joules.
pub const MEV: f64 = E_CHARGE * 1e-3;

/// Units accepted by [`convert`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Unit {
    Joule,
    MilliElectronVolt,
    Second,
    Femtosecond,
    Picosecond,
    RadPerSecond,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Energy,
    Time,
}

impl Unit {
    /// Dimension and factor to the SI base of that dimension. Angular
    /// frequency is folded into energy through E = ħω.
    fn to_base(self) -> (Dimension, f64) {
        match self {
            Unit::Joule => (Dimension::Energy, 1.0),
            Unit::MilliElectronVolt => (Dimension::Energy, MEV),
            Unit::RadPerSecond => (Dimension::Energy, HBAR),
            Unit::Second => (Dimension::Time, 1.0),
            Unit::Femtosecond => (Dimension::Time, 1e-15),
            Unit::Picosecond => (Dimension::Time, 1e-12),
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Unit::Joule => "J",
            Unit::MilliElectronVolt => "meV",
            Unit::Second => "s",
            Unit::Femtosecond => "fs",
            Unit::Picosecond => "ps",
            Unit::RadPerSecond => "rad/s",
        }
    }
}

impl fmt::Display for Unit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Convert `value` between two of the supported units.
///
/// Energies and angular frequencies are interchangeable (E = ħω); times
/// only convert to times.
///
/// ```
/// use graphene_revivals::units::{convert, Unit};
/// let j = convert(1.0, Unit::MilliElectronVolt, Unit::Joule).unwrap();
/// assert!((j - 1.602176634e-22).abs() < 1e-36);
/// assert!(convert(1.0, Unit::Second, Unit::Joule).is_err());
/// ```
pub fn convert(value: f64, from: Unit, to: Unit) -> Result<f64> {
    let (dim_from, f_from) = from.to_base();
    let (dim_to, f_to) = to.to_base();
    if dim_from != dim_to {
        return Err(Error::IncompatibleUnits { from, to });
    }
    if from == to {
        return Ok(value);
    }
    Ok(value * f_from / f_to)
}

/// Perpendicular magnetic field, Fermi velocity and an optional gap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldParams {
    field: f64,
    fermi_velocity: f64,
    gap_energy: f64,
}

impl FieldParams {
    /// Field `b_tesla` with the default Fermi velocity and no gap.
    pub fn new(b_tesla: f64) -> Result<Self> {
        Self::with_all(b_tesla, FERMI_VELOCITY_DEFAULT, 0.0)
    }

    pub fn with_all(b_tesla: f64, fermi_velocity: f64, gap_energy: f64) -> Result<Self> {
        if !(b_tesla > 0.0) || !b_tesla.is_finite() {
            return Err(domain(format!(
                "magnetic field must be positive and finite, got {b_tesla} T"
            )));
        }
        if !(fermi_velocity > 0.0) || !fermi_velocity.is_finite() {
            return Err(domain(format!(
                "Fermi velocity must be positive and finite, got {fermi_velocity} m/s"
            )));
        }
        if !(gap_energy >= 0.0) || !gap_energy.is_finite() {
            return Err(domain(format!(
                "gap energy must be non-negative, got {gap_energy} J"
            )));
        }
        Ok(Self {
            field: b_tesla,
            fermi_velocity,
            gap_energy,
        })
    }

    pub fn with_fermi_velocity(self, fermi_velocity: f64) -> Result<Self> {
        Self::with_all(self.field, fermi_velocity, self.gap_energy)
    }

    pub fn with_gap_energy(self, gap_energy: f64) -> Result<Self> {
        Self::with_all(self.field, self.fermi_velocity, gap_energy)
    }

    /// Field in tesla.
    pub fn field(&self) -> f64 {
        self.field
    }

    /// Fermi velocity in m/s.
    pub fn fermi_velocity(&self) -> f64 {
        self.fermi_velocity
    }

    /// Gap energy in joules.
    pub fn gap_energy(&self) -> f64 {
        self.gap_energy
    }

    /// L = √(ħ/(eB)), in metres.
    pub fn magnetic_length(&self) -> f64 {
        (HBAR / (E_CHARGE * self.field)).sqrt()
    }

    /// Ω = √2·v_F/L, in rad/s. ħΩ is the energy of the first Landau level.
    pub fn omega(&self) -> f64 {
        std::f64::consts::SQRT_2 * self.fermi_velocity / self.magnetic_length()
    }
}

/// Magnetic length for a field given in tesla.
pub fn magnetic_length(b_tesla: f64) -> Result<f64> {
    FieldParams::new(b_tesla).map(|p| p.magnetic_length())
}

/// Landau frequency Ω for a field in tesla and a Fermi velocity in m/s.
pub fn omega(b_tesla: f64, fermi_velocity: f64) -> Result<f64> {
    FieldParams::with_all(b_tesla, fermi_velocity, 0.0).map(|p| p.omega())
}
