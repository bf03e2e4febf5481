//! Natural units and the handful of SI constants the toolkit needs.
//!
//! Inside the physics modules `m = c = ħ = 1`. Momenta are `p / mc`, energies
//! `E / mc²`, and times are measured in `ħ / mc²`. Conversion to SI happens
//! only here.

use core::fmt;
use core::ops::{Add, Neg, Sub};

#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

use crate::error::{domain, Error, Result};

/// Physical constants in SI units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Constants {
    /// Speed of light, m/s.
    pub c: f64,
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Rubidium-87 atomic mass, kg.
    pub m_rb87: f64,
}

/// The only place constants are declared.
pub const CONSTANTS: Constants = Constants { c: 299_792_458.0, hbar: 1.054_571_817e-34, m_rb87: 1.443_160_648e-25 };

/// Dimension tag carried by a [`NaturalValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    MomentumOverMc,
    EnergyOverMc2,
    Time,
    Dimensionless,
}

/// A natural-unit number tagged with its dimension.
///
/// Addition and subtraction are only defined between equal kinds; the checked
/// forms return [`Error::UnitMismatch`] otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalValue {
    value: f64,
    kind: Kind,
}

impl NaturalValue {
    pub const fn new(value: f64, kind: Kind) -> Self {
        Self { value, kind }
    }

    pub const fn momentum(value: f64) -> Self {
        Self::new(value, Kind::MomentumOverMc)
    }

    pub const fn energy(value: f64) -> Self {
        Self::new(value, Kind::EnergyOverMc2)
    }

    pub const fn time(value: f64) -> Self {
        Self::new(value, Kind::Time)
    }

    pub const fn dimensionless(value: f64) -> Self {
        Self::new(value, Kind::Dimensionless)
    }

    pub const fn value(self) -> f64 {
        self.value
    }

    pub const fn kind(self) -> Kind {
        self.kind
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        self.same_kind(rhs)?;
        Ok(Self::new(self.value + rhs.value, self.kind))
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        self.same_kind(rhs)?;
        Ok(Self::new(self.value - rhs.value, self.kind))
    }

    /// Multiplication by a pure number keeps the kind.
    pub fn scale(self, factor: f64) -> Self {
        Self::new(self.value * factor, self.kind)
    }

    fn same_kind(self, rhs: Self) -> Result<()> {
        if self.kind == rhs.kind {
            Ok(())
        } else {
            Err(Error::UnitMismatch { lhs: self.kind, rhs: rhs.kind })
        }
    }
}

impl Add for NaturalValue {
    type Output = Result<NaturalValue>;

    fn add(self, rhs: Self) -> Self::Output {
        self.checked_add(rhs)
    }
}

impl Sub for NaturalValue {
    type Output = Result<NaturalValue>;

    fn sub(self, rhs: Self) -> Self::Output {
        self.checked_sub(rhs)
    }
}

impl Neg for NaturalValue {
    type Output = NaturalValue;

    fn neg(self) -> Self::Output {
        Self::new(-self.value, self.kind)
    }
}

impl fmt::Display for NaturalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.kind {
            Kind::MomentumOverMc => "mc",
            Kind::EnergyOverMc2 => "mc^2",
            Kind::Time => "hbar/mc^2",
            Kind::Dimensionless => "",
        };
        write!(f, "{} {}", self.value, unit)
    }
}

/// `p / (m c)` for an SI momentum.
pub fn momentum_si_to_natural(p_si: f64, mass: f64) -> Result<NaturalValue> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(domain("mass must be strictly positive"));
    }
    if !p_si.is_finite() {
        return Err(domain("momentum must be finite"));
    }
    Ok(NaturalValue::momentum(p_si / (mass * CONSTANTS.c)))
}

/// Exact relativistic inversion of `v = p / (γ m)`: `p/mc = (v/c) / √(1 − v²/c²)`.
pub fn velocity_to_momentum(v: f64) -> Result<NaturalValue> {
    let beta = v / CONSTANTS.c;
    if !beta.is_finite() || beta.abs() >= 1.0 {
        return Err(domain("speed must satisfy |v| < c"));
    }
    Ok(NaturalValue::momentum(beta / (1.0 - beta * beta).sqrt()))
}

/// Velocity in m/s of a particle with momentum `p / mc`.
pub fn momentum_to_velocity(p: f64) -> f64 {
    CONSTANTS.c * p / (1.0 + p * p).sqrt()
}

/// Leading-order conversion of a velocity width to a momentum width, `Δ/mc = δv/c`.
pub fn velocity_width_to_momentum(delta_v: f64) -> Result<NaturalValue> {
    if !(delta_v > 0.0) || !delta_v.is_finite() {
        return Err(domain("velocity width must be strictly positive"));
    }
    Ok(NaturalValue::momentum(delta_v / CONSTANTS.c))
}

pub fn momentum_width_to_velocity(delta: f64) -> f64 {
    delta * CONSTANTS.c
}

/// Length of one natural time unit `ħ / (m c²)` in seconds.
pub fn natural_time_unit(mass: f64) -> Result<f64> {
    if !(mass > 0.0) || !mass.is_finite() {
        return Err(domain("mass must be strictly positive"));
    }
    Ok(CONSTANTS.hbar / (mass * CONSTANTS.c * CONSTANTS.c))
}

pub fn seconds_to_natural(t: f64, mass: f64) -> Result<NaturalValue> {
    Ok(NaturalValue::time(t / natural_time_unit(mass)?))
}

pub fn natural_to_seconds(t: NaturalValue, mass: f64) -> Result<f64> {
    if t.kind() != Kind::Time {
        return Err(Error::UnitMismatch { lhs: t.kind(), rhs: Kind::Time });
    }
    Ok(t.value() * natural_time_unit(mass)?)
}
