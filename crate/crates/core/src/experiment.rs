//! Laboratory-unit feasibility estimate for an atomic clock in a velocity
//! superposition, read out against lab-frame radiation.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;

use crate::dilation::{dilation_result, Scenario};
use crate::error::{domain, Error, Result};
use crate::units::{
    momentum_to_velocity, momentum_width_to_velocity, natural_time_unit, velocity_to_momentum,
    velocity_width_to_momentum, CONSTANTS,
};

/// Rb-87 ground-state hyperfine splitting, Hz.
pub const RB87_HYPERFINE_HZ: f64 = 6_834_682_610.904_29;
pub const BUILTIN_SCENARIOS: &[&str] = &["rb87-default"];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioSI {
    /// kg
    pub mass: f64,
    /// Branch velocities, m/s.
    pub v1: f64,
    pub v2: f64,
    pub theta: f64,
    pub phi: f64,
    /// Velocity-space packet width, m/s.
    pub delta_v: f64,
    /// s
    pub tau_b: f64,
    /// Hz
    pub transition_freq: f64,
    /// s
    pub clock_resolution: f64,
    /// s
    pub coherence_time: f64,
}

/// The same scenario in natural units of the atom's mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NaturalScenario {
    pub p1: f64,
    pub p2: f64,
    pub delta: f64,
    /// `τ_B` in units of `ħ/mc²`.
    pub tau_b: f64,
}

impl ScenarioSI {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(domain(format!("{name} must be finite and strictly positive, got {x}")))
            }
        };
        positive("mass", self.mass)?;
        positive("delta_v", self.delta_v)?;
        positive("transition_freq", self.transition_freq)?;
        positive("clock_resolution", self.clock_resolution)?;
        positive("coherence_time", self.coherence_time)?;
        if !(self.tau_b >= 0.0) || !self.tau_b.is_finite() {
            return Err(domain(format!("tau_b must be finite and non-negative, got {}", self.tau_b)));
        }
        for (name, v) in [("v1", self.v1), ("v2", self.v2)] {
            if !v.is_finite() || v.abs() >= CONSTANTS.c {
                return Err(domain(format!("{name} = {v} m/s must satisfy |v| < c")));
            }
        }
        if !self.theta.is_finite() || !self.phi.is_finite() {
            return Err(domain("theta and phi must be finite"));
        }
        Ok(())
    }

    pub fn to_natural(&self) -> Result<NaturalScenario> {
        self.validate()?;
        Ok(NaturalScenario {
            p1: velocity_to_momentum(self.v1)?.value(),
            p2: velocity_to_momentum(self.v2)?.value(),
            delta: velocity_width_to_momentum(self.delta_v)?.value(),
            tau_b: self.tau_b / natural_time_unit(self.mass)?,
        })
    }

    /// Replaces the kinematic fields with the SI equivalents of `n`.
    pub fn with_natural(&self, n: &NaturalScenario) -> Result<Self> {
        Ok(Self {
            v1: momentum_to_velocity(n.p1),
            v2: momentum_to_velocity(n.p2),
            delta_v: momentum_width_to_velocity(n.delta),
            tau_b: n.tau_b * natural_time_unit(self.mass)?,
            ..*self
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeasibilityReport {
    pub k_classical: f64,
    pub k_quantum: f64,
    pub gamma_eff_inv: f64,
    /// `τ_B` capped at the coherence time, s.
    pub effective_tau_b: f64,
    /// `effective_tau_b · K_q`, s.
    pub time_shift_quantum: f64,
    /// `ν_{g→e} (γ_eff⁻¹ − 1)`, Hz.
    pub resonance_shift: f64,
    /// `γ_eff⁻¹ ν_{g→e}`, Hz.
    pub nu_lab: f64,
    pub detectable: bool,
    /// `|time_shift_quantum| / clock_resolution`.
    pub margin: f64,
    pub coherence_time: f64,
    pub clock_resolution: f64,
}

/// Feasibility of resolving the quantum contribution with the reference clock
/// co-moving with the lab (`p̄_B = 0`).
pub fn estimate(sc: &ScenarioSI) -> Result<FeasibilityReport> {
    let n = sc.to_natural()?;
    let scenario = Scenario::from_parameters(sc.theta, sc.phi, n.p1, n.p2, 0.0, n.delta, n.tau_b)?;
    let r = dilation_result(&scenario)?;
    let effective_tau_b = sc.tau_b.min(sc.coherence_time);
    let time_shift_quantum = effective_tau_b * r.k_quantum;
    let margin = time_shift_quantum.abs() / sc.clock_resolution;
    Ok(FeasibilityReport {
        k_classical: r.k_classical,
        k_quantum: r.k_quantum,
        gamma_eff_inv: r.gamma_eff_inv,
        effective_tau_b,
        time_shift_quantum,
        resonance_shift: -sc.transition_freq * (r.k_classical + r.k_quantum),
        nu_lab: r.gamma_eff_inv * sc.transition_freq,
        detectable: time_shift_quantum.abs() >= sc.clock_resolution,
        margin,
        coherence_time: sc.coherence_time,
        clock_resolution: sc.clock_resolution,
    })
}

/// Named default scenarios.
///
/// `rb87-default`: Rb-87 branches at 10 and 40 m/s in an equal-weight real
/// superposition, velocity width 13.3 m/s (close to the width that maximizes
/// `|K_q|` for a 30 m/s difference), `τ_B` equal to the 10 s coherence time,
/// 1e-14 s clock resolution, read out on the ground-state hyperfine line.
pub fn builtin_scenario(name: &str) -> Result<ScenarioSI> {
    match name {
        "rb87-default" => Ok(ScenarioSI {
            mass: CONSTANTS.m_rb87,
            v1: 10.0,
            v2: 40.0,
            theta: FRAC_PI_4,
            phi: 0.0,
            delta_v: 13.3,
            tau_b: 10.0,
            transition_freq: RB87_HYPERFINE_HZ,
            clock_resolution: 1e-14,
            coherence_time: 10.0,
        }),
        _ => Err(Error::UnknownScenario { name: name.into(), available: BUILTIN_SCENARIOS.to_vec() }),
    }
}

pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN_SCENARIOS.to_vec()
}
