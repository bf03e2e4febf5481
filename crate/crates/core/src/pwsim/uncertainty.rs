use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

use super::clock::FiniteClock;
use super::model::PwModel;

/// Probability mass that counts as "support" for the applicability checks.
pub const SUPPORT_THRESHOLD: f64 = 1e-6;
/// `ħ/2c²` in natural units: times in `ħ/mc²`, masses in `m`.
pub const UNCERTAINTY_BOUND: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Applicability {
    Applicable,
    /// `ΔM = 0`: the bound would need `ΔT → ∞`, which a finite clock cannot show.
    EnergyEigenstate,
    /// Energy support reaches the outer eighth of the band at either end, where
    /// truncation of the spectrum distorts the reading distribution.
    BandEdge,
    /// Reading support reaches the point opposite the mean on the ring, so the
    /// variance depends on where the seam is cut.
    StraddlesSeam,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    /// Standard deviation of the POVM reading about its circular mean.
    pub delta_t: f64,
    /// Standard deviation of `M = 1 + H_C`.
    pub delta_m: f64,
    pub product: f64,
    pub bound: f64,
    pub applicability: Applicability,
}

impl UncertaintyReport {
    /// `None` when the bound is not applicable; otherwise whether
    /// `product ≥ (1 − slack)·bound`.
    pub fn satisfied(&self, slack: f64) -> Option<bool> {
        match self.applicability {
            Applicability::Applicable => Some(self.product >= (1.0 - slack) * self.bound),
            _ => None,
        }
    }
}

/// Time–mass uncertainty product of clock A's internal state.
pub fn uncertainty_diagnostic(m: &PwModel) -> UncertaintyReport {
    uncertainty_for_state(m.clock_a(), &m.particle_a().internal_state())
}

/// Time–mass uncertainty product of an arbitrary internal clock state.
pub fn uncertainty_for_state(clock: &FiniteClock, state: &[Complex64]) -> UncertaintyReport {
    let d = clock.dim();
    assert_eq!(state.len(), d, "state dimension mismatch");
    let norm: f64 = state.iter().map(|c| c.norm_sqr()).sum();
    let pops: alloc::vec::Vec<f64> = state.iter().map(|c| c.norm_sqr() / norm).collect();

    let mean_e: f64 = pops.iter().enumerate().map(|(n, p)| p * clock.energy(n)).sum();
    let var_e: f64 = pops.iter().enumerate().map(|(n, p)| p * (clock.energy(n) - mean_e).powi(2)).sum();
    let delta_m = var_e.max(0.0).sqrt();

    let period = clock.period();
    let readings = clock.readings();
    let dist: alloc::vec::Vec<f64> = clock.reading_distribution(state).iter().map(|p| p / norm).collect();
    let scale = TAU / period;
    let z: Complex64 = readings.iter().zip(&dist).map(|(t, p)| Complex64::from_polar(*p, scale * t)).sum();
    let centre = z.arg() / scale;
    let offset = |t: f64| {
        let x = t - centre;
        x - period * (x / period).round()
    };
    let var_t: f64 = readings.iter().zip(&dist).map(|(t, p)| p * offset(*t).powi(2)).sum();
    let delta_t = var_t.max(0.0).sqrt();

    let edge = (d / 8).max(1);
    let edge_mass: f64 = pops[..edge].iter().chain(&pops[d - edge..]).sum();
    let seam_mass: f64 =
        readings.iter().zip(&dist).filter(|(t, _)| offset(**t).abs() > 0.375 * period).map(|(_, p)| p).sum();

    let applicability = if delta_m <= 1e-12 * clock.energy_step() {
        Applicability::EnergyEigenstate
    } else if edge_mass > SUPPORT_THRESHOLD {
        Applicability::BandEdge
    } else if seam_mass > SUPPORT_THRESHOLD {
        Applicability::StraddlesSeam
    } else {
        Applicability::Applicable
    };
    UncertaintyReport { delta_t, delta_m, product: delta_t * delta_m, bound: UNCERTAINTY_BOUND, applicability }
}
