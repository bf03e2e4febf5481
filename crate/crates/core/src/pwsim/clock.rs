use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

use super::fft::InverseDft;
use crate::error::{domain, Result};

/// A `d`-level clock with `H_C = diag(0, ε, …, (d−1)ε)` and the covariant
/// POVM `{|τ_k⟩⟨τ_k|}`, `|τ_k⟩ = d^{-1/2} Σ_n e^{−iE_n τ_k}|E_n⟩`,
/// `τ_k = kT/d`, `T = 2π/ε`.
///
/// The readings form a discrete Fourier pair with the energy basis, so the
/// POVM is a projective resolution of the identity and `e^{−iτ′H_C}` maps
/// `|τ_k⟩` to `|τ_{k+j}⟩` whenever `τ′ = jT/d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteClock {
    dim: usize,
    energy_step: f64,
}

/// Initial internal state of a clock, centred on a chosen reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClockPreparation {
    /// The POVM element `|τ₀⟩` itself: flat over all `d` levels.
    Sharp,
    /// Covariant state with a Gaussian energy envelope centred mid-band.
    /// `width_levels` is the energy standard deviation in units of `ε`.
    Gaussian { width_levels: f64 },
}

impl ClockPreparation {
    /// Gaussian envelope of width `d/16` levels; band-edge amplitudes stay
    /// below `e^{-12}` of the peak for every `d ≥ 8`.
    pub fn default_for(dim: usize) -> Self {
        ClockPreparation::Gaussian { width_levels: dim as f64 / 16.0 }
    }
}

impl FiniteClock {
    pub fn new(dim: usize, energy_step: f64) -> Result<Self> {
        if dim < 2 {
            return Err(domain("clock dimension must be at least 2"));
        }
        if !(energy_step > 0.0) || !energy_step.is_finite() {
            return Err(domain("clock energy step must be strictly positive"));
        }
        Ok(Self { dim, energy_step })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn energy_step(&self) -> f64 {
        self.energy_step
    }

    pub fn period(&self) -> f64 {
        TAU / self.energy_step
    }

    pub fn energy(&self, n: usize) -> f64 {
        n as f64 * self.energy_step
    }

    pub fn max_energy(&self) -> f64 {
        self.energy(self.dim - 1)
    }

    pub fn reading(&self, k: usize) -> f64 {
        k as f64 * self.period() / self.dim as f64
    }

    pub fn readings(&self) -> Vec<f64> {
        (0..self.dim).map(|k| self.reading(k)).collect()
    }

    /// Energy-basis components of the POVM element `|τ_k⟩`.
    ///
    /// Phases are reduced modulo `d` in integer arithmetic so that grid
    /// states are exactly periodic.
    pub fn grid_state(&self, k: usize) -> Vec<Complex64> {
        let d = self.dim;
        let norm = 1.0 / (d as f64).sqrt();
        (0..d).map(|n| Complex64::from_polar(norm, -TAU * ((n * k) % d) as f64 / d as f64)).collect()
    }

    /// Energy-basis components of the covariant state `|τ⟩ = e^{−iτH_C}|τ=0⟩`
    /// for an arbitrary real `τ`.
    pub fn state_at(&self, tau: f64) -> Vec<Complex64> {
        let norm = 1.0 / (self.dim as f64).sqrt();
        (0..self.dim).map(|n| Complex64::from_polar(norm, -self.energy(n) * tau)).collect()
    }

    /// Applies `e^{−iτH_C}` in place.
    pub fn evolve(&self, state: &mut [Complex64], tau: f64) {
        for (n, c) in state.iter_mut().enumerate() {
            *c *= Complex64::from_polar(1.0, -self.energy(n) * tau);
        }
    }

    /// `⟨τ_k|ψ⟩` for every reading.
    pub fn reading_amplitudes(&self, state: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(state.len(), self.dim, "state dimension mismatch");
        let mut out = state.to_vec();
        let mut scratch = alloc::vec![Complex64::new(0.0, 0.0); self.dim];
        InverseDft::new(self.dim).process(&mut out, &mut scratch);
        let norm = 1.0 / (self.dim as f64).sqrt();
        out.iter_mut().for_each(|a| *a *= norm);
        out
    }

    /// Born-rule distribution of readings, `|⟨τ_k|ψ⟩|²`.
    pub fn reading_distribution(&self, state: &[Complex64]) -> Vec<f64> {
        self.reading_amplitudes(state).iter().map(|a| a.norm_sqr()).collect()
    }

    /// Largest entrywise deviation of `Σ_k |τ_k⟩⟨τ_k|` from the identity.
    pub fn resolution_of_identity_error(&self) -> f64 {
        let d = self.dim;
        let states: Vec<Vec<Complex64>> = (0..d).map(|k| self.grid_state(k)).collect();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let s: Complex64 = states.iter().map(|v| v[i] * v[j].conj()).sum();
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - Complex64::new(target, 0.0)).norm());
            }
        }
        worst
    }

    /// Initial internal state whose reading distribution is centred on `tau0`.
    pub fn prepare(&self, prep: ClockPreparation, tau0: f64) -> Result<Vec<Complex64>> {
        let mut state = match prep {
            ClockPreparation::Sharp => self.state_at(0.0),
            ClockPreparation::Gaussian { width_levels } => {
                if !(width_levels > 0.0) || !width_levels.is_finite() {
                    return Err(domain("clock envelope width must be strictly positive"));
                }
                let centre = (self.dim - 1) as f64 / 2.0;
                let mut v: Vec<Complex64> = (0..self.dim)
                    .map(|n| {
                        let x = n as f64 - centre;
                        Complex64::new((-x * x / (4.0 * width_levels * width_levels)).exp(), 0.0)
                    })
                    .collect();
                let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                v.iter_mut().for_each(|c| *c /= norm);
                v
            }
        };
        self.evolve(&mut state, tau0);
        Ok(state)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_of_identity() {
        for d in [8, 32, 64] {
            let clock = FiniteClock::new(d, 1e-3 / (d - 1) as f64).unwrap();
            assert!(clock.resolution_of_identity_error() < 1e-10, "d = {d}");
        }
    }

    #[test]
    fn covariance_under_grid_shifts() {
        let clock = FiniteClock::new(32, 1e-4).unwrap();
        let step = clock.period() / 32.0;
        for k in [0, 5, 31] {
            for j in [1, 3, 17] {
                let mut s = clock.grid_state(k);
                clock.evolve(&mut s, j as f64 * step);
                let target = clock.grid_state((k + j) % 32);
                for (a, b) in s.iter().zip(&target) {
                    assert!((a - b).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn grid_states_agree_with_continuous_family() {
        let clock = FiniteClock::new(16, 2e-4).unwrap();
        let a = clock.grid_state(3);
        let b = clock.state_at(clock.reading(3));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn sharp_state_reads_its_own_tick() {
        let clock = FiniteClock::new(16, 1e-4).unwrap();
        let p = clock.reading_distribution(&clock.grid_state(5));
        assert!((p[5] - 1.0).abs() < 1e-12);
        assert!(p.iter().enumerate().filter(|(k, _)| *k != 5).all(|(_, v)| *v < 1e-24));
    }

    #[test]
    fn gaussian_preparation_is_normalized_and_centred() {
        let clock = FiniteClock::new(64, 1e-3 / 63.0).unwrap();
        let tau0 = clock.reading(10);
        let s = clock.prepare(ClockPreparation::default_for(64), tau0).unwrap();
        let p = clock.reading_distribution(&s);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let peak = p.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert_eq!(peak, 10);
        // band edges are suppressed
        assert!(s[0].norm() < 1e-6 && s[63].norm() < 1e-6);
    }

    #[test]
    fn rejects_degenerate_clocks() {
        assert!(FiniteClock::new(1, 1.0).is_err());
        assert!(FiniteClock::new(8, 0.0).is_err());
        let c = FiniteClock::new(8, 1.0).unwrap();
        assert!(c.prepare(ClockPreparation::Gaussian { width_levels: 0.0 }, 0.0).is_err());
    }
}
