//! Gaussian momentum wave packets and two-branch superpositions.
//!
//! Amplitude convention, fixed for the whole crate:
//!
//! ```text
//! ψ(p) = (πΔ²)^(-1/4) · exp(−(p − p̄)² / (2Δ²))
//! ```
//!
//! so `|ψ|²` is a normal density with standard deviation `Δ/√2`, and two
//! equal-width packets overlap as `⟨p̄|p̄′⟩ = exp(−(p̄′ − p̄)² / (4Δ²))`. The
//! width `Δ` is therefore the amplitude width, not the standard deviation of
//! the momentum distribution. This is the only equal-width convention for
//! which the overlap exponent is exactly `δ²/(4Δ²)` as it appears in
//! [`crate::dilation::k_quantum`].

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

use crate::error::{domain, Error, Result};
use crate::quadrature::{trapezoid_weights, GaussHermite};

/// Smallest admissible superposition norm `N`.
pub const NORM_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavePacket {
    pbar: f64,
    delta: f64,
}

impl WavePacket {
    pub fn new(pbar: f64, delta: f64) -> Result<Self> {
        if !pbar.is_finite() {
            return Err(domain("packet centre must be finite"));
        }
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(domain("packet width must be strictly positive"));
        }
        Ok(Self { pbar, delta })
    }

    pub fn pbar(&self) -> f64 {
        self.pbar
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn amplitude(&self, p: f64) -> f64 {
        let x = (p - self.pbar) / self.delta;
        (PI * self.delta * self.delta).powf(-0.25) * (-0.5 * x * x).exp()
    }
}

/// Exponent `(p̄_b − p̄_a)² / (4Δ²)` of the overlap; kept separate so callers
/// can work in log space.
pub fn overlap_exponent(a: &WavePacket, b: &WavePacket) -> Result<f64> {
    if a.delta != b.delta {
        return Err(Error::MismatchedWidths { a: a.delta, b: b.delta });
    }
    let d = b.pbar - a.pbar;
    Ok(d * d / (4.0 * a.delta * a.delta))
}

/// `⟨a|b⟩ = exp(−(p̄_b − p̄_a)² / (4Δ²))`.
pub fn overlap(a: &WavePacket, b: &WavePacket) -> Result<f64> {
    Ok((-overlap_exponent(a, b)?).exp())
}

/// `cos θ |p̄⟩ + e^{iφ} sin θ |p̄′⟩`, not yet normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuperpositionSpec {
    theta: f64,
    phi: f64,
    packet_a: WavePacket,
    packet_a_prime: WavePacket,
}

impl SuperpositionSpec {
    /// Fails on unequal widths or when the norm falls below [`NORM_FLOOR`].
    pub fn new(theta: f64, phi: f64, packet_a: WavePacket, packet_a_prime: WavePacket) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(domain("theta and phi must be finite"));
        }
        let spec = Self { theta, phi, packet_a, packet_a_prime };
        spec.normalization()?;
        Ok(spec)
    }

    /// Convenience constructor from raw momenta sharing one width.
    pub fn from_momenta(theta: f64, phi: f64, pbar: f64, pbar_prime: f64, delta: f64) -> Result<Self> {
        Self::new(theta, phi, WavePacket::new(pbar, delta)?, WavePacket::new(pbar_prime, delta)?)
    }

    /// A single packet (θ = 0).
    pub fn single(packet: WavePacket) -> Self {
        Self { theta: 0.0, phi: 0.0, packet_a: packet, packet_a_prime: packet }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn packet_a(&self) -> &WavePacket {
        &self.packet_a
    }

    pub fn packet_a_prime(&self) -> &WavePacket {
        &self.packet_a_prime
    }

    pub fn delta(&self) -> f64 {
        self.packet_a.delta
    }

    /// The same state with the branches swapped: `θ → π/2 − θ`.
    pub fn exchanged(&self) -> Self {
        Self {
            theta: core::f64::consts::FRAC_PI_2 - self.theta,
            phi: self.phi,
            packet_a: self.packet_a_prime,
            packet_a_prime: self.packet_a,
        }
    }

    /// Interference coefficient `sin 2θ cos φ`.
    ///
    /// Factors within rounding of zero are snapped to zero, so pure branches
    /// (`θ = π/2`) and quadrature phases (`φ = π/2`) carry no interference term.
    pub fn coherence(&self) -> f64 {
        let snap = |x: f64| if x.abs() <= 4.0 * f64::EPSILON { 0.0 } else { x };
        snap((2.0 * self.theta).sin()) * snap(self.phi.cos())
    }

    /// `N = 1 + sin 2θ cos φ · ⟨p̄|p̄′⟩`.
    pub fn normalization(&self) -> Result<f64> {
        let n = 1.0 + self.coherence() * overlap(&self.packet_a, &self.packet_a_prime)?;
        if !(n >= NORM_FLOOR) {
            return Err(Error::NearNullNormalization { norm: n, floor: NORM_FLOOR });
        }
        Ok(n)
    }

    /// Unnormalized amplitude `cos θ ψ(p) + e^{iφ} sin θ ψ′(p)`.
    pub fn amplitude(&self, p: f64) -> Complex64 {
        let (s, c) = self.theta.sin_cos();
        Complex64::new(c * self.packet_a.amplitude(p), 0.0)
            + Complex64::from_polar(s * self.packet_a_prime.amplitude(p), self.phi)
    }

    /// Normalized probability density `|ψ(p)|² / N`.
    pub fn density(&self, p: f64) -> Result<f64> {
        Ok(self.amplitude(p).norm_sqr() / self.normalization()?)
    }

    /// `⟨f(p̂)⟩` by Gauss–Hermite quadrature.
    ///
    /// `|ψ|²` is a sum of three Gaussians (two branch densities and their
    /// cross term centred at the midpoint); each is integrated with its own
    /// node set. The integrand is evaluated from the amplitudes, so the result
    /// is independent of any closed-form moment expression.
    pub fn expectation_with<F: Fn(f64) -> f64>(&self, rule: &GaussHermite, f: F) -> Result<f64> {
        let n = self.normalization()?;
        let (s, c) = self.theta.sin_cos();
        let (a, b) = (&self.packet_a, &self.packet_a_prime);
        let delta = self.delta();
        let mid = 0.5 * (a.pbar + b.pbar);
        let first = rule.integrate_around(a.pbar, delta, |p| f(p) * a.amplitude(p).powi(2));
        let second = rule.integrate_around(b.pbar, delta, |p| f(p) * b.amplitude(p).powi(2));
        let cross = rule.integrate_around(mid, delta, |p| f(p) * a.amplitude(p) * b.amplitude(p));
        Ok((c * c * first + s * s * second + 2.0 * s * c * self.phi.cos() * cross) / n)
    }
}

/// `⟨p̂²⟩` of the normalized superposition, integrated numerically with a
/// 64-node Gauss–Hermite rule per Gaussian term.
pub fn second_moment(s: &SuperpositionSpec) -> Result<f64> {
    second_moment_with(&GaussHermite::default(), s)
}

/// As [`second_moment`] with a caller-owned rule (avoids rebuilding nodes in loops).
pub fn second_moment_with(rule: &GaussHermite, s: &SuperpositionSpec) -> Result<f64> {
    s.expectation_with(rule, |p| p * p)
}

/// `|ψ(p)|²/N` on a strictly increasing grid.
pub fn sample_density(s: &SuperpositionSpec, p_grid: &[f64]) -> Result<Vec<f64>> {
    if p_grid.is_empty() {
        return Err(domain("momentum grid is empty"));
    }
    if p_grid.iter().any(|p| !p.is_finite()) {
        return Err(domain("momentum grid contains non-finite points"));
    }
    if p_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(domain("momentum grid must be strictly increasing"));
    }
    let n = s.normalization()?;
    Ok(p_grid.iter().map(|&p| s.amplitude(p).norm_sqr() / n).collect())
}

/// Trapezoid mass of a sampled density.
pub fn grid_mass(p_grid: &[f64], density: &[f64]) -> f64 {
    trapezoid_weights(p_grid).iter().zip(density).map(|(w, d)| w * d).sum()
}
