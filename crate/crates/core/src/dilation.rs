//! Closed-form average time dilation of clock A (superposed momenta) relative
//! to clock B (single packet), at leading order in `p²/m²c²`.
//!
//! All formulas are per unit mass with `m = c = 1`.

#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

use crate::error::{domain, Result};
use crate::wavepacket::{overlap_exponent, SuperpositionSpec, WavePacket};

/// Above this overlap exponent `k_quantum` is assembled in log space.
pub const LOG_SPACE_THRESHOLD: f64 = 700.0;

/// `γ = √(1 + p̄²)`.
pub fn gamma_factor(pbar: f64) -> f64 {
    (1.0 + pbar * pbar).sqrt()
}

/// `(p̄_A² cos²θ + p̄_A′² sin²θ − p̄_B²) / 2`.
pub fn k_classical(theta: f64, p_a: f64, p_a_prime: f64, p_b: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    (p_a * p_a * c * c + p_a_prime * p_a_prime * s * s - p_b * p_b) / 2.0
}

/// A real number stored as sign and natural log of its magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLog {
    /// `-1`, `0` or `+1`.
    pub sign: f64,
    /// `ln |x|`; `-∞` when `sign == 0`.
    pub ln_abs: f64,
}

impl SignedLog {
    pub fn value(&self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.ln_abs.exp()
        }
    }
}

/// `k_quantum` as sign and log-magnitude; never underflows.
pub fn k_quantum_log(s: &SuperpositionSpec) -> Result<SignedLog> {
    let n = s.normalization()?;
    let (p, pp) = (s.packet_a().pbar(), s.packet_a_prime().pbar());
    let diff = pp - p;
    let bracket = 2.0 * (pp * pp - p * p) * (2.0 * s.theta()).cos() - diff * diff;
    let prefactor = s.coherence() / (8.0 * n) * bracket;
    let exponent = overlap_exponent(s.packet_a(), s.packet_a_prime())?;
    if prefactor == 0.0 {
        return Ok(SignedLog { sign: 0.0, ln_abs: f64::NEG_INFINITY });
    }
    Ok(SignedLog { sign: prefactor.signum(), ln_abs: prefactor.abs().ln() - exponent })
}

/// `sin2θ cosφ / (8N) · e^{−δ²/4Δ²} · [2(p̄′² − p̄²) cos2θ − δ²]`, `δ = p̄′ − p̄`.
///
/// For overlap exponents above [`LOG_SPACE_THRESHOLD`] the product is formed in
/// log space, so the result keeps its sign down to the smallest subnormal and
/// underflows to a signed zero beyond that.
pub fn k_quantum(s: &SuperpositionSpec) -> Result<f64> {
    let exponent = overlap_exponent(s.packet_a(), s.packet_a_prime())?;
    if exponent > LOG_SPACE_THRESHOLD {
        let l = k_quantum_log(s)?;
        let v = l.value();
        return Ok(if v == 0.0 { 0.0 * l.sign } else { v });
    }
    let n = s.normalization()?;
    let (p, pp) = (s.packet_a().pbar(), s.packet_a_prime().pbar());
    let diff = pp - p;
    let bracket = 2.0 * (pp * pp - p * p) * (2.0 * s.theta()).cos() - diff * diff;
    Ok(s.coherence() / (8.0 * n) * (-exponent).exp() * bracket)
}

/// Clock A in a two-branch superposition, clock B in a single packet of the
/// same width, conditioned on B reading `tau_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scenario {
    sup_a: SuperpositionSpec,
    pbar_b: f64,
    tau_b: f64,
}

impl Scenario {
    pub fn new(sup_a: SuperpositionSpec, pbar_b: f64, tau_b: f64) -> Result<Self> {
        if !pbar_b.is_finite() {
            return Err(domain("p_b must be finite"));
        }
        if !(tau_b >= 0.0) || !tau_b.is_finite() {
            return Err(domain("tau_b must be finite and non-negative"));
        }
        Ok(Self { sup_a, pbar_b, tau_b })
    }

    /// Builds the superposition from raw parameters.
    pub fn from_parameters(
        theta: f64,
        phi: f64,
        p_a: f64,
        p_a_prime: f64,
        p_b: f64,
        delta: f64,
        tau_b: f64,
    ) -> Result<Self> {
        Self::new(SuperpositionSpec::from_momenta(theta, phi, p_a, p_a_prime, delta)?, p_b, tau_b)
    }

    pub fn sup_a(&self) -> &SuperpositionSpec {
        &self.sup_a
    }

    pub fn pbar_b(&self) -> f64 {
        self.pbar_b
    }

    pub fn delta(&self) -> f64 {
        self.sup_a.delta()
    }

    pub fn tau_b(&self) -> f64 {
        self.tau_b
    }

    pub fn packet_b(&self) -> WavePacket {
        WavePacket::new(self.pbar_b, self.delta()).expect("validated on construction")
    }

    pub fn with_tau_b(&self, tau_b: f64) -> Result<Self> {
        Self::new(self.sup_a, self.pbar_b, tau_b)
    }

    /// Clock A in one branch only: `Branch::A` keeps `p̄_A`, `Branch::APrime` keeps `p̄_A′`.
    pub fn branch(&self, which: Branch) -> Self {
        let packet = match which {
            Branch::A => *self.sup_a.packet_a(),
            Branch::APrime => *self.sup_a.packet_a_prime(),
        };
        Self { sup_a: SuperpositionSpec::single(packet), ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    A,
    APrime,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilationResult {
    pub k_classical: f64,
    pub k_quantum: f64,
    /// `γ_eff⁻¹ = 1 − K_classical − K_quantum`.
    pub gamma_eff_inv: f64,
    /// `⟨T_A⟩ = γ_eff⁻¹ τ_B`.
    pub mean_tau_a: f64,
}

impl DilationResult {
    fn assemble(k_classical: f64, k_quantum: f64, tau_b: f64) -> Self {
        let gamma_eff_inv = 1.0 - k_classical - k_quantum;
        Self { k_classical, k_quantum, gamma_eff_inv, mean_tau_a: gamma_eff_inv * tau_b }
    }
}

pub fn dilation_result(sc: &Scenario) -> Result<DilationResult> {
    let s = sc.sup_a();
    let kc = k_classical(s.theta(), s.packet_a().pbar(), s.packet_a_prime().pbar(), sc.pbar_b());
    let kq = k_quantum(s)?;
    Ok(DilationResult::assemble(kc, kq, sc.tau_b()))
}

/// Same scenario with the coherence term deleted: the classical mixture of
/// the two branches with weights `cos²θ`, `sin²θ`.
pub fn mixture_result(sc: &Scenario) -> DilationResult {
    let s = sc.sup_a();
    let kc = k_classical(s.theta(), s.packet_a().pbar(), s.packet_a_prime().pbar(), sc.pbar_b());
    DilationResult::assemble(kc, 0.0, sc.tau_b())
}

/// Special-relativistic reading of a clock with a sharp momentum: `(γ_B/γ_A) τ_B`.
pub fn sr_baseline(p_a: f64, p_b: f64, tau_b: f64) -> f64 {
    gamma_factor(p_b) / gamma_factor(p_a) * tau_b
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::quadrature::GaussHermite;
    use crate::wavepacket::second_moment_with;
    use core::f64::consts::{FRAC_PI_2, PI, TAU};
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn k_split_equals_second_moment_difference(
            p in -0.1f64..0.1, pp in -0.1f64..0.1, pb in -0.1f64..0.1, d in 0.001f64..0.05,
            theta in 0.0f64..=FRAC_PI_2, phi in 0.0f64..TAU,
        ) {
            let s = match SuperpositionSpec::from_momenta(theta, phi, p, pp, d) {
                Ok(s) if s.normalization().unwrap() >= 1e-6 => s,
                _ => return Ok(()),
            };
            let rule = GaussHermite::default();
            let lhs = k_classical(theta, p, pp, pb) + k_quantum(&s).unwrap();
            let rhs = (second_moment_with(&rule, &s).unwrap() - d * d / 2.0 - pb * pb) / 2.0;
            prop_assert!((lhs - rhs).abs() <= 1e-9);
        }
    }

    proptest! {
        #[test]
        fn branch_exchange_symmetry(
            p in -0.1f64..0.1, pp in -0.1f64..0.1, pb in -0.1f64..0.1, d in 0.001f64..0.05,
            theta in 0.0f64..=FRAC_PI_2, phi in 0.0f64..TAU,
        ) {
            let Ok(sc) = Scenario::from_parameters(theta, phi, p, pp, pb, d, 1.0) else { return Ok(()) };
            let swapped = Scenario::new(sc.sup_a().exchanged(), pb, 1.0).unwrap();
            let (a, b) = (dilation_result(&sc).unwrap(), dilation_result(&swapped).unwrap());
            prop_assert!((a.k_classical - b.k_classical).abs() <= 1e-17);
            // sin(π − 2θ) and cos(π − 2θ) carry an absolute rounding error of a few ulp
            prop_assert!((a.k_quantum - b.k_quantum).abs() <= 1e-12 * a.k_quantum.abs() + 1e-22);
            prop_assert!((a.gamma_eff_inv - b.gamma_eff_inv).abs() <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn k_quantum_is_odd_in_cos_phi(
            p in -0.1f64..0.1, pp in -0.1f64..0.1, d in 0.001f64..0.05,
            theta in 0.0f64..=FRAC_PI_2, phi in 0.0f64..TAU,
        ) {
            let (Ok(s1), Ok(s2)) = (
                SuperpositionSpec::from_momenta(theta, phi, p, pp, d),
                SuperpositionSpec::from_momenta(theta, PI - phi, p, pp, d),
            ) else { return Ok(()) };
            let (n1, n2) = (s1.normalization().unwrap(), s2.normalization().unwrap());
            // the odd symmetry is of the numerator; N itself flips its coherence term
            let a = k_quantum(&s1).unwrap() * n1;
            let b = k_quantum(&s2).unwrap() * n2;
            prop_assert!((a + b).abs() <= 1e-12 * a.abs().max(1e-30));
        }

        #[test]
        fn k_quantum_vanishes_at_both_ends(p in -0.1f64..0.1, d in 0.001f64..0.05, theta in 0.1f64..1.4) {
            let same = SuperpositionSpec::from_momenta(theta, 0.0, p, p, d).unwrap();
            prop_assert_eq!(k_quantum(&same).unwrap(), 0.0);
            let far = SuperpositionSpec::from_momenta(theta, 0.0, p, p + 60.0 * d, d).unwrap();
            prop_assert!(k_quantum(&far).unwrap().abs() < 1e-300);
        }
    }
}
