use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

use super::fft::InverseDft;
use super::model::PwModel;
use crate::error::{Error, Result};

/// Denominators below this are treated as conditioning on a null event.
pub const NULL_CONDITIONING: f64 = 1e-14;
/// Time nodes whose B-weight falls below this fraction of the peak are skipped.
const NEGLIGIBLE_WEIGHT: f64 = 1e-18;

/// `Prob[τ_A = τ_k when τ_B]` over clock A's readings.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalDistribution {
    tau_values: Vec<f64>,
    probabilities: Vec<f64>,
    tau_b: f64,
    period: f64,
    numerators: Vec<f64>,
    denominator: f64,
}

impl ConditionalDistribution {
    /// Assembles a distribution from the numerator/denominator pair.
    pub fn from_parts(
        tau_values: Vec<f64>,
        period: f64,
        tau_b: f64,
        numerators: Vec<f64>,
        denominator: f64,
    ) -> Result<Self> {
        if tau_values.len() != numerators.len() || tau_values.is_empty() {
            return Err(Error::Domain("readings and numerators must be non-empty and equal length".into()));
        }
        if !(denominator >= NULL_CONDITIONING) {
            return Err(Error::NullConditioning { denominator });
        }
        let probabilities = numerators.iter().map(|x| x / denominator).collect();
        Ok(Self { tau_values, probabilities, tau_b, period, numerators, denominator })
    }

    pub fn tau_values(&self) -> &[f64] {
        &self.tau_values
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn tau_b(&self) -> f64 {
        self.tau_b
    }

    /// Period of clock A's readings.
    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn numerators(&self) -> &[f64] {
        &self.numerators
    }

    /// Time-averaged probability that B reads `τ_B`.
    pub fn denominator(&self) -> f64 {
        self.denominator
    }

    pub fn total_probability(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// Density-matrix mixture `w ρ₁ + (1 − w) ρ₂` of two conditioned models:
    /// numerators and denominators are mixed separately.
    pub fn mix(first: &Self, second: &Self, w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain(format!("mixture weight {w} outside [0, 1]")));
        }
        if first.tau_values != second.tau_values || first.tau_b != second.tau_b || first.period != second.period {
            return Err(Error::Domain("mixed distributions must share readings and tau_b".into()));
        }
        if w == 1.0 {
            return Ok(first.clone());
        }
        if w == 0.0 {
            return Ok(second.clone());
        }
        let numerators = first.numerators.iter().zip(&second.numerators).map(|(a, b)| w * a + (1.0 - w) * b).collect();
        let denominator = w * first.denominator + (1.0 - w) * second.denominator;
        Self::from_parts(first.tau_values.clone(), first.period, first.tau_b, numerators, denominator)
    }
}

/// Evaluates `Prob[τ_A when τ_B]` on the discretized physical state.
///
/// The physical state is the group average `∫dt |t⟩ e^{−i(H_A+H_B)t}|ψ_A⟩|ψ_B⟩`;
/// orthogonality of the `|t⟩` collapses both inner products to single
/// integrals over `t`, taken with the trapezoid rule over one recurrence
/// period of clock B centred on the coordinate time at which B reads `τ_B`.
/// Each term is an exact phase evolution of the diagonal Hamiltonian.
pub fn conditional_distribution(m: &PwModel, tau_b: f64) -> Result<ConditionalDistribution> {
    let elapsed = tau_b - m.initial_reading();
    let period_b = m.clock_b().period();
    if !elapsed.is_finite() || elapsed < 0.0 || elapsed >= period_b {
        return Err(Error::Domain(format!(
            "tau_b must lie within one period of clock B after the initial reading: \
             0 <= {elapsed:e} < {period_b:e}"
        )));
    }
    let window = m.window();
    let centre = window.gamma_ref * elapsed;
    let n_t = window.nodes;
    let h = window.width / (n_t - 1) as f64;
    let start = centre - 0.5 * window.width;

    let b = m.particle_b();
    let d_b = b.clock().dim();
    // ⟨τ_B|E_n⟩ ψ_B(q, n), with the per-momentum phase e^{−iH(q,0)t} dropped
    let bra = b.clock().state_at(tau_b);
    let projected: Vec<Complex64> =
        b.state().chunks(d_b).flat_map(|row| row.iter().zip(&bra).map(|(c, e)| e.conj() * c)).collect();
    let weight_b: Vec<f64> = (0..n_t)
        .map(|i| {
            let t = start + h * i as f64;
            projected
                .chunks(d_b)
                .zip(b.level_offsets().chunks(d_b))
                .map(|(row, offs)| {
                    row.iter()
                        .zip(offs)
                        .map(|(c, w)| c * Complex64::from_polar(1.0, -w * t))
                        .sum::<Complex64>()
                        .norm_sqr()
                })
                .sum::<f64>()
                * if i == 0 || i == n_t - 1 { 0.5 * h } else { h }
        })
        .collect();
    let peak = weight_b.iter().copied().fold(0.0, f64::max);

    let a = m.particle_a();
    let d_a = a.clock().dim();
    let dft = InverseDft::new(d_a);
    let mut buf = alloc::vec![Complex64::new(0.0, 0.0); d_a];
    let mut scratch = buf.clone();
    let mut numerators = alloc::vec![0.0; d_a];
    let mut weight_total = 0.0;
    for (i, &wb) in weight_b.iter().enumerate() {
        weight_total += wb;
        if !(wb > NEGLIGIBLE_WEIGHT * peak) {
            continue;
        }
        let t = start + h * i as f64;
        for (row, offs) in a.state().chunks(d_a).zip(a.level_offsets().chunks(d_a)) {
            for ((slot, c), w) in buf.iter_mut().zip(row).zip(offs) {
                *slot = c * Complex64::from_polar(1.0, -w * t);
            }
            dft.process(&mut buf, &mut scratch);
            for (num, amp) in numerators.iter_mut().zip(&buf) {
                *num += wb * amp.norm_sqr();
            }
        }
    }
    // |⟨τ_k|·⟩|² carries 1/d from the POVM normalization
    let inv_d = 1.0 / d_a as f64;
    let inv_width = 1.0 / window.width;
    numerators.iter_mut().for_each(|x| *x *= inv_d * inv_width);
    // ⟨ψ_A(t)|ψ_A(t)⟩ is conserved by the unitary evolution
    let denominator = weight_total * a.norm_sqr() * inv_width;
    ConditionalDistribution::from_parts(a.clock().readings(), a.clock().period(), tau_b, numerators, denominator)
}

/// Conditional distribution of the classical mixture `w ρ₁ + (1 − w) ρ₂` of
/// two models that differ only in particle A.
pub fn mixture_distribution(m1: &PwModel, m2: &PwModel, w: f64, tau_b: f64) -> Result<ConditionalDistribution> {
    if !m1.same_b_and_clocks(m2) {
        return Err(Error::Domain("mixture models must share clocks, particle B and time window".into()));
    }
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::Domain(format!("mixture weight {w} outside [0, 1]")));
    }
    let first = conditional_distribution(m1, tau_b)?;
    if w == 1.0 {
        return Ok(first);
    }
    let second = conditional_distribution(m2, tau_b)?;
    ConditionalDistribution::mix(&first, &second, w)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanReading {
    /// Circular mean, unwrapped to the branch nearest `τ_B`.
    pub mean: f64,
    /// Circular standard deviation `√(−2 ln R) · T/2π`.
    pub spread: f64,
    /// Set when the spread exceeds a quarter period; the mean is then unreliable.
    pub ambiguous: bool,
}

/// Circular mean of clock A's reading, unwrapped near `τ_B`.
pub fn mean_reading(cd: &ConditionalDistribution) -> MeanReading {
    let period = cd.period();
    let scale = TAU / period;
    let z: Complex64 =
        cd.tau_values().iter().zip(cd.probabilities()).map(|(t, p)| Complex64::from_polar(*p, scale * t)).sum();
    let total = cd.total_probability();
    let r = if total > 0.0 { z.norm() / total } else { 0.0 };
    let mut mean = z.arg() / scale;
    mean += period * ((cd.tau_b() - mean) / period).round();
    let spread = if r > 0.0 { (-2.0 * r.min(1.0).ln()).sqrt() / scale } else { f64::INFINITY };
    MeanReading { mean, spread, ambiguous: !(spread <= 0.25 * period) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dilation::{sr_baseline, Scenario};
    use crate::pwsim::model::BuildParams;

    fn synthetic(probs: Vec<f64>, period: f64, tau_b: f64) -> ConditionalDistribution {
        let d = probs.len();
        let taus = (0..d).map(|k| k as f64 * period / d as f64).collect();
        ConditionalDistribution::from_parts(taus, period, tau_b, probs, 1.0).unwrap()
    }

    #[test]
    fn mean_of_a_delta_is_its_reading() {
        let mut p = alloc::vec![0.0; 16];
        p[5] = 1.0;
        let cd = synthetic(p, 16.0, 5.2);
        assert!((mean_reading(&cd).mean - 5.0).abs() < 1e-12);
        assert!(!mean_reading(&cd).ambiguous);
    }

    #[test]
    fn mean_of_symmetric_pair_is_the_centre() {
        let mut p = alloc::vec![0.0; 32];
        p[10] = 0.5;
        p[14] = 0.5;
        let cd = synthetic(p, 32.0, 12.0);
        assert!((mean_reading(&cd).mean - 12.0).abs() < 1e-12);
    }

    #[test]
    fn unwraps_to_the_branch_nearest_tau_b() {
        let mut p = alloc::vec![0.0; 8];
        p[1] = 1.0;
        let cd = synthetic(p, 8.0, 17.5);
        assert!((mean_reading(&cd).mean - 17.0).abs() < 1e-12);
    }

    #[test]
    fn circular_mean_matches_naive_mean_for_narrow_distributions() {
        let d = 256;
        let period = 1000.0;
        let centre = 400.0;
        let width = 6.0;
        let raw: Vec<f64> = (0..d)
            .map(|k| {
                let x = k as f64 * period / d as f64 - centre;
                (-x * x / (2.0 * width * width)).exp()
            })
            .collect();
        let total: f64 = raw.iter().sum();
        let cd = synthetic(raw.iter().map(|x| x / total).collect(), period, centre);
        let naive: f64 = cd.tau_values().iter().zip(cd.probabilities()).map(|(t, p)| t * p).sum();
        let circ = mean_reading(&cd).mean;
        assert!((circ - naive).abs() < 1e-9 * naive);
    }

    #[test]
    fn flat_distribution_is_ambiguous() {
        let cd = synthetic(alloc::vec![1.0 / 16.0; 16], 16.0, 3.0);
        assert!(mean_reading(&cd).ambiguous);
    }

    #[test]
    fn mixing_limits() {
        let a = synthetic(alloc::vec![0.25, 0.75], 2.0, 0.0);
        let b = synthetic(alloc::vec![0.5, 0.5], 2.0, 0.0);
        assert_eq!(ConditionalDistribution::mix(&a, &b, 1.0).unwrap(), a);
        assert_eq!(ConditionalDistribution::mix(&a, &a, 0.5).unwrap().probabilities(), a.probabilities());
        assert!(ConditionalDistribution::mix(&a, &b, 1.5).is_err());
    }

    #[test]
    fn null_denominator_is_rejected() {
        let r = ConditionalDistribution::from_parts(alloc::vec![0.0], 1.0, 0.0, alloc::vec![0.0], 1e-20);
        assert!(matches!(r, Err(Error::NullConditioning { .. })));
    }

    fn small_params() -> BuildParams {
        BuildParams::new(16, 16, 160, None)
    }

    #[test]
    fn rest_frame_clocks_agree_at_zero() {
        let sc = Scenario::from_parameters(0.0, 0.0, 0.0, 0.0, 0.0, 0.01, 0.0).unwrap();
        let m = PwModel::build(&sc, &small_params()).unwrap();
        let cd = conditional_distribution(&m, 0.0).unwrap();
        assert!((cd.total_probability() - 1.0).abs() < 1e-9);
        let peak = cd.probabilities().iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert_eq!(peak, 0);
        assert!(mean_reading(&cd).mean.abs() < 1e-6 * m.clock_a().period());
    }

    #[test]
    fn moving_clock_follows_special_relativity() {
        let sc = Scenario::from_parameters(0.0, 0.0, 0.05, 0.05, 0.0, 0.01, 0.0).unwrap();
        let m = PwModel::build(&sc, &small_params()).unwrap();
        let tau_b = m.tau_b_at_fraction(0.25);
        let cd = conditional_distribution(&m, tau_b).unwrap();
        let mean = mean_reading(&cd).mean;
        let sr = sr_baseline(0.05, 0.0, tau_b);
        // packet widths add ±Δ²/4 corrections on top of the sharp-momentum baseline
        assert!((mean - sr).abs() < 1e-4 * tau_b, "{mean} vs {sr}");
        assert!((mean - tau_b).abs() > 1e-3 * tau_b);
    }

    #[test]
    fn out_of_range_tau_b_is_rejected() {
        let sc = Scenario::from_parameters(0.0, 0.0, 0.0, 0.0, 0.0, 0.01, 0.0).unwrap();
        let m = PwModel::build(&sc, &small_params()).unwrap();
        assert!(conditional_distribution(&m, -1.0).is_err());
        assert!(conditional_distribution(&m, m.clock_b().period()).is_err());
    }

    #[test]
    fn mixture_with_unit_weight_is_the_first_model() {
        let sc = Scenario::from_parameters(0.7, 0.0, 0.02, 0.05, 0.02, 0.01, 0.0).unwrap();
        let (m1, m2) = PwModel::build_mixture_pair(&sc, &small_params()).unwrap();
        let tau_b = m1.tau_b_at_fraction(0.2);
        let direct = conditional_distribution(&m1, tau_b).unwrap();
        assert_eq!(mixture_distribution(&m1, &m2, 1.0, tau_b).unwrap(), direct);
        let same = mixture_distribution(&m1, &m1, 0.5, tau_b).unwrap();
        for (x, y) in same.probabilities().iter().zip(direct.probabilities()) {
            assert!((x - y).abs() < 1e-15);
        }
        let other = Scenario::from_parameters(0.0, 0.0, 0.02, 0.02, 0.03, 0.01, 0.0).unwrap();
        let m3 = PwModel::build(&other, &small_params()).unwrap();
        assert!(mixture_distribution(&m1, &m3, 0.5, tau_b).is_err());
    }
}
