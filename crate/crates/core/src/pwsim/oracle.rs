use super::conditional::{conditional_distribution, mean_reading, mixture_distribution};
use super::model::PwModel;
use crate::dilation::{dilation_result, Scenario};
use crate::error::{Error, Result};
#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

/// Relative tolerance on the oracle mean, per unit of elapsed `τ_B`.
pub const MEAN_RELATIVE_TOLERANCE: f64 = 3e-6;
/// Relative tolerance on the superposition-minus-mixture difference.
pub const SEPARATION_RELATIVE_TOLERANCE: f64 = 0.1;
/// Below this `|K_q|` the separation is not resolvable and is not judged.
pub const MIN_RESOLVABLE_KQ: f64 = 1e-6;

/// Analytic and oracle mean reading of clock A at one `τ_B`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRow {
    pub tau_b: f64,
    /// `τ₀ + γ_eff⁻¹(τ_B − τ₀)`.
    pub analytic: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    /// `max(3e−6·(τ_B − τ₀), discretization bound)`.
    pub tolerance: f64,
    pub spread: f64,
    pub ambiguous: bool,
    pub pass: bool,
}

/// Oracle separation between the superposition and its classical mixture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureRow {
    pub tau_b: f64,
    pub superposition: f64,
    pub mixture: f64,
    /// `superposition − mixture`.
    pub difference: f64,
    /// `−K_q (τ_B − τ₀)`.
    pub expected: f64,
    pub relative_error: f64,
    /// `None` when `|K_q|` is too small for the separation to be judged.
    pub pass: Option<bool>,
}

fn elapsed_scenario(sc: &Scenario, m: &PwModel, tau_b: f64) -> Result<(f64, Scenario)> {
    let elapsed = tau_b - m.initial_reading();
    Ok((elapsed, sc.with_tau_b(elapsed)?))
}

/// Compares the oracle mean of clock A against `γ_eff⁻¹ τ_B`.
///
/// `m` must have been built from `sc`; only `sc`'s `τ_B` is ignored.
pub fn compare(sc: &Scenario, m: &PwModel, tau_b: f64) -> Result<OracleRow> {
    let cd = conditional_distribution(m, tau_b)?;
    let mr = mean_reading(&cd);
    let (elapsed, at) = elapsed_scenario(sc, m, tau_b)?;
    let analytic = m.initial_reading() + dilation_result(&at)?.mean_tau_a;
    let abs_diff = (mr.mean - analytic).abs();
    let tolerance = (MEAN_RELATIVE_TOLERANCE * elapsed.abs()).max(m.discretization_bound(tau_b));
    Ok(OracleRow {
        tau_b,
        analytic,
        oracle: mr.mean,
        abs_diff,
        tolerance,
        spread: mr.spread,
        ambiguous: mr.ambiguous,
        pass: !mr.ambiguous && abs_diff <= tolerance,
    })
}

/// Compares the superposition mean against the `cos²θ`/`sin²θ` mixture of
/// its branches, built with [`PwModel::build_mixture_pair`].
pub fn compare_mixture(sc: &Scenario, m: &PwModel, pair: &(PwModel, PwModel), tau_b: f64) -> Result<MixtureRow> {
    if !m.same_b_and_clocks(&pair.0) || !m.same_b_and_clocks(&pair.1) {
        return Err(Error::Domain("mixture models must share clocks and particle B with the superposition".into()));
    }
    let w = sc.sup_a().theta().cos().powi(2);
    let sup = mean_reading(&conditional_distribution(m, tau_b)?);
    let mix = mean_reading(&mixture_distribution(&pair.0, &pair.1, w, tau_b)?);
    let (elapsed, at) = elapsed_scenario(sc, m, tau_b)?;
    let kq = dilation_result(&at)?.k_quantum;
    let difference = sup.mean - mix.mean;
    let expected = -kq * elapsed;
    let relative_error = if expected != 0.0 { ((difference - expected) / expected).abs() } else { f64::INFINITY };
    let pass = if kq.abs() >= MIN_RESOLVABLE_KQ && !sup.ambiguous && !mix.ambiguous {
        Some(relative_error <= SEPARATION_RELATIVE_TOLERANCE)
    } else if kq.abs() >= MIN_RESOLVABLE_KQ {
        Some(false)
    } else {
        None
    };
    Ok(MixtureRow { tau_b, superposition: sup.mean, mixture: mix.mean, difference, expected, relative_error, pass })
}
