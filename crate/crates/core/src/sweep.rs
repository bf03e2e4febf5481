//! Fig.-2 style sweeps of `K_quantum` over the momentum difference at fixed
//! momentum sums, and the optimal-difference trace.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::FRAC_PI_4;
use core::fmt;

#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

use crate::dilation::{k_classical, k_quantum};
use crate::error::{domain, Error, Result};
use crate::wavepacket::SuperpositionSpec;

/// Points of the coarse scan that brackets the optimum.
pub const COARSE_POINTS: usize = 200;
/// Objectives below this everywhere on the bracket have no optimum.
pub const FLAT_OBJECTIVE: f64 = 1e-30;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPlan {
    /// Momentum sums `β = p̄ + p̄′`.
    pub betas: Vec<f64>,
    pub diff_start: f64,
    pub diff_end: f64,
    pub diff_step: f64,
    pub delta: f64,
    pub theta: f64,
    pub phi: f64,
    /// Momentum of the reference clock; enters `K_classical` only.
    pub pbar_b: f64,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, x: f64| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(domain(format!("{name} must be finite")))
            }
        };
        for &b in &self.betas {
            finite("beta", b)?;
        }
        finite("diff_start", self.diff_start)?;
        finite("diff_end", self.diff_end)?;
        finite("theta", self.theta)?;
        finite("phi", self.phi)?;
        finite("p_b", self.pbar_b)?;
        if !(self.diff_step > 0.0) || !self.diff_step.is_finite() {
            return Err(domain("diff step must be strictly positive"));
        }
        if !(self.delta > 0.0) || !self.delta.is_finite() {
            return Err(domain("delta must be strictly positive"));
        }
        if self.diff_start < 0.0 || self.diff_end < self.diff_start {
            return Err(domain("diff range must satisfy 0 <= start <= end"));
        }
        Ok(())
    }

    /// Momentum differences in sweep order; the end point is included when it
    /// lies on the step grid to within a millionth of a step.
    pub fn diffs(&self) -> Vec<f64> {
        let span = (self.diff_end - self.diff_start) / self.diff_step;
        let n = (span + 1e-6).floor() as usize + 1;
        (0..n).map(|i| self.diff_start + i as f64 * self.diff_step).collect()
    }
}

/// Default plan: `β ∈ {0.02, 0.05, 0.1}`, `Δ = 0.01`, differences up to `40Δ`
/// in steps of `Δ/10`, `θ = π/4`, `φ = 0`.
pub fn default_fig2_plan() -> SweepPlan {
    SweepPlan {
        betas: alloc::vec![0.02, 0.05, 0.1],
        diff_start: 0.0,
        diff_end: 0.4,
        diff_step: 1e-3,
        delta: 0.01,
        theta: FRAC_PI_4,
        phi: 0.0,
        pbar_b: 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowStatus {
    Ok,
    /// The superposition norm fell below the floor; numeric fields are NaN.
    NearNullNormalization,
}

impl RowStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            RowStatus::Ok => "ok",
            RowStatus::NearNullNormalization => "near_null_normalization",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "ok" => Some(RowStatus::Ok),
            "near_null_normalization" => Some(RowStatus::NearNullNormalization),
            _ => None,
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub beta: f64,
    pub diff: f64,
    pub k_classical: f64,
    pub k_quantum: f64,
    pub gamma_eff_inv: f64,
    pub status: RowStatus,
}

/// Packet centres `((β − diff)/2, (β + diff)/2)`.
pub fn packet_centres(beta: f64, diff: f64) -> (f64, f64) {
    (0.5 * (beta - diff), 0.5 * (beta + diff))
}

/// Evaluates one `(β, diff)` point of a plan.
pub fn sweep_row(plan: &SweepPlan, beta: f64, diff: f64) -> Result<SweepRow> {
    let (p, pp) = packet_centres(beta, diff);
    let kq = SuperpositionSpec::from_momenta(plan.theta, plan.phi, p, pp, plan.delta).and_then(|s| k_quantum(&s));
    match kq {
        Ok(kq) => {
            let kc = k_classical(plan.theta, p, pp, plan.pbar_b);
            Ok(SweepRow {
                beta,
                diff,
                k_classical: kc,
                k_quantum: kq,
                gamma_eff_inv: 1.0 - kc - kq,
                status: RowStatus::Ok,
            })
        }
        Err(Error::NearNullNormalization { .. }) => Ok(SweepRow {
            beta,
            diff,
            k_classical: f64::NAN,
            k_quantum: f64::NAN,
            gamma_eff_inv: f64::NAN,
            status: RowStatus::NearNullNormalization,
        }),
        Err(e) => Err(e),
    }
}

/// Rows in β-major, diff-minor order.
pub fn run_sweep(plan: &SweepPlan) -> Result<Vec<SweepRow>> {
    plan.validate()?;
    let diffs = plan.diffs();
    let mut rows = Vec::with_capacity(plan.betas.len() * diffs.len());
    for &beta in &plan.betas {
        for &diff in &diffs {
            rows.push(sweep_row(plan, beta, diff)?);
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Optimum {
    pub beta: f64,
    pub diff_star: f64,
    pub k_quantum_star: f64,
}

fn abs_kq(beta: f64, delta: f64, theta: f64, phi: f64, diff: f64) -> Result<f64> {
    let (p, pp) = packet_centres(beta, diff);
    match SuperpositionSpec::from_momenta(theta, phi, p, pp, delta).and_then(|s| k_quantum(&s)) {
        Ok(k) => Ok(k.abs()),
        Err(Error::NearNullNormalization { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

/// Maximizer of `|K_q|` over the momentum difference on `bracket`.
///
/// A coarse scan locates the best grid cell (the first on ties), then a
/// golden-section search refines within its neighbours.
pub fn optimal_difference(beta: f64, delta: f64, theta: f64, phi: f64, bracket: (f64, f64)) -> Result<Optimum> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && hi > lo) {
        return Err(domain(format!("bracket [{lo}, {hi}] must be finite with hi > lo")));
    }
    let f = |x: f64| abs_kq(beta, delta, theta, phi, x);
    let h = (hi - lo) / (COARSE_POINTS - 1) as f64;
    let mut best = (0usize, -1.0);
    for i in 0..COARSE_POINTS {
        let v = f(lo + i as f64 * h)?;
        if v > best.1 {
            best = (i, v);
        }
    }
    if !(best.1 >= FLAT_OBJECTIVE) {
        return Err(Error::NoOptimum { max_abs: best.1.max(0.0) });
    }
    let a = lo + best.0.saturating_sub(1) as f64 * h;
    let b = lo + (best.0 + 1).min(COARSE_POINTS - 1) as f64 * h;
    let x = golden_section_max(f, a, b, 1e-12)?;
    // keep the grid point if refinement did not improve on it
    let grid_x = lo + best.0 as f64 * h;
    let diff_star = if f(x)? >= best.1 { x } else { grid_x };
    let (p, pp) = packet_centres(beta, diff_star);
    let k_quantum_star = k_quantum(&SuperpositionSpec::from_momenta(theta, phi, p, pp, delta)?)?;
    Ok(Optimum { beta, diff_star, k_quantum_star })
}

/// One optimum per β of the plan, searched over the plan's diff range.
pub fn optimal_differences(plan: &SweepPlan) -> Result<Vec<Optimum>> {
    plan.validate()?;
    plan.betas
        .iter()
        .map(|&b| optimal_difference(b, plan.delta, plan.theta, plan.phi, (plan.diff_start, plan.diff_end)))
        .collect()
}

/// Golden-section maximization of a unimodal `f` on `[a, b]`; stops when the
/// interval is narrower than `tol·(1 + |x|)`. Ties move toward `a`.
pub fn golden_section_max<F: Fn(f64) -> Result<f64>>(f: F, mut a: f64, mut b: f64, tol: f64) -> Result<f64> {
    let inv_phi = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}
