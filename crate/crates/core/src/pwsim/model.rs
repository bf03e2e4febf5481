use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
#[allow(unused_imports)] // shadowed by std inherent methods when std is linked
use num_traits::Float;

use super::clock::{ClockPreparation, FiniteClock};
use crate::dilation::{gamma_factor, Scenario};
use crate::error::{Error, Result};
use crate::quadrature::{linspace, trapezoid_weights};
use crate::wavepacket::{second_moment, SuperpositionSpec};

pub const DEFAULT_DIM: usize = 64;
pub const DEFAULT_GRID_POINTS: usize = 256;
/// Default top clock level `(d−1)ε` in units of `mc²`.
pub const DEFAULT_MAX_CLOCK_ENERGY: f64 = 1e-3;
/// Hard ceiling on `(d−1)ε`; internal energies must stay nonrelativistic.
pub const MAX_CLOCK_ENERGY: f64 = 1e-2;
pub const MIN_DIM: usize = 8;
pub const MIN_POINTS_PER_WIDTH: f64 = 8.0;
/// Momentum grids extend this many widths beyond the outermost packet centre.
pub const GRID_PADDING_WIDTHS: f64 = 8.0;
/// Time nodes per Nyquist interval of the fastest clock beat.
pub const NYQUIST_OVERSAMPLING: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BuildParams {
    pub dim_a: usize,
    pub dim_b: usize,
    pub grid_points: usize,
    /// Clock level spacing ε; `None` puts the top level of the larger clock at
    /// [`DEFAULT_MAX_CLOCK_ENERGY`].
    pub epsilon: Option<f64>,
    /// `None` uses [`ClockPreparation::default_for`] each clock's dimension.
    pub clock_prep: Option<ClockPreparation>,
    /// Reading both clocks show at `t = 0`.
    pub initial_reading: f64,
    /// Override for the number of time nodes; must not undercut the Nyquist bound.
    pub time_nodes: Option<usize>,
}

impl Default for BuildParams {
    fn default() -> Self {
        Self {
            dim_a: DEFAULT_DIM,
            dim_b: DEFAULT_DIM,
            grid_points: DEFAULT_GRID_POINTS,
            epsilon: None,
            clock_prep: None,
            initial_reading: 0.0,
            time_nodes: None,
        }
    }
}

impl BuildParams {
    pub fn new(dim_a: usize, dim_b: usize, grid_points: usize, epsilon: Option<f64>) -> Self {
        Self { dim_a, dim_b, grid_points, epsilon, ..Self::default() }
    }

    pub fn energy_step(&self) -> f64 {
        self.epsilon.unwrap_or_else(|| DEFAULT_MAX_CLOCK_ENERGY / (self.dim_a.max(self.dim_b).max(2) - 1) as f64)
    }
}

/// Momentum nodes with trapezoid weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumGrid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl MomentumGrid {
    fn spanning(centres: &[f64], delta: f64, n: usize) -> Result<Self> {
        let lo = centres.iter().copied().fold(f64::INFINITY, f64::min) - GRID_PADDING_WIDTHS * delta;
        let hi = centres.iter().copied().fold(f64::NEG_INFINITY, f64::max) + GRID_PADDING_WIDTHS * delta;
        let span = hi - lo;
        let per_width = if n < 2 { 0.0 } else { (n - 1) as f64 * delta / span };
        if per_width < MIN_POINTS_PER_WIDTH {
            let needed = (MIN_POINTS_PER_WIDTH * span / delta).ceil() as usize + 1;
            return Err(Error::Config(format!(
                "momentum grid too coarse: {n} points over [{lo:.6}, {hi:.6}] give {per_width:.2} \
                 points per width, need >= {MIN_POINTS_PER_WIDTH} (at least {needed} points)"
            )));
        }
        let points = linspace(lo, hi, n);
        let weights = trapezoid_weights(&points);
        Ok(Self { points, weights })
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One particle: momentum grid ⊗ clock levels, with its diagonal Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct Particle {
    clock: FiniteClock,
    grid: MomentumGrid,
    /// Row-major `[p][n]` amplitudes; unit norm.
    state: Vec<Complex64>,
    /// `H(p, n) = √(p² + (1 + E_n)²)`.
    spectrum: Vec<f64>,
    /// `H(p, n) − H(p, 0)`, evaluated without cancellation.
    level_offsets: Vec<f64>,
}

impl Particle {
    fn build(clock: FiniteClock, grid: MomentumGrid, sup: &SuperpositionSpec, internal: &[Complex64]) -> Result<Self> {
        let d = clock.dim();
        let mut state = Vec::with_capacity(grid.len() * d);
        let mut spectrum = Vec::with_capacity(grid.len() * d);
        let mut level_offsets = Vec::with_capacity(grid.len() * d);
        for (&p, &w) in grid.points.iter().zip(&grid.weights) {
            let amp = sup.amplitude(p) * w.sqrt();
            let h0 = (p * p + 1.0).sqrt();
            for (n, c) in internal.iter().enumerate() {
                state.push(amp * c);
                let e = clock.energy(n);
                let m = 1.0 + e;
                let h = (p * p + m * m).sqrt();
                spectrum.push(h);
                level_offsets.push(e * (2.0 + e) / (h + h0));
            }
        }
        let norm = state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) {
            return Err(Error::Config(format!("particle state vanishes on its grid (norm {norm:e})")));
        }
        state.iter_mut().for_each(|c| *c /= norm);
        Ok(Self { clock, grid, state, spectrum, level_offsets })
    }

    pub fn clock(&self) -> &FiniteClock {
        &self.clock
    }

    pub fn grid(&self) -> &MomentumGrid {
        &self.grid
    }

    pub fn state(&self) -> &[Complex64] {
        &self.state
    }

    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub(crate) fn level_offsets(&self) -> &[f64] {
        &self.level_offsets
    }

    pub fn norm_sqr(&self) -> f64 {
        self.state.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Internal state at the first grid point with non-negligible weight,
    /// renormalized. All rows share the same internal state up to scale.
    pub fn internal_state(&self) -> Vec<Complex64> {
        let d = self.clock.dim();
        let row = self.state.chunks(d).max_by(|a, b| row_norm(a).total_cmp(&row_norm(b))).expect("non-empty grid");
        let n = row_norm(row).sqrt();
        row.iter().map(|c| c / n).collect()
    }

    /// Marginal momentum density `Σ_n |ψ(p, n)|² / w_p` at each grid point.
    pub fn momentum_density(&self) -> Vec<f64> {
        let d = self.clock.dim();
        self.state.chunks(d).zip(&self.grid.weights).map(|(row, w)| row_norm(row) / w).collect()
    }

    fn grid_second_moment(&self) -> f64 {
        let d = self.clock.dim();
        self.state.chunks(d).zip(&self.grid.points).map(|(row, p)| row_norm(row) * p * p).sum()
    }
}

fn row_norm(row: &[Complex64]) -> f64 {
    row.iter().map(|c| c.norm_sqr()).sum()
}

/// Window of the group-averaging integral over `t`, centred per conditioning time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeWindow {
    /// One recurrence period of clock B in coordinate time, `γ(p̄_B) T_B`.
    pub width: f64,
    pub nodes: usize,
    /// `γ(p̄_B)`: converts B readings to coordinate time for the window centre.
    pub gamma_ref: f64,
}

/// Independent estimates of how far the discretized model can drift from
/// its continuum limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscretizationReport {
    /// `|⟨p²⟩_grid − ⟨p²⟩_quadrature|` for particle A.
    pub moment_error_a: f64,
    pub moment_error_b: f64,
    /// Relative weight of the wrap-around harmonic in each clock state,
    /// `|c_0 c_{d−1}| / |Σ_n c_n c̄_{n+1}|`; it biases circular means.
    pub alias_a: f64,
    pub alias_b: f64,
}

/// Discretized two-particle Page–Wootters model.
#[derive(Debug, Clone, PartialEq)]
pub struct PwModel {
    a: Particle,
    b: Particle,
    window: TimeWindow,
    initial_reading: f64,
    discretization: DiscretizationReport,
}

/// Builds a model with the default clock preparation and `τ = 0` start.
pub fn build_model(sc: &Scenario, d_a: usize, d_b: usize, grid_points: usize, epsilon: Option<f64>) -> Result<PwModel> {
    PwModel::build(sc, &BuildParams::new(d_a, d_b, grid_points, epsilon))
}

impl PwModel {
    pub fn build(sc: &Scenario, params: &BuildParams) -> Result<Self> {
        let sup = *sc.sup_a();
        Self::build_on_grid(sc, &sup, params)
    }

    /// The two single-branch models of the classical mixture, on the grid of
    /// the full superposition so that they differ only in A's packet centre.
    pub fn build_mixture_pair(sc: &Scenario, params: &BuildParams) -> Result<(Self, Self)> {
        let s = sc.sup_a();
        let first = SuperpositionSpec::single(*s.packet_a());
        let second = SuperpositionSpec::single(*s.packet_a_prime());
        Ok((Self::build_on_grid(sc, &first, params)?, Self::build_on_grid(sc, &second, params)?))
    }

    fn build_on_grid(sc: &Scenario, sup_a: &SuperpositionSpec, params: &BuildParams) -> Result<Self> {
        for (name, d) in [("A", params.dim_a), ("B", params.dim_b)] {
            if d < MIN_DIM {
                return Err(Error::Config(format!("clock {name} dimension {d} < {MIN_DIM}")));
            }
        }
        let eps = params.energy_step();
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Config(format!("clock energy step {eps:e} must be positive")));
        }
        for (name, d) in [("A", params.dim_a), ("B", params.dim_b)] {
            let top = eps * (d - 1) as f64;
            if top > MAX_CLOCK_ENERGY {
                return Err(Error::Config(format!(
                    "clock {name} top level eps*(d-1) = {top:e} exceeds {MAX_CLOCK_ENERGY:e} mc^2; \
                     internal energies must stay nonrelativistic"
                )));
            }
        }
        if !params.initial_reading.is_finite() {
            return Err(Error::Config("initial reading must be finite".into()));
        }

        let delta = sc.delta();
        let full = sc.sup_a();
        let grid_a =
            MomentumGrid::spanning(&[full.packet_a().pbar(), full.packet_a_prime().pbar()], delta, params.grid_points)?;
        let grid_b = MomentumGrid::spanning(&[sc.pbar_b()], delta, params.grid_points)?;

        let clock_a = FiniteClock::new(params.dim_a, eps)?;
        let clock_b = FiniteClock::new(params.dim_b, eps)?;
        let prep_a = params.clock_prep.unwrap_or_else(|| ClockPreparation::default_for(params.dim_a));
        let prep_b = params.clock_prep.unwrap_or_else(|| ClockPreparation::default_for(params.dim_b));
        let internal_a = clock_a.prepare(prep_a, params.initial_reading)?;
        let internal_b = clock_b.prepare(prep_b, params.initial_reading)?;

        let sup_b = SuperpositionSpec::single(sc.packet_b());
        let a = Particle::build(clock_a, grid_a, sup_a, &internal_a)?;
        let b = Particle::build(clock_b, grid_b, &sup_b, &internal_b)?;

        let gamma_ref = gamma_factor(sc.pbar_b());
        let width = gamma_ref * clock_b.period();
        let max_gap = |p: &Particle| {
            let d = p.clock.dim();
            p.level_offsets.chunks(d).map(|row| row[d - 1]).fold(0.0, f64::max)
        };
        let omega_max = max_gap(&a) + max_gap(&b);
        let spacing = PI / (NYQUIST_OVERSAMPLING * omega_max);
        let required = (width / spacing).ceil() as usize + 1;
        let nodes = match params.time_nodes {
            Some(n) if n < required => {
                return Err(Error::Config(format!(
                    "time window undersampled: {n} nodes over width {width:e}, need >= {required} \
                     ({NYQUIST_OVERSAMPLING}x Nyquist of the fastest beat {omega_max:e})"
                )))
            }
            Some(n) => n,
            None => required,
        };

        let discretization = DiscretizationReport {
            moment_error_a: (a.grid_second_moment() - second_moment(sup_a)?).abs(),
            moment_error_b: (b.grid_second_moment() - second_moment(&sup_b)?).abs(),
            alias_a: alias_weight(&internal_a),
            alias_b: alias_weight(&internal_b),
        };

        Ok(Self {
            a,
            b,
            window: TimeWindow { width, nodes, gamma_ref },
            initial_reading: params.initial_reading,
            discretization,
        })
    }

    pub fn particle_a(&self) -> &Particle {
        &self.a
    }

    pub fn particle_b(&self) -> &Particle {
        &self.b
    }

    pub fn clock_a(&self) -> &FiniteClock {
        &self.a.clock
    }

    pub fn clock_b(&self) -> &FiniteClock {
        &self.b.clock
    }

    pub fn window(&self) -> &TimeWindow {
        &self.window
    }

    pub fn initial_reading(&self) -> f64 {
        self.initial_reading
    }

    pub fn discretization(&self) -> &DiscretizationReport {
        &self.discretization
    }

    /// Norm of the initial joint (product) state.
    pub fn joint_norm(&self) -> f64 {
        self.a.norm_sqr() * self.b.norm_sqr()
    }

    /// A reading of clock B a given fraction of its period after the start.
    pub fn tau_b_at_fraction(&self, fraction: f64) -> f64 {
        self.initial_reading + fraction * self.b.clock.period()
    }

    /// Upper estimate of the absolute error of the oracle mean at `tau_b`
    /// that is attributable to discretization.
    ///
    /// Grid errors in `⟨p²⟩` shift the tick rate by half their size; the
    /// wrap-around harmonic of a clock state displaces a circular mean by at
    /// most `alias · T / 2π`.
    pub fn discretization_bound(&self, tau_b: f64) -> f64 {
        let r = &self.discretization;
        let elapsed = (tau_b - self.initial_reading).abs();
        elapsed * 0.5 * (r.moment_error_a + r.moment_error_b)
            + (r.alias_a * self.a.clock.period() + r.alias_b * self.b.clock.period()) / TAU
    }

    pub(crate) fn same_b_and_clocks(&self, other: &Self) -> bool {
        self.a.clock == other.a.clock
            && self.b == other.b
            && self.window == other.window
            && self.initial_reading == other.initial_reading
    }
}

fn alias_weight(c: &[Complex64]) -> f64 {
    let d = c.len();
    let lag: Complex64 = (0..d - 1).map(|n| c[n] * c[n + 1].conj()).sum();
    let wrap = (c[0] * c[d - 1].conj()).norm();
    if lag.norm() == 0.0 {
        f64::INFINITY
    } else {
        wrap / lag.norm()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wavepacket::sample_density;
    use core::f64::consts::FRAC_PI_4;

    fn scenario() -> Scenario {
        Scenario::from_parameters(FRAC_PI_4, 0.0, 0.04, 0.06, 0.04, 0.01, 1.0).unwrap()
    }

    #[test]
    fn default_build_passes_self_checks() {
        let sc = scenario();
        let m = PwModel::build(&sc, &BuildParams::default()).unwrap();
        assert!((m.joint_norm() - 1.0).abs() < 1e-10);
        assert_eq!(m.clock_a().dim(), 64);
        assert!((m.clock_a().max_energy() - 1e-3).abs() < 1e-15);
        assert!(m.window().nodes >= 1000);

        // marginal momentum density matches the wave-packet density
        let grid = m.particle_a().grid().points().to_vec();
        let expected = sample_density(sc.sup_a(), &grid).unwrap();
        for (x, y) in m.particle_a().momentum_density().iter().zip(&expected) {
            assert!((x - y).abs() < 1e-6);
        }
        let r = m.discretization();
        assert!(r.moment_error_a < 1e-12 && r.moment_error_b < 1e-12);
        assert!(r.alias_a < 1e-10 && r.alias_b < 1e-10);
    }

    #[test]
    fn spectrum_matches_mass_shell() {
        let m = PwModel::build(&scenario(), &BuildParams::new(8, 8, 256, None)).unwrap();
        let a = m.particle_a();
        let d = a.clock().dim();
        for (i, &p) in a.grid().points().iter().enumerate().step_by(17) {
            for n in 0..d {
                let mass = 1.0 + a.clock().energy(n);
                let h = a.spectrum()[i * d + n];
                assert!((h - (p * p + mass * mass).sqrt()).abs() < 1e-15);
                let h0 = a.spectrum()[i * d];
                assert!((a.level_offsets()[i * d + n] - (h - h0)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn rest_frame_spectrum_is_mass_plus_clock_energy() {
        let sc = Scenario::from_parameters(0.0, 0.0, 0.0, 0.0, 0.0, 0.01, 1.0).unwrap();
        let m = PwModel::build(&sc, &BuildParams::new(8, 8, 256, None)).unwrap();
        let b = m.particle_b();
        let (i, p) = b.grid().points().iter().enumerate().min_by(|x, y| x.1.abs().total_cmp(&y.1.abs())).unwrap();
        for n in 0..8 {
            let h = b.spectrum()[i * 8 + n];
            let rest = 1.0 + b.clock().energy(n);
            assert!((h - rest).abs() <= p * p);
        }
    }

    #[test]
    fn rejects_bad_configurations() {
        let sc = scenario();
        let err = |p: BuildParams| match PwModel::build(&sc, &p) {
            Err(Error::Config(msg)) => msg,
            other => panic!("expected config error, got {other:?}"),
        };
        assert!(err(BuildParams::new(4, 64, 256, None)).contains("dimension"));
        // eps*(d-1) = 0.5
        assert!(err(BuildParams::new(64, 64, 256, Some(0.5 / 63.0))).contains("top level"));
        assert!(err(BuildParams::new(64, 64, 64, None)).contains("too coarse"));
        assert!(err(BuildParams { time_nodes: Some(10), ..Default::default() }).contains("undersampled"));
    }

    #[test]
    fn sharp_clocks_report_a_large_alias() {
        let p = BuildParams { clock_prep: Some(ClockPreparation::Sharp), ..Default::default() };
        let m = PwModel::build(&scenario(), &p).unwrap();
        assert!((m.discretization().alias_a - 1.0 / 63.0).abs() < 1e-12);
        assert!(m.discretization_bound(1.0) > m.clock_a().period() / 500.0);
    }

    #[test]
    fn mixture_pair_shares_everything_but_a() {
        let (m1, m2) = PwModel::build_mixture_pair(&scenario(), &BuildParams::default()).unwrap();
        assert!(m1.same_b_and_clocks(&m2));
        assert_eq!(m1.particle_a().grid(), m2.particle_a().grid());
        assert_ne!(m1.particle_a().state(), m2.particle_a().state());
    }
}
