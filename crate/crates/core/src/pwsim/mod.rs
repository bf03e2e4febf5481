//! Page–Wootters oracle: two particles carrying finite covariant clocks,
//! conditioned on each other's readings without the closed-form coefficients.

mod clock;
mod conditional;
mod fft;
mod model;
mod oracle;
mod uncertainty;

pub use clock::{ClockPreparation, FiniteClock};
pub use conditional::{
    conditional_distribution, mean_reading, mixture_distribution, ConditionalDistribution, MeanReading,
    NULL_CONDITIONING,
};
pub use model::{
    build_model, BuildParams, DiscretizationReport, MomentumGrid, Particle, PwModel, TimeWindow, DEFAULT_DIM,
    DEFAULT_GRID_POINTS, DEFAULT_MAX_CLOCK_ENERGY, GRID_PADDING_WIDTHS, MAX_CLOCK_ENERGY, MIN_DIM,
    MIN_POINTS_PER_WIDTH, NYQUIST_OVERSAMPLING,
};
pub use oracle::{
    compare, compare_mixture, MixtureRow, OracleRow, MEAN_RELATIVE_TOLERANCE, MIN_RESOLVABLE_KQ,
    SEPARATION_RELATIVE_TOLERANCE,
};
pub use uncertainty::{
    uncertainty_diagnostic, uncertainty_for_state, Applicability, UncertaintyReport, UNCERTAINTY_BOUND,
};
