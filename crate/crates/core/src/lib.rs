//! Numerical laboratory for pair statistics of circular β-ensembles.
//!
//! The crate samples eigenvalue phase configurations of the circular
//! β-ensemble (CβE), evaluates the pair counting statistic
//! `S_N(f) = Σ_{i≠j} f(L_N (θ_i − θ_j)_c)` in the global, mesoscopic and
//! microscopic regimes, and provides the exact finite-N CUE formulas
//! (expectation, variance, trace covariances) together with an exact
//! joint-cumulant engine for traces of powers.
//!
//! Modules map onto the subsystems:
//!
//! - [`sampler`]: CβE draws via the CMV matrix of Verblunsky coefficients,
//!   plus an independent Haar-unitary path for β = 2 cross-checks.
//! - [`testfn`]: even test functions in the circle and real-line Fourier
//!   conventions, and the scaled circle coefficients used at scale `L_N`.
//! - [`pairstat`]: traces, circular differences, the direct O(N²) pair sum,
//!   its spectral-identity twin, and nearest-neighbor spacing sums.
//! - [`exact`]: closed-form β = 2 mean/variance of `S_N(f)` and the
//!   piecewise trace covariance.
//! - [`cumulant`]: exact rational joint cumulants of traces, lattice counts,
//!   set-partition transforms, and centered-product moment expansions.
//! - [`limit`]: the three limit laws (weighted-exponential series, mesoscopic
//!   and microscopic Gaussians) and the log-sine closed forms.

pub mod cumulant;
pub mod exact;
pub mod limit;
mod linalg;
pub mod pairstat;
pub mod quad;
pub mod sampler;
pub mod seed;
pub mod special;
pub mod testfn;

pub use cumulant::{
    centered_product_expansion, count_lattice, cumulants_from_moments, g_function,
    moments_from_cumulants, pair_stat_moment, rational_to_f64, rational_to_string, trace_cumulant,
    Composition, CumulantError, FrequencyVector, Rational, SetPartition,
};
pub use exact::{
    asymptotic_variance, expected_pair_sum, trace_covariance, variance_pair_sum, CovRegion,
    CovarianceCase, ExactError, VarianceBreakdown,
};
pub use limit::{
    limit_series_variance, logsine_mean_exact, logsine_variance, logsine_variance_exact,
    meso_variance, micro_variance, sample_limit_series, LimitError, LimitLaw,
};
pub use pairstat::{
    circular_diff, pair_sum_direct, pair_sum_spectral, spacing_sum, spacings, traces,
    PairStatValue, Regime, StatError, TraceVector,
};
pub use sampler::{sample_cbeta, sample_cue, BetaParam, PhaseConfiguration, SampleError};
pub use seed::{derive_trial_seed, SeedSpec};
pub use testfn::{
    circle_coeffs, eval_function, scaled_coeffs, CircleSeries, FunctionError, FunctionSpec,
    LineTransform, ScaledSeries, SpectralCoeffs, SupportBound,
};
