//! Limiting objects for the pair statistic: the weighted-exponential series
//! of the global regime, the mesoscopic and microscopic Gaussian variances,
//! and the log-sine closed forms coming from the ensemble's normalization
//! constant.

use crate::quad;
use crate::seed::{self, SeedSpec};
use crate::special;
use crate::testfn::{CircleSeries, LineTransform, SpectralCoeffs};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LimitError {
    #[error("Σ m² f̂(m)² does not converge on the truncation grid; no series limit law")]
    DivergentSeries,
    #[error("truncation at {m_terms} terms misses {tail_fraction:.2e} of the series variance")]
    TruncationBudget { m_terms: usize, tail_fraction: f64 },
    #[error("β must be positive, got {0}")]
    NonPositiveBeta(f64),
}

/// Relative variance mass allowed beyond the truncation point.
const TRUNCATION_BUDGET: f64 = 1e-6;

/// A limiting distribution the harness can draw from.
#[derive(Debug, Clone)]
pub enum LimitLaw {
    /// `Σ_m a_m (φ_m − 1)` with `a_m = (4/β) f̂(m) m` and φ_m i.i.d. Exp(1).
    ExpSeries { terms: Vec<f64> },
    /// Centered Gaussian with the given variance.
    Gaussian { variance: f64 },
}

impl LimitLaw {
    /// The global-regime limit of `S_N(f) − E S_N(f)` truncated at
    /// `m_terms` terms.
    pub fn exp_series(
        series: &CircleSeries,
        beta: f64,
        m_terms: usize,
    ) -> Result<Self, LimitError> {
        if beta.is_nan() || beta <= 0.0 {
            return Err(LimitError::NonPositiveBeta(beta));
        }
        let weight = |m: usize| {
            let a = series.coeff(m) * m as f64;
            a * a
        };
        let k_max = series.k_max();
        let total: f64 = (1..=k_max).map(weight).sum();
        if !series.finite_support() && k_max >= 16 {
            let head: f64 = (1..=k_max / 2).map(weight).sum();
            if (total - head).abs() > 0.01 * total.abs().max(1e-300) {
                return Err(LimitError::DivergentSeries);
            }
        }
        let tail: f64 = (m_terms + 1..=k_max).map(weight).sum();
        let tail_fraction = tail / total.abs().max(1e-300);
        if tail_fraction > TRUNCATION_BUDGET {
            return Err(LimitError::TruncationBudget {
                m_terms,
                tail_fraction,
            });
        }
        let scale = 4.0 / beta;
        let terms = (1..=m_terms.min(k_max))
            .map(|m| scale * series.coeff(m) * m as f64)
            .collect();
        Ok(LimitLaw::ExpSeries { terms })
    }

    pub fn gaussian(variance: f64) -> Self {
        assert!(variance >= 0.0, "variance must be nonnegative");
        LimitLaw::Gaussian { variance }
    }

    pub fn variance(&self) -> f64 {
        match self {
            // Var(φ − 1) = 1 term by term.
            LimitLaw::ExpSeries { terms } => terms.iter().map(|a| a * a).sum(),
            LimitLaw::Gaussian { variance } => *variance,
        }
    }

    pub fn skewness(&self) -> f64 {
        match self {
            LimitLaw::ExpSeries { terms } => {
                // E(φ − 1)³ = 2.
                let v = self.variance();
                if v == 0.0 {
                    0.0
                } else {
                    2.0 * terms.iter().map(|a| a * a * a).sum::<f64>() / v.powf(1.5)
                }
            }
            LimitLaw::Gaussian { .. } => 0.0,
        }
    }

    /// One draw, from the trial's own stream.
    pub fn sample(&self, seed: &SeedSpec) -> f64 {
        let mut rng = seed.rng();
        match self {
            LimitLaw::ExpSeries { terms } => terms
                .iter()
                .map(|a| a * (seed::exp1(&mut rng) - 1.0))
                .sum(),
            LimitLaw::Gaussian { variance } => {
                let amp = (-2.0 * seed::uniform_open01(&mut rng).ln()).sqrt();
                variance.sqrt() * amp * seed::uniform_phase(&mut rng).cos()
            }
        }
    }
}

/// One draw of the truncated weighted-exponential limit series.
pub fn sample_limit_series(
    series: &CircleSeries,
    beta: f64,
    m_terms: usize,
    seed: &SeedSpec,
) -> Result<f64, LimitError> {
    Ok(LimitLaw::exp_series(series, beta, m_terms)?.sample(seed))
}

/// Variance of the full limit series: `(16/β²) Σ_{m≥1} m² f̂(m)²`.
pub fn limit_series_variance(series: &CircleSeries, beta: f64) -> Result<f64, LimitError> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(LimitError::NonPositiveBeta(beta));
    }
    let k_max = series.k_max();
    let weight = |m: usize| {
        let a = series.coeff(m) * m as f64;
        a * a
    };
    let total: f64 = (1..=k_max).map(weight).sum();
    if !series.finite_support() && k_max >= 16 {
        let head: f64 = (1..=k_max / 2).map(weight).sum();
        if (total - head).abs() > 0.01 * total.abs().max(1e-300) {
            return Err(LimitError::DivergentSeries);
        }
    }
    Ok(16.0 / (beta * beta) * total)
}

/// Mesoscopic Gaussian variance `(4/(πβ²)) ∫ f̂(t)² t² dt`.
pub fn meso_variance(lt: &LineTransform, beta: f64) -> Result<f64, LimitError> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(LimitError::NonPositiveBeta(beta));
    }
    let integrand = |t: f64| {
        let v = lt.transform(t);
        v * v * t * t
    };
    let half = quad::adaptive_simpson(&integrand, 0.0, lt.transform_radius(), 1e-9);
    Ok(4.0 / (std::f64::consts::PI * beta * beta) * 2.0 * half)
}

/// Microscopic Gaussian variance (β = 2):
/// `(1/π) ∫ f̂² min(|t|,1)² − (1/π) ∬_{|s−t|≤1, |s|∨|t|≥1} f̂(s)f̂(t)(1−|s−t|)
///  − (2/π) ∬_{0≤s,t≤1, s+t>1} f̂(s)f̂(t)(s+t−1)`,
/// each region decomposed into smooth panels before tensor quadrature.
///
/// The overflow term carries the quadrant-doubled weight so that the exact
/// finite-N variance with scaled coefficients converges to this value; the
/// two-sided band region is folded onto the positive quadrant the same way.
pub fn micro_variance(lt: &LineTransform) -> f64 {
    let t_max = lt.transform_radius();
    let knee = t_max.min(1.0);
    let fhat = |t: f64| lt.transform(t);
    let order = 32;

    let diag_inner = |t: f64| {
        let v = fhat(t);
        v * v * t.min(1.0) * t.min(1.0)
    };
    let diag = quad::panel_gauss_legendre(&diag_inner, 0.0, t_max, &[knee], order);

    // Band: s, t ≥ 0, |s−t| ≤ 1, max(s,t) ≥ 1.
    let band_outer = |s: f64| {
        let inner = |t: f64| fhat(t) * (1.0 - (s - t).abs());
        let value = if s < 1.0 {
            // t must reach at least 1 to satisfy the max constraint.
            if s + 1.0 <= 1.0 {
                0.0
            } else {
                quad::gauss_legendre(&inner, 1.0, (s + 1.0).min(t_max), order)
            }
        } else {
            let lo = (s - 1.0).max(0.0);
            let hi = (s + 1.0).min(t_max);
            // Kink of |s−t| at t = s.
            quad::gauss_legendre(&inner, lo, s.min(hi), order)
                + quad::gauss_legendre(&inner, s.min(hi), hi, order)
        };
        fhat(s) * value
    };
    let band = quad::panel_gauss_legendre(&band_outer, 0.0, t_max, &[1.0, 2.0, t_max - 1.0], order);

    // Overflow: 0 ≤ s, t ≤ 1, s + t > 1.
    let overflow_outer = |s: f64| {
        let inner = |t: f64| fhat(t) * (s + t - 1.0);
        fhat(s) * quad::gauss_legendre(&inner, 1.0 - s, knee, order)
    };
    let overflow_lo = (1.0 - knee).max(0.0);
    let overflow = quad::panel_gauss_legendre(&overflow_outer, overflow_lo, knee, &[], order);

    (2.0 / std::f64::consts::PI) * (diag - band - overflow)
}

/// Variance constant of the log-sine central limit theorem:
/// `(2 − β ψ′(1 + β/2)) / (4β)`.
pub fn logsine_variance(beta: f64) -> Result<f64, LimitError> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(LimitError::NonPositiveBeta(beta));
    }
    Ok((2.0 - beta * special::trigamma(1.0 + 0.5 * beta)) / (4.0 * beta))
}

/// Exact finite-N variance of `S_N(f)` for the log-sine test function, any
/// β: the statistic is the log of the ensemble's Vandermonde factor, so its
/// cumulants come from differentiating the normalization constant in β.
pub fn logsine_variance_exact(n: usize, beta: f64) -> Result<f64, LimitError> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(LimitError::NonPositiveBeta(beta));
    }
    let nf = n as f64;
    Ok(0.25 * nf * nf * special::trigamma(1.0 + 0.5 * beta * nf)
        - 0.25 * nf * special::trigamma(1.0 + 0.5 * beta))
}

/// Exact finite-N mean of `S_N(f)` for the log-sine test function.
pub fn logsine_mean_exact(n: usize, beta: f64) -> Result<f64, LimitError> {
    if beta.is_nan() || beta <= 0.0 {
        return Err(LimitError::NonPositiveBeta(beta));
    }
    let nf = n as f64;
    Ok(0.5 * nf * (special::digamma(1.0 + 0.5 * beta * nf) - special::digamma(1.0 + 0.5 * beta)))
}
