//! The pair counting statistic and its ingredients.
//!
//! `pair_sum_direct` is the literal O(N²) double sum over ordered pairs and
//! serves as the reference path; `pair_sum_spectral` evaluates the same
//! statistic through the identity
//! `S_N(f) = 2 Σ_{m≥1} f̂(m) |t_{N,m}|² + f̂(0) N² − N f(0)`
//! from power-sum traces, and is what experiments run.

use crate::sampler::PhaseConfiguration;
use crate::testfn::{eval_function, FunctionError, FunctionSpec, SpectralCoeffs};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum StatError {
    #[error("phase arguments must lie in [0, 2π)")]
    PhaseOutOfRange,
    #[error("singular evaluation: {0}")]
    SingularEvaluation(#[from] FunctionError),
    #[error("need at least {needed} phases, configuration has {got}")]
    TooFewPhases { needed: usize, got: usize },
    #[error("traces cover k ≤ {have}, series needs k ≤ {needed}")]
    InsufficientTraces { have: usize, needed: usize },
    #[error("trace vector is for n = {trace_n}, statistic asked for n = {asked}")]
    SizeMismatch { trace_n: usize, asked: usize },
    #[error("scale l_n must be positive and finite")]
    BadScale,
}

/// Test-function scale class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Global,
    Meso,
    Micro,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Regime::Global => "global",
            Regime::Meso => "meso",
            Regime::Micro => "micro",
        };
        f.write_str(s)
    }
}

fn regime_for(l_n: f64, n: usize) -> Regime {
    if l_n == 1.0 {
        Regime::Global
    } else if (l_n - n as f64).abs() < 1e-9 {
        Regime::Micro
    } else {
        Regime::Meso
    }
}

/// One evaluation of the pair statistic.
#[derive(Debug, Clone, Copy)]
pub struct PairStatValue {
    pub value: f64,
    pub regime: Regime,
    pub l_n: f64,
}

/// Power-sum traces `t_{N,k} = Σ_j e^{i k θ_j}` for `k = 0..=k_max`.
#[derive(Debug, Clone)]
pub struct TraceVector {
    values: Vec<Complex64>,
    n: usize,
}

impl TraceVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k_max(&self) -> usize {
        self.values.len() - 1
    }

    /// `t_{N,k}`; negative `k` via conjugation.
    pub fn at(&self, k: i64) -> Complex64 {
        let t = self.values[k.unsigned_abs() as usize];
        if k < 0 {
            t.conj()
        } else {
            t
        }
    }

    pub fn abs_sq(&self, k: usize) -> f64 {
        self.values[k].norm_sqr()
    }
}

/// Traces by iterated multiplication of the unit numbers `e^{iθ_j}`; one
/// trig call per phase, not per (phase, k) pair.
pub fn traces(cfg: &PhaseConfiguration, k_max: usize) -> TraceVector {
    let n = cfg.n();
    let units: Vec<Complex64> = cfg
        .phases()
        .iter()
        .map(|&th| Complex64::from_polar(1.0, th))
        .collect();
    let mut powers = vec![Complex64::ONE; n];
    let mut values = Vec::with_capacity(k_max + 1);
    values.push(Complex64::new(n as f64, 0.0));
    for _ in 1..=k_max {
        let mut sum = Complex64::ZERO;
        for (p, z) in powers.iter_mut().zip(&units) {
            *p *= z;
            sum += *p;
        }
        values.push(sum);
    }
    TraceVector { values, n }
}

/// The circular phase difference, i.e. the representative of θ − φ in
/// [−π, π).
pub fn circular_diff(theta: f64, phi: f64) -> Result<f64, StatError> {
    let tau = std::f64::consts::TAU;
    if !(0.0..tau).contains(&theta) || !(0.0..tau).contains(&phi) {
        return Err(StatError::PhaseOutOfRange);
    }
    let d = theta - phi;
    Ok(if d >= std::f64::consts::PI {
        d - tau
    } else if d < -std::f64::consts::PI {
        d + tau
    } else {
        d
    })
}

/// `Σ_{i≠j} f(l_n (θ_i − θ_j)_c)` by the literal double sum.
pub fn pair_sum_direct(
    cfg: &PhaseConfiguration,
    spec: &FunctionSpec,
    l_n: f64,
) -> Result<PairStatValue, StatError> {
    if l_n.is_nan() || l_n <= 0.0 || !l_n.is_finite() {
        return Err(StatError::BadScale);
    }
    let phases = cfg.phases();
    let mut acc = 0.0;
    for (i, &ti) in phases.iter().enumerate() {
        for (j, &tj) in phases.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = circular_diff(ti, tj)?;
            acc += eval_function(spec, l_n * d)?;
        }
    }
    Ok(PairStatValue {
        value: acc,
        regime: regime_for(l_n, cfg.n()),
        l_n,
    })
}

/// The spectral identity for the pair sum, with coefficients taken from a
/// circle series (global regime) or a scaled series.
///
/// When the series has no finite value at zero (log-sine), the regularized
/// truncation `2 Σ_{m≤K} c_m (|t_m|² − N) + c_0 N(N−1)` is used instead.
pub fn pair_sum_spectral<S: SpectralCoeffs>(
    tr: &TraceVector,
    series: &S,
    n: usize,
) -> Result<PairStatValue, StatError> {
    if tr.n() != n {
        return Err(StatError::SizeMismatch {
            trace_n: tr.n(),
            asked: n,
        });
    }
    let needed = series.k_max();
    if tr.k_max() < needed {
        return Err(StatError::InsufficientTraces {
            have: tr.k_max(),
            needed,
        });
    }
    let nf = n as f64;
    let value = match series.value_at_zero() {
        Some(f0) => {
            let mut acc = 0.0;
            for m in (1..=needed).rev() {
                acc += series.coeff(m) * tr.abs_sq(m);
            }
            2.0 * acc + series.coeff(0) * nf * nf - nf * f0
        }
        None => {
            let mut acc = 0.0;
            for m in (1..=needed).rev() {
                acc += series.coeff(m) * (tr.abs_sq(m) - nf);
            }
            2.0 * acc + series.coeff(0) * nf * (nf - 1.0)
        }
    };
    Ok(PairStatValue {
        value,
        regime: regime_for(series.scale(), n),
        l_n: series.scale(),
    })
}

/// Rescaled nearest-neighbor spacings `τ_j = N (θ_(j+1) − θ_(j))`.
pub fn spacings(cfg: &PhaseConfiguration) -> Result<Vec<f64>, StatError> {
    let n = cfg.n();
    if n < 2 {
        return Err(StatError::TooFewPhases { needed: 2, got: n });
    }
    let phases = cfg.phases();
    Ok(phases
        .windows(2)
        .map(|w| n as f64 * (w[1] - w[0]))
        .collect())
}

/// `Σ_{j=1}^{N−1} f(τ_j)`.
pub fn spacing_sum(cfg: &PhaseConfiguration, spec: &FunctionSpec) -> Result<f64, StatError> {
    let mut acc = 0.0;
    for tau in spacings(cfg)? {
        acc += eval_function(spec, tau)?;
    }
    Ok(acc)
}
