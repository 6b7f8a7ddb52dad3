//! Experiment execution: per-trial CβE draws with derived seeds, the
//! spectral statistic path, and Monte Carlo reports against the exact or
//! limiting references.
//!
//! Trials run concurrently; results are collected in trial-index order, so
//! output is identical regardless of worker count.

use crate::config::ExperimentConfig;
use crate::ks;
use crate::report::{DistributionTestReport, MonteCarloReport, ReferenceKind};
use anyhow::{bail, Context, Result};
use cbe_core::{
    expected_pair_sum, logsine_mean_exact, logsine_variance, logsine_variance_exact,
    meso_variance, micro_variance, pair_sum_direct, pair_sum_spectral, sample_cbeta, traces,
    variance_pair_sum, BetaParam, CircleSeries, FunctionSpec, LimitLaw, LineTransform, Regime,
    ScaledSeries, SeedSpec, SupportBound,
};
use rayon::prelude::*;

/// Coefficient budget for the log-sine series when a spectral view is
/// needed; experiments evaluate log-sine through the direct sum instead.
pub const LOGSINE_K_MAX: usize = 10_000;

/// Stream tag separating reference-law draws from ensemble draws.
const REFERENCE_STREAM_TAG: u64 = 0x5245_4645_5245_4e43;

enum StatPath {
    Circle(CircleSeries),
    Scaled(ScaledSeries),
    /// O(N²) evaluation; the log-sine series converges too slowly for a
    /// truncated spectral route at formula accuracy.
    DirectLogsine,
}

pub struct ResolvedExperiment {
    cfg: ExperimentConfig,
    l_n: f64,
    path: StatPath,
    line: Option<LineTransform>,
}

impl ResolvedExperiment {
    pub fn l_n(&self) -> f64 {
        self.l_n
    }
}

pub fn resolve(cfg: &ExperimentConfig) -> Result<ResolvedExperiment> {
    let l_n = cfg.validate()?;
    let (path, line) = match &cfg.function {
        FunctionSpec::Logsine => (StatPath::DirectLogsine, None),
        spec @ FunctionSpec::Trigpoly { .. } => {
            let series = cbe_core::circle_coeffs(spec, 100_000)?;
            (StatPath::Circle(series), None)
        }
        spec => {
            let lt = LineTransform::from_spec(spec)?;
            let k_max = lt.default_k_max(l_n);
            let series = cbe_core::scaled_coeffs(&lt, l_n, k_max)?;
            (StatPath::Scaled(series), Some(lt))
        }
    };
    Ok(ResolvedExperiment {
        cfg: cfg.clone(),
        l_n,
        path,
        line,
    })
}

/// One `S_N` value per trial, in trial order.
pub fn statistic_values(resolved: &ResolvedExperiment) -> Result<Vec<f64>> {
    let cfg = &resolved.cfg;
    let beta = BetaParam::new(cfg.beta).context("invalid beta")?;
    let n = cfg.n;
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| -> Result<f64> {
            let seed = SeedSpec::new(cfg.master_seed, t);
            let draw = sample_cbeta(n, beta, &seed)?;
            let value = match &resolved.path {
                StatPath::Circle(series) => {
                    pair_sum_spectral(&traces(&draw, series.k_max()), series, n)?.value
                }
                StatPath::Scaled(series) => {
                    pair_sum_spectral(&traces(&draw, series.k_max()), series, n)?.value
                }
                StatPath::DirectLogsine => {
                    pair_sum_direct(&draw, &FunctionSpec::Logsine, 1.0)?.value
                }
            };
            Ok(value)
        })
        .collect()
}

/// Sample moments with the standard errors the gates use.
#[derive(Debug, Clone, Copy)]
pub struct SampleMoments {
    pub count: u64,
    pub mean: f64,
    pub se_mean: f64,
    pub variance: f64,
    pub se_variance: f64,
    pub skewness: f64,
    pub se_skewness: f64,
}

pub fn sample_moments(values: &[f64]) -> SampleMoments {
    let count = values.len() as u64;
    let nf = values.len() as f64;
    let mean = values.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in values {
        let d = v - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    let variance = m2 * nf / (nf - 1.0);
    // Fourth-moment formula for the variance estimator's own spread.
    let se_variance = ((m4 - m2 * m2).max(0.0) / nf).sqrt();
    let skewness = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    SampleMoments {
        count,
        mean,
        se_mean: (variance / nf).sqrt(),
        variance,
        se_variance,
        skewness,
        se_skewness: (6.0 / nf).sqrt(),
    }
}

fn coefficient_view(path: &StatPath) -> Option<(Vec<f64>, Option<f64>, f64)> {
    match path {
        StatPath::Circle(series) => Some((
            (0..=series.k_max()).map(|k| series.coeff(k)).collect(),
            series.f_at_zero(),
            1.0,
        )),
        StatPath::Scaled(series) => Some((
            (0..=series.k_max()).map(|k| series.coeff(k)).collect(),
            Some(series.f_at_zero()),
            series.l_n(),
        )),
        StatPath::DirectLogsine => None,
    }
}

fn mean_reference(resolved: &ResolvedExperiment) -> Result<(f64, ReferenceKind)> {
    let cfg = &resolved.cfg;
    if matches!(resolved.path, StatPath::DirectLogsine) {
        // Exact for every β from the normalization constant.
        return Ok((
            logsine_mean_exact(cfg.n, cfg.beta)?,
            ReferenceKind::ExactFormula,
        ));
    }
    if (cfg.beta - 2.0).abs() < 1e-12 {
        let value = match &resolved.path {
            StatPath::Circle(series) => expected_pair_sum(series, cfg.n)?,
            StatPath::Scaled(series) => expected_pair_sum(series, cfg.n)?,
            StatPath::DirectLogsine => unreachable!(),
        };
        return Ok((value, ReferenceKind::ExactFormula));
    }
    // General-β mean up to o(1): c₀N² − f(0)N + (4/β) Σ_{k≥1} c_k k.
    let (coeffs, f0, _) = coefficient_view(&resolved.path).expect("non-logsine");
    let nf = cfg.n as f64;
    let tail: f64 = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .sum();
    let value = coeffs[0] * nf * nf - f0.expect("finite f(0)") * nf + 4.0 / cfg.beta * tail;
    Ok((value, ReferenceKind::LimitLaw))
}

fn variance_reference(resolved: &ResolvedExperiment) -> Result<(f64, ReferenceKind, f64, &'static str)> {
    let cfg = &resolved.cfg;
    if matches!(resolved.path, StatPath::DirectLogsine) {
        return Ok((
            logsine_variance_exact(cfg.n, cfg.beta)?,
            ReferenceKind::ExactFormula,
            4.0,
            "variance",
        ));
    }
    if (cfg.beta - 2.0).abs() < 1e-12 {
        let value = match &resolved.path {
            StatPath::Circle(series) => variance_pair_sum(series, cfg.n)?.total,
            StatPath::Scaled(series) => variance_pair_sum(series, cfg.n)?.total,
            StatPath::DirectLogsine => unreachable!(),
        };
        return Ok((value, ReferenceKind::ExactFormula, 4.0, "variance"));
    }
    match cfg.regime {
        Regime::Global => {
            // Limit series variance (16/β²) Σ k² c_k².
            let (coeffs, _, _) = coefficient_view(&resolved.path).expect("non-logsine");
            let sum: f64 = coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| (k * k) as f64 * c * c)
                .sum();
            Ok((
                16.0 / (cfg.beta * cfg.beta) * sum,
                ReferenceKind::LimitLaw,
                4.0,
                "variance",
            ))
        }
        Regime::Meso => {
            // At desk scale L_N is small for β ≠ 2, so this is only a loose
            // trend check.
            let lt = resolved.line.as_ref().expect("meso has a transform");
            Ok((
                resolved.l_n * meso_variance(lt, cfg.beta)?,
                ReferenceKind::LimitLaw,
                8.0,
                "variance_trend",
            ))
        }
        Regime::Micro => bail!("micro variance reference needs beta = 2"),
    }
}

fn global_limit_law(resolved: &ResolvedExperiment) -> Result<LimitLaw> {
    let cfg = &resolved.cfg;
    match &resolved.path {
        StatPath::Circle(series) => Ok(LimitLaw::exp_series(series, cfg.beta, series.k_max())?),
        StatPath::Scaled(series) => {
            let k_max = series.k_max();
            let coeffs: Vec<f64> = (0..=k_max).map(|k| series.coeff(k)).collect();
            let view =
                CircleSeries::from_coeffs(coeffs, Some(series.f_at_zero()), SupportBound::Truncated(k_max));
            Ok(LimitLaw::exp_series(&view, cfg.beta, k_max)?)
        }
        StatPath::DirectLogsine => bail!("the log-sine statistic has no exp-series limit"),
    }
}

fn skewness_reference(resolved: &ResolvedExperiment) -> Result<(f64, ReferenceKind)> {
    let cfg = &resolved.cfg;
    if cfg.regime == Regime::Global && !matches!(resolved.path, StatPath::DirectLogsine) {
        let law = global_limit_law(resolved)?;
        return Ok((law.skewness(), ReferenceKind::LimitLaw));
    }
    // CLT regimes (meso, micro, log-sine): zero skewness in the limit.
    Ok((0.0, ReferenceKind::LimitLaw))
}

/// Mean, variance, and skewness reports for one configuration.
pub fn run_moment_experiment(cfg: &ExperimentConfig) -> Result<Vec<MonteCarloReport>> {
    let resolved = resolve(cfg)?;
    let values = statistic_values(&resolved)?;
    let moments = sample_moments(&values);
    let mut reports = Vec::with_capacity(3);

    let (mean_ref, mean_kind) = mean_reference(&resolved)?;
    reports.push(MonteCarloReport::from_estimate(
        "mean",
        cfg.regime,
        cfg.beta,
        cfg.n,
        resolved.l_n,
        moments.mean,
        moments.se_mean,
        moments.count,
        mean_ref,
        mean_kind,
        4.0,
    ));

    let (var_ref, var_kind, var_gate, var_id) = variance_reference(&resolved)?;
    reports.push(MonteCarloReport::from_estimate(
        var_id,
        cfg.regime,
        cfg.beta,
        cfg.n,
        resolved.l_n,
        moments.variance,
        moments.se_variance,
        moments.count,
        var_ref,
        var_kind,
        var_gate,
    ));

    let (skew_ref, skew_kind) = skewness_reference(&resolved)?;
    reports.push(MonteCarloReport::from_estimate(
        "skewness",
        cfg.regime,
        cfg.beta,
        cfg.n,
        resolved.l_n,
        moments.skewness,
        moments.se_skewness,
        moments.count,
        skew_ref,
        skew_kind,
        4.0,
    ));

    Ok(reports)
}

/// Two-sample KS of the centered (and regime-normalized) statistic against
/// draws from the matching limit law.
pub fn run_distribution_experiment(cfg: &ExperimentConfig) -> Result<DistributionTestReport> {
    if cfg.trials < 1000 {
        bail!("distribution tests need at least 10³ trials, got {}", cfg.trials);
    }
    let resolved = resolve(cfg)?;
    let values = statistic_values(&resolved)?;

    // Exact centering at β = 2, empirical centering otherwise.
    let center = if (cfg.beta - 2.0).abs() < 1e-12 {
        mean_reference(&resolved)?.0
    } else {
        values.iter().sum::<f64>() / values.len() as f64
    };

    let nf = cfg.n as f64;
    let (scale, law) = match (&resolved.path, cfg.regime) {
        (StatPath::DirectLogsine, Regime::Global) => (
            nf.sqrt(),
            LimitLaw::gaussian(logsine_variance(cfg.beta)?),
        ),
        (_, Regime::Global) => (1.0, global_limit_law(&resolved)?),
        (_, Regime::Meso) => {
            let lt = resolved.line.as_ref().expect("meso has a transform");
            (resolved.l_n.sqrt(), LimitLaw::gaussian(meso_variance(lt, cfg.beta)?))
        }
        (_, Regime::Micro) => {
            let lt = resolved.line.as_ref().expect("micro has a transform");
            (nf.sqrt(), LimitLaw::gaussian(micro_variance(lt)))
        }
    };

    let normalized: Vec<f64> = values.iter().map(|v| (v - center) / scale).collect();
    let reference_master = cfg.master_seed ^ REFERENCE_STREAM_TAG;
    let reference: Vec<f64> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| law.sample(&SeedSpec::new(reference_master, t)))
        .collect();

    let d = ks::ks_statistic(&normalized, &reference);
    let p = ks::ks_p_value(d, normalized.len(), reference.len());
    Ok(DistributionTestReport::new(d, p, (normalized.len(), reference.len())))
}

/// Raw sample dump: `trial,index,phase` with 17 significant digits.
pub fn sample_dump_csv(n: usize, beta: f64, trials: u64, master_seed: u64) -> Result<String> {
    let beta = BetaParam::new(beta).context("invalid beta")?;
    let rows: Vec<String> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<String> {
            let draw = sample_cbeta(n, beta, &SeedSpec::new(master_seed, t))?;
            let mut out = String::new();
            for (i, phase) in draw.phases().iter().enumerate() {
                out.push_str(&format!("{t},{i},{phase:.16e}\n"));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut csv = String::from("trial,index,phase\n");
    for r in rows {
        csv.push_str(&r);
    }
    Ok(csv)
}

/// Per-trial statistic values: `trial,value` rows.
pub fn pair_sum_rows(cfg: &ExperimentConfig) -> Result<String> {
    let resolved = resolve(cfg)?;
    let values = statistic_values(&resolved)?;
    let mut csv = String::from("trial,value\n");
    for (t, v) in values.iter().enumerate() {
        csv.push_str(&format!("{t},{v:.17e}\n"));
    }
    Ok(csv)
}
