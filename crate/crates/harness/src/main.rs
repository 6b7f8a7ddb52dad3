//! Command-line laboratory: sampling, pair statistics, exact formulas,
//! cumulants, limit-law constants, Monte Carlo experiments, and the exact
//! consistency suite.

use anyhow::{bail, Context, Result};
use cbe_harness::config::{ExperimentConfig, LnRule};
use cbe_harness::report::{reports_to_csv, summary_json};
use cbe_harness::{runner, suite, version_string};
use cbe_core::{
    asymptotic_variance, circle_coeffs, expected_pair_sum, logsine_variance, meso_variance,
    micro_variance, rational_to_f64, rational_to_string, scaled_coeffs, trace_cumulant,
    variance_pair_sum, FrequencyVector, FunctionSpec, LimitLaw, LineTransform, Regime,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "cbe-harness",
    version,
    about = "Monte Carlo laboratory for pair statistics of circular β-ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct Overrides {
    /// JSON experiment configuration file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, value_parser = parse_regime)]
    regime: Option<Regime>,
    /// Fixed scale L_N (mesoscopic regime).
    #[arg(long = "l-n")]
    l_n: Option<f64>,
    #[arg(long)]
    trials: Option<u64>,
    /// Master seed; trial streams derive from it.
    #[arg(long)]
    seed: Option<u64>,
    /// Inline function spec as JSON, e.g. '{"kind":"logsine"}'.
    #[arg(long = "function-json")]
    function_json: Option<String>,
}

fn parse_regime(s: &str) -> Result<Regime, String> {
    match s {
        "global" => Ok(Regime::Global),
        "meso" => Ok(Regime::Meso),
        "micro" => Ok(Regime::Micro),
        other => Err(format!("unknown regime {other} (global|meso|micro)")),
    }
}

impl Overrides {
    fn build(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_json_file(path)?,
            None => {
                let function = self
                    .function_json
                    .as_deref()
                    .map(serde_json::from_str::<FunctionSpec>)
                    .transpose()
                    .context("parsing --function-json")?
                    .ok_or_else(|| anyhow::anyhow!("provide --config or --function-json"))?;
                ExperimentConfig {
                    regime: self.regime.unwrap_or(Regime::Global),
                    n: self.n.unwrap_or(16),
                    beta: self.beta.unwrap_or(2.0),
                    l_n: None,
                    function,
                    trials: self.trials.unwrap_or(1000),
                    master_seed: self.seed.unwrap_or(0),
                }
            }
        };
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(beta) = self.beta {
            cfg.beta = beta;
        }
        if let Some(regime) = self.regime {
            cfg.regime = regime;
        }
        if let Some(l_n) = self.l_n {
            cfg.l_n = Some(LnRule::Fixed { value: l_n });
        }
        if let Some(trials) = self.trials {
            cfg.trials = trials;
        }
        if let Some(seed) = self.seed {
            cfg.master_seed = seed;
        }
        if let Some(json) = &self.function_json {
            cfg.function = serde_json::from_str(json).context("parsing --function-json")?;
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Draw phase configurations and print them as `trial,index,phase`.
    Sample {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, default_value_t = 1)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Per-trial values of the pair statistic.
    Pairsum {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact β = 2 formulas (mean, variance breakdown, variance limit).
    Exact {
        #[arg(long = "function-json")]
        function_json: String,
        #[arg(long)]
        n: usize,
        /// Evaluate on scaled coefficients at this L_N instead of the
        /// plain circle series.
        #[arg(long = "l-n")]
        l_n: Option<f64>,
    },
    /// Exact joint cumulant of trace powers.
    Cumulant {
        /// Comma-separated frequencies, e.g. "1,-1,2,-2".
        #[arg(long)]
        ks: String,
        #[arg(long)]
        n: i64,
    },
    /// Limit-law constants for a function and β.
    Limit {
        #[arg(long = "function-json")]
        function_json: Option<String>,
        #[arg(long, default_value_t = 2.0)]
        beta: f64,
        #[arg(long, value_parser = ["series", "meso", "micro", "logsine"])]
        kind: String,
    },
    /// Monte Carlo experiment: moment reports plus a distribution test
    /// when the trial count allows one.
    Experiment {
        #[command(flatten)]
        overrides: Overrides,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Exact cross-module consistency gates.
    Suite,
}

fn write_or_print(path: &Option<PathBuf>, content: &str) -> Result<()> {
    match path {
        Some(p) => {
            if let Some(dir) = p.parent() {
                if !dir.as_os_str().is_empty() {
                    std::fs::create_dir_all(dir)?;
                }
            }
            std::fs::write(p, content).with_context(|| format!("writing {}", p.display()))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Sample {
            n,
            beta,
            trials,
            seed,
            out,
        } => {
            let csv = runner::sample_dump_csv(n, beta, trials, seed)?;
            write_or_print(&out, &csv)?;
        }
        Command::Pairsum { overrides, out } => {
            let cfg = overrides.build()?;
            let csv = runner::pair_sum_rows(&cfg)?;
            write_or_print(&out, &csv)?;
        }
        Command::Exact {
            function_json,
            n,
            l_n,
        } => {
            let spec: FunctionSpec =
                serde_json::from_str(&function_json).context("parsing --function-json")?;
            let value = match l_n {
                None => {
                    let series = circle_coeffs(&spec, 100_000)?;
                    serde_json::json!({
                        "n": n,
                        "expected": expected_pair_sum(&series, n).ok(),
                        "variance": variance_pair_sum(&series, n).ok(),
                        "asymptotic_variance": asymptotic_variance(&series).ok(),
                    })
                }
                Some(l_n) => {
                    let lt = LineTransform::from_spec(&spec)?;
                    let series = scaled_coeffs(&lt, l_n, lt.default_k_max(l_n))?;
                    serde_json::json!({
                        "n": n,
                        "l_n": l_n,
                        "expected": expected_pair_sum(&series, n).ok(),
                        "variance": variance_pair_sum(&series, n).ok(),
                    })
                }
            };
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        Command::Cumulant { ks, n } => {
            let ks: Vec<i64> = ks
                .split(',')
                .map(|s| s.trim().parse::<i64>().context("parsing --ks"))
                .collect::<Result<_>>()?;
            let value = trace_cumulant(&FrequencyVector::new(ks.clone(), n)?);
            println!(
                "kappa_{}^{{N={}}}({:?}) = {} ≈ {:.12}",
                ks.len(),
                n,
                ks,
                rational_to_string(&value),
                rational_to_f64(&value)
            );
        }
        Command::Limit {
            function_json,
            beta,
            kind,
        } => {
            let spec = function_json
                .as_deref()
                .map(serde_json::from_str::<FunctionSpec>)
                .transpose()
                .context("parsing --function-json")?;
            let value = match kind.as_str() {
                "logsine" => serde_json::json!({
                    "kind": "logsine",
                    "beta": beta,
                    "variance": logsine_variance(beta)?,
                }),
                "series" => {
                    let spec = spec.ok_or_else(|| anyhow::anyhow!("series needs a function"))?;
                    let series = circle_coeffs(&spec, 100_000)?;
                    let law = LimitLaw::exp_series(&series, beta, series.k_max())?;
                    serde_json::json!({
                        "kind": "exp_series",
                        "beta": beta,
                        "variance": law.variance(),
                        "skewness": law.skewness(),
                    })
                }
                "meso" | "micro" => {
                    let spec = spec.ok_or_else(|| anyhow::anyhow!("{kind} needs a function"))?;
                    let lt = LineTransform::from_spec(&spec)?;
                    if kind == "meso" {
                        serde_json::json!({
                            "kind": "meso",
                            "beta": beta,
                            "variance": meso_variance(&lt, beta)?,
                        })
                    } else {
                        if (beta - 2.0).abs() > 1e-12 {
                            bail!("the microscopic variance formula applies to β = 2 only");
                        }
                        serde_json::json!({
                            "kind": "micro",
                            "beta": beta,
                            "variance": micro_variance(&lt),
                        })
                    }
                }
                other => bail!("unknown limit kind {other}"),
            };
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        Command::Experiment {
            overrides,
            out,
            format,
        } => {
            let cfg = overrides.build()?;
            let reports = runner::run_moment_experiment(&cfg)?;
            let distribution = if cfg.trials >= 1000 {
                Some(runner::run_distribution_experiment(&cfg)?)
            } else {
                None
            };
            let all_pass = reports.iter().all(|r| r.pass)
                && distribution.as_ref().is_none_or(|d| d.pass);

            match out {
                Some(dir) => {
                    std::fs::create_dir_all(&dir)?;
                    std::fs::write(dir.join("reports.csv"), reports_to_csv(&reports))?;
                    let summary = summary_json(&cfg, &reports, distribution.as_ref());
                    std::fs::write(
                        dir.join("summary.json"),
                        serde_json::to_string_pretty(&summary)?,
                    )?;
                    eprintln!("wrote {}", dir.display());
                }
                None => match format {
                    OutputFormat::Csv => print!("{}", reports_to_csv(&reports)),
                    OutputFormat::Json => println!(
                        "{}",
                        serde_json::to_string_pretty(&summary_json(
                            &cfg,
                            &reports,
                            distribution.as_ref()
                        ))?
                    ),
                },
            }
            for r in &reports {
                eprintln!(
                    "[{}] {} estimate {:.6} vs {:.6} (z = {:+.2})",
                    if r.pass { "pass" } else { "FAIL" },
                    r.gate_id,
                    r.estimate,
                    r.reference,
                    r.z_score
                );
            }
            if let Some(d) = &distribution {
                eprintln!(
                    "[{}] distribution KS = {:.4}, p = {:.4}",
                    if d.pass { "pass" } else { "FAIL" },
                    d.ks_statistic,
                    d.p_value
                );
            }
            if !all_pass {
                std::process::exit(1);
            }
        }
        Command::Suite => {
            let gates = suite::run_consistency_suite();
            let mut all_pass = true;
            for g in &gates {
                println!("[{}] {} — {}", if g.pass { "pass" } else { "FAIL" }, g.id, g.detail);
                all_pass &= g.pass;
            }
            println!(
                "{}: {}/{} gates passed",
                version_string(),
                gates.iter().filter(|g| g.pass).count(),
                gates.len()
            );
            if !all_pass {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}
