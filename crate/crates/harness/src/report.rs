//! Report records and their CSV/JSON renderings. Output is fully
//! deterministic: fixed float formatting, rows in gate order.

use cbe_core::Regime;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    ExactFormula,
    LimitLaw,
    Oracle,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonteCarloReport {
    pub gate_id: String,
    pub regime: Regime,
    pub beta: f64,
    pub n: usize,
    pub l_n: f64,
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub reference: f64,
    pub reference_kind: ReferenceKind,
    pub z_score: f64,
    pub pass: bool,
}

impl MonteCarloReport {
    /// |z| gate; the default is 4, loose trend gates use 8.
    #[allow(clippy::too_many_arguments)]
    pub fn from_estimate(
        gate_id: impl Into<String>,
        regime: Regime,
        beta: f64,
        n: usize,
        l_n: f64,
        estimate: f64,
        std_error: f64,
        trials: u64,
        reference: f64,
        reference_kind: ReferenceKind,
        z_gate: f64,
    ) -> Self {
        let z_score = if std_error > 0.0 {
            (estimate - reference) / std_error
        } else if estimate == reference {
            0.0
        } else {
            f64::INFINITY
        };
        Self {
            gate_id: gate_id.into(),
            regime,
            beta,
            n,
            l_n,
            estimate,
            std_error,
            trials,
            reference,
            reference_kind,
            z_score,
            pass: z_score.abs() <= z_gate,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DistributionTestReport {
    pub ks_statistic: f64,
    pub p_value: f64,
    pub sample_sizes: (usize, usize),
    pub pass: bool,
}

impl DistributionTestReport {
    pub fn new(ks_statistic: f64, p_value: f64, sample_sizes: (usize, usize)) -> Self {
        Self {
            ks_statistic,
            p_value,
            sample_sizes,
            pass: p_value >= 0.01,
        }
    }
}

/// One exact gate of the consistency suite.
#[derive(Debug, Clone, Serialize)]
pub struct GateResult {
    pub id: String,
    pub detail: String,
    pub pass: bool,
}

pub const CSV_HEADER: &str = "gate_id,regime,beta,n,l_n,estimate,std_error,reference,z,pass";

fn fmt(x: f64) -> String {
    format!("{x:.17e}")
}

/// The pinned CSV schema, one row per report.
pub fn reports_to_csv(reports: &[MonteCarloReport]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.gate_id,
            r.regime,
            fmt(r.beta),
            r.n,
            fmt(r.l_n),
            fmt(r.estimate),
            fmt(r.std_error),
            fmt(r.reference),
            fmt(r.z_score),
            r.pass
        ));
    }
    out
}

/// JSON summary: config echo, version string, reports, optional KS block.
pub fn summary_json<C: Serialize>(
    config: &C,
    reports: &[MonteCarloReport],
    distribution: Option<&DistributionTestReport>,
) -> serde_json::Value {
    serde_json::json!({
        "version": crate::version_string(),
        "config": config,
        "reports": reports,
        "distribution": distribution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_and_pass_are_consistent() {
        let r = MonteCarloReport::from_estimate(
            "mean",
            Regime::Global,
            2.0,
            16,
            1.0,
            -29.9,
            0.05,
            1000,
            -30.0,
            ReferenceKind::ExactFormula,
            4.0,
        );
        assert!((r.z_score - 2.0).abs() < 1e-12);
        assert!(r.pass);
        let r = MonteCarloReport::from_estimate(
            "mean",
            Regime::Global,
            2.0,
            16,
            1.0,
            -29.0,
            0.05,
            1000,
            -30.0,
            ReferenceKind::ExactFormula,
            4.0,
        );
        assert!(!r.pass);
    }

    #[test]
    fn csv_is_deterministic_and_schema_stable() {
        let r = MonteCarloReport::from_estimate(
            "variance",
            Regime::Meso,
            2.0,
            256,
            16.0,
            3.99,
            0.06,
            10_000,
            4.0,
            ReferenceKind::LimitLaw,
            4.0,
        );
        let a = reports_to_csv(std::slice::from_ref(&r));
        let b = reports_to_csv(&[r]);
        assert_eq!(a, b);
        assert!(a.starts_with(CSV_HEADER));
        assert_eq!(a.lines().count(), 2);
        let fields: Vec<&str> = a.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(fields.len(), 10);
        assert_eq!(fields[0], "variance");
        assert_eq!(fields[1], "meso");
        assert_eq!(fields[9], "true");
    }
}
