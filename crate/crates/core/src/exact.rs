//! Closed-form finite-N formulas for the β = 2 pair statistic: the exact
//! expectation, the variance as a five-component breakdown, the piecewise
//! trace covariance that generates it, and the large-N variance limit.

use crate::testfn::SpectralCoeffs;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExactError {
    #[error("f(0) is undefined for this series; the expectation formula needs a finite f(0)")]
    UndefinedAtZero,
    #[error("matrix size must be at least {needed}")]
    SizeTooSmall { needed: usize },
    #[error("Σ k² f̂(k)² does not converge on the truncation grid; this is the CLT regime \
             (slowly growing variance) — use the log-sine closed form instead")]
    DivergentSeries,
}

/// Kahan-compensated accumulator; the cross sums cancel heavily.
#[derive(Default, Clone, Copy)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum
    }
}

/// `E S_N(f) = f̂(0) N² − f(0) N + Σ_k f̂(k) min(|k|, N)` at β = 2.
pub fn expected_pair_sum<S: SpectralCoeffs>(series: &S, n: usize) -> Result<f64, ExactError> {
    if n == 0 {
        return Err(ExactError::SizeTooSmall { needed: 1 });
    }
    let f0 = series.value_at_zero().ok_or(ExactError::UndefinedAtZero)?;
    let nf = n as f64;
    let mut tail = Kahan::default();
    for k in 1..=series.k_max() {
        tail.add(series.coeff(k) * (k.min(n)) as f64);
    }
    Ok(series.coeff(0) * nf * nf - f0 * nf + 2.0 * tail.value())
}

/// The five sums of the exact β = 2 variance of `S_N(f)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct VarianceBreakdown {
    /// `4 Σ_{1≤s≤N−1} s² f̂(s)²`
    pub leading: f64,
    /// `4 N² Σ_{s≥N} f̂(s)²`
    pub tail_quadratic: f64,
    /// `−4 N Σ_{s≥N} f̂(s)²`
    pub tail_linear: f64,
    /// `−4 Σ_{1≤|s−t|≤N−1, N≤max(s,t)} (N−|s−t|) f̂(s) f̂(t)`
    pub cross_band: f64,
    /// `−4 Σ_{1≤s,t≤N−1, s+t≥N+1} (s+t−N) f̂(s) f̂(t)`
    pub cross_overflow: f64,
    pub total: f64,
}

/// Exact variance of `S_N(f)` for CUE(N), term by term.
pub fn variance_pair_sum<S: SpectralCoeffs>(
    series: &S,
    n: usize,
) -> Result<VarianceBreakdown, ExactError> {
    if n < 2 {
        return Err(ExactError::SizeTooSmall { needed: 2 });
    }
    let k_max = series.k_max();
    let nf = n as f64;

    let mut leading = Kahan::default();
    for s in 1..=k_max.min(n - 1) {
        let c = series.coeff(s);
        leading.add((s * s) as f64 * c * c);
    }

    let mut tail_sq = Kahan::default();
    for s in n..=k_max {
        let c = series.coeff(s);
        tail_sq.add(c * c);
    }

    let mut band = Kahan::default();
    if k_max >= n {
        for s in 1..=k_max {
            let lo = s.saturating_sub(n - 1).max(1);
            let hi = (s + (n - 1)).min(k_max);
            for t in lo..=hi {
                if t == s || s.max(t) < n {
                    continue;
                }
                let gap = s.abs_diff(t);
                band.add((n - gap) as f64 * series.coeff(s) * series.coeff(t));
            }
        }
    }

    let mut overflow = Kahan::default();
    let top = k_max.min(n - 1);
    for s in 1..=top {
        let lo = (n + 1).saturating_sub(s).max(1);
        for t in lo..=top {
            overflow.add((s + t - n) as f64 * series.coeff(s) * series.coeff(t));
        }
    }

    let leading = 4.0 * leading.value();
    let tail_quadratic = 4.0 * nf * nf * tail_sq.value();
    let tail_linear = -4.0 * nf * tail_sq.value();
    let cross_band = -4.0 * band.value();
    let cross_overflow = -4.0 * overflow.value();
    Ok(VarianceBreakdown {
        leading,
        tail_quadratic,
        tail_linear,
        cross_band,
        cross_overflow,
        total: leading + tail_quadratic + tail_linear + cross_band + cross_overflow,
    })
}

/// Which region of the (s, t, N) plane a covariance query landed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CovRegion {
    DiagSmall,
    DiagLarge,
    DiagSaturated,
    Band,
    Overflow,
    Zero,
}

/// `cov(|t_{N,s}|², |t_{N,t}|²)` for CUE(N), with the region label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CovarianceCase {
    pub region: CovRegion,
    pub value: i64,
}

/// The six-case covariance of squared trace moduli under CUE(N).
/// Negative frequencies fold by |·| since `|t_{N,-k}| = |t_{N,k}|`.
pub fn trace_covariance(s: i64, t: i64, n: i64) -> CovarianceCase {
    assert!(n >= 1, "matrix size must be at least 1");
    let (s, t) = (s.abs(), t.abs());
    let (lo, hi) = (s.min(t), s.max(t));
    if lo == 0 {
        // |t_{N,0}|² = N² is deterministic.
        return CovarianceCase {
            region: CovRegion::Zero,
            value: 0,
        };
    }
    if s == t {
        if s >= n {
            CovarianceCase {
                region: CovRegion::DiagSaturated,
                value: n * (n - 1),
            }
        } else if 2 * s <= n {
            CovarianceCase {
                region: CovRegion::DiagSmall,
                value: s * s,
            }
        } else {
            CovarianceCase {
                region: CovRegion::DiagLarge,
                value: n + s * s - 2 * s,
            }
        }
    } else if hi - lo < n && hi >= n {
        CovarianceCase {
            region: CovRegion::Band,
            value: (hi - lo) - n,
        }
    } else if hi < n && s + t > n {
        CovarianceCase {
            region: CovRegion::Overflow,
            value: n - (s + t),
        }
    } else {
        CovarianceCase {
            region: CovRegion::Zero,
            value: 0,
        }
    }
}

/// `4 Σ_{k≥1} k² f̂(k)²`, the variance limit. Rejects series whose partial
/// sums are still growing at the truncation edge.
pub fn asymptotic_variance<S: SpectralCoeffs>(series: &S) -> Result<f64, ExactError> {
    let k_max = series.k_max();
    let mut total = Kahan::default();
    let mut head = 0.0;
    for k in 1..=k_max {
        let c = series.coeff(k);
        total.add((k * k) as f64 * c * c);
        if k == k_max / 2 {
            head = total.value();
        }
    }
    let total = 4.0 * total.value();
    if !series.finite_support() && k_max >= 16 {
        let tail_fraction = (total - 4.0 * head).abs() / total.abs().max(1e-300);
        if tail_fraction > 0.01 {
            return Err(ExactError::DivergentSeries);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfn::{circle_coeffs, CircleSeries, FunctionSpec, SupportBound};
    use approx::assert_abs_diff_eq;

    fn trigpoly(coeffs: &[(u32, f64)]) -> CircleSeries {
        circle_coeffs(
            &FunctionSpec::Trigpoly {
                coeffs: coeffs.to_vec(),
            },
            64,
        )
        .unwrap()
    }

    #[test]
    fn expectation_hand_values() {
        let two_cos = trigpoly(&[(1, 1.0)]);
        assert_abs_diff_eq!(expected_pair_sum(&two_cos, 3).unwrap(), -4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(expected_pair_sum(&two_cos, 1).unwrap(), 0.0, epsilon = 1e-14);
        // High harmonic saturates min(|k|, N): f = 2cos(5θ), N = 3.
        let high = trigpoly(&[(5, 1.0)]);
        assert_abs_diff_eq!(expected_pair_sum(&high, 3).unwrap(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn expectation_equals_truncated_projection_form() {
        // With f̂(0) = 0 and support inside (−N, N) the expectation also
        // reads Σ_{|k|<N} (|k|−N) f̂(k).
        let series = trigpoly(&[(1, 0.7), (2, -0.2), (3, 1.5)]);
        let n = 5;
        let alt: f64 = (1..=3)
            .map(|k| 2.0 * (k as f64 - n as f64) * series.coeff(k as usize))
            .sum();
        assert_abs_diff_eq!(expected_pair_sum(&series, n).unwrap(), alt, epsilon = 1e-12);
    }

    #[test]
    fn expectation_requires_finite_value_at_zero() {
        let logsine = circle_coeffs(&FunctionSpec::Logsine, 100).unwrap();
        assert!(matches!(
            expected_pair_sum(&logsine, 4),
            Err(ExactError::UndefinedAtZero)
        ));
    }

    #[test]
    fn covariance_six_cases() {
        let cases = [
            ((3, 3, 10), CovRegion::DiagSmall, 9),
            ((7, 7, 10), CovRegion::DiagLarge, 45),
            ((12, 12, 10), CovRegion::DiagSaturated, 90),
            ((12, 5, 10), CovRegion::Band, -3),
            ((6, 7, 10), CovRegion::Overflow, -3),
            ((2, 5, 10), CovRegion::Zero, 0),
        ];
        for ((s, t, n), region, value) in cases {
            let c = trace_covariance(s, t, n);
            assert_eq!(c.region, region, "region of ({s},{t},{n})");
            assert_eq!(c.value, value, "value of ({s},{t},{n})");
            // Symmetry and sign folding.
            assert_eq!(trace_covariance(t, s, n).value, value);
            assert_eq!(trace_covariance(-s, t, n).value, value);
            assert_eq!(trace_covariance(s, -t, n).value, value);
        }
        assert_eq!(trace_covariance(0, 5, 10).value, 0);
    }

    #[test]
    fn variance_hand_values() {
        // f = 2cosθ: Var = 4 for every N ≥ 2.
        let two_cos = trigpoly(&[(1, 1.0)]);
        for n in 2..=12 {
            let v = variance_pair_sum(&two_cos, n).unwrap();
            assert_abs_diff_eq!(v.total, 4.0, epsilon = 1e-12);
        }

        // f = 2cos(2θ), N = 3: leading 16, overflow −4.
        let two_cos2 = trigpoly(&[(2, 1.0)]);
        let v = variance_pair_sum(&two_cos2, 3).unwrap();
        assert_abs_diff_eq!(v.leading, 16.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.cross_overflow, -4.0, epsilon = 1e-12);
        assert_abs_diff_eq!(v.total, 12.0, epsilon = 1e-12);

        // f̂ supported on {5}, N = 3: only the saturated tail contributes.
        let high = trigpoly(&[(5, 0.75)]);
        let v = variance_pair_sum(&high, 3).unwrap();
        assert_abs_diff_eq!(v.leading, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(v.total, 24.0 * 0.75 * 0.75, epsilon = 1e-12);
    }

    #[test]
    fn variance_components_sum_to_total() {
        let series = trigpoly(&[(1, 0.3), (2, -1.1), (5, 0.8), (9, 0.05)]);
        for n in 2..=14 {
            let v = variance_pair_sum(&series, n).unwrap();
            let sum =
                v.leading + v.tail_quadratic + v.tail_linear + v.cross_band + v.cross_overflow;
            assert_abs_diff_eq!(sum, v.total, epsilon = 1e-12 * (1.0 + v.total.abs()));
            assert!(v.total >= -1e-12, "variance must be nonnegative");
        }
    }

    #[test]
    fn asymptotic_variance_values_and_divergence() {
        let two_cos = trigpoly(&[(1, 1.0)]);
        assert_abs_diff_eq!(asymptotic_variance(&two_cos).unwrap(), 4.0, epsilon = 1e-14);
        let sum = trigpoly(&[(1, 1.0), (2, 1.0)]);
        assert_abs_diff_eq!(asymptotic_variance(&sum).unwrap(), 20.0, epsilon = 1e-14);

        let logsine = circle_coeffs(&FunctionSpec::Logsine, 4000).unwrap();
        assert!(matches!(
            asymptotic_variance(&logsine),
            Err(ExactError::DivergentSeries)
        ));

        // A truncated but summable tail passes the convergence check.
        let decaying = CircleSeries::from_coeffs(
            (0..4000)
                .map(|k| if k == 0 { 0.0 } else { (k as f64).powi(-3) })
                .collect(),
            None,
            SupportBound::Truncated(3999),
        );
        assert!(asymptotic_variance(&decaying).is_ok());
    }
}
