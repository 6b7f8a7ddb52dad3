//! Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.

/// Supremum distance between the two empirical CDFs.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty());
    let mut a: Vec<f64> = a.to_vec();
    let mut b: Vec<f64> = b.to_vec();
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut i = 0;
    let mut j = 0;
    let mut d: f64 = 0.0;
    // Advance both CDFs past every copy of the current value before
    // measuring, so ties across the samples don't inflate the distance.
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Survival function of the Kolmogorov distribution,
/// `Q(λ) = 2 Σ_{j≥1} (−1)^{j−1} e^{−2 j² λ²}`.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut term_sign = 1.0;
    for j in 1..=100 {
        let t = (-2.0 * (j as f64) * (j as f64) * lambda * lambda).exp();
        sum += term_sign * t;
        term_sign = -term_sign;
        if t < 1e-18 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Asymptotic two-sample p-value with the small-sample size correction on
/// the effective count.
pub fn ks_p_value(d: f64, n_a: usize, n_b: usize) -> f64 {
    let ne = (n_a as f64 * n_b as f64) / (n_a + n_b) as f64;
    let sqrt_ne = ne.sqrt();
    kolmogorov_survival((sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identical_samples_have_zero_distance() {
        let xs: Vec<f64> = (0..100).map(|i| (i as f64).sin()).collect();
        assert_eq!(ks_statistic(&xs, &xs), 0.0);
        assert_eq!(ks_p_value(0.0, 100, 100), 1.0);
    }

    #[test]
    fn hand_checked_distance() {
        let a = vec![1.0, 1.0, 4.0, 4.0];
        let b = vec![1.0, 1.0, 1.0, 4.0];
        assert_abs_diff_eq!(ks_statistic(&a, &b), 0.25, epsilon = 1e-12);
        let a = vec![0.42, 0.24, 0.86, 0.85, 0.82, 0.82, 0.25, 0.78, 0.13, 0.27];
        let b = vec![0.24, 0.27, 0.87, 0.29, 0.57, 0.44, 0.5, 0.00, 0.56, 0.03];
        assert_abs_diff_eq!(ks_statistic(&a, &b), 0.4, epsilon = 1e-12);
    }

    #[test]
    fn survival_function_reference_points() {
        // Q(0.828...) ≈ 0.5 and the classic 1.36 ↔ 0.05 critical point.
        assert_abs_diff_eq!(kolmogorov_survival(1.3581), 0.05, epsilon = 2e-3);
        assert!(kolmogorov_survival(0.4) > 0.99);
        assert!(kolmogorov_survival(2.0) < 1e-3);
    }

    #[test]
    fn separated_samples_reject() {
        let a: Vec<f64> = (0..500).map(|i| i as f64 / 500.0).collect();
        let b: Vec<f64> = (0..500).map(|i| 2.0 + i as f64 / 500.0).collect();
        let d = ks_statistic(&a, &b);
        assert_eq!(d, 1.0);
        assert!(ks_p_value(d, 500, 500) < 1e-10);
    }
}
