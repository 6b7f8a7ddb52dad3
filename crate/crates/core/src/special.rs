//! Polygamma functions needed by the log-sine closed forms.
//!
//! `psi_k` here follows the usual polygamma indexing: `digamma` is
//! (d/dx) ln Γ, `trigamma` its derivative, `tetragamma` the next one.
//! All are evaluated by lifting the argument with the recurrences and
//! summing the asymptotic Bernoulli series, accurate to ~1e-14 for x > 0.

const LIFT: f64 = 12.0;

/// ψ(x) = (d/dx) ln Γ(x).
pub fn digamma(x: f64) -> f64 {
    assert!(x > 0.0, "digamma defined here for x > 0 only");
    let mut x = x;
    let mut acc = 0.0;
    while x < LIFT {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // ln x − 1/(2x) − Σ B_{2k} / (2k x^{2k})
    let series = inv2
        * (1.0 / 12.0
            - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    acc + x.ln() - 0.5 * inv - series
}

/// ψ′(x), the trigamma function.
pub fn trigamma(x: f64) -> f64 {
    assert!(x > 0.0, "trigamma defined here for x > 0 only");
    let mut x = x;
    let mut acc = 0.0;
    while x < LIFT {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // 1/x + 1/(2x²) + Σ B_{2k} / x^{2k+1}
    let series = inv * inv2
        * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
    acc + inv + 0.5 * inv2 + series
}

/// ψ″(x), the tetragamma function.
pub fn tetragamma(x: f64) -> f64 {
    assert!(x > 0.0, "tetragamma defined here for x > 0 only");
    let mut x = x;
    let mut acc = 0.0;
    while x < LIFT {
        acc -= 2.0 / (x * x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // −1/x² − 1/x³ − Σ B_{2k} (2k+1) / x^{2k+2}
    let series = inv2 * inv2
        * (0.5 - inv2 * (1.0 / 6.0 - inv2 * (1.0 / 6.0 - inv2 * (3.0 / 10.0 - inv2 * 5.0 / 6.0))));
    acc - inv2 - inv * inv2 - series
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    const PI2_OVER_6: f64 = 1.644_934_066_848_226_4;
    const ZETA3: f64 = 1.202_056_903_159_594_3;

    #[test]
    fn digamma_special_values() {
        assert_abs_diff_eq!(digamma(1.0), -EULER_GAMMA, epsilon = 1e-13);
        assert_abs_diff_eq!(digamma(2.0), 1.0 - EULER_GAMMA, epsilon = 1e-13);
        // ψ(1/2) = −γ − 2 ln 2
        assert_abs_diff_eq!(
            digamma(0.5),
            -EULER_GAMMA - 2.0 * std::f64::consts::LN_2,
            epsilon = 1e-13
        );
    }

    #[test]
    fn trigamma_special_values() {
        assert_abs_diff_eq!(trigamma(1.0), PI2_OVER_6, epsilon = 1e-13);
        assert_abs_diff_eq!(trigamma(2.0), PI2_OVER_6 - 1.0, epsilon = 1e-13);
        // ψ′(1/2) = π²/2, ψ′(3/2) = π²/2 − 4
        let pi2_half = std::f64::consts::PI * std::f64::consts::PI / 2.0;
        assert_abs_diff_eq!(trigamma(0.5), pi2_half, epsilon = 1e-12);
        assert_abs_diff_eq!(trigamma(1.5), pi2_half - 4.0, epsilon = 1e-12);
    }

    #[test]
    fn tetragamma_special_values() {
        assert_abs_diff_eq!(tetragamma(1.0), -2.0 * ZETA3, epsilon = 1e-12);
        assert_abs_diff_eq!(tetragamma(2.0), 2.0 - 2.0 * ZETA3, epsilon = 1e-12);
    }

    #[test]
    fn recurrences() {
        for &x in &[0.5, 1.0, 1.5, 2.0, 3.25, 7.0] {
            assert_abs_diff_eq!(digamma(x + 1.0) - digamma(x), 1.0 / x, epsilon = 1e-12);
            assert_abs_diff_eq!(trigamma(x + 1.0) - trigamma(x), -1.0 / (x * x), epsilon = 1e-12);
            assert_abs_diff_eq!(
                tetragamma(x + 1.0) - tetragamma(x),
                2.0 / (x * x * x),
                epsilon = 1e-12
            );
        }
    }
}
