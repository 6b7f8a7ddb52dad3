//! The exact cross-module consistency suite: every gate is a finite,
//! deterministic identity check between independently implemented routes.
//! Failures are reported, not thrown.

use crate::report::GateResult;
use cbe_core::{
    centered_product_expansion, circle_coeffs, count_lattice, cumulants_from_moments, g_function,
    moments_from_cumulants, trace_cumulant, variance_pair_sum, Composition, CovarianceCase,
    FrequencyVector, FunctionSpec, Rational,
};

pub type CovFn<'a> = &'a (dyn Fn(i64, i64, i64) -> CovarianceCase + Sync);

/// Run every gate against the production covariance formula.
pub fn run_consistency_suite() -> Vec<GateResult> {
    run_consistency_suite_with(&cbe_core::trace_covariance)
}

/// Run the gates against an injected covariance (used by mutation tests to
/// prove the gates actually depend on it).
pub fn run_consistency_suite_with(cov: CovFn) -> Vec<GateResult> {
    vec![
        gate_cov_vs_cumulants(cov),
        gate_variance_vs_cov_expansion(cov),
        gate_trace_cumulant_vanishing(),
        gate_pair_cumulant_saturation(),
        gate_g_function_grid(),
        gate_lattice_brute_force(),
        gate_transform_round_trip(),
        gate_centered_expansion_order_two(),
    ]
}

fn kappa(ks: &[i64], n: i64) -> Rational {
    trace_cumulant(&FrequencyVector::new(ks.to_vec(), n).expect("valid query"))
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v as i128)
}

/// Six-case trace covariance against the cumulant-engine combination
/// κ₄(s,−s,t,−t) + κ₂(s,−t)κ₂(−s,t) + κ₂(s,t)κ₂(−s,−t).
fn gate_cov_vs_cumulants(cov: CovFn) -> GateResult {
    let mut failures = 0;
    let mut cases = 0;
    for n in 1..=10i64 {
        for s in 1..=12i64 {
            for t in 1..=12i64 {
                cases += 1;
                let combo = kappa(&[s, -s, t, -t], n)
                    + kappa(&[s, -t], n) * kappa(&[-s, t], n)
                    + kappa(&[s, t], n) * kappa(&[-s, -t], n);
                if combo != int(cov(s, t, n).value) {
                    failures += 1;
                }
            }
        }
    }
    GateResult {
        id: "cov-vs-cumulants".into(),
        detail: format!("{cases} cases on the grid s,t ≤ 12, N ≤ 10; {failures} mismatches"),
        pass: failures == 0,
    }
}

/// Variance formula against 4 Σ f̂(s) f̂(t) cov(s,t) for random finite series.
fn gate_variance_vs_cov_expansion(cov: CovFn) -> GateResult {
    let mut state = 0x1357_9bdf_u64;
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) as f64 / (1u64 << 31) as f64 - 0.5
    };
    let mut failures = 0;
    let mut cases = 0;
    for _ in 0..50 {
        let coeffs: Vec<(u32, f64)> = (1..=6).map(|k| (k, next())).collect();
        let series = circle_coeffs(&FunctionSpec::Trigpoly { coeffs }, 8).expect("series");
        for n in 2..=14usize {
            cases += 1;
            let direct = variance_pair_sum(&series, n).expect("variance").total;
            let mut expansion = 0.0;
            for s in 1..=6usize {
                for t in 1..=6usize {
                    expansion += series.coeff(s)
                        * series.coeff(t)
                        * cov(s as i64, t as i64, n as i64).value as f64;
                }
            }
            expansion *= 4.0;
            if (direct - expansion).abs() > 1e-10 * (1.0 + direct.abs()) {
                failures += 1;
            }
        }
    }
    GateResult {
        id: "variance-vs-cov-expansion".into(),
        detail: format!("50 random series (K ≤ 6) × N ∈ 2..14 = {cases} cases; {failures} mismatches"),
        pass: failures == 0,
    }
}

/// Vanishing rules: nonzero frequency sum always kills the cumulant, and
/// balanced tuples of order > 2 vanish while Σ|k| ≤ N.
fn gate_trace_cumulant_vanishing() -> GateResult {
    let mut failures = 0;
    let mut cases = 0;

    let mut state = 0xabcdu64;
    let mut next = |m: u64| {
        state = state
            .wrapping_mul(2862933555777941757)
            .wrapping_add(3037000493);
        (state >> 33) % m
    };
    let mut unbalanced = 0;
    while unbalanced < 500 {
        let n = 2 + next(3) as usize;
        let ks: Vec<i64> = (0..n).map(|_| next(24) as i64 - 12).collect();
        if ks.contains(&0) || ks.iter().sum::<i64>() == 0 {
            continue;
        }
        unbalanced += 1;
        cases += 1;
        if kappa(&ks, 1 + next(12) as i64) != int(0) {
            failures += 1;
        }
    }

    // Balanced n = 3 and n = 4 tuples inside the window, |k| ≤ 12, N ≤ 12.
    for a in -12i64..=12 {
        for b in -12i64..=12 {
            let c = -(a + b);
            let ks3 = [a, b, c];
            if !ks3.contains(&0) && c.abs() <= 12 {
                let abs: i64 = ks3.iter().map(|k| k.abs()).sum();
                if abs <= 12 {
                    cases += 1;
                    if kappa(&ks3, 12) != int(0) || kappa(&ks3, abs) != int(0) {
                        failures += 1;
                    }
                }
            }
            for c4 in -12i64..=12 {
                let d = -(a + b + c4);
                let ks4 = [a, b, c4, d];
                if ks4.contains(&0) || d.abs() > 12 {
                    continue;
                }
                let abs: i64 = ks4.iter().map(|k| k.abs()).sum();
                if abs <= 12 {
                    cases += 1;
                    if kappa(&ks4, 12) != int(0) {
                        failures += 1;
                    }
                }
            }
        }
    }
    GateResult {
        id: "cumulant-vanishing".into(),
        detail: format!(
            "500 unbalanced tuples plus the balanced window grid n ≤ 4, |k| ≤ 12, N ≤ 12 \
             ({cases} cases); {failures} nonzero"
        ),
        pass: failures == 0,
    }
}

/// κ₂(k, −k) = min(N, |k|) over k ≤ 24, N ≤ 12.
fn gate_pair_cumulant_saturation() -> GateResult {
    let mut failures = 0;
    let mut cases = 0;
    for k in 1..=24i64 {
        for n in 1..=12i64 {
            cases += 1;
            if kappa(&[k, -k], n) != int(k.min(n)) {
                failures += 1;
            }
        }
    }
    GateResult {
        id: "pair-cumulant-min".into(),
        detail: format!("{cases} cases, k ≤ 24, N ≤ 12; {failures} mismatches"),
        pass: failures == 0,
    }
}

/// G(k,−k) = |k| for k ≤ 20 and G ≡ 0 for balanced tuples of order 3..5
/// with |k| ≤ 6.
fn gate_g_function_grid() -> GateResult {
    let mut failures = 0;
    let mut cases = 0;
    for k in 1..=20i64 {
        cases += 1;
        if g_function(&[k, -k]).expect("balanced") != int(k) {
            failures += 1;
        }
    }
    let range: Vec<i64> = (-6..=6).filter(|k| *k != 0).collect();
    for &a in &range {
        for &b in &range {
            let c3 = -(a + b);
            if c3 != 0 && c3.abs() <= 6 {
                cases += 1;
                if g_function(&[a, b, c3]).expect("balanced") != int(0) {
                    failures += 1;
                }
            }
            for &c in &range {
                let d4 = -(a + b + c);
                if d4 != 0 && d4.abs() <= 6 {
                    cases += 1;
                    if g_function(&[a, b, c, d4]).expect("balanced") != int(0) {
                        failures += 1;
                    }
                }
                for &d in &range {
                    let e5 = -(a + b + c + d);
                    if e5 != 0 && e5.abs() <= 6 {
                        cases += 1;
                        if g_function(&[a, b, c, d, e5]).expect("balanced") != int(0) {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    GateResult {
        id: "g-function-grid".into(),
        detail: format!("pairs k ≤ 20 and balanced tuples n ∈ 3..5, |k| ≤ 6 ({cases} cases); {failures} nonzero"),
        pass: failures == 0,
    }
}

/// Closed-form lattice count against the brute-force u loop.
fn gate_lattice_brute_force() -> GateResult {
    let mut state = 0xfeed_f00d_u64;
    let mut next = |m: u64| {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) % m
    };
    let mut failures = 0;
    let cases = 10_000;
    for _ in 0..cases {
        let n_vars = 1 + next(5) as usize;
        let ks: Vec<i64> = (0..n_vars).map(|_| next(25) as i64 - 12).collect();
        let n_size = 1 + next(30) as i64;
        let mut parts = Vec::new();
        let mut left = n_vars;
        while left > 0 {
            let p = 1 + next(left as u64) as usize;
            parts.push(p);
            left -= p;
        }
        let comp = Composition::new(parts.clone()).expect("parts");
        let fast = count_lattice(n_size, &comp, &ks).expect("count");
        let mut slow = 0;
        'outer: for u in 0..n_size {
            let mut cut = 0;
            for &p in &parts[..parts.len() - 1] {
                cut += p;
                let partial: i64 = ks[..cut].iter().sum();
                if u + partial < 0 || u + partial > n_size - 1 {
                    continue 'outer;
                }
            }
            slow += 1;
        }
        if fast != slow {
            failures += 1;
        }
    }
    GateResult {
        id: "lattice-count-brute-force".into(),
        detail: format!("{cases} random (composition, ks, N) instances; {failures} mismatches"),
        pass: failures == 0,
    }
}

/// moments_from_cumulants and cumulants_from_moments invert each other.
fn gate_transform_round_trip() -> GateResult {
    let mut failures = 0;
    let mut cases = 0;
    for n in 1..=6usize {
        for variant in 0..4u64 {
            cases += 1;
            let kappa_fn = move |b: &[usize]| -> f64 {
                let code = b
                    .iter()
                    .fold(variant, |acc, &x| acc.wrapping_mul(31).wrapping_add(x as u64 + 1));
                ((code.wrapping_mul(2654435761)) % 1000) as f64 / 250.0 - 2.0
            };
            let recovered = cumulants_from_moments(n, &|b: &[usize]| {
                moments_from_cumulants(b.len(), &|sub: &[usize]| {
                    let lifted: Vec<usize> = sub.iter().map(|&i| b[i]).collect();
                    kappa_fn(&lifted)
                })
            });
            let direct = kappa_fn(&(0..n).collect::<Vec<_>>());
            if (recovered - direct).abs() > 1e-12 * (1.0 + direct.abs()) {
                failures += 1;
            }
        }
    }
    GateResult {
        id: "moment-cumulant-round-trip".into(),
        detail: format!("{cases} random block assignments, n ≤ 6, tolerance 1e-12; {failures} failures"),
        pass: failures == 0,
    }
}

/// The l = 2 centered-product expansion is exactly the three admissible
/// partitions of four slots.
fn gate_centered_expansion_order_two() -> GateResult {
    let got = centered_product_expansion(2).expect("l = 2");
    let blocks: Vec<Vec<Vec<usize>>> = got.iter().map(|p| p.blocks().to_vec()).collect();
    let pass = got.len() == 3
        && blocks.contains(&vec![vec![0, 2], vec![1, 3]])
        && blocks.contains(&vec![vec![0, 3], vec![1, 2]])
        && blocks.contains(&vec![vec![0, 1, 2, 3]])
        && centered_product_expansion(1).expect("l = 1").is_empty();
    GateResult {
        id: "centered-expansion-l2".into(),
        detail: format!("expected the three admissible partitions, found {}", got.len()),
        pass,
    }
}
