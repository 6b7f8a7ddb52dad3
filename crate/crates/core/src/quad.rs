//! Quadrature building blocks: adaptive Simpson for 1D integrals with a
//! relative-error target, and Gauss–Legendre panels for the smooth pieces
//! of the 2D constraint-region integrals.

use std::sync::{Mutex, OnceLock};

/// Adaptive Simpson integration of `f` over `[a, b]`.
///
/// `rel_tol` is applied against the magnitude of the first whole-interval
/// estimate, with an absolute floor of 1e-15 so near-zero integrals
/// terminate; recursion is capped at depth 40.
pub fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = simpson(a, b, fa, fm, fb);
    let tol = (rel_tol * whole.abs()).max(1e-15);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 40)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_rec(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if depth == 0 || err.abs() <= 15.0 * tol {
        return left + right + err / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on [-1, 1].
///
/// Computed once per order by Newton iteration on the Legendre recurrence
/// and cached.
type NodeTable = Vec<(usize, (Vec<f64>, Vec<f64>))>;

pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    static CACHE: OnceLock<Mutex<NodeTable>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(Vec::new()));
    {
        let guard = cache.lock().unwrap();
        if let Some((_, nw)) = guard.iter().find(|(m, _)| *m == n) {
            return nw.clone();
        }
    }
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Chebyshev-style initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    let out = (nodes, weights);
    cache.lock().unwrap().push((n, out.clone()));
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// `n`-point Gauss–Legendre integral of `f` over `[a, b]`.
pub fn gauss_legendre(f: &dyn Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let (nodes, weights) = gauss_legendre_nodes(n);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(&weights) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Gauss–Legendre on panels split at the given interior breakpoints, with
/// long spans subdivided to roughly unit panels. Breakpoints outside
/// `(a, b)` are ignored.
pub fn panel_gauss_legendre(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    order: usize,
) -> f64 {
    let mut cuts: Vec<f64> = vec![a, b];
    cuts.extend(breakpoints.iter().copied().filter(|x| *x > a && *x < b));
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let mut acc = 0.0;
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let sub = ((hi - lo).ceil() as usize).max(1);
        let step = (hi - lo) / sub as f64;
        for j in 0..sub {
            acc += gauss_legendre(f, lo + j as f64 * step, lo + (j + 1) as f64 * step, order);
        }
    }
    acc
}
