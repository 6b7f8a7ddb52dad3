//! Exact joint cumulants of CUE traces and the set-partition combinatorics
//! around them.
//!
//! The joint cumulant of traces `t_{N,k_1}, …, t_{N,k_n}` is a triple sum
//! over block counts m, compositions `n_1 + … + n_m = n`, and permutations
//! σ ∈ S_n of weighted lattice counts
//! `I_N = #{u : 0 ≤ u ≤ N−1, 0 ≤ u + partial sums ≤ N−1}`.
//! Everything here is exact: lattice counts are integers, cumulants are
//! rationals with denominators dividing `m · n_1! ⋯ n_m!`.
//!
//! A composition of n into m parts is encoded as the subset of cut
//! positions {1, …, n−1} it induces, so the permutation loop accumulates
//! one integer total per cut mask and the rational weights enter once at
//! the end.

use crate::testfn::SpectralCoeffs;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};
use thiserror::Error;

/// Exact rational value of a cumulant query.
pub type Rational = Ratio<i128>;

/// Hard cap on the cumulant order; the permutation sum grows like n!.
pub const MAX_CUMULANT_ORDER: usize = 8;
/// Hard cap on |k_i|.
pub const MAX_FREQUENCY: i64 = 10_000;
/// Largest l accepted by the centered-product expansion (partitions of 2l).
pub const MAX_CENTERED_ORDER: usize = 6;

#[derive(Debug, Error)]
pub enum CumulantError {
    #[error("frequency vector must have between 1 and {max} entries, got {got}")]
    OrderOutOfRange { max: usize, got: usize },
    #[error("|k| ≤ {max} required, got {got}")]
    FrequencyTooLarge { max: i64, got: i64 },
    #[error("frequency entries must be nonzero when n ≥ 2")]
    ZeroFrequency,
    #[error("matrix size must be at least 1")]
    BadMatrixSize,
    #[error("composition parts must be positive")]
    BadComposition,
    #[error("composition covers {covered} slots but {needed} frequencies were given")]
    CompositionMismatch { covered: usize, needed: usize },
    #[error("blocks must be disjoint, nonempty, and cover 0..{0}")]
    BadPartition(usize),
    #[error("frequencies must sum to zero")]
    NonzeroFrequencySum,
    #[error("centered-product expansion supports 1 ≤ l ≤ {max}, got {got}")]
    CenteredOrderOutOfRange { max: usize, got: usize },
    #[error("pair-statistic moments implemented for l ∈ {{2, 3}}, got {0}")]
    UnsupportedMomentOrder(usize),
    #[error("cost guard exceeded: {0}")]
    CostGuard(String),
}

/// Integer frequency vector (k_1, …, k_n) tied to a matrix size N.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyVector {
    ks: Vec<i64>,
    n_size: i64,
}

impl FrequencyVector {
    pub fn new(ks: Vec<i64>, n_size: i64) -> Result<Self, CumulantError> {
        if ks.is_empty() || ks.len() > MAX_CUMULANT_ORDER {
            return Err(CumulantError::OrderOutOfRange {
                max: MAX_CUMULANT_ORDER,
                got: ks.len(),
            });
        }
        if n_size < 1 {
            return Err(CumulantError::BadMatrixSize);
        }
        if let Some(&k) = ks.iter().find(|k| k.abs() > MAX_FREQUENCY) {
            return Err(CumulantError::FrequencyTooLarge {
                max: MAX_FREQUENCY,
                got: k,
            });
        }
        if ks.len() > 1 && ks.contains(&0) {
            return Err(CumulantError::ZeroFrequency);
        }
        Ok(Self { ks, n_size })
    }

    pub fn ks(&self) -> &[i64] {
        &self.ks
    }

    pub fn n_size(&self) -> i64 {
        self.n_size
    }
}

/// Ordered positive parts (n_1, …, n_m).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Composition {
    parts: Vec<usize>,
}

impl Composition {
    pub fn new(parts: Vec<usize>) -> Result<Self, CumulantError> {
        if parts.is_empty() || parts.contains(&0) {
            return Err(CumulantError::BadComposition);
        }
        Ok(Self { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn total(&self) -> usize {
        self.parts.iter().sum()
    }
}

/// Partition of {0, …, n−1} into disjoint nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetPartition {
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(mut blocks: Vec<Vec<usize>>, n: usize) -> Result<Self, CumulantError> {
        let mut seen = vec![false; n];
        let mut count = 0;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(CumulantError::BadPartition(n));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x >= n || seen[x] {
                    return Err(CumulantError::BadPartition(n));
                }
                seen[x] = true;
                count += 1;
            }
        }
        if count != n {
            return Err(CumulantError::BadPartition(n));
        }
        blocks.sort_by_key(|b| b[0]);
        Ok(Self { blocks })
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }
}

/// `#{u : 0 ≤ u ≤ N−1, every partial sum keeps u + Σ k within [0, N−1]}`,
/// by the closed form `max(0, N − max(0, P) − max(0, −P))` over the
/// composition's cut-point partial sums P.
pub fn count_lattice(n_size: i64, parts: &Composition, ks: &[i64]) -> Result<i64, CumulantError> {
    if n_size < 1 {
        return Err(CumulantError::BadMatrixSize);
    }
    if parts.total() != ks.len() {
        return Err(CumulantError::CompositionMismatch {
            covered: parts.total(),
            needed: ks.len(),
        });
    }
    let mut max_plus = 0i64;
    let mut max_minus = 0i64;
    let mut cut = 0usize;
    for &p in &parts.parts()[..parts.parts().len() - 1] {
        cut += p;
        let partial: i64 = ks[..cut].iter().sum();
        max_plus = max_plus.max(partial);
        max_minus = max_minus.max(-partial);
    }
    Ok((n_size - max_plus - max_minus).max(0))
}

fn factorial(n: usize) -> i128 {
    (1..=n as i128).product::<i128>().max(1)
}

/// Weight of each composition, indexed by its cut mask: bit j set means a
/// cut after prefix length j+1. Weight = (−1)^{m−1} / (m · Π parts!).
fn composition_weights(n: usize) -> std::sync::Arc<Vec<Rational>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, std::sync::Arc<Vec<Rational>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(w) = cache.lock().unwrap().get(&n) {
        return w.clone();
    }
    let bits = n - 1;
    let weights: Vec<Rational> = (0u32..1 << bits)
        .map(|mask| {
            let m = mask.count_ones() as i128 + 1;
            let mut denom = m;
            let mut prev = 0usize;
            for b in 0..bits {
                if mask >> b & 1 == 1 {
                    denom *= factorial(b + 1 - prev);
                    prev = b + 1;
                }
            }
            denom *= factorial(n - prev);
            let numer = if (m - 1) % 2 == 0 { 1 } else { -1 };
            Rational::new(numer, denom)
        })
        .collect();
    let arc = std::sync::Arc::new(weights);
    cache.lock().unwrap().insert(n, arc.clone());
    arc
}

/// Heap's algorithm; visits every permutation of `items` exactly once.
fn for_each_permutation(items: &mut [i64], visit: &mut impl FnMut(&[i64])) {
    let n = items.len();
    let mut c = vec![0usize; n];
    visit(items);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                items.swap(0, i);
            } else {
                items.swap(c[i], i);
            }
            visit(items);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// The raw triple sum: Σ over cut masks and permutations of weighted
/// lattice counts. Callers guarantee Σ k_i = 0 and 1 ≤ n ≤ 8.
fn cumulant_sum(ks: &[i64], n_size: i64) -> Rational {
    let n = ks.len();
    let bits = n - 1;
    let weights = composition_weights(n);
    let mut totals = vec![0i128; 1 << bits];
    let mut perm = ks.to_vec();
    for_each_permutation(&mut perm, &mut |p| {
        let mut prefix = [0i64; MAX_CUMULANT_ORDER];
        let mut acc = 0i64;
        for i in 0..bits {
            acc += p[i];
            prefix[i] = acc;
        }
        for (mask, total) in totals.iter_mut().enumerate() {
            let mut max_plus = 0i64;
            let mut max_minus = 0i64;
            let mut rest = mask;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                let v = prefix[b];
                max_plus = max_plus.max(v);
                max_minus = max_minus.max(-v);
                rest &= rest - 1;
            }
            *total += (n_size - max_plus - max_minus).max(0) as i128;
        }
    });
    let mut acc = Rational::zero();
    for (mask, w) in weights.iter().enumerate() {
        if totals[mask] != 0 {
            acc += *w * Rational::from_integer(totals[mask]);
        }
    }
    acc
}

/// Exact joint cumulant `κ_n^{(N)}(k_1, …, k_n)` of CUE trace powers.
///
/// Zero whenever Σ k_i ≠ 0; for n = 1 it is N at k = 0 and zero otherwise.
pub fn trace_cumulant(q: &FrequencyVector) -> Rational {
    let ks = q.ks();
    if ks.len() == 1 {
        return if ks[0] == 0 {
            Rational::from_integer(q.n_size() as i128)
        } else {
            Rational::zero()
        };
    }
    if ks.iter().sum::<i64>() != 0 {
        return Rational::zero();
    }
    cumulant_sum(ks, q.n_size())
}

/// Cumulant with the proven vanishing window applied as a shortcut:
/// for n > 2, Σ k = 0 and Σ |k| ≤ N the value is exactly zero.
fn cumulant_windowed(ks: &[i64], n_size: i64) -> Rational {
    if ks.len() > 2 && ks.iter().map(|k| k.abs()).sum::<i64>() <= n_size {
        return Rational::zero();
    }
    cumulant_sum(ks, n_size)
}

/// The size-independent companion sum of the cumulant formula: the same
/// triple sum with `max(0, P) + max(0, −P)` in place of the lattice count,
/// negated. For balanced tuples it equals |k| at n = 2 and vanishes for
/// n > 2.
pub fn g_function(ks: &[i64]) -> Result<Rational, CumulantError> {
    if ks.is_empty() || ks.len() > MAX_CUMULANT_ORDER {
        return Err(CumulantError::OrderOutOfRange {
            max: MAX_CUMULANT_ORDER,
            got: ks.len(),
        });
    }
    if ks.iter().sum::<i64>() != 0 {
        return Err(CumulantError::NonzeroFrequencySum);
    }
    let n = ks.len();
    let bits = n - 1;
    let weights = composition_weights(n);
    let mut totals = vec![0i128; 1 << bits];
    let mut perm = ks.to_vec();
    for_each_permutation(&mut perm, &mut |p| {
        let mut prefix = [0i64; MAX_CUMULANT_ORDER];
        let mut acc = 0i64;
        for i in 0..bits {
            acc += p[i];
            prefix[i] = acc;
        }
        for (mask, total) in totals.iter_mut().enumerate() {
            let mut max_plus = 0i64;
            let mut max_minus = 0i64;
            let mut rest = mask;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                let v = prefix[b];
                max_plus = max_plus.max(v);
                max_minus = max_minus.max(-v);
                rest &= rest - 1;
            }
            *total += (max_plus + max_minus) as i128;
        }
    });
    let mut acc = Rational::zero();
    for (mask, w) in weights.iter().enumerate() {
        if totals[mask] != 0 {
            acc += *w * Rational::from_integer(totals[mask]);
        }
    }
    Ok(-acc)
}

/// Visit every set partition of {0, …, n−1}.
fn for_each_set_partition(n: usize, visit: &mut impl FnMut(&[Vec<usize>])) {
    fn recurse(next: usize, n: usize, blocks: &mut Vec<Vec<usize>>, visit: &mut impl FnMut(&[Vec<usize>])) {
        if next == n {
            visit(blocks);
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(next);
            recurse(next + 1, n, blocks, visit);
            blocks[i].pop();
        }
        blocks.push(vec![next]);
        recurse(next + 1, n, blocks, visit);
        blocks.pop();
    }
    let mut blocks = Vec::new();
    recurse(0, n, &mut blocks, visit);
}

/// All set partitions of {0, …, n−1}.
pub fn set_partitions(n: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    for_each_set_partition(n, &mut |blocks| {
        out.push(SetPartition::new(blocks.to_vec(), n).expect("enumerated partitions are valid"));
    });
    out
}

/// Joint moment from block cumulants:
/// `E Π X_i = Σ_π Π_{B∈π} κ(X_i : i ∈ B)`.
pub fn moments_from_cumulants(n: usize, kappa: &dyn Fn(&[usize]) -> f64) -> f64 {
    let mut acc = 0.0;
    for_each_set_partition(n, &mut |blocks| {
        let mut prod = 1.0;
        for b in blocks {
            prod *= kappa(b);
        }
        acc += prod;
    });
    acc
}

/// Joint cumulant from subset moments: the partition Möbius transform with
/// weight `(|π|−1)! (−1)^{|π|−1}`.
pub fn cumulants_from_moments(n: usize, moment: &dyn Fn(&[usize]) -> f64) -> f64 {
    let mut acc = 0.0;
    for_each_set_partition(n, &mut |blocks| {
        let m = blocks.len();
        let sign = if (m - 1) % 2 == 0 { 1.0 } else { -1.0 };
        let weight = sign * factorial(m - 1) as f64;
        let mut prod = 1.0;
        for b in blocks {
            prod *= moment(b);
        }
        acc += weight * prod;
    });
    acc
}

/// Partitions of {0, …, 2l−1} with no singleton blocks and no two-element
/// block equal to a slot pair {2i, 2i+1}. These index the expansion of
/// `E Π_i (X_{2i} X_{2i+1} − E X_{2i} X_{2i+1})` into block cumulants.
pub fn centered_product_expansion(l: usize) -> Result<Vec<SetPartition>, CumulantError> {
    if l == 0 || l > MAX_CENTERED_ORDER {
        return Err(CumulantError::CenteredOrderOutOfRange {
            max: MAX_CENTERED_ORDER,
            got: l,
        });
    }
    let n = 2 * l;
    let mut out = Vec::new();
    for_each_set_partition(n, &mut |blocks| {
        for b in blocks {
            if b.len() == 1 {
                return;
            }
            if b.len() == 2 {
                let (lo, hi) = (b[0].min(b[1]), b[0].max(b[1]));
                if lo % 2 == 0 && hi == lo + 1 {
                    return;
                }
            }
        }
        out.push(SetPartition::new(blocks.to_vec(), n).expect("valid partition"));
    });
    Ok(out)
}

/// Exact centered moment `E (S_N(f) − E S_N(f))^l` for l ∈ {2, 3}, by
/// summing block-cumulant products over frequency tuples.
///
/// Slots 2i/2i+1 carry the frequencies ±k_i, so each partition contributes
/// `Π_B κ(±k : slot ∈ B)` weighted by `2^l Π_i c_{k_i}`; blocks whose
/// frequencies do not balance are pruned before any cumulant is computed.
pub fn pair_stat_moment<S: SpectralCoeffs>(
    series: &S,
    n_size: usize,
    l: usize,
) -> Result<f64, CumulantError> {
    if !(l == 2 || l == 3) {
        return Err(CumulantError::UnsupportedMomentOrder(l));
    }
    if n_size < 1 {
        return Err(CumulantError::BadMatrixSize);
    }
    let active: Vec<(i64, f64)> = (1..=series.k_max())
        .filter_map(|k| {
            let c = series.coeff(k);
            (c != 0.0).then_some((k as i64, c))
        })
        .collect();
    if active.is_empty() {
        return Ok(0.0);
    }
    let partitions = centered_product_expansion(l)?;
    let tuple_count = (active.len() as u64).pow(l as u32);
    let work = tuple_count.saturating_mul(partitions.len() as u64);
    if work > 60_000_000 {
        return Err(CumulantError::CostGuard(format!(
            "{} tuples × {} partitions",
            tuple_count,
            partitions.len()
        )));
    }

    let mut memo: HashMap<Vec<i64>, f64> = HashMap::new();
    let mut kappa_of = |vals: &mut Vec<i64>, n_size: i64| -> f64 {
        vals.sort_unstable();
        // Conjugation symmetry: canonicalize {k} vs {−k}.
        let mut negated: Vec<i64> = vals.iter().map(|k| -k).collect();
        negated.sort_unstable();
        let key = if negated < *vals { negated } else { vals.clone() };
        if let Some(&v) = memo.get(&key) {
            return v;
        }
        let v = cumulant_windowed(&key, n_size)
            .to_f64()
            .expect("cumulant fits in f64");
        memo.insert(key, v);
        v
    };

    let n_i = n_size as i64;
    let mut idx = vec![0usize; l];
    let mut total = 0.0;
    loop {
        let ks: Vec<i64> = idx.iter().map(|&i| active[i].0).collect();
        let coef: f64 = idx.iter().map(|&i| active[i].1).product();
        let mut per_tuple = 0.0;
        let mut block_vals = Vec::with_capacity(2 * l);
        for part in &partitions {
            let mut prod = 1.0;
            let mut ok = true;
            for block in part.blocks() {
                block_vals.clear();
                block_vals.extend(block.iter().map(|&s| {
                    let k = ks[s / 2];
                    if s % 2 == 0 {
                        k
                    } else {
                        -k
                    }
                }));
                if block_vals.iter().sum::<i64>() != 0 {
                    ok = false;
                    break;
                }
                let kappa = kappa_of(&mut block_vals, n_i);
                if kappa == 0.0 {
                    ok = false;
                    break;
                }
                prod *= kappa;
            }
            if ok {
                per_tuple += prod;
            }
        }
        total += coef * per_tuple;

        // Odometer over tuples.
        let mut d = 0;
        loop {
            if d == l {
                return Ok(total * (2.0f64).powi(l as i32));
            }
            idx[d] += 1;
            if idx[d] < active.len() {
                break;
            }
            idx[d] = 0;
            d += 1;
        }
    }
}

/// Signed magnitude helper for reporting exact values.
pub fn rational_to_string(r: &Rational) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest double, for reporting alongside the exact value.
pub fn rational_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(ks: &[i64], n: i64) -> FrequencyVector {
        FrequencyVector::new(ks.to_vec(), n).unwrap()
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v as i128)
    }

    #[test]
    fn lattice_count_examples() {
        // No constraints beyond 0 ≤ u ≤ N−1.
        let c = Composition::new(vec![3]).unwrap();
        assert_eq!(count_lattice(10, &c, &[1, 2, -3]).unwrap(), 10);
        // One partial sum of 3 at N = 10.
        let c = Composition::new(vec![1, 1]).unwrap();
        assert_eq!(count_lattice(10, &c, &[3, -3]).unwrap(), 7);
        // Clamped at zero.
        assert_eq!(count_lattice(5, &c, &[7, -7]).unwrap(), 0);
        // Composition length must match.
        assert!(count_lattice(5, &c, &[1, 2, 3]).is_err());
    }

    #[test]
    fn lattice_count_matches_brute_force() {
        let mut state = 0xfeed_f00d_u64;
        let mut next = |m: u64| {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % m
        };
        for _ in 0..10_000 {
            let n_vars = 1 + next(5) as usize;
            let ks: Vec<i64> = (0..n_vars).map(|_| next(25) as i64 - 12).collect();
            let n_size = 1 + next(30) as i64;
            // Random composition of n_vars.
            let mut parts = Vec::new();
            let mut left = n_vars;
            while left > 0 {
                let p = 1 + (next(left as u64) as usize);
                parts.push(p);
                left -= p;
            }
            let comp = Composition::new(parts.clone()).unwrap();
            let fast = count_lattice(n_size, &comp, &ks).unwrap();
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
            assert_eq!(fast, slow, "ks={ks:?} parts={parts:?} N={n_size}");
        }
    }

    #[test]
    fn first_order_cumulant() {
        assert_eq!(trace_cumulant(&fv(&[0], 7)), int(7));
        assert_eq!(trace_cumulant(&fv(&[3], 7)), int(0));
    }

    #[test]
    fn pair_cumulants_saturate_at_n() {
        assert_eq!(trace_cumulant(&fv(&[3, -3], 10)), int(3));
        assert_eq!(trace_cumulant(&fv(&[12, -12], 10)), int(10));
        assert_eq!(trace_cumulant(&fv(&[1, 1], 10)), int(0));
        for k in 1..=15 {
            for n in [1, 4, 9] {
                assert_eq!(trace_cumulant(&fv(&[k, -k], n)), int(k.min(n)));
            }
        }
    }

    #[test]
    fn higher_cumulants_vanish_inside_window() {
        assert_eq!(trace_cumulant(&fv(&[1, 2, -3], 10)), int(0));
        assert_eq!(trace_cumulant(&fv(&[2, -1, -1], 8)), int(0));
        assert_eq!(trace_cumulant(&fv(&[1, 1, 2, -4], 9)), int(0));
    }

    #[test]
    fn fourth_cumulant_outside_window() {
        // κ₄(7,−7,8,−8) at N = 5 equals cov(|t_7|²,|t_8|²) = |7−8|−5 = −4
        // with both κ₂ cross terms vanishing.
        assert_eq!(trace_cumulant(&fv(&[7, -7, 8, -8], 5)), int(-4));
    }

    #[test]
    fn windowed_shortcut_agrees_with_raw_sum() {
        let mut state = 99u64;
        let mut next = |m: u64| {
            state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
            (state >> 33) % m
        };
        for _ in 0..300 {
            let n = 3 + next(2) as usize;
            let mut ks: Vec<i64> = (0..n - 1).map(|_| next(13) as i64 - 6).collect();
            let last = -ks.iter().sum::<i64>();
            ks.push(last);
            if ks.contains(&0) {
                continue;
            }
            let n_size = 1 + next(12) as i64;
            assert_eq!(
                cumulant_windowed(&ks, n_size),
                cumulant_sum(&ks, n_size),
                "ks={ks:?} N={n_size}"
            );
        }
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            FrequencyVector::new(vec![], 5),
            Err(CumulantError::OrderOutOfRange { .. })
        ));
        assert!(matches!(
            FrequencyVector::new(vec![1; 9], 5),
            Err(CumulantError::OrderOutOfRange { .. })
        ));
        assert!(matches!(
            FrequencyVector::new(vec![1, 0], 5),
            Err(CumulantError::ZeroFrequency)
        ));
        assert!(matches!(
            FrequencyVector::new(vec![20_000], 5),
            Err(CumulantError::FrequencyTooLarge { .. })
        ));
        assert!(matches!(
            FrequencyVector::new(vec![1], 0),
            Err(CumulantError::BadMatrixSize)
        ));
        assert!(matches!(g_function(&[1, 2]), Err(CumulantError::NonzeroFrequencySum)));
    }

    #[test]
    fn g_function_pair_values() {
        for k in 1..=20i64 {
            assert_eq!(g_function(&[k, -k]).unwrap(), int(k), "G({k},−{k})");
        }
        assert_eq!(g_function(&[0, 0]).unwrap(), int(0));
    }

    #[test]
    fn g_function_vanishes_beyond_pairs() {
        assert_eq!(g_function(&[1, 2, -3]).unwrap(), int(0));
        assert_eq!(g_function(&[2, 3, -1, -4]).unwrap(), int(0));
        assert_eq!(g_function(&[5, -2, -2, -1]).unwrap(), int(0));
        assert_eq!(g_function(&[1, 1, 1, -1, -2]).unwrap(), int(0));
    }

    #[test]
    fn moment_cumulant_hand_cases() {
        // n = 1: the moment is the cumulant.
        let m = moments_from_cumulants(1, &|_b| 3.5);
        assert_eq!(m, 3.5);
        // n = 2: E X₁X₂ = κ₁κ₁ + κ₂.
        let kappa = |b: &[usize]| match b.len() {
            1 => 2.0,
            2 => 0.7,
            _ => unreachable!(),
        };
        assert!((moments_from_cumulants(2, &kappa) - (4.0 + 0.7)).abs() < 1e-15);
        // Centered pair: cumulants_from_moments gives the covariance.
        let moment = |b: &[usize]| match b.len() {
            1 => 0.0,
            2 => 1.25,
            _ => unreachable!(),
        };
        assert!((cumulants_from_moments(2, &moment) - 1.25).abs() < 1e-15);
    }

    #[test]
    fn third_cumulant_of_toy_distribution() {
        // Three named random variables on a 3-point sample space; the
        // definition-based third cumulant is the oracle.
        let probs = [0.2, 0.5, 0.3];
        let x = [[1.0, 0.0, 2.0], [0.0, 1.0, 1.0], [2.0, 2.0, 0.0]];
        let moment = |b: &[usize]| -> f64 {
            (0..3)
                .map(|w| probs[w] * b.iter().map(|&i| x[i][w]).product::<f64>())
                .sum()
        };
        let by_transform = cumulants_from_moments(3, &moment);
        let e = |i: usize| moment(&[i]);
        let e2 = |i: usize, j: usize| moment(&[i.min(j), i.max(j)]);
        let oracle = moment(&[0, 1, 2])
            - e(0) * e2(1, 2)
            - e(1) * e2(0, 2)
            - e(2) * e2(0, 1)
            + 2.0 * e(0) * e(1) * e(2);
        assert!((by_transform - oracle).abs() < 1e-14);
    }

    #[test]
    fn moment_cumulant_round_trip() {
        // Random block-indexed cumulants; push through moments and back.
        for n in 1..=6usize {
            let kappa = |b: &[usize]| -> f64 {
                let code = b.iter().fold(0u64, |acc, &x| acc * 31 + x as u64 + 1);
                0.3 + ((code * 2654435761) % 1000) as f64 / 500.0 - 1.0
            };
            let recovered = cumulants_from_moments(n, &|b: &[usize]| {
                moments_from_cumulants(b.len(), &|sub: &[usize]| {
                    let lifted: Vec<usize> = sub.iter().map(|&i| b[i]).collect();
                    kappa(&lifted)
                })
            });
            let direct = kappa(&(0..n).collect::<Vec<_>>());
            assert!(
                (recovered - direct).abs() < 1e-12 * (1.0 + direct.abs()),
                "n = {n}: {recovered} vs {direct}"
            );
        }
    }

    #[test]
    fn centered_expansion_small_orders() {
        assert!(centered_product_expansion(1).unwrap().is_empty());
        let l2 = centered_product_expansion(2).unwrap();
        let as_sets: Vec<Vec<Vec<usize>>> =
            l2.iter().map(|p| p.blocks().to_vec()).collect();
        assert_eq!(l2.len(), 3);
        assert!(as_sets.contains(&vec![vec![0, 2], vec![1, 3]]));
        assert!(as_sets.contains(&vec![vec![0, 3], vec![1, 2]]));
        assert!(as_sets.contains(&vec![vec![0, 1, 2, 3]]));
        assert!(centered_product_expansion(0).is_err());
        assert!(centered_product_expansion(7).is_err());
    }

    #[test]
    fn third_moment_of_two_cos_is_flat_in_n() {
        // f = 2cosθ: E(S−ES)³ = 8·E(|t₁|²−1)³ = 16 once N ≥ 6.
        let series = crate::testfn::circle_coeffs(
            &crate::testfn::FunctionSpec::Trigpoly {
                coeffs: vec![(1, 1.0)],
            },
            4,
        )
        .unwrap();
        for n in [8usize, 16, 32] {
            let m3 = pair_stat_moment(&series, n, 3).unwrap();
            assert!((m3 - 16.0).abs() < 1e-10, "N = {n}: {m3}");
        }
    }

    #[test]
    fn moment_cost_guard_trips_on_wide_grids() {
        let coeffs: Vec<f64> = (0..2000).map(|k| if k == 0 { 0.0 } else { 1.0 }).collect();
        let series = crate::testfn::CircleSeries::from_coeffs(
            coeffs,
            None,
            crate::testfn::SupportBound::Truncated(1999),
        );
        assert!(matches!(
            pair_stat_moment(&series, 8, 3),
            Err(CumulantError::CostGuard(_))
        ));
    }

    #[test]
    fn moment_order_guard() {
        let series = crate::testfn::circle_coeffs(
            &crate::testfn::FunctionSpec::Trigpoly {
                coeffs: vec![(1, 1.0)],
            },
            4,
        )
        .unwrap();
        assert!(matches!(
            pair_stat_moment(&series, 8, 4),
            Err(CumulantError::UnsupportedMomentOrder(4))
        ));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(rational_to_string(&int(-4)), "-4");
        assert_eq!(rational_to_string(&Rational::new(3, 4)), "3/4");
    }
}
