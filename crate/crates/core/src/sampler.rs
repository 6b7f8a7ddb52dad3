//! Circular β-ensemble sampling.
//!
//! `sample_cbeta` is the production path for every β: independent
//! Verblunsky coefficients `α_k = r_k e^{iψ_k}` with `ψ_k` uniform and
//! `r_k² ~ Beta(1, (β/2)(n−k−1))` for `k = 0..n−2`, `α_{n−1}` uniform on
//! the unit circle, assembled into the five-diagonal CMV unitary whose
//! eigenphases carry the ensemble law. `sample_cue` is an independent
//! Haar-measure path (complex Ginibre → QR → diagonal-phase correction)
//! used to cross-check the β = 2 case.
//!
//! Both paths run a dense eigensolver and reject draws whose eigenvalues
//! drift off the unit circle by more than [`UNIT_MODULUS_TOL`].

use crate::linalg::{self, CMatrix};
use crate::seed::{self, SeedSpec};
use num_complex::Complex64;
use rand_chacha::rand_core::RngCore;
use thiserror::Error;

/// Unit-modulus residual allowed for eigenvalues at desk scale (n ≤ 512):
/// far above eigensolver rounding, far below any statistic's noise.
pub const UNIT_MODULUS_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum SampleError {
    #[error("matrix size must be at least 1")]
    EmptyMatrix,
    #[error("β must be positive, got {0}")]
    NonPositiveBeta(f64),
    #[error("eigensolver did not converge at n = {0}")]
    EigenFailure(usize),
    #[error("eigenvalue modulus residual {residual:.3e} exceeds {tol:.1e} at n = {n}")]
    EigenResidual { residual: f64, tol: f64, n: usize },
    #[error("phases must be finite values in [0, 2π)")]
    InvalidPhases,
}

/// Ensemble inverse temperature β > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParam(f64);

impl BetaParam {
    pub fn new(beta: f64) -> Result<Self, SampleError> {
        if beta > 0.0 && beta.is_finite() {
            Ok(Self(beta))
        } else {
            Err(SampleError::NonPositiveBeta(beta))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// One draw of N eigenvalue angles, stored sorted ascending in [0, 2π).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseConfiguration {
    phases: Vec<f64>,
}

impl PhaseConfiguration {
    pub fn new(mut phases: Vec<f64>) -> Result<Self, SampleError> {
        if phases.is_empty() {
            return Err(SampleError::EmptyMatrix);
        }
        if phases
            .iter()
            .any(|&p| !p.is_finite() || !(0.0..std::f64::consts::TAU).contains(&p))
        {
            return Err(SampleError::InvalidPhases);
        }
        phases.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { phases })
    }

    pub fn n(&self) -> usize {
        self.phases.len()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    /// The configuration rotated by φ, reduced mod 2π and re-sorted.
    pub fn rotated(&self, phi: f64) -> Self {
        let rotated = self
            .phases
            .iter()
            .map(|&th| {
                let r = (th + phi).rem_euclid(std::f64::consts::TAU);
                if r >= std::f64::consts::TAU {
                    0.0
                } else {
                    r
                }
            })
            .collect();
        Self::new(rotated).expect("rotation preserves validity")
    }

    /// Mirror image θ ↦ (2π − θ) mod 2π.
    pub fn reflected(&self) -> Self {
        let refl = self
            .phases
            .iter()
            .map(|&th| {
                let r = (std::f64::consts::TAU - th).rem_euclid(std::f64::consts::TAU);
                if r >= std::f64::consts::TAU {
                    0.0
                } else {
                    r
                }
            })
            .collect();
        Self::new(refl).expect("reflection preserves validity")
    }
}

/// Standard complex Gaussian (E|z|² = 1) from two uniforms.
fn complex_gaussian(rng: &mut impl RngCore) -> Complex64 {
    let amp = (-seed::uniform_open01(rng).ln()).sqrt();
    Complex64::from_polar(amp, seed::uniform_phase(rng))
}

/// Eigenphases of a Haar-distributed n×n unitary.
///
/// Ginibre matrix → Householder QR → multiply each column of Q by the phase
/// of the matching diagonal entry of R, which exactly restores Haar measure.
pub fn sample_cue(n: usize, seed: &SeedSpec) -> Result<PhaseConfiguration, SampleError> {
    if n == 0 {
        return Err(SampleError::EmptyMatrix);
    }
    let mut rng = seed.rng();
    let mut a = CMatrix::zeros(n);
    for j in 0..n {
        for i in 0..n {
            a[(i, j)] = complex_gaussian(&mut rng);
        }
    }
    let mut q = linalg::householder_qr(&mut a);
    for j in 0..n {
        let r_jj = a[(j, j)];
        let d = if r_jj.norm() == 0.0 {
            Complex64::ONE
        } else {
            r_jj / r_jj.norm()
        };
        for i in 0..n {
            let entry = q[(i, j)];
            q[(i, j)] = entry * d;
        }
    }
    phases_from_unitary(q)
}

/// Eigenphases of one CβE draw through the CMV matrix.
pub fn sample_cbeta(
    n: usize,
    beta: BetaParam,
    seed: &SeedSpec,
) -> Result<PhaseConfiguration, SampleError> {
    if n == 0 {
        return Err(SampleError::EmptyMatrix);
    }
    let mut rng = seed.rng();
    let alphas = draw_verblunsky(n, beta.value(), &mut rng);
    phases_from_unitary(cmv_matrix(&alphas))
}

/// Independent Verblunsky coefficients for CβE(n): per index the phase is
/// drawn first, then the modulus (inverse-CDF Beta(1, b), so the stream
/// layout is fixed).
fn draw_verblunsky(n: usize, beta: f64, rng: &mut impl RngCore) -> Vec<Complex64> {
    let mut alphas = Vec::with_capacity(n);
    for k in 0..n {
        let psi = seed::uniform_phase(rng);
        if k + 1 == n {
            alphas.push(Complex64::from_polar(1.0, psi));
        } else {
            let b = 0.5 * beta * (n - 1 - k) as f64;
            let v = seed::uniform_open01(rng);
            let r_sq = (1.0 - v.powf(1.0 / b)).clamp(0.0, 1.0);
            alphas.push(Complex64::from_polar(r_sq.sqrt(), psi));
        }
    }
    alphas
}

/// The finite CMV matrix C = L·M of the given Verblunsky coefficients
/// (|α_{n−1}| = 1). L carries the even-index 2×2 blocks, M the odd ones
/// plus a leading scalar 1; whichever factor would run past the dimension
/// ends in the scalar block (ᾱ_{n−1}).
fn cmv_matrix(alphas: &[Complex64]) -> CMatrix {
    let n = alphas.len();
    let rho = |k: usize| (1.0 - alphas[k].norm_sqr()).max(0.0).sqrt();

    // Entry lists (row, col, value) for the two factors.
    let mut l_entries: Vec<(usize, usize, Complex64)> = Vec::with_capacity(2 * n);
    let mut m_rows: Vec<Vec<(usize, Complex64)>> = vec![Vec::with_capacity(2); n];

    let push_block = |entries: &mut dyn FnMut(usize, usize, Complex64), j: usize| {
        let a = alphas[j];
        let r = rho(j);
        entries(j, j, a.conj());
        entries(j, j + 1, Complex64::new(r, 0.0));
        entries(j + 1, j, Complex64::new(r, 0.0));
        entries(j + 1, j + 1, -a);
    };

    {
        let mut put_l = |i: usize, j: usize, v: Complex64| l_entries.push((i, j, v));
        let mut j = 0;
        while j + 1 < n {
            push_block(&mut put_l, j);
            j += 2;
        }
        if j == n - 1 {
            put_l(n - 1, n - 1, alphas[n - 1].conj());
        }
    }
    {
        let mut put_m = |i: usize, j: usize, v: Complex64| m_rows[i].push((j, v));
        put_m(0, 0, Complex64::ONE);
        let mut j = 1;
        while j + 1 < n {
            push_block(&mut put_m, j);
            j += 2;
        }
        if j == n - 1 {
            put_m(n - 1, n - 1, alphas[n - 1].conj());
        }
    }

    let mut c = CMatrix::zeros(n);
    for &(i, k, lv) in &l_entries {
        for &(j, mv) in &m_rows[k] {
            let entry = c[(i, j)];
            c[(i, j)] = entry + lv * mv;
        }
    }
    c
}

fn phases_from_unitary(m: CMatrix) -> Result<PhaseConfiguration, SampleError> {
    let n = m.n;
    let eigen = linalg::eigenvalues(m).ok_or(SampleError::EigenFailure(n))?;
    let mut residual: f64 = 0.0;
    let mut phases = Vec::with_capacity(n);
    for ev in eigen {
        residual = residual.max((ev.norm() - 1.0).abs());
        let mut th = ev.arg();
        if th < 0.0 {
            th += std::f64::consts::TAU;
        }
        if th >= std::f64::consts::TAU {
            th = 0.0;
        }
        phases.push(th);
    }
    if residual > UNIT_MODULUS_TOL {
        return Err(SampleError::EigenResidual {
            residual,
            tol: UNIT_MODULUS_TOL,
            n,
        });
    }
    PhaseConfiguration::new(phases)
}
