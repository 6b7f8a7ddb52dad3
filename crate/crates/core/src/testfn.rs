//! Even real test functions in the two Fourier conventions.
//!
//! Global-regime functions live on the circle and are described by their
//! Fourier series `f̂(k) = (1/2π) ∫ f(x) e^{-ikx} dx`. Scaled-regime
//! functions live on the real line and are described by the transform
//! `f̂(t) = (1/√(2π)) ∫ f(x) e^{-itx} dx`; periodizing `f(L_N ·)` turns that
//! transform into circle coefficients `c_k = f̂(k/L_N) / (√(2π) L_N)`.

use crate::quad;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FunctionError {
    #[error("trig polynomial support {support} exceeds requested k_max {k_max}")]
    SupportExceedsKmax { support: usize, k_max: usize },
    #[error("{0} has no circle Fourier series")]
    NotACircleKind(&'static str),
    #[error("{0} has no real-line Fourier transform")]
    NotALineKind(&'static str),
    #[error("log-sine evaluation is singular at multiples of 2π")]
    SingularPoint,
    #[error("periodization overlap: support radius {r} is not below π·{l_n}")]
    PeriodizationOverlap { r: f64, l_n: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Declarative description of a test function; this is the JSON surface
/// consumed by the harness.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FunctionSpec {
    /// Even trig polynomial `f(x) = a_0 + 2 Σ_k a_k cos(kx)`, given as
    /// `(k, f̂(k))` pairs.
    Trigpoly { coeffs: Vec<(u32, f64)> },
    /// `f(θ) = (1/2) ln |2 sin(θ/2)|`.
    Logsine,
    /// Gaussian of the given width, taken smoothly to zero at the support
    /// radius (default 5 widths).
    GaussianBump {
        width: f64,
        #[serde(default)]
        support_radius: Option<f64>,
    },
    /// Even transform sampled on the uniform grid `t_j = j · grid_step`.
    Table {
        grid_step: f64,
        values: Vec<f64>,
        #[serde(default)]
        support_radius: Option<f64>,
    },
}

impl FunctionSpec {
    pub fn kind_name(&self) -> &'static str {
        match self {
            FunctionSpec::Trigpoly { .. } => "trigpoly",
            FunctionSpec::Logsine => "logsine",
            FunctionSpec::GaussianBump { .. } => "gaussian_bump",
            FunctionSpec::Table { .. } => "table",
        }
    }

    pub fn is_circle_kind(&self) -> bool {
        matches!(self, FunctionSpec::Trigpoly { .. } | FunctionSpec::Logsine)
    }

    pub fn is_line_kind(&self) -> bool {
        !self.is_circle_kind()
    }
}

/// How far a coefficient sequence is trusted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportBound {
    /// All coefficients beyond this index are exactly zero.
    Finite(usize),
    /// Coefficients were materialized up to this index; the tail is not zero.
    Truncated(usize),
}

/// Symmetric real Fourier coefficients of an even circle function
/// (`f̂(-k) = f̂(k)` is implied and not stored).
#[derive(Debug, Clone)]
pub struct CircleSeries {
    coeffs: Vec<f64>,
    f_at_zero: Option<f64>,
    support: SupportBound,
}

impl CircleSeries {
    pub fn from_coeffs(coeffs: Vec<f64>, f_at_zero: Option<f64>, support: SupportBound) -> Self {
        Self {
            coeffs,
            f_at_zero,
            support,
        }
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn k_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn support(&self) -> SupportBound {
        self.support
    }

    pub fn f_at_zero(&self) -> Option<f64> {
        self.f_at_zero
    }
}

/// Circle Fourier coefficients of a circle-kind spec, materialized up to
/// `k_max`.
///
/// Trig polynomials are exact (and trimmed to their true support); the
/// log-sine closed form is `f̂(0) = 0`, `f̂(k) = -1/(4|k|)`.
pub fn circle_coeffs(spec: &FunctionSpec, k_max: usize) -> Result<CircleSeries, FunctionError> {
    match spec {
        FunctionSpec::Trigpoly { coeffs } => {
            let support = coeffs
                .iter()
                .filter(|(_, a)| *a != 0.0)
                .map(|(k, _)| *k as usize)
                .max()
                .unwrap_or(0);
            if support > k_max {
                return Err(FunctionError::SupportExceedsKmax { support, k_max });
            }
            let mut c = vec![0.0; support + 1];
            for (k, a) in coeffs {
                c[*k as usize] += *a;
            }
            let f0 = c[0] + 2.0 * c[1..].iter().sum::<f64>();
            Ok(CircleSeries::from_coeffs(
                c,
                Some(f0),
                SupportBound::Finite(support),
            ))
        }
        FunctionSpec::Logsine => {
            let mut c = vec![0.0; k_max + 1];
            for (k, ck) in c.iter_mut().enumerate().skip(1) {
                *ck = -1.0 / (4.0 * k as f64);
            }
            // f(0) = -∞: usable only where the value at zero is not needed.
            Ok(CircleSeries::from_coeffs(
                c,
                None,
                SupportBound::Truncated(k_max),
            ))
        }
        other => Err(FunctionError::NotACircleKind(other.kind_name())),
    }
}

/// Fourier transform of an even, compactly supported real-line function.
#[derive(Clone)]
pub struct LineTransform {
    transform: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    support_radius: f64,
    transform_radius: f64,
    f_at_zero: f64,
}

impl std::fmt::Debug for LineTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LineTransform")
            .field("support_radius", &self.support_radius)
            .field("transform_radius", &self.transform_radius)
            .field("f_at_zero", &self.f_at_zero)
            .finish()
    }
}

impl LineTransform {
    /// Build the transform of a line-kind spec.
    pub fn from_spec(spec: &FunctionSpec) -> Result<Self, FunctionError> {
        match spec {
            FunctionSpec::GaussianBump {
                width,
                support_radius,
            } => {
                let w = *width;
                if w.is_nan() || w <= 0.0 {
                    return Err(FunctionError::InvalidParameter(
                        "gaussian_bump width must be positive".into(),
                    ));
                }
                let r = support_radius.unwrap_or(5.0 * w);
                if r.is_nan() || r <= 0.0 {
                    return Err(FunctionError::InvalidParameter(
                        "gaussian_bump support radius must be positive".into(),
                    ));
                }
                // Fixed Gauss-Legendre rule on [0, R]; the integrand
                // f(x) cos(tx) stays mildly oscillatory over the radii we
                // trust (t ≤ 12/w), so 256 nodes reach machine accuracy.
                let (nodes, weights) = quad::gauss_legendre_nodes(256);
                let half = 0.5 * r;
                let samples: Vec<(f64, f64)> = nodes
                    .iter()
                    .zip(&weights)
                    .map(|(x, wt)| {
                        let xx = half + half * x;
                        (xx, wt * half * bump_value(xx, w, r))
                    })
                    .collect();
                let norm = (2.0 / std::f64::consts::PI).sqrt();
                let transform = move |t: f64| {
                    norm * samples
                        .iter()
                        .map(|(x, wf)| wf * (t * x).cos())
                        .sum::<f64>()
                };
                Ok(Self {
                    transform: Arc::new(transform),
                    support_radius: r,
                    transform_radius: 12.0 / w,
                    f_at_zero: 1.0,
                })
            }
            FunctionSpec::Table {
                grid_step,
                values,
                support_radius,
            } => {
                let h = *grid_step;
                if h.is_nan() || h <= 0.0 || values.len() < 2 {
                    return Err(FunctionError::InvalidParameter(
                        "table needs a positive grid step and at least two values".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(FunctionError::InvalidParameter(
                        "table values must be finite".into(),
                    ));
                }
                let vals = values.clone();
                let t_max = h * (vals.len() - 1) as f64;
                let transform = move |t: f64| {
                    let t = t.abs();
                    if t >= t_max {
                        return 0.0;
                    }
                    let pos = t / h;
                    let j = pos.floor() as usize;
                    let frac = pos - j as f64;
                    vals[j] * (1.0 - frac) + vals[j + 1] * frac
                };
                // f(0) = (1/√(2π)) ∫ f̂, trapezoid over the even extension.
                let mut integral = 0.5 * (values[0] + values[values.len() - 1]);
                integral += values[1..values.len() - 1].iter().sum::<f64>();
                let f0 = 2.0 * h * integral / std::f64::consts::TAU.sqrt();
                Ok(Self {
                    transform: Arc::new(transform),
                    support_radius: support_radius.unwrap_or(std::f64::consts::PI),
                    transform_radius: t_max,
                    f_at_zero: f0,
                })
            }
            other => Err(FunctionError::NotALineKind(other.kind_name())),
        }
    }

    /// Build directly from a callable transform.
    pub fn from_parts(
        transform: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        support_radius: f64,
        transform_radius: f64,
        f_at_zero: f64,
    ) -> Self {
        Self {
            transform,
            support_radius,
            transform_radius,
            f_at_zero,
        }
    }

    /// `f̂(t)`; even by construction.
    pub fn transform(&self, t: f64) -> f64 {
        (self.transform)(t.abs())
    }

    /// Radius of the spatial support of `f`.
    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// Radius beyond which the transform is treated as negligible.
    pub fn transform_radius(&self) -> f64 {
        self.transform_radius
    }

    pub fn f_at_zero(&self) -> f64 {
        self.f_at_zero
    }

    /// Coefficient count covering the transform at scale `l_n`.
    pub fn default_k_max(&self, l_n: f64) -> usize {
        (self.transform_radius * l_n).ceil() as usize
    }

    /// Numerical check that `|f̂|(1 + t²)` is integrable on the trusted
    /// grid; returns the integral value.
    pub fn integrability_weight(&self) -> f64 {
        let f = |t: f64| self.transform(t).abs() * (1.0 + t * t);
        2.0 * quad::adaptive_simpson(&f, 0.0, self.transform_radius, 1e-9)
    }
}

fn bump_value(x: f64, width: f64, radius: f64) -> f64 {
    let u = x.abs() / radius;
    if u >= 1.0 {
        return 0.0;
    }
    let gauss = (-x * x / (2.0 * width * width)).exp();
    gauss * smooth_cutoff(u)
}

/// C^∞ cutoff: 1 on [0, 0.6], 0 from 1 on, smooth in between.
fn smooth_cutoff(u: f64) -> f64 {
    if u <= 0.6 {
        1.0
    } else if u >= 1.0 {
        0.0
    } else {
        let s = (u - 0.6) / 0.4;
        let q = |t: f64| if t > 0.0 { (-1.0 / t).exp() } else { 0.0 };
        q(1.0 - s) / (q(1.0 - s) + q(s))
    }
}

/// Circle coefficients of the periodized scaled function `f(L_N ·)`:
/// `c_k = f̂(k/L_N) / (√(2π) L_N)`.
#[derive(Debug, Clone)]
pub struct ScaledSeries {
    l_n: f64,
    coeffs: Vec<f64>,
    f_at_zero: f64,
    base_support_radius: f64,
}

impl ScaledSeries {
    pub fn l_n(&self) -> f64 {
        self.l_n
    }

    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn k_max(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Value of the scaled function at 0 (equals the base `f(0)`).
    pub fn f_at_zero(&self) -> f64 {
        self.f_at_zero
    }

    pub fn base_support_radius(&self) -> f64 {
        self.base_support_radius
    }
}

/// Extract scaled circle coefficients, rejecting scales where the
/// periodized copies of the support would overlap.
pub fn scaled_coeffs(
    lt: &LineTransform,
    l_n: f64,
    k_max: usize,
) -> Result<ScaledSeries, FunctionError> {
    if l_n.is_nan() || l_n <= 0.0 {
        return Err(FunctionError::InvalidParameter(
            "scale l_n must be positive".into(),
        ));
    }
    if lt.support_radius >= std::f64::consts::PI * l_n {
        return Err(FunctionError::PeriodizationOverlap {
            r: lt.support_radius,
            l_n,
        });
    }
    let norm = 1.0 / (std::f64::consts::TAU.sqrt() * l_n);
    let coeffs = (0..=k_max)
        .map(|k| norm * lt.transform(k as f64 / l_n))
        .collect();
    Ok(ScaledSeries {
        l_n,
        coeffs,
        f_at_zero: lt.f_at_zero,
        base_support_radius: lt.support_radius,
    })
}

/// Uniform view over circle and scaled coefficient sequences; this is what
/// the spectral pair-sum identity and the exact formulas consume.
pub trait SpectralCoeffs {
    fn coeff(&self, k: usize) -> f64;
    fn k_max(&self) -> usize;
    /// `f(0)` when finite.
    fn value_at_zero(&self) -> Option<f64>;
    /// The scale `L_N` behind this series (1 for plain circle series).
    fn scale(&self) -> f64;
    /// Whether coefficients beyond `k_max` are exactly zero.
    fn finite_support(&self) -> bool;
}

impl SpectralCoeffs for CircleSeries {
    fn coeff(&self, k: usize) -> f64 {
        CircleSeries::coeff(self, k)
    }
    fn k_max(&self) -> usize {
        CircleSeries::k_max(self)
    }
    fn value_at_zero(&self) -> Option<f64> {
        self.f_at_zero
    }
    fn scale(&self) -> f64 {
        1.0
    }
    fn finite_support(&self) -> bool {
        matches!(self.support, SupportBound::Finite(_))
    }
}

impl SpectralCoeffs for ScaledSeries {
    fn coeff(&self, k: usize) -> f64 {
        ScaledSeries::coeff(self, k)
    }
    fn k_max(&self) -> usize {
        ScaledSeries::k_max(self)
    }
    fn value_at_zero(&self) -> Option<f64> {
        Some(self.f_at_zero)
    }
    fn scale(&self) -> f64 {
        self.l_n
    }
    fn finite_support(&self) -> bool {
        false
    }
}

/// Pointwise evaluation. Circle kinds interpret `x` mod 2π; line kinds
/// vanish outside their support.
pub fn eval_function(spec: &FunctionSpec, x: f64) -> Result<f64, FunctionError> {
    if !x.is_finite() {
        return Err(FunctionError::InvalidParameter(
            "evaluation point must be finite".into(),
        ));
    }
    match spec {
        FunctionSpec::Trigpoly { coeffs } => {
            let mut v = 0.0;
            for (k, a) in coeffs {
                if *k == 0 {
                    v += a;
                } else {
                    v += 2.0 * a * (*k as f64 * x).cos();
                }
            }
            Ok(v)
        }
        FunctionSpec::Logsine => {
            let r = x.rem_euclid(std::f64::consts::TAU);
            let s = (0.5 * r).sin();
            if s == 0.0 {
                return Err(FunctionError::SingularPoint);
            }
            Ok(0.5 * (2.0 * s.abs()).ln())
        }
        FunctionSpec::GaussianBump {
            width,
            support_radius,
        } => {
            let r = support_radius.unwrap_or(5.0 * width);
            Ok(bump_value(x, *width, r))
        }
        FunctionSpec::Table { .. } => {
            let lt = LineTransform::from_spec(spec)?;
            if x.abs() > lt.support_radius {
                return Ok(0.0);
            }
            // Inverse transform by trapezoid over the stored grid.
            if let FunctionSpec::Table {
                grid_step, values, ..
            } = spec
            {
                let h = *grid_step;
                let m = values.len();
                let mut acc = 0.5 * (values[0] + values[m - 1] * ((m - 1) as f64 * h * x).cos());
                for (j, v) in values.iter().enumerate().take(m - 1).skip(1) {
                    acc += v * (j as f64 * h * x).cos();
                }
                Ok(2.0 * h * acc / std::f64::consts::TAU.sqrt())
            } else {
                unreachable!()
            }
        }
    }
}
