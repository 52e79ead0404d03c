//! Derivative and small-SNR analysis of the BPSK rate `R(γ)`.
//!
//! Writing `R(γ) = 1 - E[g(L)]` with `g(x) = log2(1 + e^{-x})` and
//! `L ~ N(4γ, 8γ)`, differentiating under the integral gives
//!
//! ```text
//! R'(γ) = E[g] + E[g] / (2γ) - E[L² g] / (16γ²)
//! ```
//!
//! The last two terms grow like `1/γ` and cancel, so below
//! [`DERIVATIVE_CROSSOVER`] the derivative is taken by central differences
//! of `R` instead.

use std::f64::consts::LN_2;

use crate::modulation::{bpsk_llr_moments, log2_1p_exp_neg, mi_bpsk, softplus_moment};
use crate::quadrature::{
    integrate_density_functional, AffineMap, QuadratureMethod, QuadratureSpec,
};
use crate::{Error, Result, LOG2_E};

/// Below this SNR the three-term derivative is replaced by finite differences.
pub const DERIVATIVE_CROSSOVER: f64 = 1e-2;

/// SNRs feeding the Richardson extrapolation towards `γ = 0`.
pub const LIMIT_GAMMAS: [f64; 3] = [1e-2, 1e-3, 1e-4];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeReport {
    pub gamma: f64,
    pub analytic_value: f64,
    pub finite_diff_value: f64,
    pub step: f64,
}

impl DerivativeReport {
    pub fn tolerance(&self) -> f64 {
        1e-4_f64.max(1e-3 * self.analytic_value.abs())
    }

    pub fn agrees(&self) -> bool {
        (self.analytic_value - self.finite_diff_value).abs() <= self.tolerance()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivativeMethod {
    Analytic,
    FiniteDifference,
}

impl DerivativeMethod {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Analytic => "analytic",
            Self::FiniteDifference => "finite_difference",
        }
    }
}

/// `E[L^k g(L)]` for the BPSK log-likelihood ratio at SNR `gamma`.
fn llr_expectation(k: u32, gamma: f64, q: &QuadratureSpec) -> Result<f64> {
    let (mean, std) = bpsk_llr_moments(gamma);
    let h = |x: f64| x.powi(k as i32) * log2_1p_exp_neg(x);
    match q.method {
        QuadratureMethod::HermiteGaussian => Ok(softplus_moment(k, mean, std, q.order)? / LN_2),
        QuadratureMethod::AdaptiveInterval => {
            let norm = 1.0 / ((2.0 * std::f64::consts::PI).sqrt() * std);
            integrate_density_functional(
                |x| {
                    let z = (x - mean) / std;
                    norm * (-0.5 * z * z).exp() * h(x)
                },
                q,
                AffineMap::new(mean, std)?,
            )
        }
    }
}

/// `dR/dγ` from the three-integral expression.
pub fn mi_bpsk_derivative(gamma: f64, q: &QuadratureSpec) -> Result<f64> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "the derivative expression is singular at γ={gamma}; \
             use derivative_limit_at_zero for the γ → 0 limit"
        )));
    }
    q.validate()?;
    let e0 = llr_expectation(0, gamma, q)?;
    let e2 = llr_expectation(2, gamma, q)?;
    Ok(e0 + e0 / (2.0 * gamma) - e2 / (16.0 * gamma * gamma))
}

pub fn finite_difference_step(gamma: f64) -> f64 {
    1e-6_f64.max(1e-3 * gamma)
}

/// Central difference of [`mi_bpsk`] with step [`finite_difference_step`].
pub fn mi_bpsk_finite_difference(gamma: f64, q: &QuadratureSpec) -> Result<f64> {
    let h = finite_difference_step(gamma);
    if !(gamma > h) {
        return Err(Error::InvalidParameter(format!(
            "central difference at γ={gamma} would step below zero"
        )));
    }
    Ok((mi_bpsk(gamma + h, q)? - mi_bpsk(gamma - h, q)?) / (2.0 * h))
}

pub fn derivative_report(gamma: f64, q: &QuadratureSpec) -> Result<DerivativeReport> {
    Ok(DerivativeReport {
        gamma,
        analytic_value: mi_bpsk_derivative(gamma, q)?,
        finite_diff_value: mi_bpsk_finite_difference(gamma, q)?,
        step: finite_difference_step(gamma),
    })
}

/// `dR/dγ` using the analytic form at or above the crossover and central
/// differences below it.
pub fn derivative(gamma: f64, q: &QuadratureSpec) -> Result<(f64, DerivativeMethod)> {
    if gamma >= DERIVATIVE_CROSSOVER {
        Ok((mi_bpsk_derivative(gamma, q)?, DerivativeMethod::Analytic))
    } else {
        Ok((
            mi_bpsk_finite_difference(gamma, q)?,
            DerivativeMethod::FiniteDifference,
        ))
    }
}

/// `dR/dγ` at `γ = 0` by Richardson extrapolation over [`LIMIT_GAMMAS`].
///
/// The samples are a geometric sequence with ratio 10, so two elimination
/// passes remove the `O(γ)` and `O(γ²)` terms.
pub fn derivative_limit_at_zero(q: &QuadratureSpec) -> Result<f64> {
    let samples = LIMIT_GAMMAS
        .iter()
        .map(|&g| derivative(g, q).map(|(d, _)| d))
        .collect::<Result<Vec<_>>>()?;

    let diffs = [
        (samples[1] - samples[0]).abs(),
        (samples[2] - samples[1]).abs(),
    ];
    if !(diffs[1] < diffs[0]) {
        return Err(Error::Extrapolation(format!(
            "derivative samples {samples:?} at γ={LIMIT_GAMMAS:?} are not converging"
        )));
    }

    let ratio = LIMIT_GAMMAS[0] / LIMIT_GAMMAS[1];
    let first: Vec<f64> = samples
        .windows(2)
        .map(|w| (ratio * w[1] - w[0]) / (ratio - 1.0))
        .collect();
    let r2 = ratio * ratio;
    let limit = (r2 * first[1] - first[0]) / (r2 - 1.0);
    if !limit.is_finite() || (limit - first[1]).abs() > (first[1] - samples[2]).abs().max(1e-12) {
        return Err(Error::Extrapolation(format!(
            "samples {samples:?}, first pass {first:?}, second pass {limit}"
        )));
    }
    Ok(limit)
}

/// First-order Taylor approximation `log2(e)·γ` of the BPSK rate.
pub fn taylor_rate_approx(gamma: f64) -> f64 {
    LOG2_E * gamma
}
