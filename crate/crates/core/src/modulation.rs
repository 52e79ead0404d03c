//! Finite-alphabet constellations over AWGN.
//!
//! Every named scheme (BPSK, QPSK, 8PSK, 4ASK) is a complex-baseband alphabet
//! with unit average energy observed in circularly symmetric complex noise of
//! total power `sigma2`. Under that convention the linear SNR is
//! `E_s / sigma2`, capacity is `log2(1 + SNR)`, and the BPSK rate only sees
//! the in-phase noise of variance `sigma2 / 2`. Real-line alphabets with real
//! noise of variance `sigma2` are also supported.

use std::collections::BTreeMap;
use std::f64::consts::{E, LN_2, PI};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::quadrature::{
    gaussian_expectation, gaussian_expectation_2d, hermite_rule, integrate_density_functional,
    laguerre_rule, AffineMap, QuadratureMethod, QuadratureSpec,
};
use crate::{Error, Result};

/// Slack allowed on a raw rate before it is clamped into `[0, log2 M]`.
pub const RATE_RANGE_SLACK: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimensionality {
    Real,
    Complex,
}

/// Signal alphabet with prior probabilities.
///
/// Point magnitudes are amplitudes (square root of energy).
#[derive(Debug, Clone, PartialEq)]
pub struct Constellation {
    name: String,
    points: Vec<Complex64>,
    priors: Vec<f64>,
    dimensionality: Dimensionality,
}

impl Constellation {
    pub fn new(
        name: impl Into<String>,
        points: Vec<Complex64>,
        priors: Vec<f64>,
        dimensionality: Dimensionality,
    ) -> Result<Self> {
        let name = name.into();
        let invalid = |msg: String| -> Result<Self> {
            Err(Error::InvalidParameter(format!("{name}: {msg}")))
        };
        if points.len() < 2 {
            return invalid("a constellation needs at least two points".into());
        }
        if points.len() != priors.len() {
            return invalid(format!(
                "{} points but {} priors",
                points.len(),
                priors.len()
            ));
        }
        if points
            .iter()
            .any(|p| !p.re.is_finite() || !p.im.is_finite())
        {
            return invalid("points must be finite".into());
        }
        if dimensionality == Dimensionality::Real && points.iter().any(|p| p.im != 0.0) {
            return invalid("real constellation with a non-zero imaginary part".into());
        }
        if priors.iter().any(|&q| !(q > 0.0)) {
            return invalid("priors must be strictly positive".into());
        }
        let total: f64 = priors.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return invalid(format!("priors sum to {total}, not 1"));
        }
        for (i, a) in points.iter().enumerate() {
            if points[i + 1..].iter().any(|b| a == b) {
                return invalid(format!("duplicate point {a}"));
            }
        }
        let energy: f64 = points
            .iter()
            .zip(&priors)
            .map(|(p, q)| q * p.norm_sqr())
            .sum();
        if !(energy > 0.0) || !energy.is_finite() {
            return invalid(format!("mean energy {energy} must be finite and positive"));
        }
        Ok(Self {
            name,
            points,
            priors,
            dimensionality,
        })
    }

    /// Equiprobable alphabet.
    pub fn uniform(
        name: impl Into<String>,
        points: Vec<Complex64>,
        dimensionality: Dimensionality,
    ) -> Result<Self> {
        let m = points.len().max(1);
        Self::new(name, points, vec![1.0 / m as f64; m], dimensionality)
    }

    /// Antipodal ±`amplitude` on the in-phase axis of complex baseband.
    pub fn bpsk(amplitude: f64) -> Result<Self> {
        Self::uniform(
            "bpsk",
            vec![
                Complex64::new(amplitude, 0.0),
                Complex64::new(-amplitude, 0.0),
            ],
            Dimensionality::Complex,
        )
    }

    /// Antipodal ±`amplitude` on the real line, for real noise.
    pub fn bpsk_real(amplitude: f64) -> Result<Self> {
        Self::uniform(
            "bpsk-real",
            vec![
                Complex64::new(amplitude, 0.0),
                Complex64::new(-amplitude, 0.0),
            ],
            Dimensionality::Real,
        )
    }

    /// Unit-energy M-PSK with a point at angle π/M offset for even M > 2.
    pub fn psk(m: usize) -> Result<Self> {
        let offset = if m > 2 { PI / m as f64 } else { 0.0 };
        let points = (0..m)
            .map(|k| Complex64::from_polar(1.0, offset + 2.0 * PI * k as f64 / m as f64))
            .collect();
        Self::uniform(format!("{m}psk"), points, Dimensionality::Complex)
    }

    pub fn qpsk() -> Result<Self> {
        Self::psk(4).map(|c| c.renamed("qpsk"))
    }

    pub fn psk8() -> Result<Self> {
        Self::psk(8).map(|c| c.renamed("8psk"))
    }

    /// Unit-energy 4-ASK `{±1, ±3}/√5` on the in-phase axis.
    pub fn ask4() -> Result<Self> {
        let s = 5.0_f64.sqrt();
        let points = [-3.0, -1.0, 1.0, 3.0]
            .iter()
            .map(|&a| Complex64::new(a / s, 0.0))
            .collect();
        Self::uniform("4ask", points, Dimensionality::Complex)
    }

    fn renamed(mut self, name: &str) -> Self {
        self.name = name.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    pub fn priors(&self) -> &[f64] {
        &self.priors
    }

    pub fn dimensionality(&self) -> Dimensionality {
        self.dimensionality
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn mean_energy(&self) -> f64 {
        self.points
            .iter()
            .zip(&self.priors)
            .map(|(p, q)| q * p.norm_sqr())
            .sum()
    }

    /// Upper bound on the mutual information, `log2 M`.
    pub fn max_rate(&self) -> f64 {
        (self.len() as f64).log2()
    }

    /// Same alphabet with every point multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.points.iter().map(|p| p * factor).collect(),
            self.priors.clone(),
            self.dimensionality,
        )
    }
}

/// Additive white Gaussian noise of total power `sigma2`.
///
/// Complex noise is circularly symmetric with `sigma2 / 2` per dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnSpec {
    sigma2: f64,
    dimensionality: Dimensionality,
}

impl AwgnSpec {
    pub fn new(sigma2: f64, dimensionality: Dimensionality) -> Result<Self> {
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise power must be finite and positive, got {sigma2}"
            )));
        }
        Ok(Self {
            sigma2,
            dimensionality,
        })
    }

    pub fn real(sigma2: f64) -> Result<Self> {
        Self::new(sigma2, Dimensionality::Real)
    }

    pub fn complex(sigma2: f64) -> Result<Self> {
        Self::new(sigma2, Dimensionality::Complex)
    }

    /// Noise matched to `c` at linear SNR `snr = E_s / sigma2`.
    pub fn for_snr(c: &Constellation, snr: f64) -> Result<Self> {
        Self::new(c.mean_energy() / snr, c.dimensionality())
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn dimensionality(&self) -> Dimensionality {
        self.dimensionality
    }

    pub fn per_dim_variance(&self) -> f64 {
        match self.dimensionality {
            Dimensionality::Real => self.sigma2,
            Dimensionality::Complex => 0.5 * self.sigma2,
        }
    }
}

/// Differential entropy of the noise in bits.
pub fn noise_entropy(n: &AwgnSpec) -> f64 {
    match n.dimensionality {
        Dimensionality::Real => 0.5 * (2.0 * PI * E * n.sigma2).log2(),
        Dimensionality::Complex => (PI * E * n.sigma2).log2(),
    }
}

/// Gaussian mixture `Σ wᵢ N(y; μᵢ, s²I)` describing the channel output.
///
/// Unlike [`Constellation`] the component means need not be distinct, so a
/// zero-amplitude BPSK collapses to a single Gaussian.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureDensity {
    means: Vec<Complex64>,
    log_weights: Vec<f64>,
    weights: Vec<f64>,
    dimensionality: Dimensionality,
    per_dim_variance: f64,
    log_norm: f64,
}

impl MixtureDensity {
    pub fn new(means: Vec<Complex64>, weights: Vec<f64>, noise: &AwgnSpec) -> Result<Self> {
        if means.is_empty() || means.len() != weights.len() {
            return Err(Error::InvalidParameter(
                "mixture needs matching, non-empty means and weights".into(),
            ));
        }
        if weights.iter().any(|&w| !(w > 0.0)) {
            return Err(Error::InvalidParameter(
                "mixture weights must be positive".into(),
            ));
        }
        let s2 = noise.per_dim_variance();
        let log_norm = match noise.dimensionality {
            Dimensionality::Real => -0.5 * (2.0 * PI * s2).ln(),
            Dimensionality::Complex => -(2.0 * PI * s2).ln(),
        };
        Ok(Self {
            log_weights: weights.iter().map(|w| w.ln()).collect(),
            weights,
            means,
            dimensionality: noise.dimensionality,
            per_dim_variance: s2,
            log_norm,
        })
    }

    /// Equiprobable ±`amplitude` on the real line in real noise `sigma2`.
    pub fn bpsk_real(amplitude: f64, sigma2: f64) -> Result<Self> {
        Self::new(
            vec![
                Complex64::new(amplitude, 0.0),
                Complex64::new(-amplitude, 0.0),
            ],
            vec![0.5, 0.5],
            &AwgnSpec::real(sigma2)?,
        )
    }

    pub fn means(&self) -> &[Complex64] {
        &self.means
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dimensionality(&self) -> Dimensionality {
        self.dimensionality
    }

    pub fn per_dim_variance(&self) -> f64 {
        self.per_dim_variance
    }

    /// Natural log of the density, by log-sum-exp.
    pub fn ln_pdf(&self, y: Complex64) -> f64 {
        let inv = 0.5 / self.per_dim_variance;
        let mut max = f64::NEG_INFINITY;
        for (m, lw) in self.means.iter().zip(&self.log_weights) {
            max = max.max(lw - (y - m).norm_sqr() * inv);
        }
        let sum: f64 = self
            .means
            .iter()
            .zip(&self.log_weights)
            .map(|(m, lw)| (lw - (y - m).norm_sqr() * inv - max).exp())
            .sum();
        self.log_norm + max + sum.ln()
    }

    pub fn pdf(&self, y: Complex64) -> f64 {
        self.ln_pdf(y).exp()
    }

    pub fn pdf_real(&self, y: f64) -> f64 {
        self.pdf(Complex64::new(y, 0.0))
    }

    /// `H(Y)` in bits, as `Σᵢ wᵢ E_n[-log2 p(μᵢ + n)]` on a Hermite rule.
    fn entropy_hermite(&self, order: usize) -> Result<f64> {
        if let Some(h) = self.entropy_two_point(order)? {
            return Ok(h);
        }
        let rule = hermite_rule(order)?;
        let s = self.per_dim_variance.sqrt();
        let mut h = 0.0;
        for (mu, w) in self.means.iter().zip(&self.weights) {
            let e = match self.dimensionality {
                Dimensionality::Real => {
                    gaussian_expectation(|y| -self.ln_pdf(Complex64::new(y, 0.0)), mu.re, s, &rule)?
                }
                Dimensionality::Complex => gaussian_expectation_2d(
                    |re, im| -self.ln_pdf(Complex64::new(re, im)),
                    (mu.re, mu.im),
                    s,
                    &rule,
                )?,
            };
            h += w * e;
        }
        Ok(h / LN_2)
    }

    /// `H(Y)` in bits for two distinct means.
    ///
    /// Given component `i`, `-ln p(y) = -ln wᵢ - ln N(y; μᵢ) - ln(1 + e^{-Lᵢ})`
    /// where the log-likelihood ratio `Lᵢ` against the other component is
    /// Gaussian with mean `ln(wᵢ/wⱼ) + |d|²/2v` and variance `|d|²/v`.
    fn entropy_two_point(&self, order: usize) -> Result<Option<f64>> {
        if self.means.len() != 2 {
            return Ok(None);
        }
        let v = self.per_dim_variance;
        let d2 = (self.means[0] - self.means[1]).norm_sqr();
        if !(d2 > 0.0) {
            return Ok(None);
        }
        let half_dims = match self.dimensionality {
            Dimensionality::Real => 0.5,
            Dimensionality::Complex => 1.0,
        };
        let mut h = half_dims - self.log_norm;
        for i in 0..2 {
            let (wi, lwi, lwj) = (
                self.weights[i],
                self.log_weights[i],
                self.log_weights[1 - i],
            );
            let mean = lwi - lwj + 0.5 * d2 / v;
            let std = (d2 / v).sqrt();
            h -= wi * (lwi + softplus_moment(0, mean, std, order)?);
        }
        Ok(Some(h / LN_2))
    }

    /// `H(Y)` in bits by adaptive integration of `-p log2 p` on the real
    /// line, truncated at ten noise deviations beyond the outermost means.
    fn entropy_adaptive(&self, spec: &QuadratureSpec) -> Result<f64> {
        if self.dimensionality != Dimensionality::Real {
            return Err(Error::Unsupported(
                "adaptive integration is only available for real mixtures".into(),
            ));
        }
        let lo = self
            .means
            .iter()
            .map(|m| m.re)
            .fold(f64::INFINITY, f64::min);
        let hi = self
            .means
            .iter()
            .map(|m| m.re)
            .fold(f64::NEG_INFINITY, f64::max);
        let s = self.per_dim_variance.sqrt();
        let map = AffineMap::new(
            0.5 * (lo + hi),
            (0.5 * (hi - lo) + 10.0 * s) / crate::quadrature::ADAPTIVE_HALF_WIDTH,
        )?;
        integrate_density_functional(
            |y| {
                let lp = self.ln_pdf(Complex64::new(y, 0.0));
                -lp.exp() * lp / LN_2
            },
            spec,
            map,
        )
    }

    /// Differential entropy of the mixture in bits.
    pub fn entropy(&self, spec: &QuadratureSpec) -> Result<f64> {
        spec.validate()?;
        match spec.method {
            QuadratureMethod::HermiteGaussian => self.entropy_hermite(spec.order),
            QuadratureMethod::AdaptiveInterval => self.entropy_adaptive(spec),
        }
    }
}

/// Output density `p(y) = Σᵢ P(xᵢ) N(y; xᵢ, σ²)` of `y = x + n`.
pub fn output_density(c: &Constellation, n: &AwgnSpec) -> Result<MixtureDensity> {
    if c.dimensionality != n.dimensionality {
        return Err(Error::DimensionMismatch {
            constellation: c.dimensionality,
            noise: n.dimensionality,
        });
    }
    MixtureDensity::new(c.points.clone(), c.priors.clone(), n)
}

/// `I(X;Y) = H(Y) - H(N)` in bits per channel use.
///
/// The value is clamped into `[0, log2 M]` once it is known to lie within
/// [`RATE_RANGE_SLACK`] of that range.
pub fn mutual_information(c: &Constellation, n: &AwgnSpec, q: &QuadratureSpec) -> Result<f64> {
    let density = output_density(c, n)?;
    let raw = density.entropy(q)? - noise_entropy(n);
    clamp_rate(raw, c.max_rate())
}

fn clamp_rate(raw: f64, max: f64) -> Result<f64> {
    if !(raw >= -RATE_RANGE_SLACK && raw <= max + RATE_RANGE_SLACK) {
        return Err(Error::RateOutOfRange { value: raw, max });
    }
    Ok(raw.clamp(0.0, max))
}

/// `log2(1 + e^{-x})`, stable for either sign of `x`.
pub(crate) fn log2_1p_exp_neg(x: f64) -> f64 {
    if x > 0.0 {
        (-x).exp().ln_1p() / LN_2
    } else {
        (-x + x.exp().ln_1p()) / LN_2
    }
}

/// `1 - log2(1 + e^{-x})`, accurate near `x = 0` where it vanishes.
pub(crate) fn one_minus_log2_1p_exp_neg(x: f64) -> f64 {
    if x.abs() < 1.0 {
        -(0.5 * (-x).exp_m1()).ln_1p() / LN_2
    } else {
        1.0 - log2_1p_exp_neg(x)
    }
}

/// LLR spread above which [`softplus_moment`] splits the integrand.
const SOFTPLUS_SPLIT_STD: f64 = 1.0;

/// `E[X^k ln(1 + e^{-X})]` for `X ~ N(mean, std²)`.
///
/// For a narrow `X` the Hermite rule is applied directly. Otherwise the
/// integrand is written as `X^k max(-X, 0) + X^k ln(1 + e^{-|X|})`: the first
/// term has a closed form through truncated normal moments and the second
/// decays like `e^{-|x|}`, so it is folded onto `[0, ∞)` and integrated with a
/// Gauss-Laguerre rule of the same order.
pub(crate) fn softplus_moment(k: u32, mean: f64, std: f64, order: usize) -> Result<f64> {
    if std <= SOFTPLUS_SPLIT_STD {
        let rule = hermite_rule(order)?;
        return gaussian_expectation(
            |x| x.powi(k as i32) * log2_1p_exp_neg(x) * LN_2,
            mean,
            std,
            &rule,
        );
    }

    // E[Y^{k+1} 1{Y > 0}] with Y = -X ~ N(-mean, std²), via
    // I_j = E[Z^j 1{Z > a}] = a^{j-1} φ(a) + (j - 1) I_{j-2}
    let a = mean / std;
    let phi = (-0.5 * a * a).exp() / (2.0 * PI).sqrt();
    let p = k as usize + 1;
    let mut tail = vec![0.5 * libm::erfc(a / std::f64::consts::SQRT_2), phi];
    for j in 2..=p {
        tail.push(a.powi(j as i32 - 1) * phi + (j - 1) as f64 * tail[j - 2]);
    }
    let mu = -mean;
    let mut binom = 1.0;
    let mut kinked = 0.0;
    for (i, t) in tail.iter().enumerate().take(p + 1) {
        kinked += binom * mu.powi((p - i) as i32) * std.powi(i as i32) * t;
        binom = binom * (p - i) as f64 / (i + 1) as f64;
    }
    if k % 2 == 1 {
        kinked = -kinked;
    }

    let norm = 1.0 / ((2.0 * PI).sqrt() * std);
    let density = |x: f64| {
        let z = (x - mean) / std;
        norm * (-0.5 * z * z).exp()
    };
    let sign = if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let rule = laguerre_rule(order)?;
    let mut smooth = 0.0;
    for (x, w) in rule.iter() {
        if w == 0.0 {
            continue;
        }
        // e^x ln(1 + e^{-x}), bounded in [ln 2, 1]
        let t = (-x).exp();
        let h = if t > 0.0 { t.ln_1p() / t } else { 1.0 };
        let xk = x.powi(k as i32);
        let v = w * h * xk * (density(x) + sign * density(-x));
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: x, value: v });
        }
        smooth += v;
    }
    Ok(kinked + smooth)
}

/// Mean and standard deviation of the BPSK log-likelihood ratio given the
/// transmitted `+A`, at `γ = A²/σ_N²` with in-phase noise `σ_N²/2`.
pub(crate) fn bpsk_llr_moments(gamma: f64) -> (f64, f64) {
    (4.0 * gamma, (8.0 * gamma).sqrt())
}

/// BPSK rate at linear SNR `γ = A²/σ_N²` as a single integral.
///
/// With in-phase noise of variance `σ_N²/2` the log-likelihood ratio
/// `L = 4Ay/σ_N²` given `+A` is `N(4γ, 8γ)`, and
/// `I = 1 - E[log2(1 + e^{-L})]`.
pub fn mi_bpsk(gamma: f64, q: &QuadratureSpec) -> Result<f64> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "SNR must be finite and non-negative, got {gamma}"
        )));
    }
    q.validate()?;
    if gamma == 0.0 {
        return Ok(0.0);
    }
    let (mean, std) = bpsk_llr_moments(gamma);
    let raw = match q.method {
        QuadratureMethod::HermiteGaussian if std <= SOFTPLUS_SPLIT_STD => {
            let rule = hermite_rule(q.order)?;
            gaussian_expectation(one_minus_log2_1p_exp_neg, mean, std, &rule)?
        }
        QuadratureMethod::HermiteGaussian => 1.0 - softplus_moment(0, mean, std, q.order)? / LN_2,
        QuadratureMethod::AdaptiveInterval => {
            let map = AffineMap::new(mean, std)?;
            let norm = 1.0 / ((2.0 * PI).sqrt() * std);
            integrate_density_functional(
                |x| {
                    let z = (x - mean) / std;
                    norm * (-0.5 * z * z).exp() * one_minus_log2_1p_exp_neg(x)
                },
                q,
                map,
            )?
        }
    };
    clamp_rate(raw, 1.0)
}

/// Shannon capacity `log2(1 + ρ)` of the complex AWGN channel.
pub fn capacity(rho: f64) -> Result<f64> {
    if !(rho >= 0.0) || rho.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "SNR must be non-negative, got {rho}"
        )));
    }
    Ok(rho.ln_1p() / LN_2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SnrConvention {
    /// Linear symbol energy over total noise power.
    LinearEsOverN0,
    /// Energy per bit over noise power, in decibels.
    DbEbOverN0,
}

impl SnrConvention {
    pub fn label(&self) -> &'static str {
        match self {
            Self::LinearEsOverN0 => "linear_es_over_n0",
            Self::DbEbOverN0 => "db_eb_over_n0",
        }
    }
}

/// Rate values on an SNR grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RateCurve {
    pub snr_axis: Vec<f64>,
    pub convention: SnrConvention,
    pub rates: Vec<f64>,
    pub scheme: String,
    pub params: BTreeMap<String, String>,
}

impl RateCurve {
    pub fn new(
        scheme: impl Into<String>,
        convention: SnrConvention,
        snr_axis: Vec<f64>,
        rates: Vec<f64>,
    ) -> Result<Self> {
        if snr_axis.len() != rates.len() {
            return Err(Error::InvalidParameter(format!(
                "{} SNR points but {} rates",
                snr_axis.len(),
                rates.len()
            )));
        }
        check_grid(&snr_axis, f64::NEG_INFINITY)?;
        if let Some(r) = rates.iter().find(|&&r| !(r >= 0.0)) {
            return Err(Error::InvalidParameter(format!("negative rate {r}")));
        }
        Ok(Self {
            snr_axis,
            convention,
            rates,
            scheme: scheme.into(),
            params: BTreeMap::new(),
        })
    }

    pub fn with_param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.snr_axis
            .iter()
            .copied()
            .zip(self.rates.iter().copied())
    }
}

/// Rejects empty, non-finite, non-increasing, or below-`min` grids.
pub(crate) fn check_grid(grid: &[f64], min: f64) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::InvalidParameter("SNR grid is empty".into()));
    }
    if let Some(x) = grid.iter().find(|x| !x.is_finite() || **x < min) {
        return Err(Error::InvalidParameter(format!(
            "SNR grid value {x} out of range"
        )));
    }
    if grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidParameter(
            "SNR grid must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Mutual information of `c` on a grid of linear `E_s / sigma2` values.
pub fn sweep_rate(c: &Constellation, grid: &[f64], q: &QuadratureSpec) -> Result<RateCurve> {
    check_grid(grid, 0.0)?;
    q.validate()?;
    let rates = grid
        .par_iter()
        .map(|&snr| {
            if snr == 0.0 {
                return Ok(0.0);
            }
            mutual_information(c, &AwgnSpec::for_snr(c, snr)?, q)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RateCurve::new(
        c.name(),
        SnrConvention::LinearEsOverN0,
        grid.to_vec(),
        rates,
    )?
    .with_param("mean_energy", c.mean_energy())
    .with_param("quad_order", q.order))
}
