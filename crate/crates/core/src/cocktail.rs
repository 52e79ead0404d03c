//! Two-layer superposition of BPSK streams, `x = α·x₁ + β·x₂` with
//! `α > β > 0`.
//!
//! Stream 1 sees one of two equiprobable effective amplitudes: `α + β` when
//! `x₁ = x₂` (case I) and `α − β` when `x₁ = −x₂` (case II). Its rate is the
//! case-average of the BPSK rates. Stream 2 is read after subtracting
//! `α·x̂₁` and, assuming that subtraction is exact, is plain BPSK at
//! amplitude `β`.

use crate::modulation::{capacity, mi_bpsk};
use crate::quadrature::QuadratureSpec;
use crate::{Error, Result, LOG2_E};

/// Probability of each of the two amplitude cases.
pub const CASE_PROBABILITY: f64 = 0.5;

/// Search interval for the amplitude ratio `β/α`.
pub const RATIO_BOUNDS: (f64, f64) = (0.01, 0.99);

/// Width at which the golden-section refinement stops.
pub const RATIO_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocktailParams {
    alpha: f64,
    beta: f64,
    sigma2: f64,
}

impl CocktailParams {
    pub fn new(alpha: f64, beta: f64, sigma2: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta > 0.0 && alpha > beta) {
            return Err(Error::InvalidParameter(format!(
                "amplitudes must satisfy α > β > 0, got α={alpha}, β={beta}"
            )));
        }
        if !(sigma2 > 0.0) || !sigma2.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "noise power must be finite and positive, got {sigma2}"
            )));
        }
        Ok(Self {
            alpha,
            beta,
            sigma2,
        })
    }

    /// Splits input energy `e_in` between the streams so that `β/α = ratio`.
    pub fn from_ratio(e_in: f64, ratio: f64, sigma2: f64) -> Result<Self> {
        if !(e_in > 0.0) || !e_in.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "input energy must be positive, got {e_in}"
            )));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "amplitude ratio must lie in (0, 1), got {ratio}"
            )));
        }
        let alpha = (e_in / (1.0 + ratio * ratio)).sqrt();
        Self::new(alpha, ratio * alpha, sigma2)
    }

    /// Parameters at linear input SNR `E_in/σ² = snr` with unit noise power.
    pub fn at_snr(snr: f64, ratio: f64) -> Result<Self> {
        Self::from_ratio(snr, ratio, 1.0)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn ratio(&self) -> f64 {
        self.beta / self.alpha
    }

    pub fn e_in(&self) -> f64 {
        self.alpha * self.alpha + self.beta * self.beta
    }

    /// Linear input SNR `E_in / σ²`.
    pub fn snr(&self) -> f64 {
        self.e_in() / self.sigma2
    }
}

/// Detection SNRs of the two streams.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaSet {
    /// Case I, amplitude `α + β`.
    pub gamma1: f64,
    /// Case II, amplitude `α − β`.
    pub gamma2: f64,
    /// Stream 2 after cancellation, amplitude `β`.
    pub gamma3: f64,
    pub case_prob: f64,
}

pub fn gamma_set(p: &CocktailParams) -> GammaSet {
    let sum = p.alpha + p.beta;
    let diff = p.alpha - p.beta;
    GammaSet {
        gamma1: sum * sum / p.sigma2,
        gamma2: diff * diff / p.sigma2,
        gamma3: p.beta * p.beta / p.sigma2,
        case_prob: CASE_PROBABILITY,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyAccount {
    /// `α² + β²`
    pub e_in: f64,
    /// Case-averaged energy seen when detecting `x₁`; equals `e_in`.
    pub e1: f64,
    /// `β²`, seen when detecting `x₂`.
    pub e2: f64,
    pub e_total_detection: f64,
}

pub fn energy_account(p: &CocktailParams) -> EnergyAccount {
    let (a, b) = (p.alpha, p.beta);
    let e1 = CASE_PROBABILITY * (a + b) * (a + b) + CASE_PROBABILITY * (a - b) * (a - b);
    let e2 = b * b;
    EnergyAccount {
        e_in: a * a + b * b,
        e1,
        e2,
        e_total_detection: e1 + e2,
    }
}

/// Rate of stream 1: `½ R(γ₁) + ½ R(γ₂)`.
pub fn adr_x1(p: &CocktailParams, q: &QuadratureSpec) -> Result<f64> {
    let g = gamma_set(p);
    Ok(g.case_prob * mi_bpsk(g.gamma1, q)? + g.case_prob * mi_bpsk(g.gamma2, q)?)
}

/// Rate of stream 2 under perfect cancellation: `R(γ₃)`.
pub fn adr_x2(p: &CocktailParams, q: &QuadratureSpec) -> Result<f64> {
    mi_bpsk(gamma_set(p).gamma3, q)
}

pub fn adr_sum(p: &CocktailParams, q: &QuadratureSpec) -> Result<f64> {
    Ok(adr_x1(p, q)? + adr_x2(p, q)?)
}

/// Sum rate minus capacity at the same input SNR. Negative at high SNR.
pub fn delta_vs_capacity(p: &CocktailParams, q: &QuadratureSpec) -> Result<f64> {
    Ok(adr_sum(p, q)? - capacity(p.snr())?)
}

/// Sum rate minus single-stream BPSK carrying the whole input energy.
pub fn delta_vs_conventional(p: &CocktailParams, q: &QuadratureSpec) -> Result<f64> {
    Ok(adr_sum(p, q)? - mi_bpsk(p.snr(), q)?)
}

/// Small-SNR limit of [`delta_vs_capacity`], `log2(e)·β²/σ²`.
pub fn low_snr_delta_approx(p: &CocktailParams) -> f64 {
    LOG2_E * p.beta * p.beta / p.sigma2
}

/// `10·log10((E_in/σ²) / rate)`, the bit-energy SNR in decibels.
pub fn eb_over_n0_db(p: &CocktailParams, rate: f64) -> Result<f64> {
    snr_to_eb_over_n0_db(p.snr(), rate)
}

/// Converts a linear symbol SNR and a rate in bits/symbol to `E_b/N₀` in dB.
pub fn snr_to_eb_over_n0_db(snr: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "E_b/N0 needs a positive rate, got {rate}"
        )));
    }
    if !(snr > 0.0) || !snr.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "E_b/N0 needs a positive SNR, got {snr}"
        )));
    }
    Ok(10.0 * (snr / rate).log10())
}

/// Per-stream and sum rates at one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CocktailRates {
    pub r1: f64,
    pub r2: f64,
    pub sum: f64,
}

pub fn rates(p: &CocktailParams, q: &QuadratureSpec) -> Result<CocktailRates> {
    let r1 = adr_x1(p, q)?;
    let r2 = adr_x2(p, q)?;
    Ok(CocktailRates {
        r1,
        r2,
        sum: r1 + r2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioOptimum {
    pub ratio: f64,
    pub adr_sum: f64,
}

const COARSE_POINTS: usize = 25;

/// Maximises the sum rate over `β/α ∈ [0.01, 0.99]` at fixed `E_in` and `σ²`.
///
/// A coarse uniform scan brackets the best ratio, then golden-section search
/// refines inside the neighbouring cells. The best evaluation overall is
/// returned; exact ties go to the smaller ratio.
pub fn optimize_beta_ratio(e_in: f64, sigma2: f64, q: &QuadratureSpec) -> Result<RatioOptimum> {
    if !(e_in > 0.0) || !(sigma2 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "energy and noise power must be positive, got {e_in}, {sigma2}"
        )));
    }
    let eval = |ratio: f64| -> Result<f64> {
        adr_sum(&CocktailParams::from_ratio(e_in, ratio, sigma2)?, q)
    };
    let (lo, hi) = RATIO_BOUNDS;
    let step = (hi - lo) / (COARSE_POINTS - 1) as f64;

    let mut best = RatioOptimum {
        ratio: f64::NAN,
        adr_sum: f64::NEG_INFINITY,
    };
    let consider = |ratio: f64, value: f64, best: &mut RatioOptimum| {
        if value > best.adr_sum || (value == best.adr_sum && ratio < best.ratio) {
            *best = RatioOptimum {
                ratio,
                adr_sum: value,
            };
        }
    };

    let coarse: Vec<f64> = (0..COARSE_POINTS)
        .map(|k| {
            if k + 1 == COARSE_POINTS {
                hi
            } else {
                lo + step * k as f64
            }
        })
        .collect();
    let mut best_idx = 0;
    for (k, &r) in coarse.iter().enumerate() {
        let v = eval(r)?;
        if v > best.adr_sum {
            best_idx = k;
        }
        consider(r, v, &mut best);
    }

    // golden-section refinement on the two cells around the coarse optimum
    let mut a = (lo + step * best_idx.saturating_sub(1) as f64).max(lo);
    let mut b = (lo + step * (best_idx + 1) as f64).min(hi);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = eval(x1)?;
    let mut f2 = eval(x2)?;
    consider(x1, f1, &mut best);
    consider(x2, f2, &mut best);
    while b - a > RATIO_TOLERANCE {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = eval(x1)?;
            consider(x1, f1, &mut best);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = eval(x2)?;
            consider(x2, f2, &mut best);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn params_validation() {
        assert!(CocktailParams::new(1.0, 1.0, 1.0).is_err());
        assert!(CocktailParams::new(1.0, 0.0, 1.0).is_err());
        assert!(CocktailParams::new(0.5, 1.0, 1.0).is_err());
        assert!(CocktailParams::new(1.0, 0.5, 0.0).is_err());
        assert!(CocktailParams::from_ratio(1.0, 1.0, 1.0).is_err());
        let p = CocktailParams::from_ratio(2.0, 0.3, 0.5).unwrap();
        assert!((p.e_in() - 2.0).abs() < 1e-14);
        assert!((p.ratio() - 0.3).abs() < 1e-14);
        assert!((p.snr() - 4.0).abs() < 1e-13);
    }

    #[test]
    fn gammas() {
        let g = gamma_set(&CocktailParams::new(1.0, 0.5, 1.0).unwrap());
        assert!((g.gamma1 - 2.25).abs() < 1e-15);
        assert!((g.gamma2 - 0.25).abs() < 1e-15);
        assert!((g.gamma3 - 0.25).abs() < 1e-15);
        assert_eq!(g.case_prob, 0.5);

        let near = gamma_set(&CocktailParams::new(1.0, 1.0 - 1e-9, 1.0).unwrap());
        assert!(near.gamma2 < 1e-17);

        let c = 3.7;
        let s = gamma_set(&CocktailParams::new(c, 0.5 * c, c * c).unwrap());
        assert!((s.gamma1 - g.gamma1).abs() < 1e-14);
        assert!((s.gamma2 - g.gamma2).abs() < 1e-14);
        assert!((s.gamma3 - g.gamma3).abs() < 1e-14);
    }

    #[test]
    fn energy() {
        let e = energy_account(&CocktailParams::new(1.0, 0.5, 1.0).unwrap());
        assert!((e.e_in - 1.25).abs() < 1e-15);
        assert!((e.e1 - 1.25).abs() < 1e-15);
        assert!((e.e2 - 0.25).abs() < 1e-15);
        assert!((e.e_total_detection - 1.5).abs() < 1e-15);

        let e = energy_account(&CocktailParams::new(1.0, 0.9, 1.0).unwrap());
        assert!((e.e_in - 1.81).abs() < 1e-12);
        assert!((e.e_total_detection - 2.62).abs() < 1e-12);
        assert!((e.e_total_detection - e.e_in - 0.81).abs() < 1e-12);
    }

    #[test]
    fn stream_rates_at_reference_point() {
        let p = CocktailParams::new(1.0, 0.9, 1.0).unwrap();
        let r1 = adr_x1(&p, &q()).unwrap();
        let want = 0.5 * mi_bpsk(3.61, &q()).unwrap() + 0.5 * mi_bpsk(0.01, &q()).unwrap();
        assert!((r1 - want).abs() < 1e-12);
        let r2 = adr_x2(&p, &q()).unwrap();
        assert!((r2 - mi_bpsk(0.81, &q()).unwrap()).abs() < 1e-15);
        let all = rates(&p, &q()).unwrap();
        assert!((all.sum - adr_sum(&p, &q()).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn limits() {
        // tiny β: both cases collapse onto α
        let p = CocktailParams::new(1.0, 1e-7, 1.0).unwrap();
        assert!((adr_x1(&p, &q()).unwrap() - mi_bpsk(1.0, &q()).unwrap()).abs() < 1e-6);
        assert!(adr_x2(&p, &q()).unwrap() < 1e-12);
        assert!(low_snr_delta_approx(&p) < 1e-13);

        let quiet = CocktailParams::new(1.0, 0.5, 1e12).unwrap();
        assert!(adr_sum(&quiet, &q()).unwrap() < 1e-11);
        assert!(delta_vs_capacity(&quiet, &q()).unwrap().abs() < 1e-11);

        let loud = CocktailParams::at_snr(1e4, 0.9).unwrap();
        assert!((adr_sum(&loud, &q()).unwrap() - 2.0).abs() < 1e-3);
        let x2 = CocktailParams::new(200.0, 100.0, 1.0).unwrap();
        assert!((adr_x2(&x2, &q()).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn delta_signs() {
        let hi = CocktailParams::at_snr(100.0, 0.9).unwrap();
        assert!(delta_vs_capacity(&hi, &q()).unwrap() < 0.0);
        let lo = CocktailParams::at_snr(0.01, 0.9).unwrap();
        assert!(delta_vs_capacity(&lo, &q()).unwrap() > 0.0);
        assert!(delta_vs_conventional(&lo, &q()).unwrap() > 0.0);
    }

    #[test]
    fn low_snr_approx_value() {
        let p = CocktailParams::new(1.0, 0.1, 1.0).unwrap();
        assert!((low_snr_delta_approx(&p) - 0.014427).abs() < 1e-6);
    }

    #[test]
    fn eb_n0_conversion() {
        let p = CocktailParams::new(0.8, 0.6, 1.0).unwrap(); // E_in = 1
        assert!(eb_over_n0_db(&p, 1.0).unwrap().abs() < 1e-12);
        let p2 = CocktailParams::new(0.8, 0.6, 0.5).unwrap();
        assert!((eb_over_n0_db(&p2, 1.0).unwrap() - 3.0103).abs() < 1e-4);
        assert!(eb_over_n0_db(&p, 0.0).is_err());
        assert!(eb_over_n0_db(&p, -1.0).is_err());
    }

    #[test]
    fn x2_rate_grows_with_ratio() {
        let mut last = -1.0;
        for k in 1..=24 {
            let ratio = 0.04 * k as f64;
            let r = adr_x2(&CocktailParams::at_snr(1.0, ratio).unwrap(), &q()).unwrap();
            assert!(r > last, "ratio {ratio}");
            last = r;
        }
    }

    #[test]
    fn optimizer_plateau_tie_break() {
        let best = optimize_beta_ratio(1.0, 1e-8, &q()).unwrap();
        assert!((best.adr_sum - 2.0).abs() < 1e-12);
        assert_eq!(best.ratio, RATIO_BOUNDS.0);
    }

    #[test]
    fn optimizer_rejects_bad_input() {
        assert!(optimize_beta_ratio(0.0, 1.0, &q()).is_err());
        assert!(optimize_beta_ratio(1.0, -1.0, &q()).is_err());
    }
}
