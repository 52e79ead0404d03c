//! Seeded Monte Carlo oracles.
//!
//! Randomness comes from ChaCha8 (`rand_chacha`). Work is cut into fixed
//! chunks of [`CHUNK_SIZE`] draws; chunk `k` uses the generator seeded from
//! the caller's seed with stream number `k`. Normal variates come from the
//! Box-Muller transform of two 53-bit uniforms. Per-chunk statistics are
//! merged by a pairwise tree in chunk order, so results are bit-identical for
//! any thread count.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cocktail::CocktailParams;
use crate::modulation::{output_density, AwgnSpec, Constellation, Dimensionality, MixtureDensity};
use crate::{Error, Result};

pub const CHUNK_SIZE: u64 = 1 << 16;

/// Smallest sample count accepted by the simulators.
pub const MIN_SAMPLES: u64 = 10_000;

/// Natural-log density floor; samples below it are clamped and counted.
pub const LN_DENSITY_FLOOR: f64 = -708.396_418_532_264_1; // ln(f64::MIN_POSITIVE)

/// Largest tolerated fraction of clamped samples.
pub const MAX_CLAMPED_FRACTION: f64 = 1e-4;

/// Tail probability of the standard normal, `Q(x) = ½ erfc(x/√2)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Gaussian and uniform variates for one chunk.
struct Sampler {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl Sampler {
    fn new(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng, spare: None }
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (2.0 * PI * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }

    fn sign(&mut self) -> f64 {
        if self.rng.next_u64() >> 63 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    fn categorical(&mut self, cumulative: &[f64]) -> usize {
        let u = self.uniform();
        cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(cumulative.len() - 1)
    }
}

/// Running mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
    clamped: u64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(a: Self, b: Self) -> Self {
        if a.n == 0 {
            return b;
        }
        if b.n == 0 {
            return a;
        }
        let n = a.n + b.n;
        let d = b.mean - a.mean;
        let (na, nb) = (a.n as f64, b.n as f64);
        Self {
            n,
            mean: a.mean + d * nb / n as f64,
            m2: a.m2 + b.m2 + d * d * na * nb / n as f64,
            clamped: a.clamped + b.clamped,
        }
    }
}

fn pairwise<T: Copy>(mut items: Vec<T>, merge: impl Fn(T, T) -> T) -> Option<T> {
    while items.len() > 1 {
        items = items
            .chunks(2)
            .map(|p| {
                if p.len() == 2 {
                    merge(p[0], p[1])
                } else {
                    p[0]
                }
            })
            .collect();
    }
    items.pop()
}

fn chunk_sizes(total: u64) -> Vec<u64> {
    let full = total / CHUNK_SIZE;
    let rest = total % CHUNK_SIZE;
    let mut v = vec![CHUNK_SIZE; full as usize];
    if rest > 0 {
        v.push(rest);
    }
    v
}

fn check_count(n: u64) -> Result<()> {
    if n < MIN_SAMPLES {
        return Err(Error::InvalidParameter(format!(
            "at least {MIN_SAMPLES} samples required, got {n}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    /// Bits per channel use.
    pub mean: f64,
    pub stderr: f64,
    pub n_samples: u64,
    pub seed: u64,
    /// Samples whose density fell below [`LN_DENSITY_FLOOR`].
    pub clamped: u64,
}

/// Sampled-entropy estimate of `I(X;Y)` for a constellation over AWGN.
///
/// `H(Y)` is the sample mean of `-log2 p(y)` under the exact output density;
/// the analytic noise entropy is subtracted.
pub fn simulate_mi(
    c: &Constellation,
    n: &AwgnSpec,
    n_samples: u64,
    seed: u64,
) -> Result<MiEstimate> {
    simulate_mixture_mi(&output_density(c, n)?, n_samples, seed)
}

/// As [`simulate_mi`] for an explicit output mixture, which may have
/// coincident components.
pub fn simulate_mixture_mi(
    density: &MixtureDensity,
    n_samples: u64,
    seed: u64,
) -> Result<MiEstimate> {
    check_count(n_samples)?;
    let mut cumulative: Vec<f64> = density
        .weights()
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w;
            Some(*acc)
        })
        .collect();
    if let Some(last) = cumulative.last_mut() {
        *last = f64::INFINITY;
    }
    let s = density.per_dim_variance().sqrt();
    let complex = density.dimensionality() == Dimensionality::Complex;

    let parts: Vec<Moments> = chunk_sizes(n_samples)
        .into_par_iter()
        .enumerate()
        .map(|(k, len)| {
            let mut rng = Sampler::new(seed, k as u64);
            let mut m = Moments::default();
            for _ in 0..len {
                let mu = density.means()[rng.categorical(&cumulative)];
                let noise = if complex {
                    Complex64::new(s * rng.normal(), s * rng.normal())
                } else {
                    Complex64::new(s * rng.normal(), 0.0)
                };
                let mut lp = density.ln_pdf(mu + noise);
                if !(lp >= LN_DENSITY_FLOOR) {
                    lp = LN_DENSITY_FLOOR;
                    m.clamped += 1;
                }
                m.push(-lp / LN_2);
            }
            m
        })
        .collect();
    let total = pairwise(parts, Moments::merge).expect("at least one chunk");

    if total.clamped as f64 > MAX_CLAMPED_FRACTION * n_samples as f64 {
        return Err(Error::DensityUnderflow {
            clamped: total.clamped,
            total: n_samples,
        });
    }
    let var_per_dim = density.per_dim_variance();
    let h_noise = match density.dimensionality() {
        Dimensionality::Real => 0.5 * (2.0 * PI * std::f64::consts::E * var_per_dim).log2(),
        Dimensionality::Complex => (2.0 * PI * std::f64::consts::E * var_per_dim).log2(),
    };
    let var = total.m2 / (total.n - 1) as f64;
    Ok(MiEstimate {
        mean: total.mean - h_noise,
        stderr: (var / total.n as f64).sqrt(),
        n_samples,
        seed,
        clamped: total.clamped,
    })
}

/// Occupancy of the two amplitude cases: `x₁ = x₂` and `x₁ = −x₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CaseCounts {
    pub same_sign: u64,
    pub opposite_sign: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SicResult {
    pub ber_x1: f64,
    pub ber_x2: f64,
    pub errors_x1: u64,
    pub errors_x2: u64,
    pub n_symbols: u64,
    pub case_counts: CaseCounts,
    pub seed: u64,
}

/// MAP decision on `x₁` from `y = αx₁ + βx₂ + n` with `x₂` unknown.
///
/// The likelihood under `x₁ = +1` is the mirror image of that under
/// `x₁ = −1`, and for `α > β` the `+1` mixture dominates exactly when
/// `y > 0`. Ties at zero go to `+1`.
pub fn detect_x1(y: f64) -> f64 {
    if y >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Bit-level simulation of the layered transmission with successive
/// cancellation: detect `x₁` by sign, subtract `α·x̂₁`, detect `x₂` by sign.
/// The noise is real with variance `σ²`.
pub fn simulate_cocktail_sic(p: &CocktailParams, n_symbols: u64, seed: u64) -> Result<SicResult> {
    check_count(n_symbols)?;
    let (alpha, beta) = (p.alpha(), p.beta());
    let s = p.sigma2().sqrt();

    #[derive(Clone, Copy, Default)]
    struct Tally {
        e1: u64,
        e2: u64,
        same: u64,
        n: u64,
    }

    let parts: Vec<Tally> = chunk_sizes(n_symbols)
        .into_par_iter()
        .enumerate()
        .map(|(k, len)| {
            let mut rng = Sampler::new(seed, k as u64);
            let mut t = Tally::default();
            for _ in 0..len {
                let x1 = rng.sign();
                let x2 = rng.sign();
                let y = alpha * x1 + beta * x2 + s * rng.normal();
                let x1_hat = detect_x1(y);
                let y2 = y - alpha * x1_hat;
                let x2_hat = if y2 / beta >= 0.0 { 1.0 } else { -1.0 };
                t.e1 += (x1_hat != x1) as u64;
                t.e2 += (x2_hat != x2) as u64;
                t.same += (x1 == x2) as u64;
                t.n += 1;
            }
            t
        })
        .collect();
    let t = pairwise(parts, |a, b| Tally {
        e1: a.e1 + b.e1,
        e2: a.e2 + b.e2,
        same: a.same + b.same,
        n: a.n + b.n,
    })
    .expect("at least one chunk");

    Ok(SicResult {
        ber_x1: t.e1 as f64 / t.n as f64,
        ber_x2: t.e2 as f64 / t.n as f64,
        errors_x1: t.e1,
        errors_x2: t.e2,
        n_symbols: t.n,
        case_counts: CaseCounts {
            same_sign: t.same,
            opposite_sign: t.n - t.same,
        },
        seed,
    })
}

/// Error rate of sign detection of `x₁` over the two-amplitude mixture,
/// `½Q((α+β)/σ) + ½Q((α−β)/σ)`.
pub fn analytic_ber_x1(p: &CocktailParams) -> f64 {
    let s = p.sigma2().sqrt();
    0.5 * q_function((p.alpha() + p.beta()) / s) + 0.5 * q_function((p.alpha() - p.beta()) / s)
}

/// Genie-aided error rate of `x₂` with perfect cancellation, `Q(β/σ)`.
pub fn genie_ber_x2(p: &CocktailParams) -> f64 {
    q_function(p.beta() / p.sigma2().sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_function_values() {
        assert!((q_function(0.0) - 0.5).abs() < 1e-16);
        assert!((q_function(1.0) - 0.158_655_253_931_457_05).abs() < 1e-15);
        assert!((q_function(3.0) - 1.349_898_031_630_094_5e-3).abs() < 1e-17);
        assert!((q_function(-1.0) + q_function(1.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normal_moments() {
        let mut s = Sampler::new(7, 0);
        let mut m = Moments::default();
        let mut m4 = 0.0;
        let n = 400_000;
        for _ in 0..n {
            let z = s.normal();
            m.push(z);
            m4 += z.powi(4);
        }
        let var = m.m2 / (n - 1) as f64;
        assert!(m.mean.abs() < 5.0 / (n as f64).sqrt());
        assert!((var - 1.0).abs() < 0.01);
        assert!((m4 / n as f64 - 3.0).abs() < 0.05);
    }

    #[test]
    fn streams_differ() {
        let a = Sampler::new(1, 0).uniform();
        let b = Sampler::new(1, 1).uniform();
        let c = Sampler::new(2, 0).uniform();
        assert!(a != b && a != c);
    }

    #[test]
    fn moment_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let parts: Vec<Moments> = xs
            .chunks(77)
            .map(|c| {
                let mut m = Moments::default();
                c.iter().for_each(|&x| m.push(x));
                m
            })
            .collect();
        let merged = pairwise(parts, Moments::merge).unwrap();
        assert_eq!(merged.n, whole.n);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-9 * whole.m2);
    }

    #[test]
    fn sign_rule_is_map() {
        let p = CocktailParams::new(1.0, 0.5, 0.7).unwrap();
        let g = |y: f64, m: f64| (-(y - m) * (y - m) / (2.0 * p.sigma2())).exp();
        let (a, b) = (p.alpha(), p.beta());
        for k in -400..=400 {
            let y = k as f64 * 0.01 + 0.005;
            let plus = 0.5 * g(y, a + b) + 0.5 * g(y, a - b);
            let minus = 0.5 * g(y, -a - b) + 0.5 * g(y, -a + b);
            let map = if plus >= minus { 1.0 } else { -1.0 };
            assert_eq!(detect_x1(y), map, "y={y}");
        }
    }

    #[test]
    fn too_few_samples() {
        let c = Constellation::bpsk(1.0).unwrap();
        let n = AwgnSpec::complex(1.0).unwrap();
        assert!(simulate_mi(&c, &n, 100, 0).is_err());
        let p = CocktailParams::new(1.0, 0.5, 1.0).unwrap();
        assert!(simulate_cocktail_sic(&p, 9_999, 0).is_err());
    }

    #[test]
    fn deterministic() {
        let c = Constellation::qpsk().unwrap();
        let n = AwgnSpec::complex(0.5).unwrap();
        let a = simulate_mi(&c, &n, 200_000, 42).unwrap();
        let b = simulate_mi(&c, &n, 200_000, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert!(a.stderr > 0.0);
        let other = simulate_mi(&c, &n, 200_000, 43).unwrap();
        assert_ne!(a.mean, other.mean);
    }

    #[test]
    fn independent_of_thread_count() {
        let c = Constellation::psk8().unwrap();
        let n = AwgnSpec::complex(0.3).unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| simulate_mi(&c, &n, 300_001, 9).unwrap())
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn zero_amplitude_gives_zero_rate() {
        let d = MixtureDensity::bpsk_real(0.0, 1.0).unwrap();
        let e = simulate_mixture_mi(&d, 200_000, 3).unwrap();
        assert!(e.mean.abs() <= 3.0 * e.stderr, "{e:?}");
        assert!(e.stderr > 0.0);
    }

    #[test]
    fn noiseless_sic_is_error_free() {
        let p = CocktailParams::new(1.0, 0.5, 1e-6).unwrap();
        let r = simulate_cocktail_sic(&p, 50_000, 1).unwrap();
        assert_eq!(r.errors_x1, 0);
        assert_eq!(r.errors_x2, 0);
        assert_eq!(
            r.case_counts.same_sign + r.case_counts.opposite_sign,
            50_000
        );
    }

    #[test]
    fn sic_is_deterministic() {
        let p = CocktailParams::new(1.0, 0.6, 0.4).unwrap();
        assert_eq!(
            simulate_cocktail_sic(&p, 100_000, 5).unwrap(),
            simulate_cocktail_sic(&p, 100_000, 5).unwrap()
        );
    }
}
