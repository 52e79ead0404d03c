//! Numerical integration primitives.
//!
//! Two methods are provided. Gauss-Hermite rules integrate smooth functions
//! against a Gaussian weight and are the workhorse for every rate integral:
//! each one is an expectation over Gaussian noise. The adaptive Gauss-Kronrod
//! (7/15) bisection scheme is a slower, independent fallback on a truncated
//! finite interval.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::{Error, Result};

/// Largest Gauss-Hermite order served by [`hermite_rule`].
///
/// Above this the outermost weights approach the subnormal range.
pub const MAX_HERMITE_ORDER: usize = 256;

/// Default node count for rate integrals.
pub const DEFAULT_HERMITE_ORDER: usize = 96;

/// Half-width of the adaptive integration window in units of the map scale.
pub const ADAPTIVE_HALF_WIDTH: f64 = 10.0;

const NEWTON_MAX_ITER: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadratureMethod {
    HermiteGaussian,
    AdaptiveInterval,
}

/// Integration settings shared by every rate computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    /// Hermite node count (ignored by the adaptive method).
    pub order: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self::hermite(DEFAULT_HERMITE_ORDER)
    }
}

impl QuadratureSpec {
    pub fn hermite(order: usize) -> Self {
        Self {
            method: QuadratureMethod::HermiteGaussian,
            order,
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_subdivisions: 4000,
        }
    }

    pub fn adaptive(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            method: QuadratureMethod::AdaptiveInterval,
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.method {
            QuadratureMethod::HermiteGaussian => {
                if self.order < 2 {
                    return Err(Error::InvalidParameter(format!(
                        "Hermite order must be at least 2, got {}",
                        self.order
                    )));
                }
            }
            QuadratureMethod::AdaptiveInterval => {
                let bad = |t: f64| !(t >= 0.0) || !t.is_finite();
                if bad(self.abs_tol) || bad(self.rel_tol) {
                    return Err(Error::InvalidParameter(
                        "tolerances must be finite and non-negative".into(),
                    ));
                }
                if self.abs_tol == 0.0 && self.rel_tol == 0.0 {
                    return Err(Error::InvalidParameter(
                        "abs_tol and rel_tol cannot both be zero".into(),
                    ));
                }
                if self.max_subdivisions == 0 {
                    return Err(Error::InvalidParameter(
                        "max_subdivisions must be positive".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Nodes and weights of the Gauss-Hermite rule for the weight `exp(-t²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermiteRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl HermiteRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Nodes are the eigenvalues of the symmetric tridiagonal Jacobi matrix
    /// (implicit QL), each polished by Newton steps on the orthonormal
    /// Hermite recurrence. Weights come from the polynomial derivative,
    /// which keeps the tiny outer weights accurate to full relative
    /// precision.
    fn compute(order: usize) -> Result<Self> {
        let n = order;
        let fail = |reason: String| Error::HermiteRule { order, reason };
        let diag = vec![0.0; n];
        let off: Vec<f64> = (1..n).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let mut nodes =
            jacobi_eigenvalues(diag, off).ok_or_else(|| fail("QL iteration failed".into()))?;
        nodes.sort_by(f64::total_cmp);

        let mut weights = Vec::with_capacity(n);
        for z in nodes.iter_mut() {
            let mut converged = false;
            let mut dp = 0.0;
            for _ in 0..NEWTON_MAX_ITER {
                let (p, d) = orthonormal_hermite(n, *z);
                dp = d;
                let step = p / d;
                *z -= step;
                if step.abs() <= 1e-15 * z.abs().max(1.0) {
                    converged = true;
                    break;
                }
            }
            if !converged || !z.is_finite() {
                return Err(fail(format!("Newton polish did not converge near {z}")));
            }
            let w = 2.0 / (dp * dp);
            if !(w > 0.0) || !w.is_finite() {
                return Err(fail(format!("weight {w} at node {z} is not positive")));
            }
            weights.push(w);
        }

        // enforce exact symmetry
        for i in 0..n / 2 {
            let j = n - 1 - i;
            let z = 0.5 * (nodes[j] - nodes[i]);
            let w = 0.5 * (weights[i] + weights[j]);
            nodes[i] = -z;
            nodes[j] = z;
            weights[i] = w;
            weights[j] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        if nodes.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(fail("nodes are not distinct".into()));
        }
        Ok(Self { nodes, weights })
    }
}

/// Orthonormal Hermite value `p_n(z)` and the scaled derivative
/// `√(2n)·p_{n-1}(z)`.
fn orthonormal_hermite(n: usize, z: f64) -> (f64, f64) {
    let mut p1 = PI.powf(-0.25);
    let mut p2 = 0.0;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, (2.0 * n as f64).sqrt() * p2)
}

/// Eigenvalues of a symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `off`, by implicit QL with Wilkinson shifts.
fn jacobi_eigenvalues(mut d: Vec<f64>, off: Vec<f64>) -> Option<Vec<f64>> {
    let n = d.len();
    let mut e = off;
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return None;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Some(d)
}

type RuleCache = RwLock<HashMap<usize, Arc<HermiteRule>>>;

fn rule_cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Gauss-Hermite rule of the given order, computed once and shared.
pub fn hermite_rule(order: usize) -> Result<Arc<HermiteRule>> {
    if order < 2 {
        return Err(Error::InvalidParameter(format!(
            "Hermite order must be at least 2, got {order}"
        )));
    }
    if order > MAX_HERMITE_ORDER {
        return Err(Error::HermiteRule {
            order,
            reason: format!("exceeds the supported maximum of {MAX_HERMITE_ORDER}"),
        });
    }
    if let Some(rule) = rule_cache().read().unwrap().get(&order) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(HermiteRule::compute(order)?);
    let mut cache = rule_cache().write().unwrap();
    Ok(Arc::clone(cache.entry(order).or_insert(rule)))
}

/// Nodes and weights of the Gauss-Laguerre rule for the weight `exp(-x)` on
/// `[0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaguerreRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl LaguerreRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    fn compute(order: usize) -> Result<Self> {
        let n = order;
        let fail = |reason: String| Error::HermiteRule { order, reason };
        let diag: Vec<f64> = (0..n).map(|k| (2 * k + 1) as f64).collect();
        let off: Vec<f64> = (1..n).map(|k| k as f64).collect();
        let mut nodes =
            jacobi_eigenvalues(diag, off).ok_or_else(|| fail("QL iteration failed".into()))?;
        nodes.sort_by(f64::total_cmp);
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            let mut converged = false;
            for _ in 0..NEWTON_MAX_ITER {
                let (p, _, dp) = laguerre(n, *x);
                let step = p / dp;
                *x -= step;
                if step.abs() <= 1e-12 * x.abs() {
                    converged = true;
                    break;
                }
            }
            if !converged || !(*x > 0.0) {
                return Err(fail(format!("Laguerre root polish failed near {x}")));
            }
            // w = 1 / (x L_n'(x)²), with L_n' = n (L_n - L_{n-1}) / x = -n L_{n-1} / x at a root
            let (_, pm1, _) = laguerre(n, *x);
            // the outermost weights underflow to zero for large orders
            let w = *x / (n as f64 * pm1) / (n as f64 * pm1);
            if !(w >= 0.0) || !w.is_finite() {
                return Err(fail(format!("Laguerre weight {w} at {x}")));
            }
            weights.push(w);
        }
        if nodes.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(fail("Laguerre nodes are not distinct".into()));
        }
        Ok(Self { nodes, weights })
    }
}

/// `(L_n(x), L_{n-1}(x), L_n'(x))` by the three-term recurrence.
fn laguerre(n: usize, x: f64) -> (f64, f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = 1.0 - x;
    if n == 1 {
        return (p1, p0, -1.0);
    }
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0 - x) * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, p0, nf * (p1 - p0) / x)
}

type LaguerreCache = RwLock<HashMap<usize, Arc<LaguerreRule>>>;

/// Gauss-Laguerre rule of the given order, computed once and shared.
pub fn laguerre_rule(order: usize) -> Result<Arc<LaguerreRule>> {
    static CACHE: OnceLock<LaguerreCache> = OnceLock::new();
    if !(2..=MAX_HERMITE_ORDER).contains(&order) {
        return Err(Error::HermiteRule {
            order,
            reason: format!("Laguerre order must lie in [2, {MAX_HERMITE_ORDER}]"),
        });
    }
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(rule) = cache.read().unwrap().get(&order) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(LaguerreRule::compute(order)?);
    let mut cache = cache.write().unwrap();
    Ok(Arc::clone(cache.entry(order).or_insert(rule)))
}

/// Affine change of variables `y = center + scale * t`.
///
/// For the Hermite method `t` is the rule variable. For the adaptive method
/// the integral runs over `center ± ADAPTIVE_HALF_WIDTH * scale`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub center: f64,
    pub scale: f64,
}

impl AffineMap {
    pub fn new(center: f64, scale: f64) -> Result<Self> {
        if !center.is_finite() || !(scale > 0.0) || !scale.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "affine map needs finite center and positive scale, got ({center}, {scale})"
            )));
        }
        Ok(Self { center, scale })
    }

    /// Map suited to a density concentrated around `mean` with spread `std`.
    pub fn gaussian(mean: f64, std: f64) -> Result<Self> {
        Self::new(mean, std * std::f64::consts::SQRT_2)
    }

    pub fn apply(&self, t: f64) -> f64 {
        self.center + self.scale * t
    }
}

/// Integrates a density-weighted functional `f` over the real line.
///
/// With the Hermite method the integrand is divided by the rule weight
/// `exp(-t²)` at each mapped node, so `f` should decay like a Gaussian
/// centred near `map.center` with width comparable to `map.scale`.
pub fn integrate_density_functional<F>(f: F, spec: &QuadratureSpec, map: AffineMap) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    spec.validate()?;
    match spec.method {
        QuadratureMethod::HermiteGaussian => {
            let rule = hermite_rule(spec.order)?;
            let mut acc = 0.0;
            for (t, w) in rule.iter() {
                let y = map.apply(t);
                let v = checked(y, f(y))?;
                if v != 0.0 {
                    acc += (w.ln() + t * t).exp() * v;
                }
            }
            Ok(acc * map.scale)
        }
        QuadratureMethod::AdaptiveInterval => {
            let half = ADAPTIVE_HALF_WIDTH * map.scale;
            adaptive_integrate(
                f,
                map.center - half,
                map.center + half,
                spec.abs_tol,
                spec.rel_tol,
                spec.max_subdivisions,
            )
        }
    }
}

/// `E[f(X)]` for `X ~ N(mean, std²)` using a Hermite rule.
pub fn gaussian_expectation<F>(f: F, mean: f64, std: f64, rule: &HermiteRule) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let s = std * std::f64::consts::SQRT_2;
    let mut acc = 0.0;
    for (t, w) in rule.iter() {
        let x = mean + s * t;
        acc += w * checked(x, f(x))?;
    }
    Ok(acc / PI.sqrt())
}

/// Tensor-product version of [`gaussian_expectation`] for two independent
/// coordinates with a common standard deviation.
pub fn gaussian_expectation_2d<F>(
    f: F,
    mean: (f64, f64),
    std: f64,
    rule: &HermiteRule,
) -> Result<f64>
where
    F: Fn(f64, f64) -> f64,
{
    let s = std * std::f64::consts::SQRT_2;
    let mut acc = 0.0;
    for (tx, wx) in rule.iter() {
        let x = mean.0 + s * tx;
        let mut row = 0.0;
        for (ty, wy) in rule.iter() {
            let y = mean.1 + s * ty;
            let v = f(x, y);
            if !v.is_finite() {
                return Err(Error::NonFiniteIntegrand {
                    node: x.hypot(y),
                    value: v,
                });
            }
            row += wy * v;
        }
        acc += wx * row;
    }
    Ok(acc / PI)
}

fn checked(node: f64, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFiniteIntegrand { node, value })
    }
}

// Gauss-Kronrod 7/15 abscissae and weights (QUADPACK qk15).
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// One Kronrod-15 panel: (estimate, |K15 - G7|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<(f64, f64)> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = checked(c, f(c))?;
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = h * XGK[j];
        let f1 = checked(c - dx, f(c - dx))?;
        let f2 = checked(c + dx, f(c + dx))?;
        kronrod += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    Ok((kronrod * h, ((kronrod - gauss) * h).abs()))
}

/// Globally adaptive bisection on `[a, b]` with a Gauss-Kronrod 7/15 panel.
///
/// The panel with the largest error indicator is halved until the summed
/// indicator meets `max(abs_tol, rel_tol * |estimate|)`.
pub fn adaptive_integrate<F>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_subdivisions: usize,
) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "invalid interval [{a}, {b}]"
        )));
    }
    let (est, err) = gk15(&f, a, b)?;
    let mut panels = vec![(a, b, est, err)];
    let mut subdivisions = 0;
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let total_err: f64 = panels.iter().map(|p| p.3).sum();
        if total_err <= abs_tol.max(rel_tol * total.abs()) {
            return Ok(total);
        }
        if subdivisions >= max_subdivisions {
            return Err(Error::SubdivisionLimit {
                limit: max_subdivisions,
                estimate: total,
                error_estimate: total_err,
            });
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("at least one panel");
        let (lo, hi, _, _) = panels.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (e1, r1) = gk15(&f, lo, mid)?;
        let (e2, r2) = gk15(&f, mid, hi)?;
        panels.push((lo, mid, e1, r1));
        panels.push((mid, hi, e2, r2));
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gaussian_pdf(y: f64, var: f64) -> f64 {
        (-y * y / (2.0 * var)).exp() / (2.0 * PI * var).sqrt()
    }

    #[test]
    fn two_point_rule() {
        let r = hermite_rule(2).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.nodes()[0] + s).abs() < 1e-15);
        assert!((r.nodes()[1] - s).abs() < 1e-15);
        for &w in r.weights() {
            assert!((w - PI.sqrt() / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn weights_sum_to_sqrt_pi() {
        for n in [2, 3, 7, 20, 64, 96, 97, 150, MAX_HERMITE_ORDER] {
            let r = hermite_rule(n).unwrap();
            let s: f64 = r.weights().iter().sum();
            assert!((s - PI.sqrt()).abs() < 1e-12, "order {n}: {s}");
            assert!(r.weights().iter().all(|&w| w > 0.0));
            for (a, b) in r.nodes().iter().zip(r.nodes().iter().rev()) {
                assert!((a + b).abs() < 1e-12);
            }
            assert!(r.nodes().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn second_moment_order_20() {
        let r = hermite_rule(20).unwrap();
        let m2: f64 = r.iter().map(|(t, w)| w * t * t).sum();
        assert!((m2 - PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn monomials_are_exact() {
        // ∫ t^k exp(-t²) dt = Γ((k+1)/2) for even k, 0 for odd k
        let gamma_half = |k: usize| -> f64 {
            // Γ((k+1)/2) for even k = (k-1)!! / 2^(k/2) · √π
            let mut v = PI.sqrt();
            let mut j = 1;
            while j < k {
                v *= j as f64 / 2.0;
                j += 2;
            }
            v
        };
        for n in [6, 10, 96] {
            let r = hermite_rule(n).unwrap();
            for k in 0..=10 {
                if k > 2 * n - 1 {
                    continue;
                }
                let got: f64 = r.iter().map(|(t, w)| w * t.powi(k as i32)).sum();
                let want = if k % 2 == 1 { 0.0 } else { gamma_half(k) };
                assert!((got - want).abs() < 1e-10, "n={n} k={k}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn order_limits() {
        assert!(matches!(hermite_rule(1), Err(Error::InvalidParameter(_))));
        assert!(matches!(
            hermite_rule(MAX_HERMITE_ORDER + 1),
            Err(Error::HermiteRule { .. })
        ));
        assert!(QuadratureSpec::hermite(1).validate().is_err());
        assert!(QuadratureSpec::adaptive(0.0, 0.0).validate().is_err());
        assert!(QuadratureSpec::adaptive(1e-9, 0.0).validate().is_ok());
    }

    #[test]
    fn rules_are_cached() {
        let a = hermite_rule(33).unwrap();
        let b = hermite_rule(33).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
    }

    #[test]
    fn gaussian_entropy_both_methods() {
        for var in [0.01, 1.0, 7.5] {
            let want = (2.0 * PI * std::f64::consts::E * var).sqrt().log2();
            let f = |y: f64| {
                let p = gaussian_pdf(y, var);
                if p > 0.0 {
                    -p * p.log2()
                } else {
                    0.0
                }
            };
            let map = AffineMap::gaussian(0.0, var.sqrt()).unwrap();
            let h = integrate_density_functional(f, &QuadratureSpec::default(), map).unwrap();
            assert!((h - want).abs() < 1e-12, "hermite var={var}: {h} vs {want}");
            let a = integrate_density_functional(f, &QuadratureSpec::adaptive(1e-13, 1e-12), map)
                .unwrap();
            assert!(
                (a - want).abs() < 1e-10,
                "adaptive var={var}: {a} vs {want}"
            );
        }
    }

    #[test]
    fn zero_integrand() {
        let map = AffineMap::new(3.0, 2.0).unwrap();
        for spec in [
            QuadratureSpec::default(),
            QuadratureSpec::adaptive(1e-12, 0.0),
        ] {
            assert_eq!(
                integrate_density_functional(|_| 0.0, &spec, map).unwrap(),
                0.0
            );
        }
    }

    #[test]
    fn non_finite_integrand_names_node() {
        let map = AffineMap::new(0.0, 1.0).unwrap();
        let f = |y: f64| if y > 0.0 { f64::NAN } else { 0.0 };
        match integrate_density_functional(f, &QuadratureSpec::default(), map) {
            Err(Error::NonFiniteIntegrand { node, .. }) => assert!(node > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn subdivision_limit_reports_partial_estimate() {
        let spec = QuadratureSpec {
            max_subdivisions: 3,
            ..QuadratureSpec::adaptive(1e-15, 0.0)
        };
        let map = AffineMap::new(0.0, 1.0).unwrap();
        let f = |y: f64| (50.0 * y).sin().abs();
        match integrate_density_functional(f, &spec, map) {
            Err(Error::SubdivisionLimit {
                limit, estimate, ..
            }) => {
                assert_eq!(limit, 3);
                assert!(estimate.is_finite() && estimate > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn laguerre_moments() {
        // ∫ x^k e^{-x} dx = k!
        for n in [2, 5, 20, 96, 192] {
            let r = laguerre_rule(n).unwrap();
            let mut fact = 1.0;
            for k in 0..=10usize.min(2 * n - 1) {
                if k > 0 {
                    fact *= k as f64;
                }
                let got: f64 = r.iter().map(|(x, w)| w * x.powi(k as i32)).sum();
                assert!((got / fact - 1.0).abs() < 1e-11, "n={n} k={k}: {got}");
            }
        }
        let r = laguerre_rule(2).unwrap();
        let nodes: Vec<f64> = r.iter().map(|p| p.0).collect();
        assert!((nodes[0] - (2.0 - 2f64.sqrt())).abs() < 1e-14);
        assert!((nodes[1] - (2.0 + 2f64.sqrt())).abs() < 1e-14);
        assert!(laguerre_rule(1).is_err());
    }

    #[test]
    fn expectations() {
        let r = hermite_rule(40).unwrap();
        let m = gaussian_expectation(|x| x * x, 1.5, 0.7, &r).unwrap();
        assert!((m - (1.5 * 1.5 + 0.49)).abs() < 1e-12);
        let m2 = gaussian_expectation_2d(|x, y| x * x + y * y, (1.0, -2.0), 0.5, &r).unwrap();
        assert!((m2 - (1.0 + 4.0 + 0.5)).abs() < 1e-12);
    }

    proptest! {
        #[test]
        fn linear_in_integrand(a in -3.0..3.0f64, b in -3.0..3.0f64,
                               m1 in -2.0..2.0f64, m2 in -2.0..2.0f64,
                               v in 0.2..3.0f64) {
            let map = AffineMap::gaussian(0.0, 1.2).unwrap();
            let spec = QuadratureSpec::default();
            let f = |y: f64| gaussian_pdf(y - m1, v) * (1.0 + y * y);
            let g = |y: f64| gaussian_pdf(y - m2, 1.0) * y.cos();
            let fi = integrate_density_functional(f, &spec, map).unwrap();
            let gi = integrate_density_functional(g, &spec, map).unwrap();
            let both = integrate_density_functional(|y| a * f(y) + b * g(y), &spec, map).unwrap();
            prop_assert!((both - (a * fi + b * gi)).abs() < 1e-12);
        }
    }
}
