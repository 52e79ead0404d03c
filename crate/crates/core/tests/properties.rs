use cocktail_core::analysis::{derivative, mi_bpsk_derivative, taylor_rate_approx};
use cocktail_core::cocktail::{
    adr_sum, adr_x1, adr_x2, delta_vs_capacity, gamma_set, low_snr_delta_approx,
    optimize_beta_ratio, CocktailParams, RATIO_BOUNDS,
};
use cocktail_core::modulation::{
    capacity, mi_bpsk, mutual_information, output_density, AwgnSpec, Constellation, MixtureDensity,
};
use cocktail_core::quadrature::{gaussian_expectation_2d, hermite_rule, QuadratureSpec};
use cocktail_core::LOG2_E;
use num_complex::Complex64;
use proptest::prelude::*;

fn q() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
        .collect()
}

fn fig1_schemes() -> Vec<Constellation> {
    vec![
        Constellation::bpsk(1.0).unwrap(),
        Constellation::qpsk().unwrap(),
        Constellation::psk8().unwrap(),
        Constellation::ask4().unwrap(),
    ]
}

#[test]
fn hermite_order_doubling_is_stable() {
    for gamma in log_grid(1e-3, 100.0, 40) {
        let d = MixtureDensity::bpsk_real(gamma.sqrt(), 1.0).unwrap();
        let h96 = d.entropy(&QuadratureSpec::hermite(96)).unwrap();
        let h192 = d.entropy(&QuadratureSpec::hermite(192)).unwrap();
        assert!((h96 - h192).abs() < 1e-9, "γ={gamma}: {h96} vs {h192}");
        let r96 = mi_bpsk(gamma, &QuadratureSpec::hermite(96)).unwrap();
        let r192 = mi_bpsk(gamma, &QuadratureSpec::hermite(192)).unwrap();
        assert!((r96 - r192).abs() < 1e-9, "γ={gamma}: {r96} vs {r192}");
    }
    // larger alphabets go through the tensor rule, which is coarser near
    // SNR 10 to 50
    for c in fig1_schemes() {
        for snr in log_grid(1e-3, 100.0, 16) {
            let n = AwgnSpec::for_snr(&c, snr).unwrap();
            let d = output_density(&c, &n).unwrap();
            let h96 = d.entropy(&QuadratureSpec::hermite(96)).unwrap();
            let h192 = d.entropy(&QuadratureSpec::hermite(192)).unwrap();
            let tol = if snr <= 1.0 { 1e-9 } else { 1e-6 };
            assert!((h96 - h192).abs() < tol, "{} snr={snr}", c.name());
        }
    }
}

#[test]
fn single_integral_agrees_with_direct_integration() {
    let direct_q = QuadratureSpec::adaptive(1e-13, 1e-12);
    for gamma in log_grid(1e-3, 1e4, 36) {
        let single = mi_bpsk(gamma, &q()).unwrap();
        // complex-baseband BPSK through the mixture entropy
        let tensor = mutual_information(
            &Constellation::bpsk(gamma.sqrt()).unwrap(),
            &AwgnSpec::complex(1.0).unwrap(),
            &q(),
        )
        .unwrap();
        // in-phase projection, -∫ p log2 p by adaptive Gauss-Kronrod
        let adaptive = mutual_information(
            &Constellation::bpsk_real(gamma.sqrt()).unwrap(),
            &AwgnSpec::real(0.5).unwrap(),
            &direct_q,
        )
        .unwrap();
        assert!(
            (single - tensor).abs() < 1e-6,
            "γ={gamma}: {single} vs {tensor}"
        );
        assert!(
            (single - adaptive).abs() < 1e-6,
            "γ={gamma}: {single} vs {adaptive}"
        );
    }
}

#[test]
fn rates_are_bounded() {
    for c in fig1_schemes() {
        for snr in log_grid(1e-3, 1e4, 15) {
            let r = mutual_information(&c, &AwgnSpec::for_snr(&c, snr).unwrap(), &q()).unwrap();
            assert!((0.0..=c.max_rate()).contains(&r));
            assert!(r <= capacity(snr).unwrap() + 1e-9, "{} at {snr}", c.name());
        }
    }
    for gamma in log_grid(1e-3, 100.0, 50) {
        assert!(mi_bpsk(gamma, &q()).unwrap() <= capacity(gamma).unwrap() + 1e-9);
    }
}

#[test]
fn densities_integrate_to_one() {
    let rule = hermite_rule(96).unwrap();
    for c in fig1_schemes() {
        for snr in [0.1, 1.0, 3.0] {
            let d = output_density(&c, &AwgnSpec::for_snr(&c, snr).unwrap()).unwrap();
            // importance-weight against a broad reference Gaussian
            let s = 0.9_f64;
            let mass = gaussian_expectation_2d(
                |x, y| {
                    let g = (-(x * x + y * y) / (2.0 * s * s)).exp()
                        / (2.0 * std::f64::consts::PI * s * s);
                    d.pdf(Complex64::new(x, y)) / g
                },
                (0.0, 0.0),
                s,
                &rule,
            )
            .unwrap();
            assert!((mass - 1.0).abs() < 1e-9, "{} snr={snr}: {mass}", c.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn snr_scale_invariance(scale in 0.05..20.0f64, snr in 0.01..50.0f64, which in 0usize..4) {
        let c = &fig1_schemes()[which];
        let n = AwgnSpec::for_snr(c, snr).unwrap();
        let base = mutual_information(c, &n, &q()).unwrap();
        let cs = c.scaled(scale).unwrap();
        let ns = AwgnSpec::new(n.sigma2() * scale * scale, n.dimensionality()).unwrap();
        let scaled = mutual_information(&cs, &ns, &q()).unwrap();
        prop_assert!((base - scaled).abs() < 1e-9);
    }

    #[test]
    fn cocktail_sum_in_range(snr in 1e-3..1e3f64, ratio in 0.01..0.99f64) {
        let p = CocktailParams::at_snr(snr, ratio).unwrap();
        let s = adr_sum(&p, &q()).unwrap();
        prop_assert!((0.0..=2.0).contains(&s));
        let g = gamma_set(&p);
        prop_assert!(g.gamma1 > g.gamma2 && g.gamma2 >= 0.0 && g.gamma3 > 0.0);
        prop_assert!((0.5 * g.gamma1 + 0.5 * g.gamma2 - p.snr()).abs() <= 1e-12 * p.snr().max(1.0));
    }

    #[test]
    fn x1_rate_scale_invariant(alpha in 0.2..5.0f64, frac in 0.05..0.95f64,
                               sigma in 0.1..3.0f64, c in 0.1..10.0f64) {
        let p = CocktailParams::new(alpha, frac * alpha, sigma * sigma).unwrap();
        let ps = CocktailParams::new(c * alpha, c * frac * alpha, (c * sigma).powi(2)).unwrap();
        prop_assert!((adr_x1(&p, &q()).unwrap() - adr_x1(&ps, &q()).unwrap()).abs() < 1e-12);
    }
}

#[test]
fn low_snr_excess_ratio() {
    for ratio in [0.3, 0.9] {
        let p = CocktailParams::at_snr(1e-3, ratio).unwrap();
        let r = delta_vs_capacity(&p, &q()).unwrap() / low_snr_delta_approx(&p);
        assert!((0.95..=1.05).contains(&r), "ratio {ratio}: {r}");
        // restated per unit SNR
        let per_snr = delta_vs_capacity(&p, &q()).unwrap() / p.snr();
        let want = LOG2_E * p.beta() * p.beta() / p.e_in();
        assert!((per_snr / want - 1.0).abs() < 0.05);
    }
}

#[test]
fn delta_sign_pattern() {
    let grid: Vec<f64> = (1..=150).map(|k| 0.01 * k as f64).collect();
    let deltas: Vec<f64> = grid
        .iter()
        .map(|&s| delta_vs_capacity(&CocktailParams::at_snr(s, 0.9).unwrap(), &q()).unwrap())
        .collect();
    assert!(deltas[0] > 0.0);
    assert!(deltas.iter().any(|&d| d > 0.0));
    let hi = delta_vs_capacity(&CocktailParams::at_snr(100.0, 0.9).unwrap(), &q()).unwrap();
    assert!(hi < 0.0);
}

#[test]
fn x2_rate_strictly_increasing_in_ratio() {
    for snr in [0.1, 1.0, 10.0] {
        let rs: Vec<f64> = (1..=24)
            .map(|k| {
                let p = CocktailParams::at_snr(snr, 0.04 * k as f64).unwrap();
                adr_x2(&p, &q()).unwrap()
            })
            .collect();
        assert!(rs.windows(2).all(|w| w[1] > w[0]), "snr={snr}");
    }
}

#[test]
fn bpsk_rate_is_increasing_and_concave() {
    let grid = log_grid(1e-3, 100.0, 40);
    let ds: Vec<f64> = grid
        .iter()
        .map(|&g| derivative(g, &q()).unwrap().0)
        .collect();
    assert!(ds.iter().all(|&d| d > 0.0));
    assert!(ds.windows(2).all(|w| w[1] < w[0]));
    assert!(ds.iter().all(|&d| d <= LOG2_E));
    for &g in grid.iter().filter(|&&g| g >= 1e-2) {
        assert!(mi_bpsk_derivative(g, &q()).unwrap() <= LOG2_E);
    }
    for &g in grid.iter().filter(|&&g| g <= 1.0) {
        assert!(taylor_rate_approx(g) >= mi_bpsk(g, &q()).unwrap());
    }
}

#[test]
fn capacity_gap_vanishes_faster_than_snr() {
    let gap = |g: f64| (capacity(g).unwrap() - mi_bpsk(g, &q()).unwrap()) / g;
    let (a, b, c) = (gap(1e-1), gap(1e-2), gap(1e-3));
    assert!(a > b && b > c);
    assert!(c < 1e-2);
}

#[test]
fn optimizer_against_dense_grid() {
    // oracle: exhaustive sweep at step 0.01
    let sweep = |e_in: f64, sigma2: f64| {
        (1..=99)
            .map(|k| {
                let r = 0.01 * k as f64;
                let v =
                    adr_sum(&CocktailParams::from_ratio(e_in, r, sigma2).unwrap(), &q()).unwrap();
                (r, v)
            })
            .fold((0.0, f64::NEG_INFINITY), |best, x| {
                if x.1 > best.1 {
                    x
                } else {
                    best
                }
            })
    };

    let (grid_r, grid_v) = sweep(0.01, 1.0);
    assert!((grid_r - RATIO_BOUNDS.1).abs() < 1e-12);
    let best = optimize_beta_ratio(0.01, 1.0, &q()).unwrap();
    assert!(best.ratio > 0.98, "{best:?}");
    assert!(best.adr_sum >= grid_v - 1e-12);

    for snr in [0.5, 2.0, 8.0, 30.0] {
        let best = optimize_beta_ratio(snr, 1.0, &q()).unwrap();
        let (_, grid_v) = sweep(snr, 1.0);
        assert!(
            best.adr_sum >= grid_v - 1e-9,
            "snr={snr}: {best:?} vs {grid_v}"
        );
        for r in [0.3, 0.9] {
            let v = adr_sum(&CocktailParams::at_snr(snr, r).unwrap(), &q()).unwrap();
            assert!(best.adr_sum >= v);
        }
        assert_eq!(best, optimize_beta_ratio(snr, 1.0, &q()).unwrap());
    }
}
