//! The `verify` suite: one row per acceptance property.

use cocktail_core::analysis::{derivative_limit_at_zero, derivative_report};
use cocktail_core::cocktail::{adr_sum, delta_vs_capacity, low_snr_delta_approx, CocktailParams};
use cocktail_core::modulation::{capacity, mi_bpsk, mutual_information, AwgnSpec, Constellation};
use cocktail_core::montecarlo::{analytic_ber_x1, simulate_cocktail_sic, simulate_mi};
use cocktail_core::quadrature::QuadratureSpec;
use cocktail_core::LOG2_E;

use crate::config::{Command, RunConfig};
use crate::csv::{format_float as ff, Table};
use crate::datasets::{base_table, fig3a, quadrature};
use crate::CliError;

pub const SIC_SYMBOLS: u64 = 1_000_000;
pub const DETERMINISM_SAMPLES: u64 = 100_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    /// Worst observed statistic.
    pub value: f64,
    /// Limit the statistic is held to.
    pub bound: f64,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub table: Table,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.log10(), hi.log10());
    (0..n)
        .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
        .collect()
}

fn derivative_limit(q: &QuadratureSpec) -> Result<Check, CliError> {
    let l = derivative_limit_at_zero(q)?;
    let err = (l - LOG2_E).abs();
    Ok(Check {
        id: 1,
        name: "derivative limit at zero equals log2(e)",
        passed: err <= 1e-3,
        value: err,
        bound: 1e-3,
        detail: format!("limit {}", ff(l)),
    })
}

fn low_snr_excess(cfg: &RunConfig, q: &QuadratureSpec) -> Result<Check, CliError> {
    let mut worst = 0.0_f64;
    let mut parts = Vec::new();
    for &r in &cfg.ratios {
        let p = CocktailParams::at_snr(1e-3, r)?;
        let ratio = delta_vs_capacity(&p, q)? / low_snr_delta_approx(&p);
        worst = worst.max((ratio - 1.0).abs());
        parts.push(format!("ratio {r}: {}", ff(ratio)));
    }
    Ok(Check {
        id: 2,
        name: "low-SNR excess rate matches log2(e) beta^2/sigma^2",
        passed: worst <= 0.05,
        value: worst,
        bound: 0.05,
        detail: parts.join("; "),
    })
}

fn delta_signs(q: &QuadratureSpec) -> Result<Check, CliError> {
    let low_snr = Command::Fig3a.default_grid().values()[0];
    let low = delta_vs_capacity(&CocktailParams::at_snr(low_snr, 0.9)?, q)?;
    let high = delta_vs_capacity(&CocktailParams::at_snr(100.0, 0.9)?, q)?;
    Ok(Check {
        id: 3,
        name: "delta_r positive at low SNR and negative at 100 (ratio 0.9)",
        passed: low > 0.0 && high < 0.0,
        value: low,
        bound: 0.0,
        detail: format!(
            "delta_r({low_snr}) = {}; delta_r(100) = {}",
            ff(low),
            ff(high)
        ),
    })
}

fn saturation(cfg: &RunConfig, q: &QuadratureSpec) -> Result<Check, CliError> {
    let mut passed = true;
    let mut worst = 0.0_f64;
    let mut parts = Vec::new();
    for &r in &cfg.ratios {
        let s = adr_sum(&CocktailParams::at_snr(1e4, r)?, q)?;
        let e = (s - 2.0).abs();
        passed &= e <= 1e-3;
        worst = worst.max(e);
        parts.push(format!("sum({r}) = {}", ff(s)));
    }
    let b = mi_bpsk(1e4, q)?;
    passed &= (b - 1.0).abs() <= 1e-6;
    parts.push(format!("bpsk = {}", ff(b)));
    for (c, target) in [
        (Constellation::qpsk()?, 2.0),
        (Constellation::psk8()?, 3.0),
        (Constellation::ask4()?, 2.0),
    ] {
        let v = mutual_information(&c, &AwgnSpec::for_snr(&c, 1e4)?, q)?;
        let e = (v - target).abs();
        passed &= e <= 1e-3;
        worst = worst.max(e);
        parts.push(format!("{} = {}", c.name(), ff(v)));
    }
    Ok(Check {
        id: 4,
        name: "rates saturate at SNR 1e4",
        passed,
        value: worst,
        bound: 1e-3,
        detail: parts.join("; "),
    })
}

/// Constellation and SNR pairs for the sampled-entropy cross-check. The last
/// three are the two case amplitudes and the second stream of a cocktail
/// point with `α = 1, β = 0.3, σ² = 1`.
pub fn oracle_pairs() -> Result<Vec<(Constellation, AwgnSpec)>, CliError> {
    let mut out = Vec::new();
    for (c, snr) in [
        (Constellation::bpsk(1.0)?, 0.1),
        (Constellation::bpsk(1.0)?, 1.0),
        (Constellation::bpsk(1.0)?, 10.0),
        (Constellation::qpsk()?, 0.5),
        (Constellation::qpsk()?, 5.0),
        (Constellation::psk8()?, 1.0),
        (Constellation::psk8()?, 20.0),
        (Constellation::ask4()?, 2.0),
        (Constellation::ask4()?, 30.0),
    ] {
        let n = AwgnSpec::for_snr(&c, snr)?;
        out.push((c, n));
    }
    let p = CocktailParams::new(1.0, 0.3, 1.0)?;
    for amp in [p.alpha() + p.beta(), p.alpha() - p.beta(), p.beta()] {
        out.push((Constellation::bpsk(amp)?, AwgnSpec::complex(p.sigma2())?));
    }
    Ok(out)
}

fn oracle_agreement(cfg: &RunConfig, q: &QuadratureSpec) -> Result<Check, CliError> {
    let pairs = oracle_pairs()?;
    let mut worst = 0.0_f64;
    let mut parts = Vec::new();
    for (i, (c, n)) in pairs.iter().enumerate() {
        let quad = mutual_information(c, n, q)?;
        let mc = simulate_mi(c, n, cfg.mc_samples, cfg.seed.wrapping_add(i as u64))?;
        let z = (quad - mc.mean).abs() / mc.stderr;
        worst = worst.max(z);
        let snr = c.mean_energy() / n.sigma2();
        parts.push(format!("{}@{}: z={}", c.name(), ff(snr), ff(z)));
    }
    Ok(Check {
        id: 5,
        name: "quadrature within 3 stderr of sampled entropy",
        passed: worst <= 3.0,
        value: worst,
        bound: 3.0,
        detail: format!(
            "{} pairs, {} samples; {}",
            pairs.len(),
            cfg.mc_samples,
            parts.join("; ")
        ),
    })
}

fn capacity_bound(q: &QuadratureSpec) -> Result<Check, CliError> {
    let mut worst = f64::NEG_INFINITY;
    for g in log_grid(1e-3, 100.0, 50) {
        worst = worst.max(mi_bpsk(g, q)? - capacity(g)?);
    }
    Ok(Check {
        id: 6,
        name: "bpsk rate never exceeds capacity",
        passed: worst <= 1e-9,
        value: worst,
        bound: 1e-9,
        detail: "max of rate - capacity on 50 log points in [1e-3, 1e2]".into(),
    })
}

fn single_integral_consistency(q: &QuadratureSpec) -> Result<Check, CliError> {
    let direct_q = QuadratureSpec::adaptive(1e-13, 1e-12);
    let mut worst = 0.0_f64;
    let grid = log_grid(1e-3, 100.0, 50);
    for &g in &grid {
        let single = mi_bpsk(g, q)?;
        // -∫ p log2 p of the in-phase mixture, by adaptive Gauss-Kronrod
        let direct = mutual_information(
            &Constellation::bpsk_real(g.sqrt())?,
            &AwgnSpec::real(0.5)?,
            &direct_q,
        )?;
        worst = worst.max((single - direct).abs());
    }
    let mut derivative_ok = true;
    let mut worst_excess = f64::NEG_INFINITY;
    for &g in grid.iter().filter(|&&g| g >= 1e-2) {
        let r = derivative_report(g, q)?;
        derivative_ok &= r.agrees();
        worst_excess =
            worst_excess.max((r.analytic_value - r.finite_diff_value).abs() - r.tolerance());
    }
    Ok(Check {
        id: 7,
        name: "single integral matches direct integration; derivative matches differences",
        passed: worst <= 1e-6 && derivative_ok,
        value: worst,
        bound: 1e-6,
        detail: format!(
            "derivative: worst |analytic - difference| - tolerance = {}",
            ff(worst_excess)
        ),
    })
}

fn sic(cfg: &RunConfig) -> Result<Check, CliError> {
    let p = CocktailParams::new(1.0, 0.5, 1.0)?;
    let r = simulate_cocktail_sic(&p, SIC_SYMBOLS, cfg.seed)?;
    let want = analytic_ber_x1(&p);
    let n = r.n_symbols as f64;
    let z_ber = (r.ber_x1 - want).abs() / (want * (1.0 - want) / n).sqrt();
    let z_case = (r.case_counts.same_sign as f64 - 0.5 * n).abs() / (0.25 * n).sqrt();
    Ok(Check {
        id: 8,
        name: "SIC x1 error rate matches the Q-function mixture; cases balanced",
        passed: z_ber <= 3.0 && z_case <= 5.0,
        value: z_ber,
        bound: 3.0,
        detail: format!(
            "ber_x1 {} vs {}; case z = {} (bound 5); ber_x2 {}",
            ff(r.ber_x1),
            ff(want),
            ff(z_case),
            ff(r.ber_x2)
        ),
    })
}

fn determinism(cfg: &RunConfig) -> Result<Check, CliError> {
    let mut sample = RunConfig::new(Command::Fig3a);
    sample.quad_order = cfg.quad_order;
    sample.seed = cfg.seed;
    let a = fig3a(&sample)?.render();
    let b = fig3a(&sample)?.render();
    let c = Constellation::qpsk()?;
    let n = AwgnSpec::for_snr(&c, 1.0)?;
    let m1 = simulate_mi(&c, &n, DETERMINISM_SAMPLES, cfg.seed)?;
    let m2 = simulate_mi(&c, &n, DETERMINISM_SAMPLES, cfg.seed)?;
    let same = a == b && m1.mean.to_bits() == m2.mean.to_bits() && m1 == m2;
    Ok(Check {
        id: 9,
        name: "same configuration and seed give identical output",
        passed: same,
        value: if same { 0.0 } else { 1.0 },
        bound: 0.0,
        detail: format!(
            "fig3a dataset {} bytes rendered twice; sampled estimate repeated",
            a.len()
        ),
    })
}

pub fn run_checks(cfg: &RunConfig) -> Result<VerifyReport, CliError> {
    let q = quadrature(cfg);
    let checks = vec![
        derivative_limit(&q)?,
        low_snr_excess(cfg, &q)?,
        delta_signs(&q)?,
        saturation(cfg, &q)?,
        oracle_agreement(cfg, &q)?,
        capacity_bound(&q)?,
        single_integral_consistency(&q)?,
        sic(cfg)?,
        determinism(cfg)?,
    ];
    let mut table = base_table(
        cfg,
        &["id", "criterion", "status", "value", "bound", "detail"],
    );
    table
        .meta("mc_samples", cfg.mc_samples)
        .meta("sic_symbols", SIC_SYMBOLS);
    for c in &checks {
        table.push(vec![
            u64::from(c.id).into(),
            c.name.into(),
            if c.passed { "pass" } else { "FAIL" }.into(),
            c.value.into(),
            c.bound.into(),
            c.detail.clone().into(),
        ]);
    }
    Ok(VerifyReport { checks, table })
}
