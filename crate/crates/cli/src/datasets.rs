//! Builders for the figure datasets.

use cocktail_core::analysis::{
    derivative, derivative_limit_at_zero, DERIVATIVE_CROSSOVER, LIMIT_GAMMAS,
};
use cocktail_core::cocktail::{rates, snr_to_eb_over_n0_db, CocktailParams};
use cocktail_core::modulation::{capacity, mi_bpsk, mutual_information, AwgnSpec, Constellation};
use cocktail_core::quadrature::QuadratureSpec;
use rayon::prelude::*;

use crate::config::{Command, RunConfig, Scheme};
use crate::csv::{Cell, Table};
use crate::CliError;

const CONVENTION: &str = "complex baseband; unit-energy constellations in circular complex \
    noise of total power sigma_N^2; BPSK sees in-phase noise sigma_N^2/2; \
    capacity = log2(1 + SNR)";

pub fn quadrature(cfg: &RunConfig) -> QuadratureSpec {
    QuadratureSpec::hermite(cfg.quad_order)
}

/// Header block shared by every dataset.
pub fn base_table<S: AsRef<str>>(cfg: &RunConfig, columns: &[S]) -> Table {
    let mut t = Table::new(columns);
    t.meta("tool", format!("cocktail {}", env!("CARGO_PKG_VERSION")))
        .meta("command", cfg.command.name())
        .meta("axis", cfg.command.axis_label())
        .meta("grid", cfg.grid.describe())
        .meta("convention", CONVENTION)
        .meta(
            "quadrature",
            format!("gauss-hermite order {}", cfg.quad_order),
        )
        .meta("seed", cfg.seed);
    t
}

fn ratios_meta(t: &mut Table, cfg: &RunConfig) {
    let r: Vec<String> = cfg.ratios.iter().map(|r| r.to_string()).collect();
    t.meta("ratios", r.join(";"))
        .meta("ratio", "beta/alpha; E_in = alpha^2 + beta^2");
}

pub fn constellation(s: Scheme) -> Option<Constellation> {
    let c = match s {
        Scheme::Bpsk => Constellation::bpsk(1.0),
        Scheme::Qpsk => Constellation::qpsk(),
        Scheme::Psk8 => Constellation::psk8(),
        Scheme::Ask4 => Constellation::ask4(),
        Scheme::Capacity => return None,
    };
    Some(c.expect("named constellations are valid"))
}

/// Rate of a scheme at linear SNR, in bits per symbol.
pub fn scheme_rate(s: Scheme, snr: f64, q: &QuadratureSpec) -> Result<f64, CliError> {
    if snr == 0.0 {
        return Ok(0.0);
    }
    Ok(match (s, constellation(s)) {
        (Scheme::Capacity, _) => capacity(snr)?,
        (Scheme::Bpsk, _) => mi_bpsk(snr, q)?,
        (_, Some(c)) => mutual_information(&c, &AwgnSpec::for_snr(&c, snr)?, q)?,
        (_, None) => unreachable!(),
    })
}

/// Linear SNR at which `snr / R(snr)` equals `eb_lin`, or `None` below the
/// low-SNR limit `ln 2`. Illinois regula falsi on `ln(snr)`.
pub fn snr_at_eb_over_n0<F>(eb_lin: f64, rate: F) -> Result<Option<f64>, CliError>
where
    F: Fn(f64) -> Result<f64, CliError>,
{
    let g = |x: f64| -> Result<f64, CliError> {
        let snr = x.exp();
        let r = rate(snr)?;
        Ok(if r > 0.0 {
            (snr / r).ln()
        } else {
            f64::INFINITY
        } - eb_lin.ln())
    };
    let (mut a, mut b) = (1e-9_f64.ln(), 1.0_f64.ln());
    let mut ga = g(a)?;
    if ga >= 0.0 {
        return Ok(None);
    }
    let mut gb = g(b)?;
    while gb < 0.0 {
        a = b;
        ga = gb;
        b += 2.0;
        if b > 60.0 {
            return Err(CliError::Numerical(format!(
                "no SNR reaches Eb/N0 = {eb_lin} below e^60"
            )));
        }
        gb = g(b)?;
    }
    let mut side = 0;
    for _ in 0..200 {
        if (b - a).abs() < 1e-13 * a.abs().max(b.abs()).max(1.0) {
            break;
        }
        let c = if ga.is_finite() && gb.is_finite() {
            (a * gb - b * ga) / (gb - ga)
        } else {
            0.5 * (a + b)
        };
        let gc = g(c)?;
        if gc == 0.0 {
            return Ok(Some(c.exp()));
        }
        if gc.signum() == gb.signum() {
            b = c;
            gb = gc;
            if side == 1 {
                ga *= 0.5;
            }
            side = 1;
        } else {
            a = c;
            ga = gc;
            if side == -1 {
                gb *= 0.5;
            }
            side = -1;
        }
    }
    Ok(Some((0.5 * (a + b)).exp()))
}

pub fn fig1(cfg: &RunConfig) -> Result<Table, CliError> {
    let q = quadrature(cfg);
    let schemes = [
        Scheme::Capacity,
        Scheme::Bpsk,
        Scheme::Qpsk,
        Scheme::Psk8,
        Scheme::Ask4,
    ];
    let mut t = base_table(
        cfg,
        &["snr_db_eb_n0", "capacity", "bpsk", "qpsk", "psk8", "ask4"],
    );
    t.meta(
        "values",
        "rate in bits/symbol at the SNR where SNR/rate equals Eb/N0; NaN below the ln 2 limit",
    );
    let grid = cfg.grid.values();
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&db| {
            let eb = 10f64.powf(db / 10.0);
            let mut row = vec![Cell::Float(db)];
            for s in schemes {
                let rate = |snr: f64| scheme_rate(s, snr, &q);
                let v = match snr_at_eb_over_n0(eb, rate)? {
                    Some(snr) => scheme_rate(s, snr, &q)?,
                    None => f64::NAN,
                };
                row.push(v.into());
            }
            Ok(row)
        })
        .collect::<Result<_, CliError>>()?;
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

struct CocktailPoint {
    ratio: f64,
    snr: f64,
    r1: f64,
    r2: f64,
    sum: f64,
    capacity: f64,
    bpsk: f64,
}

fn cocktail_points(cfg: &RunConfig) -> Result<Vec<CocktailPoint>, CliError> {
    let q = quadrature(cfg);
    let grid = cfg.grid.values();
    let pairs: Vec<(f64, f64)> = cfg
        .ratios
        .iter()
        .flat_map(|&r| grid.iter().map(move |&s| (r, s)))
        .collect();
    pairs
        .par_iter()
        .map(|&(ratio, snr)| {
            let p = CocktailParams::at_snr(snr, ratio)?;
            let r = rates(&p, &q)?;
            Ok(CocktailPoint {
                ratio,
                snr,
                r1: r.r1,
                r2: r.r2,
                sum: r.sum,
                capacity: capacity(snr)?,
                bpsk: mi_bpsk(snr, &q)?,
            })
        })
        .collect()
}

fn eb_db(snr: f64, rate: f64) -> Result<f64, CliError> {
    Ok(if rate > 0.0 {
        snr_to_eb_over_n0_db(snr, rate)?
    } else {
        f64::NAN
    })
}

pub fn fig2a(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = base_table(
        cfg,
        &[
            "ratio",
            "snr_linear",
            "r1",
            "r2",
            "r_sum",
            "capacity",
            "bpsk",
        ],
    );
    ratios_meta(&mut t, cfg);
    for p in cocktail_points(cfg)? {
        t.push(vec![
            p.ratio.into(),
            p.snr.into(),
            p.r1.into(),
            p.r2.into(),
            p.sum.into(),
            p.capacity.into(),
            p.bpsk.into(),
        ]);
    }
    Ok(t)
}

pub fn fig2b(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = base_table(
        cfg,
        &[
            "ratio",
            "snr_linear",
            "ebn0_db",
            "r1",
            "r2",
            "r_sum",
            "capacity",
            "capacity_ebn0_db",
            "bpsk",
            "bpsk_ebn0_db",
        ],
    );
    ratios_meta(&mut t, cfg);
    t.meta(
        "ebn0_db",
        "10*log10(snr_linear / rate) for the rate in the next column group",
    );
    for p in cocktail_points(cfg)? {
        t.push(vec![
            p.ratio.into(),
            p.snr.into(),
            eb_db(p.snr, p.sum)?.into(),
            p.r1.into(),
            p.r2.into(),
            p.sum.into(),
            p.capacity.into(),
            eb_db(p.snr, p.capacity)?.into(),
            p.bpsk.into(),
            eb_db(p.snr, p.bpsk)?.into(),
        ]);
    }
    Ok(t)
}

pub fn fig3a(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = base_table(
        cfg,
        &["ratio", "snr_linear", "r_sum", "capacity", "delta_r"],
    );
    ratios_meta(&mut t, cfg);
    t.meta("delta_r", "r_sum - capacity at the same E_in/sigma_N^2");
    for p in cocktail_points(cfg)? {
        t.push(vec![
            p.ratio.into(),
            p.snr.into(),
            p.sum.into(),
            p.capacity.into(),
            (p.sum - p.capacity).into(),
        ]);
    }
    Ok(t)
}

pub fn fig3b(cfg: &RunConfig) -> Result<Table, CliError> {
    let mut t = base_table(
        cfg,
        &[
            "ratio",
            "snr_linear",
            "ebn0_db",
            "r_sum",
            "capacity",
            "delta_r",
        ],
    );
    ratios_meta(&mut t, cfg);
    t.meta("delta_r", "r_sum - capacity at the same E_in/sigma_N^2")
        .meta("ebn0_db", "10*log10(snr_linear / r_sum)");
    for p in cocktail_points(cfg)? {
        t.push(vec![
            p.ratio.into(),
            p.snr.into(),
            eb_db(p.snr, p.sum)?.into(),
            p.sum.into(),
            p.capacity.into(),
            (p.sum - p.capacity).into(),
        ]);
    }
    Ok(t)
}

/// Rows run from the largest to the smallest `γ`.
pub fn fig4(cfg: &RunConfig) -> Result<Table, CliError> {
    let q = quadrature(cfg);
    let mut t = base_table(cfg, &["gamma", "mi_bpsk", "derivative", "method"]);
    let limit = derivative_limit_at_zero(&q)?;
    let gammas: Vec<String> = LIMIT_GAMMAS.iter().map(|g| g.to_string()).collect();
    t.meta("row_order", "gamma descending")
        .meta("derivative_crossover", DERIVATIVE_CROSSOVER)
        .meta(
            "finite_difference_step",
            "central, h = max(1e-6, 1e-3*gamma)",
        )
        .meta(
            "derivative_limit_at_zero",
            format!(
                "{} (extrapolated limit, Richardson over gamma = {})",
                crate::csv::format_float(limit),
                gammas.join(";")
            ),
        );
    let mut grid = cfg.grid.values();
    grid.reverse();
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&g| {
            let (d, method) = derivative(g, &q)?;
            Ok(vec![
                g.into(),
                mi_bpsk(g, &q)?.into(),
                d.into(),
                method.label().into(),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

pub fn sweep(cfg: &RunConfig) -> Result<Table, CliError> {
    let q = quadrature(cfg);
    let mut t = base_table(cfg, &["snr_linear", "rate", "capacity"]);
    t.meta("scheme", cfg.scheme.name());
    let grid = cfg.grid.values();
    let rows: Vec<Vec<Cell>> = grid
        .par_iter()
        .map(|&s| {
            Ok(vec![
                s.into(),
                scheme_rate(cfg.scheme, s, &q)?.into(),
                capacity(s)?.into(),
            ])
        })
        .collect::<Result<_, CliError>>()?;
    for r in rows {
        t.push(r);
    }
    Ok(t)
}

pub fn build(cfg: &RunConfig) -> Result<Table, CliError> {
    match cfg.command {
        Command::Fig1 => fig1(cfg),
        Command::Fig2a => fig2a(cfg),
        Command::Fig2b => fig2b(cfg),
        Command::Fig3a => fig3a(cfg),
        Command::Fig3b => fig3b(cfg),
        Command::Fig4 => fig4(cfg),
        Command::Sweep => sweep(cfg),
        Command::Verify => Ok(crate::verify::run_checks(cfg)?.table),
    }
}
