use std::path::PathBuf;

use cocktail_core::quadrature::{DEFAULT_HERMITE_ORDER, MAX_HERMITE_ORDER};

use crate::CliError;

pub const DEFAULT_SEED: u64 = 20_240_611;
pub const DEFAULT_MC_SAMPLES: u64 = 10_000_000;
pub const DEFAULT_RATIOS: [f64; 2] = [0.3, 0.9];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Fig1,
    Fig2a,
    Fig2b,
    Fig3a,
    Fig3b,
    Fig4,
    Sweep,
    Verify,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig1 => "fig1",
            Self::Fig2a => "fig2a",
            Self::Fig2b => "fig2b",
            Self::Fig3a => "fig3a",
            Self::Fig3b => "fig3b",
            Self::Fig4 => "fig4",
            Self::Sweep => "sweep",
            Self::Verify => "verify",
        }
    }

    /// Default grid and what its values mean.
    pub fn default_grid(&self) -> GridSpec {
        let (min, max, points, spacing) = match self {
            Self::Fig1 => (-1.5, 20.0, 44, Spacing::Linear),
            Self::Fig2a => (0.01, 3.0, 300, Spacing::Linear),
            Self::Fig2b => (1e-2, 1e4, 121, Spacing::Log),
            Self::Fig3a => (0.01, 1.5, 150, Spacing::Linear),
            Self::Fig3b => (1e-3, 10.0, 81, Spacing::Log),
            Self::Fig4 => (1e-3, 100.0, 101, Spacing::Log),
            Self::Sweep => (1e-3, 1e3, 61, Spacing::Log),
            Self::Verify => (1e-3, 100.0, 50, Spacing::Log),
        };
        GridSpec {
            min,
            max,
            points,
            spacing,
        }
    }

    pub fn axis_label(&self) -> &'static str {
        match self {
            Self::Fig1 => "Eb/N0 in dB",
            Self::Fig4 => "gamma = A^2/sigma_N^2, linear",
            Self::Sweep | Self::Verify => "Es/sigma_N^2, linear",
            _ => "E_in/sigma_N^2, linear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Bpsk,
    Qpsk,
    Psk8,
    Ask4,
    Capacity,
}

impl Scheme {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bpsk => "bpsk",
            Self::Qpsk => "qpsk",
            Self::Psk8 => "psk8",
            Self::Ask4 => "ask4",
            Self::Capacity => "capacity",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl GridSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(CliError::Usage(format!(
                "grid needs finite --snr-min < --snr-max, got {} and {}",
                self.min, self.max
            )));
        }
        if self.points < 2 {
            return Err(CliError::Usage(format!(
                "--snr-points must be at least 2, got {}",
                self.points
            )));
        }
        if self.spacing == Spacing::Log && !(self.min > 0.0) {
            return Err(CliError::Usage(format!(
                "this command uses a logarithmic grid; --snr-min must be positive, got {}",
                self.min
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        let mut v: Vec<f64> = match self.spacing {
            Spacing::Linear => (0..n)
                .map(|k| self.min + (self.max - self.min) * k as f64 / (n - 1) as f64)
                .collect(),
            Spacing::Log => {
                let (a, b) = (self.min.log10(), self.max.log10());
                (0..n)
                    .map(|k| 10f64.powf(a + (b - a) * k as f64 / (n - 1) as f64))
                    .collect()
            }
        };
        v[0] = self.min;
        v[n - 1] = self.max;
        v
    }

    pub fn describe(&self) -> String {
        let s = match self.spacing {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        };
        format!(
            "{} points, {s} spacing, [{}, {}]",
            self.points, self.min, self.max
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub grid: GridSpec,
    pub ratios: Vec<f64>,
    pub quad_order: usize,
    pub mc_samples: u64,
    pub seed: u64,
    pub scheme: Scheme,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            grid: command.default_grid(),
            ratios: DEFAULT_RATIOS.to_vec(),
            quad_order: DEFAULT_HERMITE_ORDER,
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: DEFAULT_SEED,
            scheme: Scheme::Bpsk,
            out: None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.grid.validate()?;
        if self.ratios.is_empty() {
            return Err(CliError::Usage("--ratios needs at least one value".into()));
        }
        if let Some(r) = self.ratios.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(CliError::Usage(format!(
                "ratios must lie strictly between 0 and 1, got {r}"
            )));
        }
        if !(2..=MAX_HERMITE_ORDER).contains(&self.quad_order) {
            return Err(CliError::Usage(format!(
                "--quad-order must lie in [2, {MAX_HERMITE_ORDER}], got {}",
                self.quad_order
            )));
        }
        if self.mc_samples < cocktail_core::montecarlo::MIN_SAMPLES {
            return Err(CliError::Usage(format!(
                "--mc-samples must be at least {}, got {}",
                cocktail_core::montecarlo::MIN_SAMPLES,
                self.mc_samples
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let g = GridSpec {
            min: 1e-3,
            max: 1e2,
            points: 6,
            spacing: Spacing::Log,
        };
        let v = g.values();
        assert_eq!(v.len(), 6);
        assert_eq!(v[0], 1e-3);
        assert_eq!(v[5], 1e2);
        assert!((v[3] - 1.0).abs() < 1e-12);
        let lin = Command::Fig3a.default_grid().values();
        assert_eq!(lin.len(), 150);
        assert!((lin[1] - 0.02).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_configs() {
        let mut c = RunConfig::new(Command::Fig2a);
        assert!(c.validate().is_ok());
        c.ratios = vec![0.3, 1.0];
        assert!(matches!(c.validate(), Err(CliError::Usage(_))));
        c.ratios = vec![0.5];
        c.grid.points = 1;
        assert!(c.validate().is_err());
        c.grid.points = 5;
        c.grid.min = 3.0;
        assert!(c.validate().is_err());

        let mut c = RunConfig::new(Command::Fig4);
        c.grid.min = 0.0;
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(Command::Fig4);
        c.quad_order = 1000;
        assert!(c.validate().is_err());
        let mut c = RunConfig::new(Command::Verify);
        c.mc_samples = 10;
        assert!(c.validate().is_err());
    }
}
