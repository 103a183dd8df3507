//! Experiment configuration: a flat TOML file with a nested `[law]` table,
//! overridden key by key from the command line.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vacancy_core::model::RadiusLaw;
use vacancy_core::percolation::Phase;

/// Environment variable supplying the seed when neither a flag nor the
/// config file sets one.
pub const SEED_ENV: &str = "VACANCY_SEED";

/// Rejected configuration, reported with exit status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub field: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid config field `{}`: {}", self.field, self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

/// Every parameter of every subcommand. Keys a subcommand does not use are
/// echoed but ignored.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<String>,
    pub seed: Option<u64>,
    pub out_dir: PathBuf,
    pub format: Format,
    /// Worker threads; 0 lets the pool pick.
    pub threads: usize,
    pub law: RadiusLaw,
    pub lambda: f64,
    pub lambdas: Vec<f64>,
    pub alpha: f64,
    pub alphas: Vec<f64>,
    pub reach_factor: f64,
    pub b: f64,
    pub kappa: f64,
    pub n_max: u32,
    pub n_empirical: u32,
    pub n_direct: u32,
    pub n_reps: u64,
    pub side: f64,
    pub scales: Vec<f64>,
    pub phase: Phase,
    pub target: f64,
    pub tol: f64,
    pub budget: u64,
    pub lambda_lo: Option<f64>,
    pub lambda_hi: Option<f64>,
    pub k_max: u32,
    pub d: u32,
    /// `[x0, x1, y0, y1]`.
    pub window: [f64; 4],
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: None,
            seed: None,
            out_dir: PathBuf::from("vacancy-out"),
            format: Format::Both,
            threads: 0,
            law: RadiusLaw::fixed(1.0),
            lambda: 0.02,
            lambdas: Vec::new(),
            alpha: 8.0,
            alphas: vec![4.0, 8.0, 16.0],
            reach_factor: 1e3,
            b: 8.0,
            kappa: 1e3,
            n_max: 6,
            n_empirical: 1,
            n_direct: 1,
            n_reps: 10_000,
            side: 64.0,
            scales: vec![64.0],
            phase: Phase::Occupied,
            target: 0.5,
            tol: 0.02,
            budget: 400_000,
            lambda_lo: None,
            lambda_hi: None,
            k_max: 32,
            d: 3,
            window: [0.0, 10.0, 0.0, 10.0],
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::new("<file>", e.to_string().trim_end()))
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::new("<file>", format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }

    /// Final seed: flag or file value, else the environment, else 0.
    pub fn resolve_seed(&mut self, env: Option<&str>) -> Result<u64, ConfigError> {
        if self.seed.is_none() {
            if let Some(text) = env {
                let seed = text
                    .trim()
                    .parse::<u64>()
                    .map_err(|e| ConfigError::new(SEED_ENV, format!("`{text}` is not a u64 seed: {e}")))?;
                self.seed = Some(seed);
            }
        }
        Ok(*self.seed.get_or_insert(0))
    }

    /// Checks the keys `command` reads.
    pub fn validate(&self, command: &str) -> Result<(), ConfigError> {
        if let Some(c) = &self.command {
            if c != command {
                return Err(ConfigError::new(
                    "command",
                    format!("file is for `{c}` but `{command}` was requested"),
                ));
            }
        }
        let law_needed = !matches!(command, "layout-dump" | "knitting-check");
        if law_needed {
            self.law.validate().map_err(|e| ConfigError::new("law", e.to_string()))?;
        }
        let positive = |field: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::new(field, format!("must be finite and > 0, got {v}")))
            }
        };
        let all_positive = |field: &str, vs: &[f64]| -> Result<(), ConfigError> {
            vs.iter().try_for_each(|&v| positive(field, v))
        };
        let reps = || {
            if self.n_reps == 0 {
                Err(ConfigError::new("n_reps", "must be >= 1"))
            } else {
                Ok(())
            }
        };
        let ladder = || -> Result<(), ConfigError> {
            positive("lambda", self.lambda)?;
            positive("b", self.b)?;
            if !(self.kappa >= 10.0 && self.kappa.is_finite()) {
                return Err(ConfigError::new("kappa", format!("must be >= 10, got {}", self.kappa)));
            }
            if self.n_max == 0 {
                return Err(ConfigError::new("n_max", "must be >= 1"));
            }
            reps()
        };
        match command {
            "sample" => {
                positive("lambda", self.lambda)?;
                self.window_rect()?;
            }
            "sweep" => {
                if self.lambdas.is_empty() {
                    return Err(ConfigError::new("lambdas", "sweep needs at least one intensity"));
                }
                all_positive("lambdas", &self.lambdas)?;
                positive("side", self.side)?;
                reps()?;
            }
            "recursion-check" => {
                all_positive("lambdas", &self.lambdas_or_lambda())?;
                if self.alphas.is_empty() {
                    return Err(ConfigError::new("alphas", "needs at least one scale"));
                }
                all_positive("alphas", &self.alphas)?;
                if !(self.kappa >= 10.0 && self.kappa.is_finite()) {
                    return Err(ConfigError::new("kappa", format!("must be >= 10, got {}", self.kappa)));
                }
                reps()?;
            }
            "summability" => {
                ladder()?;
                if self.n_empirical > self.n_max {
                    return Err(ConfigError::new("n_empirical", "must not exceed n_max"));
                }
            }
            "vacancy-cert" => {
                ladder()?;
                if self.n_direct == 0 || self.n_direct > self.n_max {
                    return Err(ConfigError::new("n_direct", "must lie in 1..=n_max"));
                }
            }
            "slice-check" => {
                positive("lambda", self.lambda)?;
                if self.d < 3 {
                    return Err(ConfigError::new("d", format!("must be >= 3, got {}", self.d)));
                }
                self.window_rect()?;
                reps()?;
            }
            "threshold" => {
                if self.scales.is_empty() {
                    return Err(ConfigError::new("scales", "needs at least one side length"));
                }
                all_positive("scales", &self.scales)?;
                if !(self.target > 0.0 && self.target < 1.0) {
                    return Err(ConfigError::new("target", "must lie in (0, 1)"));
                }
                positive("tol", self.tol)?;
                reps()?;
                if self.budget < self.n_reps {
                    return Err(ConfigError::new("budget", "must be at least n_reps"));
                }
                if let Some(lo) = self.lambda_lo {
                    positive("lambda_lo", lo)?;
                }
                if let Some(hi) = self.lambda_hi {
                    positive("lambda_hi", hi)?;
                }
            }
            "lambda-d" | "e-event" => {
                all_positive("lambdas", &self.lambdas_or_lambda())?;
                if self.k_max == 0 {
                    return Err(ConfigError::new("k_max", "must be >= 1"));
                }
                reps()?;
            }
            "layout-dump" | "knitting-check" => {
                positive("alpha", self.alpha)?;
                if !(self.reach_factor >= 10.0 && self.reach_factor.is_finite()) {
                    return Err(ConfigError::new(
                        "reach_factor",
                        format!("must be >= 10, got {}", self.reach_factor),
                    ));
                }
            }
            other => return Err(ConfigError::new("command", format!("unknown command `{other}`"))),
        }
        Ok(())
    }

    /// `lambdas` when given, else the single `lambda`.
    pub fn lambdas_or_lambda(&self) -> Vec<f64> {
        if self.lambdas.is_empty() {
            vec![self.lambda]
        } else {
            self.lambdas.clone()
        }
    }

    pub fn window_rect(&self) -> Result<vacancy_core::geometry::Rect, ConfigError> {
        let [x0, x1, y0, y1] = self.window;
        vacancy_core::geometry::Rect::from_bounds(x0, x1, y0, y1)
            .map_err(|e| ConfigError::new("window", e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_law_and_defaults() {
        let c = ExperimentConfig::from_toml(
            "lambda = 0.05\nn_reps = 100\n[law]\nkind = \"pareto\"\ntail_exponent = 3.0\nscale = 1.0\n",
        )
        .unwrap();
        assert_eq!(c.law, RadiusLaw::pareto(3.0, 1.0));
        assert_eq!(c.lambda, 0.05);
        assert_eq!(c.b, 8.0);
    }

    #[test]
    fn zero_atom_nests_twice() {
        let c = ExperimentConfig::from_toml(
            "[law]\nkind = \"zero_atom\"\np0 = 0.5\n[law.inner]\nkind = \"fixed\"\nradius = 2.0\n",
        )
        .unwrap();
        assert_eq!(c.law, RadiusLaw::zero_atom(0.5, RadiusLaw::fixed(2.0)));
    }

    #[test]
    fn unknown_key_names_the_field() {
        let e = ExperimentConfig::from_toml("lamda = 0.1\n").unwrap_err();
        assert!(e.message.contains("lamda"), "{e}");
        assert!(e.message.contains("line 1"), "{e}");
    }

    #[test]
    fn echo_round_trips() {
        let mut c = ExperimentConfig {
            command: Some("threshold".into()),
            lambda_lo: Some(0.1),
            law: RadiusLaw::zero_atom(0.25, RadiusLaw::exponential(2.0)),
            ..ExperimentConfig::default()
        };
        c.resolve_seed(None).unwrap();
        assert_eq!(ExperimentConfig::from_toml(&c.to_toml()).unwrap(), c);
    }

    #[test]
    fn seed_precedence() {
        let mut c = ExperimentConfig::default();
        assert_eq!(c.resolve_seed(Some("17")).unwrap(), 17);
        let mut c = ExperimentConfig {
            seed: Some(3),
            ..ExperimentConfig::default()
        };
        assert_eq!(c.resolve_seed(Some("17")).unwrap(), 3);
        let mut c = ExperimentConfig::default();
        assert_eq!(c.resolve_seed(None).unwrap(), 0);
        assert_eq!(c.resolve_seed(Some("x")).map_err(|e| e.field), Ok(0));
        let mut c = ExperimentConfig::default();
        assert_eq!(c.resolve_seed(Some("x")).unwrap_err().field, SEED_ENV);
    }

    #[test]
    fn bad_law_is_rejected() {
        let c = ExperimentConfig {
            law: RadiusLaw::pareto(-1.0, 1.0),
            ..ExperimentConfig::default()
        };
        assert_eq!(c.validate("summability").unwrap_err().field, "law");
        assert!(c.validate("knitting-check").is_ok());
    }
}
