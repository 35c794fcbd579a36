use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;

/// A verification suite. `All` expands to every other variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Lemma1,
    Lemma2,
    Lemma3,
    Beurling,
    Hitt,
    Defect,
    Almost,
    ThetaPsi,
    All,
}

impl Suite {
    /// Every concrete suite, in report order.
    pub const EACH: [Suite; 8] = [
        Suite::Lemma1,
        Suite::Lemma2,
        Suite::Lemma3,
        Suite::Beurling,
        Suite::Hitt,
        Suite::Defect,
        Suite::Almost,
        Suite::ThetaPsi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lemma1 => "lemma1",
            Suite::Lemma2 => "lemma2",
            Suite::Lemma3 => "lemma3",
            Suite::Beurling => "beurling",
            Suite::Hitt => "hitt",
            Suite::Defect => "defect",
            Suite::Almost => "almost",
            Suite::ThetaPsi => "theta-psi",
            Suite::All => "all",
        }
    }

    /// Randomized trials run when `--trials` is absent. Suites with fixed
    /// checks append them after the randomized trials.
    pub fn default_trials(self) -> usize {
        match self {
            Suite::Lemma1 => 1000,
            Suite::Lemma2 => 40,
            Suite::Lemma3 => 100,
            Suite::Beurling => 20,
            Suite::Hitt => 40,
            Suite::Defect => 30,
            Suite::Almost => 60,
            Suite::ThetaPsi => 10,
            Suite::All => 0,
        }
    }

    /// Sorted, deduplicated concrete suites.
    pub fn expand(list: &[Suite]) -> Vec<Suite> {
        let mut out: Vec<Suite> = if list.contains(&Suite::All) {
            Suite::EACH.to_vec()
        } else {
            list.to_vec()
        };
        out.sort();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    /// One certificate record per line.
    #[default]
    Json,
    /// One row per residual.
    Csv,
}

/// Parameters shared by every suite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteConfig {
    pub order: usize,
    /// Overrides [`Suite::default_trials`].
    pub trials: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    pub rank_tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            order: DEFAULT_ORDER,
            trials: None,
            seed: 0,
            tol: DEFAULT_TOL,
            rank_tol: DEFAULT_RANK_TOL,
        }
    }
}

impl SuiteConfig {
    pub fn trials_for(&self, suite: Suite) -> usize {
        self.trials.unwrap_or_else(|| suite.default_trials())
    }

    pub fn validate(&self) -> Result<(), CliError> {
        check_order(self.order)?;
        check_unit("tol", self.tol)?;
        check_unit("rank-tol", self.rank_tol)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub suite: SuiteConfig,
    pub suites: Vec<Suite>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        self.suite.validate()?;
        if self.suites.is_empty() {
            return Err(CliError::Usage("no suite selected".into()));
        }
        Ok(())
    }
}

pub const DEFAULT_ORDER: usize = 128;
pub const MIN_ORDER: usize = 8;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

fn check_order(order: usize) -> Result<(), CliError> {
    if order < MIN_ORDER {
        return Err(CliError::Usage(format!("order must be at least {MIN_ORDER}, got {order}")));
    }
    Ok(())
}

fn check_unit(name: &str, x: f64) -> Result<(), CliError> {
    if !(x > 0.0 && x < 1.0) {
        return Err(CliError::Usage(format!("{name} must lie in (0, 1), got {x}")));
    }
    Ok(())
}

/// Clap value parser for `--order`.
pub fn parse_order(s: &str) -> Result<usize, String> {
    let order: usize = s.parse().map_err(|e| format!("{e}"))?;
    check_order(order).map_err(|e| e.to_string())?;
    Ok(order)
}

/// Clap value parser for tolerances.
pub fn parse_unit(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    check_unit("tolerance", x).map_err(|e| e.to_string())?;
    Ok(x)
}
