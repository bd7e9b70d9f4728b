//! Run configuration merged from command-line flags, `IDSTAT_*` environment
//! variables, an optional `key=value` file and built-in defaults, in that
//! order of precedence.

use std::collections::BTreeMap;
use std::path::Path;

use clap::ValueEnum;
use idstat::statmech::{Constants, MAX_ENUM_LEVELS, MAX_ENUM_PARTICLES};

use crate::error::CliError;

/// Mass of a helium-4 atom, the default particle in SI mode.
pub const DEFAULT_SI_MASS: f64 = 6.646_477_3e-27;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Dimensionless,
    Si,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Pretty,
}

/// Values as they arrive from clap (flag or environment) before merging.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub output: Option<OutputFormat>,
    pub seed: Option<u64>,
    pub max_n: Option<usize>,
    pub max_levels: Option<usize>,
    pub mass: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub output: OutputFormat,
    pub seed: u64,
    pub max_n: usize,
    pub max_levels: usize,
    pub mass: f64,
}

impl RunConfig {
    pub fn constants(&self) -> Constants {
        match self.mode {
            Mode::Dimensionless => Constants {
                mass: self.mass,
                ..Constants::dimensionless()
            },
            Mode::Si => Constants::si(self.mass),
        }
    }

    pub fn resolve(overrides: &Overrides, file: Option<&Path>) -> Result<Self, CliError> {
        let from_file = match file {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::input(format!("cannot read config {}: {e}", path.display())))?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        let file_value = |key: &str| from_file.get(key).map(String::as_str);

        let mode = match (overrides.mode, file_value("mode")) {
            (Some(m), _) => m,
            (None, Some(v)) => {
                Mode::from_str(v, true).map_err(|_| CliError::input(format!("config: bad mode {v:?}")))?
            }
            (None, None) => Mode::Dimensionless,
        };
        let output = match (overrides.output, file_value("output")) {
            (Some(o), _) => o,
            (None, Some(v)) => {
                OutputFormat::from_str(v, true).map_err(|_| CliError::input(format!("config: bad output {v:?}")))?
            }
            (None, None) => OutputFormat::Json,
        };
        let seed = pick(overrides.seed, file_value("seed"), "seed")?.unwrap_or(0);
        let max_n = pick(overrides.max_n, file_value("max_n"), "max_n")?.unwrap_or(MAX_ENUM_PARTICLES);
        let max_levels = pick(overrides.max_levels, file_value("max_levels"), "max_levels")?.unwrap_or(MAX_ENUM_LEVELS);
        let mass = pick(overrides.mass, file_value("mass"), "mass")?.unwrap_or(match mode {
            Mode::Dimensionless => 1.0,
            Mode::Si => DEFAULT_SI_MASS,
        });

        if max_n == 0 || max_n > MAX_ENUM_PARTICLES {
            return Err(CliError::input(format!(
                "max_n must be in 1..={MAX_ENUM_PARTICLES}, got {max_n}"
            )));
        }
        if max_levels == 0 || max_levels > MAX_ENUM_LEVELS {
            return Err(CliError::input(format!(
                "max_levels must be in 1..={MAX_ENUM_LEVELS}, got {max_levels}"
            )));
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(CliError::input(format!("mass must be positive, got {mass}")));
        }
        Ok(Self {
            mode,
            output,
            seed,
            max_n,
            max_levels,
            mass,
        })
    }
}

fn pick<T: std::str::FromStr>(over: Option<T>, file: Option<&str>, key: &str) -> Result<Option<T>, CliError> {
    match (over, file) {
        (Some(v), _) => Ok(Some(v)),
        (None, Some(text)) => text
            .parse()
            .map(Some)
            .map_err(|_| CliError::input(format!("config: bad {key} {text:?}"))),
        (None, None) => Ok(None),
    }
}

const CONFIG_KEYS: [&str; 6] = ["mode", "output", "seed", "max_n", "max_levels", "mass"];

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::input(format!("config line {}: expected key=value", i + 1)))?;
        let key = key.trim().to_ascii_lowercase().replace('-', "_");
        if !CONFIG_KEYS.contains(&key.as_str()) {
            return Err(CliError::input(format!("config line {}: unknown key {key:?}", i + 1)));
        }
        out.insert(key, value.trim().to_string());
    }
    Ok(out)
}
