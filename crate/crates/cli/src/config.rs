//! Experiment configuration: a line-oriented `key = value` file plus
//! command-line overrides, resolved against preset defaults.
//!
//! Unknown keys are rejected rather than ignored, so a typo cannot silently
//! run the wrong experiment.

use std::collections::HashSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use stirap_ssi::dynamics::TimeGrid;
use stirap_ssi::model::ModelParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Detuning sweep (0 and 60) of the entropy diagnostics.
    Fig2,
    /// Dark-state coefficient trajectories at zero detuning.
    Fig3,
    /// GHZ reduction report; no time evolution.
    Ghz,
    Custom,
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            "ghz" => Ok(Preset::Ghz),
            "custom" => Ok(Preset::Custom),
            other => Err(format!(
                "unknown preset `{other}` (expected fig2, fig3, ghz, or custom)"
            )),
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Preset::Fig2 => "fig2",
            Preset::Fig3 => "fig3",
            Preset::Ghz => "ghz",
            Preset::Custom => "custom",
        };
        write!(f, "{name}")
    }
}

/// Fully resolved experiment: model, grid, detuning sweep, output location.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub n: u32,
    pub mu: u32,
    pub g10_tau: f64,
    pub g20_tau: f64,
    pub t_over_tau: f64,
    pub delta_tau_list: Vec<f64>,
    pub s_start: f64,
    pub s_end: f64,
    pub steps: u32,
    pub record_every: u32,
    pub out_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn model_params(&self, delta_tau: f64) -> stirap_ssi::Result<ModelParams> {
        ModelParams::new(
            self.n,
            self.mu,
            self.g10_tau,
            self.g20_tau,
            self.t_over_tau,
            delta_tau,
        )
    }

    pub fn time_grid(&self) -> stirap_ssi::Result<TimeGrid> {
        TimeGrid::new(self.s_start, self.s_end, self.steps, self.record_every)
    }
}

/// Partially specified configuration; unset keys fall back to the preset
/// defaults when resolving.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigOverlay {
    pub preset: Option<Preset>,
    pub n: Option<u32>,
    pub mu: Option<u32>,
    pub g10_tau: Option<f64>,
    pub g20_tau: Option<f64>,
    pub t_over_tau: Option<f64>,
    pub delta_tau_list: Option<Vec<f64>>,
    pub s_start: Option<f64>,
    pub s_end: Option<f64>,
    pub steps: Option<u32>,
    pub record_every: Option<u32>,
    pub out_dir: Option<PathBuf>,
}

impl ConfigOverlay {
    /// Later overlays win key by key; used to put command-line flags on top
    /// of the config file.
    pub fn merged_over(self, base: ConfigOverlay) -> ConfigOverlay {
        ConfigOverlay {
            preset: self.preset.or(base.preset),
            n: self.n.or(base.n),
            mu: self.mu.or(base.mu),
            g10_tau: self.g10_tau.or(base.g10_tau),
            g20_tau: self.g20_tau.or(base.g20_tau),
            t_over_tau: self.t_over_tau.or(base.t_over_tau),
            delta_tau_list: self.delta_tau_list.or(base.delta_tau_list),
            s_start: self.s_start.or(base.s_start),
            s_end: self.s_end.or(base.s_end),
            steps: self.steps.or(base.steps),
            record_every: self.record_every.or(base.record_every),
            out_dir: self.out_dir.or(base.out_dir),
        }
    }

    /// Apply preset defaults under the explicit keys.
    ///
    /// Every preset shares the reference parameter set (n = 2, mu = 0,
    /// g10·tau = g20·tau = 15, T = 4/3·tau); presets differ in their default
    /// detuning sweep. The window defaults to [-3, T/tau + 3] at 12000
    /// steps, recording every 10th step.
    pub fn resolve(self) -> Result<ExperimentConfig, ConfigError> {
        let preset = self.preset.unwrap_or(Preset::Custom);
        let default_detunings = match preset {
            Preset::Fig2 => vec![0.0, 60.0],
            Preset::Fig3 | Preset::Ghz | Preset::Custom => vec![0.0],
        };
        let t_over_tau = self.t_over_tau.unwrap_or(4.0 / 3.0);
        let config = ExperimentConfig {
            preset,
            n: self.n.unwrap_or(2),
            mu: self.mu.unwrap_or(0),
            g10_tau: self.g10_tau.unwrap_or(15.0),
            g20_tau: self.g20_tau.unwrap_or(15.0),
            t_over_tau,
            delta_tau_list: self.delta_tau_list.unwrap_or(default_detunings),
            s_start: self.s_start.unwrap_or(-3.0),
            s_end: self.s_end.unwrap_or(t_over_tau + 3.0),
            steps: self.steps.unwrap_or(12_000),
            record_every: self.record_every.unwrap_or(10),
            out_dir: self.out_dir.unwrap_or_else(|| PathBuf::from("out")),
        };

        // surface invalid combinations now, not once threads are running
        config
            .model_params(0.0)
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        if config.preset != Preset::Ghz {
            config
                .time_grid()
                .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        }
        if config.delta_tau_list.is_empty() {
            return Err(ConfigError::Invalid(
                "delta_tau_list must name at least one detuning".into(),
            ));
        }
        let mut seen = HashSet::new();
        for &d in &config.delta_tau_list {
            if !d.is_finite() {
                return Err(ConfigError::Invalid(format!("detuning {d} is not finite")));
            }
            if !seen.insert(d.to_bits()) {
                return Err(ConfigError::Invalid(format!(
                    "detuning {d} listed twice; output files would collide"
                )));
            }
        }
        Ok(config)
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum ConfigError {
    UnknownKey {
        line: usize,
        key: String,
    },
    DuplicateKey {
        line: usize,
        key: String,
    },
    Malformed {
        line: usize,
        message: String,
    },
    BadValue {
        line: usize,
        key: String,
        message: String,
    },
    Invalid(String),
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigError::UnknownKey { line, key } => {
                write!(f, "line {line}: unknown key `{key}`")
            }
            ConfigError::DuplicateKey { line, key } => {
                write!(f, "line {line}: key `{key}` already set")
            }
            ConfigError::Malformed { line, message } => write!(f, "line {line}: {message}"),
            ConfigError::BadValue { line, key, message } => {
                write!(f, "line {line}: key `{key}`: {message}")
            }
            ConfigError::Invalid(message) => write!(f, "invalid configuration: {message}"),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Parse a `key = value` configuration with `#` comments. Every key may
/// appear at most once; unknown keys are errors.
pub fn parse_config(text: &str) -> Result<ConfigOverlay, ConfigError> {
    let mut overlay = ConfigOverlay::default();
    let mut seen: HashSet<String> = HashSet::new();

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(ConfigError::Malformed {
                line,
                message: format!("expected `key = value`, found `{content}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            return Err(ConfigError::DuplicateKey {
                line,
                key: key.to_string(),
            });
        }
        apply_key(&mut overlay, key, value, line)?;
    }
    Ok(overlay)
}

fn apply_key(
    overlay: &mut ConfigOverlay,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(), ConfigError> {
    let bad = |message: String| ConfigError::BadValue {
        line,
        key: key.to_string(),
        message,
    };
    match key {
        "preset" => overlay.preset = Some(value.parse().map_err(bad)?),
        "n" => {
            let n: u32 = parse_num(value).map_err(bad)?;
            if n < 2 {
                return Err(bad(format!("n = {n}, but n >= 2 is required")));
            }
            overlay.n = Some(n);
        }
        "mu" => overlay.mu = Some(parse_num(value).map_err(bad)?),
        "g10_tau" => overlay.g10_tau = Some(parse_positive(value).map_err(bad)?),
        "g20_tau" => overlay.g20_tau = Some(parse_positive(value).map_err(bad)?),
        "t_over_tau" => overlay.t_over_tau = Some(parse_num(value).map_err(bad)?),
        "delta_tau_list" => overlay.delta_tau_list = Some(parse_list(value).map_err(bad)?),
        "s_start" => overlay.s_start = Some(parse_num(value).map_err(bad)?),
        "s_end" => overlay.s_end = Some(parse_num(value).map_err(bad)?),
        "steps" => {
            let steps: u32 = parse_num(value).map_err(bad)?;
            if steps < 100 {
                return Err(bad(format!(
                    "steps = {steps}, but at least 100 are required"
                )));
            }
            overlay.steps = Some(steps);
        }
        "record_every" => {
            let every: u32 = parse_num(value).map_err(bad)?;
            if every == 0 {
                return Err(bad("record_every must be positive".into()));
            }
            overlay.record_every = Some(every);
        }
        "out_dir" => overlay.out_dir = Some(PathBuf::from(value)),
        other => {
            return Err(ConfigError::UnknownKey {
                line,
                key: other.to_string(),
            })
        }
    }
    Ok(())
}

fn parse_num<T: FromStr>(value: &str) -> Result<T, String>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| format!("cannot parse `{value}`: {e}"))
}

fn parse_positive(value: &str) -> Result<f64, String> {
    let x: f64 = parse_num(value)?;
    if !x.is_finite() || x <= 0.0 {
        return Err(format!("`{value}` must be positive and finite"));
    }
    Ok(x)
}

/// Comma-separated list of detunings, e.g. `0, 60`.
pub fn parse_list(value: &str) -> Result<Vec<f64>, String> {
    value
        .split(',')
        .map(|part| parse_num(part.trim()))
        .collect()
}
