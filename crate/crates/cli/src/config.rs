//! Flat key-value sweep configuration: parsing, defaults, and validation.
//!
//! ```text
//! # lines starting with # are comments
//! n_list = 32, 64
//! k_list = 3, 4
//! function_names = abs_half, square
//! t_list = h, 2h, 0.25, auto-delta
//! x_points = 4097
//! h_points = 512
//! dk_strategy = alternating
//! output_format = csv
//! seed = 42
//! slack = 1e-9
//! ```

use std::fmt;
use std::path::Path;

use schoenberg::{find_function, DkStrategy, DEFAULT_SLACK};

/// Configuration problem, always naming the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(message.into()))
}

/// A step entry of `t_list`: a literal value or a mesh-derived keyword.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSpec {
    /// The mesh gauge `h`.
    Gauge,
    /// Twice the mesh gauge.
    TwoGauge,
    /// The tuned step that makes the lower-bound factor equal 5.
    AutoDelta,
    Value(f64),
}

impl StepSpec {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        match text.trim() {
            "h" => Ok(StepSpec::Gauge),
            "2h" => Ok(StepSpec::TwoGauge),
            "auto-delta" | "auto-\u{3b4}" | "delta" => Ok(StepSpec::AutoDelta),
            other => match other.parse::<f64>() {
                Ok(v) if v > 0.0 && v <= 0.5 => Ok(StepSpec::Value(v)),
                Ok(v) => err(format!("field `t_list`: t = {v} outside (0, 0.5]")),
                Err(_) => err(format!(
                    "field `t_list`: `{other}` is not a number or one of h, 2h, auto-delta"
                )),
            },
        }
    }

    /// Resolves the entry against a mesh gauge and its tuned step.
    pub fn resolve(&self, gauge: f64, delta: f64) -> f64 {
        match self {
            StepSpec::Gauge => gauge,
            StepSpec::TwoGauge => 2.0 * gauge,
            StepSpec::AutoDelta => delta,
            StepSpec::Value(v) => *v,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrategyKind {
    Alternating,
    GridLp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub n_list: Vec<usize>,
    pub k_list: Vec<usize>,
    pub t_list: Vec<StepSpec>,
    pub function_names: Vec<String>,
    pub x_points: usize,
    pub h_points: usize,
    pub dk_strategy: StrategyKind,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub slack: f64,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config `{}`: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut n_list: Option<Vec<usize>> = None;
        let mut k_list: Option<Vec<usize>> = None;
        let mut function_names: Option<Vec<String>> = None;
        let mut t_list = vec![
            StepSpec::Gauge,
            StepSpec::TwoGauge,
            StepSpec::Value(0.25),
            StepSpec::AutoDelta,
        ];
        let mut x_points = 4097usize;
        let mut h_points = 512usize;
        let mut dk_strategy = StrategyKind::Alternating;
        let mut output_format = OutputFormat::Csv;
        let mut seed = 0u64;
        let mut slack = DEFAULT_SLACK;

        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("line {}: expected `key = value`", lineno + 1));
            };
            let (key, value) = (key.trim(), value.trim());
            match key {
                "n_list" => n_list = Some(parse_usize_list(key, value)?),
                "k_list" => k_list = Some(parse_usize_list(key, value)?),
                "function_names" => {
                    function_names = Some(
                        value
                            .split(',')
                            .map(|s| s.trim().to_string())
                            .filter(|s| !s.is_empty())
                            .collect(),
                    )
                }
                "t_list" => {
                    t_list = value
                        .split(',')
                        .map(StepSpec::parse)
                        .collect::<Result<_, _>>()?
                }
                "x_points" => x_points = parse_scalar(key, value)?,
                "h_points" => h_points = parse_scalar(key, value)?,
                "dk_strategy" => {
                    dk_strategy = match value {
                        "alternating" => StrategyKind::Alternating,
                        "grid_lp" => StrategyKind::GridLp,
                        other => {
                            return err(format!(
                                "field `dk_strategy`: `{other}` is not alternating or grid_lp"
                            ))
                        }
                    }
                }
                "output_format" => {
                    output_format = match value {
                        "csv" => OutputFormat::Csv,
                        "json" => OutputFormat::Json,
                        other => {
                            return err(format!(
                                "field `output_format`: `{other}` is not csv or json"
                            ))
                        }
                    }
                }
                "seed" => seed = parse_scalar(key, value)?,
                "slack" => {
                    slack = value.parse::<f64>().map_err(|_| {
                        ConfigError(format!("field `slack`: `{value}` is not a number"))
                    })?
                }
                other => return err(format!("unknown config field `{other}`")),
            }
        }

        let config = SweepConfig {
            n_list: n_list.ok_or_else(|| ConfigError("missing required field `n_list`".into()))?,
            k_list: k_list.ok_or_else(|| ConfigError("missing required field `k_list`".into()))?,
            t_list,
            function_names: function_names
                .ok_or_else(|| ConfigError("missing required field `function_names`".into()))?,
            x_points,
            h_points,
            dk_strategy,
            output_format,
            seed,
            slack,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.n_list.is_empty() {
            return err("field `n_list`: must not be empty");
        }
        if self.k_list.is_empty() {
            return err("field `k_list`: must not be empty");
        }
        if self.function_names.is_empty() {
            return err("field `function_names`: must not be empty");
        }
        if self.t_list.is_empty() {
            return err("field `t_list`: must not be empty");
        }
        for &k in &self.k_list {
            if k < 3 {
                return err(format!(
                    "field `k_list`: degree {k} below 3 (bound sweeps need k >= 3)"
                ));
            }
            let required = 4 * k + 8;
            for &n in &self.n_list {
                if n < required {
                    return err(format!(
                        "field `n_list`: n = {n} too small for k = {k} (need n >= {required})"
                    ));
                }
            }
        }
        for name in &self.function_names {
            if find_function(name).is_none() {
                return err(format!("field `function_names`: unknown function `{name}`"));
            }
        }
        if self.x_points < 2 || self.h_points < 2 {
            return err("fields `x_points`/`h_points`: need at least 2 sample points each");
        }
        if !self.slack.is_finite() {
            return err("field `slack`: must be finite");
        }
        Ok(())
    }

    /// Strategy for one mesh; grid_lp derives a per-mesh stream from the
    /// config seed so row order and threading cannot change results.
    pub fn strategy_for(&self, n: usize, k: usize) -> DkStrategy {
        match self.dk_strategy {
            StrategyKind::Alternating => DkStrategy::Alternating,
            StrategyKind::GridLp => DkStrategy::GridLp {
                seed: mix_seed(self.seed, n as u64, k as u64),
            },
        }
    }
}

fn parse_usize_list(field: &str, value: &str) -> Result<Vec<usize>, ConfigError> {
    value
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| ConfigError(format!("field `{field}`: `{s}` is not a positive integer")))
        })
        .collect()
}

fn parse_scalar<T: std::str::FromStr>(field: &str, value: &str) -> Result<T, ConfigError> {
    value
        .parse::<T>()
        .map_err(|_| ConfigError(format!("field `{field}`: cannot parse `{value}`")))
}

/// Seed-derivation mix (splitmix64 finalizer) so each mesh gets an
/// independent, order-free stream.
fn mix_seed(seed: u64, n: u64, k: u64) -> u64 {
    let mut z = seed
        ^ n.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ k.wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
