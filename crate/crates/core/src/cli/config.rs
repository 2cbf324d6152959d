//! `key = value` run configuration.
//!
//! ```text
//! # Fig. 1 setup
//! model = radial
//! omega = 1
//! ell = 1
//! rule = linear
//! s = 0, 0.3, 0.7, 1
//! t = 0.1, 0.03, 0.5, 1.0
//! c = 5, 1, 1
//! grid = 1e-8, 8, 1001
//! oracles = fd, particles
//! seed = 7
//! ```

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use crate::models::{InterpolationRule, Interval, ModelKind, ParameterSet};
use crate::spectral::SpectralCoefficients;

/// Environment variable overriding the configured seed.
pub const SEED_ENV: &str = "SUSY_FPE_SEED";

pub const DEFAULT_GRID_POINTS: usize = 1001;
pub const DEFAULT_S_VALUES: [f64; 4] = [0.0, 0.3, 0.7, 1.0];

/// A configuration problem, anchored to a line when one is responsible.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub message: String,
}

impl ConfigError {
    fn at(line: usize, message: impl Into<String>) -> Self {
        ConfigError { line: Some(line), message: message.into() }
    }

    fn global(message: impl Into<String>) -> Self {
        ConfigError { line: None, message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// Which independent oracles `run` compares against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct OracleToggles {
    pub finite_difference: bool,
    pub particles: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleSettings {
    pub fd_dt: f64,
    pub fd_points: usize,
    pub particles: usize,
    pub particle_dt: f64,
    pub bins: usize,
}

impl Default for OracleSettings {
    fn default() -> Self {
        OracleSettings {
            fd_dt: 1e-4,
            fd_points: 2000,
            particles: 1_000_000,
            particle_dt: 1e-3,
            bins: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ParameterSet,
    pub rule: InterpolationRule,
    pub s_values: Vec<f64>,
    pub times: Vec<f64>,
    pub coefficients: SpectralCoefficients,
    pub grid: GridSpec,
    pub oracles: OracleToggles,
    pub oracle_settings: OracleSettings,
    pub seed: u64,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn kind(&self) -> ModelKind {
        self.params.kind()
    }

    /// Parses configuration text. `seed_override` replaces the `seed` entry.
    pub fn parse(text: &str, seed_override: Option<&str>) -> Result<RunConfig, ConfigError> {
        let entries = Entries::parse(text)?;
        let config = entries.build(seed_override)?;
        Ok(config)
    }

    /// Parses with the seed override taken from [`SEED_ENV`].
    pub fn parse_with_env(text: &str) -> Result<RunConfig, ConfigError> {
        let env = std::env::var(SEED_ENV).ok();
        Self::parse(text, env.as_deref())
    }
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

const KNOWN_KEYS: &[&str] = &[
    "model", "omega", "ell", "alpha", "beta", "rule", "s", "t", "c", "grid", "oracles", "seed",
    "output", "fd_dt", "fd_points", "particles", "particle_dt", "bins",
];

impl Entries {
    fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| ConfigError::at(line, format!("expected `key = value`, got `{content}`")))?;
            let key = key.trim().to_ascii_lowercase();
            if !KNOWN_KEYS.contains(&key.as_str()) {
                return Err(ConfigError::at(line, format!("unknown key `{key}`")));
            }
            if let Some((first, _)) = map.get(&key) {
                return Err(ConfigError::at(line, format!("duplicate key `{key}` (first on line {first})")));
            }
            map.insert(key, (line, value.trim().to_string()));
        }
        Ok(Entries { map })
    }

    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.map.get(key).map(|(line, value)| (*line, value.as_str()))
    }

    fn require(&self, key: &str) -> Result<(usize, &str), ConfigError> {
        self.get(key).ok_or_else(|| ConfigError::global(format!("missing required key `{key}`")))
    }

    fn real(&self, key: &str) -> Result<Option<(usize, f64)>, ConfigError> {
        self.get(key)
            .map(|(line, v)| parse_real(v).map(|x| (line, x)).map_err(|e| ConfigError::at(line, format!("{key}: {e}"))))
            .transpose()
    }

    fn reals(&self, key: &str) -> Result<Option<(usize, Vec<f64>)>, ConfigError> {
        self.get(key)
            .map(|(line, v)| {
                v.split(',')
                    .map(|item| parse_real(item).map_err(|e| ConfigError::at(line, format!("{key}: {e}"))))
                    .collect::<Result<Vec<_>, _>>()
                    .map(|list| (line, list))
            })
            .transpose()
    }

    fn count(&self, key: &str) -> Result<Option<usize>, ConfigError> {
        self.get(key)
            .map(|(line, v)| {
                v.parse::<usize>()
                    .map_err(|_| ConfigError::at(line, format!("{key}: `{v}` is not a non-negative integer")))
            })
            .transpose()
    }

    fn build(&self, seed_override: Option<&str>) -> Result<RunConfig, ConfigError> {
        let (model_line, model) = self.require("model")?;
        let kind: ModelKind = model.parse().map_err(|e: String| ConfigError::at(model_line, e))?;

        let names = kind.parameter_names();
        let mut values = [0.0; 2];
        let mut param_line = model_line;
        for (slot, name) in values.iter_mut().zip(names) {
            let (line, value) = self
                .real(name)?
                .ok_or_else(|| ConfigError::global(format!("missing required key `{name}` for the {kind} model")))?;
            *slot = value;
            param_line = param_line.max(line);
        }
        for other in ["omega", "ell", "alpha", "beta"] {
            if !names.contains(&other) {
                if let Some((line, _)) = self.get(other) {
                    return Err(ConfigError::at(line, format!("`{other}` does not apply to the {kind} model")));
                }
            }
        }
        let params = ParameterSet::new(kind, values).map_err(|e| ConfigError::at(param_line, e.to_string()))?;

        let rule = match self.get("rule") {
            Some((line, v)) => v.parse().map_err(|e: String| ConfigError::at(line, e))?,
            None => InterpolationRule::Linear,
        };

        let s_values = match self.reals("s")? {
            Some((line, list)) => {
                if let Some(bad) = list.iter().find(|s| !(0.0..=1.0).contains(*s)) {
                    return Err(ConfigError::at(line, format!("s = {bad} is outside [0, 1]")));
                }
                list
            }
            None => DEFAULT_S_VALUES.to_vec(),
        };
        if let Some(s) = s_values.iter().find(|&&s| params.interpolate(s, rule).is_err()) {
            let line = self.get("s").map(|(l, _)| l).unwrap_or(param_line);
            let err = params.interpolate(*s, rule).unwrap_err();
            return Err(ConfigError::at(line, err.to_string()));
        }

        let (t_line, times) = self.reals("t")?.ok_or_else(|| ConfigError::global("missing required key `t`"))?;
        if let Some(bad) = times.iter().find(|t| !(**t >= 0.0) || !t.is_finite()) {
            return Err(ConfigError::at(t_line, format!("time {bad} must be finite and >= 0")));
        }

        let (c_line, c) = self.reals("c")?.ok_or_else(|| ConfigError::global("missing required key `c`"))?;
        let coefficients =
            SpectralCoefficients::new(params, c).map_err(|e| ConfigError::at(c_line, e.to_string()))?;

        let default = params.default_truncation();
        let grid = match self.reals("grid")? {
            Some((line, list)) => {
                if list.len() != 3 {
                    return Err(ConfigError::at(line, "grid expects `lo, hi, points`"));
                }
                let points = list[2];
                if points.fract() != 0.0 || points < 16.0 {
                    return Err(ConfigError::at(line, "grid point count must be an integer >= 16"));
                }
                let spec = GridSpec { lo: list[0], hi: list[1], points: points as usize };
                if !(spec.lo < spec.hi) {
                    return Err(ConfigError::at(line, "grid bounds must satisfy lo < hi"));
                }
                if params.prepotential(spec.lo).is_err() {
                    return Err(ConfigError::at(line, format!("grid start {} is outside the {kind} domain", spec.lo)));
                }
                spec
            }
            None => GridSpec { lo: default.lo, hi: default.hi, points: DEFAULT_GRID_POINTS },
        };

        let oracles = match self.get("oracles") {
            Some((line, v)) => {
                let mut toggles = OracleToggles::default();
                for item in v.split(',').map(|s| s.trim().to_ascii_lowercase()) {
                    match item.as_str() {
                        "fd" | "crank-nicolson" => toggles.finite_difference = true,
                        "particles" | "euler-maruyama" => toggles.particles = true,
                        "none" | "" => {}
                        other => return Err(ConfigError::at(line, format!("unknown oracle `{other}`"))),
                    }
                }
                toggles
            }
            None => OracleToggles::default(),
        };

        let mut oracle_settings = OracleSettings::default();
        if let Some((line, dt)) = self.real("fd_dt")? {
            if !(dt > 0.0) {
                return Err(ConfigError::at(line, "fd_dt must be positive"));
            }
            oracle_settings.fd_dt = dt;
        }
        if let Some(points) = self.count("fd_points")? {
            if points < 16 {
                let line = self.get("fd_points").map(|(l, _)| l).unwrap_or(0);
                return Err(ConfigError::at(line, "fd_points must be at least 16"));
            }
            oracle_settings.fd_points = points;
        }
        if let Some(n) = self.count("particles")? {
            if n == 0 {
                let line = self.get("particles").map(|(l, _)| l).unwrap_or(0);
                return Err(ConfigError::at(line, "particles must be positive"));
            }
            oracle_settings.particles = n;
        }
        if let Some((line, dt)) = self.real("particle_dt")? {
            if !(dt > 0.0) {
                return Err(ConfigError::at(line, "particle_dt must be positive"));
            }
            oracle_settings.particle_dt = dt;
        }
        if let Some(bins) = self.count("bins")? {
            if bins < 2 {
                let line = self.get("bins").map(|(l, _)| l).unwrap_or(0);
                return Err(ConfigError::at(line, "bins must be at least 2"));
            }
            oracle_settings.bins = bins;
        }

        let seed = match seed_override {
            Some(v) => v
                .trim()
                .parse::<u64>()
                .map_err(|_| ConfigError::global(format!("{SEED_ENV}=`{v}` is not an unsigned integer")))?,
            None => self.count("seed")?.map(|s| s as u64).unwrap_or(0),
        };

        let output = self.get("output").map(|(_, v)| PathBuf::from(v));

        Ok(RunConfig {
            params,
            rule,
            s_values,
            times,
            coefficients,
            grid,
            oracles,
            oracle_settings,
            seed,
            output,
        })
    }
}

fn parse_real(text: &str) -> Result<f64, String> {
    let trimmed = text.trim();
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{trimmed}` is not a finite number")),
    }
}

impl GridSpec {
    pub fn interval(&self) -> Interval {
        Interval::new(self.lo, self.hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = "\
# radial oscillator
model = radial
omega = 1
ell = 1   # angular parameter
s = 0, 0.3, 0.7, 1
t = 0.1, 0.03, 0.5, 1.0
c = 5, 1, 1
seed = 9
";

    #[test]
    fn parses_fig1_config() {
        let cfg = RunConfig::parse(FIG1, None).unwrap();
        assert_eq!(cfg.kind(), ModelKind::RadialOscillator);
        assert_eq!(cfg.params.values(), [1.0, 1.0]);
        assert_eq!(cfg.s_values, vec![0.0, 0.3, 0.7, 1.0]);
        assert_eq!(cfg.times, vec![0.1, 0.03, 0.5, 1.0]);
        assert_eq!(cfg.coefficients.coefficients(), &[5.0, 1.0, 1.0]);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.rule, InterpolationRule::Linear);
        assert_eq!(cfg.grid, GridSpec { lo: 1e-8, hi: 8.0, points: DEFAULT_GRID_POINTS });
        assert_eq!(cfg.oracles, OracleToggles::default());
    }

    #[test]
    fn seed_override_wins() {
        let cfg = RunConfig::parse(FIG1, Some("123")).unwrap();
        assert_eq!(cfg.seed, 123);
        assert!(RunConfig::parse(FIG1, Some("abc")).is_err());
    }

    #[test]
    fn s_out_of_range_is_line_anchored() {
        let text = FIG1.replace("s = 0, 0.3, 0.7, 1", "s = 0, 1.5");
        let err = RunConfig::parse(&text, None).unwrap_err();
        assert_eq!(err.line, Some(5));
        assert!(err.to_string().starts_with("line 5:"), "{err}");
    }

    #[test]
    fn malformed_lines() {
        let err = RunConfig::parse("model radial\n", None).unwrap_err();
        assert_eq!(err.line, Some(1));
        let err = RunConfig::parse(&format!("{FIG1}colour = blue\n"), None).unwrap_err();
        assert_eq!(err.line, Some(9));
        let err = RunConfig::parse(&format!("{FIG1}seed = 3\n"), None).unwrap_err();
        assert!(err.message.contains("duplicate"));
        let err = RunConfig::parse(&FIG1.replace("omega = 1", "omega = -1"), None).unwrap_err();
        assert!(err.line.is_some());
        let err = RunConfig::parse(&FIG1.replace("c = 5, 1, 1", "c = 5, x"), None).unwrap_err();
        assert_eq!(err.line, Some(7));
        let err = RunConfig::parse(&FIG1.replace("t = 0.1, 0.03, 0.5, 1.0", "t = -1"), None).unwrap_err();
        assert_eq!(err.line, Some(6));
        let err = RunConfig::parse(&FIG1.replace("model = radial\n", ""), None).unwrap_err();
        assert_eq!(err.line, None);
    }

    #[test]
    fn morse_rejects_nonlinear_rule_and_foreign_keys() {
        let text = "model = morse\nalpha = 5\nbeta = 1\nt = 1\nc = 3, 2, 1\nrule = nonlinear-ell\n";
        let err = RunConfig::parse(text, None).unwrap_err();
        assert!(err.message.contains("not supported"), "{err}");
        let text = "model = morse\nalpha = 5\nbeta = 1\nell = 2\nt = 1\nc = 3\n";
        assert_eq!(RunConfig::parse(text, None).unwrap_err().line, Some(4));
        let text = "model = morse\nalpha = 5\nbeta = 1\nt = 1\nc = 1, 1, 1, 1, 1, 1\n";
        assert_eq!(RunConfig::parse(text, None).unwrap_err().line, Some(5));
    }

    #[test]
    fn oracle_toggles_and_settings() {
        let text = format!("{FIG1}oracles = fd, particles\nparticles = 5000\nbins = 32\ngrid = 0.001, 6, 200\n");
        let cfg = RunConfig::parse(&text, None).unwrap();
        assert!(cfg.oracles.finite_difference && cfg.oracles.particles);
        assert_eq!(cfg.oracle_settings.particles, 5000);
        assert_eq!(cfg.oracle_settings.bins, 32);
        assert_eq!(cfg.grid.points, 200);
        let bad = format!("{FIG1}grid = 0, 6, 200\n");
        assert!(RunConfig::parse(&bad, None).is_err());
    }
}
