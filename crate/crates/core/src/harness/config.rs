//! Flat `key = value` configuration files.
//!
//! One assignment per line, `#` starts a comment, blank lines are ignored.
//! Every key must be known and may appear once. The physical parameters
//! `alpha`, `beta`, `mu`, `nu` have no defaults.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::params::AnisotropyParams;
use crate::solver::{BudgetQuadrature, DtPolicy, SolverConfig};
use crate::spectral::SpectralError;

/// Step size used when a file names neither `dt` nor `cfl`.
pub const DEFAULT_DT: f64 = 1e-3;
/// Sobolev index of the rough initial profile when not given.
pub const DEFAULT_ROUGH_REGULARITY: f64 = 1.5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot read {path}: {message}")]
    Read { path: String, message: String },
}

fn at(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Line {
        line,
        message: message.into(),
    }
}

const RUN_KEYS: &[&str] = &[
    "n1",
    "n2",
    "l1",
    "l2",
    "alpha",
    "beta",
    "mu",
    "nu",
    "t_end",
    "dt",
    "cfl",
    "dt_max",
    "diag_stride",
    "seed",
    "init",
    "init_kmax",
    "init_regularity",
    "init_path",
    "sobolev_s",
    "budget_quadrature",
    "snapshot_every",
    "restart_t0",
];

const SWEEP_ONLY_KEYS: &[&str] = &["alpha_grid", "beta_grid", "parallelism"];

/// Raw assignments with their line numbers.
#[derive(Debug, Clone, Default)]
struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn parse(text: &str, allowed: &[&str]) -> Result<Self, ConfigError> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| at(line, format!("expected `key = value`, got `{body}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if key.is_empty() {
                return Err(at(line, "missing key before `=`"));
            }
            if !allowed.contains(&key) {
                return Err(at(line, format!("unknown key `{key}`")));
            }
            if let Some((first, _)) = map.insert(key.to_string(), (line, value.to_string())) {
                return Err(at(
                    line,
                    format!("duplicate key `{key}` (first set on line {first})"),
                ));
            }
        }
        Ok(Self { map })
    }

    fn raw(&self, key: &str) -> Option<&(usize, String)> {
        self.map.get(key)
    }

    fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    fn get<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError> {
        match self.map.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|_| at(*line, format!("cannot parse `{key}` value `{v}`"))),
        }
    }

    fn require<T: std::str::FromStr>(&self, key: &str) -> Result<T, ConfigError> {
        self.get(key)?
            .ok_or_else(|| ConfigError::Invalid(format!("missing required key `{key}`")))
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.map.get(key).map(|(l, _)| *l)
    }

    /// Error anchored at the line of `key` when present.
    fn fail(&self, key: &str, message: String) -> ConfigError {
        match self.line(key) {
            Some(line) => at(line, message),
            None => ConfigError::Invalid(message),
        }
    }
}

/// Initial data selected by the `init` key.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum InitSpec {
    /// `sin x₁ sin x₂ + cos x₂` in box-scaled coordinates.
    Default,
    /// `cos x₁` in box-scaled coordinates.
    CosX1,
    /// Gaussian band `|index| ≤ kmax`, unit `H²` norm.
    Random { kmax: usize },
    /// Amplitudes `|k|^{−(1+s)}` with random phases up to the dealiasing
    /// cutoff, unit `L²` norm; lies in `Hʳ` only for `r < s`.
    Rough { regularity: f64 },
    /// Physical snapshot file.
    File { path: PathBuf },
}

/// Everything needed to reproduce a single run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub n1: usize,
    pub n2: usize,
    pub l1: f64,
    pub l2: f64,
    pub solver: SolverConfig,
    pub init: InitSpec,
    pub restart_t0: Option<f64>,
}

/// A grid of `(alpha, beta)` points sharing one base run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub alpha_grid: Vec<f64>,
    pub beta_grid: Vec<f64>,
    pub parallelism: usize,
    /// Base run; its `alpha` and `beta` are replaced at every grid point.
    pub base: RunConfig,
}

fn parse_params(e: &Entries, alpha: f64, beta: f64) -> Result<AnisotropyParams, ConfigError> {
    let mu: f64 = e.require("mu")?;
    let nu: f64 = e.require("nu")?;
    let params = if mu == 0.0 && nu == 0.0 {
        AnisotropyParams::inviscid(alpha, beta)
    } else {
        AnisotropyParams::new(alpha, beta, mu, nu)
    };
    params.map_err(|err| {
        let key = match err {
            crate::params::ParamsError::Alpha(_) => "alpha",
            crate::params::ParamsError::Beta(_) => "beta",
            crate::params::ParamsError::Mu(_) => "mu",
            crate::params::ParamsError::Nu(_) => "nu",
        };
        e.fail(key, err.to_string())
    })
}

fn parse_run(e: &Entries, alpha: f64, beta: f64) -> Result<RunConfig, ConfigError> {
    let n1: usize = e.require("n1")?;
    let n2: usize = e.require("n2")?;
    let l1: f64 = e.get("l1")?.unwrap_or(2.0 * PI);
    let l2: f64 = e.get("l2")?.unwrap_or(2.0 * PI);
    crate::spectral::Grid::new(n1, n2, l1, l2).map_err(|err| {
        let key = match err {
            SpectralError::BadSize { axis, .. } | SpectralError::BadPeriod { axis, .. } => axis,
            _ => "n1",
        };
        e.fail(key, err.to_string())
    })?;
    let params = parse_params(e, alpha, beta)?;
    let t_end: f64 = e.require("t_end")?;

    let dt_policy = match (
        e.get::<f64>("dt")?,
        e.get::<f64>("cfl")?,
        e.get::<f64>("dt_max")?,
    ) {
        (Some(dt), None, None) => DtPolicy::Fixed(dt),
        (None, Some(c), Some(dt_max)) => DtPolicy::Cfl { c, dt_max },
        (None, None, None) => DtPolicy::Fixed(DEFAULT_DT),
        (None, Some(_), None) => return Err(e.fail("cfl", "`cfl` needs `dt_max`".into())),
        (None, None, Some(_)) => return Err(e.fail("dt_max", "`dt_max` needs `cfl`".into())),
        (Some(_), _, _) => {
            return Err(e.fail(
                "dt",
                "give either `dt` or `cfl` with `dt_max`, not both".into(),
            ))
        }
    };

    let mut solver = SolverConfig::new(params, t_end, dt_policy);
    if let Some(v) = e.get("diag_stride")? {
        solver.diag_stride = v;
    }
    if let Some(v) = e.get("seed")? {
        solver.seed = v;
    }
    if let Some(v) = e.get("sobolev_s")? {
        solver.sobolev_s = v;
    }
    if let Some((line, v)) = e.raw("budget_quadrature") {
        solver.budget_quadrature = match v.as_str() {
            "stages" => BudgetQuadrature::Stages,
            "trapezoid" => BudgetQuadrature::Trapezoid,
            other => {
                return Err(at(
                    *line,
                    format!("`budget_quadrature` must be stages or trapezoid, got `{other}`"),
                ))
            }
        };
    }
    solver.snapshot_every = e.get("snapshot_every")?;
    solver.validate().map_err(|err| {
        let key = match err {
            crate::solver::SolverError::BadHorizon(_) => "t_end",
            crate::solver::SolverError::BadCfl(_) => "cfl",
            crate::solver::SolverError::BadStride if e.has("snapshot_every") => "snapshot_every",
            crate::solver::SolverError::BadStride => "diag_stride",
            _ if e.has("dt") => "dt",
            _ => "dt_max",
        };
        e.fail(key, err.to_string())
    })?;
    if !(solver.sobolev_s >= 0.0 && solver.sobolev_s.is_finite()) {
        return Err(e.fail(
            "sobolev_s",
            format!("`sobolev_s` must be >= 0, got {}", solver.sobolev_s),
        ));
    }

    let init = parse_init(e, n1.min(n2))?;
    let restart_t0: Option<f64> = e.get("restart_t0")?;
    if let Some(t0) = restart_t0 {
        if !(t0 >= 0.0 && t0 < t_end) {
            return Err(e.fail(
                "restart_t0",
                format!("`restart_t0` must lie in [0, t_end), got {t0}"),
            ));
        }
    }
    Ok(RunConfig {
        n1,
        n2,
        l1,
        l2,
        solver,
        init,
        restart_t0,
    })
}

fn parse_init(e: &Entries, nmin: usize) -> Result<InitSpec, ConfigError> {
    let kind = e.raw("init").map(|(_, v)| v.as_str()).unwrap_or("default");
    let unused = |keys: &[&str]| -> Result<(), ConfigError> {
        for k in keys {
            if e.has(k) {
                return Err(e.fail(k, format!("`{k}` does not apply to init = {kind}")));
            }
        }
        Ok(())
    };
    let init = match kind {
        "default" => {
            unused(&["init_kmax", "init_regularity", "init_path"])?;
            InitSpec::Default
        }
        "cos_x1" => {
            unused(&["init_kmax", "init_regularity", "init_path"])?;
            InitSpec::CosX1
        }
        "random" => {
            unused(&["init_regularity", "init_path"])?;
            let kmax = e.get("init_kmax")?.unwrap_or((nmin / 8).max(1));
            if kmax == 0 || kmax > nmin / 3 {
                return Err(e.fail(
                    "init_kmax",
                    format!("`init_kmax` must lie in [1, {}]", nmin / 3),
                ));
            }
            InitSpec::Random { kmax }
        }
        "rough" => {
            unused(&["init_kmax", "init_path"])?;
            let regularity = e
                .get("init_regularity")?
                .unwrap_or(DEFAULT_ROUGH_REGULARITY);
            if !(regularity > 0.0 && regularity.is_finite()) {
                return Err(e.fail(
                    "init_regularity",
                    "`init_regularity` must be positive".into(),
                ));
            }
            InitSpec::Rough { regularity }
        }
        "file" => {
            unused(&["init_kmax", "init_regularity"])?;
            let (_, p) = e
                .raw("init_path")
                .ok_or_else(|| e.fail("init", "init = file needs `init_path`".into()))?;
            InitSpec::File {
                path: PathBuf::from(p),
            }
        }
        other => {
            return Err(e.fail(
                "init",
                format!("`init` must be default, cos_x1, random, rough or file, got `{other}`"),
            ))
        }
    };
    Ok(init)
}

fn parse_grid(e: &Entries, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
    let Some((line, v)) = e.raw(key) else {
        return Ok(None);
    };
    let values: Vec<f64> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| at(*line, format!("cannot parse `{s}` in `{key}`")))
        })
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err(at(*line, format!("`{key}` is empty")));
    }
    if values.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(at(*line, format!("`{key}` entries must lie in (0,1)")));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(at(*line, format!("`{key}` must be strictly increasing")));
    }
    Ok(Some(values))
}

/// The default sweep axis `0.1, 0.2, …, 0.9`.
pub fn default_sweep_axis() -> Vec<f64> {
    (1..=9).map(|i| i as f64 / 10.0).collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let e = Entries::parse(text, RUN_KEYS)?;
        let alpha = e.require("alpha")?;
        let beta = e.require("beta")?;
        parse_run(&e, alpha, beta)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::parse(&read(path)?)
    }

    /// Resolves a relative `init_path` against `dir`.
    pub fn resolve_paths(&mut self, dir: &Path) {
        if let InitSpec::File { path } = &mut self.init {
            if path.is_relative() {
                *path = dir.join(&*path);
            }
        }
    }
}

impl SweepSpec {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let allowed: Vec<&str> = RUN_KEYS
            .iter()
            .chain(SWEEP_ONLY_KEYS)
            .copied()
            .filter(|k| !matches!(*k, "alpha" | "beta" | "restart_t0"))
            .collect();
        let e = Entries::parse(text, &allowed)?;
        let alpha_grid = parse_grid(&e, "alpha_grid")?.unwrap_or_else(default_sweep_axis);
        let beta_grid = parse_grid(&e, "beta_grid")?.unwrap_or_else(default_sweep_axis);
        let parallelism: usize = e.get("parallelism")?.unwrap_or(1);
        if parallelism == 0 {
            return Err(e.fail("parallelism", "`parallelism` must be at least 1".into()));
        }
        let base = parse_run(&e, alpha_grid[0], beta_grid[0])?;
        Ok(Self {
            alpha_grid,
            beta_grid,
            parallelism,
            base,
        })
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::parse(&read(path)?)
    }
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::Read {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}
