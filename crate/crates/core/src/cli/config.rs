//! Run configuration: one declarative file, TOML or JSON (picked by the
//! `.json` extension), carrying a `schema_version`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::QuadratureConfig;
use crate::resonance2d::ResonanceOptions;
use crate::spectrum2d::SpectrumOptions;
use crate::system::{Dimension, Site, SystemSpec};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteConfig {
    pub position: Vec<f64>,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    pub root_tol: f64,
    pub quad_abs_tol: f64,
    pub quad_rel_tol: f64,
    pub pole_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let q = QuadratureConfig::default();
        Self { root_tol: 1e-10, quad_abs_tol: q.abs_tol, quad_rel_tol: q.rel_tol, pole_tol: 1e-10 }
    }
}

impl SolverConfig {
    pub fn quad(&self) -> QuadratureConfig {
        QuadratureConfig::with_tolerances(self.quad_abs_tol, self.quad_rel_tol)
    }

    pub fn spectrum(&self) -> SpectrumOptions {
        SpectrumOptions { root_tol: self.root_tol, quad: self.quad() }
    }

    pub fn resonance(&self) -> ResonanceOptions {
        ResonanceOptions { pole_tol: self.pole_tol, quad: self.quad(), ..ResonanceOptions::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameter {
    /// Distance of every site to the line or plane (signs are kept).
    A,
    /// Coupling of every site.
    Beta,
    /// Coupling difference of a mirror pair (resonance only).
    Q,
    /// Distance difference of a mirror pair (resonance only).
    Delta,
    Alpha,
}

impl Parameter {
    pub fn column(self) -> &'static str {
        match self {
            Parameter::A => "a [length]",
            Parameter::Beta => "beta [1]",
            Parameter::Q => "q [1]",
            Parameter::Delta => "delta [length]",
            Parameter::Alpha => "alpha [1/length]",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GridKind {
    Linear,
    Geometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub kind: GridKind,
    pub from: f64,
    pub to: f64,
    pub count: usize,
}

impl GridSpec {
    /// Grid values; endpoints are reproduced exactly.
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.count == 0 {
            return Err(Error::Precondition("grid.count must be at least 1".into()));
        }
        if !(self.from.is_finite() && self.to.is_finite()) {
            return Err(Error::Precondition("grid endpoints must be finite".into()));
        }
        if self.count == 1 {
            return Ok(vec![self.from]);
        }
        if self.from == self.to {
            return Err(Error::Precondition("grid is not strictly monotone: from == to".into()));
        }
        let m = (self.count - 1) as f64;
        let mut v: Vec<f64> = match self.kind {
            GridKind::Linear => (0..self.count).map(|i| self.from + (self.to - self.from) * i as f64 / m).collect(),
            GridKind::Geometric => {
                if !(self.from > 0.0 && self.to > 0.0) && !(self.from < 0.0 && self.to < 0.0) {
                    return Err(Error::Precondition("geometric grid endpoints must be nonzero and of one sign".into()));
                }
                let r = self.to / self.from;
                (0..self.count).map(|i| self.from * r.powf(i as f64 / m)).collect()
            }
        };
        v[self.count - 1] = self.to;
        Ok(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub parameter: Parameter,
    pub grid: GridSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub format: Option<Format>,
    pub path: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterConfig {
    /// Energies `λ`, strictly inside `(−α²/4, 0)`.
    pub grid: Option<GridSpec>,
    /// Also locate the maximum of `|R|²` near the resonance.
    #[serde(default)]
    pub locate_peak: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    pub dimension: u32,
    pub alpha: f64,
    pub sites: Vec<SiteConfig>,
    #[serde(default)]
    pub solver: SolverConfig,
    pub sweep: Option<SweepConfig>,
    #[serde(default)]
    pub output: OutputConfig,
    pub scatter: Option<ScatterConfig>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidSystem(format!("cannot read {}: {e}", path.display())))?;
        let json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
        let cfg = if json { Self::from_json(&text) } else { Self::from_toml(&text) }
            .map_err(|e| Error::InvalidSystem(format!("{}: {e}", path.display())))?;
        Ok(cfg)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::InvalidSystem(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::InvalidSystem(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidSystem(format!(
                "schema_version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.system()?;
        let s = &self.solver;
        for (name, v) in [
            ("solver.root_tol", s.root_tol),
            ("solver.quad_abs_tol", s.quad_abs_tol),
            ("solver.quad_rel_tol", s.quad_rel_tol),
            ("solver.pole_tol", s.pole_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidSystem(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(sw) = &self.sweep {
            sw.grid.values().map_err(|e| Error::InvalidSystem(format!("sweep.grid: {e}")))?;
        }
        if let Some(g) = self.scatter.as_ref().and_then(|s| s.grid) {
            g.values().map_err(|e| Error::InvalidSystem(format!("scatter.grid: {e}")))?;
        }
        Ok(())
    }

    pub fn system(&self) -> Result<SystemSpec> {
        let sites = self.sites.iter().map(|s| Site { position: s.position.clone(), beta: s.beta }).collect();
        SystemSpec::new(Dimension::from_int(self.dimension)?, self.alpha, sites)
    }

    /// `(sweep value, system)` per sweep point; a single point without a sweep.
    pub fn points(&self) -> Result<Vec<(Option<f64>, SystemSpec)>> {
        let base = self.system()?;
        let Some(sw) = &self.sweep else { return Ok(vec![(None, base)]) };
        sw.grid
            .values()?
            .into_iter()
            .map(|v| Ok((Some(v), apply(&base, sw.parameter, v)?)))
            .collect()
    }
}

fn apply(base: &SystemSpec, p: Parameter, v: f64) -> Result<SystemSpec> {
    let mut s = base.clone();
    match p {
        Parameter::A => {
            for site in &mut s.sites {
                let last = site.position.len() - 1;
                site.position[last] = site.position[last].signum() * v.abs();
            }
        }
        Parameter::Beta => s.sites.iter_mut().for_each(|site| site.beta = v),
        Parameter::Alpha => s.alpha = v,
        Parameter::Q | Parameter::Delta => {}
    }
    s.validate().map_err(|e| Error::InvalidSystem(format!("sweep value {v}: {e}")))?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
schema_version = 1
dimension = 2
alpha = 2.0

[[sites]]
position = [0.0, 1.0]
beta = 0.0
"#;

    #[test]
    fn toml_and_json_agree() {
        let t = RunConfig::from_toml(BASE).unwrap();
        let j = RunConfig::from_json(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(t, j);
        assert_eq!(t.solver, SolverConfig::default());
    }

    #[test]
    fn geometric_grid_endpoints() {
        let g = GridSpec { kind: GridKind::Geometric, from: 0.25, to: 16.0, count: 13 };
        let v = g.values().unwrap();
        assert_eq!(v.len(), 13);
        assert_eq!((v[0], v[12]), (0.25, 16.0));
        assert!((v[6] - 2.0).abs() < 1e-14);
        assert!(GridSpec { kind: GridKind::Linear, from: 1.0, to: 1.0, count: 3 }.values().is_err());
    }

    #[test]
    fn site_on_line_names_index() {
        let text = BASE.to_string() + "\n[[sites]]\nposition = [1.0, 0.0]\nbeta = 0.0\n";
        let err = RunConfig::from_toml(&text).unwrap_err().to_string();
        assert!(err.contains("site 1"), "{err}");
    }

    #[test]
    fn unknown_field_and_bad_tolerance_rejected() {
        assert!(RunConfig::from_toml(&(BASE.to_string() + "colour = 1\n")).is_err());
        let text = BASE.replace("alpha = 2.0", "alpha = 2.0\n[solver]\nroot_tol = -1.0");
        assert!(RunConfig::from_toml(&text).is_err());
        assert!(RunConfig::from_toml(&BASE.replace("schema_version = 1", "schema_version = 9")).is_err());
    }

    #[test]
    fn sweep_a_keeps_sign() {
        let text = r#"
schema_version = 1
dimension = 2
alpha = 3.0
sites = [{ position = [0.0, 1.0], beta = 0.0 }, { position = [0.0, -1.0], beta = 0.0 }]
sweep = { parameter = "a", grid = { kind = "linear", from = 1.0, to = 2.0, count = 2 } }
"#;
        let pts = RunConfig::from_toml(text).unwrap().points().unwrap();
        assert_eq!(pts[1].1.sites[1].position, vec![0.0, -2.0]);
    }
}
