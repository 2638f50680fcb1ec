//! Run configuration: TOML file plus command-line overrides.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::boundary::{Geometry, PolarizationWeights};
use crate::single_qubit::{EvolutionParams, InitialAngles, QGrid};
use crate::two_qubit::BellDiagonalParams;

use super::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    L1,
    Re,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Single,
    Two,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GeometryKind {
    Unbounded,
    Mirror,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Parallel,
    Perpendicular,
    Isotropic,
}

impl Preset {
    pub fn weights(self) -> PolarizationWeights {
        match self {
            Preset::Parallel => PolarizationWeights::parallel(),
            Preset::Perpendicular => PolarizationWeights::perpendicular(),
            Preset::Isotropic => PolarizationWeights::isotropic(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SingleSection {
    pub theta: f64,
    pub phi: f64,
}

impl Default for SingleSection {
    fn default() -> Self {
        Self {
            theta: PI / 2.0,
            phi: 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TwoSection {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl Default for TwoSection {
    fn default() -> Self {
        Self {
            c1: 1.0,
            c2: -1.0,
            c3: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnvironmentSection {
    pub geometry: GeometryKind,
    /// Atom-mirror distance `omega0 z0 / c`; required for `mirror`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<f64>,
    pub polarization: Preset,
    /// Explicit `(ax, ay, az)`; takes precedence over `polarization`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weights: Option<[f64; 3]>,
    pub omega_ratio: f64,
    pub omega0_time_scale: f64,
}

impl Default for EnvironmentSection {
    fn default() -> Self {
        let params = EvolutionParams::default();
        Self {
            geometry: GeometryKind::Unbounded,
            u: None,
            polarization: Preset::Isotropic,
            weights: None,
            omega_ratio: params.omega_ratio,
            omega0_time_scale: params.omega0_time_scale,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

fn default_q_grid() -> GridSection {
    let q = QGrid::default();
    GridSection {
        start: q.start,
        stop: q.stop,
        count: q.count,
    }
}

fn default_u_grid() -> GridSection {
    GridSection {
        start: 1e-2,
        stop: 10.0,
        count: 80,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SurfaceSection {
    pub measure: Measure,
}

impl Default for SurfaceSection {
    fn default() -> Self {
        Self {
            measure: Measure::L1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FreezeSection {
    pub mode: Mode,
}

impl Default for FreezeSection {
    fn default() -> Self {
        Self { mode: Mode::Single }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateSection {
    pub seed: u64,
    pub n_cases: usize,
}

impl Default for ValidateSection {
    fn default() -> Self {
        Self {
            seed: 42,
            n_cases: 50,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<PathBuf>,
    pub format: Format,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            path: None,
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub single: SingleSection,
    pub two: TwoSection,
    pub environment: EnvironmentSection,
    #[serde(default = "default_q_grid")]
    pub q_grid: GridSection,
    /// Log-spaced distances for `surface`.
    #[serde(default = "default_u_grid")]
    pub u_grid: GridSection,
    pub surface: SurfaceSection,
    pub freeze: FreezeSection,
    pub validate: ValidateSection,
    pub output: OutputSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            single: SingleSection::default(),
            two: TwoSection::default(),
            environment: EnvironmentSection::default(),
            q_grid: default_q_grid(),
            u_grid: default_u_grid(),
            surface: SurfaceSection::default(),
            freeze: FreezeSection::default(),
            validate: ValidateSection::default(),
            output: OutputSection::default(),
        }
    }
}

fn finite(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(CliError::Invalid(format!("{name} = {v} is not a finite number")))
    }
}

fn invalid(field: &str, err: impl std::fmt::Display) -> CliError {
    CliError::Invalid(format!("{field}: {err}"))
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("reading {}: {e}", path.display())))?;
        let cfg: Self = toml::from_str(&text)
            .map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?;
        cfg.check_finite()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration is always serializable")
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_toml())
            .map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
    }

    /// Rejects NaN and infinities anywhere in the numeric fields.
    pub fn check_finite(&self) -> Result<(), CliError> {
        finite("single.theta", self.single.theta)?;
        finite("single.phi", self.single.phi)?;
        finite("two.c1", self.two.c1)?;
        finite("two.c2", self.two.c2)?;
        finite("two.c3", self.two.c3)?;
        if let Some(u) = self.environment.u {
            finite("environment.u", u)?;
        }
        if let Some(w) = self.environment.weights {
            for (name, v) in ["environment.weights[0]", "environment.weights[1]", "environment.weights[2]"]
                .into_iter()
                .zip(w)
            {
                finite(name, v)?;
            }
        }
        finite("environment.omega_ratio", self.environment.omega_ratio)?;
        finite("environment.omega0_time_scale", self.environment.omega0_time_scale)?;
        finite("q_grid.start", self.q_grid.start)?;
        finite("q_grid.stop", self.q_grid.stop)?;
        finite("u_grid.start", self.u_grid.start)?;
        finite("u_grid.stop", self.u_grid.stop)?;
        Ok(())
    }

    pub fn angles(&self) -> Result<InitialAngles, CliError> {
        InitialAngles::new(self.single.theta, self.single.phi).map_err(|e| invalid("single", e))
    }

    pub fn bell_diagonal(&self) -> Result<BellDiagonalParams, CliError> {
        BellDiagonalParams::new(self.two.c1, self.two.c2, self.two.c3).map_err(|e| invalid("two", e))
    }

    pub fn polarization(&self) -> Result<PolarizationWeights, CliError> {
        match self.environment.weights {
            Some([ax, ay, az]) => PolarizationWeights::new(ax, ay, az)
                .map_err(|e| invalid("environment.weights", e)),
            None => Ok(self.environment.polarization.weights()),
        }
    }

    pub fn geometry(&self) -> Result<Geometry, CliError> {
        match (self.environment.geometry, self.environment.u) {
            (GeometryKind::Unbounded, _) => Ok(Geometry::Unbounded),
            (GeometryKind::Mirror, Some(u)) => {
                Geometry::mirror(u).map_err(|e| invalid("environment.u", e))
            }
            (GeometryKind::Mirror, None) => Err(CliError::Invalid(
                "environment.u: required when geometry = mirror".into(),
            )),
        }
    }

    pub fn evolution_params(&self) -> Result<EvolutionParams, CliError> {
        let check = |name: &str, v: f64| {
            if v > 0.0 {
                Ok(v)
            } else {
                Err(CliError::Invalid(format!("{name} = {v} must be positive")))
            }
        };
        Ok(EvolutionParams {
            geometry: self.geometry()?,
            polarization: self.polarization()?,
            omega_ratio: check("environment.omega_ratio", self.environment.omega_ratio)?,
            omega0_time_scale: check(
                "environment.omega0_time_scale",
                self.environment.omega0_time_scale,
            )?,
        })
    }

    pub fn q_grid(&self) -> Result<QGrid, CliError> {
        let g = &self.q_grid;
        QGrid::new(g.start, g.stop, g.count).map_err(|e| invalid("q_grid", e))
    }

    /// Log-spaced distances from `u_grid`.
    pub fn u_points(&self) -> Result<Vec<f64>, CliError> {
        let g = &self.u_grid;
        if !(g.start > 0.0 && g.stop > 0.0) {
            return Err(CliError::Invalid(format!(
                "u_grid: bounds ({}, {}) must be positive",
                g.start, g.stop
            )));
        }
        if g.count < 2 {
            return Err(CliError::Invalid(format!("u_grid.count = {} must be at least 2", g.count)));
        }
        let (a, b) = (g.start.ln(), g.stop.ln());
        let last = (g.count - 1) as f64;
        Ok((0..g.count)
            .map(|i| match i {
                0 => g.start,
                i if i == g.count - 1 => g.stop,
                i => (a + (b - a) * i as f64 / last).exp(),
            })
            .collect())
    }
}
