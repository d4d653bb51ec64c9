//! Run configuration: a single TOML file describing geometry, ensemble,
//! time grid, subset policy, output and (optionally) experiment parameters.
//!
//! Exactly one geometry source must be given: a preset, an explicit
//! oscillator list, or a raw coupling matrix. Frequencies are angular
//! (rad/s) unless `frequency_is_hz = true` requests the `2 pi` conversion.

use gravlocc::experiment::ExperimentParams;
use gravlocc::geometry::{
    build_coupling_matrix, CouplingMatrix, Oscillator, OscillatorArray,
};
use gravlocc::subsets::SubsetPolicy;
use gravlocc::Tolerances;
use nalgebra::{DMatrix, Vector3};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Seed for any randomised subset policy; echoed into every output.
    #[serde(default)]
    pub seed: u64,
    pub geometry: GeometryConfig,
    pub ensemble: EnsembleConfig,
    #[serde(default)]
    pub time_grid: TimeGridConfig,
    #[serde(default)]
    pub subsets: SubsetsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    /// "pair" or "line".
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Centre spacing (m).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
    /// Oscillator mass (kg).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Trap frequency; angular rad/s unless `frequency_is_hz`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frequency: Option<f64>,
    #[serde(default)]
    pub frequency_is_hz: bool,
    /// Explicit oscillator records.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oscillators: Option<Vec<OscillatorConfig>>,
    /// Raw coupling matrix, bypassing geometry.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<CouplingConfig>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OscillatorConfig {
    pub center: [f64; 3],
    pub axis: [f64; 3],
    pub mass: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    /// Row-major n x n symmetric matrix (rad/s).
    pub matrix: Vec<Vec<f64>>,
    /// Coupling scale gamma (rad/s) attached to the matrix.
    pub gamma: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub lambda: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TimeGridConfig {
    pub t_min: f64,
    pub t_max: f64,
    pub steps: usize,
    /// "linear" or "log".
    #[serde(default = "default_scale")]
    pub scale: String,
}

fn default_scale() -> String {
    "linear".to_string()
}

impl Default for TimeGridConfig {
    fn default() -> Self {
        Self { t_min: 0.0, t_max: 1.0, steps: 11, scale: default_scale() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SubsetsConfig {
    /// "exhaustive", "alternating" or "random".
    pub policy: String,
    /// Sample count for the random policy.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// "Much less than" margin used by `check`.
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_margin() -> f64 {
    0.1
}

impl Default for SubsetsConfig {
    fn default() -> Self {
        Self { policy: "exhaustive".to_string(), count: None, margin: default_margin() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output file; stdout when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    /// "csv" or "table".
    #[serde(default = "default_format")]
    pub format: String,
    /// Significant digits in CSV numbers.
    #[serde(default = "default_precision")]
    pub precision: usize,
}

fn default_format() -> String {
    "csv".to_string()
}

fn default_precision() -> usize {
    17
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self { path: None, format: default_format(), precision: default_precision() }
    }
}

/// Serde mirror of [`ExperimentParams`]; all fields optional and SI.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub separation: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run_time: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quality_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pressure: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dielectric: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub susceptibility: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_field: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_gradient: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_field: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_gradient: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_sq: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_mass: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_dwell: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_distance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p2_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arm_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub torsion_constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pendulum_omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shield_standoff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity_power: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub laser_omega: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity_kappa: Option<f64>,
}

impl ExperimentConfig {
    pub fn to_params(&self) -> ExperimentParams {
        ExperimentParams {
            n: self.n.unwrap_or(2),
            mass: self.mass,
            separation: self.separation,
            radius: self.radius,
            omega: self.omega,
            delta_omega: self.delta_omega,
            lambda: self.lambda,
            run_time: self.run_time,
            temperature: self.temperature,
            quality_factor: self.quality_factor,
            pressure: self.pressure,
            dielectric: self.dielectric,
            density: self.density,
            susceptibility: self.susceptibility,
            b_field: self.b_field,
            b_gradient: self.b_gradient,
            e_field: self.e_field,
            e_gradient: self.e_gradient,
            alpha_sq: self.alpha_sq,
            noise_mass: self.noise_mass,
            noise_dwell: self.noise_dwell,
            noise_distance: self.noise_distance,
            p2_error: self.p2_error,
            arm_length: self.arm_length,
            torsion_constant: self.torsion_constant,
            pendulum_omega: self.pendulum_omega,
            shield_standoff: self.shield_standoff,
            cavity_power: self.cavity_power,
            laser_omega: self.laser_omega,
            cavity_length: self.cavity_length,
            cavity_kappa: self.cavity_kappa,
        }
    }
}

/// Geometry resolved to the objects the bound computations take.
pub struct ResolvedGeometry {
    pub coupling: CouplingMatrix,
    pub n: usize,
    /// True when the geometry is an equally spaced line (enables the
    /// line-asymptotics columns of `sensitivity`).
    pub is_line: bool,
}

impl RunConfig {
    pub fn parse(text: &str) -> anyhow::Result<RunConfig> {
        let cfg: RunConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn emit(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        let sources = [
            self.geometry.preset.is_some(),
            self.geometry.oscillators.is_some(),
            self.geometry.coupling.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if sources != 1 {
            anyhow::bail!("exactly one geometry source (preset, oscillators, coupling) required, found {sources}");
        }
        if !(self.ensemble.lambda >= 0.0) {
            anyhow::bail!("ensemble.lambda must be >= 0");
        }
        let grid = &self.time_grid;
        if grid.steps == 0 {
            anyhow::bail!("time_grid.steps must be positive");
        }
        if grid.steps > 1 && !(grid.t_max > grid.t_min) {
            anyhow::bail!("time grid must be well-ordered: t_max > t_min");
        }
        match grid.scale.as_str() {
            "linear" => {}
            "log" => {
                if !(grid.t_min > 0.0) {
                    anyhow::bail!("log time grid needs t_min > 0");
                }
            }
            other => anyhow::bail!("unknown time scale `{other}`"),
        }
        match self.subsets.policy.as_str() {
            "exhaustive" | "alternating" => {}
            "random" => {
                if self.subsets.count.unwrap_or(0) == 0 {
                    anyhow::bail!("random subset policy needs a positive `count`");
                }
            }
            other => anyhow::bail!("unknown subset policy `{other}`"),
        }
        match self.output.format.as_str() {
            "csv" | "table" => {}
            other => anyhow::bail!("unknown output format `{other}`"),
        }
        if self.output.precision == 0 || self.output.precision > 17 {
            anyhow::bail!("output.precision must be in 1..=17");
        }
        if let Some(preset) = &self.geometry.preset {
            match preset.as_str() {
                "pair" | "line" => {}
                other => anyhow::bail!("unknown geometry preset `{other}`"),
            }
            for (name, v) in [
                ("spacing", self.geometry.spacing),
                ("mass", self.geometry.mass),
                ("frequency", self.geometry.frequency),
            ] {
                match v {
                    Some(x) if x > 0.0 => {}
                    Some(x) => anyhow::bail!("geometry.{name} must be positive, got {x}"),
                    None => anyhow::bail!("geometry preset `{preset}` needs geometry.{name}"),
                }
            }
        }
        Ok(())
    }

    pub fn omega(&self) -> Option<f64> {
        self.geometry.frequency.map(|f| {
            if self.geometry.frequency_is_hz {
                2.0 * std::f64::consts::PI * f
            } else {
                f
            }
        })
    }

    pub fn resolve_geometry(&self, tol: &Tolerances) -> anyhow::Result<ResolvedGeometry> {
        if let Some(preset) = &self.geometry.preset {
            let spacing = self.geometry.spacing.unwrap();
            let mass = self.geometry.mass.unwrap();
            let omega = self.omega().unwrap();
            let n = match preset.as_str() {
                "pair" => 2,
                "line" => self
                    .geometry
                    .n
                    .ok_or_else(|| anyhow::anyhow!("line preset needs geometry.n"))?,
                _ => unreachable!("validated"),
            };
            let arr = OscillatorArray::line(n, spacing, mass, omega, tol)?;
            let coupling = build_coupling_matrix(&arr)?;
            return Ok(ResolvedGeometry { coupling, n, is_line: true });
        }
        if let Some(oscillators) = &self.geometry.oscillators {
            let omega = self
                .omega()
                .ok_or_else(|| anyhow::anyhow!("explicit oscillators need geometry.frequency"))?;
            let oscillators: Vec<Oscillator> = oscillators
                .iter()
                .map(|o| Oscillator {
                    center: Vector3::new(o.center[0], o.center[1], o.center[2]),
                    axis: Vector3::new(o.axis[0], o.axis[1], o.axis[2]),
                    mass: o.mass,
                })
                .collect();
            let n = oscillators.len();
            let arr = OscillatorArray::new(oscillators, omega, tol)?;
            let coupling = build_coupling_matrix(&arr)?;
            return Ok(ResolvedGeometry { coupling, n, is_line: false });
        }
        let raw = self.geometry.coupling.as_ref().expect("validated");
        let n = raw.matrix.len();
        let m = DMatrix::from_fn(n, n, |r, c| raw.matrix[r][c]);
        let coupling = CouplingMatrix::from_matrix(m, raw.gamma)?;
        Ok(ResolvedGeometry { coupling, n, is_line: false })
    }

    pub fn subset_policy(&self) -> SubsetPolicy {
        match self.subsets.policy.as_str() {
            "alternating" => SubsetPolicy::Alternating,
            "random" => SubsetPolicy::Random {
                count: self.subsets.count.unwrap_or(16),
                seed: self.seed,
            },
            _ => SubsetPolicy::Exhaustive,
        }
    }

    pub fn time_grid(&self) -> Vec<f64> {
        let grid = &self.time_grid;
        if grid.steps == 1 {
            return vec![grid.t_min];
        }
        (0..grid.steps)
            .map(|k| {
                let frac = k as f64 / (grid.steps - 1) as f64;
                match grid.scale.as_str() {
                    "log" => {
                        (grid.t_min.ln() + frac * (grid.t_max.ln() - grid.t_min.ln())).exp()
                    }
                    _ => grid.t_min + frac * (grid.t_max - grid.t_min),
                }
            })
            .collect()
    }
}
