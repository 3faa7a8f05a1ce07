//! Experiment configuration: a single JSON document with a versioned
//! `schema` field. Unknown keys are rejected — a typo in an experiment
//! config must fail loudly, not silently fall back to a default. All
//! physical quantities are in base SI units (meters, dB, Joules); every
//! field except `schema` is optional and defaults to the reference
//! setup: λ = 0.1402 m, Δ = 0.05λ, N = 25 waypoints, smoothing radius
//! d = 0.3828λ, SNR = 10 dB, designed-path family, L_p = 1.5λ.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cmda_core::fading::{NoiseModel, Wavelength};
use cmda_core::pathopt::AnnealingConfig;
use cmda_core::sim::{EnergyModel, ExperimentSpec, FieldModel, PathFamily};

pub const CONFIG_SCHEMA: u32 = 1;

const DEFAULT_WAVELENGTH_M: f64 = 0.1402;
const DEFAULT_DELTA_WAVELENGTHS: f64 = 0.05;
const DEFAULT_RADIUS_WAVELENGTHS: f64 = 0.3828;
const DEFAULT_LENGTH_WAVELENGTHS: f64 = 1.5;
const DEFAULT_WAYPOINTS: usize = 25;
const DEFAULT_SNR_DB: f64 = 10.0;
const DEFAULT_TRIALS: u64 = 10_000;

/// A configuration error: reported with exit code 2, distinct from
/// runtime failures.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSection {
    /// `mcp`, `linear`, `circular`, or `file`.
    pub family: Option<String>,
    /// Commanded path length L_p, meters.
    pub length_m: Option<f64>,
    /// Waypoint count N for the designed path.
    pub waypoints: Option<usize>,
    /// Saved trajectory record; required when `family` is `file`.
    pub file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmootherSection {
    /// Neighborhood radius d, meters.
    pub radius_m: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnnealingSection {
    pub initial_temperature: Option<f64>,
    pub cooling_factor: Option<f64>,
    pub iterations_per_temperature: Option<u32>,
    pub temperature_floor: Option<f64>,
    pub restarts: Option<u32>,
    pub proposal_stddev_scale: Option<f64>,
    /// Defaults to the master seed.
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergySection {
    pub mass_kg: Option<f64>,
    pub cruise_speed_mps: Option<f64>,
    pub friction_force_n: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Config format version; must equal [`CONFIG_SCHEMA`].
    pub schema: u32,
    pub wavelength_m: Option<f64>,
    #[serde(default)]
    pub path: PathSection,
    /// Sampling interval Δ, meters.
    pub delta_m: Option<f64>,
    /// Per-sample SNR in dB; mutually exclusive with `noiseless`.
    pub snr_db: Option<f64>,
    #[serde(default)]
    pub noiseless: bool,
    #[serde(default)]
    pub smoother: SmootherSection,
    #[serde(default)]
    pub annealing: AnnealingSection,
    #[serde(default)]
    pub energy: EnergySection,
    pub trials: Option<u64>,
    pub master_seed: Option<u64>,
    pub output_dir: Option<PathBuf>,
    pub common_random_numbers: Option<bool>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            schema: CONFIG_SCHEMA,
            wavelength_m: None,
            path: PathSection::default(),
            delta_m: None,
            snr_db: None,
            noiseless: false,
            smoother: SmootherSection::default(),
            annealing: AnnealingSection::default(),
            energy: EnergySection::default(),
            trials: None,
            master_seed: None,
            output_dir: None,
            common_random_numbers: None,
        }
    }
}

/// A fully resolved experiment: the `ExperimentSpec` handed to the
/// engines plus the run-level knobs the CLI needs.
#[derive(Debug, Clone)]
pub struct ResolvedExperiment {
    pub spec: ExperimentSpec,
    pub trials: u64,
    pub master_seed: u64,
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
        let config: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| ConfigError(format!("invalid config {}: {e}", path.display())))?;
        if config.schema != CONFIG_SCHEMA {
            return err(format!(
                "unsupported config schema {} (this tool reads schema {CONFIG_SCHEMA})",
                config.schema
            ));
        }
        Ok(config)
    }

    /// Resolves defaults and validates every physical quantity, producing
    /// the experiment spec. All failures here are config errors.
    pub fn resolve(&self) -> Result<ResolvedExperiment, ConfigError> {
        let lambda_m = self.wavelength_m.unwrap_or(DEFAULT_WAVELENGTH_M);
        let wavelength = Wavelength::new(lambda_m)
            .map_err(|e| ConfigError(format!("wavelength_m: {e}")))?;

        let family = match self.path.family.as_deref().unwrap_or("mcp") {
            "file" => match &self.path.file {
                Some(p) => PathFamily::File(p.clone()),
                None => return err("path.family is \"file\" but path.file is not set"),
            },
            name => name
                .parse::<PathFamily>()
                .map_err(|e| ConfigError(format!("path.family: {e}")))?,
        };
        if family != PathFamily::Mcp {
            if matches!(family, PathFamily::Linear | PathFamily::Circular)
                && self.path.file.is_some()
            {
                return err("path.file is only meaningful when path.family is \"file\"");
            }
        }

        let path_length = self.path.length_m.unwrap_or(DEFAULT_LENGTH_WAVELENGTHS * lambda_m);
        let waypoints = self.path.waypoints.unwrap_or(DEFAULT_WAYPOINTS);
        let delta = self.delta_m.unwrap_or(DEFAULT_DELTA_WAVELENGTHS * lambda_m);
        let smoother_radius =
            self.smoother.radius_m.unwrap_or(DEFAULT_RADIUS_WAVELENGTHS * lambda_m);

        for (name, v) in [
            ("path.length_m", path_length),
            ("delta_m", delta),
            ("smoother.radius_m", smoother_radius),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return err(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if waypoints < 2 {
            return err(format!("path.waypoints must be ≥ 2, got {waypoints}"));
        }

        let noise = if self.noiseless {
            if self.snr_db.is_some() {
                return err("snr_db and noiseless are mutually exclusive");
            }
            NoiseModel::noiseless(1.0).expect("unit amplitude is valid")
        } else {
            NoiseModel::from_snr_db(1.0, self.snr_db.unwrap_or(DEFAULT_SNR_DB))
                .map_err(|e| ConfigError(format!("snr_db: {e}")))?
        };

        let master_seed = self.master_seed.unwrap_or(0);
        let defaults = AnnealingConfig::default();
        let a = &self.annealing;
        let annealing = AnnealingConfig {
            initial_temperature: a.initial_temperature.or(defaults.initial_temperature),
            cooling_factor: a.cooling_factor.unwrap_or(defaults.cooling_factor),
            iterations_per_temperature: a
                .iterations_per_temperature
                .unwrap_or(defaults.iterations_per_temperature),
            temperature_floor: a.temperature_floor.or(defaults.temperature_floor),
            restarts: a.restarts.unwrap_or(defaults.restarts),
            proposal_stddev_scale: a
                .proposal_stddev_scale
                .unwrap_or(defaults.proposal_stddev_scale),
            seed: a.seed.unwrap_or(master_seed),
        };

        let energy_defaults = EnergyModel::default();
        let e = &self.energy;
        let energy = EnergyModel {
            mass_kg: e.mass_kg.unwrap_or(energy_defaults.mass_kg),
            cruise_speed_mps: e.cruise_speed_mps.unwrap_or(energy_defaults.cruise_speed_mps),
            friction_force_n: e.friction_force_n.unwrap_or(energy_defaults.friction_force_n),
        };
        energy.validate().map_err(|e| ConfigError(format!("energy: {e}")))?;

        let trials = self.trials.unwrap_or(DEFAULT_TRIALS);
        if trials == 0 {
            return err("trials must be ≥ 1");
        }

        Ok(ResolvedExperiment {
            spec: ExperimentSpec {
                wavelength,
                family,
                path_length,
                waypoints,
                annealing,
                delta,
                smoother_radius,
                noise,
                energy,
                field_model: FieldModel::Jakes,
                common_random_numbers: self.common_random_numbers.unwrap_or(true),
            },
            trials,
            master_seed,
            output_dir: self.output_dir.clone().unwrap_or_else(|| PathBuf::from("out")),
        })
    }
}
