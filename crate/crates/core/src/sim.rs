//! Monte Carlo evaluation of exploration strategies.
//!
//! A *trial* plays the full algorithm once on a fresh channel
//! realization: sample the true correlated field at the sampling points,
//! observe it through noise, smooth, pick the strongest estimated point,
//! and account the mechanical energy of the motion. Everything that does
//! not depend on the trial seed — sampling points, the field factor, the
//! smoothing weights, path lengths — is precomputed once in a simulation
//! value ([`CmdaSimulation`], [`StoppingSimulation`]) so a trial is a few
//! small matrix products.
//!
//! Determinism contract: trial `i` of master seed `s` uses the derived
//! seed `derive(s, "trial", i)` and nothing else; trials are aggregated
//! in index order. Running with any number of worker threads — or with
//! the `parallel` feature disabled — produces bit-identical results.

use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{select_best_point, Smoother, SmootherConfig};
use crate::fading::{observe, CorrelationMatrix, FieldSampler, NoiseModel, Point2D, Wavelength};
use crate::geometry::{
    circular_path, linear_path, orient_for_positioning, PathCurve, PathRecord, SplinePath,
};
use crate::pathopt::{optimize_path, AnnealingConfig, PathCostReport};
use crate::seed;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Mechanical model of the robot: each start from rest dissipates the
/// kinetic energy `½·mass·cruise_speed²` and cruising against friction
/// costs `friction_force` per meter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnergyModel {
    pub mass_kg: f64,
    pub cruise_speed_mps: f64,
    pub friction_force_n: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        EnergyModel { mass_kg: 1.0, cruise_speed_mps: 0.5, friction_force_n: 1.0 }
    }
}

impl EnergyModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("mass_kg", self.mass_kg),
            ("cruise_speed_mps", self.cruise_speed_mps),
            ("friction_force_n", self.friction_force_n),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::parameter(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }

    /// Kinetic energy dissipated by one acceleration from rest, J.
    pub fn start_cost(&self) -> f64 {
        0.5 * self.mass_kg * self.cruise_speed_mps * self.cruise_speed_mps
    }
}

/// Spatial model of the channel gains at the sampling points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldModel {
    /// Gains correlated by the zeroth-order Bessel kernel (the physical
    /// model).
    Jakes,
    /// Every sample fades independently. This bypasses spatial
    /// correlation so the selected power has a closed-form reference
    /// (the mean of the max of `M` unit exponentials is the harmonic
    /// number `H_M`), which validation leans on.
    Independent,
}

/// Outcome of one simulated trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    /// Location the robot commits to (highest estimated gain).
    pub q_opt: Point2D,
    /// True `|h|²` at that location — the estimate is never reported, so
    /// wrong selections under noise show up as lost power.
    pub true_power: f64,
    /// Mechanical energy of the whole maneuver, J.
    pub energy_j: f64,
    /// Length of the final straight move to `q_opt`, m.
    pub positioning_distance: f64,
    /// Number of channel samples taken.
    pub m_samples: usize,
}

/// Mean and standard error of the power and energy metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub mean_power: f64,
    pub stderr_power: f64,
    pub mean_energy: f64,
    pub stderr_energy: f64,
    pub trials: u64,
}

fn mean_and_stderr(values: impl ExactSizeIterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.clone().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.map(|v| (v - mean) * (v - mean)).sum();
    (mean, (ss / (n - 1.0)).sqrt() / n.sqrt())
}

impl SummaryStats {
    pub fn from_trials(trials: &[TrialResult]) -> Result<Self> {
        if trials.is_empty() {
            return Err(Error::parameter("cannot summarize zero trials"));
        }
        let (mean_power, stderr_power) =
            mean_and_stderr(trials.iter().map(|t| t.true_power));
        let (mean_energy, stderr_energy) =
            mean_and_stderr(trials.iter().map(|t| t.energy_j));
        Ok(SummaryStats {
            mean_power,
            stderr_power,
            mean_energy,
            stderr_energy,
            trials: trials.len() as u64,
        })
    }
}

/// Which benchmark geometry an experiment runs on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathFamily {
    /// The designed minimum-correlation path (annealed waypoints,
    /// quadratic interpolant).
    Mcp,
    /// Straight segment of the commanded length.
    Linear,
    /// One full circle whose perimeter is the commanded length.
    Circular,
    /// A previously saved trajectory record.
    File(PathBuf),
}

impl FromStr for PathFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mcp" => Ok(PathFamily::Mcp),
            "linear" => Ok(PathFamily::Linear),
            "circular" => Ok(PathFamily::Circular),
            other => Err(Error::parameter(format!(
                "unknown path family {other:?} (expected mcp, linear or circular)"
            ))),
        }
    }
}

/// Full description of one experiment: geometry, sampling, estimation,
/// energy accounting, and the field model.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub wavelength: Wavelength,
    pub family: PathFamily,
    /// Commanded path length `L_p` in meters (waypoint polyline for the
    /// designed path, segment length or perimeter for the benchmarks).
    pub path_length: f64,
    /// Waypoint count for the designed path.
    pub waypoints: usize,
    pub annealing: AnnealingConfig,
    /// Sampling interval Δ along the path, m.
    pub delta: f64,
    /// Smoothing neighborhood radius d, m.
    pub smoother_radius: f64,
    pub noise: NoiseModel,
    pub energy: EnergyModel,
    pub field_model: FieldModel,
    /// Reuse the same per-trial seeds at every sweep value, so curves
    /// are compared under common random numbers.
    pub common_random_numbers: bool,
}

impl ExperimentSpec {
    fn validate(&self) -> Result<()> {
        if !(self.path_length.is_finite() && self.path_length > 0.0) {
            return Err(Error::parameter(format!(
                "path length must be positive, got {}",
                self.path_length
            )));
        }
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::parameter(format!(
                "sampling interval must be positive, got {}",
                self.delta
            )));
        }
        if !(self.smoother_radius.is_finite() && self.smoother_radius > 0.0) {
            return Err(Error::parameter(format!(
                "smoothing radius must be positive, got {}",
                self.smoother_radius
            )));
        }
        if self.waypoints < 2 {
            return Err(Error::parameter(format!(
                "waypoint count must be ≥ 2, got {}",
                self.waypoints
            )));
        }
        self.energy.validate()
    }
}

/// A built trajectory plus the design report when one was produced.
#[derive(Debug, Clone)]
pub struct BuiltPath {
    pub curve: PathCurve,
    pub report: Option<PathCostReport>,
}

/// Realizes the experiment's geometry. The designed path is oriented so
/// the traversal ends at its more central endpoint before interpolation.
pub fn build_path(spec: &ExperimentSpec) -> Result<BuiltPath> {
    spec.validate()?;
    match &spec.family {
        PathFamily::Linear => Ok(BuiltPath { curve: linear_path(spec.path_length)?, report: None }),
        PathFamily::Circular => {
            Ok(BuiltPath { curve: circular_path(spec.path_length)?, report: None })
        }
        PathFamily::Mcp => {
            let optimized = optimize_path(
                spec.waypoints,
                spec.path_length,
                spec.wavelength,
                &spec.annealing,
            )?;
            let oriented = orient_for_positioning(optimized.points);
            let spline = SplinePath::fit(&oriented)?;
            Ok(BuiltPath { curve: PathCurve::Spline(spline), report: Some(optimized.report) })
        }
        PathFamily::File(path) => {
            let record = PathRecord::read_json(path)?;
            Ok(BuiltPath { curve: record.to_curve()?, report: record.cost })
        }
    }
}

/// Precomputed engine for trials of the continuous algorithm: traverse
/// the curve, sample every Δ, smooth, commit to the best estimate.
#[derive(Debug, Clone)]
pub struct CmdaSimulation {
    samples: Vec<Point2D>,
    sampler: FieldSampler,
    smoother: Smoother,
    noise: NoiseModel,
    energy: EnergyModel,
    traversal_length: f64,
    end: Point2D,
}

impl CmdaSimulation {
    pub fn new(curve: &PathCurve, spec: &ExperimentSpec) -> Result<Self> {
        spec.validate()?;
        let samples = curve.sample_uniform(spec.delta)?;
        let correlation = match spec.field_model {
            FieldModel::Jakes => CorrelationMatrix::from_points(&samples, spec.wavelength)?,
            FieldModel::Independent => CorrelationMatrix::identity(&samples)?,
        };
        let sampler = FieldSampler::new(&correlation)?;
        let smoother = Smoother::new(
            &samples,
            spec.wavelength,
            &SmootherConfig { radius: spec.smoother_radius, noise: spec.noise },
        )?;
        Ok(CmdaSimulation {
            samples,
            sampler,
            smoother,
            noise: spec.noise,
            energy: spec.energy,
            traversal_length: curve.total_length(),
            end: curve.end(),
        })
    }

    /// Builds the geometry and the engine in one step.
    pub fn from_spec(spec: &ExperimentSpec) -> Result<Self> {
        let built = build_path(spec)?;
        CmdaSimulation::new(&built.curve, spec)
    }

    pub fn sample_count(&self) -> usize {
        self.samples.len()
    }

    pub fn sample_points(&self) -> &[Point2D] {
        &self.samples
    }

    pub fn traversal_length(&self) -> f64 {
        self.traversal_length
    }

    /// Theoretical residual estimation error per sample.
    pub fn estimation_mse(&self) -> &[f64] {
        self.smoother.theoretical_mse()
    }

    /// Plays one trial: two starts from rest (exploration, positioning)
    /// plus friction over the traversal and the final straight move.
    pub fn run_trial(&self, trial_seed: u64) -> TrialResult {
        let field = self.sampler.sample(trial_seed);
        let z = observe(&field, &self.noise, trial_seed);
        let estimates = self.smoother.smooth(&z).expect("engine geometry matches");
        let (idx, q_opt) =
            select_best_point(&self.samples, &estimates).expect("at least one sample");

        let positioning = self.end.distance_to(&q_opt);
        let energy = 2.0 * self.energy.start_cost()
            + self.energy.friction_force_n * (self.traversal_length + positioning);
        TrialResult {
            q_opt,
            true_power: field.values[idx].norm_sqr(),
            energy_j: energy,
            positioning_distance: positioning,
            m_samples: self.samples.len(),
        }
    }
}

/// Precomputed engine for the stop-and-measure benchmark: visit fixed
/// points in order, average several measurements at each stop, then
/// commit to the best estimate.
#[derive(Debug, Clone)]
pub struct StoppingSimulation {
    points: Vec<Point2D>,
    sampler: FieldSampler,
    smoother: Smoother,
    /// Per-measurement noise; averaging divides the variance.
    noise: NoiseModel,
    measurements_per_stop: u32,
    energy: EnergyModel,
    tour_length: f64,
}

impl StoppingSimulation {
    pub fn new(
        points: Vec<Point2D>,
        wavelength: Wavelength,
        noise: NoiseModel,
        measurements_per_stop: u32,
        smoother_radius: f64,
        energy: EnergyModel,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::parameter("at least one stopping point is required"));
        }
        if measurements_per_stop == 0 {
            return Err(Error::parameter("measurements per stop must be ≥ 1"));
        }
        energy.validate()?;
        let correlation = CorrelationMatrix::from_points(&points, wavelength)?;
        let sampler = FieldSampler::new(&correlation)?;
        // Averaging n measurements leaves noise of variance σ²/n.
        let effective = NoiseModel::new(
            noise.tone_amplitude,
            noise.noise_variance / measurements_per_stop as f64,
        )?;
        let smoother = Smoother::new(
            &points,
            wavelength,
            &SmootherConfig { radius: smoother_radius, noise: effective },
        )?;
        let tour_length = points.windows(2).map(|w| w[0].distance_to(&w[1])).sum();
        Ok(StoppingSimulation {
            points,
            sampler,
            smoother,
            noise,
            measurements_per_stop,
            energy,
            tour_length,
        })
    }

    pub fn stop_count(&self) -> usize {
        self.points.len()
    }

    pub fn tour_length(&self) -> f64 {
        self.tour_length
    }

    /// Plays one trial: one start from rest per stop plus one for the
    /// final move, friction over the tour and the final straight move.
    pub fn run_trial(&self, trial_seed: u64) -> TrialResult {
        let field = self.sampler.sample(trial_seed);
        let k = self.noise.tone_amplitude;
        let averaged: Vec<Complex64> = if self.noise.is_noiseless() {
            field.values.iter().map(|h| h * k).collect()
        } else {
            let mut rng = seed::stream(trial_seed, "noise", 0);
            let sigma = (self.noise.noise_variance / 2.0).sqrt();
            let n = self.measurements_per_stop;
            field
                .values
                .iter()
                .map(|h| {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for _ in 0..n {
                        let re: f64 = rng.sample(rand_distr::StandardNormal);
                        let im: f64 = rng.sample(rand_distr::StandardNormal);
                        acc += Complex64::new(sigma * re, sigma * im);
                    }
                    h * k + acc / n as f64
                })
                .collect()
        };
        let estimates = self.smoother.smooth(&averaged).expect("engine geometry matches");
        let (idx, q_opt) =
            select_best_point(&self.points, &estimates).expect("at least one stop");

        let last = self.points[self.points.len() - 1];
        let positioning = last.distance_to(&q_opt);
        let starts = self.points.len() as f64;
        let energy = starts * self.energy.start_cost()
            + self.energy.friction_force_n * (self.tour_length + positioning);
        TrialResult {
            q_opt,
            true_power: field.values[idx].norm_sqr(),
            energy_j: energy,
            positioning_distance: positioning,
            m_samples: self.points.len(),
        }
    }
}

/// Aggregated outcome of a batch of trials, plus the per-trial records
/// for artifact emission and paired comparisons.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloRun {
    pub summary: SummaryStats,
    pub trials: Vec<TrialResult>,
}

fn trial_seeds(trials: u64, master_seed: u64) -> Vec<u64> {
    (0..trials).map(|i| seed::derive(master_seed, "trial", i)).collect()
}

/// Runs `trials` independent trials of `run_trial`. Trial `i` receives
/// the seed derived from `(master_seed, "trial", i)`; aggregation is in
/// index order, so the result is identical however trials are scheduled.
/// Uses the thread pool when the `parallel` feature is enabled.
pub fn monte_carlo<F>(run_trial: F, trials: u64, master_seed: u64) -> Result<MonteCarloRun>
where
    F: Fn(u64) -> TrialResult + Sync,
{
    if trials == 0 {
        return Err(Error::parameter("at least one trial is required"));
    }
    let seeds = trial_seeds(trials, master_seed);
    #[cfg(feature = "parallel")]
    let results: Vec<TrialResult> = seeds.par_iter().map(|&s| run_trial(s)).collect();
    #[cfg(not(feature = "parallel"))]
    let results: Vec<TrialResult> = seeds.iter().map(|&s| run_trial(s)).collect();
    Ok(MonteCarloRun { summary: SummaryStats::from_trials(&results)?, trials: results })
}

/// Single-threaded [`monte_carlo`], always available; the parallel path
/// must match it bit for bit.
pub fn monte_carlo_sequential<F>(
    run_trial: F,
    trials: u64,
    master_seed: u64,
) -> Result<MonteCarloRun>
where
    F: Fn(u64) -> TrialResult,
{
    if trials == 0 {
        return Err(Error::parameter("at least one trial is required"));
    }
    let results: Vec<TrialResult> =
        trial_seeds(trials, master_seed).iter().map(|&s| run_trial(s)).collect();
    Ok(MonteCarloRun { summary: SummaryStats::from_trials(&results)?, trials: results })
}

/// Parameter swept by [`sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    PathLength,
    Delta,
    SnrDb,
    DRadius,
    PathFamily,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::PathLength => "path_length",
            SweepAxis::Delta => "delta",
            SweepAxis::SnrDb => "snr_db",
            SweepAxis::DRadius => "d_radius",
            SweepAxis::PathFamily => "path_family",
        }
    }

    /// Parses one `--values` token for this axis.
    pub fn parse_value(&self, token: &str) -> Result<SweepValue> {
        match self {
            SweepAxis::PathFamily => {
                PathFamily::from_str(token.trim())?;
                Ok(SweepValue::Name(token.trim().to_string()))
            }
            _ => {
                let v: f64 = token.trim().parse().map_err(|_| {
                    Error::parameter(format!(
                        "value {token:?} for axis {} is not a number",
                        self.name()
                    ))
                })?;
                Ok(SweepValue::Number(v))
            }
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path_length" => Ok(SweepAxis::PathLength),
            "delta" => Ok(SweepAxis::Delta),
            "snr_db" => Ok(SweepAxis::SnrDb),
            "d_radius" => Ok(SweepAxis::DRadius),
            "path_family" => Ok(SweepAxis::PathFamily),
            other => Err(Error::parameter(format!(
                "unknown sweep axis {other:?} (expected path_length, delta, snr_db, \
                 d_radius or path_family)"
            ))),
        }
    }
}

/// One value along a sweep axis.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepValue {
    Number(f64),
    Name(String),
}

impl std::fmt::Display for SweepValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SweepValue::Number(v) => write!(f, "{v}"),
            SweepValue::Name(s) => write!(f, "{s}"),
        }
    }
}

/// One sweep point: the axis value, its aggregated statistics, and the
/// sample count of the geometry it ran on.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub axis: &'static str,
    pub value: String,
    pub summary: SummaryStats,
    pub m_samples: usize,
}

fn apply_axis(spec: &ExperimentSpec, axis: SweepAxis, value: &SweepValue) -> Result<ExperimentSpec> {
    let mut spec = spec.clone();
    match (axis, value) {
        (SweepAxis::PathLength, SweepValue::Number(v)) => {
            if spec.family == PathFamily::Mcp
                || spec.family == PathFamily::Linear
                || spec.family == PathFamily::Circular
            {
                spec.path_length = *v;
            } else {
                return Err(Error::parameter(
                    "path_length cannot be swept for a trajectory loaded from a file",
                ));
            }
        }
        (SweepAxis::Delta, SweepValue::Number(v)) => spec.delta = *v,
        (SweepAxis::SnrDb, SweepValue::Number(v)) => {
            spec.noise = NoiseModel::from_snr_db(spec.noise.tone_amplitude, *v)?;
        }
        (SweepAxis::DRadius, SweepValue::Number(v)) => spec.smoother_radius = *v,
        (SweepAxis::PathFamily, SweepValue::Name(name)) => {
            spec.family = name.parse()?;
        }
        (axis, value) => {
            return Err(Error::parameter(format!(
                "axis {} cannot take the value {value}",
                axis.name()
            )));
        }
    }
    Ok(spec)
}

/// Runs one batch of trials per axis value and tabulates the statistics.
/// Under common random numbers (`common_random_numbers`) every value
/// reuses the same per-trial seeds, which cancels shared noise in
/// comparisons; otherwise each value gets an independent seed substream.
pub fn sweep(
    spec: &ExperimentSpec,
    axis: SweepAxis,
    values: &[SweepValue],
    trials: u64,
    master_seed: u64,
) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::parameter("a sweep needs at least one value"));
    }
    let mut rows = Vec::with_capacity(values.len());
    for (i, value) in values.iter().enumerate() {
        let point_spec = apply_axis(spec, axis, value)?;
        let sim = CmdaSimulation::from_spec(&point_spec)?;
        let batch_seed = if spec.common_random_numbers {
            master_seed
        } else {
            seed::derive(master_seed, "sweep", i as u64)
        };
        let run = monte_carlo(|s| sim.run_trial(s), trials, batch_seed)?;
        rows.push(SweepRow {
            axis: axis.name(),
            value: value.to_string(),
            summary: run.summary,
            m_samples: sim.sample_count(),
        });
    }
    Ok(rows)
}

/// Writes per-trial records as CSV (one row per trial, stable order).
pub fn write_trials_csv(path: &Path, trials: &[TrialResult]) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "trial,q_opt_x_m,q_opt_y_m,true_power,energy_j,positioning_distance_m")?;
    for (i, t) in trials.iter().enumerate() {
        writeln!(
            w,
            "{i},{},{},{},{},{}",
            t.q_opt.x, t.q_opt.y, t.true_power, t.energy_j, t.positioning_distance
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Writes sweep results as long-form CSV: one row per (value, metric).
pub fn write_sweep_csv(path: &Path, rows: &[SweepRow]) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut w = BufWriter::new(file);
    writeln!(w, "axis,value,metric,mean,stderr,trials,m_samples")?;
    for r in rows {
        writeln!(
            w,
            "{},{},power,{},{},{},{}",
            r.axis, r.value, r.summary.mean_power, r.summary.stderr_power, r.summary.trials,
            r.m_samples
        )?;
        writeln!(
            w,
            "{},{},energy,{},{},{},{}",
            r.axis, r.value, r.summary.mean_energy, r.summary.stderr_energy, r.summary.trials,
            r.m_samples
        )?;
    }
    w.flush()?;
    Ok(())
}
