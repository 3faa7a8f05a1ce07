//! Minimum-correlation path design.
//!
//! An exploration path is described by `N` waypoints `d_1..d_N` joined by
//! segments of equal length `L_p/(N−1)`; the free parameters are the
//! per-segment heading angles `ψ_j` (with `ψ_1 ≡ 0`, removing the global
//! rotation). The design objective is the summed squared correlation over
//! all waypoint pairs,
//!
//! ```text
//! J(D_N) = Σ_m Σ_n J0²(2π ‖d_m − d_n‖ / λ),
//! ```
//!
//! whose minimizer spreads the waypoints so their channel gains are as
//! mutually uncorrelated as the path length allows. Two regimes:
//!
//! * `L_p/λ ≤ z₀` (the kernel's first zero, ≈ 0.3827): no waypoint pair
//!   can reach the decorrelation distance, the objective is monotone in
//!   every pairwise distance, and the straight line is optimal — returned
//!   directly without search.
//! * Longer paths are searched by simulated annealing over the heading
//!   angles with restarts; restarts run in parallel under the `parallel`
//!   feature and are reduced in fixed index order, so results do not
//!   depend on thread count.

use serde::{Deserialize, Serialize};

use crate::bessel::j0;
use crate::error::{Error, Result};
use crate::fading::{Point2D, Wavelength, CORRELATION_ZERO_WAVELENGTHS};
use crate::seed;
use rand::Rng;
use rand_distr::StandardNormal;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Per-segment heading angles in radians, each in `[0, 2π)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HeadingAngles(Vec<f64>);

impl HeadingAngles {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::parameter("at least one heading angle is required"));
        }
        if let Some(a) = angles
            .iter()
            .find(|a| !a.is_finite() || !(0.0..std::f64::consts::TAU).contains(*a))
        {
            return Err(Error::parameter(format!("heading angle {a} outside [0, 2π)")));
        }
        Ok(HeadingAngles(angles))
    }

    pub fn angles(&self) -> &[f64] {
        &self.0
    }

    /// Number of waypoints implied by this heading vector (`len + 1`).
    pub fn waypoint_count(&self) -> usize {
        self.0.len() + 1
    }
}

/// An ordered list of `N ≥ 2` waypoints with equal consecutive spacing.
#[derive(Debug, Clone, PartialEq)]
pub struct PathPoints {
    points: Vec<Point2D>,
    segment_length: f64,
}

impl PathPoints {
    /// Wraps an explicit waypoint list, validating the equal-spacing
    /// invariant to 1e-6 relative (covers rounding from file round-trips
    /// and rigid transforms).
    pub fn from_points(points: Vec<Point2D>) -> Result<Self> {
        if points.len() < 2 {
            return Err(Error::parameter("a path needs at least two waypoints"));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::parameter(format!("non-finite waypoint ({}, {})", p.x, p.y)));
        }
        let seg = points[0].distance_to(&points[1]);
        if seg <= 0.0 {
            return Err(Error::parameter("zero-length first segment"));
        }
        for w in points.windows(2) {
            let d = w[0].distance_to(&w[1]);
            if (d - seg).abs() > 1e-6 * seg {
                return Err(Error::parameter(format!(
                    "unequal segment lengths: {d} vs {seg}"
                )));
            }
        }
        Ok(PathPoints { points, segment_length: seg })
    }

    /// The straight path of `n` waypoints along +x from `origin`.
    pub fn collinear(n: usize, total_length: f64, origin: Point2D) -> Result<Self> {
        let psi = HeadingAngles::new(vec![0.0; n.saturating_sub(1)])?;
        angles_to_points(&psi, total_length, origin)
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn segment_length(&self) -> f64 {
        self.segment_length
    }

    pub fn total_length(&self) -> f64 {
        self.segment_length * (self.points.len() - 1) as f64
    }

    /// The same path traversed in the opposite direction.
    pub fn reversed(&self) -> PathPoints {
        let mut points = self.points.clone();
        points.reverse();
        PathPoints { points, segment_length: self.segment_length }
    }
}

/// Unrolls heading angles into waypoints: starting at `origin`, each
/// segment advances `total_length/(N−1)` along its heading.
pub fn angles_to_points(
    psi: &HeadingAngles,
    total_length: f64,
    origin: Point2D,
) -> Result<PathPoints> {
    if !(total_length.is_finite() && total_length > 0.0) {
        return Err(Error::parameter(format!(
            "path length must be positive and finite, got {total_length}"
        )));
    }
    if !origin.is_finite() {
        return Err(Error::parameter("non-finite origin"));
    }
    let seg = total_length / psi.angles().len() as f64;
    let mut points = Vec::with_capacity(psi.waypoint_count());
    points.push(origin);
    write_points(psi.angles(), seg, origin, &mut points);
    Ok(PathPoints { points, segment_length: seg })
}

/// Appends the waypoints after `origin` for the given headings (hot path
/// shared with the annealer, which reuses its buffer).
fn write_points(psi: &[f64], segment: f64, origin: Point2D, out: &mut Vec<Point2D>) {
    out.truncate(1);
    debug_assert_eq!(out[0], origin);
    let mut cur = origin;
    for &a in psi {
        let (s, c) = a.sin_cos();
        cur = Point2D::new(cur.x + segment * c, cur.y + segment * s);
        out.push(cur);
    }
}

/// The design objective: summed squared correlation over all ordered
/// waypoint pairs (diagonal included, so the value is at least `N`).
pub fn path_cost(path: &PathPoints, wavelength: Wavelength) -> f64 {
    cost_of_points(path.points(), wavelength)
}

fn cost_of_points(points: &[Point2D], wavelength: Wavelength) -> f64 {
    let k = std::f64::consts::TAU / wavelength.meters();
    let n = points.len();
    let mut acc = n as f64; // diagonal terms: J0(0)² each
    for m in 0..n {
        for p in (m + 1)..n {
            let r = j0(k * points[m].distance_to(&points[p]));
            acc += 2.0 * r * r;
        }
    }
    acc
}

/// True iff the straight line is provably optimal for this path length:
/// `L_p/λ ≤ z₀` with `z₀ = j₀,₁/2π` at full precision. On such short
/// paths no waypoint pair can be pushed to the decorrelation distance, so
/// maximizing every pairwise distance — the straight line — is optimal.
pub fn is_straight_line_regime(total_length: f64, wavelength: Wavelength) -> bool {
    total_length / wavelength.meters() <= CORRELATION_ZERO_WAVELENGTHS
}

/// Simulated-annealing schedule for [`optimize_path`].
///
/// Defaults: `T₀ = collinear cost / N`, geometric cooling ×0.97 per level,
/// 200 proposals per level, floor `1e-6·T₀`, 8 restarts, unit proposal
/// scale. The proposal perturbs one uniformly chosen free heading by a
/// wrapped Gaussian of standard deviation `scale·√(T/T₀)·π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnnealingConfig {
    /// Starting temperature; `None` derives `collinear cost / N`.
    pub initial_temperature: Option<f64>,
    /// Geometric cooling factor in (0, 1).
    pub cooling_factor: f64,
    /// Proposals evaluated at each temperature level.
    pub iterations_per_temperature: u32,
    /// Stop once the temperature falls to or below this; `None` derives
    /// `1e-6 · T₀`.
    pub temperature_floor: Option<f64>,
    /// Independent annealing runs; the best outcome wins, ties to the
    /// lowest restart index.
    pub restarts: u32,
    /// Multiplier on the temperature-scaled proposal standard deviation.
    pub proposal_stddev_scale: f64,
    /// Seed for the annealing streams (restart `r` uses the "anneal"/`r`
    /// stream of this seed).
    pub seed: u64,
}

impl Default for AnnealingConfig {
    fn default() -> Self {
        AnnealingConfig {
            initial_temperature: None,
            cooling_factor: 0.97,
            iterations_per_temperature: 200,
            temperature_floor: None,
            restarts: 8,
            proposal_stddev_scale: 1.0,
            seed: 0,
        }
    }
}

impl AnnealingConfig {
    fn validate(&self) -> Result<()> {
        if let Some(t0) = self.initial_temperature {
            if !(t0.is_finite() && t0 > 0.0) {
                return Err(Error::parameter(format!("initial temperature {t0} must be > 0")));
            }
        }
        if !(self.cooling_factor.is_finite()
            && self.cooling_factor > 0.0
            && self.cooling_factor < 1.0)
        {
            return Err(Error::parameter(format!(
                "cooling factor {} must lie in (0, 1)",
                self.cooling_factor
            )));
        }
        if self.iterations_per_temperature == 0 {
            return Err(Error::parameter("iterations per temperature must be ≥ 1"));
        }
        if self.restarts == 0 {
            return Err(Error::parameter("restart count must be ≥ 1"));
        }
        if !(self.proposal_stddev_scale.is_finite() && self.proposal_stddev_scale > 0.0) {
            return Err(Error::parameter(format!(
                "proposal stddev scale {} must be > 0",
                self.proposal_stddev_scale
            )));
        }
        Ok(())
    }
}

/// Objective value and search bookkeeping for a designed path.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathCostReport {
    /// Objective of the returned path. Never exceeds `collinear_cost`.
    pub cost: f64,
    /// Objective of the straight path of the same length (the search's
    /// starting state).
    pub collinear_cost: f64,
    /// Total objective evaluations spent.
    pub evaluations: u64,
    /// Restart index that produced the winner; `None` when the search was
    /// skipped (straight-line regime or `N = 2`).
    pub restart_of_best: Option<u32>,
}

/// A designed path: canonical waypoints (`d_1 = (0,0)`, `d_2` on the +x
/// axis) plus the cost report.
#[derive(Debug, Clone)]
pub struct OptimizedPath {
    pub points: PathPoints,
    pub report: PathCostReport,
}

struct RestartOutcome {
    best_cost: f64,
    best_psi: Vec<f64>,
    evaluations: u64,
}

/// Designs a minimum-correlation path of `n` waypoints and length
/// `total_length`.
///
/// Short paths (`L_p/λ ≤ z₀`) and two-waypoint paths return the straight
/// line directly. Otherwise simulated annealing searches the heading
/// angles starting from the straight line; since the best-so-far state is
/// only replaced on strict improvement, the result never costs more than
/// the straight line. Deterministic in `cfg.seed` regardless of thread
/// count.
pub fn optimize_path(
    n: usize,
    total_length: f64,
    wavelength: Wavelength,
    cfg: &AnnealingConfig,
) -> Result<OptimizedPath> {
    if n < 2 {
        return Err(Error::parameter(format!("waypoint count {n} must be ≥ 2")));
    }
    cfg.validate()?;
    let collinear = PathPoints::collinear(n, total_length, Point2D::ORIGIN)?;
    let collinear_cost = path_cost(&collinear, wavelength);

    if is_straight_line_regime(total_length, wavelength) || n == 2 {
        return Ok(OptimizedPath {
            points: collinear,
            report: PathCostReport {
                cost: collinear_cost,
                collinear_cost,
                evaluations: 1,
                restart_of_best: None,
            },
        });
    }

    let t0 = match cfg.initial_temperature {
        Some(t) => t,
        None => collinear_cost / n as f64,
    };
    let floor = match cfg.temperature_floor {
        Some(f) => f,
        None => 1e-6 * t0,
    };
    if !(floor > 0.0 && floor < t0) {
        return Err(Error::parameter(format!(
            "temperature floor {floor} must lie in (0, T₀ = {t0})"
        )));
    }

    let run = |restart: u32| -> RestartOutcome {
        anneal_restart(n, total_length, wavelength, cfg, collinear_cost, t0, floor, restart)
    };

    #[cfg(feature = "parallel")]
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts).into_par_iter().map(run).collect();
    #[cfg(not(feature = "parallel"))]
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts).map(run).collect();

    // Fixed-order reduction; strict `<` keeps ties at the lowest index.
    let mut winner = 0usize;
    for (i, o) in outcomes.iter().enumerate() {
        if o.best_cost < outcomes[winner].best_cost {
            winner = i;
        }
    }
    let evaluations: u64 = outcomes.iter().map(|o| o.evaluations).sum();
    let best = &outcomes[winner];

    let psi = HeadingAngles::new(best.best_psi.clone())?;
    let points = angles_to_points(&psi, total_length, Point2D::ORIGIN)?;
    let cost = path_cost(&points, wavelength);
    Ok(OptimizedPath {
        points,
        report: PathCostReport {
            cost,
            collinear_cost,
            evaluations,
            restart_of_best: Some(winner as u32),
        },
    })
}

#[allow(clippy::too_many_arguments)]
fn anneal_restart(
    n: usize,
    total_length: f64,
    wavelength: Wavelength,
    cfg: &AnnealingConfig,
    collinear_cost: f64,
    t0: f64,
    floor: f64,
    restart: u32,
) -> RestartOutcome {
    let mut rng = seed::stream(cfg.seed, "anneal", restart as u64);
    let segment = total_length / (n - 1) as f64;

    // ψ_1 is pinned to 0; indices 1..n-1 of `psi` are free.
    let mut psi = vec![0.0f64; n - 1];
    let mut best_psi = psi.clone();
    let mut cur_cost = collinear_cost;
    let mut best_cost = collinear_cost;
    let mut evaluations = 0u64;

    let mut scratch = Vec::with_capacity(n);
    scratch.push(Point2D::ORIGIN);

    let mut t = t0;
    while t > floor {
        let sigma = cfg.proposal_stddev_scale * (t / t0).sqrt() * std::f64::consts::PI;
        for _ in 0..cfg.iterations_per_temperature {
            let j = rng.gen_range(1..n - 1);
            let old = psi[j];
            let step: f64 = rng.sample::<f64, _>(StandardNormal) * sigma;
            psi[j] = (old + step).rem_euclid(std::f64::consts::TAU);

            write_points(&psi, segment, Point2D::ORIGIN, &mut scratch);
            let cand_cost = cost_of_points(&scratch, wavelength);
            evaluations += 1;

            let delta = cand_cost - cur_cost;
            let accept = delta <= 0.0 || rng.gen::<f64>() < (-delta / t).exp();
            if accept {
                cur_cost = cand_cost;
                if cur_cost < best_cost {
                    best_cost = cur_cost;
                    best_psi.copy_from_slice(&psi);
                }
            } else {
                psi[j] = old;
            }
        }
        t *= cfg.cooling_factor;
    }

    RestartOutcome { best_cost, best_psi, evaluations }
}
