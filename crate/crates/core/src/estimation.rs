//! Channel estimation along a sampled path and best-point selection.
//!
//! Each sampled observation is `z_i = K h_i + n_i` (pilot amplitude `K`,
//! white complex noise of variance `σ²`). The gain at sample `k` is
//! estimated linearly from the observations in its *neighborhood* — the
//! samples within a radius `d` of it — with the minimum-mean-square-error
//! weights
//!
//! ```text
//! a_k = K (K² R + σ² I)⁻¹ r_k,      ĥ_k = a_kᵀ z_{N(k)},
//! ```
//!
//! where `R` is the spatial correlation among the neighborhood samples
//! and `r_k` its column for sample `k`. The weights and the per-sample
//! residual error `1 − K a_kᵀ r_k` depend only on the geometry and the
//! noise model, so they are precomputed once and reused across
//! simulation trials.
//!
//! Two numerical regimes need care because closely spaced samples make
//! `R` singular to machine precision:
//!
//! * `σ² = 0`: the observations are exact (up to the known scale `K`),
//!   so the estimator short-circuits to `ĥ_k = z_k / K`, which is the
//!   zero-error solution; solving the singular system instead would
//!   inject solver noise at the `1e-6` level.
//! * `0 < σ²/K² < 1e-12`: the solve is kept well-posed by a `1e-10`
//!   diagonal regularizer (relative to `K²`).

use nalgebra::{Cholesky, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fading::{jakes_correlation, NoiseModel, Point2D, Wavelength};

/// Noise variance below this multiple of `K²` (but above zero) triggers
/// diagonal regularization of the smoothing solve.
const TINY_NOISE_RATIO: f64 = 1e-12;

/// Diagonal regularizer (relative to `K²`) used in the tiny-noise regime.
const SOLVE_JITTER: f64 = 1e-10;

/// Geometry-independent smoothing parameters.
#[derive(Debug, Clone, Copy)]
pub struct SmootherConfig {
    /// Neighborhood radius in meters; samples within this distance
    /// (inclusive) contribute to an estimate.
    pub radius: f64,
    /// Pilot amplitude and observation noise.
    pub noise: NoiseModel,
}

/// Indices of the samples within `radius` of each sample (inclusive of
/// the sample itself, so every neighborhood is nonempty).
pub fn neighborhoods(points: &[Point2D], radius: f64) -> Result<Vec<Vec<usize>>> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::parameter(format!(
            "neighborhood radius must be positive and finite, got {radius}"
        )));
    }
    Ok((0..points.len())
        .map(|k| {
            (0..points.len())
                .filter(|&i| points[k].distance_to(&points[i]) <= radius)
                .collect()
        })
        .collect())
}

/// Precomputed linear estimator for a fixed sample geometry and noise
/// model.
#[derive(Debug, Clone)]
pub struct Smoother {
    scale: f64,
    neighborhoods: Vec<Vec<usize>>,
    /// Real-valued weights per sample, aligned with its neighborhood.
    coefficients: Vec<Vec<f64>>,
    /// Residual estimation error per sample (unit-power gain), in
    /// `[0, 1]`; zero when the observations are noiseless.
    mse: Vec<f64>,
}

impl Smoother {
    pub fn new(
        points: &[Point2D],
        wavelength: Wavelength,
        config: &SmootherConfig,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::parameter("cannot smooth an empty sample set"));
        }
        let neighborhoods = neighborhoods(points, config.radius)?;
        let k_amp = config.noise.tone_amplitude;
        let sigma2 = config.noise.noise_variance;
        let k2 = k_amp * k_amp;

        let mut coefficients = Vec::with_capacity(points.len());
        let mut mse = Vec::with_capacity(points.len());

        for (k, nbr) in neighborhoods.iter().enumerate() {
            if config.noise.is_noiseless() {
                // Exact observations: pick out the sample itself.
                let own = nbr.iter().position(|&i| i == k).expect("k is in its own neighborhood");
                let mut a = vec![0.0; nbr.len()];
                a[own] = 1.0 / k_amp;
                coefficients.push(a);
                mse.push(0.0);
                continue;
            }

            let m = nbr.len();
            let mut a_mat = DMatrix::<f64>::zeros(m, m);
            for (row, &i) in nbr.iter().enumerate() {
                for (col, &j) in nbr.iter().enumerate() {
                    a_mat[(row, col)] =
                        k2 * jakes_correlation(&points[i], &points[j], wavelength);
                }
            }
            let mut shift = sigma2;
            if sigma2 / k2 < TINY_NOISE_RATIO {
                shift += SOLVE_JITTER * k2;
            }
            for i in 0..m {
                a_mat[(i, i)] += shift;
            }

            let r: DVector<f64> = DVector::from_iterator(
                m,
                nbr.iter().map(|&i| jakes_correlation(&points[i], &points[k], wavelength)),
            );
            let chol = Cholesky::new(a_mat).ok_or_else(|| {
                Error::numerical(format!(
                    "smoothing system for sample {k} is not positive definite"
                ))
            })?;
            let x = chol.solve(&r);
            let a: Vec<f64> = x.iter().map(|v| k_amp * v).collect();
            let residual = 1.0 - k_amp * a.iter().zip(r.iter()).map(|(ai, ri)| ai * ri).sum::<f64>();
            coefficients.push(a);
            mse.push(residual.max(0.0));
        }

        Ok(Smoother { scale: k_amp, neighborhoods, coefficients, mse })
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn neighborhoods(&self) -> &[Vec<usize>] {
        &self.neighborhoods
    }

    /// Residual estimation error per sample for a unit-power gain.
    pub fn theoretical_mse(&self) -> &[f64] {
        &self.mse
    }

    /// Pilot amplitude the estimator was built for.
    pub fn tone_amplitude(&self) -> f64 {
        self.scale
    }

    /// Applies the precomputed weights to one vector of observations.
    pub fn smooth(&self, observations: &[Complex64]) -> Result<Vec<Complex64>> {
        if observations.len() != self.len() {
            return Err(Error::parameter(format!(
                "expected {} observations, got {}",
                self.len(),
                observations.len()
            )));
        }
        Ok(self
            .neighborhoods
            .iter()
            .zip(&self.coefficients)
            .map(|(nbr, a)| {
                nbr.iter()
                    .zip(a)
                    .map(|(&i, &ai)| observations[i] * ai)
                    .sum::<Complex64>()
            })
            .collect())
    }
}

/// Index and location of the estimate with the largest magnitude; ties
/// resolve to the lowest index. This is the point the robot returns to.
pub fn select_best_point(points: &[Point2D], estimates: &[Complex64]) -> Result<(usize, Point2D)> {
    if points.is_empty() || points.len() != estimates.len() {
        return Err(Error::parameter(format!(
            "mismatched selection inputs: {} points, {} estimates",
            points.len(),
            estimates.len()
        )));
    }
    let mut best = 0usize;
    let mut best_power = estimates[0].norm_sqr();
    for (i, e) in estimates.iter().enumerate().skip(1) {
        let p = e.norm_sqr();
        if p > best_power {
            best = i;
            best_power = p;
        }
    }
    Ok((best, points[best]))
}
