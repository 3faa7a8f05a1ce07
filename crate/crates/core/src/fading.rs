//! Spatially correlated Rayleigh fading: the isotropic-scattering (Jakes)
//! correlation kernel, correlation matrices over point sets, correlated
//! complex-Gaussian field sampling, and noisy observation of the field.
//!
//! Under rich isotropic scattering the small-scale channel gain `h(p)` at
//! position `p` is zero-mean circularly-symmetric complex Gaussian with
//! unit power, and the correlation between two positions depends only on
//! their Euclidean separation:
//!
//! ```text
//! E[h(p) h(q)*] = J0(2π ‖p − q‖ / λ)
//! ```
//!
//! The first zero of that kernel is at separation z₀·λ ≈ 0.3827λ, the
//! distance at which two samples decorrelate completely.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::bessel::{j0, J0_FIRST_ROOT};
use crate::error::{Error, Result};
use crate::seed;

/// Separation (in wavelengths) at which the Jakes correlation first
/// vanishes: `z₀ = j₀,₁ / 2π ≈ 0.38274`.
pub const CORRELATION_ZERO_WAVELENGTHS: f64 = J0_FIRST_ROOT / std::f64::consts::TAU;

/// Most negative value the Jakes kernel attains (global minimum of `J0`).
const KERNEL_MIN: f64 = -0.402759395702553;

/// Eigenvalues of a correlation matrix may dip this far below zero from
/// rounding before the matrix is rejected as not PSD.
const PSD_TOLERANCE: f64 = 1e-8;

/// Diagonal jitter added after eigenvalue clipping, before factorization.
const FACTOR_JITTER: f64 = 1e-12;

/// Carrier wavelength in meters. Validated strictly positive and finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Wavelength(f64);

impl Wavelength {
    pub fn new(meters: f64) -> Result<Self> {
        if !(meters.is_finite() && meters > 0.0) {
            return Err(Error::parameter(format!(
                "wavelength must be positive and finite, got {meters}"
            )));
        }
        Ok(Wavelength(meters))
    }

    pub fn meters(&self) -> f64 {
        self.0
    }

    /// `k` wavelengths expressed in meters.
    pub fn times(&self, k: f64) -> f64 {
        self.0 * k
    }
}

/// A position in the horizontal plane, in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2D {
    pub x: f64,
    pub y: f64,
}

impl Point2D {
    pub fn new(x: f64, y: f64) -> Self {
        Point2D { x, y }
    }

    pub const ORIGIN: Point2D = Point2D { x: 0.0, y: 0.0 };

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn distance_to(&self, other: &Point2D) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Rotation about the origin by `angle` radians (counter-clockwise).
    pub fn rotated(&self, angle: f64) -> Point2D {
        let (s, c) = angle.sin_cos();
        Point2D::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl std::ops::Add for Point2D {
    type Output = Point2D;
    fn add(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for Point2D {
    type Output = Point2D;
    fn sub(self, rhs: Point2D) -> Point2D {
        Point2D::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Mul<f64> for Point2D {
    type Output = Point2D;
    fn mul(self, k: f64) -> Point2D {
        Point2D::new(self.x * k, self.y * k)
    }
}

/// Spatial correlation between the channel gains at `p` and `q`:
/// `J0(2π ‖p − q‖ / λ)`. Equal to 1 exactly when `p == q`.
pub fn jakes_correlation(p: &Point2D, q: &Point2D, wavelength: Wavelength) -> f64 {
    j0(std::f64::consts::TAU * p.distance_to(q) / wavelength.meters())
}

/// Correlation matrix of the field over an ordered point set.
///
/// Invariants (hold by construction): symmetric, unit diagonal, entries in
/// `[J0's global minimum, 1]`, positive semidefinite up to rounding. The
/// points are carried along so downstream consumers (samplers, smoothers)
/// agree on the geometry.
#[derive(Debug, Clone)]
pub struct CorrelationMatrix {
    points: Vec<Point2D>,
    matrix: DMatrix<f64>,
}

impl CorrelationMatrix {
    /// Builds the Jakes correlation matrix over `points`.
    pub fn from_points(points: &[Point2D], wavelength: Wavelength) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::parameter("correlation matrix needs at least one point"));
        }
        if let Some(p) = points.iter().find(|p| !p.is_finite()) {
            return Err(Error::parameter(format!("non-finite point ({}, {})", p.x, p.y)));
        }
        let n = points.len();
        let mut matrix = DMatrix::<f64>::identity(n, n);
        for i in 0..n {
            for j in (i + 1)..n {
                let r = jakes_correlation(&points[i], &points[j], wavelength);
                matrix[(i, j)] = r;
                matrix[(j, i)] = r;
            }
        }
        Ok(CorrelationMatrix { points: points.to_vec(), matrix })
    }

    /// Identity correlation over `points`: mutually independent gains.
    ///
    /// This bypasses the spatial kernel entirely; it exists so simulations
    /// can be checked against the closed-form order-statistics value for
    /// the mean of the maximum of independent unit-power gains.
    pub fn identity(points: &[Point2D]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::parameter("correlation matrix needs at least one point"));
        }
        let n = points.len();
        Ok(CorrelationMatrix { points: points.to_vec(), matrix: DMatrix::identity(n, n) })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Checks the type invariants; intended for tests and artifact loads.
    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if self.matrix[(i, i)] != 1.0 {
                return Err(Error::numerical(format!(
                    "diagonal entry ({i},{i}) = {} != 1",
                    self.matrix[(i, i)]
                )));
            }
            for j in 0..n {
                let v = self.matrix[(i, j)];
                if v != self.matrix[(j, i)] {
                    return Err(Error::numerical(format!("asymmetry at ({i},{j})")));
                }
                if !(KERNEL_MIN - 1e-12..=1.0).contains(&v) {
                    return Err(Error::numerical(format!(
                        "entry ({i},{j}) = {v} outside [{KERNEL_MIN}, 1]"
                    )));
                }
            }
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn from_raw_for_tests(points: Vec<Point2D>, matrix: DMatrix<f64>) -> Self {
        CorrelationMatrix { points, matrix }
    }
}

/// One realization of the correlated field: the complex gain at each point.
#[derive(Debug, Clone)]
pub struct FieldRealization {
    pub points: Vec<Point2D>,
    pub values: Vec<Complex64>,
    /// Seed that produced this realization (for provenance in artifacts).
    pub seed: u64,
}

impl FieldRealization {
    /// `|h_k|²` at each point.
    pub fn powers(&self) -> Vec<f64> {
        self.values.iter().map(|h| h.norm_sqr()).collect()
    }
}

/// Reusable factor of a correlation matrix for drawing field realizations.
///
/// Building the factor costs one symmetric eigendecomposition; each draw is
/// then a single matrix-vector product, which is what makes Monte Carlo
/// over many trials cheap. The factor repairs tiny negative eigenvalues
/// (rounding artifacts) by clipping them to zero and rejects matrices whose
/// most negative eigenvalue is below `-1e-8`; diagonal jitter `1e-12` is
/// added before factorization so the factor is well defined even for
/// rank-deficient geometries (duplicate points).
#[derive(Debug, Clone)]
pub struct FieldSampler {
    points: Vec<Point2D>,
    /// `L` with `L·Lᵀ = V·clip(Λ)·Vᵀ + jitter·I`.
    factor: DMatrix<f64>,
}

impl FieldSampler {
    pub fn new(correlation: &CorrelationMatrix) -> Result<Self> {
        let n = correlation.len();
        let eigen = correlation
            .matrix
            .clone()
            .try_symmetric_eigen(f64::EPSILON, 1024)
            .ok_or_else(|| {
                Error::numerical(format!("symmetric eigendecomposition did not converge (n = {n})"))
            })?;
        let min_eig = eigen.eigenvalues.min();
        if min_eig < -PSD_TOLERANCE {
            return Err(Error::numerical(format!(
                "correlation matrix is not positive semidefinite: min eigenvalue {min_eig:e} \
                 (tolerance -{PSD_TOLERANCE:e}, n = {n})"
            )));
        }
        let scaled = DVector::from_iterator(
            n,
            eigen.eigenvalues.iter().map(|&l| (l.max(0.0) + FACTOR_JITTER).sqrt()),
        );
        let mut factor = eigen.eigenvectors;
        for (mut col, s) in factor.column_iter_mut().zip(scaled.iter()) {
            col *= *s;
        }
        Ok(FieldSampler { points: correlation.points.clone(), factor })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point2D] {
        &self.points
    }

    /// Draws one field realization. The draw order is fixed (per point:
    /// real part then imaginary part from the "field" stream of `seed`),
    /// so a given seed always yields the same realization.
    pub fn sample(&self, seed: u64) -> FieldRealization {
        let n = self.len();
        let mut rng = seed::stream(seed, "field", 0);
        // CN(0,1): independent N(0, 1/2) real and imaginary parts.
        let scale = std::f64::consts::FRAC_1_SQRT_2;
        let mut re = DVector::zeros(n);
        let mut im = DVector::zeros(n);
        for k in 0..n {
            re[k] = scale * rng.sample::<f64, _>(StandardNormal);
            im[k] = scale * rng.sample::<f64, _>(StandardNormal);
        }
        let re = &self.factor * re;
        let im = &self.factor * im;
        let values = (0..n).map(|k| Complex64::new(re[k], im[k])).collect();
        FieldRealization { points: self.points.clone(), values, seed }
    }
}

/// Builds a sampler and draws a single realization; prefer constructing a
/// [`FieldSampler`] once when drawing many realizations of one geometry.
pub fn sample_field(correlation: &CorrelationMatrix, seed: u64) -> Result<FieldRealization> {
    Ok(FieldSampler::new(correlation)?.sample(seed))
}

/// Received-signal model for a sounding tone of amplitude `K` in additive
/// circularly-symmetric noise of variance `σ_n²`:
///
/// ```text
/// z_k = K·h_k + n_k,    n_k ~ CN(0, σ_n²)
/// ```
///
/// The per-sample SNR is `K²/σ_n²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub tone_amplitude: f64,
    pub noise_variance: f64,
}

impl NoiseModel {
    pub fn new(tone_amplitude: f64, noise_variance: f64) -> Result<Self> {
        if !(tone_amplitude.is_finite() && tone_amplitude > 0.0) {
            return Err(Error::parameter(format!(
                "tone amplitude must be positive and finite, got {tone_amplitude}"
            )));
        }
        if !(noise_variance.is_finite() && noise_variance >= 0.0) {
            return Err(Error::parameter(format!(
                "noise variance must be nonnegative and finite, got {noise_variance}"
            )));
        }
        Ok(NoiseModel { tone_amplitude, noise_variance })
    }

    /// Noise model for a given per-sample SNR in dB: `σ_n² = K²·10^(−snr/10)`.
    pub fn from_snr_db(tone_amplitude: f64, snr_db: f64) -> Result<Self> {
        if !snr_db.is_finite() {
            return Err(Error::parameter(format!("SNR must be finite, got {snr_db} dB")));
        }
        let k2 = tone_amplitude * tone_amplitude;
        NoiseModel::new(tone_amplitude, k2 * 10f64.powf(-snr_db / 10.0))
    }

    /// Zero-noise observation (`z_k = K·h_k` exactly).
    pub fn noiseless(tone_amplitude: f64) -> Result<Self> {
        NoiseModel::new(tone_amplitude, 0.0)
    }

    pub fn is_noiseless(&self) -> bool {
        self.noise_variance == 0.0
    }

    /// Per-sample SNR `K²/σ_n²` in dB; `None` when noiseless.
    pub fn snr_db(&self) -> Option<f64> {
        if self.is_noiseless() {
            None
        } else {
            Some(10.0 * (self.tone_amplitude.powi(2) / self.noise_variance).log10())
        }
    }
}

/// Observes the field through the received-signal model. Noise is drawn
/// from the "noise" stream of `seed` (independent of the field stream even
/// for equal seeds), one complex sample per point in point order.
pub fn observe(field: &FieldRealization, noise: &NoiseModel, seed: u64) -> Vec<Complex64> {
    let mut rng = seed::stream(seed, "noise", 0);
    let sigma = (noise.noise_variance / 2.0).sqrt();
    field
        .values
        .iter()
        .map(|h| {
            let n_re: f64 = rng.sample(StandardNormal);
            let n_im: f64 = rng.sample(StandardNormal);
            noise.tone_amplitude * h + Complex64::new(sigma * n_re, sigma * n_im)
        })
        .collect()
}
