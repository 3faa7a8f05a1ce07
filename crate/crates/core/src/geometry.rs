//! Continuous trajectories and arc-length sampling.
//!
//! Waypoints become a traversable curve in one of two ways:
//!
//! * [`SplinePath`] — a C¹ piecewise-quadratic interpolant of the
//!   waypoints. The first segment is straight and each later segment
//!   inherits its starting velocity from the previous one, so collinear
//!   waypoints reproduce the straight line exactly.
//! * [`CirclePath`] — an exact circle (center at the origin, start at
//!   angle 0, counter-clockwise), used for the circular benchmark where a
//!   quadratic interpolant could not stay on the circle to tight
//!   tolerance.
//!
//! Both expose arc length, point lookup by arc length, and uniform
//! sampling through [`PathCurve`]. Spline arc length is computed by
//! 32-point Gauss–Legendre quadrature accumulated over a 256-panel
//! cumulative table per segment; lookups invert the table with a
//! safeguarded Newton iteration to a `1e-10`-relative tolerance.

use std::io::{BufWriter, Write as _};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::{Point2D, Wavelength};
use crate::pathopt::{PathCostReport, PathPoints};

/// 32-point Gauss–Legendre nodes and weights on `[-1, 1]`.
const GL32: [(f64, f64); 32] = [
    (-0.9972638618494816, 0.007018610009469298),
    (-0.9856115115452684, 0.016274394730905965),
    (-0.9647622555875064, 0.025392065309262427),
    (-0.9349060759377397, 0.034273862913021626),
    (-0.8963211557660522, 0.042835898022226426),
    (-0.84936761373257, 0.050998059262376244),
    (-0.7944837959679424, 0.058684093478535704),
    (-0.7321821187402897, 0.06582222277636175),
    (-0.6630442669302152, 0.07234579410884845),
    (-0.5877157572407623, 0.07819389578707031),
    (-0.5068999089322294, 0.08331192422694685),
    (-0.42135127613063533, 0.08765209300440391),
    (-0.33186860228212767, 0.09117387869576386),
    (-0.23928736225213706, 0.09384439908080457),
    (-0.1444719615827965, 0.09563872007927483),
    (-0.04830766568773831, 0.09654008851472781),
    (0.04830766568773831, 0.09654008851472781),
    (0.1444719615827965, 0.09563872007927483),
    (0.23928736225213706, 0.09384439908080457),
    (0.33186860228212767, 0.09117387869576386),
    (0.42135127613063533, 0.08765209300440391),
    (0.5068999089322294, 0.08331192422694685),
    (0.5877157572407623, 0.07819389578707031),
    (0.6630442669302152, 0.07234579410884845),
    (0.7321821187402897, 0.06582222277636175),
    (0.7944837959679424, 0.058684093478535704),
    (0.84936761373257, 0.050998059262376244),
    (0.8963211557660522, 0.042835898022226426),
    (0.9349060759377397, 0.034273862913021626),
    (0.9647622555875064, 0.025392065309262427),
    (0.9856115115452684, 0.016274394730905965),
    (0.9972638618494816, 0.007018610009469298),
];

/// Sub-intervals in each segment's cumulative arc-length table.
const TABLE_PANELS: usize = 256;

/// Relative tolerance for arc-length inversion and endpoint clamping.
const ARC_TOLERANCE: f64 = 1e-10;

/// One quadratic segment `s(t) = a + b t + c t²`, `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Segment {
    a: Point2D,
    b: Point2D,
    c: Point2D,
}

impl Segment {
    fn position(&self, t: f64) -> Point2D {
        Point2D::new(
            self.a.x + t * (self.b.x + t * self.c.x),
            self.a.y + t * (self.b.y + t * self.c.y),
        )
    }

    /// `‖s'(t)‖ = ‖b + 2 c t‖`.
    fn speed(&self, t: f64) -> f64 {
        let vx = self.b.x + 2.0 * t * self.c.x;
        let vy = self.b.y + 2.0 * t * self.c.y;
        vx.hypot(vy)
    }

    /// Arc length of `t ∈ [lo, hi]` by a single Gauss–Legendre panel.
    fn arc_gl32(&self, lo: f64, hi: f64) -> f64 {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = 0.0;
        for (x, w) in GL32 {
            acc += w * self.speed(mid + half * x);
        }
        acc * half
    }
}

/// C¹ piecewise-quadratic interpolant of equally spaced waypoints,
/// parameterized by arc length.
#[derive(Debug, Clone)]
pub struct SplinePath {
    knots: Vec<Point2D>,
    chord_spacing: f64,
    segments: Vec<Segment>,
    /// `tables[j][i]` = arc length of segment `j` restricted to
    /// `t ∈ [0, i/TABLE_PANELS]`; strictly increasing in `i`.
    tables: Vec<Vec<f64>>,
    /// Arc length of the curve up to the start of each segment, plus the
    /// total as the final entry.
    cumulative: Vec<f64>,
}

impl SplinePath {
    /// Fits the interpolant: the first segment is the straight chord and
    /// each subsequent segment starts with the previous segment's end
    /// velocity, which makes the curve C¹ and leaves collinear waypoints
    /// on their straight line.
    pub fn fit(path: &PathPoints) -> Result<Self> {
        let d = path.points();
        let n = d.len();
        let mut segments = Vec::with_capacity(n - 1);
        let mut b = d[1] - d[0];
        for j in 0..n - 1 {
            let a = d[j];
            let c = d[j + 1] - a - b;
            segments.push(Segment { a, b, c });
            b = b + c * 2.0;
        }

        let mut tables = Vec::with_capacity(segments.len());
        let mut cumulative = Vec::with_capacity(segments.len() + 1);
        let mut total = 0.0;
        for seg in &segments {
            cumulative.push(total);
            let mut table = Vec::with_capacity(TABLE_PANELS + 1);
            table.push(0.0);
            let mut acc = 0.0;
            for i in 0..TABLE_PANELS {
                let lo = i as f64 / TABLE_PANELS as f64;
                let hi = (i + 1) as f64 / TABLE_PANELS as f64;
                acc += seg.arc_gl32(lo, hi);
                table.push(acc);
            }
            total += acc;
            tables.push(table);
        }
        cumulative.push(total);

        if !(total.is_finite() && total > 0.0) {
            return Err(Error::numerical(format!("degenerate curve length {total}")));
        }
        Ok(SplinePath {
            knots: d.to_vec(),
            chord_spacing: path.segment_length(),
            segments,
            tables,
            cumulative,
        })
    }

    pub fn knots(&self) -> &[Point2D] {
        &self.knots
    }

    /// Summed chord length of the waypoint polyline (a lower bound on
    /// [`Self::total_length`]).
    pub fn chord_length(&self) -> f64 {
        self.chord_spacing * self.segments.len() as f64
    }

    /// Traversed arc length of the full curve.
    pub fn total_length(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Point at arc length `arc ∈ [0, total_length]` (small overshoot is
    /// clamped; anything beyond tolerance is an error).
    pub fn point_at(&self, arc: f64) -> Result<Point2D> {
        let total = self.total_length();
        let arc = clamp_arc(arc, total)?;
        // Exact endpoints (inversion would otherwise land within the
        // Newton tolerance of them, not on them).
        if arc == 0.0 {
            return Ok(self.knots[0]);
        }
        if arc == total {
            return Ok(self.knots[self.knots.len() - 1]);
        }

        // Locate the segment, then the table panel inside it.
        let j = match self.cumulative[..self.cumulative.len() - 1]
            .partition_point(|&c| c <= arc)
        {
            0 => 0,
            k => k - 1,
        };
        let seg = &self.segments[j];
        let table = &self.tables[j];
        let local = arc - self.cumulative[j];
        let i = match table.partition_point(|&c| c <= local) {
            0 => 0,
            k => (k - 1).min(TABLE_PANELS - 1),
        };

        // Safeguarded Newton on f(t) = arc(0→t) − local over the panel.
        let mut lo = i as f64 / TABLE_PANELS as f64;
        let mut hi = (i + 1) as f64 / TABLE_PANELS as f64;
        let base = table[i];
        let f = |t: f64| base + seg.arc_gl32(i as f64 / TABLE_PANELS as f64, t) - local;
        let tol = ARC_TOLERANCE * total;
        let mut t = 0.5 * (lo + hi);
        for _ in 0..64 {
            let ft = f(t);
            if ft.abs() <= tol {
                return Ok(seg.position(t));
            }
            if ft > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let speed = seg.speed(t);
            let newton = t - ft / speed;
            t = if speed > 0.0 && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Err(Error::numerical(format!("arc-length inversion stalled at {arc}")))
    }
}

/// A circle of given radius centered at the origin, traversed
/// counter-clockwise from angle 0 (the point `(radius, 0)`). Covering arc
/// length `L` means sweeping the central angle `L/radius`.
#[derive(Debug, Clone, Copy)]
pub struct CirclePath {
    radius: f64,
    total_length: f64,
}

impl CirclePath {
    /// A circle traversed exactly once: `radius = perimeter / 2π`.
    pub fn with_perimeter(perimeter: f64) -> Result<Self> {
        if !(perimeter.is_finite() && perimeter > 0.0) {
            return Err(Error::parameter(format!(
                "circle perimeter must be positive and finite, got {perimeter}"
            )));
        }
        Ok(CirclePath {
            radius: perimeter / std::f64::consts::TAU,
            total_length: perimeter,
        })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    pub fn point_at(&self, arc: f64) -> Result<Point2D> {
        let arc = clamp_arc(arc, self.total_length)?;
        let theta = arc / self.radius;
        Ok(Point2D::new(self.radius * theta.cos(), self.radius * theta.sin()))
    }
}

fn clamp_arc(arc: f64, total: f64) -> Result<f64> {
    let tol = ARC_TOLERANCE * total;
    if !arc.is_finite() || arc < -tol || arc > total + tol {
        return Err(Error::parameter(format!(
            "arc length {arc} outside [0, {total}]"
        )));
    }
    Ok(arc.clamp(0.0, total))
}

/// Any traversable curve: designed spline or benchmark circle.
#[derive(Debug, Clone)]
pub enum PathCurve {
    Spline(SplinePath),
    Circle(CirclePath),
}

impl PathCurve {
    pub fn total_length(&self) -> f64 {
        match self {
            PathCurve::Spline(s) => s.total_length(),
            PathCurve::Circle(c) => c.total_length(),
        }
    }

    pub fn point_at(&self, arc: f64) -> Result<Point2D> {
        match self {
            PathCurve::Spline(s) => s.point_at(arc),
            PathCurve::Circle(c) => c.point_at(arc),
        }
    }

    /// Start point of the traversal.
    pub fn start(&self) -> Point2D {
        self.point_at(0.0).expect("0 is always a valid arc length")
    }

    /// End point of the traversal.
    pub fn end(&self) -> Point2D {
        self.point_at(self.total_length())
            .expect("the total length is always a valid arc length")
    }

    /// Samples the curve uniformly in arc length: the smallest uniform
    /// grid containing both endpoints whose spacing does not exceed
    /// `spacing`. See [`uniform_sample_count`].
    pub fn sample_uniform(&self, spacing: f64) -> Result<Vec<Point2D>> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::parameter(format!(
                "sample spacing must be positive and finite, got {spacing}"
            )));
        }
        let total = self.total_length();
        let m = uniform_sample_count(total, spacing);
        if m == 2 {
            log::warn!(
                "sample spacing {spacing} does not divide the curve (length {total}); \
                 only the two endpoints are sampled"
            );
        }
        let step = total / (m - 1) as f64;
        (0..m).map(|i| self.point_at(i as f64 * step)).collect()
    }
}

/// Number of samples laid uniformly over a curve of length `arc_length`
/// at a target spacing: `⌈arc_length/spacing⌉ + 1`, with the ratio
/// snapped to the nearest integer first when it is within `1e-9`
/// relative — so a curve of length exactly `36·spacing` yields 37
/// samples regardless of rounding in the length computation.
pub fn uniform_sample_count(arc_length: f64, spacing: f64) -> usize {
    let ratio = arc_length / spacing;
    let nearest = ratio.round();
    let snapped = if (ratio - nearest).abs() <= 1e-9 * ratio.abs().max(1.0) {
        nearest
    } else {
        ratio
    };
    (snapped.ceil() as usize).max(1) + 1
}

/// Reorders waypoints so the traversal ends at whichever endpoint has
/// the smaller mean distance to all waypoints. After sampling, the robot
/// moves from the path's end to the selected point — which is roughly
/// uniform over the samples — so ending at the more central endpoint
/// shortens the expected final leg. Ties keep the existing order.
pub fn orient_for_positioning(points: PathPoints) -> PathPoints {
    let pts = points.points();
    let first = pts[0];
    let last = pts[pts.len() - 1];
    let mean_from = |e: Point2D| -> f64 {
        pts.iter().map(|p| e.distance_to(p)).sum::<f64>() / pts.len() as f64
    };
    if mean_from(first) < mean_from(last) {
        points.reversed()
    } else {
        points
    }
}

/// The straight benchmark path: a two-waypoint segment of the given
/// length along +x from the origin, as a (trivially straight) spline.
pub fn linear_path(total_length: f64) -> Result<PathCurve> {
    let points = PathPoints::collinear(2, total_length, Point2D::ORIGIN)?;
    Ok(PathCurve::Spline(SplinePath::fit(&points)?))
}

/// The circular benchmark path: one full loop whose perimeter equals the
/// given length.
pub fn circular_path(total_length: f64) -> Result<PathCurve> {
    Ok(PathCurve::Circle(CirclePath::with_perimeter(total_length)?))
}

/// Kind tag for a serialized trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PathKind {
    Spline,
    Circle,
}

/// Serializable description of a trajectory, sufficient to rebuild the
/// curve exactly. Schema version 1; unknown fields are rejected.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathRecord {
    pub schema: u32,
    pub kind: PathKind,
    /// Carrier wavelength in meters.
    pub wavelength_m: f64,
    /// Commanded path length in meters (waypoint polyline or perimeter).
    pub design_length_m: f64,
    /// Traversed arc length of the continuous curve in meters.
    pub arc_length_m: f64,
    /// Spline waypoints in traversal order, meters; empty for a circle.
    pub knots: Vec<[f64; 2]>,
    /// Per-segment quadratic coefficients `(a, b, c)`, each an `[x, y]`
    /// pair. Derived from the knots; informational (reloading refits
    /// from the knots).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub coefficients: Vec<[[f64; 2]; 3]>,
    /// Circle radius in meters; absent for a spline.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_m: Option<f64>,
    /// Design-search report, when the path came from the optimizer.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<PathCostReport>,
}

pub const PATH_RECORD_SCHEMA: u32 = 1;

impl PathRecord {
    pub fn from_spline(
        spline: &SplinePath,
        wavelength: Wavelength,
        cost: Option<PathCostReport>,
    ) -> Self {
        PathRecord {
            schema: PATH_RECORD_SCHEMA,
            kind: PathKind::Spline,
            wavelength_m: wavelength.meters(),
            design_length_m: spline.chord_length(),
            arc_length_m: spline.total_length(),
            knots: spline.knots().iter().map(|p| [p.x, p.y]).collect(),
            coefficients: spline
                .segments
                .iter()
                .map(|s| [[s.a.x, s.a.y], [s.b.x, s.b.y], [s.c.x, s.c.y]])
                .collect(),
            radius_m: None,
            cost,
        }
    }

    pub fn from_circle(circle: &CirclePath, wavelength: Wavelength) -> Self {
        PathRecord {
            schema: PATH_RECORD_SCHEMA,
            kind: PathKind::Circle,
            wavelength_m: wavelength.meters(),
            design_length_m: circle.total_length(),
            arc_length_m: circle.total_length(),
            knots: Vec::new(),
            coefficients: Vec::new(),
            radius_m: Some(circle.radius()),
            cost: None,
        }
    }

    /// Rebuilds the traversable curve this record describes.
    pub fn to_curve(&self) -> Result<PathCurve> {
        if self.schema != PATH_RECORD_SCHEMA {
            return Err(Error::parameter(format!(
                "unsupported path record schema {} (expected {PATH_RECORD_SCHEMA})",
                self.schema
            )));
        }
        match self.kind {
            PathKind::Spline => {
                let knots: Vec<Point2D> =
                    self.knots.iter().map(|&[x, y]| Point2D::new(x, y)).collect();
                let points = PathPoints::from_points(knots)?;
                Ok(PathCurve::Spline(SplinePath::fit(&points)?))
            }
            PathKind::Circle => {
                let radius = self.radius_m.ok_or_else(|| {
                    Error::parameter("circle path record is missing its radius")
                })?;
                if !(radius.is_finite() && radius > 0.0) {
                    return Err(Error::parameter(format!("invalid circle radius {radius}")));
                }
                Ok(PathCurve::Circle(CirclePath {
                    radius,
                    total_length: self.arc_length_m,
                }))
            }
        }
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut writer = BufWriter::new(file);
        serde_json::to_writer_pretty(&mut writer, self)?;
        writer.write_all(b"\n")?;
        writer.flush()?;
        Ok(())
    }

    pub fn read_json(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path)?;
        let record: PathRecord = serde_json::from_reader(std::io::BufReader::new(file))?;
        Ok(record)
    }

    /// Writes the waypoints as `x_m,y_m` CSV (header included). Empty
    /// for a circle record.
    pub fn write_knots_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut writer = BufWriter::new(file);
        writeln!(writer, "x_m,y_m")?;
        for [x, y] in &self.knots {
            writeln!(writer, "{x},{y}")?;
        }
        writer.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pathopt::{angles_to_points, HeadingAngles};
    use std::f64::consts::{FRAC_PI_2, TAU};

    const LAM: f64 = 0.1402;

    fn lam() -> Wavelength {
        Wavelength::new(LAM).unwrap()
    }

    /// A curved 5-waypoint test path (headings fan out by 0.5 rad).
    fn curved_path() -> PathPoints {
        let psi = HeadingAngles::new(vec![0.0, 0.5, 1.0, 1.5]).unwrap();
        angles_to_points(&psi, LAM * 1.2, Point2D::ORIGIN).unwrap()
    }

    #[test]
    fn spline_interpolates_every_waypoint() {
        let path = curved_path();
        let spline = SplinePath::fit(&path).unwrap();
        // Exact at segment parameter endpoints…
        for (j, seg) in spline.segments.iter().enumerate() {
            let p0 = seg.position(0.0);
            let p1 = seg.position(1.0);
            assert!(p0.distance_to(&path.points()[j]) <= 1e-15);
            assert!(p1.distance_to(&path.points()[j + 1]) <= 1e-12);
        }
        // …and via arc-length lookup at the cumulative breakpoints.
        for (j, &arc) in spline.cumulative.iter().enumerate() {
            let p = spline.point_at(arc).unwrap();
            let tol = 1e-8 * spline.total_length();
            assert!(
                p.distance_to(&spline.knots()[j]) <= tol,
                "knot {j}: {p:?} vs {:?}",
                spline.knots()[j]
            );
        }
    }

    #[test]
    fn velocity_is_continuous_across_junctions() {
        let spline = SplinePath::fit(&curved_path()).unwrap();
        for w in spline.segments.windows(2) {
            let end_velocity = w[0].b + w[0].c * 2.0;
            assert!((end_velocity.x - w[1].b.x).abs() <= 1e-15);
            assert!((end_velocity.y - w[1].b.y).abs() <= 1e-15);
        }
    }

    #[test]
    fn collinear_waypoints_give_the_straight_line_exactly() {
        let path = PathPoints::collinear(25, LAM * 1.5, Point2D::ORIGIN).unwrap();
        let spline = SplinePath::fit(&path).unwrap();
        let total = spline.total_length();
        assert!((total - LAM * 1.5).abs() <= 1e-12 * total);
        for i in 0..=40 {
            let arc = total * i as f64 / 40.0;
            let p = spline.point_at(arc).unwrap();
            assert!((p.x - arc).abs() <= 1e-9 * total, "x at {arc}");
            assert!(p.y.abs() <= 1e-12);
        }
    }

    #[test]
    fn arc_length_is_at_least_the_chord_length() {
        let spline = SplinePath::fit(&curved_path()).unwrap();
        assert!(spline.total_length() > spline.chord_length());
        // Against a single whole-segment quadrature panel per segment.
        let direct: f64 = spline.segments.iter().map(|s| s.arc_gl32(0.0, 1.0)).sum();
        assert!((spline.total_length() - direct).abs() <= 1e-9 * direct);
    }

    #[test]
    fn cumulative_tables_increase_strictly() {
        let spline = SplinePath::fit(&curved_path()).unwrap();
        for table in &spline.tables {
            assert_eq!(table.len(), TABLE_PANELS + 1);
            for w in table.windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }

    #[test]
    fn point_lookup_inverts_arc_length() {
        let spline = SplinePath::fit(&curved_path()).unwrap();
        let total = spline.total_length();
        // Walking the curve at inverted positions accumulates chord
        // length close to the arc-length differences.
        let m = 400;
        let mut walked = 0.0;
        let mut prev = spline.point_at(0.0).unwrap();
        for i in 1..=m {
            let p = spline.point_at(total * i as f64 / m as f64).unwrap();
            walked += prev.distance_to(&p);
            prev = p;
        }
        assert!((walked - total).abs() <= 1e-4 * total, "walked {walked} vs {total}");
        assert!(spline.point_at(total + 1.0).is_err());
        assert!(spline.point_at(-1.0).is_err());
        assert!(spline.point_at(f64::NAN).is_err());
    }

    #[test]
    fn sample_count_formula_with_snapping() {
        assert_eq!(uniform_sample_count(36.0 * 0.05, 0.05), 37);
        // A ratio a hair above an integer from rounding still snaps…
        assert_eq!(uniform_sample_count(36.0 * 0.05 * (1.0 + 1e-12), 0.05), 37);
        assert_eq!(uniform_sample_count(36.0 * 0.05 * (1.0 - 1e-12), 0.05), 37);
        // …but a genuine excess does not.
        assert_eq!(uniform_sample_count(36.4 * 0.05, 0.05), 38);
        assert_eq!(uniform_sample_count(0.03, 0.05), 2);
    }

    #[test]
    fn uniform_samples_are_equally_spaced_and_within_target() {
        let spline = SplinePath::fit(&curved_path()).unwrap();
        let spacing = 0.05 * LAM;
        let curve = PathCurve::Spline(spline);
        let samples = curve.sample_uniform(spacing).unwrap();
        let m = uniform_sample_count(curve.total_length(), spacing);
        assert_eq!(samples.len(), m);
        assert!(samples[0].distance_to(&curve.start()) <= 1e-12);
        assert!(samples[m - 1].distance_to(&curve.end()) <= 1e-12);
        // Consecutive chord distances never exceed the arc-length step,
        // which never exceeds the requested spacing.
        let step = curve.total_length() / (m - 1) as f64;
        assert!(step <= spacing * (1.0 + 1e-9));
        for w in samples.windows(2) {
            assert!(w[0].distance_to(&w[1]) <= spacing * (1.0 + 1e-9));
        }
    }

    #[test]
    fn circle_geometry_is_exact() {
        let perimeter = LAM * 1.8;
        let circle = CirclePath::with_perimeter(perimeter).unwrap();
        let rho = perimeter / TAU;
        assert!((circle.radius() - rho).abs() <= 1e-15);
        let p0 = circle.point_at(0.0).unwrap();
        assert!((p0.x - rho).abs() <= 1e-15 && p0.y.abs() <= 1e-15);
        let quarter = circle.point_at(perimeter / 4.0).unwrap();
        assert!(quarter.x.abs() <= 1e-12 * rho && (quarter.y - rho).abs() <= 1e-12 * rho);

        let curve = PathCurve::Circle(circle);
        let samples = curve.sample_uniform(0.05 * LAM).unwrap();
        for p in &samples {
            let r = (p.x * p.x + p.y * p.y).sqrt();
            assert!((r - rho).abs() <= 1e-9 * rho, "off-circle sample {p:?}");
        }
        // A full loop closes: first and last samples coincide.
        assert!(samples[0].distance_to(&samples[samples.len() - 1]) <= 1e-9 * rho);
    }

    #[test]
    fn positioning_orientation_prefers_the_central_endpoint() {
        // A hook: the first waypoint sits near the crowd, the last far
        // away, so the traversal should be reversed to end at the first.
        let psi = HeadingAngles::new(vec![
            0.0,
            FRAC_PI_2,
            2.2,
            2.9,
            3.6,
        ])
        .unwrap();
        let hook = angles_to_points(&psi, 1.0, Point2D::ORIGIN).unwrap();
        let first = hook.points()[0];
        let oriented = orient_for_positioning(hook.clone());
        let pts = oriented.points();
        assert_eq!(pts[pts.len() - 1], first);

        // A straight line is symmetric: the tie keeps the given order.
        let line = PathPoints::collinear(9, 1.0, Point2D::ORIGIN).unwrap();
        let oriented = orient_for_positioning(line.clone());
        assert_eq!(oriented, line);
    }

    #[test]
    fn benchmark_paths_have_the_commanded_length() {
        let l = LAM * 1.5;
        let line = linear_path(l).unwrap();
        assert!((line.total_length() - l).abs() <= 1e-12 * l);
        assert!(line.start().distance_to(&Point2D::ORIGIN) <= 1e-15);
        let circle = circular_path(l).unwrap();
        assert!((circle.total_length() - l).abs() <= 1e-15 * l);
    }

    #[test]
    fn path_records_round_trip_through_json() {
        let dir = tempfile::tempdir().unwrap();

        let spline = SplinePath::fit(&curved_path()).unwrap();
        let record = PathRecord::from_spline(&spline, lam(), None);
        let json_path = dir.path().join("path.json");
        record.write_json(&json_path).unwrap();
        let back = PathRecord::read_json(&json_path).unwrap();
        let rebuilt = back.to_curve().unwrap();
        assert!((rebuilt.total_length() - spline.total_length()).abs()
            <= 1e-12 * spline.total_length());
        for i in 0..=10 {
            let arc = spline.total_length() * i as f64 / 10.0;
            let a = rebuilt.point_at(arc).unwrap();
            let b = spline.point_at(arc).unwrap();
            assert!(a.distance_to(&b) <= 1e-10 * spline.total_length());
        }

        let circle = CirclePath::with_perimeter(LAM * 1.8).unwrap();
        let record = PathRecord::from_circle(&circle, lam());
        let circle_path = dir.path().join("circle.json");
        record.write_json(&circle_path).unwrap();
        let back = PathRecord::read_json(&circle_path).unwrap();
        match back.to_curve().unwrap() {
            PathCurve::Circle(c) => {
                assert!((c.radius() - circle.radius()).abs() <= 1e-15);
            }
            other => panic!("expected a circle, got {other:?}"),
        }

        let csv_path = dir.path().join("knots.csv");
        PathRecord::from_spline(&spline, lam(), None)
            .write_knots_csv(&csv_path)
            .unwrap();
        let text = std::fs::read_to_string(&csv_path).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("x_m,y_m"));
        assert_eq!(lines.count(), spline.knots().len());
    }

    #[test]
    fn unknown_record_fields_are_rejected() {
        let bad = r#"{
            "schema": 1, "kind": "circle", "wavelength_m": 0.14,
            "design_length_m": 0.2, "arc_length_m": 0.2,
            "knots": [], "radius_m": 0.03, "surprise": true
        }"#;
        assert!(serde_json::from_str::<PathRecord>(bad).is_err());

        let wrong_schema = r#"{
            "schema": 7, "kind": "circle", "wavelength_m": 0.14,
            "design_length_m": 0.2, "arc_length_m": 0.2,
            "knots": [], "radius_m": 0.03
        }"#;
        let record: PathRecord = serde_json::from_str(wrong_schema).unwrap();
        assert!(record.to_curve().is_err());
    }
}
