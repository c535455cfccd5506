//! Closed polyline current loops and their magnetic field per unit current.

use super::vec3::{self, Vec3};
use super::GeometryError;
use crate::numerics::CompensatedSum;

/// Vacuum permeability in T m / A.
pub const MU_0: f64 = 1.256_637_062_12e-6;

/// Default clearance below which a field evaluation point is treated as
/// touching the conductor (metres).
pub const DEFAULT_CLEARANCE_M: f64 = 1e-9;

/// A closed loop of straight segments carrying a (unit) current.
///
/// The loop is defined by its vertices; the segment from the last vertex back
/// to the first is implicit. Orientation (vertex order) fixes the sign of the
/// field via the right-hand rule.
#[derive(Debug, Clone)]
pub struct LoopPolyline {
    vertices: Vec<Vec3>,
}

impl LoopPolyline {
    /// Builds a closed loop from at least three vertices.
    ///
    /// Rejects non-finite coordinates and zero-length segments (consecutive
    /// duplicate vertices, including an explicit repeat of the first vertex at
    /// the end; callers should not close the loop manually).
    pub fn new(vertices: Vec<Vec3>) -> Result<Self, GeometryError> {
        if vertices.len() < 3 {
            return Err(GeometryError::InvalidLoop(format!(
                "a closed loop needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        for (i, v) in vertices.iter().enumerate() {
            if !v.iter().all(|c| c.is_finite()) {
                return Err(GeometryError::InvalidLoop(format!(
                    "vertex {i} has a non-finite coordinate"
                )));
            }
        }
        let n = vertices.len();
        for i in 0..n {
            let j = (i + 1) % n;
            if vec3::dist(vertices[i], vertices[j]) == 0.0 {
                return Err(GeometryError::InvalidLoop(format!(
                    "zero-length segment between vertices {i} and {j}"
                )));
            }
        }
        Ok(Self { vertices })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    /// Segment endpoints (start, end), including the closing segment.
    pub fn segments(&self) -> impl Iterator<Item = (Vec3, Vec3)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    /// Total arclength of the loop in metres.
    pub fn perimeter(&self) -> f64 {
        let mut sum = CompensatedSum::new();
        for (p1, p2) in self.segments() {
            sum.add(vec3::dist(p1, p2));
        }
        sum.value()
    }

    /// Regular n-gon approximation of a circle of radius `radius` in the z = 0
    /// plane, centred at the origin, oriented counter-clockwise seen from +z.
    pub fn regular_polygon(radius: f64, n: usize) -> Result<Self, GeometryError> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(GeometryError::InvalidLoop(format!(
                "polygon radius must be finite and positive, got {radius}"
            )));
        }
        let vertices = (0..n)
            .map(|i| {
                let theta = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                [radius * theta.cos(), radius * theta.sin(), 0.0]
            })
            .collect();
        Self::new(vertices)
    }

    /// Applies `f` to every vertex, returning a new loop.
    pub fn map_vertices(&self, mut f: impl FnMut(Vec3) -> Vec3) -> Result<Self, GeometryError> {
        Self::new(self.vertices.iter().map(|&v| f(v)).collect())
    }
}

/// Magnetic field per unit current, B/I in T/A, of a closed polyline loop at
/// `point`.
///
/// Each straight segment contributes the exact thin-wire field in the
/// singularity-robust two-endpoint form: with `a` and `b` the vectors from the
/// observation point to the segment ends,
///
/// ```text
/// B_seg = (mu_0 / 4 pi) * (|a| + |b|) * (a x b) / (|a| |b| (|a| |b| + a . b))
/// ```
///
/// which is algebraically equivalent to the textbook sine-angle expression but
/// avoids catastrophic cancellation near the segment's extension.
///
/// If `point` lies within `clearance` metres of any segment the evaluation is
/// refused with [`GeometryError::PointTooCloseToConductor`]; the thin-wire
/// field diverges there and the result would be meaningless.
pub fn biot_savart(
    loop_: &LoopPolyline,
    point: Vec3,
    clearance: f64,
) -> Result<Vec3, GeometryError> {
    if !point.iter().all(|c| c.is_finite()) {
        return Err(GeometryError::InvalidPoint(
            "field point has a non-finite coordinate".to_string(),
        ));
    }
    if !(clearance.is_finite() && clearance >= 0.0) {
        return Err(GeometryError::InvalidPoint(format!(
            "clearance must be finite and non-negative, got {clearance}"
        )));
    }
    let mut bx = CompensatedSum::new();
    let mut by = CompensatedSum::new();
    let mut bz = CompensatedSum::new();
    for (index, (p1, p2)) in loop_.segments().enumerate() {
        let distance = vec3::point_segment_distance(point, p1, p2);
        if distance < clearance {
            return Err(GeometryError::PointTooCloseToConductor {
                index,
                distance_m: distance,
                clearance_m: clearance,
            });
        }
        let a = vec3::sub(p1, point);
        let b = vec3::sub(p2, point);
        let na = vec3::norm(a);
        let nb = vec3::norm(b);
        let denom = na * nb * (na * nb + vec3::dot(a, b));
        if denom <= 0.0 {
            // Collinear with the segment's extension (a x b = 0 and the
            // robust denominator underflows): the true contribution is zero.
            continue;
        }
        let coeff = MU_0 / (4.0 * std::f64::consts::PI) * (na + nb) / denom;
        let axb = vec3::cross(a, b);
        bx.add(coeff * axb[0]);
        by.add(coeff * axb[1]);
        bz.add(coeff * axb[2]);
    }
    Ok([bx.value(), by.value(), bz.value()])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn rotate_z(v: Vec3, angle: f64) -> Vec3 {
        let (s, c) = angle.sin_cos();
        [c * v[0] - s * v[1], s * v[0] + c * v[1], v[2]]
    }

    #[test]
    fn rejects_degenerate_loops() {
        assert!(LoopPolyline::new(vec![[0.0; 3], [1.0, 0.0, 0.0]]).is_err());
        assert!(LoopPolyline::new(vec![
            [0.0; 3],
            [1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0]
        ])
        .is_err());
        // Manual closure duplicates the first vertex -> zero closing segment.
        assert!(LoopPolyline::new(vec![
            [0.0; 3],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0; 3]
        ])
        .is_err());
        assert!(LoopPolyline::new(vec![
            [0.0; 3],
            [f64::NAN, 0.0, 0.0],
            [0.0, 1.0, 0.0]
        ])
        .is_err());
    }

    #[test]
    fn polygon_centre_field_matches_circular_loop() {
        // A fine regular polygon approximates the circular-loop centre field
        // B = mu_0 I / (2 R). The exact n-gon centre field is
        // (mu_0 I / (2 pi R)) n tan(pi/n); both are frozen here.
        let radius = 1.0e-3;
        let n = 10_000;
        let loop_ = LoopPolyline::regular_polygon(radius, n).unwrap();
        let b = biot_savart(&loop_, [0.0, 0.0, 0.0], DEFAULT_CLEARANCE_M).unwrap();
        assert!(b[0].abs() < 1e-12 * b[2].abs());
        assert!(b[1].abs() < 1e-12 * b[2].abs());

        let circle = MU_0 / (2.0 * radius);
        assert_relative_eq!(b[2], circle, max_relative = 1e-3);

        let exact_ngon = MU_0 / (2.0 * std::f64::consts::PI * radius)
            * n as f64
            * (std::f64::consts::PI / n as f64).tan();
        assert_relative_eq!(b[2], exact_ngon, max_relative = 1e-12);
    }

    #[test]
    fn square_loop_far_field_matches_dipole() {
        // On the axis, far from a small loop of area A = a^2 carrying I, the
        // field approaches the dipole form mu_0 I A / (2 pi z^3).
        let a = 1.0e-3;
        let h = a / 2.0;
        let loop_ = LoopPolyline::new(vec![
            [-h, -h, 0.0],
            [h, -h, 0.0],
            [h, h, 0.0],
            [-h, h, 0.0],
        ])
        .unwrap();
        let z = 20.0 * a;
        let b = biot_savart(&loop_, [0.0, 0.0, z], DEFAULT_CLEARANCE_M).unwrap();
        let dipole = MU_0 * a * a / (2.0 * std::f64::consts::PI * z * z * z);
        assert_relative_eq!(b[2], dipole, max_relative = 1e-2);
        // Transverse components vanish by symmetry.
        assert!(b[0].abs() < 1e-12 * b[2].abs());
        assert!(b[1].abs() < 1e-12 * b[2].abs());
    }

    #[test]
    fn reversing_orientation_negates_field() {
        let loop_ = LoopPolyline::new(vec![
            [0.0, 0.0, 0.0],
            [2.0e-3, 0.0, 0.0],
            [2.0e-3, 1.0e-3, 0.0],
            [0.5e-3, 1.5e-3, 0.2e-3],
        ])
        .unwrap();
        let mut reversed_vertices = loop_.vertices().to_vec();
        reversed_vertices.reverse();
        let reversed = LoopPolyline::new(reversed_vertices).unwrap();
        let p = [0.3e-3, -0.4e-3, 0.9e-3];
        let b = biot_savart(&loop_, p, DEFAULT_CLEARANCE_M).unwrap();
        let br = biot_savart(&reversed, p, DEFAULT_CLEARANCE_M).unwrap();
        let scale = vec3::norm(b);
        for i in 0..3 {
            assert_relative_eq!(b[i], -br[i], epsilon = 1e-13 * scale);
        }
    }

    #[test]
    fn rigid_motion_invariance() {
        // Translating and rotating loop and field point together leaves the
        // field magnitude unchanged and rotates its direction.
        let loop_ = LoopPolyline::regular_polygon(1.0e-3, 64).unwrap();
        let p = [0.4e-3, 0.2e-3, 0.7e-3];
        let b = biot_savart(&loop_, p, DEFAULT_CLEARANCE_M).unwrap();

        let shift = [1.0, -2.0, 0.5];
        let angle = 0.77;
        let transform = |v: Vec3| vec3::add(rotate_z(v, angle), shift);
        let moved = loop_.map_vertices(transform).unwrap();
        let bm = biot_savart(&moved, transform(p), DEFAULT_CLEARANCE_M).unwrap();

        let b_rotated = rotate_z(b, angle);
        let scale = vec3::norm(b);
        for i in 0..3 {
            assert_relative_eq!(bm[i], b_rotated[i], epsilon = 1e-12 * scale);
        }
    }

    #[test]
    fn point_on_conductor_is_refused() {
        let loop_ = LoopPolyline::regular_polygon(1.0e-3, 4).unwrap();
        let vertex = loop_.vertices()[0];
        let err = biot_savart(&loop_, vertex, DEFAULT_CLEARANCE_M).unwrap_err();
        assert!(matches!(
            err,
            GeometryError::PointTooCloseToConductor { .. }
        ));
        // Midpoint of a segment is just as bad.
        let (p1, p2) = loop_.segments().next().unwrap();
        let mid = vec3::scale(vec3::add(p1, p2), 0.5);
        assert!(biot_savart(&loop_, mid, DEFAULT_CLEARANCE_M).is_err());
    }

    #[test]
    fn collinear_exterior_point_gets_zero_from_that_segment() {
        // A point on the extension of a segment (outside the clearance zone)
        // must not blow up; the segment's own contribution is zero.
        let loop_ = LoopPolyline::new(vec![
            [0.0, 0.0, 0.0],
            [1.0e-3, 0.0, 0.0],
            [1.0e-3, 1.0e-3, 0.0],
            [0.0, 1.0e-3, 0.0],
        ])
        .unwrap();
        let b = biot_savart(&loop_, [5.0e-3, 0.0, 0.0], DEFAULT_CLEARANCE_M).unwrap();
        assert!(b.iter().all(|c| c.is_finite()));
    }

    #[test]
    fn perimeter_of_polygon_approaches_circumference() {
        let loop_ = LoopPolyline::regular_polygon(1.0, 4096).unwrap();
        assert_relative_eq!(
            loop_.perimeter(),
            2.0 * std::f64::consts::PI,
            max_relative = 1e-6
        );
    }
}
