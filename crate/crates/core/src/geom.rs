//! Vector and plane primitives, geodesic averaging of unit vectors and the
//! planar circle average of two point-normal pairs.
//!
//! The planar circle average moves the point along an auxiliary circular arc
//! from `p0` to `p1` whose total turning equals the angle `theta` between the
//! two normals, and rotates the normal along the great circle from `n0` to
//! `n1`. The arc turns in the same rotational sense as the normals do, which
//! makes the operation consistent under composition and reproduces circles
//! sampled with outward normals.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Deref, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Thresholds used by the averaging code.
///
/// Angles are dimensionless. Length thresholds are absolute and may be scaled
/// with [`Tolerances::for_extent`] for data with large coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Below this angle between normals the linear limit is used.
    pub small_angle: f64,
    /// Normals closer than this to antipodal are rejected.
    pub antipodal: f64,
    /// Points closer than this are treated as coincident.
    pub coincident: f64,
    /// Allowed distance of a point from a carrier plane.
    pub on_plane: f64,
    /// Allowed deviation of a unit vector's norm from one.
    pub unit: f64,
    /// Relative threshold on `|u x v| / (|u| |v|)` for [`z_dir`].
    pub cross: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        small_angle: 1e-9,
        antipodal: 1e-9,
        coincident: 1e-12,
        on_plane: 1e-9,
        unit: 1e-9,
        cross: 1e-12,
    };

    /// Scales the length thresholds by `extent` (typically the bounding box
    /// diagonal). Extents below one leave the defaults unchanged.
    pub fn for_extent(extent: f64) -> Tolerances {
        let s = extent.abs().max(1.0);
        Tolerances {
            coincident: Self::DEFAULT.coincident * s,
            on_plane: Self::DEFAULT.on_plane * s,
            ..Self::DEFAULT
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    #[error("cross product of parallel or zero vectors has no direction")]
    DegenerateCross,
    #[error("cannot normalize a zero or non-finite vector")]
    ZeroVector,
    #[error("vector norm {0} is not within tolerance of 1")]
    NotUnit(f64),
    #[error("normals are antipodal (angle {angle} rad); the average is undefined")]
    AntipodalNormals { angle: f64 },
    #[error("point-normal pair does not lie in the carrier plane")]
    NotInCarrier,
    #[error("angle between normals is zero; the quantity is only defined as a limit")]
    UndefinedTheta,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64, z: f64) -> Vec3 {
        Vec3 { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    #[inline]
    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    #[inline]
    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    #[inline]
    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// `(1 - w) * self + w * o`, for any real `w`.
    #[inline]
    pub fn lerp(self, o: Vec3, w: f64) -> Vec3 {
        self * (1.0 - w) + o * w
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn normalize(self) -> Result<UnitVec3, GeomError> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Ok(UnitVec3(self / n))
        } else {
            Err(GeomError::ZeroVector)
        }
    }

    /// Unsigned angle between two nonzero vectors, in `[0, pi]`.
    pub fn angle_to(self, o: Vec3) -> f64 {
        self.cross(o).norm().atan2(self.dot(o))
    }

    pub fn max_abs(self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    #[inline]
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    #[inline]
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    #[inline]
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    #[inline]
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// A vector of unit Euclidean length.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "Vec3", try_from = "Vec3")]
pub struct UnitVec3(Vec3);

impl UnitVec3 {
    pub const X: UnitVec3 = UnitVec3(Vec3::new(1.0, 0.0, 0.0));
    pub const Y: UnitVec3 = UnitVec3(Vec3::new(0.0, 1.0, 0.0));
    pub const Z: UnitVec3 = UnitVec3(Vec3::new(0.0, 0.0, 1.0));

    /// Accepts `v` only if it is already unit length within the default
    /// tolerance; the stored value is renormalized.
    pub fn new(v: Vec3) -> Result<UnitVec3, GeomError> {
        let n = v.norm();
        if !n.is_finite() || (n - 1.0).abs() > Tolerances::DEFAULT.unit {
            return Err(GeomError::NotUnit(n));
        }
        Ok(UnitVec3(v / n))
    }

    /// Wraps `v` without checking. Callers guarantee unit length.
    #[inline]
    pub const fn new_unchecked(v: Vec3) -> UnitVec3 {
        UnitVec3(v)
    }

    #[inline]
    pub fn get(self) -> Vec3 {
        self.0
    }

    pub fn angle_to(self, o: UnitVec3) -> f64 {
        self.0.angle_to(o.0)
    }

    /// Some unit vector orthogonal to `self`.
    pub fn any_orthogonal(self) -> UnitVec3 {
        let v = self.0;
        let axis = if v.x.abs() <= v.y.abs() && v.x.abs() <= v.z.abs() {
            Vec3::new(1.0, 0.0, 0.0)
        } else if v.y.abs() <= v.z.abs() {
            Vec3::new(0.0, 1.0, 0.0)
        } else {
            Vec3::new(0.0, 0.0, 1.0)
        };
        UnitVec3(v.cross(axis) / v.cross(axis).norm())
    }
}

impl Deref for UnitVec3 {
    type Target = Vec3;
    #[inline]
    fn deref(&self) -> &Vec3 {
        &self.0
    }
}

impl From<UnitVec3> for Vec3 {
    fn from(u: UnitVec3) -> Vec3 {
        u.0
    }
}

impl TryFrom<Vec3> for UnitVec3 {
    type Error = GeomError;
    fn try_from(v: Vec3) -> Result<Self, Self::Error> {
        UnitVec3::new(v)
    }
}

impl Neg for UnitVec3 {
    type Output = UnitVec3;
    fn neg(self) -> UnitVec3 {
        UnitVec3(-self.0)
    }
}

/// A point-normal pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pnp {
    pub point: Vec3,
    pub normal: UnitVec3,
}

impl Pnp {
    pub const fn new(point: Vec3, normal: UnitVec3) -> Pnp {
        Pnp { point, normal }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plane {
    pub origin: Vec3,
    pub normal: UnitVec3,
}

impl Plane {
    pub const fn new(origin: Vec3, normal: UnitVec3) -> Plane {
        Plane { origin, normal }
    }

    pub fn signed_distance(&self, p: Vec3) -> f64 {
        (p - self.origin).dot(*self.normal)
    }

    pub fn project(&self, p: Vec3) -> Vec3 {
        p - *self.normal * self.signed_distance(p)
    }

    /// True if both the point and the normal of `pnp` lie in the plane.
    pub fn contains(&self, pnp: &Pnp, tol: &Tolerances) -> bool {
        self.signed_distance(pnp.point).abs() <= tol.on_plane && pnp.normal.dot(*self.normal).abs() <= tol.unit
    }
}

/// Orthonormal in-plane coordinate system. `e1` and `e2` may have either
/// handedness with respect to the plane normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub origin: Vec3,
    pub e1: UnitVec3,
    pub e2: UnitVec3,
}

impl Frame {
    pub fn new(origin: Vec3, e1: UnitVec3, e2: UnitVec3) -> Frame {
        debug_assert!(e1.dot(*e2).abs() < 1e-9);
        Frame { origin, e1, e2 }
    }

    /// The canonical frame of `plane`, right-handed about the plane normal.
    pub fn for_plane(plane: &Plane) -> Frame {
        let e1 = plane.normal.any_orthogonal();
        let e2 = UnitVec3(plane.normal.cross(*e1));
        Frame {
            origin: plane.origin,
            e1,
            e2,
        }
    }

    #[inline]
    fn local(&self, p: Vec3) -> Vec2 {
        let d = p - self.origin;
        Vec2(d.dot(*self.e1), d.dot(*self.e2))
    }

    #[inline]
    fn local_dir(&self, v: Vec3) -> Vec2 {
        Vec2(v.dot(*self.e1), v.dot(*self.e2))
    }

    #[inline]
    fn global(&self, q: Vec2) -> Vec3 {
        self.origin + *self.e1 * q.0 + *self.e2 * q.1
    }
}

#[derive(Debug, Clone, Copy)]
struct Vec2(f64, f64);

impl Vec2 {
    fn cross(self, o: Vec2) -> f64 {
        self.0 * o.1 - self.1 * o.0
    }

    fn rotated(self, angle: f64) -> Vec2 {
        let (s, c) = angle.sin_cos();
        Vec2(c * self.0 - s * self.1, s * self.0 + c * self.1)
    }

    fn scaled(self, s: f64) -> Vec2 {
        Vec2(self.0 * s, self.1 * s)
    }

    fn add(self, o: Vec2) -> Vec2 {
        Vec2(self.0 + o.0, self.1 + o.1)
    }

    fn sub(self, o: Vec2) -> Vec2 {
        Vec2(self.0 - o.0, self.1 - o.1)
    }

    fn lerp(self, o: Vec2, w: f64) -> Vec2 {
        self.scaled(1.0 - w).add(o.scaled(w))
    }

    fn norm(self) -> f64 {
        self.0.hypot(self.1)
    }
}

/// Unit vector in the direction of `u x v`.
pub fn z_dir(u: Vec3, v: Vec3) -> Result<UnitVec3, GeomError> {
    let c = u.cross(v);
    let scale = u.norm() * v.norm();
    let n = c.norm();
    if !(scale > 0.0) || n <= Tolerances::DEFAULT.cross * scale {
        return Err(GeomError::DegenerateCross);
    }
    Ok(UnitVec3(c / n))
}

/// Rotates `n0` towards `n1` by `w` times the angle between them, inside the
/// plane they span. Any real `w` is accepted.
pub fn geodesic_avg(n0: UnitVec3, n1: UnitVec3, w: f64) -> Result<UnitVec3, GeomError> {
    geodesic_avg_with(n0, n1, w, &Tolerances::DEFAULT)
}

pub fn geodesic_avg_with(n0: UnitVec3, n1: UnitVec3, w: f64, tol: &Tolerances) -> Result<UnitVec3, GeomError> {
    let theta = n0.angle_to(n1);
    if theta >= PI - tol.antipodal {
        return Err(GeomError::AntipodalNormals { angle: theta });
    }
    let v = if theta < tol.small_angle {
        n0.get().lerp(n1.get(), w)
    } else {
        let s = theta.sin();
        *n0 * (((1.0 - w) * theta).sin() / s) + *n1 * ((w * theta).sin() / s)
    };
    v.normalize()
}

/// `sin(w * theta / 2) / sin(theta / 2)`, continuous at `theta = 0`.
pub(crate) fn half_angle_ratio(theta: f64, w: f64) -> f64 {
    if theta.abs() < 1e-12 {
        w
    } else {
        (0.5 * w * theta).sin() / (0.5 * theta).sin()
    }
}

/// Point of the auxiliary arc in local 2D coordinates. `signed_theta > 0`
/// means the normals turn counter-clockwise, and so does the arc.
fn arc_point(p0: Vec2, p1: Vec2, signed_theta: f64, w: f64, tol: &Tolerances) -> Vec2 {
    let d = p1.sub(p0);
    if signed_theta.abs() < tol.small_angle || d.norm() < tol.coincident {
        return p0.lerp(p1, w);
    }
    // The chord from p0 to the point at central angle w*theta has length
    // |d| sin(w theta/2)/sin(theta/2) and leans (1-w) theta/2 off the chord d.
    let ratio = half_angle_ratio(signed_theta.abs(), w);
    p0.add(d.rotated(-0.5 * (1.0 - w) * signed_theta).scaled(ratio))
}

/// Circle average of two pairs that lie in the plane of `frame`.
///
/// The point is computed in the frame's 2D coordinates, the normal by
/// [`geodesic_avg`]. The result does not depend on which in-plane frame is
/// supplied (either handedness).
pub fn circle_avg_in_frame(p0: &Pnp, p1: &Pnp, w: f64, frame: &Frame, tol: &Tolerances) -> Result<Pnp, GeomError> {
    let normal = geodesic_avg_with(p0.normal, p1.normal, w, tol)?;
    let theta = p0.normal.angle_to(p1.normal);
    let n0 = frame.local_dir(*p0.normal);
    let n1 = frame.local_dir(*p1.normal);
    let sense = n0.cross(n1);
    let signed_theta = if sense < 0.0 { -theta } else { theta };
    let q = arc_point(frame.local(p0.point), frame.local(p1.point), signed_theta, w, tol);
    Ok(Pnp::new(frame.global(q), normal))
}

/// Planar circle average of `p0` and `p1`, both lying in `carrier`.
pub fn circle_avg_2d(p0: &Pnp, p1: &Pnp, w: f64, carrier: &Plane) -> Result<Pnp, GeomError> {
    let extent = p0.point.max_abs().max(p1.point.max_abs());
    circle_avg_2d_with(p0, p1, w, carrier, &Tolerances::for_extent(extent))
}

pub fn circle_avg_2d_with(p0: &Pnp, p1: &Pnp, w: f64, carrier: &Plane, tol: &Tolerances) -> Result<Pnp, GeomError> {
    if !carrier.contains(p0, tol) || !carrier.contains(p1, tol) {
        return Err(GeomError::NotInCarrier);
    }
    let frame = Frame::for_plane(carrier);
    circle_avg_in_frame(p0, p1, w, &frame, tol)
}
