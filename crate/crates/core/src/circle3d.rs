//! The circle average of two point-normal pairs in space.
//!
//! Both pairs are viewed along `z = normalize(n0 x n1)`, which is orthogonal
//! to both normals. The planar average is taken in the plane through `p0`
//! orthogonal to `z` (after projecting `p1` onto it), and the resulting point
//! is lifted by `w` times the signed separation of the two parallel planes
//! through `p0` and `p1`. Sweeping `w` traces a helix whose projection is the
//! planar arc.

use std::f64::consts::PI;

use crate::geom::{
    circle_avg_in_frame, geodesic_avg_with, half_angle_ratio, Frame, GeomError, Plane, Pnp, Tolerances, UnitVec3, Vec3,
};

/// Geometry shared by every average of one pair of PNPs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AvgContext {
    /// `normalize(n0 x n1)`.
    pub z: UnitVec3,
    /// Distance between the parallel planes through `p0` and `p1`.
    pub hbar: f64,
    /// `(p1 - p0) . z`; `hbar` with the direction towards `p1`.
    pub signed_offset: f64,
    /// Plane through `p0` with normal `z`.
    pub pi0: Plane,
    /// Angle between the normals, in `[0, pi)`.
    pub theta: f64,
    /// Angle between `n0 x n1` and `p1 - p0`, in `[0, pi]`. Zero when the
    /// points coincide.
    pub phi: f64,
}

impl AvgContext {
    pub fn new(p0: &Pnp, p1: &Pnp) -> Result<AvgContext, GeomError> {
        Self::with_tolerances(p0, p1, &Tolerances::DEFAULT)
    }

    pub fn with_tolerances(p0: &Pnp, p1: &Pnp, tol: &Tolerances) -> Result<AvgContext, GeomError> {
        let theta = p0.normal.angle_to(p1.normal);
        if theta >= PI - tol.antipodal {
            return Err(GeomError::AntipodalNormals { angle: theta });
        }
        if theta < tol.small_angle {
            return Err(GeomError::UndefinedTheta);
        }
        let z = p0.normal.cross(*p1.normal).normalize()?;
        let d = p1.point - p0.point;
        let signed_offset = d.dot(*z);
        let phi = if d.norm() > 0.0 { z.get().angle_to(d) } else { 0.0 };
        Ok(AvgContext {
            z,
            hbar: signed_offset.abs(),
            signed_offset,
            pi0: Plane::new(p0.point, z),
            theta,
            phi,
        })
    }
}

/// Choice of the in-plane coordinate frame used for the planar step.
///
/// The result of the average does not depend on it; it exists so that this
/// can be tested.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FrameChoice {
    /// Rotation of the first axis away from the canonical one, radians.
    pub rotation: f64,
    /// Use a left-handed frame about `z`.
    pub mirrored: bool,
}

impl FrameChoice {
    fn frame(&self, ctx: &AvgContext) -> Frame {
        let canon = Frame::for_plane(&ctx.pi0);
        let (s, c) = self.rotation.sin_cos();
        let e1 = UnitVec3::new_unchecked(*canon.e1 * c + *canon.e2 * s);
        let e2 = ctx.z.cross(*e1);
        let e2 = UnitVec3::new_unchecked(if self.mirrored { -e2 } else { e2 });
        Frame::new(ctx.pi0.origin, e1, e2)
    }
}

/// Weighted circle average of two PNPs for any real weight `w`.
pub fn circle_avg_3d(p0: &Pnp, p1: &Pnp, w: f64) -> Result<Pnp, GeomError> {
    circle_avg_3d_with(p0, p1, w, FrameChoice::default(), &Tolerances::DEFAULT)
}

pub fn circle_avg_3d_with(p0: &Pnp, p1: &Pnp, w: f64, frame: FrameChoice, tol: &Tolerances) -> Result<Pnp, GeomError> {
    let ctx = match AvgContext::with_tolerances(p0, p1, tol) {
        Ok(ctx) => ctx,
        Err(GeomError::UndefinedTheta) => {
            let normal = geodesic_avg_with(p0.normal, p1.normal, w, tol)?;
            return Ok(Pnp::new(p0.point.lerp(p1.point, w), normal));
        }
        Err(e) => return Err(e),
    };
    // (i) project p1 onto the plane through p0
    let p1_star = Pnp::new(p1.point - *ctx.z * ctx.signed_offset, p1.normal);
    // (ii) planar average inside that plane
    let planar = circle_avg_in_frame(p0, &p1_star, w, &frame.frame(&ctx), tol)?;
    // (iii) move to the plane at fraction w of the way towards p1
    Ok(Pnp::new(planar.point + *ctx.z * (w * ctx.signed_offset), planar.normal))
}

/// The point where the segment `[p0, p1]` meets the working plane of weight
/// `w`, i.e. `(1 - w) p0 + w p1`.
pub fn chord_point(p0: Vec3, p1: Vec3, w: f64) -> Vec3 {
    p0.lerp(p1, w)
}

/// Closed-form distance between the averaged point and [`chord_point`],
/// obtained from the cosine theorem in the working plane.
pub fn deviation_from_chord(p0: &Pnp, p1: &Pnp, w: f64) -> Result<f64, GeomError> {
    let ctx = AvgContext::new(p0, p1)?;
    let len = p0.point.distance(p1.point) * ctx.phi.sin();
    let ratio = half_angle_ratio(ctx.theta, w);
    let sq =
        (len * w).powi(2) + (len * ratio).powi(2) - 2.0 * len * len * w * ratio * (0.5 * ctx.theta * (1.0 - w)).cos();
    Ok(sq.max(0.0).sqrt())
}

/// Points of the average at `samples` equally spaced weights in `[0, 1]`.
///
/// For `theta = 0` the trace is the straight segment.
pub fn helix_trace(p0: &Pnp, p1: &Pnp, samples: usize) -> Result<Vec<Vec3>, GeomError> {
    match samples {
        0 => Ok(Vec::new()),
        1 => Ok(vec![p0.point]),
        n => (0..n)
            .map(|i| {
                let w = i as f64 / (n - 1) as f64;
                circle_avg_3d(p0, p1, w).map(|q| q.point)
            })
            .collect(),
    }
}
