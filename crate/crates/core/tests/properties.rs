use std::f64::consts::PI;

use pnp_subdiv::avgplan::{affine_op, compile, Stencil};
use pnp_subdiv::circle3d::circle_avg_3d;
use pnp_subdiv::geom::{circle_avg_2d, geodesic_avg, Plane};
use pnp_subdiv::mesh::{naive_normals, primitives::*};
use pnp_subdiv::metrics::{angle_deficits, curvature, psi_zeta_star};
use pnp_subdiv::schemes::{refine, BaseScheme, SchemeKind};
use pnp_subdiv::{Mesh, Pnp, UnitVec3, Vec3};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v3() -> impl Strategy<Value = Vec3> {
    (-1.0..1.0f64, -1.0..1.0f64, -1.0..1.0f64).prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

fn unit() -> impl Strategy<Value = UnitVec3> {
    v3().prop_filter("not too short", |v| v.norm() > 0.2)
        .prop_map(|v| v.normalize().unwrap())
}

/// Rotation about a unit axis (Rodrigues).
#[derive(Debug, Clone, Copy)]
struct Rigid {
    axis: Vec3,
    angle: f64,
    shift: Vec3,
}

impl Rigid {
    fn rotate(&self, v: Vec3) -> Vec3 {
        let (s, c) = self.angle.sin_cos();
        let k = self.axis;
        v * c + k.cross(v) * s + k * (k.dot(v) * (1.0 - c))
    }

    fn point(&self, p: Vec3) -> Vec3 {
        self.rotate(p) + self.shift
    }

    fn unit(&self, n: UnitVec3) -> UnitVec3 {
        self.rotate(n.get()).normalize().unwrap()
    }
}

fn rigid() -> impl Strategy<Value = Rigid> {
    (unit(), 0.0..2.0 * PI, v3()).prop_map(|(a, angle, shift)| Rigid {
        axis: a.get(),
        angle,
        shift,
    })
}

/// Pair whose normals are at most 3 rad apart.
fn pair() -> impl Strategy<Value = (Pnp, Pnp)> {
    (v3(), v3(), unit(), unit())
        .prop_filter("normals not near antipodal", |(_, _, a, b)| a.angle_to(*b) < 3.0)
        .prop_map(|(p0, p1, n0, n1)| (Pnp::new(p0, n0), Pnp::new(p1, n1)))
}

fn with_naive(m: Mesh) -> Mesh {
    let n = naive_normals(&m).unwrap();
    m.with_unit_normals(n).unwrap()
}

proptest! {
    #[test]
    fn geodesic_consistency((a, b) in (unit(), unit()).prop_filter("", |(a, b)| a.angle_to(*b) < 3.0),
                            t in 0.0..1.0f64, s in 0.0..1.0f64, k in 0.0..1.0f64) {
        let lhs = geodesic_avg(geodesic_avg(a, b, t).unwrap(), geodesic_avg(a, b, s).unwrap(), k).unwrap();
        let rhs = geodesic_avg(a, b, k * s + (1.0 - k) * t).unwrap();
        prop_assert!(lhs.angle_to(rhs) < 1e-9);
    }

    #[test]
    fn planar_consistency(a0 in 0.0..2.0 * PI, da in -3.0..3.0f64, x0 in -1.0..1.0f64, y0 in -1.0..1.0f64,
                          x1 in -1.0..1.0f64, y1 in -1.0..1.0f64,
                          t in 0.0..1.0f64, s in 0.0..1.0f64, k in 0.0..1.0f64) {
        let plane = Plane::new(Vec3::ZERO, UnitVec3::Z);
        let dir = |a: f64| Vec3::new(a.cos(), a.sin(), 0.0).normalize().unwrap();
        let p0 = Pnp::new(Vec3::new(x0, y0, 0.0), dir(a0));
        let p1 = Pnp::new(Vec3::new(x1, y1, 0.0), dir(a0 + da));
        let avg = |a: &Pnp, b: &Pnp, w| circle_avg_2d(a, b, w, &plane).unwrap();
        let lhs = avg(&avg(&p0, &p1, t), &avg(&p0, &p1, s), k);
        let rhs = avg(&p0, &p1, k * s + (1.0 - k) * t);
        let diam = p0.point.distance(p1.point).max(1e-3);
        prop_assert!(lhs.point.distance(rhs.point) < 1e-7 * diam);
    }

    #[test]
    fn circles_are_preserved(c in v3(), radius in 0.1..10.0f64, a0 in 0.0..2.0 * PI, da in -3.0..3.0f64, w in -0.5..1.5f64) {
        let plane = Plane::new(Vec3::ZERO, UnitVec3::Z);
        let c = Vec3::new(c.x, c.y, 0.0);
        let sample = |a: f64| {
            let n = Vec3::new(a.cos(), a.sin(), 0.0);
            Pnp::new(c + n * radius, n.normalize().unwrap())
        };
        let q = circle_avg_2d(&sample(a0), &sample(a0 + da), w, &plane).unwrap();
        prop_assert!((q.point.distance(c) - radius).abs() < 1e-9 * radius);
        let outward = (q.point - c).normalize().unwrap();
        prop_assert!(q.normal.angle_to(outward) < 1e-8);
    }

    #[test]
    fn spatial_consistency((p0, p1) in pair(), t in 0.0..1.0f64, s in 0.0..1.0f64, k in 0.0..1.0f64) {
        let a = circle_avg_3d(&p0, &p1, t).unwrap();
        let b = circle_avg_3d(&p0, &p1, s).unwrap();
        let lhs = circle_avg_3d(&a, &b, k).unwrap();
        let rhs = circle_avg_3d(&p0, &p1, k * s + (1.0 - k) * t).unwrap();
        let diam = p0.point.distance(p1.point).max(1e-3);
        prop_assert!(lhs.point.distance(rhs.point) < 1e-7 * diam);
        prop_assert!(lhs.normal.angle_to(rhs.normal) < 1e-7);
    }

    #[test]
    fn average_is_rigidly_equivariant((p0, p1) in pair(), w in -0.5..1.5f64, g in rigid()) {
        let q = circle_avg_3d(&p0, &p1, w).unwrap();
        let moved = |p: &Pnp| Pnp::new(g.point(p.point), g.unit(p.normal));
        let r = circle_avg_3d(&moved(&p0), &moved(&p1), w).unwrap();
        prop_assert!(r.point.distance(g.point(q.point)) < 1e-9);
        prop_assert!(r.normal.angle_to(g.unit(q.normal)) < 1e-9);
    }

    #[test]
    fn average_is_symmetric((p0, p1) in pair(), w in 0.0..1.0f64) {
        let a = circle_avg_3d(&p0, &p1, w).unwrap();
        let b = circle_avg_3d(&p1, &p0, 1.0 - w).unwrap();
        prop_assert!(a.point.distance(b.point) < 1e-9);
    }

    #[test]
    fn affine_plans_match_direct_sum(raw in prop::collection::vec((-0.5..1.0f64, v3()), 1..10)) {
        let mut w: Vec<f64> = raw.iter().map(|r| if r.0.abs() < 1e-3 { 0.3 } else { r.0 }).collect();
        let last = 1.0 - w[..w.len() - 1].iter().sum::<f64>();
        prop_assume!(last.abs() > 1e-3);
        *w.last_mut().unwrap() = last;
        let pts: Vec<Vec3> = raw.iter().map(|r| r.1).collect();
        let s = Stencil::new(w.iter().copied().enumerate().collect()).unwrap();
        let chained = compile(&s).unwrap().evaluate(&pts, affine_op).unwrap();
        let direct = s.apply(&pts).unwrap();
        let scale: f64 = w.iter().map(|a| a.abs()).sum();
        prop_assert!(chained.distance(direct) < 1e-12 * scale);
    }

    #[test]
    fn naive_normals_rotate_with_mesh(g in rigid(), seed in 0u64..1000) {
        let m = icosphere(1);
        let jitter = |i: usize| ((seed as usize * 7919 + i * 104729) % 1000) as f64 / 1e4;
        let m = m.with_vertices(m.vertices().iter().enumerate().map(|(i, &p)| p * (1.0 + jitter(i))).collect());
        let moved = m.with_vertices(m.vertices().iter().map(|&p| g.point(p)).collect());
        let a = naive_normals(&m).unwrap();
        let b = naive_normals(&moved).unwrap();
        for (x, y) in a.iter().zip(&b) {
            prop_assert!(g.unit(*x).angle_to(*y) < 1e-9);
        }
    }

    #[test]
    fn gauss_bonnet_on_jittered_spheres(seed in 0u64..1000) {
        let m = icosphere(2);
        let jitter = |i: usize| ((seed as usize * 31 + i * 2654435761) % 1000) as f64 / 5e3;
        let m = m.with_vertices(m.vertices().iter().enumerate().map(|(i, &p)| p * (1.0 + jitter(i))).collect());
        let total: f64 = angle_deficits(&m).iter().sum();
        prop_assert!((total - 4.0 * PI).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn modified_schemes_are_rigidly_equivariant(g in rigid(), which in 0usize..4) {
        let base = BaseScheme::ALL[which];
        let m = if base.arity() == 3 { with_naive(icosahedron()) } else { with_naive(cube()) };
        let moved = m
            .with_vertices(m.vertices().iter().map(|&p| g.point(p)).collect())
            .with_unit_normals(m.normals().unwrap().iter().map(|&n| g.unit(n)).collect())
            .unwrap();
        let a = refine(&m, SchemeKind::modified(base), 2).unwrap();
        let b = refine(&moved, SchemeKind::modified(base), 2).unwrap();
        for (x, y) in a.vertices().iter().zip(b.vertices()) {
            prop_assert!(g.point(*x).distance(*y) < 1e-9);
        }
    }

    #[test]
    fn metrics_ignore_vertex_order(seed in 0u64..1000) {
        let m = refine(&icosahedron(), SchemeKind::linear(BaseScheme::Loop), 1).unwrap();
        let n = m.num_vertices();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let mut verts = vec![Vec3::ZERO; n];
        for (old, &new) in perm.iter().enumerate() {
            verts[new] = m.vertices()[old];
        }
        let faces: Vec<Vec<usize>> = m.faces().map(|f| f.iter().map(|&v| perm[v]).collect()).collect();
        let shuffled = Mesh::new(verts, &faces).unwrap();
        let (psi_a, z_a) = psi_zeta_star(&m).unwrap();
        let (psi_b, z_b) = psi_zeta_star(&shuffled).unwrap();
        prop_assert!((psi_a - psi_b).abs() < 1e-12);
        prop_assert!((z_a - z_b).abs() < 1e-9 * z_a.max(1.0));
    }

    #[test]
    fn curvature_scales_with_inverse_square(s in 0.1..10.0f64) {
        let m = icosphere(1);
        let k1 = curvature(&m).unwrap();
        let ks = curvature(&m.scaled(s)).unwrap();
        for (a, b) in k1.iter().zip(&ks) {
            prop_assert!((a / (s * s) - b).abs() < 1e-9 * a.abs() / (s * s));
        }
    }
}

#[test]
fn linear_schemes_keep_planar_meshes_planar() {
    let tri = triangulate(&pillow_grid(4, 3));
    let quad = pillow_grid(4, 3);
    for base in BaseScheme::ALL {
        let m = if base.arity() == 3 { &tri } else { &quad };
        let out = refine(m, SchemeKind::linear(base), 2).unwrap();
        assert!(out.vertices().iter().all(|p| p.z == 0.0), "{base}");
    }
}

#[test]
fn modified_schemes_keep_spheres() {
    let radial = |m: Mesh| {
        let n = m.vertices().iter().map(|p| p.normalize().unwrap()).collect();
        m.with_unit_normals(n).unwrap()
    };
    let tri = radial(icosphere(1));
    let quad = radial(quad_sphere(2));
    for base in BaseScheme::ALL {
        let m = if base.arity() == 3 { &tri } else { &quad };
        let out = refine(m, SchemeKind::modified(base), 3).unwrap();
        assert!(out.vertices().iter().all(|p| (p.norm() - 1.0).abs() < 1e-8), "{base}");
    }
}
