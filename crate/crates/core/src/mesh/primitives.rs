//! Small closed meshes used by tests, benches and examples.

use std::collections::HashMap;
use std::f64::consts::PI;

use super::Mesh;
use crate::geom::Vec3;

/// Reverses faces whose normal points towards the origin. Only meaningful
/// for shapes that are star-shaped about the origin.
fn orient_outward(vertices: &[Vec3], faces: &mut [Vec<usize>]) {
    for f in faces.iter_mut() {
        let c = f.iter().fold(Vec3::ZERO, |s, &i| s + vertices[i]) / f.len() as f64;
        let n = newell_normal(vertices, f);
        if n.dot(c) < 0.0 {
            f.reverse();
        }
    }
}

fn newell_normal(vertices: &[Vec3], f: &[usize]) -> Vec3 {
    (0..f.len()).fold(Vec3::ZERO, |s, i| {
        s + vertices[f[i]].cross(vertices[f[(i + 1) % f.len()]])
    })
}

fn build(vertices: Vec<Vec3>, faces: Vec<Vec<usize>>) -> Mesh {
    Mesh::new(vertices, &faces).expect("primitive mesh is a closed manifold")
}

pub fn tetrahedron() -> Mesh {
    let vertices = vec![
        Vec3::new(1., 1., 1.),
        Vec3::new(1., -1., -1.),
        Vec3::new(-1., 1., -1.),
        Vec3::new(-1., -1., 1.),
    ];
    let mut faces = vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]];
    orient_outward(&vertices, &mut faces);
    build(vertices, faces)
}

/// Unit cube `[0, 1]^3`, vertex `i` at `(i & 1, (i >> 1) & 1, (i >> 2) & 1)`.
pub fn cube() -> Mesh {
    let vertices = (0..8)
        .map(|i| Vec3::new((i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64))
        .collect();
    let faces = vec![
        vec![0, 2, 3, 1],
        vec![4, 5, 7, 6],
        vec![0, 1, 5, 4],
        vec![2, 6, 7, 3],
        vec![0, 4, 6, 2],
        vec![1, 3, 7, 5],
    ];
    build(vertices, faces)
}

/// Regular octahedron with vertices at the unit axis points (edge `sqrt 2`).
pub fn octahedron() -> Mesh {
    let vertices = vec![
        Vec3::new(1., 0., 0.),
        Vec3::new(-1., 0., 0.),
        Vec3::new(0., 1., 0.),
        Vec3::new(0., -1., 0.),
        Vec3::new(0., 0., 1.),
        Vec3::new(0., 0., -1.),
    ];
    let mut faces = Vec::new();
    for x in [0, 1] {
        for y in [2, 3] {
            for z in [4, 5] {
                faces.push(vec![x, y, z]);
            }
        }
    }
    orient_outward(&vertices, &mut faces);
    build(vertices, faces)
}

/// Icosahedron inscribed in the unit sphere.
pub fn icosahedron() -> Mesh {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut raw = Vec::new();
    for a in [-1.0, 1.0] {
        for b in [-phi, phi] {
            raw.push(Vec3::new(0.0, a, b));
            raw.push(Vec3::new(a, b, 0.0));
            raw.push(Vec3::new(b, 0.0, a));
        }
    }
    // edge length is 2 before projection
    let mut faces = Vec::new();
    let adjacent = |i: usize, j: usize| (raw[i].distance(raw[j]) - 2.0).abs() < 1e-9;
    for i in 0..12 {
        for j in i + 1..12 {
            for k in j + 1..12 {
                if adjacent(i, j) && adjacent(j, k) && adjacent(i, k) {
                    faces.push(vec![i, j, k]);
                }
            }
        }
    }
    let vertices: Vec<Vec3> = raw.iter().map(|p| *p / p.norm()).collect();
    orient_outward(&vertices, &mut faces);
    build(vertices, faces)
}

/// Splits every edge at its midpoint `level` times and projects onto the unit
/// sphere.
pub fn icosphere(level: usize) -> Mesh {
    let mut m = icosahedron();
    for _ in 0..level {
        m = midpoint_split(&m);
        let v = m.vertices().iter().map(|p| *p / p.norm()).collect();
        m = m.with_vertices(v);
    }
    m
}

/// One 1-to-4 split of a triangle mesh with new vertices at edge midpoints.
pub fn midpoint_split(m: &Mesh) -> Mesh {
    assert_eq!(m.arity(), 3);
    let nv = m.num_vertices();
    let mut vertices = m.vertices().to_vec();
    vertices.extend(
        m.edges()
            .iter()
            .map(|&[a, b]| m.vertices()[a].lerp(m.vertices()[b], 0.5)),
    );
    let edge_index: HashMap<[usize; 2], usize> = m.edges().iter().enumerate().map(|(i, &e)| (e, nv + i)).collect();
    let mid = |a: usize, b: usize| edge_index[&[a.min(b), a.max(b)]];
    let mut faces = Vec::with_capacity(4 * m.num_faces());
    for f in m.faces() {
        let (a, b, c) = (f[0], f[1], f[2]);
        let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
        faces.extend([vec![a, ab, ca], vec![ab, b, bc], vec![ca, bc, c], vec![ab, bc, ca]]);
    }
    build(vertices, faces)
}

/// Cube with an `n x n` grid on each side, projected onto the unit sphere.
pub fn quad_sphere(n: usize) -> Mesh {
    assert!(n >= 1);
    let mut index = HashMap::new();
    let mut vertices = Vec::new();
    let mut id = |p: [i64; 3], vertices: &mut Vec<Vec3>| {
        *index.entry(p).or_insert_with(|| {
            let h = n as f64 / 2.0;
            let q = Vec3::new(p[0] as f64 - h, p[1] as f64 - h, p[2] as f64 - h);
            vertices.push(q / q.norm());
            vertices.len() - 1
        })
    };
    let n_i = n as i64;
    let mut faces = Vec::new();
    for axis in 0..3 {
        for side in [0, n_i] {
            for i in 0..n_i {
                for j in 0..n_i {
                    let mut f = Vec::with_capacity(4);
                    for (di, dj) in [(0, 0), (1, 0), (1, 1), (0, 1)] {
                        let mut p = [0i64; 3];
                        p[axis] = side;
                        p[(axis + 1) % 3] = i + di;
                        p[(axis + 2) % 3] = j + dj;
                        f.push(id(p, &mut vertices));
                    }
                    faces.push(f);
                }
            }
        }
    }
    orient_outward(&vertices, &mut faces);
    build(vertices, faces)
}

/// Torus with `n` segments around the axis and `m` around the tube. Every
/// vertex has valence 4.
pub fn torus_quad(n: usize, m: usize, major: f64, minor: f64) -> Mesh {
    let vertices = (0..m)
        .flat_map(|j| {
            (0..n).map(move |i| {
                let u = 2.0 * PI * i as f64 / n as f64;
                let v = 2.0 * PI * j as f64 / m as f64;
                let r = major + minor * v.cos();
                Vec3::new(r * u.cos(), r * u.sin(), minor * v.sin())
            })
        })
        .collect();
    let id = |i: usize, j: usize| (j % m) * n + (i % n);
    let faces: Vec<Vec<usize>> = (0..m)
        .flat_map(|j| (0..n).map(move |i| vec![id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)]))
        .collect();
    build(vertices, faces)
}

/// Splits every quad along its `0-2` diagonal.
pub fn triangulate(m: &Mesh) -> Mesh {
    if m.arity() == 3 {
        return m.clone();
    }
    let faces: Vec<Vec<usize>> = m
        .faces()
        .flat_map(|f| [vec![f[0], f[1], f[2]], vec![f[0], f[2], f[3]]])
        .collect();
    build(m.vertices().to_vec(), faces)
}

/// Two copies of a planar `nx x ny` grid in the `z = 0` plane glued along
/// their boundary: a flat closed surface. The top sheet faces `+z`.
pub fn pillow_grid(nx: usize, ny: usize) -> Mesh {
    assert!(nx >= 2 && ny >= 2);
    let top = |i: usize, j: usize| j * (nx + 1) + i;
    let mut vertices: Vec<Vec3> = (0..=ny)
        .flat_map(|j| (0..=nx).map(move |i| Vec3::new(i as f64, j as f64, 0.0)))
        .collect();
    let mut bottom_index = HashMap::new();
    for j in 1..ny {
        for i in 1..nx {
            bottom_index.insert((i, j), vertices.len());
            vertices.push(Vec3::new(i as f64, j as f64, 0.0));
        }
    }
    let bottom = |i: usize, j: usize| *bottom_index.get(&(i, j)).unwrap_or(&top(i, j));
    let mut faces = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            faces.push(vec![top(i, j), top(i + 1, j), top(i + 1, j + 1), top(i, j + 1)]);
            let mut b = vec![bottom(i, j), bottom(i, j + 1), bottom(i + 1, j + 1), bottom(i + 1, j)];
            // start at a sheet-only vertex so that a 0-2 split never
            // reproduces a top triangle
            if let Some(k) = b.iter().position(|&v| v > top(nx, ny)) {
                b.rotate_left(k);
            }
            faces.push(b);
        }
    }
    build(vertices, faces)
}

/// Interior vertices of the top sheet of [`pillow_grid`].
pub fn pillow_top_interior(nx: usize, ny: usize) -> Vec<usize> {
    (1..ny).flat_map(|j| (1..nx).map(move |i| j * (nx + 1) + i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn euler_characteristics() {
        for m in [
            tetrahedron(),
            cube(),
            octahedron(),
            icosahedron(),
            icosphere(2),
            quad_sphere(3),
        ] {
            assert_eq!(m.euler_characteristic(), 2);
        }
        assert_eq!(torus_quad(6, 4, 2.0, 0.5).euler_characteristic(), 0);
        assert_eq!(triangulate(&torus_quad(6, 4, 2.0, 0.5)).euler_characteristic(), 0);
        assert_eq!(pillow_grid(3, 2).euler_characteristic(), 2);
        assert_eq!(triangulate(&pillow_grid(3, 2)).euler_characteristic(), 2);
    }

    #[test]
    fn icosahedron_shape() {
        let m = icosahedron();
        assert_eq!((m.num_vertices(), m.num_faces(), m.num_edges()), (12, 20, 30));
        assert!((0..12).all(|v| m.valence(v) == 5));
        assert!(m.vertices().iter().all(|p| (p.norm() - 1.0).abs() < 1e-15));
    }

    #[test]
    fn torus_valences() {
        let q = torus_quad(6, 5, 2.0, 0.5);
        assert!((0..q.num_vertices()).all(|v| q.valence(v) == 4));
        let t = triangulate(&q);
        assert!((0..t.num_vertices()).all(|v| t.valence(v) == 6));
    }
}
