//! Named curves and surface maps.

use std::f64::consts::{PI, TAU};
use std::sync::Arc;

use num_traits::Signed;

use super::{circle_proxy, unit_point, PLCurve, PLSurfaceMap, Point, Q};
use crate::complex::SimplicialComplex;

const DEN: i64 = 10_000;

/// The figure-eight `(-1,-1), (1,1), (1,-1), (-1,1)`, crossing once at the
/// origin.
pub fn bowtie() -> PLCurve {
    PLCurve::new(vec![
        Point::from_ints(-1, -1),
        Point::from_ints(1, 1),
        Point::from_ints(1, -1),
        Point::from_ints(-1, 1),
    ])
    .expect("fixture")
}

/// `k` triangular petals based at the origin, petal `i` pointing at angle
/// `2πi/k` with half-width `π/(2k)`, traversed one after another.
pub fn rose(k: usize) -> PLCurve {
    assert!(k >= 1);
    let half = PI / (2.0 * k as f64);
    let mut v = Vec::with_capacity(3 * k);
    for i in 0..k {
        let a = TAU * i as f64 / k as f64;
        v.push(Point::origin());
        v.push(unit_point(a - half, DEN));
        v.push(unit_point(a + half, DEN));
    }
    PLCurve::new(v).expect("fixture")
}

/// The `m`-gon proxy of the unit circle, an embedding.
pub fn convex(m: usize) -> PLCurve {
    PLCurve::new(circle_proxy(m)).expect("fixture")
}

/// A regular `m`-gon (even `m`, with vertices at angles `0` and `π`) followed
/// by `(x, y) ↦ (x, |y|)`; it folds back on itself at `(1, 0)` and `(-1, 0)`.
pub fn folded(m: usize) -> PLCurve {
    assert!(m >= 4 && m.is_multiple_of(2), "folded circle needs an even number of sides");
    let v = (0..m)
        .map(|j| {
            let p = unit_point(TAU * j as f64 / m as f64, DEN);
            Point::new(p.x, p.y.abs())
        })
        .collect();
    PLCurve::new(v).expect("fixture")
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Annulus between radii `1/2` and `2` with `n` angular steps. Vertex `a{s}`
/// is on the inner ring, `b{s}` on the outer, and `image(ring, s)` gives the
/// image of each.
fn annulus(n: usize, image: impl Fn(usize, usize) -> Point) -> PLSurfaceMap {
    let mut names = Vec::with_capacity(2 * n);
    for ring in ["a", "b"] {
        for s in 0..n {
            names.push(format!("{ring}{s}"));
        }
    }
    let mut tris = Vec::with_capacity(2 * n);
    for s in 0..n {
        let t = (s + 1) % n;
        tris.push(vec![s, n + s, n + t]);
        tris.push(vec![s, t, n + t]);
    }
    let complex = SimplicialComplex::from_indices(names, tris).expect("fixture");
    let radii = [q(1, 2), q(2, 1)];
    let mut domain = Vec::with_capacity(2 * n);
    let mut img = Vec::with_capacity(2 * n);
    for (ring, r) in radii.iter().enumerate() {
        for s in 0..n {
            domain.push(unit_point(TAU * s as f64 / n as f64, DEN).scale(r));
            img.push(image(ring, s));
        }
    }
    PLSurfaceMap::new(Arc::new(complex), domain, img).expect("fixture")
}

/// Annulus map keeping the radius and sending angle `θ` to `2θ` on the first
/// half turn and back to `0` on the second, so the circle is wrapped around
/// once and unwrapped: winding number 0.
pub fn annulus_wrap(n: usize) -> PLSurfaceMap {
    assert!(n >= 8 && n.is_multiple_of(2));
    let radii = [q(1, 2), q(2, 1)];
    annulus(n, |ring, s| {
        let steps = if s <= n / 2 { s } else { n - s };
        unit_point(2.0 * TAU * steps as f64 / n as f64, DEN).scale(&radii[ring])
    })
}

/// PL approximation of `z ↦ z²` on the annulus.
pub fn annulus_square(n: usize) -> PLSurfaceMap {
    assert!(n >= 8);
    let radii = [q(1, 4), q(4, 1)];
    annulus(n, |ring, s| unit_point(2.0 * TAU * s as f64 / n as f64, DEN).scale(&radii[ring]))
}

/// Identity on a fan-triangulated disk of radius 2 with `n` rim vertices.
pub fn disk_identity(n: usize) -> PLSurfaceMap {
    let mut names = vec!["c".to_string()];
    names.extend((0..n).map(|s| format!("r{s}")));
    let tris = (0..n).map(|s| vec![0, 1 + s, 1 + (s + 1) % n]).collect();
    let complex = SimplicialComplex::from_indices(names, tris).expect("fixture");
    let mut pts = vec![Point::origin()];
    pts.extend((0..n).map(|s| unit_point(TAU * s as f64 / n as f64, DEN).scale(&q(2, 1))));
    PLSurfaceMap::new(Arc::new(complex), pts.clone(), pts).expect("fixture")
}

/// The square `[-2, 2]²` on the grid `{-2, 0, 2}²`, eight triangles, mapped
/// by `image`.
fn square(image: impl Fn(&Point) -> Point) -> PLSurfaceMap {
    let mut names = Vec::new();
    let mut pts = Vec::new();
    for y in [-2, 0, 2] {
        for x in [-2, 0, 2] {
            names.push(format!("p{}{}", x.signum() + 1, y.signum() + 1));
            pts.push(Point::from_ints(x, y));
        }
    }
    let mut tris = Vec::new();
    for cy in 0..2 {
        for cx in 0..2 {
            let a = cy * 3 + cx;
            tris.push(vec![a, a + 1, a + 4]);
            tris.push(vec![a, a + 3, a + 4]);
        }
    }
    let complex = SimplicialComplex::from_indices(names, tris).expect("fixture");
    let img = pts.iter().map(image).collect();
    PLSurfaceMap::new(Arc::new(complex), pts, img).expect("fixture")
}

pub fn square_identity() -> PLSurfaceMap {
    square(Point::clone)
}

/// `(x, y) ↦ (x, |y|)` on the square.
pub fn square_fold() -> PLSurfaceMap {
    square(|p| Point::new(p.x.clone(), p.y.abs()))
}

/// The square translated by `(10, 10)`, far from the unit circle.
pub fn square_far() -> PLSurfaceMap {
    square(|p| p.add(&Point::from_ints(10, 10)))
}
