//! Covers of the round sphere `S^n ⊂ R^{n+1}` by unions of simple regions,
//! checked on the vertices of refined cross-polytopes.
//!
//! The level-`N` refinement has as vertices the integer vectors of 1-norm
//! `N`, pushed radially onto the sphere. It is closed under negation, and
//! every point of the sphere is within [`mesh_angle`] of one of its vertices
//! (round each coordinate towards the nearest lattice point on the same
//! face).

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::EquivariantError;

const EPS: f64 = 1e-9;

/// A subset of the sphere.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Region {
    /// Points at angle less than (open) or at most (closed) `radius` from
    /// `center`.
    Cap { center: Vec<f64>, radius: f64 },
    /// The star of the cross-polytope vertex `±e_axis`, the hemisphere
    /// `±x_axis > 0`.
    Star { axis: usize, positive: bool },
    /// The radial projection of the simplex spanned by `generators`,
    /// thickened by the angle `thickening`.
    Facet { generators: Vec<Vec<f64>>, thickening: f64 },
}

impl Region {
    pub fn contains(&self, x: &[f64], open: bool) -> bool {
        let within = |d: f64, r: f64| if open { d < r } else { d <= r + EPS };
        match self {
            Region::Cap { center, radius } => within(angle(x, center), *radius),
            Region::Star { axis, positive } => {
                let c = if *positive { x[*axis] } else { -x[*axis] };
                if open {
                    c > 0.0
                } else {
                    c >= 0.0
                }
            }
            Region::Facet { generators, thickening } => within(cone_angle(x, generators), *thickening),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverSet {
    pub regions: Vec<Region>,
}

impl CoverSet {
    pub fn contains(&self, x: &[f64], open: bool) -> bool {
        self.regions.iter().any(|r| r.contains(x, open))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeometricCover {
    pub n: usize,
    pub open: bool,
    pub sets: Vec<CoverSet>,
}

impl GeometricCover {
    pub fn contains(&self, set: usize, x: &[f64]) -> bool {
        self.sets[set].contains(x, self.open)
    }

    pub fn sets_containing(&self, x: &[f64]) -> Vec<usize> {
        (0..self.sets.len()).filter(|&i| self.contains(i, x)).collect()
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn negate(a: &[f64]) -> Vec<f64> {
    a.iter().map(|x| -x).collect()
}

/// Angle between two nonzero vectors.
fn angle(a: &[f64], b: &[f64]) -> f64 {
    (dot(a, b) / (norm(a) * norm(b))).clamp(-1.0, 1.0).acos()
}

/// Angle from the unit vector `x` to the cone spanned by linearly independent
/// `generators`, found by solving the projection on every face of the cone.
/// Angles of `π/2` and more are all reported as `π/2`.
fn cone_angle(x: &[f64], generators: &[Vec<f64>]) -> f64 {
    let k = generators.len();
    let mut best = 0.0f64;
    for mask in 1u32..(1 << k) {
        let face: Vec<&Vec<f64>> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| &generators[i]).collect();
        let m = face.len();
        let gram = DMatrix::from_fn(m, m, |i, j| dot(face[i], face[j]));
        let rhs = DVector::from_fn(m, |i, _| dot(face[i], x));
        let Some(mu) = gram.lu().solve(&rhs) else { continue };
        if mu.iter().any(|&c| c < -EPS) {
            continue;
        }
        let p: Vec<f64> = (0..x.len()).map(|d| (0..m).map(|i| mu[i] * face[i][d]).sum()).collect();
        let r: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a - b).collect();
        let outside = (0..k).filter(|i| mask >> i & 1 == 0).any(|i| dot(&generators[i], &r) > EPS);
        if !outside {
            best = best.max(norm(&p));
        }
    }
    if best <= EPS {
        std::f64::consts::FRAC_PI_2
    } else {
        best.min(1.0).acos()
    }
}

/// Vertices of level `level`: integer vectors in `Z^{n+1}` of 1-norm `level`,
/// in decreasing lexicographic order, so `level·e_1` comes first.
pub fn lattice_sphere(n: usize, level: usize) -> Vec<Vec<i64>> {
    fn fill(d: usize, rest: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if prefix.len() + 1 == d {
            for c in [rest, -rest] {
                prefix.push(c);
                out.push(prefix.clone());
                prefix.pop();
                if rest == 0 {
                    break;
                }
            }
            return;
        }
        for c in (-rest..=rest).rev() {
            prefix.push(c);
            fill(d, rest - c.abs(), prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    fill(n + 1, level as i64, &mut Vec::new(), &mut out);
    out
}

fn to_unit(v: &[i64]) -> Vec<f64> {
    let f: Vec<f64> = v.iter().map(|&c| c as f64).collect();
    let r = norm(&f);
    f.into_iter().map(|c| c / r).collect()
}

/// Every point of `S^n` lies within this angle of a level-`level` vertex.
pub fn mesh_angle(n: usize, level: usize) -> f64 {
    ((n + 1) as f64 / level as f64).min(1.0).asin()
}

/// Unit vertices of a regular `(n+1)`-simplex centred at the origin of
/// `R^{n+1}`, from the Helmert basis of the sum-zero hyperplane of `R^{n+2}`.
pub fn regular_simplex(n: usize) -> Vec<Vec<f64>> {
    let m = n + 2;
    (0..m)
        .map(|j| {
            let v: Vec<f64> = (1..m)
                .map(|k| {
                    let c = if j < k {
                        1.0
                    } else if j == k {
                        -(k as f64)
                    } else {
                        0.0
                    };
                    c / ((k * (k + 1)) as f64).sqrt()
                })
                .collect();
            let r = norm(&v);
            v.into_iter().map(|c| c / r).collect()
        })
        .collect()
}

/// `(π - θ) / 2`, where `θ = arccos(-1/(n+1))` is the angle between two
/// simplex vertices. Thickening a projected facet by this much puts two of
/// its vertex directions at antipodal distance.
pub fn facet_vertex_bound(n: usize) -> f64 {
    (std::f64::consts::PI - (-1.0 / (n + 1) as f64).acos()) / 2.0
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetCoverReport {
    pub cover: GeometricCover,
    pub level: usize,
    pub samples: usize,
    pub bound: f64,
}

/// Projects the `n + 2` facets of [`regular_simplex`] onto `S^n` and thickens
/// each by `thickening` radians into an open set. The sets are checked for
/// antipodal pairs and coverage on the vertices of a refinement fine enough
/// that its mesh is below the gap between `thickening` and
/// [`facet_vertex_bound`], up to a size cap.
pub fn facet_projection_cover(n: usize, thickening: f64) -> Result<FacetCoverReport, EquivariantError> {
    if !(1..=3).contains(&n) {
        return Err(EquivariantError::DimensionOutOfRange(n));
    }
    if thickening.is_nan() || thickening <= 0.0 {
        return Err(EquivariantError::InvalidCover("thickening must be positive".into()));
    }
    let p = regular_simplex(n);
    let sets: Vec<CoverSet> = (0..p.len())
        .map(|i| CoverSet {
            regions: vec![Region::Facet {
                generators: p.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, v)| v.clone()).collect(),
                thickening,
            }],
        })
        .collect();
    let cover = GeometricCover { n, open: true, sets };
    let bound = facet_vertex_bound(n);
    let cap = [0, 256, 64, 32][n];
    let mut level = 8;
    while level < cap && mesh_angle(n, level) > (bound - thickening).abs() {
        level *= 2;
    }
    let samples: Vec<Vec<f64>> = lattice_sphere(n, level).iter().map(|v| to_unit(v)).collect();
    let closed = GeometricCover { open: false, ..cover.clone() };
    for x in &samples {
        if closed.sets_containing(x).is_empty() {
            return Err(EquivariantError::InvalidCover(format!("projected facets miss {x:?}")));
        }
    }
    for i in 0..cover.sets.len() {
        for x in &samples {
            let y = negate(x);
            if cover.contains(i, x) && cover.contains(i, &y) {
                return Err(EquivariantError::ThickeningTooLarge {
                    set: i,
                    point: x.clone(),
                    antipode: y,
                    bound,
                });
            }
        }
    }
    Ok(FacetCoverReport {
        samples: samples.len(),
        cover,
        level,
        bound,
    })
}

/// Refinement schedule for [`antipodal_pair_search`]: levels
/// `base_level · 2^r` for `r = 0..=max_refinements`.
#[derive(Clone, Copy, Debug)]
pub struct SearchConfig {
    pub base_level: usize,
    pub max_refinements: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            base_level: 4,
            max_refinements: 6,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AntipodalPair {
    pub set: usize,
    pub level: usize,
    pub refinements: usize,
    pub lattice: Vec<i64>,
    pub point: Vec<f64>,
    pub antipode: Vec<f64>,
}

/// Finds a vertex `v` of some refinement with `v` and `-v` in one set of a
/// cover of `S^n` by at most `n + 1` sets. At each level the least set index
/// wins, then the first vertex in [`lattice_sphere`] order.
pub fn antipodal_pair_search(cover: &GeometricCover, config: &SearchConfig) -> Result<AntipodalPair, EquivariantError> {
    if cover.sets.len() > cover.n + 1 {
        return Err(EquivariantError::InvalidCover(format!("{} sets on S^{}", cover.sets.len(), cover.n)));
    }
    if let Some(i) = cover.sets.iter().position(|s| s.regions.is_empty()) {
        return Err(EquivariantError::EmptyCoverSet(i));
    }
    for r in 0..=config.max_refinements {
        let level = config.base_level << r;
        let lattice = lattice_sphere(cover.n, level);
        let points: Vec<Vec<f64>> = lattice.iter().map(|v| to_unit(v)).collect();
        let member: Vec<Vec<usize>> = points.iter().map(|x| cover.sets_containing(x)).collect();
        if let Some(k) = member.iter().position(Vec::is_empty) {
            return Err(EquivariantError::InvalidCover(format!("{:?} at level {level} is not covered", lattice[k])));
        }
        for set in 0..cover.sets.len() {
            for (k, x) in points.iter().enumerate() {
                let y = negate(x);
                if member[k].contains(&set) && cover.contains(set, &y) {
                    return Ok(AntipodalPair {
                        set,
                        level,
                        refinements: r,
                        lattice: lattice[k].clone(),
                        point: x.clone(),
                        antipode: y,
                    });
                }
            }
        }
    }
    Err(EquivariantError::RefinementBudgetExceeded {
        levels: config.max_refinements + 1,
    })
}

/// A random open cover of `S^n` by `sets` unions of caps. Caps are then
/// added around every level-`level` vertex not already inside some cap by
/// more than [`mesh_angle`], which makes the cover provably cover the whole
/// sphere.
pub fn random_cap_cover(rng: &mut impl Rng, n: usize, sets: usize, level: usize) -> GeometricCover {
    let d = n + 1;
    let h = mesh_angle(n, level);
    let mut out: Vec<CoverSet> = (0..sets).map(|_| CoverSet { regions: Vec::new() }).collect();
    let random_direction = |rng: &mut dyn rand::RngCore| loop {
        let v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let r = norm(&v);
        if r > 0.1 && r <= 1.0 {
            return v.into_iter().map(|c| c / r).collect::<Vec<f64>>();
        }
    };
    for k in 0..3 * sets {
        let center = random_direction(rng);
        let radius = rng.gen_range(0.35..1.3);
        let set = if k < sets { k } else { rng.gen_range(0..sets) };
        out[set].regions.push(Region::Cap { center, radius });
    }
    for v in lattice_sphere(n, level) {
        let x = to_unit(&v);
        let safe = out.iter().flat_map(|s| &s.regions).any(|r| match r {
            Region::Cap { center, radius } => angle(&x, center) + h < *radius,
            _ => false,
        });
        if !safe {
            let set = rng.gen_range(0..sets);
            out[set].regions.push(Region::Cap {
                center: x,
                radius: 1.5 * h,
            });
        }
    }
    GeometricCover { n, open: true, sets: out }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Chordal,
    Geodesic,
}

/// For closed sets `F_1..F_{n+1}` given by point samples, maps each sample
/// `x` to `(dist(x, F_1), .., dist(x, F_n))`.
pub fn distance_function_map(sets: &[Vec<Vec<f64>>], samples: &[Vec<f64>], metric: Metric) -> Result<Vec<Vec<f64>>, EquivariantError> {
    if let Some(i) = sets.iter().position(Vec::is_empty) {
        return Err(EquivariantError::EmptyCoverSet(i));
    }
    let dist = |a: &[f64], b: &[f64]| match metric {
        Metric::Chordal => a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt(),
        Metric::Geodesic => angle(a, b),
    };
    let n = sets.len().saturating_sub(1);
    Ok(samples
        .iter()
        .map(|x| {
            sets[..n]
                .iter()
                .map(|f| f.iter().map(|p| dist(x, p)).fold(f64::INFINITY, f64::min))
                .collect()
        })
        .collect())
}

/// Given equal distance vectors `f(x) = f(y)`, the set that contains both
/// points: the first zero coordinate `i`, or index `n` (the last set) when
/// every coordinate is positive. `None` if the vectors differ.
pub fn coincidence_set(fx: &[f64], fy: &[f64], tol: f64) -> Option<usize> {
    if fx.len() != fy.len() || fx.iter().zip(fy).any(|(a, b)| (a - b).abs() > tol) {
        return None;
    }
    Some(fx.iter().position(|&c| c <= tol).unwrap_or(fx.len()))
}
