//! PL maps from triangulated surfaces to the plane, preimages of a convex
//! polygon, and the winding-number obstruction to injectivity.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{circle_proxy, orient, parse_rational, sign, PlError, Point, Q};
use crate::complex::SimplicialComplex;

/// A simplicial 2-complex with planar domain coordinates and an image
/// point per vertex, extended affinely over each triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLSurfaceMap {
    complex: Arc<SimplicialComplex>,
    domain: Vec<Point>,
    image: Vec<Point>,
}

/// `{ "vertices": [..], "simplices": [[..]], "domain": [[x, y]], "image": [[x, y]] }`,
/// coordinates listed in vertex order as `"p/q"` strings.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceJson {
    pub vertices: Vec<String>,
    pub simplices: Vec<Vec<String>>,
    pub domain: Vec<[String; 2]>,
    pub image: Vec<[String; 2]>,
}

impl PLSurfaceMap {
    pub fn new(complex: Arc<SimplicialComplex>, domain: Vec<Point>, image: Vec<Point>) -> Result<Self, PlError> {
        let n = complex.vertex_count();
        if domain.len() != n || image.len() != n {
            return Err(PlError::Invalid(format!(
                "expected {n} domain and image points, got {} and {}",
                domain.len(),
                image.len()
            )));
        }
        if complex.dim() != Some(2) {
            return Err(PlError::Invalid("domain must be a 2-dimensional complex".into()));
        }
        Ok(Self { complex, domain, image })
    }

    pub fn from_json(json: &SurfaceJson) -> Result<Self, PlError> {
        let complex = SimplicialComplex::new(json.vertices.iter().cloned(), json.simplices.iter().cloned())
            .map_err(|e| PlError::Invalid(e.to_string()))?;
        let pts = |v: &[[String; 2]]| -> Result<Vec<Point>, PlError> {
            v.iter().map(|[x, y]| Ok(Point::new(parse_rational(x)?, parse_rational(y)?))).collect()
        };
        Self::new(Arc::new(complex), pts(&json.domain)?, pts(&json.image)?)
    }

    pub fn to_json(&self) -> SurfaceJson {
        let c = &self.complex;
        SurfaceJson {
            vertices: c.vertices().to_vec(),
            simplices: c.facets().iter().map(|s| s.iter().map(|&v| c.vertices()[v].clone()).collect()).collect(),
            domain: self.domain.iter().map(Point::to_strings).collect(),
            image: self.image.iter().map(Point::to_strings).collect(),
        }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn domain_point(&self, v: usize) -> &Point {
        &self.domain[v]
    }

    pub fn image_point(&self, v: usize) -> &Point {
        &self.image[v]
    }

    /// Barycentric subdivision; new vertices sit at barycenters in both the
    /// domain and the image, so the map itself is unchanged.
    pub fn refine(&self) -> Self {
        let sd = self.complex.barycentric_subdivision();
        let bary = |coords: &[Point]| -> Vec<Point> {
            self.complex
                .iter()
                .map(|s| {
                    let mut acc = Point::origin();
                    for &v in s {
                        acc = acc.add(&coords[v]);
                    }
                    acc.scale(&Q::new(1.into(), (s.len() as i64).into()))
                })
                .collect()
        };
        Self {
            domain: bary(&self.domain),
            image: bary(&self.image),
            complex: Arc::new(sd),
        }
    }
}

/// A vertex of the preimage graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodeKey {
    /// On the domain edge `u < v` at `(1 - lambda) u + lambda v`.
    Edge { u: usize, v: usize, lambda: Q },
    /// Preimage of polygon corner `corner` inside triangle `tri`.
    Interior { tri: usize, corner: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub nodes: Vec<NodeKey>,
    /// Loop when true, arc with two boundary ends otherwise.
    pub closed: bool,
    pub domain: Vec<Point>,
    pub image: Vec<Point>,
}

impl Component {
    /// Winding number of the image around the origin, for loops.
    pub fn winding(&self) -> Option<i64> {
        self.closed.then(|| winding_number(&self.image))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Preimage {
    pub components: Vec<Component>,
    /// Every point of the polygon boundary is the image of some preimage point.
    pub covers_polygon: bool,
}

/// Winding number of a closed polygonal path around the origin by signed
/// crossings of the positive x-axis. The path must avoid the origin.
pub fn winding_number(path: &[Point]) -> i64 {
    let o = Point::origin();
    let n = path.len();
    let mut w = 0;
    for k in 0..n {
        let (a, b) = (&path[k], &path[(k + 1) % n]);
        if !a.y.is_positive() && b.y.is_positive() && orient(a, b, &o).is_positive() {
            w += 1;
        } else if a.y.is_positive() && !b.y.is_positive() && orient(a, b, &o).is_negative() {
            w -= 1;
        }
    }
    w
}

fn on_segment(p: &Point, a: &Point, b: &Point) -> bool {
    orient(a, b, p).is_zero() && p.sub(a).dot(&p.sub(b)) <= Q::zero()
}

struct Piece {
    ends: [NodeKey; 2],
    edge: usize,
    lo: Q,
    hi: Q,
}

/// The preimage of the boundary of the convex polygon `poly` (vertices in
/// counter-clockwise order), assembled into loops and arcs.
///
/// Requires generic position: no image vertex on the polygon boundary and no
/// polygon corner on an image edge. Each triangle is sliced exactly by each
/// polygon edge.
pub fn preimage_of_polygon(f: &PLSurfaceMap, poly: &[Point]) -> Result<Preimage, PlError> {
    let m = poly.len();
    if m < 3 || (0..m).any(|j| !orient(&poly[j], &poly[(j + 1) % m], &poly[(j + 2) % m]).is_positive()) {
        return Err(PlError::Invalid("polygon must be convex and counter-clockwise".into()));
    }
    let k = &f.complex;
    let hint = Some("perturb the circle proxy radius or the number of sides".to_string());
    for v in 0..k.vertex_count() {
        for j in 0..m {
            if on_segment(&f.image[v], &poly[j], &poly[(j + 1) % m]) {
                return Err(PlError::DegeneratePosition {
                    what: "meet: image vertex on the polygon".into(),
                    first: format!("vertex {}", k.vertices()[v]),
                    second: format!("polygon edge {j}"),
                    hint,
                });
            }
        }
    }
    for e in k.simplices(1) {
        for (j, q) in poly.iter().enumerate() {
            if on_segment(q, &f.image[e[0]], &f.image[e[1]]) {
                return Err(PlError::DegeneratePosition {
                    what: "meet: polygon corner on an image edge".into(),
                    first: format!("edge {}", k.label(e)),
                    second: format!("polygon corner {j}"),
                    hint,
                });
            }
        }
    }

    let mut pieces = Vec::new();
    for (ti, t) in k.simplices(2).iter().enumerate() {
        let img = [&f.image[t[0]], &f.image[t[1]], &f.image[t[2]]];
        let s = sign(&orient(img[0], img[1], img[2]));
        if s == 0 {
            return Err(PlError::DegenerateTriangle(k.label(t)));
        }
        let sq = Q::from_integer(s.into());
        for j in 0..m {
            let (q0, q1) = (&poly[j], &poly[(j + 1) % m]);
            let mut lo = (Q::zero(), None);
            let mut hi = (Q::one(), None);
            let mut empty = false;
            // Side (a, b) of the triangle; the opposite corner is inside.
            for (a, b) in [(0, 1), (1, 2), (2, 0)] {
                let g0 = orient(img[a], img[b], q0) * &sq;
                let g1 = orient(img[a], img[b], q1) * &sq;
                if g0.is_negative() && g1.is_negative() {
                    empty = true;
                    break;
                }
                if !g0.is_negative() && !g1.is_negative() {
                    continue;
                }
                let cross = &g0 / (&g0 - &g1);
                if g0.is_negative() {
                    if cross > lo.0 {
                        lo = (cross, Some((a, b)));
                    }
                } else if cross < hi.0 {
                    hi = (cross, Some((a, b)));
                }
            }
            if empty || lo.0 >= hi.0 {
                continue;
            }
            let key = |tq: &Q, side: Option<(usize, usize)>, corner: usize| match side {
                None => NodeKey::Interior { tri: ti, corner },
                Some((a, b)) => {
                    let (u, v) = (t[a].min(t[b]), t[a].max(t[b]));
                    let p = q0.lerp(q1, tq);
                    let d = f.image[v].sub(&f.image[u]);
                    let lambda = p.sub(&f.image[u]).dot(&d) / d.dot(&d);
                    NodeKey::Edge { u, v, lambda }
                }
            };
            pieces.push(Piece {
                ends: [key(&lo.0, lo.1, j), key(&hi.0, hi.1, (j + 1) % m)],
                edge: j,
                lo: lo.0,
                hi: hi.0,
            });
        }
    }
    if pieces.is_empty() {
        return Err(PlError::EmptyPreimage);
    }

    // Coverage of each polygon edge by the image intervals.
    let mut by_edge: BTreeMap<usize, Vec<(Q, Q)>> = BTreeMap::new();
    for p in &pieces {
        by_edge.entry(p.edge).or_default().push((p.lo.clone(), p.hi.clone()));
    }
    let covers_polygon = (0..m).all(|j| {
        let Some(iv) = by_edge.get_mut(&j) else { return false };
        iv.sort();
        let mut reach = Q::zero();
        for (a, b) in iv.iter() {
            if *a > reach {
                return false;
            }
            if *b > reach {
                reach = b.clone();
            }
        }
        reach.is_one()
    });

    // Assemble the graph.
    let mut incident: BTreeMap<&NodeKey, Vec<usize>> = BTreeMap::new();
    for (i, p) in pieces.iter().enumerate() {
        for e in &p.ends {
            incident.entry(e).or_default().push(i);
        }
    }
    if let Some((node, _)) = incident.iter().find(|(_, v)| v.len() > 2) {
        return Err(PlError::NonManifold(format!("{node:?}")));
    }
    let mut used = vec![false; pieces.len()];
    let mut components = Vec::new();
    let starts: Vec<&NodeKey> = incident
        .iter()
        .filter(|(_, v)| v.len() == 1)
        .map(|(n, _)| *n)
        .chain(incident.keys().copied())
        .collect();
    for start in starts {
        let Some(&first) = incident[start].iter().find(|&&i| !used[i]) else { continue };
        let mut nodes = vec![start.clone()];
        let mut at = start;
        let mut piece = first;
        loop {
            used[piece] = true;
            let p = &pieces[piece];
            let next = if &p.ends[0] == at { &p.ends[1] } else { &p.ends[0] };
            if next == start {
                break;
            }
            nodes.push(next.clone());
            at = next;
            match incident[at].iter().find(|&&i| !used[i]) {
                Some(&i) => piece = i,
                None => break,
            }
        }
        let closed = incident[start].len() == 2;
        let mut domain: Vec<Point> = nodes.iter().map(|n| node_point(f, poly, n, false)).collect();
        // Loops run counter-clockwise in the domain so windings have a sign.
        if closed && signed_area(&domain).is_negative() {
            nodes[1..].reverse();
            domain[1..].reverse();
        }
        let image = nodes.iter().map(|n| node_point(f, poly, n, true)).collect();
        components.push(Component {
            nodes,
            closed,
            domain,
            image,
        });
    }
    Ok(Preimage {
        components,
        covers_polygon,
    })
}

fn signed_area(path: &[Point]) -> Q {
    let n = path.len();
    (0..n).map(|k| path[k].cross(&path[(k + 1) % n])).sum()
}

fn node_point(f: &PLSurfaceMap, poly: &[Point], n: &NodeKey, image: bool) -> Point {
    let coords = if image { &f.image } else { &f.domain };
    match n {
        NodeKey::Edge { u, v, lambda } => coords[*u].lerp(&coords[*v], lambda),
        NodeKey::Interior { tri, corner } => {
            let q = &poly[*corner];
            if image {
                return q.clone();
            }
            let t = &f.complex.simplices(2)[*tri];
            let (a, b, c) = (&f.image[t[0]], &f.image[t[1]], &f.image[t[2]]);
            let area = orient(a, b, c);
            let wa = orient(b, c, q) / &area;
            let wb = orient(c, a, q) / &area;
            let wc = orient(a, b, q) / &area;
            coords[t[0]].scale(&wa).add(&coords[t[1]].scale(&wb)).add(&coords[t[2]].scale(&wc))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Every preimage loop has winding number 0 while the circle is covered,
    /// so the map cannot be injective.
    NotInjectiveCertificate,
    /// Some loop winds nontrivially; no conclusion.
    Inconclusive,
    HypothesisFailed(String),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::NotInjectiveCertificate => "not_injective_certificate",
            Verdict::Inconclusive => "inconclusive",
            Verdict::HypothesisFailed(_) => "hypothesis_failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub verdict: Verdict,
    pub sides: usize,
    pub loops: usize,
    pub arcs: usize,
    pub windings: Vec<i64>,
    pub covers_circle: bool,
}

impl ObstructionReport {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "verdict": self.verdict.name(),
            "sides": self.sides,
            "loops": self.loops,
            "arcs": self.arcs,
            "windings": self.windings,
            "covers_circle": self.covers_circle,
        });
        if let Verdict::HypothesisFailed(r) = &self.verdict {
            v["reason"] = serde_json::Value::from(r.clone());
        }
        v
    }
}

/// Pulls back the `sides`-gon proxy of the unit circle and inspects the
/// windings of the preimage loops.
///
/// An injective map would restrict to a bijection from the compact preimage
/// onto the circle, provided the circle lies in the image; that proviso is
/// checked explicitly, since injectivity alone does not give it. A bijection
/// from a compact space is a homeomorphism and pulls the circle's degree-one
/// class back nontrivially, so loops that all wind zero times (arcs carry no
/// first cohomology) certify non-injectivity.
pub fn euclidean_obstruction(f: &PLSurfaceMap, sides: usize) -> Result<ObstructionReport, PlError> {
    let poly = circle_proxy(sides);
    let pre = match preimage_of_polygon(f, &poly) {
        Ok(p) => p,
        Err(PlError::EmptyPreimage) => {
            return Ok(ObstructionReport {
                verdict: Verdict::HypothesisFailed("preimage of the circle is empty".into()),
                sides,
                loops: 0,
                arcs: 0,
                windings: Vec::new(),
                covers_circle: false,
            })
        }
        Err(e) => return Err(e),
    };
    let windings: Vec<i64> = pre.components.iter().filter_map(Component::winding).collect();
    let loops = windings.len();
    let arcs = pre.components.len() - loops;
    let verdict = if !pre.covers_polygon {
        Verdict::HypothesisFailed("image does not cover the circle".into())
    } else if windings.iter().all(|&w| w == 0) {
        Verdict::NotInjectiveCertificate
    } else {
        Verdict::Inconclusive
    };
    Ok(ObstructionReport {
        verdict,
        sides,
        loops,
        arcs,
        windings,
        covers_circle: pre.covers_polygon,
    })
}
