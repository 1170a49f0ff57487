//! Closed PL curves: self-intersections, local injectivity, and the
//! multiplicity formula for `IC` with its explicit cover.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{parse_rational, PlError, Point, Q};
use crate::complex::SimplicialComplex;
use crate::ic::IcValue;
use crate::space::{FiniteSpace, SpaceMap};

/// Closed polygon through `vertices` in order. Edge `i` runs from vertex `i`
/// to vertex `i + 1 (mod n)`; the parameter circle is the union of the edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PLCurve {
    vertices: Vec<Point>,
}

/// `{ "vertices": [["p/q", "p/q"], ...], "closed": true }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveJson {
    pub vertices: Vec<[serde_json::Value; 2]>,
    #[serde(default = "closed_default")]
    pub closed: bool,
}

fn closed_default() -> bool {
    true
}

fn json_rational(v: &serde_json::Value) -> Result<Q, PlError> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => parse_rational(&n.to_string()),
        other => Err(PlError::Invalid(format!("expected a number, got {other}"))),
    }
}

impl PLCurve {
    pub fn new(vertices: Vec<Point>) -> Result<Self, PlError> {
        let n = vertices.len();
        if n < 3 {
            return Err(PlError::TooFewVertices(n));
        }
        if let Some(i) = (0..n).find(|&i| vertices[i] == vertices[(i + 1) % n]) {
            return Err(PlError::ZeroLengthEdge(i));
        }
        Ok(Self { vertices })
    }

    pub fn from_json(json: &CurveJson) -> Result<Self, PlError> {
        if !json.closed {
            return Err(PlError::Invalid("only closed curves are supported".into()));
        }
        let vertices = json
            .vertices
            .iter()
            .map(|[x, y]| Ok(Point::new(json_rational(x)?, json_rational(y)?)))
            .collect::<Result<Vec<_>, PlError>>()?;
        Self::new(vertices)
    }

    pub fn to_json(&self) -> CurveJson {
        CurveJson {
            vertices: self
                .vertices
                .iter()
                .map(|p| p.to_strings().map(serde_json::Value::from))
                .collect(),
            closed: true,
        }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn edge(&self, i: usize) -> (&Point, &Point) {
        (&self.vertices[i], &self.vertices[(i + 1) % self.len()])
    }

    pub fn direction(&self, i: usize) -> Point {
        let (a, b) = self.edge(i);
        b.sub(a)
    }

    pub fn point_at(&self, p: &Param) -> Point {
        let (a, b) = self.edge(p.edge);
        a.lerp(b, &p.t)
    }

    /// Same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut v = self.vertices.clone();
        v.reverse();
        Self { vertices: v }
    }

    /// Same curve with the starting vertex moved by `k`.
    pub fn rotated(&self, k: usize) -> Self {
        let mut v = self.vertices.clone();
        v.rotate_left(k % self.len());
        Self { vertices: v }
    }

    fn param(&self, edge: usize, t: Q) -> Param {
        if t.is_one() {
            Param {
                edge: (edge + 1) % self.len(),
                t: Q::zero(),
            }
        } else {
            Param { edge, t }
        }
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.len();
        (i + 1) % n == j || (j + 1) % n == i
    }
}

/// A point of the parameter circle: edge index and `t ∈ [0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param {
    pub edge: usize,
    pub t: Q,
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}", self.edge, self.t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplePoint {
    pub location: Point,
    pub multiplicity: usize,
    /// Sorted, distinct.
    pub preimages: Vec<Param>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplePointReport {
    /// Sorted by location.
    pub points: Vec<MultiplePoint>,
    pub locally_injective: bool,
}

impl MultiplePointReport {
    pub fn to_json(&self) -> serde_json::Value {
        let points: Vec<serde_json::Value> = self
            .points
            .iter()
            .map(|p| {
                serde_json::json!({
                    "location": p.location.to_strings(),
                    "multiplicity": p.multiplicity,
                    "preimages": p.preimages.iter().map(|q| serde_json::json!({"edge": q.edge, "t": q.t.to_string()})).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::json!({ "points": points, "locally_injective": self.locally_injective })
    }
}

fn overlap(i: usize, j: usize) -> PlError {
    PlError::DegeneratePosition {
        what: "overlap along a segment".into(),
        first: format!("edge {i}"),
        second: format!("edge {j}"),
        hint: None,
    }
}

/// Intersection parameters `(t_i, t_j)` of the closed segments `i`, `j` when
/// they meet in a single point.
fn segment_meet(c: &PLCurve, i: usize, j: usize) -> Result<Option<(Q, Q)>, PlError> {
    let (p, _) = c.edge(i);
    let (q, _) = c.edge(j);
    let r = c.direction(i);
    let s = c.direction(j);
    let qp = q.sub(p);
    let denom = r.cross(&s);
    let unit = |x: &Q| !x.is_negative() && *x <= Q::one();
    if !denom.is_zero() {
        let t = qp.cross(&s) / &denom;
        let u = qp.cross(&r) / &denom;
        return Ok((unit(&t) && unit(&u)).then_some((t, u)));
    }
    if !qp.cross(&r).is_zero() {
        return Ok(None);
    }
    // Collinear: compare the parameter ranges along edge i.
    let rr = r.dot(&r);
    let a = qp.dot(&r) / &rr;
    let b = q.add(&s).sub(p).dot(&r) / &rr;
    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
    let lo = lo.max(Q::zero());
    let hi = hi.min(Q::one());
    if lo < hi {
        return Err(overlap(i, j));
    }
    if lo > hi {
        return Ok(None);
    }
    let at = p.lerp(&c.vertices[(i + 1) % c.len()], &lo);
    let u = at.sub(q).dot(&s) / s.dot(&s);
    Ok(Some((lo, u)))
}

/// All points with at least two preimages, found by exact pairwise segment
/// intersection.
pub fn self_intersections(c: &PLCurve) -> Result<MultiplePointReport, PlError> {
    let n = c.len();
    let mut hits: BTreeMap<Point, BTreeSet<Param>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            if c.adjacent(i, j) {
                let (r, s) = (c.direction(i), c.direction(j));
                if r.cross(&s).is_zero() && r.dot(&s).is_negative() {
                    return Err(overlap(i, j));
                }
                continue;
            }
            if let Some((t, u)) = segment_meet(c, i, j)? {
                let pi = c.param(i, t);
                let pj = c.param(j, u);
                if pi == pj {
                    continue;
                }
                let loc = c.point_at(&pi);
                let set = hits.entry(loc).or_default();
                set.insert(pi);
                set.insert(pj);
            }
        }
    }
    let points = hits
        .into_iter()
        .map(|(location, set)| MultiplePoint {
            location,
            multiplicity: set.len(),
            preimages: set.into_iter().collect(),
        })
        .collect();
    Ok(MultiplePointReport {
        points,
        locally_injective: pl_local_injectivity(c).injective,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalInjectivity {
    pub injective: bool,
    /// A fold vertex, when not injective.
    pub witness: Option<Param>,
}

/// A PL curve fails to be locally injective exactly at a vertex where the
/// outgoing edge turns straight back along the incoming one.
///
/// Overlaps between non-adjacent edges do not affect local injectivity (each
/// small arc still maps injectively); they make the set of multiple points
/// infinite and are rejected by [`self_intersections`].
pub fn pl_local_injectivity(c: &PLCurve) -> LocalInjectivity {
    let n = c.len();
    for i in 0..n {
        let incoming = c.direction((i + n - 1) % n);
        let outgoing = c.direction(i);
        if incoming.cross(&outgoing).is_zero() && incoming.dot(&outgoing).is_negative() {
            return LocalInjectivity {
                injective: false,
                witness: Some(Param { edge: i, t: Q::zero() }),
            };
        }
    }
    LocalInjectivity {
        injective: true,
        witness: None,
    }
}

/// `max k_i` over the multiple points, 1 for an embedding, infinite when
/// local injectivity fails. The parameter circle is T1 and the report is
/// finite, which is what the formula needs.
pub fn ic_by_multiplicity(r: &MultiplePointReport) -> IcValue {
    if !r.locally_injective {
        return IcValue::Infinite;
    }
    IcValue::Finite(r.points.iter().map(|p| p.multiplicity).max().unwrap_or(1))
}

/// `IC` of a curve: infinite at a fold, otherwise from its multiple points.
pub fn curve_ic(c: &PLCurve) -> Result<IcValue, PlError> {
    if !pl_local_injectivity(c).injective {
        return Ok(IcValue::Infinite);
    }
    Ok(ic_by_multiplicity(&self_intersections(c)?))
}

/// The circle with finitely many parameters removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleComplement {
    pub removed: BTreeSet<Param>,
}

impl CircleComplement {
    pub fn contains(&self, p: &Param) -> bool {
        !self.removed.contains(p)
    }

    /// The set as open arcs `(from, to)` between cyclically consecutive
    /// removed parameters; an empty list means the whole circle.
    pub fn arcs(&self) -> Vec<(Param, Param)> {
        let r: Vec<&Param> = self.removed.iter().collect();
        (0..r.len()).map(|k| (r[k].clone(), r[(k + 1) % r.len()].clone())).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamCover {
    pub sets: Vec<CircleComplement>,
}

impl ParamCover {
    pub fn to_json(&self) -> serde_json::Value {
        let sets: Vec<serde_json::Value> = self
            .sets
            .iter()
            .map(|s| {
                serde_json::json!({
                    "removed": s.removed.iter().map(|p| serde_json::json!({"edge": p.edge, "t": p.t.to_string()})).collect::<Vec<_>>(),
                })
            })
            .collect();
        serde_json::Value::from(sets)
    }
}

/// `U_m = S¹ \ ∪_i I^i_m`, where `I^i_m` is the fiber of the `i`-th multiple
/// point minus its `m`-th preimage, or the whole fiber once `m > k_i`.
pub fn cover_from_multiplicity(c: &PLCurve, r: &MultiplePointReport) -> Result<ParamCover, PlError> {
    if !r.locally_injective {
        return Err(PlError::NotApplicable("curve is not locally injective".into()));
    }
    if let Some(q) = r.points.iter().flat_map(|p| &p.preimages).find(|q| q.edge >= c.len()) {
        return Err(PlError::Invalid(format!("parameter {q} is not on the curve")));
    }
    let top = r.points.iter().map(|p| p.multiplicity).max().unwrap_or(1);
    let sets = (0..top)
        .map(|m| {
            let mut removed = BTreeSet::new();
            for p in &r.points {
                for (a, q) in p.preimages.iter().enumerate() {
                    if a != m {
                        removed.insert(q.clone());
                    }
                }
            }
            CircleComplement { removed }
        })
        .collect();
    Ok(ParamCover { sets })
}

/// Checks that the sets cover the circle and that each contains at most one
/// preimage of every multiple point. Removed parameters must lie on the
/// curve's parameter circle.
pub fn verify_param_cover(c: &PLCurve, r: &MultiplePointReport, cover: &ParamCover) -> Result<(), String> {
    if cover.sets.is_empty() {
        return Err("empty cover".into());
    }
    let mut all_removed = BTreeSet::new();
    for (k, s) in cover.sets.iter().enumerate() {
        for p in &s.removed {
            if p.edge >= c.len() || p.t.is_negative() || p.t >= Q::one() {
                return Err(format!("set {k} removes an invalid parameter {p}"));
            }
            all_removed.insert(p.clone());
        }
        for mp in &r.points {
            let kept: Vec<&Param> = mp.preimages.iter().filter(|q| s.contains(q)).collect();
            if kept.len() > 1 {
                return Err(format!("set {k} keeps {} and {} over {}", kept[0], kept[1], mp.location));
            }
        }
    }
    if let Some(p) = all_removed.iter().find(|p| cover.sets.iter().all(|s| !s.contains(p))) {
        return Err(format!("parameter {p} is not covered"));
    }
    Ok(())
}

/// Finite-space model of a locally injective curve.
///
/// The circle is subdivided at every vertex and every preimage of a multiple
/// point, with one extra vertex in the middle of each piece; the model is the
/// face poset of that cycle. Its map goes to the poset of image points and
/// image segments, identifying exactly the cells over a common multiple point.
pub fn finite_model(c: &PLCurve, r: &MultiplePointReport) -> Result<SpaceMap, PlError> {
    if !r.locally_injective {
        return Err(PlError::NotApplicable("curve is not locally injective".into()));
    }
    let n = c.len();
    let mut breaks: BTreeSet<Param> = (0..n).map(|i| Param { edge: i, t: Q::zero() }).collect();
    for p in &r.points {
        breaks.extend(p.preimages.iter().cloned());
    }
    let breaks: Vec<Param> = breaks.into_iter().collect();
    let mut params = Vec::with_capacity(2 * breaks.len());
    for (k, b) in breaks.iter().enumerate() {
        let next = &breaks[(k + 1) % breaks.len()];
        let end = if next.edge == b.edge && next.t > b.t { next.t.clone() } else { Q::one() };
        let two = Q::from_integer(2.into());
        params.push(b.clone());
        params.push(Param {
            edge: b.edge,
            t: (&b.t + end) / two,
        });
    }
    let cycle = SimplicialComplex::cycle(params.len());

    // Codomain: distinct image points, then one cell per model edge.
    let mut locations: BTreeMap<Point, usize> = BTreeMap::new();
    let mut point_of = Vec::with_capacity(params.len());
    for p in &params {
        let loc = c.point_at(p);
        let next = locations.len();
        point_of.push(*locations.entry(loc).or_insert(next));
    }
    let mut labels = vec![String::new(); locations.len()];
    for (loc, &i) in &locations {
        labels[i] = loc.to_string();
    }
    let np = labels.len();
    let mut pairs = Vec::new();
    let mut edge_cell = BTreeMap::new();
    for (k, e) in cycle.simplices(1).iter().enumerate() {
        labels.push(format!("s{k}"));
        pairs.push((point_of[e[0]], np + k));
        pairs.push((point_of[e[1]], np + k));
        edge_cell.insert(e.clone(), np + k);
    }
    let codomain = Arc::new(FiniteSpace::from_pairs(labels, &pairs).map_err(|e| PlError::Invalid(e.to_string()))?);
    let domain = Arc::new(cycle.face_poset());
    let assignment = cycle
        .iter()
        .map(|s| if s.len() == 1 { point_of[s[0]] } else { edge_cell[s] })
        .collect();
    SpaceMap::new(domain, codomain, assignment).map_err(|e| PlError::Invalid(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bowtie() -> PLCurve {
        PLCurve::new(vec![
            Point::from_ints(-1, -1),
            Point::from_ints(1, 1),
            Point::from_ints(1, -1),
            Point::from_ints(-1, 1),
        ])
        .unwrap()
    }

    #[test]
    fn bowtie_crossing() {
        let r = self_intersections(&bowtie()).unwrap();
        assert_eq!(r.points.len(), 1);
        assert_eq!(r.points[0].location, Point::origin());
        assert_eq!(r.points[0].multiplicity, 2);
        assert!(r.locally_injective);
        assert_eq!(ic_by_multiplicity(&r), IcValue::Finite(2));
    }

    #[test]
    fn rejects_bad_curves() {
        assert_eq!(PLCurve::new(vec![Point::origin(), Point::from_ints(1, 0)]), Err(PlError::TooFewVertices(2)));
        let z = PLCurve::new(vec![Point::origin(), Point::origin(), Point::from_ints(1, 0)]);
        assert_eq!(z, Err(PlError::ZeroLengthEdge(0)));
    }

    #[test]
    fn overlapping_edges_are_degenerate() {
        // Two parallel non-adjacent edges sharing a stretch of the x-axis.
        let c = PLCurve::new(vec![
            Point::from_ints(0, 0),
            Point::from_ints(4, 0),
            Point::from_ints(4, 2),
            Point::from_ints(3, 0),
            Point::from_ints(1, 0),
            Point::from_ints(0, 3),
        ])
        .unwrap();
        assert!(matches!(self_intersections(&c), Err(PlError::DegeneratePosition { .. })));
        assert!(pl_local_injectivity(&c).injective);
    }

    #[test]
    fn spike_is_a_fold() {
        let c = PLCurve::new(vec![Point::from_ints(0, 0), Point::from_ints(2, 0), Point::from_ints(1, 0), Point::from_ints(1, 1)]).unwrap();
        let li = pl_local_injectivity(&c);
        assert!(!li.injective);
        assert_eq!(li.witness, Some(Param { edge: 1, t: Q::zero() }));
    }

    #[test]
    fn bowtie_cover() {
        let c = bowtie();
        let r = self_intersections(&c).unwrap();
        let cover = cover_from_multiplicity(&c, &r).unwrap();
        assert_eq!(cover.sets.len(), 2);
        for s in &cover.sets {
            assert_eq!(s.removed.len(), 1);
            assert_eq!(s.arcs().len(), 1);
        }
        verify_param_cover(&c, &r, &cover).unwrap();
        let bad = ParamCover { sets: vec![cover.sets[0].clone()] };
        assert!(verify_param_cover(&c, &r, &bad).is_err());
    }
}
