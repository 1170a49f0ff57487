//! Finite spaces as preorders.
//!
//! A finite topological space is the same thing as a preorder on its points:
//! `x <= y` means `x` belongs to every open set containing `y`, i.e. `x` lies in
//! the minimal open neighbourhood of `y`. Open sets are exactly the down-sets,
//! and a map between finite spaces is continuous iff it preserves the order.
//!
//! Antisymmetry is never required, so quotients by group actions that are not
//! T0 are representable.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use thiserror::Error;

/// A subset of the points of a space, indexed by point position.
pub type PointSet = FixedBitSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpaceError {
    #[error("duplicate point `{0}`")]
    DuplicatePoint(String),
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point `{0}` has no image")]
    MissingAssignment(String),
    #[error("not continuous: {x} <= {y} but f({x}) = {fx} is not <= f({y}) = {fy}")]
    NotContinuous {
        x: String,
        y: String,
        fx: String,
        fy: String,
    },
    #[error("subset is empty")]
    EmptySubset,
    #[error("maps do not share a codomain")]
    CodomainMismatch,
    #[error("codomain of the first map is not the domain of the second")]
    NotComposable,
    #[error("not open: contains `{member}` but not `{below}` <= `{member}`")]
    NotOpen { member: String, below: String },
}

/// A finite set of labelled points with a reflexive, transitive relation.
#[derive(Clone)]
pub struct FiniteSpace {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    /// `down[y]` = { x : x <= y }, the minimal open neighbourhood of `y`.
    down: Vec<PointSet>,
    /// `up[x]` = { y : x <= y }, the minimal closed set containing `x`.
    up: Vec<PointSet>,
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.down == other.down
    }
}

impl Eq for FiniteSpace {}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut rel = Vec::new();
        for y in 0..self.len() {
            for x in self.down[y].ones() {
                if x != y {
                    rel.push(format!("{}<={}", self.labels[x], self.labels[y]));
                }
            }
        }
        f.debug_struct("FiniteSpace")
            .field("points", &self.labels)
            .field("leq", &rel)
            .finish()
    }
}

impl FiniteSpace {
    /// Builds a space from labelled points and generating relations `(x, y)`
    /// meaning `x <= y`. The relation is closed reflexively and transitively.
    pub fn new<P, A, B>(points: P, leq: impl IntoIterator<Item = (A, B)>) -> Result<Self, SpaceError>
    where
        P: IntoIterator,
        P::Item: Into<String>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let labels: Vec<String> = points.into_iter().map(Into::into).collect();
        let index = build_index(&labels)?;
        let mut pairs = Vec::new();
        for (a, b) in leq {
            let x = *index
                .get(a.as_ref())
                .ok_or_else(|| SpaceError::UnknownPoint(a.as_ref().to_string()))?;
            let y = *index
                .get(b.as_ref())
                .ok_or_else(|| SpaceError::UnknownPoint(b.as_ref().to_string()))?;
            pairs.push((x, y));
        }
        Ok(Self::close(labels, index, &pairs))
    }

    /// Like [`FiniteSpace::new`] with relations given by point position.
    pub fn from_pairs(labels: Vec<String>, pairs: &[(usize, usize)]) -> Result<Self, SpaceError> {
        let index = build_index(&labels)?;
        Ok(Self::close(labels, index, pairs))
    }

    pub fn discrete<S: Into<String>>(points: impl IntoIterator<Item = S>) -> Result<Self, SpaceError> {
        let labels: Vec<String> = points.into_iter().map(Into::into).collect();
        Self::from_pairs(labels, &[])
    }

    /// The two-point space `{a <= b}` whose opens are `{}`, `{a}`, `{a, b}`.
    pub fn sierpinski() -> Self {
        Self::new(["a", "b"], [("a", "b")]).expect("static fixture")
    }

    pub fn point() -> Self {
        Self::discrete(["*"]).expect("static fixture")
    }

    fn close(labels: Vec<String>, index: HashMap<String, usize>, pairs: &[(usize, usize)]) -> Self {
        let n = labels.len();
        let mut down: Vec<PointSet> = (0..n)
            .map(|y| {
                let mut s = PointSet::with_capacity(n);
                s.insert(y);
                s
            })
            .collect();
        for &(x, y) in pairs {
            down[y].insert(x);
        }
        // Warshall: after step k, every path through {0..=k} is short-cut.
        for k in 0..n {
            let below_k = down[k].clone();
            for set in down.iter_mut() {
                if set.contains(k) {
                    set.union_with(&below_k);
                }
            }
        }
        let mut up: Vec<PointSet> = (0..n).map(|_| PointSet::with_capacity(n)).collect();
        for (y, set) in down.iter().enumerate() {
            for x in set.ones() {
                up[x].insert(y);
            }
        }
        Self {
            labels,
            index,
            down,
            up,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, SpaceError> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| SpaceError::UnknownPoint(label.to_string()))
    }

    /// Resolves a list of labels to a point set.
    pub fn subset<S: AsRef<str>>(&self, labels: &[S]) -> Result<PointSet, SpaceError> {
        let mut s = self.empty_set();
        for l in labels {
            s.insert(self.index_of(l.as_ref())?);
        }
        Ok(s)
    }

    pub fn subset_labels(&self, s: &PointSet) -> Vec<String> {
        s.ones().map(|i| self.labels[i].clone()).collect()
    }

    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.down[y].contains(x)
    }

    /// `{ x : x <= y }`.
    pub fn down(&self, y: usize) -> &PointSet {
        &self.down[y]
    }

    /// `{ y : x <= y }`.
    pub fn up(&self, x: usize) -> &PointSet {
        &self.up[x]
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::with_capacity(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        let mut s = self.empty_set();
        s.insert_range(..);
        s
    }

    /// True iff `s` is a down-set.
    pub fn is_open_set(&self, s: &PointSet) -> bool {
        s.ones().all(|y| self.down[y].is_subset(s))
    }

    /// Openness test by label; fails on foreign labels.
    pub fn is_open<S: AsRef<str>>(&self, labels: &[S]) -> Result<bool, SpaceError> {
        Ok(self.is_open_set(&self.subset(labels)?))
    }

    /// The smallest open set containing `s`.
    pub fn open_hull(&self, s: &PointSet) -> PointSet {
        let mut out = self.empty_set();
        for y in s.ones() {
            out.union_with(&self.down[y]);
        }
        out
    }

    /// Every open set of the space, by brute force over all subsets.
    /// Returns `None` above 24 points.
    pub fn enumerate_open_sets(&self) -> Option<Vec<PointSet>> {
        let n = self.len();
        if n > 24 {
            return None;
        }
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << n) {
            let mut s = self.empty_set();
            for i in 0..n {
                if mask >> i & 1 == 1 {
                    s.insert(i);
                }
            }
            if self.is_open_set(&s) {
                out.push(s);
            }
        }
        Some(out)
    }

    /// The induced preorder on a nonempty subset, together with the positions
    /// of the new points in `self`.
    pub fn subspace(&self, s: &PointSet) -> Result<(FiniteSpace, Vec<usize>), SpaceError> {
        if s.count_ones(..) == 0 {
            return Err(SpaceError::EmptySubset);
        }
        Ok(self.induced(s))
    }

    pub(crate) fn induced(&self, s: &PointSet) -> (FiniteSpace, Vec<usize>) {
        let old: Vec<usize> = s.ones().collect();
        let labels: Vec<String> = old.iter().map(|&i| self.labels[i].clone()).collect();
        let mut pairs = Vec::new();
        for (a, &x) in old.iter().enumerate() {
            for (b, &y) in old.iter().enumerate() {
                if a != b && self.leq(x, y) {
                    pairs.push((a, b));
                }
            }
        }
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        (Self::close(labels, index, &pairs), old)
    }

    /// Product preorder; points are labelled `(x,y)`.
    pub fn product(&self, other: &FiniteSpace) -> FiniteSpace {
        let n = other.len();
        let mut labels = Vec::with_capacity(self.len() * n);
        for a in &self.labels {
            for b in &other.labels {
                labels.push(format!("({a},{b})"));
            }
        }
        let mut pairs = Vec::new();
        for x in 0..self.len() {
            for y in 0..n {
                for x2 in self.down[x].ones() {
                    for y2 in other.down[y].ones() {
                        pairs.push((x2 * n + y2, x * n + y));
                    }
                }
            }
        }
        let index = labels.iter().cloned().enumerate().map(|(i, l)| (l, i)).collect();
        Self::close(labels, index, &pairs)
    }
}

fn build_index(labels: &[String]) -> Result<HashMap<String, usize>, SpaceError> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(SpaceError::DuplicatePoint(l.clone()));
        }
    }
    Ok(index)
}

/// A down-set of a particular space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenSet {
    space: Arc<FiniteSpace>,
    members: PointSet,
}

impl OpenSet {
    pub fn new(space: Arc<FiniteSpace>, members: PointSet) -> Result<Self, SpaceError> {
        for y in members.ones() {
            if let Some(x) = space.down(y).difference(&members).next() {
                return Err(SpaceError::NotOpen {
                    member: space.label(y).to_string(),
                    below: space.label(x).to_string(),
                });
            }
        }
        Ok(Self { space, members })
    }

    /// `{ y : y <= x }`, the intersection of all open sets containing `x`.
    pub fn minimal(space: &Arc<FiniteSpace>, x: usize) -> Self {
        Self {
            members: space.down(x).clone(),
            space: Arc::clone(space),
        }
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn members(&self) -> &PointSet {
        &self.members
    }

    pub fn into_members(self) -> PointSet {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, x: usize) -> bool {
        self.members.contains(x)
    }

    pub fn labels(&self) -> Vec<String> {
        self.space.subset_labels(&self.members)
    }
}

/// Minimal open neighbourhood of the point labelled `x`.
pub fn minimal_open(space: &Arc<FiniteSpace>, x: &str) -> Result<OpenSet, SpaceError> {
    let i = space.index_of(x)?;
    Ok(OpenSet::minimal(space, i))
}

/// An order-preserving (equivalently, continuous) map between finite spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpaceMap {
    domain: Arc<FiniteSpace>,
    codomain: Arc<FiniteSpace>,
    assignment: Vec<usize>,
}

/// First pair `x <= y` whose images are not ordered, if any.
pub fn continuity_witness(domain: &FiniteSpace, codomain: &FiniteSpace, assignment: &[usize]) -> Option<(usize, usize)> {
    for y in 0..domain.len() {
        for x in domain.down(y).ones() {
            if !codomain.leq(assignment[x], assignment[y]) {
                return Some((x, y));
            }
        }
    }
    None
}

impl SpaceMap {
    /// Accepts `assignment` iff it is order-preserving.
    pub fn new(domain: Arc<FiniteSpace>, codomain: Arc<FiniteSpace>, assignment: Vec<usize>) -> Result<Self, SpaceError> {
        if assignment.len() != domain.len() {
            let missing = domain.labels().get(assignment.len()).cloned().unwrap_or_default();
            return Err(SpaceError::MissingAssignment(missing));
        }
        if let Some(&bad) = assignment.iter().find(|&&y| y >= codomain.len()) {
            return Err(SpaceError::UnknownPoint(format!("#{bad}")));
        }
        if let Some((x, y)) = continuity_witness(&domain, &codomain, &assignment) {
            return Err(SpaceError::NotContinuous {
                x: domain.label(x).to_string(),
                y: domain.label(y).to_string(),
                fx: codomain.label(assignment[x]).to_string(),
                fy: codomain.label(assignment[y]).to_string(),
            });
        }
        Ok(Self {
            domain,
            codomain,
            assignment,
        })
    }

    pub fn from_labels<K: AsRef<str>, V: AsRef<str>>(
        domain: Arc<FiniteSpace>,
        codomain: Arc<FiniteSpace>,
        assignment: &BTreeMap<K, V>,
    ) -> Result<Self, SpaceError> {
        let mut table = vec![usize::MAX; domain.len()];
        for (k, v) in assignment {
            let x = domain.index_of(k.as_ref())?;
            table[x] = codomain.index_of(v.as_ref())?;
        }
        if let Some(x) = table.iter().position(|&y| y == usize::MAX) {
            return Err(SpaceError::MissingAssignment(domain.label(x).to_string()));
        }
        Self::new(domain, codomain, table)
    }

    pub fn identity(space: Arc<FiniteSpace>) -> Self {
        let assignment = (0..space.len()).collect();
        Self {
            domain: Arc::clone(&space),
            codomain: space,
            assignment,
        }
    }

    pub fn constant(domain: Arc<FiniteSpace>, codomain: Arc<FiniteSpace>, y: usize) -> Self {
        assert!(y < codomain.len());
        let assignment = vec![y; domain.len()];
        Self {
            domain,
            codomain,
            assignment,
        }
    }

    pub fn domain(&self) -> &Arc<FiniteSpace> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<FiniteSpace> {
        &self.codomain
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn apply(&self, x: usize) -> usize {
        self.assignment[x]
    }

    /// `{ x : f(x) = y }`.
    pub fn fiber(&self, y: usize) -> PointSet {
        let mut s = self.domain.empty_set();
        for (x, &fx) in self.assignment.iter().enumerate() {
            if fx == y {
                s.insert(x);
            }
        }
        s
    }

    pub fn preimage(&self, a: &PointSet) -> PointSet {
        let mut s = self.domain.empty_set();
        for (x, &fx) in self.assignment.iter().enumerate() {
            if a.contains(fx) {
                s.insert(x);
            }
        }
        s
    }

    pub fn image(&self) -> PointSet {
        let mut s = self.codomain.empty_set();
        for &y in &self.assignment {
            s.insert(y);
        }
        s
    }

    /// True iff no two points of `s` share an image.
    pub fn is_injective_on(&self, s: &PointSet) -> bool {
        let mut seen = self.codomain.empty_set();
        for x in s.ones() {
            let y = self.assignment[x];
            if seen.contains(y) {
                return false;
            }
            seen.insert(y);
        }
        true
    }

    pub fn is_injective(&self) -> bool {
        self.is_injective_on(&self.domain.full_set())
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &SpaceMap) -> Result<SpaceMap, SpaceError> {
        if *self.codomain != *then.domain {
            return Err(SpaceError::NotComposable);
        }
        let assignment = self.assignment.iter().map(|&y| then.assignment[y]).collect();
        Ok(SpaceMap {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&then.codomain),
            assignment,
        })
    }

    /// The `k`-fold iterate of an endomap, `k >= 1`.
    pub fn iterate(&self, k: usize) -> Result<SpaceMap, SpaceError> {
        assert!(k >= 1);
        let mut out = self.clone();
        for _ in 1..k {
            out = out.then(self)?;
        }
        Ok(out)
    }

    /// The induced map `f^{-1}(a) -> a`. The preimage may be empty.
    pub fn restrict(&self, a: &PointSet) -> Result<SpaceMap, SpaceError> {
        if a.count_ones(..) == 0 {
            return Err(SpaceError::EmptySubset);
        }
        let (cod, cod_old) = self.codomain.induced(a);
        let (dom, dom_old) = self.domain.induced(&self.preimage(a));
        let mut pos = vec![usize::MAX; self.codomain.len()];
        for (i, &y) in cod_old.iter().enumerate() {
            pos[y] = i;
        }
        let assignment = dom_old.iter().map(|&x| pos[self.assignment[x]]).collect();
        Ok(SpaceMap {
            domain: Arc::new(dom),
            codomain: Arc::new(cod),
            assignment,
        })
    }
}

/// The canonical pullback `X ×_N M` of `f: M -> N` along `psi: X -> N`.
#[derive(Clone, Debug)]
pub struct Pullback {
    pub space: Arc<FiniteSpace>,
    /// Projection to `X`.
    pub pi1: SpaceMap,
    /// Projection to `M`.
    pub pi2: SpaceMap,
}

/// Points are pairs `(x, m)` with `psi(x) = f(m)`, ordered componentwise.
pub fn pullback(f: &SpaceMap, psi: &SpaceMap) -> Result<Pullback, SpaceError> {
    if *f.codomain != *psi.codomain {
        return Err(SpaceError::CodomainMismatch);
    }
    let x_space = psi.domain();
    let m_space = f.domain();
    let mut pairs = Vec::new();
    for x in 0..x_space.len() {
        for m in 0..m_space.len() {
            if psi.apply(x) == f.apply(m) {
                pairs.push((x, m));
            }
        }
    }
    let labels: Vec<String> = pairs
        .iter()
        .map(|&(x, m)| format!("({},{})", x_space.label(x), m_space.label(m)))
        .collect();
    let mut rel = Vec::new();
    for (i, &(x, m)) in pairs.iter().enumerate() {
        for (j, &(x2, m2)) in pairs.iter().enumerate() {
            if i != j && x_space.leq(x, x2) && m_space.leq(m, m2) {
                rel.push((i, j));
            }
        }
    }
    let space = Arc::new(FiniteSpace::from_pairs(labels, &rel)?);
    let pi1 = SpaceMap::new(
        Arc::clone(&space),
        Arc::clone(x_space),
        pairs.iter().map(|p| p.0).collect(),
    )?;
    let pi2 = SpaceMap::new(
        Arc::clone(&space),
        Arc::clone(m_space),
        pairs.iter().map(|p| p.1).collect(),
    )?;
    Ok(Pullback { space, pi1, pi2 })
}
