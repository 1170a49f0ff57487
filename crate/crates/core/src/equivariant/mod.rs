//! Free actions of finite groups on finite spaces, orbit maps, antipodal
//! sphere models and the covers used to probe the Borsuk–Ulam property.

mod cover;
mod sphere;

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::ic::IcError;
use crate::space::{FiniteSpace, SpaceMap};

pub use cover::{
    antipodal_pair_search, coincidence_set, distance_function_map, facet_projection_cover, facet_vertex_bound,
    lattice_sphere, mesh_angle, random_cap_cover, regular_simplex, AntipodalPair, CoverSet, FacetCoverReport,
    GeometricCover, Metric, Region, SearchConfig,
};
pub use sphere::{cross_polytope_sphere, hexagon_sphere, ic_quotient_sphere, sphere_model, SphereIcReport, SphereModel};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EquivariantError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("not an action: {0}")]
    NotAnAction(String),
    #[error("element `{element}` does not act continuously: {x} <= {y} is not preserved")]
    NotContinuousAction { element: String, x: String, y: String },
    #[error("action is not free: `{element}` fixes `{point}`")]
    NotFree { element: String, point: String },
    #[error("sphere dimension {0} is out of range")]
    DimensionOutOfRange(usize),
    #[error("thickened set {set} contains the antipodal pair {point:?}, {antipode:?}; the facet vertex bound is {bound:.4} rad")]
    ThickeningTooLarge {
        set: usize,
        point: Vec<f64>,
        antipode: Vec<f64>,
        bound: f64,
    },
    #[error("no antipodal pair found after {levels} refinement levels")]
    RefinementBudgetExceeded { levels: usize },
    #[error("cover set {0} is empty")]
    EmptyCoverSet(usize),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error(transparent)]
    Ic(#[from] IcError),
}

/// A finite group given by its multiplication table, `table[a][b] = ab`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Group {
    elements: Vec<String>,
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl Group {
    pub fn new(elements: Vec<String>, table: Vec<Vec<usize>>) -> Result<Self, EquivariantError> {
        let n = elements.len();
        let bad = |m: String| Err(EquivariantError::NotAGroup(m));
        if n == 0 {
            return bad("no elements".into());
        }
        if table.len() != n || table.iter().any(|row| row.len() != n) {
            return bad(format!("table is not {n}x{n}"));
        }
        if table.iter().flatten().any(|&c| c >= n) {
            return bad("table entry out of range".into());
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|a| table[e][a] == a && table[a][e] == a)) else {
            return bad("no identity".into());
        };
        let mut inverse = Vec::with_capacity(n);
        for a in 0..n {
            match (0..n).find(|&b| table[a][b] == identity && table[b][a] == identity) {
                Some(b) => inverse.push(b),
                None => return bad(format!("`{}` has no inverse", elements[a])),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return bad(format!("({}{}){} != {}({}{})", elements[a], elements[b], elements[c], elements[a], elements[b], elements[c]));
                    }
                }
            }
        }
        Ok(Self {
            elements,
            table,
            identity,
            inverse,
        })
    }

    /// ℤ/n with elements `0..n` written additively.
    pub fn cyclic(n: usize) -> Self {
        let elements = (0..n).map(|i| i.to_string()).collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::new(elements, table).expect("cyclic group")
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }
}

/// A validated free action by order automorphisms.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: Group,
    space: Arc<FiniteSpace>,
    /// `perm[g][x] = g·x`.
    perm: Vec<Vec<usize>>,
}

/// Checks that `perm[g]` is an order automorphism for every `g`, that the
/// assignment is a group action, and that it is free.
pub fn validate_action(group: Group, space: Arc<FiniteSpace>, perm: Vec<Vec<usize>>) -> Result<GroupAction, EquivariantError> {
    let n = space.len();
    let name = |g: usize| group.elements()[g].clone();
    if perm.len() != group.order() {
        return Err(EquivariantError::NotAnAction(format!("{} permutations for {} elements", perm.len(), group.order())));
    }
    for (g, p) in perm.iter().enumerate() {
        let mut seen = vec![false; n];
        if p.len() != n || p.iter().any(|&y| y >= n || std::mem::replace(&mut seen[y], true)) {
            return Err(EquivariantError::NotAnAction(format!("`{}` is not a bijection", name(g))));
        }
        for x in 0..n {
            for y in 0..n {
                if space.leq(x, y) != space.leq(p[x], p[y]) {
                    return Err(EquivariantError::NotContinuousAction {
                        element: name(g),
                        x: space.label(x).to_string(),
                        y: space.label(y).to_string(),
                    });
                }
            }
        }
    }
    if let Some(x) = (0..n).find(|&x| perm[group.identity()][x] != x) {
        return Err(EquivariantError::NotAnAction(format!("identity moves `{}`", space.label(x))));
    }
    for g in 0..group.order() {
        for h in 0..group.order() {
            let gh = group.mul(g, h);
            if let Some(x) = (0..n).find(|&x| perm[g][perm[h][x]] != perm[gh][x]) {
                return Err(EquivariantError::NotAnAction(format!(
                    "`{}`·(`{}`·{}) != (`{}{}`)·{}",
                    name(g),
                    name(h),
                    space.label(x),
                    name(g),
                    name(h),
                    space.label(x)
                )));
            }
        }
    }
    for g in (0..group.order()).filter(|&g| g != group.identity()) {
        if let Some(x) = (0..n).find(|&x| perm[g][x] == x) {
            return Err(EquivariantError::NotFree {
                element: name(g),
                point: space.label(x).to_string(),
            });
        }
    }
    Ok(GroupAction { group, space, perm })
}

impl GroupAction {
    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.perm[g][x]
    }

    pub fn permutation(&self, g: usize) -> &[usize] {
        &self.perm[g]
    }

    /// Orbits ordered by their least point, each listed in increasing order.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.space.len()];
        let mut out = Vec::new();
        for x in 0..self.space.len() {
            if seen[x] {
                continue;
            }
            let mut orbit: Vec<usize> = self.perm.iter().map(|p| p[x]).collect();
            orbit.sort_unstable();
            orbit.dedup();
            for &y in &orbit {
                seen[y] = true;
            }
            out.push(orbit);
        }
        out
    }
}

/// `G` acting on `|G|` disjoint copies of `space` by left multiplication on
/// the copy index. Point `(h, y)` is labelled `{h}:{y}` and sits at position
/// `h * |space| + y`.
pub fn free_action_on_copies(group: Group, space: &FiniteSpace) -> GroupAction {
    let m = space.len();
    let k = group.order();
    let mut labels = Vec::with_capacity(k * m);
    let mut pairs = Vec::new();
    for h in 0..k {
        for y in 0..m {
            labels.push(format!("{}:{}", group.elements()[h], space.label(y)));
            for x in space.down(y).ones() {
                pairs.push((h * m + x, h * m + y));
            }
        }
    }
    let copies = Arc::new(FiniteSpace::from_pairs(labels, &pairs).expect("labels are distinct"));
    let perm = (0..k)
        .map(|g| (0..k * m).map(|p| group.mul(g, p / m) * m + p % m).collect())
        .collect();
    validate_action(group, copies, perm).expect("left multiplication is free")
}

/// A random free action of `group` on `|G| · m` points `(h, y)`: random
/// relations `(a, y) <= (b, y')` are added together with all their
/// translates, so every element acts by an automorphism of the closure.
pub fn random_free_action(rng: &mut impl Rng, group: Group, m: usize, density: f64) -> GroupAction {
    let k = group.order();
    let labels = (0..k * m).map(|p| format!("{}:y{}", group.elements()[p / m], p % m)).collect();
    let mut pairs = Vec::new();
    for p in 0..k * m {
        for q in 0..k * m {
            if p != q && rng.gen_bool(density / k as f64) {
                for g in 0..k {
                    pairs.push((group.mul(g, p / m) * m + p % m, group.mul(g, q / m) * m + q % m));
                }
            }
        }
    }
    let space = Arc::new(FiniteSpace::from_pairs(labels, &pairs).expect("labels are distinct"));
    let perm = (0..k)
        .map(|g| (0..k * m).map(|p| group.mul(g, p / m) * m + p % m).collect())
        .collect();
    validate_action(group, space, perm).expect("translation-invariant relation")
}

/// The orbit map of a free action together with its target.
#[derive(Clone, Debug)]
pub struct QuotientMapModel {
    pub action: GroupAction,
    pub quotient: Arc<FiniteSpace>,
    pub map: SpaceMap,
    pub orbits: Vec<Vec<usize>>,
}

/// Orbit space with `[x] <= [y]` iff `g·x <= h·y` for some `g, h`. Orbits are
/// labelled `[x]` after their least point.
pub fn quotient_map(a: GroupAction) -> QuotientMapModel {
    let orbits = a.orbits();
    let space = a.space();
    let mut of = vec![0; space.len()];
    for (i, orbit) in orbits.iter().enumerate() {
        for &x in orbit {
            of[x] = i;
        }
    }
    let labels = orbits.iter().map(|o| format!("[{}]", space.label(o[0]))).collect();
    let mut pairs = Vec::new();
    for y in 0..space.len() {
        for x in space.down(y).ones() {
            if of[x] != of[y] {
                pairs.push((of[x], of[y]));
            }
        }
    }
    pairs.sort_unstable();
    pairs.dedup();
    let quotient = Arc::new(FiniteSpace::from_pairs(labels, &pairs).expect("orbit labels are distinct"));
    let map = SpaceMap::new(space.clone(), quotient.clone(), of).expect("orbit map preserves order");
    QuotientMapModel {
        action: a,
        quotient,
        map,
        orbits,
    }
}
