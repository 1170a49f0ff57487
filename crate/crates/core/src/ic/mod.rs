//! The injective category number of a map between finite spaces.
//!
//! `IC(f)` is the least `l >= 1` such that the domain is a union of `l` open
//! sets on each of which `f` is injective. Two facts make this a finite
//! covering problem:
//!
//! * Every open neighbourhood of `x` contains the minimal open set `down(x)`,
//!   so `f` is injective near every point iff it is injective on every
//!   `down(x)`. If that fails at `x`, no injective open set contains `x` and
//!   `IC(f)` is infinite. Conversely the minimal opens form a finite
//!   injective cover, so a locally injective map has finite `IC`.
//! * Any injective open set lies in a maximal one, and replacing each member
//!   of a cover by a maximal superset keeps it a cover of the same size. The
//!   search therefore only ranges over maximal injective opens.

mod candidates;
mod checks;
pub mod oracle;
mod solver;

use std::fmt;
use std::ops::Mul;
use std::sync::Arc;
use std::time::Duration;

use thiserror::Error;

use crate::space::{OpenSet, PointSet, SpaceError, SpaceMap};

pub use candidates::{is_locally_injective, local_injectivity_witness, maximal_injective_opens, set_order};
pub use checks::{
    check_composition, check_iteration, check_pullback, check_restriction, CompositionReport, IterationReport,
    PullbackReport, RestrictionReport,
};
pub use solver::ic_exact;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IcError {
    #[error("map is not locally injective at `{witness}`")]
    NotLocallyInjective { witness: String },
    #[error("more than {0} maximal injective open sets")]
    CandidateExplosion(usize),
    #[error("search budget exhausted; IC is between {lower} and {upper}")]
    BudgetExceeded { lower: usize, upper: usize },
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// A value of `IC`: a positive integer or infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum IcValue {
    Finite(usize),
    Infinite,
}

impl IcValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            IcValue::Finite(v) => Some(v),
            IcValue::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, IcValue::Finite(_))
    }

    pub fn to_json(self) -> serde_json::Value {
        match self {
            IcValue::Finite(v) => serde_json::Value::from(v),
            IcValue::Infinite => serde_json::Value::from("inf"),
        }
    }
}

impl Mul for IcValue {
    type Output = IcValue;

    fn mul(self, rhs: IcValue) -> IcValue {
        match (self, rhs) {
            (IcValue::Finite(a), IcValue::Finite(b)) => a.checked_mul(b).map_or(IcValue::Infinite, IcValue::Finite),
            _ => IcValue::Infinite,
        }
    }
}

impl fmt::Display for IcValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IcValue::Finite(v) => write!(f, "{v}"),
            IcValue::Infinite => write!(f, "inf"),
        }
    }
}

/// Search limits for [`ic_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_candidates: usize,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_nodes: 1_000_000,
            max_candidates: 100_000,
            time_limit: None,
        }
    }
}

impl Budget {
    pub fn with_nodes(max_nodes: u64) -> Self {
        Self {
            max_nodes,
            ..Self::default()
        }
    }
}

/// A list of open sets claimed to be an injective cover of `map`.
#[derive(Clone, Debug)]
pub struct InjectiveCover {
    map: SpaceMap,
    sets: Vec<OpenSet>,
}

/// Why a cover was rejected.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CoverFailure {
    #[error("set {index} belongs to another space")]
    ForeignSet { index: usize },
    #[error("set {index} is not open: `{member}` lies above `{below}`")]
    NotOpen { index: usize, member: String, below: String },
    #[error("point `{point}` is not covered")]
    Coverage { point: String },
    #[error("set {index} contains `{a}` and `{b}` with the same image")]
    Injectivity { index: usize, a: String, b: String },
}

impl InjectiveCover {
    pub fn new(map: SpaceMap, sets: Vec<OpenSet>) -> Self {
        Self { map, sets }
    }

    pub(crate) fn from_members(map: &SpaceMap, members: Vec<PointSet>) -> Self {
        let space = map.domain();
        let sets = members
            .into_iter()
            .map(|m| OpenSet::new(Arc::clone(space), m).expect("candidate sets are open"))
            .collect();
        Self::new(map.clone(), sets)
    }

    pub fn map(&self) -> &SpaceMap {
        &self.map
    }

    pub fn sets(&self) -> &[OpenSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn labels(&self) -> Vec<Vec<String>> {
        self.sets.iter().map(OpenSet::labels).collect()
    }

    pub fn verify(&self) -> Result<(), CoverFailure> {
        let members: Vec<&PointSet> = self.sets.iter().map(OpenSet::members).collect();
        for (index, s) in self.sets.iter().enumerate() {
            if **s.space() != **self.map.domain() {
                return Err(CoverFailure::ForeignSet { index });
            }
        }
        verify_cover(&self.map, &members)
    }
}

/// Checks openness, coverage and injectivity of raw point sets.
pub fn verify_cover(f: &SpaceMap, sets: &[&PointSet]) -> Result<(), CoverFailure> {
    let space = f.domain();
    let mut union = space.empty_set();
    for (index, s) in sets.iter().enumerate() {
        for y in s.ones() {
            if let Some(x) = space.down(y).difference(s).next() {
                return Err(CoverFailure::NotOpen {
                    index,
                    member: space.label(y).to_string(),
                    below: space.label(x).to_string(),
                });
            }
        }
        let mut seen = vec![usize::MAX; f.codomain().len()];
        for x in s.ones() {
            let y = f.apply(x);
            if seen[y] != usize::MAX {
                return Err(CoverFailure::Injectivity {
                    index,
                    a: space.label(seen[y]).to_string(),
                    b: space.label(x).to_string(),
                });
            }
            seen[y] = x;
        }
        union.union_with(s);
    }
    if let Some(x) = (0..space.len()).find(|&x| !union.contains(x)) {
        return Err(CoverFailure::Coverage {
            point: space.label(x).to_string(),
        });
    }
    Ok(())
}

/// Whether `f` is injective on `u`, after checking that `u` is open.
pub fn is_injective_open(f: &SpaceMap, u: &PointSet) -> Result<bool, SpaceError> {
    let set = OpenSet::new(Arc::clone(f.domain()), u.clone())?;
    Ok(f.is_injective_on(set.members()))
}

/// Outcome of [`ic_exact`].
#[derive(Clone, Debug)]
pub struct IcResult {
    pub value: IcValue,
    /// Present iff `value` is finite.
    pub certificate: Option<InjectiveCover>,
    pub lower_bound_trace: Vec<(String, usize)>,
    pub nodes: u64,
    /// A point with no injective neighbourhood, when `value` is infinite.
    pub witness: Option<String>,
    /// False when the budget ran out while canonicalising the certificate;
    /// the certificate is still optimal and verified.
    pub canonical: bool,
}

impl IcResult {
    /// The report object `{ic, certificate, lower_bounds, nodes, seed}`.
    pub fn to_json(&self, seed: u64) -> serde_json::Value {
        let certificate = self.certificate.as_ref().map(InjectiveCover::labels).unwrap_or_default();
        let lower_bounds: serde_json::Map<String, serde_json::Value> = self
            .lower_bound_trace
            .iter()
            .map(|(k, v)| (k.clone(), serde_json::Value::from(*v)))
            .collect();
        let mut out = serde_json::json!({
            "ic": self.value.to_json(),
            "certificate": certificate,
            "lower_bounds": lower_bounds,
            "nodes": self.nodes,
            "seed": seed,
        });
        if let Some(w) = &self.witness {
            out["witness"] = serde_json::Value::from(w.clone());
        }
        out
    }
}

/// `max_y |f^{-1}(y)|`, at least 1.
pub fn ic_lower_max_fiber(f: &SpaceMap) -> usize {
    let mut counts = vec![0usize; f.codomain().len()];
    for &y in f.assignment() {
        counts[y] += 1;
    }
    counts.into_iter().max().unwrap_or(0).max(1)
}

/// Greedy cover over the maximal injective opens: repeatedly take the set
/// covering the most uncovered points, earliest set on ties.
pub fn ic_upper_greedy(f: &SpaceMap, budget: &Budget) -> Result<InjectiveCover, IcError> {
    let candidates = maximal_injective_opens(f, budget.max_candidates)?;
    Ok(InjectiveCover::from_members(f, greedy_indices(f, &candidates).into_iter().map(|i| candidates[i].clone()).collect()))
}

pub(crate) fn greedy_indices(f: &SpaceMap, candidates: &[PointSet]) -> Vec<usize> {
    let space = f.domain();
    let mut uncovered = space.full_set();
    let mut chosen = Vec::new();
    if space.is_empty() {
        return vec![0];
    }
    while uncovered.count_ones(..) > 0 {
        let (best, _) = candidates
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.intersection(&uncovered).count()))
            .fold((usize::MAX, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        chosen.push(best);
        uncovered.difference_with(&candidates[best]);
    }
    chosen
}
