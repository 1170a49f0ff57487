//! Exact checks of the behaviour of `IC` under composition, pullback,
//! restriction and iteration.

use serde::Serialize;

use crate::space::{pullback, PointSet, SpaceMap};

use super::{ic_exact, Budget, IcError, IcValue};

fn value(f: &SpaceMap, budget: &Budget) -> Result<IcValue, IcError> {
    Ok(ic_exact(f, budget)?.value)
}

fn ser<S: serde::Serializer>(v: &IcValue, s: S) -> Result<S::Ok, S::Error> {
    v.to_json().serialize(s)
}

fn ser_vec<S: serde::Serializer>(v: &[IcValue], s: S) -> Result<S::Ok, S::Error> {
    v.iter().map(|x| x.to_json()).collect::<Vec<_>>().serialize(s)
}

/// `IC(f) <= IC(g∘f) <= IC(f)·IC(g)`.
#[derive(Clone, Debug, Serialize)]
pub struct CompositionReport {
    #[serde(serialize_with = "ser")]
    pub ic_f: IcValue,
    #[serde(serialize_with = "ser")]
    pub ic_g: IcValue,
    #[serde(serialize_with = "ser")]
    pub ic_gf: IcValue,
    pub lower_holds: bool,
    pub upper_holds: bool,
}

impl CompositionReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds
    }
}

pub fn check_composition(f: &SpaceMap, g: &SpaceMap, budget: &Budget) -> Result<CompositionReport, IcError> {
    let gf = f.then(g)?;
    let ic_f = value(f, budget)?;
    let ic_g = value(g, budget)?;
    let ic_gf = value(&gf, budget)?;
    Ok(CompositionReport {
        ic_f,
        ic_g,
        ic_gf,
        lower_holds: ic_f <= ic_gf,
        upper_holds: ic_gf <= ic_f * ic_g,
    })
}

/// `IC(π₁) <= IC(f)` for the canonical pullback of `f` along `psi`.
#[derive(Clone, Debug, Serialize)]
pub struct PullbackReport {
    pub pullback_points: usize,
    #[serde(serialize_with = "ser")]
    pub ic_pi1: IcValue,
    #[serde(serialize_with = "ser")]
    pub ic_f: IcValue,
    pub holds: bool,
}

pub fn check_pullback(f: &SpaceMap, psi: &SpaceMap, budget: &Budget) -> Result<PullbackReport, IcError> {
    let pb = pullback(f, psi)?;
    let ic_pi1 = value(&pb.pi1, budget)?;
    let ic_f = value(f, budget)?;
    Ok(PullbackReport {
        pullback_points: pb.space.len(),
        ic_pi1,
        ic_f,
        holds: ic_pi1 <= ic_f,
    })
}

/// `IC(f|) <= IC(f)` for the restriction over a codomain subset.
#[derive(Clone, Debug, Serialize)]
pub struct RestrictionReport {
    pub subset: Vec<String>,
    #[serde(serialize_with = "ser")]
    pub ic_restricted: IcValue,
    #[serde(serialize_with = "ser")]
    pub ic_f: IcValue,
    pub holds: bool,
}

pub fn check_restriction(f: &SpaceMap, a: &PointSet, budget: &Budget) -> Result<RestrictionReport, IcError> {
    let r = f.restrict(a)?;
    let ic_restricted = value(&r, budget)?;
    let ic_f = value(f, budget)?;
    Ok(RestrictionReport {
        subset: f.codomain().subset_labels(a),
        ic_restricted,
        ic_f,
        holds: ic_restricted <= ic_f,
    })
}

/// `IC(f^j) <= IC(f^{j+1}) <= IC(f)^{j+1}` for `j = 1..=k`.
#[derive(Clone, Debug, Serialize)]
pub struct IterationReport {
    /// `IC(f^1), ..., IC(f^{k+1})`.
    #[serde(serialize_with = "ser_vec")]
    pub values: Vec<IcValue>,
    pub holds: bool,
}

pub fn check_iteration(f: &SpaceMap, k: usize, budget: &Budget) -> Result<IterationReport, IcError> {
    assert!(k >= 1, "iteration depth must be positive");
    let mut values = Vec::with_capacity(k + 1);
    let mut iterate = f.clone();
    for j in 1..=k + 1 {
        if j > 1 {
            iterate = iterate.then(f)?;
        }
        values.push(value(&iterate, budget)?);
    }
    let base = values[0];
    let mut power = base;
    let mut holds = true;
    for j in 1..=k {
        power = power * base;
        holds &= values[j - 1] <= values[j] && values[j] <= power;
    }
    Ok(IterationReport { values, holds })
}
