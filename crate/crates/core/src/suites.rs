//! Seeded verification suites. Each instance records its values; an instance
//! that breaks its inequality is also serialized in full so it can be rerun.

use std::sync::Arc;

use rand::Rng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::cohomology::cohomological_lower_bound;
use crate::complex::SimplicialMap;
use crate::equivariant::{antipodal_pair_search, random_cap_cover, EquivariantError, SearchConfig};
use crate::format::{map_to_json, simplicial_map_to_json};
use crate::ic::oracle::brute_force_ic;
use crate::ic::{check_composition, check_iteration, check_pullback, check_restriction, ic_exact, Budget, IcError, IcValue};
use crate::pl::{self, cover_from_multiplicity, finite_model, ic_by_multiplicity, self_intersections, verify_param_cover, PLCurve};
use crate::random::{instance_seed, random_instance, random_map, random_space, rng};
use crate::space::SpaceMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Composition,
    Pullback,
    Restriction,
    Iteration,
    Multiplicity,
    Cohomology,
    Lsb,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Composition => "composition",
            Suite::Pullback => "pullback",
            Suite::Restriction => "restriction",
            Suite::Iteration => "iteration",
            Suite::Multiplicity => "multiplicity",
            Suite::Cohomology => "cohomology",
            Suite::Lsb => "lsb",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub count: u64,
    pub seed: u64,
    pub budget: Budget,
    /// Sphere dimension for `lsb`.
    pub n: usize,
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("instance {index}: {source}")]
    Ic { index: u64, source: IcError },
    #[error("instance {index}: {source}")]
    Equivariant { index: u64, source: EquivariantError },
    #[error("{0}")]
    Pl(#[from] pl::PlError),
    #[error("lsb is only set up for n = 1 and n = 2, got {0}")]
    BadDimension(usize),
}

impl SuiteError {
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            SuiteError::Ic { source: IcError::BudgetExceeded { .. } | IcError::CandidateExplosion(_), .. }
                | SuiteError::Equivariant { source: EquivariantError::Ic(IcError::BudgetExceeded { .. }), .. }
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub count: usize,
    pub instances: Vec<Value>,
    pub violations: Vec<Value>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

struct Collector {
    instances: Vec<Value>,
    violations: Vec<Value>,
}

impl Collector {
    fn push(&mut self, mut entry: Value, holds: bool, counterexample: impl FnOnce() -> Value) {
        entry["holds"] = Value::from(holds);
        if !holds {
            let mut v = entry.clone();
            v["counterexample"] = counterexample();
            self.violations.push(v);
        }
        self.instances.push(entry);
    }
}

fn nonempty_subset(r: &mut impl Rng, f: &SpaceMap) -> crate::space::PointSet {
    let mut a = f.codomain().empty_set();
    while a.count_ones(..) == 0 {
        for y in 0..f.codomain().len() {
            a.set(y, r.gen_bool(0.5));
        }
    }
    a
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteReport, SuiteError> {
    let mut c = Collector {
        instances: Vec::new(),
        violations: Vec::new(),
    };
    match suite {
        Suite::Composition | Suite::Pullback | Suite::Restriction | Suite::Iteration => {
            for i in 0..cfg.count {
                random_inequality(suite, cfg, i, &mut c).map_err(|source| SuiteError::Ic { index: i, source })?;
            }
        }
        Suite::Multiplicity => multiplicity(cfg, &mut c)?,
        Suite::Cohomology => cohomology(cfg, &mut c)?,
        Suite::Lsb => lsb(cfg, &mut c)?,
    }
    Ok(SuiteReport {
        suite,
        seed: cfg.seed,
        count: c.instances.len(),
        instances: c.instances,
        violations: c.violations,
    })
}

fn random_inequality(suite: Suite, cfg: &SuiteConfig, i: u64, c: &mut Collector) -> Result<(), IcError> {
    let seed = instance_seed(cfg.seed, i);
    let mut r = rng(seed);
    let f = random_instance(&mut r, 8, 6);
    let b = &cfg.budget;
    let head = json!({ "index": i, "instance_seed": seed });
    let with = |report: Value| {
        let mut v = head.clone();
        v["report"] = report;
        v
    };
    match suite {
        Suite::Composition => {
            let size = r.gen_range(1..=5);
            let p = Arc::new(random_space(&mut r, size, 0.3, "z"));
            let g = random_map(&mut r, Arc::clone(f.codomain()), p);
            let rep = check_composition(&f, &g, b)?;
            c.push(with(json!(rep)), rep.holds(), || json!({ "f": map_to_json(&f), "g": map_to_json(&g) }));
        }
        Suite::Pullback => {
            let size = r.gen_range(1..=6);
            let x = Arc::new(random_space(&mut r, size, 0.3, "u"));
            let psi = random_map(&mut r, x, Arc::clone(f.codomain()));
            let rep = check_pullback(&f, &psi, b)?;
            c.push(with(json!(rep)), rep.holds, || json!({ "f": map_to_json(&f), "psi": map_to_json(&psi) }));
        }
        Suite::Restriction => {
            let a = nonempty_subset(&mut r, &f);
            let rep = check_restriction(&f, &a, b)?;
            let subset = rep.subset.clone();
            c.push(with(json!(rep)), rep.holds, || json!({ "f": map_to_json(&f), "subset": subset }));
        }
        Suite::Iteration => {
            let m = Arc::clone(f.domain());
            let e = random_map(&mut r, Arc::clone(&m), m);
            let rep = check_iteration(&e, 2, b)?;
            c.push(with(json!(rep)), rep.holds, || json!({ "f": map_to_json(&e), "k": 2 }));
        }
        _ => unreachable!("not a random inequality suite"),
    }
    Ok(())
}

/// The multiplicity formula against the solver on the curve's finite model,
/// plus verification of the cover it produces.
fn multiplicity(cfg: &SuiteConfig, c: &mut Collector) -> Result<(), SuiteError> {
    let mut curves: Vec<(String, PLCurve)> = vec![("bowtie".into(), pl::fixtures::bowtie())];
    for k in 3..=5 {
        curves.push((format!("rose{k}"), pl::fixtures::rose(k)));
    }
    curves.push(("convex8".into(), pl::fixtures::convex(8)));
    for (index, (name, curve)) in curves.into_iter().enumerate() {
        let report = self_intersections(&curve)?;
        let formula = ic_by_multiplicity(&report);
        let model = finite_model(&curve, &report)?;
        let solved = ic_exact(&model, &cfg.budget).map_err(|source| SuiteError::Ic {
            index: index as u64,
            source,
        })?;
        let cover = cover_from_multiplicity(&curve, &report)?;
        let cover_ok = verify_param_cover(&curve, &report, &cover);
        let holds = formula == solved.value && cover_ok.is_ok() && formula == IcValue::Finite(cover.sets.len());
        let entry = json!({
            "index": index,
            "curve": name,
            "formula": formula.to_json(),
            "model_ic": solved.value.to_json(),
            "model_points": model.domain().len(),
            "cover_sets": cover.sets.len(),
            "cover_verified": cover_ok.is_ok(),
        });
        c.push(entry, holds, || json!({ "curve": curve.to_json(), "cover_error": cover_ok.err() }));
    }
    Ok(())
}

/// The nil lower bound against `IC` of each fixture's face-poset model, solved
/// exactly. Maps whose hypotheses fail are listed but never count as
/// violations.
fn cohomology(cfg: &SuiteConfig, c: &mut Collector) -> Result<(), SuiteError> {
    let cases: Vec<(&str, SimplicialMap, bool)> = vec![
        ("hexagon_quotient", crate::fixtures::hexagon_quotient_simplicial(), true),
        ("icosahedron_quotient", crate::fixtures::icosahedron_quotient(), true),
        ("rp2_identity", SimplicialMap::identity(Arc::new(crate::fixtures::rp2_minimal())), true),
        ("arc_inclusion", crate::fixtures::arc_inclusion(), false),
    ];
    for (index, (name, f, surjective)) in cases.into_iter().enumerate() {
        let lb = cohomological_lower_bound(&f, surjective);
        let ic = ic_exact(&f.face_poset_map(), &cfg.budget)
            .map_err(|source| SuiteError::Ic {
                index: index as u64,
                source,
            })?
            .value;
        let holds = !lb.valid || IcValue::Finite(lb.nil.value) <= ic;
        let entry = json!({
            "index": index,
            "map": name,
            "nil": lb.nil.to_json(),
            "tag": lb.tag(),
            "notes": lb.notes,
            "model_ic": ic.to_json(),
        });
        c.push(entry, holds, || json!(simplicial_map_to_json(&f)));
    }
    Ok(())
}

/// Random `n + 1`-set covers of `S^n` must contain an antipodal pair.
fn lsb(cfg: &SuiteConfig, c: &mut Collector) -> Result<(), SuiteError> {
    let level = match cfg.n {
        1 => 8,
        2 => 12,
        n => return Err(SuiteError::BadDimension(n)),
    };
    for i in 0..cfg.count {
        let seed = instance_seed(cfg.seed, i);
        let cover = random_cap_cover(&mut rng(seed), cfg.n, cfg.n + 1, level);
        let found = antipodal_pair_search(&cover, &SearchConfig::default());
        let mut entry = json!({ "index": i, "instance_seed": seed });
        match &found {
            Ok(pair) => entry["pair"] = json!(pair),
            Err(EquivariantError::RefinementBudgetExceeded { levels }) => entry["levels"] = json!(levels),
            Err(e) => {
                return Err(SuiteError::Equivariant {
                    index: i,
                    source: e.clone(),
                })
            }
        }
        c.push(entry, found.is_ok(), || json!(cover));
    }
    Ok(())
}

/// `ic_exact` against the exhaustive oracle on one map of at most 20 points.
pub fn oracle_agreement(f: &SpaceMap, budget: &Budget) -> Result<(IcValue, Option<IcValue>), IcError> {
    Ok((ic_exact(f, budget)?.value, brute_force_ic(f)))
}
