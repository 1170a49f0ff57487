//! Exact minimum injective cover by branch and bound.

use std::collections::HashMap;
use std::time::Instant;

use crate::space::{PointSet, SpaceMap};

use super::candidates::{local_injectivity_witness, maximal_injective_opens};
use super::{greedy_indices, ic_lower_max_fiber, Budget, IcError, IcResult, IcValue, InjectiveCover};

/// Computes `IC(f)` exactly.
///
/// The greedy cover gives an upper bound; the lower bound is the largest of
/// the maximal fiber, a greedy packing of points no candidate covers
/// together, and a volume bound. Budgets `k` between the bounds are then
/// decided in increasing order. Once the optimum is known the
/// lexicographically least optimal cover (sets compared as sorted point
/// lists, covers as sorted lists of sets) is extracted position by position.
pub fn ic_exact(f: &SpaceMap, budget: &Budget) -> Result<IcResult, IcError> {
    if let Some(x) = local_injectivity_witness(f) {
        return Ok(IcResult {
            value: IcValue::Infinite,
            certificate: None,
            lower_bound_trace: vec![("max_fiber".into(), ic_lower_max_fiber(f))],
            nodes: 0,
            witness: Some(f.domain().label(x).to_string()),
            canonical: true,
        });
    }
    let candidates = maximal_injective_opens(f, budget.max_candidates)?;
    let n = f.domain().len();
    if n == 0 {
        return Ok(finish(f, candidates, vec![0], Vec::new(), 0, true));
    }

    let greedy = greedy_indices(f, &candidates);
    let upper = greedy.len();
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, c) in candidates.iter().enumerate() {
        for x in c.ones() {
            containing[x].push(i);
        }
    }
    let max_size = candidates.iter().map(|c| c.count_ones(..)).max().unwrap_or(1);
    let trace = vec![
        ("max_fiber".to_string(), ic_lower_max_fiber(f)),
        ("packing".to_string(), packing_bound(n, &candidates, &containing, &f.domain().full_set())),
        ("volume".to_string(), n.div_ceil(max_size)),
    ];
    let lower = trace.iter().map(|t| t.1).max().unwrap_or(1).min(upper);

    let mut search = Search {
        candidates: &candidates,
        containing: &containing,
        max_size,
        nodes: 0,
        budget: *budget,
        started: Instant::now(),
        failed: HashMap::new(),
    };

    let mut best = greedy;
    let mut k = lower;
    while k < upper {
        search.failed.clear();
        let mut chosen = Vec::new();
        match search.cover(&f.domain().full_set(), k, 0, &mut chosen) {
            Ok(true) => {
                best = chosen;
                break;
            }
            Ok(false) => k += 1,
            Err(Exhausted) => {
                return Err(IcError::BudgetExceeded { lower: k, upper });
            }
        }
    }
    let value = best.len();

    // Canonical certificate: smallest feasible first set, then second, ...
    let mut canon = Vec::with_capacity(value);
    let mut remaining = f.domain().full_set();
    let mut canonical = true;
    'pos: for pos in 0..value {
        let from = canon.last().map_or(0, |&i| i + 1);
        for (i, candidate) in candidates.iter().enumerate().skip(from) {
            let mut rest = remaining.clone();
            rest.difference_with(candidate);
            search.failed.clear();
            match search.cover(&rest, value - pos - 1, i + 1, &mut Vec::new()) {
                Ok(true) => {
                    canon.push(i);
                    remaining = rest;
                    continue 'pos;
                }
                Ok(false) => {}
                Err(Exhausted) => {
                    canonical = false;
                    break 'pos;
                }
            }
        }
        unreachable!("an optimal cover exists");
    }
    let chosen = if canonical {
        canon
    } else {
        let mut b = best;
        b.sort_unstable();
        b
    };
    let nodes = search.nodes;
    Ok(finish(f, candidates, chosen, trace, nodes, canonical))
}

fn finish(
    f: &SpaceMap,
    candidates: Vec<PointSet>,
    chosen: Vec<usize>,
    trace: Vec<(String, usize)>,
    nodes: u64,
    canonical: bool,
) -> IcResult {
    let value = chosen.len();
    let sets = chosen.into_iter().map(|i| candidates[i].clone()).collect();
    let cover = InjectiveCover::from_members(f, sets);
    cover.verify().expect("solver produced an invalid cover");
    IcResult {
        value: IcValue::Finite(value),
        certificate: Some(cover),
        lower_bound_trace: trace,
        nodes,
        witness: None,
        canonical,
    }
}

/// Greedily picks points of `within` that pairwise share no candidate; each
/// needs its own set.
fn packing_bound(n: usize, candidates: &[PointSet], containing: &[Vec<usize>], within: &PointSet) -> usize {
    let mut order: Vec<usize> = within.ones().collect();
    order.sort_by_key(|&x| (containing[x].len(), x));
    let mut blocked = PointSet::with_capacity(n);
    let mut count = 0;
    for x in order {
        if blocked.contains(x) {
            continue;
        }
        count += 1;
        for &i in &containing[x] {
            blocked.union_with(&candidates[i]);
        }
    }
    count
}

struct Exhausted;

struct Search<'a> {
    candidates: &'a [PointSet],
    containing: &'a [Vec<usize>],
    max_size: usize,
    nodes: u64,
    budget: Budget,
    started: Instant,
    /// Uncovered set and start index mapped to the largest `k` known to fail.
    failed: HashMap<(Vec<usize>, usize), usize>,
}

impl Search<'_> {
    /// Can `uncovered` be covered by `k` candidates with index `>= from`?
    fn cover(&mut self, uncovered: &PointSet, k: usize, from: usize, chosen: &mut Vec<usize>) -> Result<bool, Exhausted> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Exhausted);
        }
        if self.nodes.is_multiple_of(1024) {
            if let Some(limit) = self.budget.time_limit {
                if self.started.elapsed() > limit {
                    return Err(Exhausted);
                }
            }
        }
        let left = uncovered.count_ones(..);
        if left == 0 {
            return Ok(true);
        }
        if k == 0 || left.div_ceil(self.max_size) > k {
            return Ok(false);
        }
        let key = (uncovered.as_slice().to_vec(), from);
        if self.failed.get(&key).is_some_and(|&bad| bad >= k) {
            return Ok(false);
        }

        // Branch on the uncovered point with the fewest usable candidates.
        let mut pivot: Option<(usize, usize)> = None;
        for x in uncovered.ones() {
            let usable = self.containing[x].iter().filter(|&&i| i >= from).count();
            if usable == 0 {
                self.failed.insert(key, usize::MAX);
                return Ok(false);
            }
            if pivot.is_none_or(|(_, c)| usable < c) {
                pivot = Some((x, usable));
            }
        }
        let (x, _) = pivot.expect("nonempty");
        if k > 1 && packing_bound(uncovered.len(), self.candidates, self.containing, uncovered) > k {
            self.failed.insert(key, k);
            return Ok(false);
        }
        let options: Vec<usize> = self.containing[x].iter().copied().filter(|&i| i >= from).collect();
        for i in options {
            let mut rest = uncovered.clone();
            rest.difference_with(&self.candidates[i]);
            chosen.push(i);
            if self.cover(&rest, k - 1, from, chosen)? {
                return Ok(true);
            }
            chosen.pop();
        }
        let entry = self.failed.entry(key).or_insert(0);
        *entry = (*entry).max(k);
        Ok(false)
    }
}
