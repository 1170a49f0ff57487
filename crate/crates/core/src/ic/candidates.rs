//! Enumeration of inclusion-maximal injective open sets.

use std::cmp::Ordering;

use crate::space::{PointSet, SpaceMap};

use super::IcError;

/// First point `x` whose minimal open set is not mapped injectively.
pub fn local_injectivity_witness(f: &SpaceMap) -> Option<usize> {
    let space = f.domain();
    (0..space.len()).find(|&x| !f.is_injective_on(space.down(x)))
}

pub fn is_locally_injective(f: &SpaceMap) -> bool {
    local_injectivity_witness(f).is_none()
}

/// Lexicographic order on sorted member lists.
pub fn set_order(a: &PointSet, b: &PointSet) -> Ordering {
    a.ones().cmp(b.ones())
}

/// All maximal open sets on which `f` is injective, sorted by [`set_order`].
///
/// Points are decided in a linear extension of the preorder. Including `x`
/// pulls in its down-set and forbids the up-sets of the fiber-mates of every
/// new member; excluding `x` forbids its up-set. An exclusion is only explored
/// when some still-undecided point could later block `x`, otherwise the
/// resulting set could not be maximal.
pub fn maximal_injective_opens(f: &SpaceMap, cap: usize) -> Result<Vec<PointSet>, IcError> {
    if let Some(x) = local_injectivity_witness(f) {
        return Err(IcError::NotLocallyInjective {
            witness: f.domain().label(x).to_string(),
        });
    }
    let space = f.domain();
    let n = space.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (space.down(x).count_ones(..), x));

    let mut fibers: Vec<PointSet> = vec![PointSet::with_capacity(n); f.codomain().len()];
    for x in 0..n {
        fibers[f.apply(x)].insert(x);
    }
    let mates: Vec<PointSet> = (0..n)
        .map(|x| {
            let mut m = fibers[f.apply(x)].clone();
            m.set(x, false);
            m
        })
        .collect();

    let mut search = Enumerator {
        f,
        order,
        mates,
        cap,
        out: Vec::new(),
    };
    search.run(0, space.empty_set(), space.empty_set())?;
    let mut out = search.out;
    out.sort_by(set_order);
    Ok(out)
}

struct Enumerator<'a> {
    f: &'a SpaceMap,
    order: Vec<usize>,
    mates: Vec<PointSet>,
    cap: usize,
    out: Vec<PointSet>,
}

impl Enumerator<'_> {
    fn run(&mut self, depth: usize, inc: PointSet, exc: PointSet) -> Result<(), IcError> {
        let space = self.f.domain();
        let Some(&x) = self.order[depth..]
            .iter()
            .find(|&&x| !inc.contains(x) && !exc.contains(x))
        else {
            if self.is_maximal(&inc) {
                if self.out.len() == self.cap {
                    return Err(IcError::CandidateExplosion(self.cap));
                }
                self.out.push(inc);
            }
            return Ok(());
        };
        let depth = depth + 1;
        let fresh: Vec<usize> = space.down(x).difference(&inc).collect();
        let includable = fresh.iter().all(|&z| !exc.contains(z) && self.mates[z].is_disjoint(&inc));
        let mut decided = inc.clone();
        decided.union_with(&exc);

        if includable {
            let mut inc2 = inc.clone();
            let mut exc2 = exc.clone();
            for &z in &fresh {
                inc2.insert(z);
                for w in self.mates[z].ones() {
                    exc2.union_with(space.up(w));
                }
            }
            self.run(depth, inc2, exc2)?;
        }

        let can_be_blocked = !includable
            || fresh
                .iter()
                .any(|&z| self.mates[z].difference(&decided).next().is_some());
        if can_be_blocked {
            let mut exc2 = exc;
            exc2.union_with(space.up(x));
            self.run(depth, inc, exc2)?;
        }
        Ok(())
    }

    fn is_maximal(&self, u: &PointSet) -> bool {
        let space = self.f.domain();
        (0..space.len()).filter(|&x| !u.contains(x)).all(|x| {
            space
                .down(x)
                .difference(u)
                .any(|z| !self.mates[z].is_disjoint(u))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::FiniteSpace;
    use std::sync::Arc;

    #[test]
    fn identity_has_one_maximal_set() {
        let s = Arc::new(FiniteSpace::new(["a", "b", "c"], [("a", "b")]).unwrap());
        let sets = maximal_injective_opens(&SpaceMap::identity(Arc::clone(&s)), 10).unwrap();
        assert_eq!(sets, vec![s.full_set()]);
    }

    #[test]
    fn two_points_to_one() {
        let d = Arc::new(FiniteSpace::discrete(["p", "q"]).unwrap());
        let f = SpaceMap::constant(d, Arc::new(FiniteSpace::point()), 0);
        let sets = maximal_injective_opens(&f, 10).unwrap();
        let members: Vec<Vec<usize>> = sets.iter().map(|s| s.ones().collect()).collect();
        assert_eq!(members, vec![vec![0], vec![1]]);
    }

    #[test]
    fn cap_is_enforced() {
        let d = Arc::new(FiniteSpace::discrete(["p", "q", "r"]).unwrap());
        let f = SpaceMap::constant(d, Arc::new(FiniteSpace::point()), 0);
        assert_eq!(maximal_injective_opens(&f, 2), Err(IcError::CandidateExplosion(2)));
    }

    #[test]
    fn sierpinski_collapse_is_not_locally_injective() {
        let s = Arc::new(FiniteSpace::sierpinski());
        let f = SpaceMap::constant(s, Arc::new(FiniteSpace::point()), 0);
        assert_eq!(local_injectivity_witness(&f), Some(1));
    }
}
