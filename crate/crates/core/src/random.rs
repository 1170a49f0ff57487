//! Seeded random finite spaces and continuous maps.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::space::{FiniteSpace, SpaceMap};

pub type InstanceRng = ChaCha8Rng;

/// Seed of the `index`-th instance of a suite run with `seed`.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random preorder on `n` points labelled `prefix0..`: edges of a random DAG
/// along a shuffled order with probability `density`, an occasional back edge
/// to create non-T0 classes, then transitive closure.
pub fn random_space(rng: &mut impl Rng, n: usize, density: f64, prefix: &str) -> FiniteSpace {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                pairs.push((order[i], order[j]));
                if rng.gen_bool(0.05) {
                    pairs.push((order[j], order[i]));
                }
            }
        }
    }
    let labels = (0..n).map(|i| format!("{prefix}{i}")).collect();
    FiniteSpace::from_pairs(labels, &pairs).expect("labels are distinct")
}

/// Random continuous map. Points are visited in a linear extension and each
/// image is drawn uniformly from the values compatible with earlier choices;
/// the draw restarts when some point has no compatible value.
pub fn random_map(rng: &mut impl Rng, domain: Arc<FiniteSpace>, codomain: Arc<FiniteSpace>) -> SpaceMap {
    assert!(!codomain.is_empty() || domain.is_empty(), "empty codomain");
    let n = domain.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (domain.down(x).count_ones(..), x));
    'retry: loop {
        let mut assignment = vec![usize::MAX; n];
        for &x in &order {
            let options: Vec<usize> = (0..codomain.len())
                .filter(|&y| {
                    (0..n).all(|z| {
                        let fz = assignment[z];
                        fz == usize::MAX
                            || (!domain.leq(z, x) || codomain.leq(fz, y)) && (!domain.leq(x, z) || codomain.leq(y, fz))
                    })
                })
                .collect();
            match options.choose(rng) {
                Some(&y) => assignment[x] = y,
                None => continue 'retry,
            }
        }
        return SpaceMap::new(domain, codomain, assignment).expect("sampled map is order preserving");
    }
}

/// Random map between fresh random spaces of the given sizes.
pub fn random_instance(rng: &mut impl Rng, max_domain: usize, max_codomain: usize) -> SpaceMap {
    let n = rng.gen_range(1..=max_domain);
    let m = rng.gen_range(1..=max_codomain);
    let (pd, pc) = (rng.gen_range(0.0..0.5), rng.gen_range(0.0..0.5));
    let dom = Arc::new(random_space(rng, n, pd, "x"));
    let cod = Arc::new(random_space(rng, m, pc, "y"));
    random_map(rng, dom, cod)
}

/// Random map conditioned on local injectivity by rejection, giving up after
/// `attempts` draws.
pub fn random_locally_injective(rng: &mut impl Rng, max_domain: usize, max_codomain: usize, attempts: usize) -> Option<SpaceMap> {
    (0..attempts)
        .map(|_| random_instance(rng, max_domain, max_codomain))
        .find(crate::ic::is_locally_injective)
}
