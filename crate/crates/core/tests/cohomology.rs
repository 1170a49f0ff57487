use std::sync::Arc;

use injcat::cohomology::linalg::zeros;
use injcat::cohomology::{
    cohomological_lower_bound, cohomology, induced_map, nil_kernel, pullback_cochain, CohomologyClass, CohomologyRing,
};
use injcat::complex::{SimplicialComplex, SimplicialMap};
use injcat::fixtures::{arc_inclusion, hexagon_quotient_simplicial, icosahedron, icosahedron_quotient, rp2_minimal, triangle};
use injcat::ic::{ic_exact, Budget, IcValue};
use injcat::random::{instance_seed, rng};
use proptest::prelude::*;
use rand::Rng;

/// Seven-vertex torus.
fn torus() -> SimplicialComplex {
    let names: Vec<String> = (0..7).map(|i| format!("t{i}")).collect();
    let mut facets = Vec::new();
    for i in 0..7 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    SimplicialComplex::from_indices(names, facets).unwrap()
}

/// Rank over ℤ/2 of a dense 0/1 matrix, by plain row reduction.
fn dense_rank(mut m: Vec<Vec<u8>>) -> usize {
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] == 1) else { continue };
        m.swap(r, p);
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] == 1 {
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x ^= p;
                }
            }
        }
        r += 1;
    }
    r
}

/// Betti numbers from ranks of dense coboundary matrices built from scratch.
fn betti_by_ranks(k: &SimplicialComplex) -> Vec<usize> {
    let top = k.dim().unwrap();
    let rank: Vec<usize> = (0..top)
        .map(|d| {
            let m = k
                .simplices(d + 1)
                .iter()
                .map(|s| k.simplices(d).iter().map(|f| u8::from(f.iter().all(|v| s.contains(v)))).collect())
                .collect();
            dense_rank(m)
        })
        .collect();
    (0..=top)
        .map(|d| k.count(d) - rank.get(d).copied().unwrap_or(0) - if d > 0 { rank[d - 1] } else { 0 })
        .collect()
}

#[test]
fn dimensions() {
    assert_eq!(cohomology(Arc::new(triangle())).dims(), vec![1, 1]);
    let rp2 = rp2_minimal();
    assert_eq!((rp2.count(0), rp2.count(1), rp2.count(2)), (6, 15, 10));
    assert!(rp2.is_closed_pseudomanifold());
    assert_eq!(cohomology(Arc::new(rp2)).dims(), vec![1, 1, 1]);
    assert_eq!(cohomology(Arc::new(SimplicialComplex::new(["v"], [["v"]]).unwrap())).dims(), vec![1]);
    assert_eq!(cohomology(Arc::new(icosahedron())).dims(), vec![1, 0, 1]);
    assert_eq!(cohomology(Arc::new(torus())).dims(), vec![1, 2, 1]);
    for k in [triangle(), rp2_minimal(), icosahedron(), torus()] {
        assert_eq!(cohomology(Arc::new(k.clone())).dims(), betti_by_ranks(&k));
    }
}

#[test]
fn icosahedron_quotient_is_two_to_one() {
    let q = icosahedron_quotient();
    assert_eq!(icosahedron().count(2), 20);
    assert!(q.is_surjective());
    let cod = q.codomain();
    for d in 0..=2 {
        let mut hits = vec![0; cod.count(d)];
        for s in q.domain().simplices(d) {
            let img = q.image_simplex(s);
            assert_eq!(img.len(), d + 1);
            hits[cod.index_in_dim(&img).unwrap()] += 1;
        }
        assert!(hits.iter().all(|&h| h == 2));
    }
}

#[test]
fn rp2_cup_square() {
    let ring = cohomology(Arc::new(rp2_minimal()));
    let u = ring.generator(1, 0);
    let u2 = ring.cup(&u, &u).unwrap();
    assert_eq!(u2, ring.generator(2, 0));
    assert!(ring.cup(&u2, &u).unwrap().is_zero());
    assert_eq!(ring.cup(&ring.unit(), &u).unwrap(), u);
    assert_eq!(ring.cup(&u, &ring.unit()).unwrap(), u);
    // Oracle: u² evaluated on the fundamental cycle (all triangles) is 1.
    let rep = ring.representative(&u);
    let sq = ring.cup_cochains(1, &rep, 1, &rep);
    assert_eq!(sq.count_ones(..) % 2, 1);
}

#[test]
fn torus_products() {
    let ring = cohomology(Arc::new(torus()));
    let (a, b) = (ring.generator(1, 0), ring.generator(1, 1));
    assert!(ring.cup(&a, &a).unwrap().is_zero());
    assert!(ring.cup(&b, &b).unwrap().is_zero());
    let ab = ring.cup(&a, &b).unwrap();
    assert!(!ab.is_zero());
    assert_eq!(ab, ring.cup(&b, &a).unwrap());
}

fn classes(ring: &CohomologyRing, d: usize) -> Vec<CohomologyClass> {
    (0u32..1 << ring.dim(d))
        .map(|mask| {
            (0..ring.dim(d))
                .filter(|i| mask >> i & 1 == 1)
                .fold(ring.zero(d), |acc, i| acc.add(&ring.generator(d, i)).unwrap())
        })
        .collect()
}

#[test]
fn cup_is_commutative_and_associative() {
    for k in [rp2_minimal(), torus(), triangle(), icosahedron()] {
        let ring = cohomology(Arc::new(k));
        let all: Vec<CohomologyClass> = (0..=ring.top()).flat_map(|d| classes(&ring, d)).collect();
        for a in &all {
            for b in &all {
                assert_eq!(ring.cup(a, b).unwrap(), ring.cup(b, a).unwrap());
                for c in &all {
                    let left = ring.cup(&ring.cup(a, b).unwrap(), c).unwrap();
                    let right = ring.cup(a, &ring.cup(b, c).unwrap()).unwrap();
                    assert_eq!(left, right);
                }
            }
        }
    }
}

/// Parity of `f^# φ` on the sum of all top simplices of the domain.
fn pairing_with_fundamental(f: &SimplicialMap, ring: &CohomologyRing, c: &CohomologyClass) -> usize {
    let phi = pullback_cochain(f, c.degree(), &ring.representative(c));
    phi.count_ones(..) % 2
}

#[test]
fn induced_maps() {
    let id = SimplicialMap::identity(Arc::new(rp2_minimal()));
    let ring = cohomology(Arc::clone(id.domain()));
    let fstar = induced_map(&id, &ring, &ring).unwrap();
    for d in 0..=2 {
        assert_eq!(fstar.matrix(d, ring.dim(d)), vec![vec![1u8]]);
    }

    let h = hexagon_quotient_simplicial();
    let (m, n) = (cohomology(Arc::clone(h.domain())), cohomology(Arc::clone(h.codomain())));
    let hstar = induced_map(&h, &n, &m).unwrap();
    assert!(hstar.is_zero(1));
    assert!(!hstar.is_zero(0));
    assert_eq!(pairing_with_fundamental(&h, &n, &n.generator(1, 0)), 0);

    let q = icosahedron_quotient();
    let (m, n) = (cohomology(Arc::clone(q.domain())), cohomology(Arc::clone(q.codomain())));
    let qstar = induced_map(&q, &n, &m).unwrap();
    assert!(qstar.is_zero(1) && qstar.is_zero(2));
    assert_eq!(pairing_with_fundamental(&q, &n, &n.generator(2, 0)), 0);
    // The fundamental class of RP^2 itself pairs to 1 with its generator.
    let top = n.representative(&n.generator(2, 0));
    assert_eq!(top.count_ones(..) % 2, 1);
}

fn rotation(k: &Arc<SimplicialComplex>, shift: usize) -> SimplicialMap {
    let n = k.vertex_count();
    SimplicialMap::new(Arc::clone(k), Arc::clone(k), (0..n).map(|v| (v + shift) % n).collect()).unwrap()
}

#[test]
fn induced_maps_are_functorial_ring_maps() {
    let h = hexagon_quotient_simplicial();
    let tri = Arc::clone(h.codomain());
    let hex = Arc::clone(h.domain());
    let q = icosahedron_quotient();
    let cases: Vec<(SimplicialMap, SimplicialMap)> = vec![
        (h.clone(), rotation(&tri, 1)),
        (rotation(&hex, 2), h.clone()),
        (q.clone(), SimplicialMap::identity(Arc::clone(q.codomain()))),
        (SimplicialMap::identity(Arc::clone(q.domain())), q.clone()),
    ];
    for (f, g) in cases {
        let gf = f.then(&g).unwrap();
        let rm = cohomology(Arc::clone(f.domain()));
        let rn = cohomology(Arc::clone(f.codomain()));
        let rp = cohomology(Arc::clone(g.codomain()));
        let fs = induced_map(&f, &rn, &rm).unwrap();
        let gs = induced_map(&g, &rp, &rn).unwrap();
        let gfs = induced_map(&gf, &rp, &rm).unwrap();
        for d in 0..=rp.top() {
            for c in classes(&rp, d) {
                let two_steps = fs.apply(&gs.apply(&c, &rn).unwrap(), &rm).unwrap();
                assert_eq!(gfs.apply(&c, &rm).unwrap(), two_steps);
            }
        }
        for a in (0..=rn.top()).flat_map(|d| classes(&rn, d)) {
            for b in (0..=rn.top()).flat_map(|d| classes(&rn, d)) {
                let lhs = fs.apply(&rn.cup(&a, &b).unwrap(), &rm).unwrap();
                let rhs = rm.cup(&fs.apply(&a, &rm).unwrap(), &fs.apply(&b, &rm).unwrap()).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn nil_indices() {
    let id = SimplicialMap::identity(Arc::new(rp2_minimal()));
    let ring = cohomology(Arc::clone(id.domain()));
    let nil = nil_kernel(&induced_map(&id, &ring, &ring).unwrap(), &ring);
    assert_eq!(nil.value, 1);
    assert!(nil.witness.is_empty());

    let h = hexagon_quotient_simplicial();
    let (m, n) = (cohomology(Arc::clone(h.domain())), cohomology(Arc::clone(h.codomain())));
    let nil = nil_kernel(&induced_map(&h, &n, &m).unwrap(), &n);
    assert_eq!(nil.value, 2);
    assert_eq!(nil.witness, vec![n.generator(1, 0)]);

    let q = icosahedron_quotient();
    let (m, n) = (cohomology(Arc::clone(q.domain())), cohomology(Arc::clone(q.codomain())));
    let nil = nil_kernel(&induced_map(&q, &n, &m).unwrap(), &n);
    assert_eq!(nil.value, 3);
    let u = n.generator(1, 0);
    assert_eq!(nil.witness, vec![u.clone(), u.clone()]);
    assert_eq!(nil.kernel[0], vec![u.clone()]);
    assert_eq!(nil.kernel[1], vec![n.generator(2, 0)]);
    // Every product of three kernel elements vanishes: u³ and u·v have degree 3.
    assert!(n.cup(&n.cup(&u, &u).unwrap(), &u).unwrap().is_zero());
}

#[test]
fn lower_bounds() {
    let h = hexagon_quotient_simplicial();
    let b = cohomological_lower_bound(&h, true);
    assert!(b.valid, "{:?}", b.notes);
    let ic = ic_exact(&h.face_poset_map(), &Budget::default()).unwrap().value;
    assert_eq!(ic, IcValue::Finite(3));
    assert!(IcValue::Finite(b.nil.value) <= ic);

    let b = cohomological_lower_bound(&icosahedron_quotient(), true);
    assert!(b.valid);
    assert_eq!(b.nil.value, 3);
    // Geometric value for RP^2, n + 2 with n = 2.
    assert!(b.nil.value <= 4);

    let j = arc_inclusion();
    let b = cohomological_lower_bound(&j, true);
    assert!(!b.valid);
    assert_eq!(b.tag(), "heuristic");
    assert_eq!(b.nil.value, 2);
    assert_eq!(ic_exact(&j.face_poset_map(), &Budget::default()).unwrap().value, IcValue::Finite(1));
}

#[test]
fn betti_numbers_survive_subdivision() {
    for k in [triangle(), rp2_minimal(), torus(), icosahedron()] {
        let before = cohomology(Arc::new(k.clone())).dims();
        assert_eq!(cohomology(Arc::new(k.barycentric_subdivision())).dims(), before);
    }
}

fn random_complex(seed: u64) -> SimplicialComplex {
    let mut r = rng(seed);
    let n = r.gen_range(1..=8);
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let facets = (0..r.gen_range(1..=10))
        .map(|_| {
            let size = r.gen_range(1..=4.min(n));
            let mut s: Vec<usize> = (0..size).map(|_| r.gen_range(0..n)).collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();
    SimplicialComplex::from_indices(names, facets).unwrap()
}

#[test]
fn random_complexes() {
    for i in 0..200u64 {
        let k = random_complex(instance_seed(21, i));
        let ring = cohomology(Arc::new(k.clone()));
        let cc = ring.cochains();
        for d in 0..ring.top().saturating_sub(1) {
            for j in 0..cc.count(d) {
                let mut e = zeros(cc.count(d));
                e.insert(j);
                assert!(cc.delta(d + 1, &cc.delta(d, &e)).is_clear());
            }
        }
        assert_eq!(ring.dims(), betti_by_ranks(&k));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subdivision_keeps_betti_numbers(seed in any::<u64>()) {
        let k = random_complex(seed);
        let before = cohomology(Arc::new(k.clone())).dims();
        prop_assert_eq!(cohomology(Arc::new(k.barycentric_subdivision())).dims(), before);
    }
}
