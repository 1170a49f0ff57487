use std::f64::consts::PI;
use std::sync::Arc;

use injcat::equivariant::{
    antipodal_pair_search, coincidence_set, cross_polytope_sphere, distance_function_map, facet_projection_cover,
    hexagon_sphere, ic_quotient_sphere, lattice_sphere, quotient_map, random_cap_cover, random_free_action,
    regular_simplex, CoverSet, EquivariantError, GeometricCover, Group, Metric, Region, SearchConfig,
};
use injcat::ic::oracle::brute_force_ic;
use injcat::ic::{ic_exact, ic_lower_max_fiber, verify_cover, Budget, IcValue};
use injcat::random::{instance_seed, rng};
use injcat::space::{FiniteSpace, PointSet};
use rand::Rng;

/// Recorded once from the exact solver: every injective open of the
/// octahedron's face poset holds at most one triangle, and the eight
/// triangle closures form a cover.
const OCTAHEDRON_MODEL_IC: usize = 8;

fn deg(d: f64) -> f64 {
    d * PI / 180.0
}

fn unit(theta: f64) -> Vec<f64> {
    vec![theta.cos(), theta.sin()]
}

fn arc(from: f64, to: f64) -> Region {
    let mid = deg((from + to) / 2.0);
    Region::Cap {
        center: unit(mid),
        radius: deg((to - from) / 2.0),
    }
}

#[test]
fn hexagon_quotient_is_the_triangle() {
    let s = hexagon_sphere();
    let q = s.quotient();
    assert_eq!(q.action.space().len(), 12);
    assert_eq!(q.quotient.len(), 6);
    for y in 0..6 {
        assert_eq!(q.map.fiber(y).count_ones(..), 2);
    }
    // Three vertex orbits below three edge orbits, each edge over two vertices.
    let edges: Vec<usize> = (0..6).filter(|&y| q.quotient.down(y).count_ones(..) == 3).collect();
    assert_eq!(edges.len(), 3);
}

#[test]
fn octahedron_quotient_has_thirteen_orbits() {
    let s = cross_polytope_sphere(2).unwrap();
    let q = s.quotient();
    assert_eq!(q.action.space().len(), 26);
    assert_eq!(q.quotient.len(), 13);
    assert_eq!(s.complex.euler_characteristic(), 2);
    // The quotient face poset has the counts of RP^2: 3 vertices, 6 edges, 4 triangles.
    let mut by_size = [0; 3];
    for y in 0..13 {
        by_size[[1, 3, 7].iter().position(|&c| c == q.quotient.down(y).count_ones(..)).unwrap()] += 1;
    }
    assert_eq!(by_size, [3, 6, 4]);
}

#[test]
fn sphere_quotients_small_n() {
    let b = Budget::default();
    for (n, expected) in [(0usize, 2usize), (1, 3)] {
        let r = ic_quotient_sphere(n, &b).unwrap();
        assert_eq!(r.result.value, IcValue::Finite(expected), "n = {n}");
        assert!(r.agrees());
        let q = injcat::equivariant::sphere_model(n).unwrap().quotient();
        assert_eq!(brute_force_ic(&q.map), Some(IcValue::Finite(expected)));
        r.result.certificate.as_ref().unwrap().verify().unwrap();
    }
}

fn has_antipodal_cells(q: &injcat::equivariant::QuotientMapModel, s: &PointSet) -> bool {
    q.orbits.iter().any(|o| o.iter().all(|&x| s.contains(x)))
}

#[test]
fn octahedron_model_value() {
    let r = ic_quotient_sphere(2, &Budget::default()).unwrap();
    assert_eq!(r.result.value, IcValue::Finite(OCTAHEDRON_MODEL_IC));
    assert!(!r.agrees());
    r.result.certificate.as_ref().unwrap().verify().unwrap();

    // Independent lower bound: no injective open holds two triangles.
    let s = cross_polytope_sphere(2).unwrap();
    let q = s.quotient();
    let space = q.action.space();
    let triangles: Vec<usize> = (0..space.len()).filter(|&x| space.down(x).count_ones(..) == 7).collect();
    assert_eq!(triangles.len(), 8);
    for (i, &a) in triangles.iter().enumerate() {
        assert!(!has_antipodal_cells(&q, space.down(a)));
        for &b in &triangles[..i] {
            let mut u = space.down(a).clone();
            u.union_with(space.down(b));
            assert!(has_antipodal_cells(&q, &u));
        }
    }
    // Independent upper bound: the eight closed triangles.
    let sets: Vec<&PointSet> = triangles.iter().map(|&t| space.down(t)).collect();
    verify_cover(&q.map, &sets).unwrap();
}

/// Orbit-space preorder recomputed from the quotient topology: `U` is open
/// iff its preimage is, and `[x] <= [y]` iff every open containing `[y]`
/// contains `[x]`.
fn quotient_order_by_topology(space: &FiniteSpace, orbit_of: &[usize], k: usize) -> Vec<Vec<bool>> {
    let mut opens = Vec::new();
    for mask in 0u32..(1 << k) {
        let mut pre = space.empty_set();
        for (x, &o) in orbit_of.iter().enumerate() {
            if mask >> o & 1 == 1 {
                pre.insert(x);
            }
        }
        if space.is_open_set(&pre) {
            opens.push(mask);
        }
    }
    (0..k)
        .map(|a| (0..k).map(|b| opens.iter().all(|&m| m >> b & 1 == 0 || m >> a & 1 == 1)).collect())
        .collect()
}

#[test]
fn quotient_preorder_matches_quotient_topology() {
    for i in 0..150u64 {
        let mut r = rng(instance_seed(11, i));
        let group = Group::cyclic(r.gen_range(2..=3));
        let m = r.gen_range(1..=10 / group.order());
        let density = r.gen_range(0.05..0.4);
        let q = quotient_map(random_free_action(&mut r, group.clone(), m, density));
        let space = q.action.space();
        let k = q.quotient.len();
        assert_eq!(k, m);
        let by_topology = quotient_order_by_topology(space, q.map.assignment(), k);
        for (a, row) in by_topology.iter().enumerate() {
            for (b, &leq) in row.iter().enumerate() {
                assert_eq!(q.quotient.leq(a, b), leq, "instance {i}");
            }
        }
        for y in 0..k {
            assert_eq!(q.map.fiber(y).count_ones(..), group.order());
        }
        assert_eq!(ic_lower_max_fiber(&q.map), group.order());
        let v = ic_exact(&q.map, &Budget::default()).unwrap().value;
        assert!(v >= IcValue::Finite(group.order()));
        assert_eq!(brute_force_ic(&q.map), Some(v));
    }
}

#[test]
fn facet_covers() {
    for n in 1..=3 {
        let r = facet_projection_cover(n, 0.2).unwrap();
        assert_eq!(r.cover.sets.len(), n + 2);
        assert!(r.cover.open);
    }
    let r = facet_projection_cover(1, deg(29.0)).unwrap();
    assert_eq!(r.cover.sets.len(), 3);
    let err = facet_projection_cover(1, deg(35.0)).unwrap_err();
    assert!(matches!(err, EquivariantError::ThickeningTooLarge { .. }));
    assert!(matches!(facet_projection_cover(4, 0.1), Err(EquivariantError::DimensionOutOfRange(4))));
}

#[test]
fn circle_facets_are_arcs() {
    // On the circle each thickened facet is an open arc of 120° + 2δ centred
    // opposite a simplex vertex.
    let delta = deg(20.0);
    let r = facet_projection_cover(1, delta).unwrap();
    let p = regular_simplex(1);
    let mut g = rng(3);
    for _ in 0..2000 {
        let x = unit(g.gen_range(0.0..2.0 * PI));
        for (i, pi) in p.iter().enumerate() {
            let opposite = [-pi[0], -pi[1]];
            let a = (x[0] * opposite[0] + x[1] * opposite[1]).clamp(-1.0, 1.0).acos();
            if (a - (deg(60.0) + delta)).abs() > 1e-9 {
                assert_eq!(r.cover.contains(i, &x), a < deg(60.0) + delta);
            }
        }
    }
}

#[test]
fn two_arc_example() {
    let cover = GeometricCover {
        n: 1,
        open: true,
        sets: vec![
            CoverSet {
                regions: vec![arc(-10.0, 190.0)],
            },
            CoverSet {
                regions: vec![arc(170.0, 370.0)],
            },
        ],
    };
    let pair = antipodal_pair_search(&cover, &SearchConfig::default()).unwrap();
    assert_eq!(pair.set, 0);
    assert!((pair.point[0] - 1.0).abs() < 1e-12 && pair.point[1].abs() < 1e-12);
    assert_eq!(pair.refinements, 0);
}

fn fine_scan_finds_pair(cover: &GeometricCover) -> bool {
    (0..36_000).any(|k| {
        let x = unit(deg(k as f64 / 100.0));
        let y = [-x[0], -x[1]];
        (0..cover.sets.len()).any(|i| cover.contains(i, &x) && cover.contains(i, &y))
    })
}

#[test]
fn random_circle_covers_have_antipodal_pairs() {
    for i in 0..50u64 {
        let mut r = rng(instance_seed(5, i));
        let cover = random_cap_cover(&mut r, 1, 2, 8);
        let pair = antipodal_pair_search(&cover, &SearchConfig::default()).unwrap();
        assert!(cover.contains(pair.set, &pair.point) && cover.contains(pair.set, &pair.antipode));
        assert!(fine_scan_finds_pair(&cover));
    }
}

#[test]
fn random_sphere_covers_have_antipodal_pairs() {
    for i in 0..10u64 {
        let mut r = rng(instance_seed(6, i));
        let cover = random_cap_cover(&mut r, 2, 3, 12);
        let pair = antipodal_pair_search(&cover, &SearchConfig::default()).unwrap();
        assert!(cover.contains(pair.set, &pair.point) && cover.contains(pair.set, &pair.antipode));
        let v = &pair.lattice;
        assert_eq!(v.iter().map(|c| c.unsigned_abs() as usize).sum::<usize>(), pair.level);
    }
}

#[test]
fn octahedron_star_cover() {
    let star = |axis, positive| Region::Star { axis, positive };
    let cover = GeometricCover {
        n: 2,
        open: true,
        sets: vec![
            CoverSet {
                regions: vec![star(0, true), star(1, true)],
            },
            CoverSet {
                regions: vec![star(2, true), star(0, false)],
            },
            CoverSet {
                regions: vec![star(1, false), star(2, false)],
            },
        ],
    };
    let pair = antipodal_pair_search(&cover, &SearchConfig::default()).unwrap();
    assert!(pair.refinements <= 3);
    assert!(cover.contains(pair.set, &pair.point) && cover.contains(pair.set, &pair.antipode));
}

#[test]
fn search_rejects_bad_covers() {
    let too_many = GeometricCover {
        n: 1,
        open: true,
        sets: (0..3)
            .map(|k| CoverSet {
                regions: vec![arc(120.0 * k as f64 - 80.0, 120.0 * k as f64 + 80.0)],
            })
            .collect(),
    };
    assert!(matches!(
        antipodal_pair_search(&too_many, &SearchConfig::default()),
        Err(EquivariantError::InvalidCover(_))
    ));
    let gap = GeometricCover {
        n: 1,
        open: true,
        sets: vec![
            CoverSet {
                regions: vec![arc(0.0, 100.0)],
            },
            CoverSet {
                regions: vec![arc(120.0, 350.0)],
            },
        ],
    };
    assert!(matches!(
        antipodal_pair_search(&gap, &SearchConfig::default()),
        Err(EquivariantError::InvalidCover(_))
    ));
}

fn arc_samples(from: f64, to: f64) -> Vec<Vec<f64>> {
    (0..=200).map(|k| unit(deg(from + (to - from) * k as f64 / 200.0))).collect()
}

#[test]
fn distance_functions() {
    let f1 = arc_samples(-10.0, 190.0);
    let f2 = arc_samples(170.0, 370.0);
    let sets = vec![f1.clone(), f2];
    let x = unit(deg(90.0));
    let d = distance_function_map(&sets, &[x], Metric::Chordal).unwrap();
    assert_eq!(d[0], vec![0.0]);

    // A point of F_2 outside F_1 has a positive coordinate, so a coincidence
    // there is assigned to the last set.
    let x = unit(deg(270.0));
    let d = distance_function_map(&sets, &[x.clone(), x], Metric::Geodesic).unwrap();
    assert!(d[0][0] > 0.0);
    assert_eq!(coincidence_set(&d[0], &d[1], 1e-12), Some(1));

    let (a, b) = (unit(0.0), unit(PI));
    let d = distance_function_map(&sets, &[a, b], Metric::Chordal).unwrap();
    assert_eq!(coincidence_set(&d[0], &d[1], 1e-12), Some(0));

    assert_eq!(
        distance_function_map(&[vec![], f1], &[unit(0.0)], Metric::Chordal),
        Err(EquivariantError::EmptyCoverSet(0))
    );
}

#[test]
fn lattice_is_symmetric() {
    for n in 0..=3 {
        let l = lattice_sphere(n, 6);
        for v in &l {
            let w: Vec<i64> = v.iter().map(|c| -c).collect();
            assert!(l.contains(&w));
        }
    }
}

#[test]
fn trivial_group_quotient_is_identity() {
    let s = Arc::new(FiniteSpace::sierpinski());
    let a = injcat::equivariant::validate_action(Group::trivial(), s, vec![vec![0, 1]]).unwrap();
    let q = quotient_map(a);
    assert!(q.map.is_injective());
    assert_eq!(ic_exact(&q.map, &Budget::default()).unwrap().value, IcValue::Finite(1));
}
