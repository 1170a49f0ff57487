use std::sync::Arc;

use injcat::fixtures::{hexagon_quotient, pairing_map, sierpinski_collapse};
use injcat::ic::oracle::brute_force_ic;
use injcat::ic::{
    check_composition, check_iteration, check_pullback, check_restriction, ic_exact, ic_lower_max_fiber,
    ic_upper_greedy, is_injective_open, is_locally_injective, local_injectivity_witness, maximal_injective_opens,
    verify_cover, Budget, CoverFailure, IcValue,
};
use injcat::random::{instance_seed, random_instance, random_map, random_space, rng};
use injcat::space::{FiniteSpace, SpaceMap};
use rand::Rng;

fn budget() -> Budget {
    Budget::default()
}

fn ic(f: &SpaceMap) -> IcValue {
    ic_exact(f, &budget()).unwrap().value
}

/// The six "two edges" down-sets plus the two alternating vertex triples,
/// which are maximal because every edge meets an antipode of one of their
/// vertices.
fn hexagon_maximal_by_hand() -> Vec<Vec<String>> {
    let mut out = Vec::new();
    for i in 0..6 {
        let v = |k: usize| format!("{{v{}}}", (i + k) % 6);
        let e = |k: usize| {
            let (a, b) = ((i + k) % 6, (i + k + 1) % 6);
            format!("{{v{},v{}}}", a.min(b), a.max(b))
        };
        let mut set = vec![v(0), v(1), v(2), e(0), e(1)];
        set.sort();
        out.push(set);
    }
    out.push(vec!["{v0}".into(), "{v2}".into(), "{v4}".into()]);
    out.push(vec!["{v1}".into(), "{v3}".into(), "{v5}".into()]);
    out.sort();
    out
}

/// Maximal injective down-sets by enumerating every subset.
fn maximal_by_brute_force(f: &SpaceMap) -> Vec<Vec<String>> {
    let opens: Vec<_> = f.domain().enumerate_open_sets().unwrap().into_iter().filter(|u| f.is_injective_on(u)).collect();
    let mut out: Vec<Vec<String>> = opens
        .iter()
        .filter(|u| !opens.iter().any(|w| w != *u && u.is_subset(w)))
        .map(|u| {
            let mut l = f.domain().subset_labels(u);
            l.sort();
            l
        })
        .collect();
    out.sort();
    out
}

#[test]
fn hexagon_fibers_are_orbits() {
    let f = hexagon_quotient();
    assert_eq!(f.domain().len(), 12);
    for y in 0..f.codomain().len() {
        assert_eq!(f.fiber(y).count_ones(..), 2);
    }
    assert_eq!(ic_lower_max_fiber(&f), 2);
    assert!(is_locally_injective(&f));
}

#[test]
fn hexagon_maximal_sets() {
    let f = hexagon_quotient();
    let sets = maximal_injective_opens(&f, 1000).unwrap();
    let mut got: Vec<Vec<String>> = sets
        .iter()
        .map(|s| {
            let mut l = f.domain().subset_labels(s);
            l.sort();
            l
        })
        .collect();
    got.sort();
    assert_eq!(got, hexagon_maximal_by_hand());
    assert_eq!(got, maximal_by_brute_force(&f));
}

#[test]
fn hexagon_ic_is_three() {
    let f = hexagon_quotient();
    let r = ic_exact(&f, &budget()).unwrap();
    assert_eq!(r.value, IcValue::Finite(3));
    assert_eq!(brute_force_ic(&f), Some(IcValue::Finite(3)));
    let cert = r.certificate.unwrap();
    assert_eq!(cert.len(), 3);
    cert.verify().unwrap();
    assert!(r.canonical);
    assert!(r.lower_bound_trace.iter().all(|(_, v)| *v <= 3));
    // Any largest-gain greedy run takes two disjoint five-cell sets first and
    // then needs two more for the edges left between them.
    assert_eq!(ic_upper_greedy(&f, &budget()).unwrap().len(), 4);
}

#[test]
fn hexagon_antipodal_pair_is_not_injective() {
    let f = hexagon_quotient();
    let d = f.domain();
    let pair = d.subset(&["{v0}", "{v3}"]).unwrap();
    assert!(!is_injective_open(&f, &pair).unwrap());
    let rest = d.subset(&["{v1}", "{v2}", "{v4}", "{v5}", "{v1,v2}", "{v4,v5}"]).unwrap();
    let r = verify_cover(&f, &[&pair, &rest]);
    assert!(matches!(r, Err(CoverFailure::Injectivity { .. })));
}

#[test]
fn hexagon_restricted_to_an_orbit() {
    let f = hexagon_quotient();
    let w0 = f.codomain().subset(&["{w0}"]).unwrap();
    let r = f.restrict(&w0).unwrap();
    assert_eq!(r.domain().len(), 2);
    assert!(r.domain().leq(0, 0) && !r.domain().leq(0, 1) && !r.domain().leq(1, 0));
    assert_eq!(ic(&r), IcValue::Finite(2));
    let incl = SpaceMap::new(Arc::new(FiniteSpace::point()), Arc::clone(f.codomain()), vec![f.codomain().index_of("{w0}").unwrap()]).unwrap();
    let rep = check_pullback(&f, &incl, &budget()).unwrap();
    assert_eq!((rep.pullback_points, rep.ic_pi1, rep.ic_f), (2, IcValue::Finite(2), IcValue::Finite(3)));
    assert!(rep.holds);
}

#[test]
fn sierpinski_collapse_is_infinite() {
    let f = sierpinski_collapse();
    assert_eq!(local_injectivity_witness(&f), Some(1));
    let r = ic_exact(&f, &budget()).unwrap();
    assert_eq!(r.value, IcValue::Infinite);
    assert_eq!(r.witness.as_deref(), Some("b"));
    assert!(r.certificate.is_none());
}

#[test]
fn identity_and_constant() {
    let s = Arc::new(FiniteSpace::new(["a", "b", "c", "d"], [("a", "b"), ("b", "a"), ("c", "d")]).unwrap());
    assert_eq!(ic(&SpaceMap::identity(Arc::clone(&s))), IcValue::Finite(1));
    let d = Arc::new(FiniteSpace::discrete(["a", "b", "c", "d", "e"]).unwrap());
    let k = SpaceMap::constant(d, Arc::new(FiniteSpace::point()), 0);
    assert_eq!(ic_lower_max_fiber(&k), 5);
    assert_eq!(ic(&k), IcValue::Finite(5));
}

#[test]
fn composition_examples() {
    let two = Arc::new(FiniteSpace::discrete(["x1", "x2"]).unwrap());
    let ys = Arc::new(FiniteSpace::discrete(["y1", "y2"]).unwrap());
    let pt = Arc::new(FiniteSpace::point());
    let f = SpaceMap::new(two, Arc::clone(&ys), vec![1, 0]).unwrap();
    let g = SpaceMap::constant(ys, Arc::clone(&pt), 0);
    let r = check_composition(&f, &g, &budget()).unwrap();
    assert_eq!((r.ic_f, r.ic_gf, r.ic_g), (IcValue::Finite(1), IcValue::Finite(2), IcValue::Finite(2)));
    assert!(r.holds());

    let f = pairing_map();
    let g = SpaceMap::constant(Arc::clone(f.codomain()), pt, 0);
    let r = check_composition(&f, &g, &budget()).unwrap();
    assert_eq!((r.ic_f, r.ic_gf, r.ic_g), (IcValue::Finite(2), IcValue::Finite(4), IcValue::Finite(2)));
    assert!(r.holds());

    let h = hexagon_quotient();
    let r = check_composition(&h, &SpaceMap::identity(Arc::clone(h.codomain())), &budget()).unwrap();
    assert_eq!((r.ic_f, r.ic_gf), (IcValue::Finite(3), IcValue::Finite(3)));
}

#[test]
fn pullback_examples() {
    let h = hexagon_quotient();
    let r = check_pullback(&h, &SpaceMap::identity(Arc::clone(h.codomain())), &budget()).unwrap();
    assert_eq!(r.ic_pi1, r.ic_f);
    let n = Arc::new(FiniteSpace::sierpinski());
    let x = Arc::new(FiniteSpace::discrete(["p", "q", "r"]).unwrap());
    let psi = SpaceMap::constant(x, Arc::clone(&n), 1);
    let r = check_pullback(&SpaceMap::identity(n), &psi, &budget()).unwrap();
    assert_eq!((r.ic_pi1, r.ic_f), (IcValue::Finite(1), IcValue::Finite(1)));
}

#[test]
fn iteration_examples() {
    let d = Arc::new(FiniteSpace::discrete(["a", "b", "c", "d"]).unwrap());
    let collapse = SpaceMap::new(Arc::clone(&d), Arc::clone(&d), vec![0, 0, 2, 2]).unwrap();
    let r = check_iteration(&collapse, 2, &budget()).unwrap();
    assert_eq!(r.values, vec![IcValue::Finite(2); 3]);
    assert!(r.holds);
    let cycle = SpaceMap::new(Arc::clone(&d), Arc::clone(&d), vec![1, 2, 3, 0]).unwrap();
    let r = check_iteration(&cycle, 4, &budget()).unwrap();
    assert!(r.values.iter().all(|v| *v == IcValue::Finite(1)));
    let id = SpaceMap::identity(d);
    assert!(check_iteration(&id, 3, &budget()).unwrap().values.iter().all(|v| *v == IcValue::Finite(1)));
}

#[test]
fn solver_matches_brute_force_on_random_maps() {
    for i in 0..400 {
        let seed = instance_seed(11, i);
        let f = random_instance(&mut rng(seed), 10, 6);
        let r = ic_exact(&f, &budget()).unwrap();
        assert_eq!(Some(r.value), brute_force_ic(&f), "seed {seed}");
        if let Some(c) = &r.certificate {
            c.verify().unwrap();
            assert_eq!(IcValue::Finite(c.len()), r.value);
            let greedy = ic_upper_greedy(&f, &budget()).unwrap();
            assert!(r.value <= IcValue::Finite(greedy.len()));
        }
        assert!(IcValue::Finite(ic_lower_max_fiber(&f)) <= r.value, "seed {seed}");
        assert_eq!(r.value == IcValue::Finite(1), f.is_injective(), "seed {seed}");
        if r.value.is_finite() {
            let mut got: Vec<Vec<String>> = maximal_injective_opens(&f, 100_000)
                .unwrap()
                .iter()
                .map(|s| {
                    let mut l = f.domain().subset_labels(s);
                    l.sort();
                    l
                })
                .collect();
            got.sort();
            assert_eq!(got, maximal_by_brute_force(&f), "seed {seed}");
        }
    }
}

#[test]
fn local_injectivity_matches_brute_force_definition() {
    // Some open set around x is injective iff the minimal one is.
    for i in 0..200 {
        let f = random_instance(&mut rng(instance_seed(5, i)), 7, 4);
        let opens = f.domain().enumerate_open_sets().unwrap();
        let brute = (0..f.domain().len()).all(|x| opens.iter().any(|u| u.contains(x) && f.is_injective_on(u)));
        assert_eq!(brute, is_locally_injective(&f));
    }
}

#[test]
fn inequality_suites_on_random_instances() {
    let b = budget();
    for i in 0..500 {
        let mut r = rng(instance_seed(21, i));
        let f = random_instance(&mut r, 8, 6);
        let size = r.gen_range(1..=5);
        let p = Arc::new(random_space(&mut r, size, 0.3, "z"));
        let g = random_map(&mut r, Arc::clone(f.codomain()), p);
        assert!(check_composition(&f, &g, &b).unwrap().holds(), "composition {i}");

        let size = r.gen_range(1..=6);
        let x = Arc::new(random_space(&mut r, size, 0.3, "u"));
        let psi = random_map(&mut r, x, Arc::clone(f.codomain()));
        assert!(check_pullback(&f, &psi, &b).unwrap().holds, "pullback {i}");

        let mut a = f.codomain().empty_set();
        while a.count_ones(..) == 0 {
            for y in 0..f.codomain().len() {
                a.set(y, r.gen_bool(0.5));
            }
        }
        assert!(check_restriction(&f, &a, &b).unwrap().holds, "restriction {i}");

        let m = Arc::clone(f.domain());
        let e = random_map(&mut r, Arc::clone(&m), m);
        assert!(check_iteration(&e, 2, &b).unwrap().holds, "iteration {i}");
    }
}
