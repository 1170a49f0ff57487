//! Small named maps used by tests, the CLI and the examples.

use std::sync::Arc;

use crate::complex::{SimplicialComplex, SimplicialMap};
use crate::space::{FiniteSpace, SpaceMap};

/// The boundary of a triangle on `w0, w1, w2`.
pub fn triangle() -> SimplicialComplex {
    SimplicialComplex::new(["w0", "w1", "w2"], [["w0", "w1"], ["w1", "w2"], ["w0", "w2"]]).expect("triangle")
}

/// The hexagon-to-triangle quotient `v_i ↦ w_{i mod 3}` as a simplicial map.
/// It is the antipodal quotient of the hexagonal circle.
pub fn hexagon_quotient_simplicial() -> SimplicialMap {
    let hex = Arc::new(SimplicialComplex::cycle(6));
    SimplicialMap::new(hex, Arc::new(triangle()), (0..6).map(|i| i % 3).collect()).expect("simplicial")
}

/// The path `w0 - w1 - w2` included in [`triangle`]; not onto.
pub fn arc_inclusion() -> SimplicialMap {
    let arc = SimplicialComplex::new(["w0", "w1", "w2"], [["w0", "w1"], ["w1", "w2"]]).expect("arc");
    SimplicialMap::new(Arc::new(arc), Arc::new(triangle()), vec![0, 1, 2]).expect("simplicial")
}

/// Icosahedron boundary with vertices `t, u0..u4, l0..l4, b`: a top vertex,
/// an upper ring at angles `72i°`, a lower ring at `72i° + 36°` and a bottom
/// vertex. The antipode swaps `t` with `b` and `u_i` with `l_{i+2}`.
pub fn icosahedron() -> SimplicialComplex {
    let (t, b) = (0, 11);
    let u = |i: usize| 1 + i % 5;
    let l = |i: usize| 6 + i % 5;
    let mut names = vec!["t".to_string()];
    names.extend((0..5).map(|i| format!("u{i}")));
    names.extend((0..5).map(|i| format!("l{i}")));
    names.push("b".into());
    let mut facets = Vec::with_capacity(20);
    for i in 0..5 {
        facets.push(vec![t, u(i), u(i + 1)]);
        facets.push(vec![b, l(i), l(i + 1)]);
        facets.push(vec![u(i), u(i + 1), l(i)]);
        facets.push(vec![l(i), l(i + 1), u(i + 1)]);
    }
    SimplicialComplex::from_indices(names, facets).expect("icosahedron")
}

/// Orbit of each icosahedron vertex under the antipode: `t, b ↦ p0` and
/// `u_i, l_{i+2} ↦ p{i+1}`.
fn icosahedron_orbit(v: usize) -> usize {
    match v {
        0 | 11 => 0,
        1..=5 => v,
        _ => (v - 6 + 3) % 5 + 1,
    }
}

/// The antipodal quotient of [`icosahedron`], the 6-vertex real projective
/// plane on `p0..p5` with 10 triangles, as a simplicial map.
pub fn icosahedron_quotient() -> SimplicialMap {
    let ico = icosahedron();
    let names = (0..6).map(|i| format!("p{i}")).collect();
    let facets = ico.simplices(2).iter().map(|s| s.iter().map(|&v| icosahedron_orbit(v)).collect()).collect();
    let rp2 = SimplicialComplex::from_indices(names, facets).expect("quotient");
    let assignment = (0..12).map(icosahedron_orbit).collect();
    SimplicialMap::new(Arc::new(ico), Arc::new(rp2), assignment).expect("simplicial")
}

/// The minimal triangulation of the real projective plane.
pub fn rp2_minimal() -> SimplicialComplex {
    (**icosahedron_quotient().codomain()).clone()
}

/// Face-poset model of [`hexagon_quotient_simplicial`]: 12 cells onto 6.
pub fn hexagon_quotient() -> SpaceMap {
    hexagon_quotient_simplicial().face_poset_map()
}

/// `{a,b,c,d} -> {p,q}` with fibers `{a,b}` and `{c,d}`.
pub fn pairing_map() -> SpaceMap {
    let d = Arc::new(FiniteSpace::discrete(["a", "b", "c", "d"]).expect("distinct"));
    let c = Arc::new(FiniteSpace::discrete(["p", "q"]).expect("distinct"));
    SpaceMap::new(d, c, vec![0, 0, 1, 1]).expect("discrete domain")
}

/// Constant map from the Sierpiński space to a point.
pub fn sierpinski_collapse() -> SpaceMap {
    SpaceMap::constant(Arc::new(FiniteSpace::sierpinski()), Arc::new(FiniteSpace::point()), 0)
}
