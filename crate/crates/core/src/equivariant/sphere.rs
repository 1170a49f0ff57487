//! Triangulated spheres with the antipodal involution.

use std::f64::consts::PI;
use std::sync::Arc;

use serde_json::json;

use super::{quotient_map, validate_action, EquivariantError, Group, GroupAction, QuotientMapModel};
use crate::complex::SimplicialComplex;
use crate::ic::{ic_exact, Budget, IcResult};

/// A triangulated `S^n` whose vertex involution `vertex_antipode` realises
/// `x ↦ -x` on the vertex coordinates.
#[derive(Clone, Debug)]
pub struct SphereModel {
    pub n: usize,
    pub name: &'static str,
    pub complex: Arc<SimplicialComplex>,
    pub vertex_antipode: Vec<usize>,
    pub coords: Vec<Vec<f64>>,
    /// ℤ/2 acting on the face poset.
    pub action: GroupAction,
}

impl SphereModel {
    fn build(
        n: usize,
        name: &'static str,
        complex: SimplicialComplex,
        vertex_antipode: Vec<usize>,
        coords: Vec<Vec<f64>>,
    ) -> Result<Self, EquivariantError> {
        let expected = 1 + if n.is_multiple_of(2) { 1 } else { -1 };
        if complex.euler_characteristic() != expected {
            return Err(EquivariantError::InvalidCover(format!("{name} has Euler characteristic {}", complex.euler_characteristic())));
        }
        let swap: Vec<usize> = complex
            .iter()
            .map(|s| {
                let mut t: Vec<usize> = s.iter().map(|&v| vertex_antipode[v]).collect();
                t.sort_unstable();
                complex.position(&t).expect("antipode of a simplex is a simplex")
            })
            .collect();
        let space = Arc::new(complex.face_poset());
        let action = validate_action(Group::cyclic(2), space, vec![(0..swap.len()).collect(), swap])?;
        Ok(Self {
            n,
            name,
            complex: Arc::new(complex),
            vertex_antipode,
            coords,
            action,
        })
    }

    pub fn quotient(&self) -> QuotientMapModel {
        quotient_map(self.action.clone())
    }
}

/// Boundary of the `(n+1)`-dimensional cross-polytope for `n <= 3`, with
/// vertices `e1+, e1-, e2+, ..` at `±e_k`. Its simplices are the vertex sets
/// without an antipodal pair.
pub fn cross_polytope_sphere(n: usize) -> Result<SphereModel, EquivariantError> {
    if n > 3 {
        return Err(EquivariantError::DimensionOutOfRange(n));
    }
    let d = n + 1;
    let mut names = Vec::with_capacity(2 * d);
    let mut coords = Vec::with_capacity(2 * d);
    for k in 0..d {
        for sign in [1.0, -1.0] {
            names.push(format!("e{}{}", k + 1, if sign > 0.0 { '+' } else { '-' }));
            let mut c = vec![0.0; d];
            c[k] = sign;
            coords.push(c);
        }
    }
    let facets = (0..1usize << d)
        .map(|signs| (0..d).map(|k| 2 * k + (signs >> k & 1)).collect())
        .collect();
    let complex = SimplicialComplex::from_indices(names, facets).expect("well-formed");
    let antipode = (0..2 * d).map(|v| v ^ 1).collect();
    SphereModel::build(n, "cross-polytope", complex, antipode, coords)
}

/// The hexagon `v0..v5` with `v_i ↦ v_{i+3}`, whose quotient is the
/// triangle. Used in place of the square for `n = 1`, since the square's
/// quotient is not a simplicial complex.
pub fn hexagon_sphere() -> SphereModel {
    let coords = (0..6).map(|i| {
        let a = PI * i as f64 / 3.0;
        vec![a.cos(), a.sin()]
    });
    let antipode = (0..6).map(|i| (i + 3) % 6).collect();
    SphereModel::build(1, "hexagon", SimplicialComplex::cycle(6), antipode, coords.collect()).expect("hexagon")
}

/// The model whose quotient is solved for `S^n`.
pub fn sphere_model(n: usize) -> Result<SphereModel, EquivariantError> {
    match n {
        1 => Ok(hexagon_sphere()),
        _ => cross_polytope_sphere(n),
    }
}

/// Exact IC of a sphere model's orbit map next to the value `n + 2` for the
/// round sphere.
#[derive(Clone, Debug)]
pub struct SphereIcReport {
    pub n: usize,
    pub model: &'static str,
    pub cells: usize,
    pub orbits: usize,
    pub result: IcResult,
    pub geometric: usize,
}

impl SphereIcReport {
    pub fn agrees(&self) -> bool {
        self.result.value.finite() == Some(self.geometric)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "n": self.n,
            "model": self.model,
            "cells": self.cells,
            "orbits": self.orbits,
            "model_ic": self.result.value.to_json(),
            "certificate": self.result.certificate.as_ref().map(|c| c.labels()),
            "nodes": self.result.nodes,
            "geometric_ic": self.geometric,
            "agrees": self.agrees(),
        })
    }
}

pub fn ic_quotient_sphere(n: usize, budget: &Budget) -> Result<SphereIcReport, EquivariantError> {
    if n > 2 {
        return Err(EquivariantError::DimensionOutOfRange(n));
    }
    let model = sphere_model(n)?;
    let q = model.quotient();
    let result = ic_exact(&q.map, budget)?;
    Ok(SphereIcReport {
        n,
        model: model.name,
        cells: model.action.space().len(),
        orbits: q.quotient.len(),
        result,
        geometric: n + 2,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_polytope_counts() {
        let s = cross_polytope_sphere(1).unwrap();
        assert_eq!((s.complex.count(0), s.complex.count(1)), (4, 4));
        let s = cross_polytope_sphere(2).unwrap();
        assert_eq!((s.complex.count(0), s.complex.count(1), s.complex.count(2)), (6, 12, 8));
        assert_eq!(s.quotient().quotient.len(), 13);
        let s = cross_polytope_sphere(0).unwrap();
        assert_eq!(s.complex.simplex_count(), 2);
        assert_eq!(cross_polytope_sphere(3).unwrap().complex.count(3), 16);
        assert_eq!(cross_polytope_sphere(4).unwrap_err(), EquivariantError::DimensionOutOfRange(4));
    }

    #[test]
    fn antipodes_negate_coordinates() {
        for n in 0..=3 {
            let s = sphere_model(n).unwrap();
            for (v, &w) in s.vertex_antipode.iter().enumerate() {
                for (a, b) in s.coords[v].iter().zip(&s.coords[w]) {
                    assert!((a + b).abs() < 1e-12);
                }
            }
        }
    }
}
