//! Abstract simplicial complexes and simplicial maps.
//!
//! Vertices carry a global total order (their position in the vertex list);
//! every simplex is stored as a strictly increasing list of vertex positions.
//! Simplices are kept grouped by dimension and sorted lexicographically, and
//! that dimension-major order is also the point order of the face poset.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::space::{FiniteSpace, SpaceMap};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("duplicate vertex `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("empty simplex")]
    EmptySimplex,
    #[error("vertex `{0}` has no image")]
    MissingAssignment(String),
    #[error("image of simplex {0} is not a simplex")]
    NotSimplicial(String),
    #[error("codomain of the first map is not the domain of the second")]
    NotComposable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    simplices: Vec<Vec<Vec<usize>>>,
    lookup: HashMap<Vec<usize>, usize>,
    offsets: Vec<usize>,
}

impl SimplicialComplex {
    /// Builds the complex generated by `facets`; all faces are added, and so is
    /// every listed vertex.
    pub fn new<V, F, S>(vertices: V, facets: F) -> Result<Self, ComplexError>
    where
        V: IntoIterator,
        V::Item: Into<String>,
        F: IntoIterator,
        F::Item: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let vertices: Vec<String> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(ComplexError::DuplicateVertex(v.clone()));
            }
        }
        let mut idx_facets = Vec::new();
        for facet in facets {
            let mut s = Vec::new();
            for v in facet {
                let i = *index
                    .get(v.as_ref())
                    .ok_or_else(|| ComplexError::UnknownVertex(v.as_ref().to_string()))?;
                s.push(i);
            }
            idx_facets.push(s);
        }
        Self::from_indices(vertices, idx_facets)
    }

    pub fn from_indices(vertices: Vec<String>, facets: Vec<Vec<usize>>) -> Result<Self, ComplexError> {
        let mut seen = BTreeSet::new();
        for v in &vertices {
            if !seen.insert(v.as_str()) {
                return Err(ComplexError::DuplicateVertex(v.clone()));
            }
        }
        let mut all: BTreeSet<Vec<usize>> = (0..vertices.len()).map(|v| vec![v]).collect();
        for facet in facets {
            let mut f: Vec<usize> = facet;
            f.sort_unstable();
            f.dedup();
            if f.is_empty() {
                return Err(ComplexError::EmptySimplex);
            }
            if let Some(&bad) = f.iter().find(|&&v| v >= vertices.len()) {
                return Err(ComplexError::UnknownVertex(format!("#{bad}")));
            }
            if all.contains(&f) {
                continue;
            }
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                all.insert(face);
            }
        }
        let top = all.iter().map(Vec::len).max().unwrap_or(0);
        let mut simplices: Vec<Vec<Vec<usize>>> = vec![Vec::new(); top];
        for s in all {
            simplices[s.len() - 1].push(s);
        }
        let mut offsets = Vec::with_capacity(top + 1);
        let mut lookup = HashMap::new();
        let mut acc = 0;
        for layer in &simplices {
            offsets.push(acc);
            for (i, s) in layer.iter().enumerate() {
                lookup.insert(s.clone(), acc + i);
            }
            acc += layer.len();
        }
        offsets.push(acc);
        Ok(Self {
            vertices,
            simplices,
            lookup,
            offsets,
        })
    }

    /// Boundary of the full simplex on `vertex_count` vertices `v0, v1, ..`,
    /// a triangulated sphere of dimension `vertex_count - 2`.
    pub fn simplex_boundary(vertex_count: usize) -> Self {
        let vertices: Vec<String> = (0..vertex_count).map(|i| format!("v{i}")).collect();
        let facets = (0..vertex_count)
            .map(|skip| (0..vertex_count).filter(|&i| i != skip).collect())
            .collect();
        Self::from_indices(vertices, facets).expect("well-formed")
    }

    /// The cycle graph on `n >= 3` vertices `v0..v{n-1}`.
    pub fn cycle(n: usize) -> Self {
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let facets = (0..n).map(|i| vec![i, (i + 1) % n]).collect();
        Self::from_indices(vertices, facets).expect("well-formed")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == name)
    }

    /// Dimension, or `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.len().checked_sub(1)
    }

    /// Simplices of dimension `d`, lexicographically sorted.
    pub fn simplices(&self, d: usize) -> &[Vec<usize>] {
        self.simplices.get(d).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn simplex_count(&self) -> usize {
        *self.offsets.last().unwrap_or(&0)
    }

    /// All simplices in dimension-major order.
    pub fn iter(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.simplices.iter().flatten()
    }

    /// Position of a simplex (sorted vertex list) in dimension-major order.
    pub fn position(&self, simplex: &[usize]) -> Option<usize> {
        self.lookup.get(simplex).copied()
    }

    /// Position of a `d`-simplex within its own dimension.
    pub fn index_in_dim(&self, simplex: &[usize]) -> Option<usize> {
        let p = self.position(simplex)?;
        Some(p - self.offsets[simplex.len() - 1])
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.lookup.contains_key(simplex)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    pub fn label(&self, simplex: &[usize]) -> String {
        let names: Vec<&str> = simplex.iter().map(|&v| self.vertices[v].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<Vec<usize>> {
        let mut covered = BTreeSet::new();
        for s in self.iter() {
            if s.len() > 1 {
                for skip in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(skip);
                    covered.insert(f);
                }
            }
        }
        self.iter().filter(|s| !covered.contains(*s)).cloned().collect()
    }

    /// True when the complex is pure of dimension `d >= 1` and every
    /// `(d-1)`-simplex lies in exactly two `d`-simplices.
    pub fn is_closed_pseudomanifold(&self) -> bool {
        let Some(d) = self.dim() else { return false };
        if d == 0 {
            return false;
        }
        if self.facets().iter().any(|f| f.len() != d + 1) {
            return false;
        }
        let mut incidence = vec![0usize; self.count(d - 1)];
        for s in self.simplices(d) {
            for skip in 0..s.len() {
                let mut f = s.clone();
                f.remove(skip);
                incidence[self.index_in_dim(&f).expect("face present")] += 1;
            }
        }
        incidence.iter().all(|&c| c == 2)
    }

    /// Face poset: simplices ordered by inclusion, so the minimal open set of
    /// a simplex is the set of its faces. Points are labelled `{a,b,..}`.
    pub fn face_poset(&self) -> FiniteSpace {
        let labels: Vec<String> = self.iter().map(|s| self.label(s)).collect();
        let mut pairs = Vec::new();
        for (j, s) in self.iter().enumerate() {
            if s.len() < 2 {
                continue;
            }
            // Codimension-one faces generate the order.
            for skip in 0..s.len() {
                let mut f = s.clone();
                f.remove(skip);
                pairs.push((self.position(&f).expect("face present"), j));
            }
        }
        FiniteSpace::from_pairs(labels, &pairs).expect("simplex labels are distinct")
    }

    /// Barycentric subdivision: one vertex per simplex, one simplex per chain
    /// of faces. New vertices follow the dimension-major simplex order.
    pub fn barycentric_subdivision(&self) -> SimplicialComplex {
        let labels: Vec<String> = self.iter().map(|s| self.label(s)).collect();
        let mut chains: Vec<Vec<Vec<usize>>> = Vec::with_capacity(self.simplex_count());
        for (pos, s) in self.iter().enumerate() {
            let mut mine = vec![vec![pos]];
            if s.len() > 1 {
                let k = s.len();
                for mask in 1u64..((1u64 << k) - 1) {
                    let face: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                    let fp = self.position(&face).expect("face present");
                    for c in &chains[fp] {
                        let mut ext = c.clone();
                        ext.push(pos);
                        mine.push(ext);
                    }
                }
            }
            chains.push(mine);
        }
        let facets = chains.into_iter().flatten().collect();
        SimplicialComplex::from_indices(labels, facets).expect("well-formed")
    }
}

/// A vertex map sending every simplex onto a simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialMap {
    domain: Arc<SimplicialComplex>,
    codomain: Arc<SimplicialComplex>,
    assignment: Vec<usize>,
}

impl SimplicialMap {
    pub fn new(
        domain: Arc<SimplicialComplex>,
        codomain: Arc<SimplicialComplex>,
        assignment: Vec<usize>,
    ) -> Result<Self, ComplexError> {
        if assignment.len() != domain.vertex_count() {
            let missing = domain.vertices().get(assignment.len()).cloned().unwrap_or_default();
            return Err(ComplexError::MissingAssignment(missing));
        }
        if let Some(&bad) = assignment.iter().find(|&&v| v >= codomain.vertex_count()) {
            return Err(ComplexError::UnknownVertex(format!("#{bad}")));
        }
        let map = Self {
            domain,
            codomain,
            assignment,
        };
        for s in map.domain.iter() {
            if !map.codomain.contains(&map.image_simplex(s)) {
                return Err(ComplexError::NotSimplicial(map.domain.label(s)));
            }
        }
        Ok(map)
    }

    pub fn from_names<K: AsRef<str>, V: AsRef<str>>(
        domain: Arc<SimplicialComplex>,
        codomain: Arc<SimplicialComplex>,
        assignment: &[(K, V)],
    ) -> Result<Self, ComplexError> {
        let mut table = vec![usize::MAX; domain.vertex_count()];
        for (k, v) in assignment {
            let a = domain
                .vertex_index(k.as_ref())
                .ok_or_else(|| ComplexError::UnknownVertex(k.as_ref().to_string()))?;
            let b = codomain
                .vertex_index(v.as_ref())
                .ok_or_else(|| ComplexError::UnknownVertex(v.as_ref().to_string()))?;
            table[a] = b;
        }
        if let Some(v) = table.iter().position(|&b| b == usize::MAX) {
            return Err(ComplexError::MissingAssignment(domain.vertices()[v].clone()));
        }
        Self::new(domain, codomain, table)
    }

    pub fn identity(k: Arc<SimplicialComplex>) -> Self {
        let assignment = (0..k.vertex_count()).collect();
        Self {
            domain: Arc::clone(&k),
            codomain: k,
            assignment,
        }
    }

    pub fn domain(&self) -> &Arc<SimplicialComplex> {
        &self.domain
    }

    pub fn codomain(&self) -> &Arc<SimplicialComplex> {
        &self.codomain
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Sorted, de-duplicated image of a simplex.
    pub fn image_simplex(&self, s: &[usize]) -> Vec<usize> {
        let mut img: Vec<usize> = s.iter().map(|&v| self.assignment[v]).collect();
        img.sort_unstable();
        img.dedup();
        img
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &SimplicialMap) -> Result<SimplicialMap, ComplexError> {
        if *self.codomain != *then.domain {
            return Err(ComplexError::NotComposable);
        }
        Ok(SimplicialMap {
            domain: Arc::clone(&self.domain),
            codomain: Arc::clone(&then.codomain),
            assignment: self.assignment.iter().map(|&v| then.assignment[v]).collect(),
        })
    }

    /// Every simplex of the codomain is the image of some simplex, which is
    /// exactly surjectivity of the geometric realization.
    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.simplex_count()];
        for s in self.domain.iter() {
            hit[self.codomain.position(&self.image_simplex(s)).expect("simplicial")] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_vertex_surjective(&self) -> bool {
        let mut hit = vec![false; self.codomain.vertex_count()];
        for &v in &self.assignment {
            hit[v] = true;
        }
        hit.into_iter().all(|h| h)
    }

    /// The induced map of face posets, `σ ↦ f(σ)`.
    pub fn face_poset_map(&self) -> SpaceMap {
        let dom = Arc::new(self.domain.face_poset());
        let cod = Arc::new(self.codomain.face_poset());
        let assignment = self
            .domain
            .iter()
            .map(|s| self.codomain.position(&self.image_simplex(s)).expect("simplicial"))
            .collect();
        SpaceMap::new(dom, cod, assignment).expect("face maps preserve inclusion")
    }
}
