//! Simplicial cohomology with ℤ/2 coefficients.
//!
//! Cochains are bitsets over the simplices of one dimension, in the complex's
//! dimension-major order. Cup products use the front-face/back-face formula
//! on simplices ordered by the global vertex order, which is well defined on
//! cohomology whatever that order is.
//!
//! The nil index of a kernel is found by searching products of kernel basis
//! elements only. Products are multilinear and the kernel is graded, so any
//! product of `k` kernel elements is a sum of products of `k` basis elements;
//! the search is therefore exact, not a sample.

pub mod linalg;

use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use serde_json::json;
use thiserror::Error;

use crate::complex::{SimplicialComplex, SimplicialMap};
use linalg::{nullspace, zeros, Echelon, Gf2Vec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohomologyError {
    #[error("classes or maps belong to different complexes")]
    ComplexMismatch,
    #[error("cochain of degree {0} is not a cocycle")]
    NotACocycle(usize),
}

/// Coboundary operators of a complex.
#[derive(Clone, Debug)]
pub struct CochainComplexZ2 {
    complex: Arc<SimplicialComplex>,
    /// `faces[d][j]` = codimension-one faces of the `j`-th `(d+1)`-simplex, as
    /// a set of `d`-simplex indices: row `j` of `δ: C^d → C^{d+1}`.
    faces: Vec<Vec<Gf2Vec>>,
}

impl CochainComplexZ2 {
    pub fn new(complex: Arc<SimplicialComplex>) -> Self {
        let top = complex.dim().unwrap_or(0);
        let faces = (0..top)
            .map(|d| {
                complex
                    .simplices(d + 1)
                    .iter()
                    .map(|s| {
                        let mut row = zeros(complex.count(d));
                        for skip in 0..s.len() {
                            let mut f = s.clone();
                            f.remove(skip);
                            row.insert(complex.index_in_dim(&f).expect("face present"));
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        Self { complex, faces }
    }

    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        &self.complex
    }

    pub fn count(&self, d: usize) -> usize {
        if self.complex.dim().is_some_and(|top| d <= top) {
            self.complex.count(d)
        } else {
            0
        }
    }

    /// `δφ` for a `d`-cochain `φ`.
    pub fn delta(&self, d: usize, phi: &Gf2Vec) -> Gf2Vec {
        match self.faces.get(d) {
            Some(rows) => linalg::apply(rows, phi),
            None => zeros(0),
        }
    }

    /// Matrix of `δ: C^d → C^{d+1}` by rows.
    pub fn coboundary_rows(&self, d: usize) -> &[Gf2Vec] {
        self.faces.get(d).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// `H^*(K; ℤ/2)` with a chosen basis of representing cocycles in each degree.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    cochains: CochainComplexZ2,
    reps: Vec<Vec<Gf2Vec>>,
    /// Coboundaries (tag 0) followed by the representatives (tag `e_i`).
    echelon: Vec<Echelon>,
}

/// Computes cohomology in every degree up to the dimension of `k`.
pub fn cohomology(k: Arc<SimplicialComplex>) -> CohomologyRing {
    let cochains = CochainComplexZ2::new(k);
    let top = cochains.complex.dim().unwrap_or(0);
    let mut reps = Vec::with_capacity(top + 1);
    let mut echelon = Vec::with_capacity(top + 1);
    for d in 0..=top {
        let n = cochains.count(d);
        let mut e = Echelon::new();
        if d > 0 {
            // Images of the basis (d-1)-cochains span B^d.
            for i in 0..cochains.count(d - 1) {
                e.insert(cochains.delta(d - 1, &linalg::unit(cochains.count(d - 1), i)), zeros(0));
            }
        }
        let cocycles = if d < top {
            nullspace(cochains.coboundary_rows(d), n)
        } else {
            (0..n).map(|i| linalg::unit(n, i)).collect()
        };
        let mut basis = Vec::new();
        for z in cocycles {
            let tag = linalg::unit(basis.len() + 1, basis.len());
            if e.insert(z.clone(), tag) {
                basis.push(z);
            }
        }
        reps.push(basis);
        echelon.push(e);
    }
    CohomologyRing { cochains, reps, echelon }
}

/// A cohomology class, as coordinates over the ring's chosen basis.
#[derive(Clone)]
pub struct CohomologyClass {
    complex: Arc<SimplicialComplex>,
    degree: usize,
    coords: FixedBitSet,
}

impl PartialEq for CohomologyClass {
    fn eq(&self, other: &Self) -> bool {
        self.degree == other.degree
            && self.coords.ones().eq(other.coords.ones())
            && (Arc::ptr_eq(&self.complex, &other.complex) || self.complex == other.complex)
    }
}

impl Eq for CohomologyClass {}

impl fmt::Debug for CohomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

impl CohomologyClass {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_clear()
    }

    pub fn coords(&self) -> Vec<usize> {
        self.coords.ones().collect()
    }

    /// `h{d}.{i} + ..`, or `0`.
    pub fn name(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> = self.coords.ones().map(|i| format!("h{}.{i}", self.degree)).collect();
        parts.join(" + ")
    }

    pub fn add(&self, other: &Self) -> Result<Self, CohomologyError> {
        if self.degree != other.degree || !Arc::ptr_eq(&self.complex, &other.complex) {
            return Err(CohomologyError::ComplexMismatch);
        }
        let mut coords = self.coords.clone();
        coords.grow(other.coords.len());
        coords.symmetric_difference_with(&other.coords);
        Ok(Self { coords, ..self.clone() })
    }
}

impl CohomologyRing {
    pub fn complex(&self) -> &Arc<SimplicialComplex> {
        self.cochains.complex()
    }

    pub fn cochains(&self) -> &CochainComplexZ2 {
        &self.cochains
    }

    /// Top degree with cochains.
    pub fn top(&self) -> usize {
        self.reps.len() - 1
    }

    pub fn dim(&self, d: usize) -> usize {
        self.reps.get(d).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.reps.iter().map(Vec::len).collect()
    }

    pub fn generator(&self, d: usize, i: usize) -> CohomologyClass {
        self.class_from_coords(d, linalg::unit(self.dim(d), i))
    }

    pub fn generators(&self, d: usize) -> Vec<CohomologyClass> {
        (0..self.dim(d)).map(|i| self.generator(d, i)).collect()
    }

    pub fn zero(&self, d: usize) -> CohomologyClass {
        self.class_from_coords(d, zeros(self.dim(d)))
    }

    /// The class of the constant cochain `1` in degree 0.
    pub fn unit(&self) -> CohomologyClass {
        let mut one = zeros(self.cochains.count(0));
        one.insert_range(..);
        self.class_of(0, &one).expect("constants are cocycles")
    }

    fn class_from_coords(&self, degree: usize, mut coords: FixedBitSet) -> CohomologyClass {
        coords.grow(self.dim(degree));
        CohomologyClass {
            complex: Arc::clone(self.complex()),
            degree,
            coords,
        }
    }

    /// The class of a `d`-cocycle.
    pub fn class_of(&self, d: usize, cocycle: &Gf2Vec) -> Result<CohomologyClass, CohomologyError> {
        if d > self.top() {
            return Ok(self.zero(d));
        }
        if !self.cochains.delta(d, cocycle).is_clear() {
            return Err(CohomologyError::NotACocycle(d));
        }
        let mut v = cocycle.clone();
        v.grow(self.cochains.count(d));
        let mut tag = zeros(self.dim(d));
        self.echelon[d].reduce(&mut v, &mut tag);
        debug_assert!(v.is_clear(), "cocycles lie in B^d + span(reps)");
        Ok(self.class_from_coords(d, tag))
    }

    /// A representing cocycle.
    pub fn representative(&self, c: &CohomologyClass) -> Gf2Vec {
        let mut out = zeros(self.cochains.count(c.degree));
        for i in c.coords.ones() {
            out.symmetric_difference_with(&self.reps[c.degree][i]);
        }
        out
    }

    fn owns(&self, c: &CohomologyClass) -> bool {
        Arc::ptr_eq(&c.complex, self.complex())
    }

    /// Front-face/back-face cup product of cochains.
    pub fn cup_cochains(&self, p: usize, alpha: &Gf2Vec, q: usize, beta: &Gf2Vec) -> Gf2Vec {
        let k = self.complex();
        let d = p + q;
        if d > self.top() {
            return zeros(0);
        }
        let mut out = zeros(k.count(d));
        for (j, s) in k.simplices(d).iter().enumerate() {
            let front = k.index_in_dim(&s[..=p]).expect("face present");
            let back = k.index_in_dim(&s[p..]).expect("face present");
            if alpha.contains(front) && beta.contains(back) {
                out.insert(j);
            }
        }
        out
    }

    pub fn cup(&self, a: &CohomologyClass, b: &CohomologyClass) -> Result<CohomologyClass, CohomologyError> {
        if !self.owns(a) || !self.owns(b) {
            return Err(CohomologyError::ComplexMismatch);
        }
        let d = a.degree + b.degree;
        if d > self.top() {
            return Ok(self.zero(d));
        }
        let c = self.cup_cochains(a.degree, &self.representative(a), b.degree, &self.representative(b));
        self.class_of(d, &c)
    }

    /// Products of pairs of generators `(a, b, a ⌣ b)` with `a` before `b`,
    /// skipping degree 0 and products above the top degree.
    pub fn product_table(&self) -> Vec<(String, String, String)> {
        let gens: Vec<CohomologyClass> = (1..=self.top()).flat_map(|d| self.generators(d)).collect();
        let mut out = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i..] {
                if a.degree + b.degree <= self.top() {
                    let c = self.cup(a, b).expect("same ring");
                    out.push((a.name(), b.name(), c.name()));
                }
            }
        }
        out
    }
}

/// `f*: H^*(N) → H^*(M)` for `f: M → N`, by matrices over the chosen bases.
#[derive(Clone, Debug)]
pub struct InducedMap {
    source: Arc<SimplicialComplex>,
    target: Arc<SimplicialComplex>,
    /// `columns[d][i]` = coordinates in `H^d(M)` of `f*` of generator `i` of
    /// `H^d(N)`.
    columns: Vec<Vec<FixedBitSet>>,
}

/// Pulls a `d`-cochain on the codomain back along `f`; simplices whose image
/// drops dimension get 0.
pub fn pullback_cochain(f: &SimplicialMap, d: usize, phi: &Gf2Vec) -> Gf2Vec {
    let dom = f.domain();
    let cod = f.codomain();
    let count = if dom.dim().is_some_and(|t| d <= t) { dom.count(d) } else { 0 };
    let mut out = zeros(count);
    for j in 0..count {
        let img = f.image_simplex(&dom.simplices(d)[j]);
        if img.len() == d + 1 && phi.contains(cod.index_in_dim(&img).expect("simplicial")) {
            out.insert(j);
        }
    }
    out
}

/// Requires `m_ring` to be the cohomology of the domain of `f` and `n_ring`
/// that of its codomain.
pub fn induced_map(f: &SimplicialMap, n_ring: &CohomologyRing, m_ring: &CohomologyRing) -> Result<InducedMap, CohomologyError> {
    if **f.codomain() != **n_ring.complex() || **f.domain() != **m_ring.complex() {
        return Err(CohomologyError::ComplexMismatch);
    }
    let columns = (0..=n_ring.top())
        .map(|d| {
            (0..n_ring.dim(d))
                .map(|i| {
                    let phi = pullback_cochain(f, d, &n_ring.reps[d][i]);
                    if d > m_ring.top() {
                        return zeros(0);
                    }
                    m_ring.class_of(d, &phi).expect("pullbacks of cocycles are cocycles").coords
                })
                .collect()
        })
        .collect();
    Ok(InducedMap {
        source: Arc::clone(n_ring.complex()),
        target: Arc::clone(m_ring.complex()),
        columns,
    })
}

impl InducedMap {
    pub fn apply(&self, c: &CohomologyClass, m_ring: &CohomologyRing) -> Result<CohomologyClass, CohomologyError> {
        if !Arc::ptr_eq(&c.complex, &self.source) || !Arc::ptr_eq(m_ring.complex(), &self.target) {
            return Err(CohomologyError::ComplexMismatch);
        }
        let mut out = zeros(m_ring.dim(c.degree));
        if let Some(cols) = self.columns.get(c.degree) {
            for i in c.coords.ones() {
                out.grow(cols[i].len());
                out.symmetric_difference_with(&cols[i]);
            }
        }
        Ok(m_ring.class_from_coords(c.degree, out))
    }

    /// Matrix of `f*` in degree `d` as rows over the generators of `H^d(N)`.
    pub fn matrix(&self, d: usize, m_dim: usize) -> Vec<Vec<u8>> {
        let cols = self.columns.get(d).map(Vec::as_slice).unwrap_or(&[]);
        (0..m_dim).map(|r| cols.iter().map(|c| u8::from(c.contains(r))).collect()).collect()
    }

    pub fn is_zero(&self, d: usize) -> bool {
        self.columns.get(d).is_none_or(|cols| cols.iter().all(FixedBitSet::is_clear))
    }

    /// Basis of `Ker f*` in degree `d`, as classes of `N`.
    pub fn kernel(&self, d: usize, n_ring: &CohomologyRing) -> Vec<CohomologyClass> {
        let cols = self.columns.get(d).map(Vec::as_slice).unwrap_or(&[]);
        let rows_len = cols.iter().map(FixedBitSet::len).max().unwrap_or(0);
        // Rows of the matrix, each a bitset over the columns.
        let rows: Vec<Gf2Vec> = (0..rows_len)
            .map(|r| {
                let mut row = zeros(cols.len());
                for (i, c) in cols.iter().enumerate() {
                    row.set(i, c.contains(r));
                }
                row
            })
            .collect();
        nullspace(&rows, cols.len()).into_iter().map(|x| n_ring.class_from_coords(d, x)).collect()
    }
}

/// `nil(Ker f*)` with its evidence.
#[derive(Clone, Debug)]
pub struct NilIndex {
    pub value: usize,
    /// Kernel basis elements whose product is nonzero, `value - 1` of them.
    pub witness: Vec<CohomologyClass>,
    pub kernel: Vec<Vec<CohomologyClass>>,
    /// Products of `value` basis elements checked to vanish, with degree at
    /// most the top degree (the rest vanish for lack of simplices).
    pub products_checked: u64,
    pub degree_zero_kernel: usize,
}

impl NilIndex {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "value": self.value,
            "witness": self.witness.iter().map(CohomologyClass::name).collect::<Vec<_>>(),
            "kernel_basis": self.kernel.iter().map(|b| b.iter().map(CohomologyClass::name).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "products_checked": self.products_checked,
            "degree_zero_kernel": self.degree_zero_kernel,
        })
    }
}

/// Longest nonvanishing product of positive-degree kernel basis elements,
/// plus one. Factors are taken as multisets: the ring is commutative over
/// ℤ/2.
pub fn nil_kernel(fstar: &InducedMap, n_ring: &CohomologyRing) -> NilIndex {
    let kernel: Vec<Vec<CohomologyClass>> = (0..=n_ring.top()).map(|d| fstar.kernel(d, n_ring)).collect();
    let basis: Vec<CohomologyClass> = kernel.iter().skip(1).flatten().cloned().collect();

    struct Search<'a> {
        ring: &'a CohomologyRing,
        basis: &'a [CohomologyClass],
        best: Vec<usize>,
        checked: Vec<u64>,
    }
    impl Search<'_> {
        fn go(&mut self, from: usize, stack: &mut Vec<usize>, product: &CohomologyClass) {
            if stack.len() > self.best.len() {
                self.best = stack.clone();
            }
            for i in from..self.basis.len() {
                let b = &self.basis[i];
                if product.degree + b.degree > self.ring.top() {
                    continue;
                }
                let next = self.ring.cup(product, b).expect("same ring");
                let len = stack.len() + 1;
                if self.checked.len() <= len {
                    self.checked.resize(len + 1, 0);
                }
                self.checked[len] += 1;
                if !next.is_zero() {
                    stack.push(i);
                    self.go(i, stack, &next);
                    stack.pop();
                }
            }
        }
    }
    let mut s = Search {
        ring: n_ring,
        basis: &basis,
        best: Vec::new(),
        checked: Vec::new(),
    };
    s.go(0, &mut Vec::new(), &n_ring.unit());
    let value = s.best.len() + 1;
    NilIndex {
        value,
        witness: s.best.iter().map(|&i| basis[i].clone()).collect(),
        products_checked: s.checked.get(value).copied().unwrap_or(0),
        degree_zero_kernel: kernel[0].len(),
        kernel: kernel.into_iter().skip(1).collect(),
    }
}

/// `nil(Ker f*)` tagged with whether the hypotheses of the lower bound
/// `nil(Ker f*) <= IC(f)` were met.
#[derive(Clone, Debug)]
pub struct LowerBound {
    pub nil: NilIndex,
    pub valid: bool,
    pub notes: Vec<String>,
}

impl LowerBound {
    pub fn tag(&self) -> &'static str {
        if self.valid {
            "valid"
        } else {
            "heuristic"
        }
    }
}

/// Computes the bound and checks what can be checked of its hypotheses: the
/// realization of `f` is onto and both complexes are closed pseudomanifolds
/// of one dimension. `surjective` is the caller's own assertion.
pub fn cohomological_lower_bound(f: &SimplicialMap, surjective: bool) -> LowerBound {
    let m_ring = cohomology(Arc::clone(f.domain()));
    let n_ring = cohomology(Arc::clone(f.codomain()));
    let fstar = induced_map(f, &n_ring, &m_ring).expect("rings of f's own complexes");
    let nil = nil_kernel(&fstar, &n_ring);
    let mut notes = Vec::new();
    if !surjective {
        notes.push("surjectivity not asserted".to_string());
    }
    if !f.is_surjective() {
        notes.push("realization is not onto".to_string());
    }
    for (name, k) in [("domain", f.domain()), ("codomain", f.codomain())] {
        if !k.is_closed_pseudomanifold() {
            notes.push(format!("{name} is not a closed pseudomanifold"));
        }
    }
    if f.domain().dim() != f.codomain().dim() {
        notes.push("dimensions differ".to_string());
    }
    LowerBound {
        valid: notes.is_empty(),
        nil,
        notes,
    }
}
