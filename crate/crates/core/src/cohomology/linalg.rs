//! Linear algebra over the two-element field, vectors as bitsets.

use fixedbitset::FixedBitSet;

pub type Gf2Vec = FixedBitSet;

pub fn zeros(len: usize) -> Gf2Vec {
    FixedBitSet::with_capacity(len)
}

pub fn unit(len: usize, i: usize) -> Gf2Vec {
    let mut v = zeros(len);
    v.insert(i);
    v
}

pub fn dot(a: &Gf2Vec, b: &Gf2Vec) -> bool {
    a.intersection_count(b) % 2 == 1
}

/// `rows · x`, one bit per row.
pub fn apply(rows: &[Gf2Vec], x: &Gf2Vec) -> Gf2Vec {
    let mut out = zeros(rows.len());
    for (i, r) in rows.iter().enumerate() {
        out.set(i, dot(r, x));
    }
    out
}

/// Incremental row echelon form. Each stored vector carries a tag recording
/// which caller-supplied combination it stands for, so reducing a vector also
/// yields its coordinates.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<(usize, Gf2Vec, Gf2Vec)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows, XOR-ing their tags into `tag`.
    /// Stored rows are processed in insertion order; later rows never carry
    /// an earlier row's pivot, so each pivot is cleared for good.
    pub fn reduce(&self, v: &mut Gf2Vec, tag: &mut Gf2Vec) {
        for (pivot, row, t) in &self.rows {
            if v.contains(*pivot) {
                v.symmetric_difference_with(row);
                tag.grow(t.len());
                tag.symmetric_difference_with(t);
            }
        }
    }

    /// Adds `v` with `tag`; returns false if `v` was already in the span.
    pub fn insert(&mut self, mut v: Gf2Vec, mut tag: Gf2Vec) -> bool {
        self.reduce(&mut v, &mut tag);
        match v.minimum() {
            Some(pivot) => {
                self.rows.push((pivot, v, tag));
                true
            }
            None => false,
        }
    }
}

pub fn rank(rows: &[Gf2Vec]) -> usize {
    let mut e = Echelon::new();
    rows.iter().filter(|r| e.insert((*r).clone(), zeros(0))).count()
}

/// Basis of `{ x : rows · x = 0 }` for vectors of length `ncols`.
pub fn nullspace(rows: &[Gf2Vec], ncols: usize) -> Vec<Gf2Vec> {
    let mut m: Vec<Gf2Vec> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i].contains(c)) else { continue };
        m.swap(r, p);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row.contains(c) {
                row.symmetric_difference_with(&pivot_row);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    let mut is_pivot = vec![false; ncols];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut x = unit(ncols, free);
        for (row, &c) in m.iter().zip(&pivots) {
            if row.contains(free) {
                x.insert(c);
            }
        }
        basis.push(x);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(len: usize, ones: &[usize]) -> Gf2Vec {
        let mut x = zeros(len);
        for &i in ones {
            x.insert(i);
        }
        x
    }

    #[test]
    fn nullspace_of_a_cycle_incidence() {
        // Edges of a triangle as rows over its three vertices.
        let rows = vec![v(3, &[0, 1]), v(3, &[1, 2]), v(3, &[0, 2])];
        let k = nullspace(&rows, 3);
        assert_eq!(k, vec![v(3, &[0, 1, 2])]);
        assert_eq!(rank(&rows), 2);
        for x in &k {
            assert!(apply(&rows, x).is_clear());
        }
    }

    #[test]
    fn echelon_tracks_coordinates() {
        let mut e = Echelon::new();
        assert!(e.insert(v(4, &[0, 1]), v(2, &[0])));
        assert!(e.insert(v(4, &[1, 2]), v(2, &[1])));
        assert!(!e.insert(v(4, &[0, 2]), zeros(2)));
        let mut x = v(4, &[0, 2]);
        let mut tag = zeros(2);
        e.reduce(&mut x, &mut tag);
        assert!(x.is_clear());
        assert_eq!(tag, v(2, &[0, 1]));
    }
}
