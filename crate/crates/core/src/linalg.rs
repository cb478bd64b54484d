//! Exact linear algebra over F_p.
//!
//! Elimination works on sparse rows and switches to dense rows once the
//! working set fills past a quarter of the matrix. Both paths produce the
//! reduced row echelon form, which is unique, so results do not depend on
//! which path ran.

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::monomial::Monomial;
use crate::prime::Prime;

type SparseRow = Vec<(usize, u32)>;

/// A sparse matrix over F_p stored by rows; entries are sorted by column
/// and nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpMatrix {
    p: Prime,
    rows: usize,
    cols: usize,
    entries: Vec<SparseRow>,
}

impl FpMatrix {
    pub fn zero(p: Prime, rows: usize, cols: usize) -> Self {
        FpMatrix { p, rows, cols, entries: vec![Vec::new(); rows] }
    }

    pub fn identity(p: Prime, n: usize) -> Self {
        let mut m = FpMatrix::zero(p, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_dense(p: Prime, rows: &[Vec<u32>], cols: usize) -> Self {
        let mut m = FpMatrix::zero(p, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged dense matrix");
            for (j, &v) in r.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(p: Prime, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = FpMatrix::zero(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, &v) in c.iter().enumerate() {
                if v % p.get() != 0 {
                    m.entries[i].push((j, v % p.get()));
                }
            }
        }
        m
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        match self.entries[i].binary_search_by_key(&j, |e| e.0) {
            Ok(k) => self.entries[i][k].1,
            Err(_) => 0,
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        let v = v % self.p.get();
        let row = &mut self.entries[i];
        match row.binary_search_by_key(&j, |e| e.0) {
            Ok(k) if v == 0 => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v == 0 => {}
            Err(k) => row.insert(k, (j, v)),
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, v: u32) {
        let cur = self.get(i, j);
        self.set(i, j, self.p.add(cur, v % self.p.get()));
    }

    pub fn row(&self, i: usize) -> &[(usize, u32)] {
        &self.entries[i]
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zero(self.p, self.cols, self.rows);
        for (i, row) in self.entries.iter().enumerate() {
            for &(j, v) in row {
                t.entries[j].push((i, v));
            }
        }
        t
    }

    pub fn to_dense(&self) -> Vec<Vec<u32>> {
        let mut d = vec![vec![0; self.cols]; self.rows];
        for (i, row) in self.entries.iter().enumerate() {
            for &(j, v) in row {
                d[i][j] = v;
            }
        }
        d
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// `M·v`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch { expected: self.cols, got: v.len() });
        }
        let p = self.p;
        Ok(self
            .entries
            .iter()
            .map(|row| row.iter().fold(0, |acc, &(j, a)| p.add(acc, p.mul(a, v[j] % p.get()))))
            .collect())
    }

    pub fn rank(&self) -> usize {
        Echelon::of_rows(self.p, self.cols, self.entries.iter().cloned()).rank()
    }

    /// Basis of `{v : M·v = 0}`, one vector per non-pivot column.
    pub fn kernel_basis(&self) -> FpBasis {
        let ech = Echelon::of_rows(self.p, self.cols, self.entries.iter().cloned());
        let p = self.p;
        let pivot_cols: Vec<usize> = ech.rows.iter().map(|r| r[0].0).collect();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivot_cols {
            is_pivot[c] = true;
        }
        let mut vectors = Vec::new();
        for f in (0..self.cols).filter(|c| !is_pivot[*c]) {
            let mut v = vec![0; self.cols];
            v[f] = 1;
            for (r, &c) in ech.rows.iter().zip(&pivot_cols) {
                if let Ok(k) = r.binary_search_by_key(&f, |e| e.0) {
                    v[c] = p.neg(r[k].1);
                }
            }
            vectors.push(v);
        }
        FpBasis::new(p, self.cols, vectors)
    }

    /// Basis of the column space made of original columns, each with the
    /// unit preimage that produces it.
    pub fn image_basis(&self) -> ImageBasis {
        let ech = Echelon::of_rows(self.p, self.cols, self.entries.iter().cloned());
        let mut vectors = Vec::new();
        let mut certificates = Vec::new();
        for r in &ech.rows {
            let c = r[0].0;
            vectors.push(self.column(c));
            let mut e = vec![0; self.cols];
            e[c] = 1;
            certificates.push(e);
        }
        ImageBasis { basis: FpBasis::new(self.p, self.rows, vectors), certificates }
    }
}

/// Reduced row echelon form: each row starts with a 1 in its pivot column
/// and no other row has a nonzero entry there. Rows are sorted by pivot.
#[derive(Debug, Clone)]
struct Echelon {
    rows: Vec<SparseRow>,
}

impl Echelon {
    fn of_rows<I: IntoIterator<Item = SparseRow>>(p: Prime, cols: usize, rows: I) -> Echelon {
        let rows: Vec<SparseRow> = rows.into_iter().collect();
        let n = rows.len();
        let mut pivots: Vec<SparseRow> = Vec::new();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
        let mut fill = 0usize;
        let limit = (n * cols) / 4;
        let mut iter = rows.into_iter();
        while let Some(row) = iter.next() {
            if fill > limit && limit > 0 {
                let rest: Vec<SparseRow> = std::iter::once(row).chain(iter).collect();
                return Echelon::dense(p, cols, pivots, rest);
            }
            let mut r = reduce_against(p, row, &pivots, &pivot_of_col);
            let Some(&(c, lead)) = r.first() else { continue };
            let inv = p.inv(lead);
            for e in r.iter_mut() {
                e.1 = p.mul(e.1, inv);
            }
            for other in pivots.iter_mut() {
                if let Ok(k) = other.binary_search_by_key(&c, |e| e.0) {
                    let f = p.neg(other[k].1);
                    let old = other.len();
                    *other = axpy(p, other, f, &r);
                    fill = (fill + other.len()).saturating_sub(old);
                }
            }
            fill += r.len();
            pivot_of_col[c] = Some(pivots.len());
            pivots.push(r);
        }
        Echelon::finish(pivots)
    }

    fn dense(p: Prime, cols: usize, pivots: Vec<SparseRow>, rest: Vec<SparseRow>) -> Echelon {
        let to_dense = |r: &SparseRow| {
            let mut d = vec![0u32; cols];
            for &(j, v) in r {
                d[j] = v;
            }
            d
        };
        let mut piv: Vec<(usize, Vec<u32>)> = pivots.iter().map(|r| (r[0].0, to_dense(r))).collect();
        for row in rest {
            let mut d = to_dense(&row);
            for (c, pr) in &piv {
                let f = d[*c];
                if f != 0 {
                    let f = p.neg(f);
                    for (x, y) in d.iter_mut().zip(pr) {
                        if *y != 0 {
                            *x = p.add(*x, p.mul(f, *y));
                        }
                    }
                }
            }
            let Some(c) = d.iter().position(|&v| v != 0) else { continue };
            let inv = p.inv(d[c]);
            for x in d.iter_mut() {
                *x = p.mul(*x, inv);
            }
            for (_, pr) in piv.iter_mut() {
                let f = pr[c];
                if f != 0 {
                    let f = p.neg(f);
                    for (x, y) in pr.iter_mut().zip(&d) {
                        if *y != 0 {
                            *x = p.add(*x, p.mul(f, *y));
                        }
                    }
                }
            }
            piv.push((c, d));
        }
        let rows = piv
            .into_iter()
            .map(|(_, d)| d.into_iter().enumerate().filter(|e| e.1 != 0).collect())
            .collect();
        Echelon::finish(rows)
    }

    fn finish(mut rows: Vec<SparseRow>) -> Echelon {
        rows.sort_by_key(|r| r[0].0);
        Echelon { rows }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

fn reduce_against(p: Prime, mut r: SparseRow, pivots: &[SparseRow], pivot_of_col: &[Option<usize>]) -> SparseRow {
    let mut k = 0;
    while k < r.len() {
        let (c, v) = r[k];
        if let Some(i) = pivot_of_col[c] {
            r = axpy(p, &r, p.neg(v), &pivots[i]);
            // entries before k are untouched: pivot rows vanish on earlier pivot columns
            // and r's own earlier entries sit at non-pivot columns.
            continue;
        }
        k += 1;
    }
    r
}

/// `a + f·b` on sorted sparse rows.
fn axpy(p: Prime, a: &[(usize, u32)], f: u32, b: &[(usize, u32)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map_or(usize::MAX, |e| e.0);
        let cb = b.get(j).map_or(usize::MAX, |e| e.0);
        if ca < cb {
            out.push(a[i]);
            i += 1;
        } else if cb < ca {
            let v = p.mul(f, b[j].1);
            if v != 0 {
                out.push((cb, v));
            }
            j += 1;
        } else {
            let v = p.add(a[i].1, p.mul(f, b[j].1));
            if v != 0 {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Linearly independent coordinate vectors in F_p^n, optionally labelled
/// by the monomials indexing the coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FpBasis {
    p: Prime,
    ambient_dim: usize,
    vectors: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    labels: Vec<Monomial>,
}

impl FpBasis {
    pub fn new(p: Prime, ambient_dim: usize, vectors: Vec<Vec<u32>>) -> Self {
        debug_assert!(vectors.iter().all(|v| v.len() == ambient_dim));
        FpBasis { p, ambient_dim, vectors, labels: Vec::new() }
    }

    pub fn empty(p: Prime, ambient_dim: usize) -> Self {
        FpBasis::new(p, ambient_dim, Vec::new())
    }

    pub fn standard(p: Prime, n: usize) -> Self {
        FpBasis::new(p, n, (0..n).map(|i| unit(n, i)).collect())
    }

    pub fn with_labels(mut self, labels: Vec<Monomial>) -> Self {
        assert_eq!(labels.len(), self.ambient_dim, "one label per coordinate");
        self.labels = labels;
        self
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[Vec<u32>] {
        &self.vectors
    }

    pub fn labels(&self) -> &[Monomial] {
        &self.labels
    }

    /// Rank of the vectors; equals `len()` for a genuine basis.
    pub fn rank(&self) -> usize {
        vectors_rank(self.p, self.ambient_dim, &self.vectors)
    }

    /// Whether both families span the same subspace.
    pub fn same_span(&self, other: &FpBasis) -> bool {
        if self.ambient_dim != other.ambient_dim {
            return false;
        }
        let r1 = self.rank();
        let r2 = other.rank();
        let mut all = self.vectors.clone();
        all.extend(other.vectors.iter().cloned());
        r1 == r2 && vectors_rank(self.p, self.ambient_dim, &all) == r1
    }

    /// Returns the coordinates of `v` if it lies in the span. Assumes the
    /// vectors are independent, so the coordinates are unique.
    pub fn in_span(&self, v: &[u32]) -> Result<Option<Vec<u32>>> {
        if v.len() != self.ambient_dim {
            return Err(AlgebraError::DimensionMismatch { expected: self.ambient_dim, got: v.len() });
        }
        let p = self.p;
        let k = self.vectors.len();
        let n = self.ambient_dim;
        // Rows [b_i | e_i]; eliminate on the first n columns only.
        let rows = self.vectors.iter().enumerate().map(|(i, b)| {
            let mut r: SparseRow = b.iter().enumerate().filter(|e| *e.1 % p.get() != 0).map(|(j, &x)| (j, x % p.get())).collect();
            r.push((n + i, 1));
            r
        });
        let mut pivots: Vec<SparseRow> = Vec::new();
        let mut pivot_of_col: Vec<Option<usize>> = vec![None; n + k];
        for row in rows {
            let mut r = reduce_against(p, row, &pivots, &pivot_of_col);
            let Some(&(c, lead)) = r.first() else { continue };
            if c >= n {
                // dependent family; the combination is discarded
                continue;
            }
            let inv = p.inv(lead);
            for e in r.iter_mut() {
                e.1 = p.mul(e.1, inv);
            }
            pivot_of_col[c] = Some(pivots.len());
            pivots.push(r);
        }
        let target: SparseRow = v.iter().enumerate().filter(|e| *e.1 % p.get() != 0).map(|(j, &x)| (j, x % p.get())).collect();
        let reduced = reduce_against(p, target, &pivots, &pivot_of_col);
        if reduced.first().is_some_and(|e| e.0 < n) {
            return Ok(None);
        }
        // v - Σ c_i b_i = 0 with the tail recording -c_i.
        let mut coords = vec![0; k];
        for (j, x) in reduced {
            coords[j - n] = p.neg(x);
        }
        Ok(Some(coords))
    }
}

/// An image basis together with preimages: `M·certificates[i] = basis[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImageBasis {
    pub basis: FpBasis,
    pub certificates: Vec<Vec<u32>>,
}

impl ImageBasis {
    /// Re-multiplies every certificate and compares.
    pub fn check(&self, m: &FpMatrix) -> bool {
        self.basis
            .vectors()
            .iter()
            .zip(&self.certificates)
            .all(|(b, c)| m.mul_vec(c).map(|x| &x == b).unwrap_or(false))
    }
}

pub fn unit(n: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

/// Rank of a family of dense vectors of length `n`.
pub fn vectors_rank(p: Prime, n: usize, vectors: &[Vec<u32>]) -> usize {
    let rows = vectors
        .iter()
        .map(|v| v.iter().enumerate().filter(|e| *e.1 % p.get() != 0).map(|(j, &x)| (j, x % p.get())).collect());
    Echelon::of_rows(p, n, rows).rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn trivial_ranks() {
        assert_eq!(FpMatrix::zero(p(2), 0, 0).rank(), 0);
        assert_eq!(FpMatrix::identity(p(2), 3).rank(), 3);
        assert_eq!(FpMatrix::from_dense(p(2), &[vec![1]], 1).rank(), 1);
    }

    #[test]
    fn kernels() {
        assert!(FpMatrix::identity(p(3), 4).kernel_basis().is_empty());
        let k = FpMatrix::from_dense(p(2), &[vec![1, 1]], 2).kernel_basis();
        assert_eq!(k.vectors(), &[vec![1, 1]]);
        let m = FpMatrix::from_dense(p(5), &[vec![1, 2, 3], vec![2, 4, 1]], 3);
        for v in m.kernel_basis().vectors() {
            assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn images() {
        let z = FpMatrix::zero(p(3), 2, 2);
        assert!(z.image_basis().basis.is_empty());
        let id = FpMatrix::identity(p(3), 2);
        let im = id.image_basis();
        assert_eq!(im.basis.vectors(), &[vec![1, 0], vec![0, 1]]);
        assert!(im.check(&id));
    }

    #[test]
    fn span_membership() {
        let b = FpBasis::new(p(3), 3, vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(b.in_span(&[0, 0, 0]).unwrap(), Some(vec![0, 0]));
        assert_eq!(b.in_span(&[1, 1, 2]).unwrap(), Some(vec![1, 1]));
        assert_eq!(b.in_span(&[2, 1, 0]).unwrap(), Some(vec![2, 1]));
        assert_eq!(b.in_span(&[1, 0, 0]).unwrap(), None);
        assert_eq!(FpBasis::empty(p(3), 3).in_span(&[1, 0, 0]).unwrap(), None);
        assert!(matches!(b.in_span(&[1]), Err(AlgebraError::DimensionMismatch { .. })));
    }

    fn dense_rank(pr: Prime, mut m: Vec<Vec<u32>>) -> usize {
        let mut rank = 0;
        let cols = m.first().map_or(0, Vec::len);
        for c in 0..cols {
            let Some(r) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
            m.swap(rank, r);
            let inv = pr.inv(m[rank][c]);
            let pivot: Vec<u32> = m[rank].iter().map(|&x| pr.mul(x, inv)).collect();
            for (i, row) in m.iter_mut().enumerate() {
                if i != rank && row[c] != 0 {
                    let f = pr.neg(row[c]);
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x = pr.add(*x, pr.mul(f, *y));
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn matrix_strategy() -> impl Strategy<Value = (u32, Vec<Vec<u32>>)> {
        (prop_oneof![Just(2u32), Just(3), Just(5)], 1usize..60, 1usize..60, 0.02f64..0.6).prop_flat_map(|(pr, r, c, dens)| {
            let cell = prop_oneof![
                ((1.0 - dens).max(0.01) * 100.0) as u32 => Just(0u32),
                (dens * 100.0).max(1.0) as u32 => 1..pr,
            ];
            (Just(pr), proptest::collection::vec(proptest::collection::vec(cell, c), r))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn rank_is_transpose_invariant((pr, d) in matrix_strategy()) {
            let pr = p(pr);
            let cols = d[0].len();
            let m = FpMatrix::from_dense(pr, &d, cols);
            let r = m.rank();
            prop_assert_eq!(r, m.transpose().rank());
            prop_assert_eq!(r, dense_rank(pr, d));
            let k = m.kernel_basis();
            prop_assert_eq!(k.len() + r, cols);
            for v in k.vectors() {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(|&x| x == 0));
            }
            let im = m.image_basis();
            prop_assert_eq!(im.basis.len(), r);
            prop_assert!(im.check(&m));
        }
    }

    #[test]
    fn large_sparse_transpose() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for &pr in &[2u32, 3, 5] {
            let prime = p(pr);
            let mut m = FpMatrix::zero(prime, 200, 200);
            for _ in 0..600 {
                let (i, j) = (rng.random_range(0..200), rng.random_range(0..200));
                m.set(i, j, rng.random_range(1..pr));
            }
            assert_eq!(m.rank(), m.transpose().rank());
            assert_eq!(m.rank(), dense_rank(prime, m.to_dense()));
        }
    }
}
