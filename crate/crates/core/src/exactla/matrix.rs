//! Dense matrices over a [`Field`] with deterministic Gaussian elimination.
//!
//! Pivots are always the first nonzero entry in the current column, so every
//! basis produced here (kernels, complements, quotient coordinates) is a pure
//! function of the input.

use std::fmt;

use super::field::{Field, FieldElem};
use crate::error::{Error, Result};

pub type Vector = Vec<FieldElem>;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = FieldElem;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &FieldElem {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut FieldElem {
        &mut self.data[r * self.cols + c]
    }
}

/// Reduced row echelon form together with its pivot columns.
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

/// Coordinates on a quotient `k^n / U`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientData {
    /// `n x q` matrix whose columns are standard vectors spanning a complement of `U`.
    pub coset_basis: Matrix,
    /// `q x n` surjection with kernel exactly `U`.
    pub projection: Matrix,
}

impl QuotientData {
    pub fn dim(&self) -> usize {
        self.projection.rows()
    }

    pub fn ambient_dim(&self) -> usize {
        self.projection.cols()
    }

    /// Representative in the ambient space of a quotient vector.
    pub fn lift(&self, v: &[FieldElem]) -> Vector {
        self.coset_basis.mul_vec(v)
    }

    pub fn project(&self, v: &[FieldElem]) -> Vector {
        self.projection.mul_vec(v)
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: Field, rows: usize, cols: usize, entries: Vec<FieldElem>) -> Matrix {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        Matrix {
            field,
            rows,
            cols,
            data: entries,
        }
    }

    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c);
                row.iter().map(move |&x| field.from_i64(x))
            })
            .collect();
        Matrix::from_rows(field, r, c, data)
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] = &out[(i, j)] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[FieldElem]) -> Vector {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Matrix::from_rows(self.field, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Matrix::from_rows(self.field, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &FieldElem) -> Matrix {
        let data = self.data.iter().map(|a| a * c).collect();
        Matrix::from_rows(self.field, self.rows, self.cols, data)
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out[(r, c)] = self[(r, c)].clone();
            }
            for c in 0..other.cols {
                out[(r, self.cols + c)] = other[(r, c)].clone();
            }
        }
        out
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix::from_rows(self.field, self.rows + other.rows, self.cols, data)
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)].clone();
            }
        }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let mut out = Matrix::zeros(self.field, rows.len(), cols.len());
        for (i, r) in rows.clone().enumerate() {
            for (j, c) in cols.clone().enumerate() {
                out[(i, j)] = self[(r, c)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    /// Only the first `limit_cols` columns are eligible as pivots.
    fn reduce_in_place(&mut self, limit_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..limit_cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, p);
            let inv = self[(r, c)].inv();
            for j in c..self.cols {
                self[(r, j)] = &self[(r, j)] * &inv;
            }
            for i in 0..self.rows {
                if i == r || self[(i, c)].is_zero() {
                    continue;
                }
                let factor = self[(i, c)].clone();
                for j in c..self.cols {
                    if !self[(r, j)].is_zero() {
                        let d = &factor * &self[(r, j)];
                        self[(i, j)] = &self[(i, j)] - &d;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(m.cols);
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let Rref { matrix, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![self.field.zero(); self.cols];
                v[free] = self.field.one();
                for (row, &p) in pivots.iter().enumerate() {
                    v[p] = -&matrix[(row, free)];
                }
                v
            })
            .collect()
    }

    /// Solves `self * x = rhs`; free variables are set to zero.
    pub fn solve(&self, rhs: &[FieldElem]) -> Result<Vector> {
        assert_eq!(rhs.len(), self.rows, "rhs length mismatch");
        let b = Matrix::from_columns(self.field, self.rows, &[rhs.to_vec()]);
        Ok(self.solve_many(&b)?.column(0))
    }

    /// Solves `self * X = rhs` column by column against one elimination.
    pub fn solve_many(&self, rhs: &Matrix) -> Result<Matrix> {
        assert_eq!(rhs.rows, self.rows, "rhs row mismatch");
        let mut aug = self.hstack(rhs);
        let pivots = aug.reduce_in_place(self.cols);
        let rank = pivots.len();
        for r in rank..self.rows {
            for c in self.cols..aug.cols {
                if !aug[(r, c)].is_zero() {
                    return Err(Error::NoSolution);
                }
            }
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (row, &p) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(p, j)] = aug[(row, self.cols + j)].clone();
            }
        }
        Ok(x)
    }

    /// Basis of the column space, as a list of independent columns of `self`.
    pub fn column_space(&self) -> Vec<Vector> {
        let pivots = self.rref().pivots;
        pivots.into_iter().map(|c| self.column(c)).collect()
    }

    /// True iff square and of full rank.
    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::NoSolution);
        }
        let x = self.solve_many(&Matrix::identity(self.field, self.rows))?;
        if self.rank() != self.rows {
            return Err(Error::NoSolution);
        }
        Ok(x)
    }
}

/// Quotient of `k^ambient_dim` by the span of `subspace`.
pub fn quotient_data(field: Field, ambient_dim: usize, subspace: &[Vector]) -> QuotientData {
    let sub = Matrix::from_columns(field, ambient_dim, subspace).transpose();
    let Rref { matrix, pivots } = sub.rref();
    let mut is_pivot = vec![false; ambient_dim];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..ambient_dim).filter(|&c| !is_pivot[c]).collect();
    let q = free.len();
    let mut coset = Matrix::zeros(field, ambient_dim, q);
    let mut proj = Matrix::zeros(field, q, ambient_dim);
    for (k, &j) in free.iter().enumerate() {
        coset[(j, k)] = field.one();
        proj[(k, j)] = field.one();
        for (row, &p) in pivots.iter().enumerate() {
            proj[(k, p)] = -&matrix[(row, j)];
        }
    }
    QuotientData {
        coset_basis: coset,
        projection: proj,
    }
}

/// Incrementally maintained echelon basis of a subspace of `k^n`.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    rows: Vec<(usize, Vector)>,
}

impl Echelon {
    pub fn new(field: Field, dim: usize) -> Echelon {
        Echelon {
            field,
            dim,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residue of `v` after eliminating against the stored rows.
    pub fn reduce(&self, v: &[FieldElem]) -> Vector {
        assert_eq!(v.len(), self.dim);
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (a, b) in w.iter_mut().zip(row) {
                    if !b.is_zero() {
                        *a = &*a - &(&f * b);
                    }
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` to the span; returns false if it was already there.
    pub fn insert(&mut self, v: &[FieldElem]) -> bool {
        let mut w = self.reduce(v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = w[p].inv();
        for x in w.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.push((p, w));
        true
    }

    pub fn field(&self) -> Field {
        self.field
    }
}

/// Indices of `candidates` forming a basis of `span(base ∪ candidates)` modulo `span(base)`,
/// chosen greedily in order.
pub fn complement_indices(field: Field, dim: usize, base: &[Vector], candidates: &[Vector]) -> Vec<usize> {
    let mut ech = Echelon::new(field, dim);
    for b in base {
        ech.insert(b);
    }
    candidates
        .iter()
        .enumerate()
        .filter_map(|(i, c)| ech.insert(c).then_some(i))
        .collect()
}

/// Dimension of the span of a list of vectors.
pub fn span_rank(field: Field, dim: usize, vectors: &[Vector]) -> usize {
    let mut ech = Echelon::new(field, dim);
    vectors.iter().filter(|v| ech.insert(v)).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rationals
    }

    #[test]
    fn rank_examples() {
        let f = Field::default();
        assert_eq!(Matrix::identity(f, 2).rank(), 2);
        assert_eq!(Matrix::zeros(f, 3, 4).rank(), 0);
        assert_eq!(Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        let f = Field::default();
        assert!(Matrix::identity(f, 3).kernel_basis().is_empty());
        let k = Matrix::zeros(f, 2, 3).kernel_basis();
        assert_eq!(k.len(), 3);
        assert_eq!(span_rank(f, 3, &k), 3);
        let m = Matrix::from_i64(f, &[&[1, 1, 0]]);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        assert_eq!(span_rank(f, 3, &k), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn solve_examples() {
        let f = Field::default();
        let rhs = vec![f.from_i64(4), f.from_i64(-7)];
        assert_eq!(Matrix::identity(f, 2).solve(&rhs).unwrap(), rhs);
        let m = Matrix::from_i64(f, &[&[1, 0], &[0, 0]]);
        assert!(matches!(
            m.solve(&[f.from_i64(0), f.from_i64(1)]),
            Err(Error::NoSolution)
        ));
        let f5 = Field::Prime(5);
        let x = Matrix::from_i64(f5, &[&[2]]).solve(&[f5.from_i64(1)]).unwrap();
        assert_eq!(x, vec![f5.from_i64(3)]);
    }

    #[test]
    fn quotient_examples() {
        let f = Field::default();
        let qd = quotient_data(f, 3, &[]);
        assert_eq!(qd.projection, Matrix::identity(f, 3));
        let all = vec![vec![f.one(), f.zero()], vec![f.one(), f.one()]];
        assert_eq!(quotient_data(f, 2, &all).dim(), 0);
        let e12 = vec![f.one(), f.one(), f.zero()];
        let qd = quotient_data(f, 3, std::slice::from_ref(&e12));
        assert_eq!(qd.dim(), 2);
        assert!(qd.project(&e12).iter().all(|x| x.is_zero()));
        assert_eq!(qd.projection.rank(), 2);
        // lift then project is the identity on the quotient
        assert_eq!(qd.projection.mul(&qd.coset_basis), Matrix::identity(f, 2));
    }

    #[test]
    fn inverse_roundtrip() {
        let f = Field::default();
        let m = Matrix::from_i64(f, &[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(f, 2));
        assert!(Matrix::from_i64(f, &[&[1, 2], &[2, 4]]).inverse().is_err());
    }

    #[test]
    fn complement_is_greedy() {
        let f = Field::default();
        let base = vec![vec![f.one(), f.zero()]];
        let cands = vec![vec![f.from_i64(3), f.zero()], vec![f.one(), f.one()], vec![f.zero(), f.one()]];
        assert_eq!(complement_indices(f, 2, &base, &cands), vec![1]);
    }
}
