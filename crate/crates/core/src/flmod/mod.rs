//! Finite-length graded modules over the coordinate ring of the quadric.
//!
//! A module is stored as its graded pieces M_d (standard bases) and the four
//! operators x0..x3: M_d → M_{d+1}.

pub mod iso;
pub mod presentation;
pub mod sigma;

use std::collections::BTreeMap;
use std::fmt;

use crate::bipoly::{monomial_basis, BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{Field, Matrix, Vector};

pub use iso::{hom_space, module_iso, random_invertible, GradedMap};
pub use presentation::{
    minimal_generators, minimal_presentation, module_from_kernel, module_from_monad, BundleModule,
    MinimalPresentation,
};
pub use sigma::{sigma_modules, socle_subspace, Family, FamilyKind, GradedSubspace, TriDiag, Var};

#[derive(Clone, PartialEq, Eq)]
pub struct FinLengthModule {
    field: Field,
    lo: i64,
    dims: Vec<usize>,
    /// `ops[k][i]` is x_i: M_{lo+k} → M_{lo+k+1}.
    ops: Vec<[Matrix; 4]>,
}

impl fmt::Debug for FinLengthModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinLengthModule(lo={}, dims={:?})", self.lo, self.dims)
    }
}

impl FinLengthModule {
    /// Builds a module from its pieces; `ops[k][i]` maps degree `lo + k` to
    /// `lo + k + 1`. Shapes are checked, relations are not (see `validate`).
    pub fn new(field: Field, lo: i64, dims: Vec<usize>, ops: Vec<[Matrix; 4]>) -> Result<FinLengthModule> {
        if ops.len() != dims.len() {
            return Err(Error::InvalidModule(format!(
                "{} operator blocks for {} degrees",
                ops.len(),
                dims.len()
            )));
        }
        for (k, block) in ops.iter().enumerate() {
            let next = dims.get(k + 1).copied().unwrap_or(0);
            for (i, m) in block.iter().enumerate() {
                if m.rows() != next || m.cols() != dims[k] {
                    return Err(Error::InvalidModule(format!(
                        "x{i} in degree {} has shape {}x{}, expected {}x{}",
                        lo + k as i64,
                        m.rows(),
                        m.cols(),
                        next,
                        dims[k]
                    )));
                }
                if m.field() != field {
                    return Err(Error::InvalidModule("operator over a different field".into()));
                }
            }
        }
        Ok(FinLengthModule { field, lo, dims, ops }.trimmed())
    }

    /// Module with all operators zero.
    pub fn trivial(field: Field, lo: i64, dims: Vec<usize>) -> FinLengthModule {
        let ops = (0..dims.len())
            .map(|k| {
                let next = dims.get(k + 1).copied().unwrap_or(0);
                std::array::from_fn(|_| Matrix::zeros(field, next, dims[k]))
            })
            .collect();
        FinLengthModule { field, lo, dims, ops }.trimmed()
    }

    pub fn zero(field: Field) -> FinLengthModule {
        FinLengthModule {
            field,
            lo: 0,
            dims: Vec::new(),
            ops: Vec::new(),
        }
    }

    fn trimmed(mut self) -> FinLengthModule {
        while self.dims.last() == Some(&0) {
            self.dims.pop();
            self.ops.pop();
            if let Some(last) = self.ops.last_mut() {
                let c = *self.dims.last().unwrap();
                *last = std::array::from_fn(|_| Matrix::zeros(self.field, 0, c));
            }
        }
        while self.dims.first() == Some(&0) {
            self.dims.remove(0);
            self.ops.remove(0);
            self.lo += 1;
        }
        if self.dims.is_empty() {
            self.lo = 0;
        }
        self
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    /// Lowest and highest nonzero degree.
    pub fn support(&self) -> Option<(i64, i64)> {
        if self.dims.is_empty() {
            None
        } else {
            Some((self.lo, self.lo + self.dims.len() as i64 - 1))
        }
    }

    pub fn degrees(&self) -> Vec<i64> {
        match self.support() {
            Some((lo, hi)) => (lo..=hi).collect(),
            None => Vec::new(),
        }
    }

    pub fn dim(&self, d: i64) -> usize {
        if d < self.lo {
            return 0;
        }
        self.dims.get((d - self.lo) as usize).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    /// x_i: M_d → M_{d+1}.
    pub fn op(&self, i: usize, d: i64) -> Matrix {
        if d >= self.lo {
            if let Some(block) = self.ops.get((d - self.lo) as usize) {
                return block[i].clone();
            }
        }
        Matrix::zeros(self.field, self.dim(d + 1), self.dim(d))
    }

    /// Action of the monomial s^i t^(k-i) u^j v^(k-j) from M_d to M_{d+k}.
    pub fn act_monomial(&self, k: i64, i: i64, j: i64, d: i64) -> Matrix {
        let mut m = Matrix::identity(self.field, self.dim(d));
        for p in 0..k {
            let first = if p < i { 0 } else { 2 };
            let second = if p < j { 0 } else { 1 };
            m = self.op(first + second, d + p).mul(&m);
        }
        m
    }

    /// Action of a form of bidegree (k,k) from M_d to M_{d+k}.
    pub fn act_form(&self, f: &BiForm, d: i64) -> Matrix {
        let k = f.degree().a;
        assert_eq!(f.degree(), BiDegree::diag(k), "only diagonal forms act on the module");
        let mut m = Matrix::zeros(self.field, self.dim(d + k), self.dim(d));
        for (i, j, c) in f.terms() {
            m = m.add(&self.act_monomial(k, i, j, d).scale(c));
        }
        m
    }

    /// Checks commutativity and the quadric relation.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        for d in self.degrees() {
            let x: Vec<Matrix> = (0..4).map(|i| self.op(i, d)).collect();
            let y: Vec<Matrix> = (0..4).map(|i| self.op(i, d + 1)).collect();
            for i in 0..4 {
                for j in (i + 1)..4 {
                    if y[i].mul(&x[j]) != y[j].mul(&x[i]) {
                        problems.push(format!("x{i} and x{j} do not commute from degree {d}"));
                    }
                }
            }
            if y[0].mul(&x[3]) != y[1].mul(&x[2]) {
                problems.push(format!("x0*x3 ≠ x1*x2 from degree {d}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidModule(problems.join("; ")))
        }
    }

    /// Image of all x_i from degree d-1, as a list of spanning vectors in M_d.
    pub fn image_from_below(&self, d: i64) -> Vec<Vector> {
        (0..4).flat_map(|i| self.op(i, d - 1).columns()).collect()
    }

    /// Monomials of degree k with the matrix of their action from M_d.
    pub fn monomial_actions(&self, k: i64, d: i64) -> Vec<Matrix> {
        monomial_basis(BiDegree::diag(k))
            .into_iter()
            .map(|(i, j)| self.act_monomial(k, i, j, d))
            .collect()
    }

    /// Pieces as a degree-indexed map.
    pub fn dims_map(&self) -> BTreeMap<i64, usize> {
        self.degrees().into_iter().map(|d| (d, self.dim(d))).collect()
    }
}
