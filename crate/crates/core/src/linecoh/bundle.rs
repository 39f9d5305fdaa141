//! Split bundles ⊕O(a,b) and matrices of forms between them.

use std::fmt;

use super::cohom::{coh_action, euler_char_line, kunneth_dim};
use crate::bipoly::{form_dim, BiDegree, BiForm, Twist};
use crate::error::{Error, Result};
use crate::exactla::{Field, FieldElem, Matrix, Vector};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SplitBundle {
    twists: Vec<Twist>,
}

impl SplitBundle {
    pub fn new(twists: Vec<Twist>) -> SplitBundle {
        SplitBundle { twists }
    }

    pub fn empty() -> SplitBundle {
        SplitBundle::default()
    }

    /// `n` copies of one line bundle.
    pub fn repeat(t: Twist, n: usize) -> SplitBundle {
        SplitBundle::new(vec![t; n])
    }

    pub fn twists(&self) -> &[Twist] {
        &self.twists
    }

    pub fn rank(&self) -> usize {
        self.twists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.twists.is_empty()
    }

    pub fn c1(&self) -> BiDegree {
        self.twists.iter().fold(BiDegree::default(), |acc, &t| acc + t)
    }

    pub fn euler_char(&self) -> i64 {
        self.twists.iter().map(|&t| euler_char_line(t)).sum()
    }

    pub fn twisted(&self, e: BiDegree) -> SplitBundle {
        SplitBundle::new(self.twists.iter().map(|&t| t + e).collect())
    }

    pub fn dual(&self) -> SplitBundle {
        SplitBundle::new(self.twists.iter().map(|&t| -t).collect())
    }

    pub fn sum(&self, other: &SplitBundle) -> SplitBundle {
        let mut twists = self.twists.clone();
        twists.extend_from_slice(&other.twists);
        SplitBundle::new(twists)
    }

    pub fn is_acm(&self) -> bool {
        self.twists.iter().all(|t| t.is_acm())
    }

    pub fn is_free(&self) -> bool {
        self.twists.iter().all(|t| t.is_free())
    }

    /// h^i of the twist by `e`.
    pub fn h_dim(&self, i: usize, e: BiDegree) -> usize {
        self.twists.iter().map(|&t| kunneth_dim(i, t + e)).sum()
    }

    /// Block offsets of each summand inside H^i(self(e)); has `rank + 1` entries.
    pub fn offsets(&self, i: usize, e: BiDegree) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.rank() + 1);
        let mut acc = 0;
        out.push(0);
        for &t in &self.twists {
            acc += kunneth_dim(i, t + e);
            out.push(acc);
        }
        out
    }

    /// Smallest shift from which H⁰ of every summand is generated by its
    /// lower neighbours: componentwise max of (-a, -b).
    pub fn generation_bound(&self) -> BiDegree {
        self.twists
            .iter()
            .fold(None::<BiDegree>, |acc, &t| {
                let g = -t;
                Some(match acc {
                    None => g,
                    Some(a) => BiDegree::new(a.a.max(g.a), a.b.max(g.b)),
                })
            })
            .unwrap_or_default()
    }
}

impl fmt::Display for SplitBundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twists.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.twists.iter().map(|t| format!("O{t}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A map of split bundles; entry (i,j) is a form of bidegree dst_i - src_j.
#[derive(Clone, PartialEq, Eq)]
pub struct FormMatrix {
    field: Field,
    src: SplitBundle,
    dst: SplitBundle,
    entries: Vec<BiForm>,
}

impl fmt::Debug for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormMatrix[{} -> {}] {}", self.src, self.dst, self)
    }
}

impl fmt::Display for FormMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows())
            .map(|i| {
                (0..self.cols())
                    .map(|j| self.entry(i, j).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl FormMatrix {
    pub fn new(field: Field, src: SplitBundle, dst: SplitBundle, entries: Vec<BiForm>) -> Result<FormMatrix> {
        if entries.len() != src.rank() * dst.rank() {
            return Err(Error::Shape(format!(
                "{} entries for a {}x{} form matrix",
                entries.len(),
                dst.rank(),
                src.rank()
            )));
        }
        for i in 0..dst.rank() {
            for j in 0..src.rank() {
                let e = &entries[i * src.rank() + j];
                let want = dst.twists()[i] - src.twists()[j];
                if e.field() != field {
                    return Err(Error::Shape("entry over a different field".into()));
                }
                if e.degree() != want && !(e.is_zero() && !want.is_effective()) {
                    return Err(Error::Shape(format!(
                        "entry ({i},{j}) = {e} has bidegree {}, expected {want}",
                        e.degree()
                    )));
                }
            }
        }
        let entries = entries
            .into_iter()
            .enumerate()
            .map(|(k, e)| {
                let want = dst.twists()[k / src.rank()] - src.twists()[k % src.rank()];
                if e.degree() == want {
                    e
                } else {
                    BiForm::zero(field, want)
                }
            })
            .collect();
        Ok(FormMatrix {
            field,
            src,
            dst,
            entries,
        })
    }

    pub fn from_fn(
        field: Field,
        src: SplitBundle,
        dst: SplitBundle,
        mut f: impl FnMut(usize, usize) -> BiForm,
    ) -> Result<FormMatrix> {
        let mut entries = Vec::with_capacity(src.rank() * dst.rank());
        for i in 0..dst.rank() {
            for j in 0..src.rank() {
                entries.push(f(i, j));
            }
        }
        FormMatrix::new(field, src, dst, entries)
    }

    pub fn zero(field: Field, src: SplitBundle, dst: SplitBundle) -> FormMatrix {
        let mut entries = Vec::with_capacity(src.rank() * dst.rank());
        for &d in dst.twists() {
            for &s in src.twists() {
                entries.push(BiForm::zero(field, d - s));
            }
        }
        FormMatrix {
            field,
            src,
            dst,
            entries,
        }
    }

    pub fn identity(field: Field, bundle: SplitBundle) -> FormMatrix {
        let mut m = FormMatrix::zero(field, bundle.clone(), bundle);
        let n = m.rows();
        for i in 0..n {
            m.entries[i * n + i] = BiForm::one(field);
        }
        m
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn src(&self) -> &SplitBundle {
        &self.src
    }

    pub fn dst(&self) -> &SplitBundle {
        &self.dst
    }

    pub fn rows(&self) -> usize {
        self.dst.rank()
    }

    pub fn cols(&self) -> usize {
        self.src.rank()
    }

    pub fn entry(&self, i: usize, j: usize) -> &BiForm {
        &self.entries[i * self.cols() + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, f: BiForm) {
        let want = self.dst.twists()[i] - self.src.twists()[j];
        assert!(
            f.degree() == want || (f.is_zero() && !want.is_effective()),
            "entry bidegree {} does not match {want}",
            f.degree()
        );
        let cols = self.cols();
        self.entries[i * cols + j] = if f.degree() == want { f } else { BiForm::zero(self.field, want) };
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &FormMatrix) -> FormMatrix {
        assert_eq!(self.src, other.dst, "composing incompatible form matrices");
        let mut out = FormMatrix::zero(self.field, other.src.clone(), self.dst.clone());
        for i in 0..self.rows() {
            for j in 0..other.cols() {
                let want = self.dst.twists()[i] - other.src.twists()[j];
                if !want.is_effective() {
                    continue;
                }
                let mut acc = BiForm::zero(self.field, want);
                for k in 0..self.cols() {
                    let a = self.entry(i, k);
                    let b = other.entry(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b));
                }
                out.entries[i * other.cols() + j] = acc;
            }
        }
        out
    }

    /// The dual map dst^∨ → src^∨.
    pub fn transpose(&self) -> FormMatrix {
        let mut out = FormMatrix::zero(self.field, self.dst.dual(), self.src.dual());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.entries[j * self.rows() + i] = self.entry(i, j).clone();
            }
        }
        out
    }

    /// The same map between the twists by `e`.
    pub fn twisted(&self, e: BiDegree) -> FormMatrix {
        FormMatrix {
            field: self.field,
            src: self.src.twisted(e),
            dst: self.dst.twisted(e),
            entries: self.entries.clone(),
        }
    }

    pub fn add(&self, other: &FormMatrix) -> FormMatrix {
        assert!(self.src == other.src && self.dst == other.dst, "adding incompatible form matrices");
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect();
        FormMatrix {
            entries,
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &FormMatrix) -> FormMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FormMatrix {
        self.scale(&-self.field.one())
    }

    pub fn scale(&self, c: &FieldElem) -> FormMatrix {
        let entries = self.entries.iter().map(|a| a.scale(c)).collect();
        FormMatrix {
            entries,
            ..self.clone()
        }
    }

    /// `[self | other]` from `src ⊕ other.src`.
    pub fn hstack(&self, other: &FormMatrix) -> FormMatrix {
        assert_eq!(self.dst, other.dst, "hstack needs a common target");
        let src = self.src.sum(&other.src);
        let mut entries = Vec::with_capacity(src.rank() * self.rows());
        for i in 0..self.rows() {
            entries.extend((0..self.cols()).map(|j| self.entry(i, j).clone()));
            entries.extend((0..other.cols()).map(|j| other.entry(i, j).clone()));
        }
        FormMatrix {
            field: self.field,
            src,
            dst: self.dst.clone(),
            entries,
        }
    }

    /// `[self ; other]` into `dst ⊕ other.dst`.
    pub fn vstack(&self, other: &FormMatrix) -> FormMatrix {
        assert_eq!(self.src, other.src, "vstack needs a common source");
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        FormMatrix {
            field: self.field,
            src: self.src.clone(),
            dst: self.dst.sum(&other.dst),
            entries,
        }
    }

    pub fn block_diag(&self, other: &FormMatrix) -> FormMatrix {
        let top = self.hstack(&FormMatrix::zero(self.field, other.src.clone(), self.dst.clone()));
        let bottom = FormMatrix::zero(self.field, self.src.clone(), other.dst.clone()).hstack(other);
        top.vstack(&bottom)
    }

    pub fn select_columns(&self, idx: &[usize]) -> FormMatrix {
        let src = SplitBundle::new(idx.iter().map(|&j| self.src.twists()[j]).collect());
        let mut entries = Vec::with_capacity(idx.len() * self.rows());
        for i in 0..self.rows() {
            entries.extend(idx.iter().map(|&j| self.entry(i, j).clone()));
        }
        FormMatrix {
            field: self.field,
            src,
            dst: self.dst.clone(),
            entries,
        }
    }

    pub fn select_rows(&self, idx: &[usize]) -> FormMatrix {
        let dst = SplitBundle::new(idx.iter().map(|&i| self.dst.twists()[i]).collect());
        let mut entries = Vec::with_capacity(idx.len() * self.cols());
        for &i in idx {
            entries.extend((0..self.cols()).map(|j| self.entry(i, j).clone()));
        }
        FormMatrix {
            field: self.field,
            src: self.src.clone(),
            dst,
            entries,
        }
    }

    pub fn column(&self, j: usize) -> FormMatrix {
        self.select_columns(&[j])
    }

    pub fn row(&self, i: usize) -> FormMatrix {
        self.select_rows(&[i])
    }

    /// Values of the entries at a point (s, t, u, v).
    pub fn eval(&self, pt: &[FieldElem; 4]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                m[(i, j)] = self.entry(i, j).eval(pt);
            }
        }
        m
    }

    /// True when some entry is a nonzero constant.
    pub fn has_unit_entry(&self) -> bool {
        self.entries.iter().any(|e| e.is_unit())
    }

    /// Scalar matrix of the constant parts (entries of bidegree (0,0)).
    pub fn constant_part(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                m[(i, j)] = self.entry(i, j).constant_value();
            }
        }
        m
    }

    /// The map H^i(src(e)) → H^i(dst(e)) in the concatenated monomial bases.
    pub fn induced_h(&self, i: usize, e: BiDegree) -> Matrix {
        let ro = self.dst.offsets(i, e);
        let co = self.src.offsets(i, e);
        let mut m = Matrix::zeros(self.field, *ro.last().unwrap(), *co.last().unwrap());
        for r in 0..self.rows() {
            if ro[r + 1] == ro[r] {
                continue;
            }
            for c in 0..self.cols() {
                if co[c + 1] == co[c] {
                    continue;
                }
                let f = self.entry(r, c);
                if f.is_zero() {
                    continue;
                }
                let block = coh_action(f, i, self.src.twists()[c] + e);
                m.set_block(ro[r], co[c], &block);
            }
        }
        m
    }

    /// Coordinates of column `j` as a vector in H⁰(dst(-src_j)).
    pub fn column_vector(&self, j: usize) -> Vector {
        let mut v = Vec::new();
        for i in 0..self.rows() {
            v.extend(self.entry(i, j).coeffs().iter().cloned());
        }
        v
    }

    /// The single-column map O(src) → dst whose coordinates are `v`.
    pub fn column_from_vector(field: Field, dst: &SplitBundle, src: Twist, v: &[FieldElem]) -> FormMatrix {
        let mut entries = Vec::with_capacity(dst.rank());
        let mut pos = 0;
        for &d in dst.twists() {
            let deg = d - src;
            let n = form_dim(deg);
            entries.push(BiForm::from_coeffs(field, deg, v[pos..pos + n].to_vec()));
            pos += n;
        }
        assert_eq!(pos, v.len(), "vector length does not match H⁰ dimension");
        FormMatrix {
            field,
            src: SplitBundle::new(vec![src]),
            dst: dst.clone(),
            entries,
        }
    }

    /// Joins single-column maps side by side.
    pub fn from_columns(field: Field, dst: &SplitBundle, cols: &[FormMatrix]) -> FormMatrix {
        cols.iter()
            .fold(FormMatrix::zero(field, SplitBundle::empty(), dst.clone()), |acc, c| acc.hstack(c))
    }

    /// Stacks single-row maps.
    pub fn from_rows(field: Field, src: &SplitBundle, rows: &[FormMatrix]) -> FormMatrix {
        rows.iter()
            .fold(FormMatrix::zero(field, src.clone(), SplitBundle::empty()), |acc, r| acc.vstack(r))
    }

    /// The same entries read as a map between other bundles with the same
    /// entry bidegrees.
    pub fn with_bundles(&self, src: SplitBundle, dst: SplitBundle) -> Result<FormMatrix> {
        FormMatrix::new(self.field, src, dst, self.entries.clone())
    }

    /// Multiplication by `f` on every summand: `bundle → bundle(deg f)`.
    pub fn scalar(f: &BiForm, bundle: &SplitBundle) -> FormMatrix {
        let field = f.field();
        let mut m = FormMatrix::zero(field, bundle.clone(), bundle.twisted(f.degree()));
        let n = bundle.rank();
        for i in 0..n {
            m.entries[i * n + i] = f.clone();
        }
        m
    }

    /// Largest total degree of a nonzero entry.
    pub fn max_entry_degree(&self) -> i64 {
        self.entries
            .iter()
            .filter(|e| !e.is_zero())
            .map(|e| e.degree().a + e.degree().b)
            .max()
            .unwrap_or(0)
    }
}

/// Outcome of a sheaf-surjectivity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub surjective: bool,
    /// Diagonal shifts at which the H⁰ cokernel was computed, with its dimension.
    pub probes: Vec<(i64, usize)>,
}

/// Decides whether `m` is surjective as a map of sheaves.
///
/// The cokernel of H⁰ at a shift beyond the generation bound of the target
/// vanishing forces vanishing at every larger shift, hence surjectivity.
pub fn sheaf_surjective(m: &FormMatrix) -> Result<SurjectivityReport> {
    if m.dst().is_empty() {
        return Ok(SurjectivityReport {
            surjective: true,
            probes: Vec::new(),
        });
    }
    let gb = m.dst().generation_bound();
    let start = gb.a.max(gb.b) + m.max_entry_degree().max(1);
    let mut probes = Vec::new();
    for w in [start, start + 2, start + 4] {
        let e = BiDegree::diag(w);
        let h = m.induced_h(0, e);
        let coker = h.rows() - h.rank();
        probes.push((w, coker));
        if coker == 0 {
            return Ok(SurjectivityReport {
                surjective: true,
                probes,
            });
        }
    }
    let n = probes.len();
    if probes[n - 1].1 >= probes[n - 2].1 {
        return Ok(SurjectivityReport {
            surjective: false,
            probes,
        });
    }
    Err(Error::Undecided(format!(
        "H⁰ cokernel still shrinking at shift {}: {:?}",
        probes[n - 1].0,
        probes
    )))
}

/// Dimension of the cokernel of H⁰(m(e)).
pub fn h0_coker_dim(m: &FormMatrix, e: BiDegree) -> usize {
    let h = m.induced_h(0, e);
    h.rows() - h.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> Field {
        Field::default()
    }

    fn row(src: &[Twist], forms: &[&str]) -> FormMatrix {
        let f = fp();
        let src = SplitBundle::new(src.to_vec());
        let dst = SplitBundle::new(vec![BiDegree::diag(0)]);
        let entries = forms.iter().map(|p| BiForm::parse(f, p, None).unwrap()).collect();
        FormMatrix::new(f, src, dst, entries).unwrap()
    }

    #[test]
    fn split_dims() {
        let b = SplitBundle::repeat(BiDegree::diag(-1), 4);
        assert_eq!(b.h_dim(0, BiDegree::new(1, 0)), 0);
        let a = SplitBundle::new(vec![
            BiDegree::sigma2(0),
            BiDegree::sigma2(0),
            BiDegree::sigma1(0),
            BiDegree::sigma1(0),
        ]);
        assert_eq!(a.h_dim(0, BiDegree::diag(0)), 8);
        assert_eq!(a.euler_char() - SplitBundle::repeat(BiDegree::diag(1), 2).euler_char(), 0);
        assert_eq!(SplitBundle::new(vec![BiDegree::diag(-1)]).euler_char(), 0);
    }

    #[test]
    fn rejects_bad_bidegree() {
        let f = fp();
        let r = FormMatrix::new(
            f,
            SplitBundle::new(vec![BiDegree::new(-1, 0)]),
            SplitBundle::new(vec![BiDegree::diag(0)]),
            vec![BiForm::u(f)],
        );
        assert!(r.is_err());
    }

    #[test]
    fn surjectivity_examples() {
        let st = row(&[BiDegree::new(-1, 0), BiDegree::new(-1, 0)], &["s", "t"]);
        assert!(sheaf_surjective(&st).unwrap().surjective);
        let s = row(&[BiDegree::new(-1, 0)], &["s"]);
        assert!(!sheaf_surjective(&s).unwrap().surjective);
    }

    #[test]
    fn induced_h_is_functorial() {
        let f = fp();
        let a = row(&[BiDegree::new(-1, 0), BiDegree::new(0, -1)], &["s", "u"]);
        let inner = FormMatrix::from_fn(
            f,
            SplitBundle::repeat(BiDegree::new(-1, -1), 2),
            a.src().clone(),
            |i, j| match (i, j) {
                (0, 0) => BiForm::u(f),
                (1, 1) => BiForm::s(f).scale(&f.from_i64(3)),
                (0, 1) => BiForm::v(f),
                _ => BiForm::t(f),
            },
        )
        .unwrap();
        for i in 0..3 {
            for e in [BiDegree::diag(0), BiDegree::new(-2, 1), BiDegree::new(-1, -1)] {
                let lhs = a.compose(&inner).induced_h(i, e);
                let rhs = a.induced_h(i, e).mul(&inner.induced_h(i, e));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn transpose_is_dual() {
        let a = row(&[BiDegree::new(-1, 0), BiDegree::new(-1, 0)], &["s", "t"]);
        let t = a.transpose();
        assert_eq!(t.src(), &SplitBundle::new(vec![BiDegree::diag(0)]));
        assert_eq!(t.dst(), &SplitBundle::repeat(BiDegree::new(1, 0), 2));
        assert_eq!(t.transpose(), a);
    }
}
