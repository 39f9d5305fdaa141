//! Line bundle summands of a kernel presentation: detection through the
//! composition pairing, splitting them off, and removing unit entries.

use std::collections::BTreeSet;

use super::lift::hom_kernel;
use super::{coker_quotient, KerPresentation};
use crate::bipoly::{BiDegree, Twist};
use crate::error::{Error, Result};
use crate::exactla::Matrix;
use crate::linecoh::{kunneth_dim, FormMatrix};

/// Basis of Hom(O(l), E) as columns `O(l) → A` killed by `g`.
pub fn hom_line_to_ker(p: &KerPresentation, l: Twist) -> Vec<FormMatrix> {
    hom_kernel(p.g(), l)
}

/// Representatives of Hom(E, O(l)) = Hom(A, O(l)) / Hom(B, O(l))·g as rows
/// `A → O(l)`. Needs Ext¹(B, O(l)) = 0.
pub fn hom_ker_to_line(p: &KerPresentation, l: Twist) -> Result<Vec<FormMatrix>> {
    if p.b().dual().h_dim(1, l) != 0 {
        return Err(Error::PrereqVanishingFailed(format!("Ext¹(B, O{l}) ≠ 0")));
    }
    let gt = p.g().transpose();
    let q = coker_quotient(&gt.induced_h(0, l));
    let a_dual = gt.dst().clone();
    Ok(q.coset_basis
        .columns()
        .into_iter()
        .map(|v| FormMatrix::column_from_vector(p.field(), &a_dual, -l, &v).transpose())
        .collect())
}

/// The composition pairing Hom(O(l), E) × Hom(E, O(l)) → k.
pub struct Pairing {
    /// Entry (i, j) is the scalar `rows[j] ∘ cols[i]`.
    pub matrix: Matrix,
    pub cols: Vec<FormMatrix>,
    pub rows: Vec<FormMatrix>,
}

pub fn summand_pairing(p: &KerPresentation, l: Twist) -> Result<Pairing> {
    let cols = hom_line_to_ker(p, l);
    let rows = hom_ker_to_line(p, l)?;
    let mut matrix = Matrix::zeros(p.field(), cols.len(), rows.len());
    for (i, c) in cols.iter().enumerate() {
        for (j, r) in rows.iter().enumerate() {
            matrix[(i, j)] = r.compose(c).entry(0, 0).constant_value();
        }
    }
    Ok(Pairing { matrix, cols, rows })
}

#[derive(Clone, Debug)]
pub struct StripReport {
    pub presentation: KerPresentation,
    pub removed: Vec<Twist>,
}

/// Splits off one copy of O(l) given `phi: O(l) → A` with `g·phi = 0` and a
/// nonzero constant entry in a summand of A isomorphic to O(l).
fn split_off(p: &KerPresentation, phi: &FormMatrix) -> Result<KerPresentation> {
    let l = phi.src().twists()[0];
    let a = p.a();
    let k = (0..a.rank())
        .find(|&k| a.twists()[k] == l && !phi.entry(k, 0).constant_value().is_zero())
        .ok_or_else(|| Error::InternalInvariantViolation(format!("split section of O{l} has no unit entry")))?;
    // with T the identity whose column k is replaced by phi, g·T is g with
    // column k zeroed, and T is invertible
    let keep: Vec<usize> = (0..a.rank()).filter(|&j| j != k).collect();
    let g2 = p.g().select_columns(&keep);
    Ok(KerPresentation::new_unchecked(g2))
}

/// Removes every ACM line bundle summand of E, verifying that the
/// cohomology table splits accordingly.
pub fn strip_acm(p: &KerPresentation) -> Result<StripReport> {
    if !p.b().is_free() {
        return Err(Error::PrereqVanishingFailed("stripping needs a free target bundle".into()));
    }
    let mut cur = p.clone();
    let mut removed = Vec::new();
    'outer: loop {
        let candidates: BTreeSet<Twist> = cur.a().twists().iter().copied().filter(|t| t.is_acm()).collect();
        for l in candidates {
            let pairing = summand_pairing(&cur, l)?;
            for i in 0..pairing.matrix.rows() {
                if (0..pairing.matrix.cols()).any(|j| !pairing.matrix[(i, j)].is_zero()) {
                    cur = split_off(&cur, &pairing.cols[i])?;
                    removed.push(l);
                    continue 'outer;
                }
            }
        }
        break;
    }
    if !removed.is_empty() {
        verify_split_table(p, &cur, &removed)?;
    }
    Ok(StripReport {
        presentation: cur,
        removed,
    })
}

fn verify_split_table(before: &KerPresentation, after: &KerPresentation, removed: &[Twist]) -> Result<()> {
    let w = before
        .a()
        .twists()
        .iter()
        .chain(before.b().twists())
        .map(|t| t.a.abs().max(t.b.abs()))
        .max()
        .unwrap_or(0)
        + 2;
    for (e, h) in before.table(-w, w) {
        let mut want = after.h_dims(e);
        for &l in removed {
            for (i, x) in want.iter_mut().enumerate() {
                *x += kunneth_dim(i, l + e);
            }
        }
        if want != h {
            return Err(Error::VerificationFailed(format!(
                "cohomology at {e} is {h:?} but the split parts give {want:?}"
            )));
        }
    }
    Ok(())
}

/// Eliminates unit entries of `g` by Schur complements; the kernel is
/// unchanged up to isomorphism.
pub fn minimize_gamma(p: &KerPresentation) -> KerPresentation {
    let mut g = p.g().clone();
    while let Some((i, k)) = (0..g.rows())
        .flat_map(|i| (0..g.cols()).map(move |k| (i, k)))
        .find(|&(i, k)| g.entry(i, k).is_unit())
    {
        let c_inv = g.entry(i, k).constant_value().inv();
        let rows: Vec<usize> = (0..g.rows()).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..g.cols()).filter(|&c| c != k).collect();
        let rest = g.select_rows(&rows).select_columns(&cols);
        let col_k = g.select_rows(&rows).column(k);
        let row_i = g.row(i).select_columns(&cols);
        let corr = col_k.compose(&row_i).scale(&c_inv);
        g = rest.sub(&corr);
    }
    KerPresentation::new_unchecked(g)
}

/// Twists that occur as ACM summands of A, with multiplicity, in order.
pub fn acm_twists(p: &KerPresentation) -> Vec<BiDegree> {
    p.a().twists().iter().copied().filter(|t| t.is_acm()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::BiForm;
    use crate::exactla::Field;
    use crate::linecoh::SplitBundle;

    fn st(field: Field) -> KerPresentation {
        let a = SplitBundle::repeat(BiDegree::new(-1, 0), 2);
        let b = SplitBundle::new(vec![BiDegree::diag(0)]);
        let g = FormMatrix::new(field, a, b, vec![BiForm::s(field), BiForm::t(field)]).unwrap();
        KerPresentation::new(g).unwrap()
    }

    fn with_summand(p: &KerPresentation, l: Twist) -> KerPresentation {
        let extra = FormMatrix::zero(p.field(), SplitBundle::new(vec![l]), p.b().clone());
        KerPresentation::new_unchecked(p.g().hstack(&extra))
    }

    #[test]
    fn strips_appended_summand() {
        let f = Field::default();
        let p = st(f);
        for l in [BiDegree::diag(-1), BiDegree::sigma1(0), BiDegree::sigma2(-2)] {
            let q = with_summand(&p, l);
            let r = strip_acm(&q).unwrap();
            assert_eq!(r.removed, vec![l]);
            assert_eq!(r.presentation.table(-3, 3), p.table(-3, 3));
        }
        assert!(strip_acm(&p).unwrap().removed.is_empty());
    }

    #[test]
    fn pairing_of_line_itself() {
        let f = Field::default();
        let l = BiDegree::new(-2, 0);
        let g = FormMatrix::zero(f, SplitBundle::new(vec![l]), SplitBundle::empty());
        let p = KerPresentation::new_unchecked(g);
        let pr = summand_pairing(&p, l).unwrap();
        assert_eq!(pr.matrix, Matrix::identity(f, 1));
        let l = BiDegree::sigma1(0);
        let g = FormMatrix::zero(f, SplitBundle::new(vec![l]), SplitBundle::empty());
        let r = strip_acm(&KerPresentation::new_unchecked(g)).unwrap();
        assert!(r.presentation.a().is_empty());
    }

    #[test]
    fn unit_entries_eliminated() {
        let f = Field::default();
        let p = st(f);
        // add a free O summand to A and B connected by a unit
        let a = p.a().sum(&SplitBundle::new(vec![BiDegree::diag(0)]));
        let b = p.b().sum(&SplitBundle::new(vec![BiDegree::diag(0)]));
        let mut g = FormMatrix::zero(f, a, b);
        g.set_entry(0, 0, BiForm::s(f));
        g.set_entry(0, 1, BiForm::t(f));
        g.set_entry(1, 0, BiForm::t(f));
        g.set_entry(1, 2, BiForm::constant(f, f.from_i64(3)));
        let m = minimize_gamma(&KerPresentation::new(g).unwrap());
        assert!(!m.g().has_unit_entry());
        assert_eq!(m.table(-2, 2), p.table(-2, 2));
    }
}
