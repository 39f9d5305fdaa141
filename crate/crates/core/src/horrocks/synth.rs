//! Synthesis of a bundle without ACM summands from a Horrocks triple, as the
//! middle homology of a monad `K → L1 ⊕ L′ → L0`.

use std::collections::BTreeSet;

use super::{placed, HorrocksTriple};
use crate::bipoly::{BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{quotient_data, Matrix, Vector};
use crate::flmod::FamilyKind;
use crate::linecoh::{FormMatrix, SplitBundle};
use crate::presheaf::{connecting_delta_spinor, MonadPresentation, Ruling};

/// Lifts one class of W (or V) to a section `w` of F twisted so that `w`
/// is a map from the matching summand of K into L1.
fn lift_class(t: &HorrocksTriple, kind: FamilyKind, d: i64, target: &[crate::exactla::FieldElem]) -> Result<FormMatrix> {
    let field = t.field();
    let psi = &t.presentation.psi;
    let c = placed(d);
    let (ruling, f) = match kind {
        FamilyKind::M10 => (Ruling::Uv, BiDegree::new(-c, 1 - c)),
        FamilyKind::M01 => (Ruling::St, BiDegree::new(1 - c, -c)),
        FamilyKind::M00 => unreachable!("W and V live on the spinor diagonals"),
    };
    let sections = psi.induced_h(0, f).kernel_basis();
    let images: Vec<Vector> = sections
        .iter()
        .map(|w| connecting_delta_spinor(psi, ruling, f, w).map(|h| t.tri.project(kind, d, &h)))
        .collect::<Result<_>>()?;
    let dmat = Matrix::from_columns(field, target.len(), &images);
    let y = dmat.solve(target).map_err(|_| {
        Error::LiftFailed(format!("class in degree {d} of {kind} is not the image of a section of F"))
    })?;
    let n = t.presentation.l1().h_dim(0, f);
    let mut w = vec![field.zero(); n];
    for (coef, s) in y.iter().zip(&sections) {
        for (acc, x) in w.iter_mut().zip(s) {
            *acc = acc.clone() + coef.clone() * x.clone();
        }
    }
    Ok(FormMatrix::column_from_vector(field, t.presentation.l1(), -f, &w))
}

/// Builds a monad whose middle homology E has H¹_*(E) ≅ M and triple
/// isomorphic to `t`.
pub fn synthesize(t: &HorrocksTriple) -> Result<MonadPresentation> {
    let field = t.field();
    let l1 = t.presentation.l1().clone();
    let l0 = t.presentation.l0().clone();
    let psi = t.presentation.psi.clone();

    let mut cols = Vec::new();
    for (kind, sub) in [(FamilyKind::M10, &t.w), (FamilyKind::M01, &t.v)] {
        for d in sub.degrees() {
            for target in sub.basis(d) {
                cols.push(lift_class(t, kind, d, target)?);
            }
        }
    }
    let theta = FormMatrix::from_columns(field, &l1, &cols);
    let k = theta.src().clone();
    if !psi.compose(&theta).is_zero() {
        return Err(Error::InternalInvariantViolation("ψθ ≠ 0".into()));
    }

    // rows ρ: K → O(c,c) completing θᵀ to a surjection on global sections
    let kd = k.dual();
    let theta_t = theta.transpose();
    let degrees: BTreeSet<i64> = k.twists().iter().map(|tw| tw.a.max(tw.b)).collect();
    let mut rows: Vec<FormMatrix> = Vec::new();
    let mut lprime = Vec::new();
    for &c in &degrees {
        let e = BiDegree::diag(c);
        let n = kd.h_dim(0, e);
        let mut span = theta_t.induced_h(0, e).columns();
        for i in 0..4 {
            let x = FormMatrix::scalar(&BiForm::x(field, i), &kd);
            span.extend(x.induced_h(0, BiDegree::diag(c - 1)).columns());
        }
        let q = quotient_data(field, n, &span);
        for r in q.coset_basis.columns() {
            let col = FormMatrix::column_from_vector(field, &kd, -e, &r);
            rows.push(col.transpose());
            lprime.push(e);
        }
    }
    let lprime = SplitBundle::new(lprime);
    let rho = FormMatrix::from_rows(field, &k, &rows).with_bundles(k.clone(), lprime.clone())?;
    let kappa = theta.vstack(&rho);
    let kappa_t = kappa.transpose();
    let top = degrees.iter().copied().max().unwrap_or(0);
    for c in degrees.iter().copied().min().unwrap_or(0)..=top + 2 {
        let h = kappa_t.induced_h(0, BiDegree::diag(c));
        if h.rank() != h.rows() {
            return Err(Error::VerificationFailed(format!(
                "sections of the dual of K are not all reached in degree {c}"
            )));
        }
    }
    let psibar = psi.hstack(&FormMatrix::zero(field, lprime, l0));
    MonadPresentation::new(kappa, psibar)
}
