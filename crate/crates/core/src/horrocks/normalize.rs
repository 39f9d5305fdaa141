//! Rewriting a monad with free middle term as a kernel presentation
//! `E = ker(A_E → B)` with A_E ACM.
//!
//! Each summand O(c,c-1) of K is matched with a pair of summands O(c,c) of
//! the middle term on which κ becomes (-v,u)ᵀ; the cokernel of that block is
//! Σ2(c), and O(c-1,c) gives Σ1(c) through (-t,s)ᵀ. The change of basis is
//! found by solving linear systems and the result is checked by comparing
//! cohomology tables.

use super::BundleRep;
use crate::bipoly::{BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{complement_indices, Vector};
use crate::linecoh::{FormMatrix, SplitBundle};
use crate::presheaf::{minimize_gamma, solve_form_system, solve_form_system_right, KerPresentation, MonadPresentation};

struct Standard {
    lambda: SplitBundle,
    kappa: FormMatrix,
    pi: FormMatrix,
}

fn standard_blocks(m: &MonadPresentation) -> Result<Standard> {
    let field = m.field();
    let mut lambda = Vec::new();
    let mut spinors = Vec::new();
    let mut blocks = Vec::new();
    for &t in m.k().twists() {
        let (c, x, y, s) = if t.a == t.b + 1 {
            (t.a, BiForm::u(field), BiForm::v(field), BiDegree::sigma2(t.a))
        } else if t.b == t.a + 1 {
            (t.b, BiForm::s(field), BiForm::t(field), BiDegree::sigma1(t.b))
        } else {
            return Err(Error::Unsupported(format!("summand O{t} of K is not the kernel of a spinor resolution")));
        };
        blocks.push((lambda.len(), x, y));
        lambda.push(BiDegree::diag(c));
        lambda.push(BiDegree::diag(c));
        spinors.push(s);
    }
    let lambda = SplitBundle::new(lambda);
    let spinors = SplitBundle::new(spinors);
    let mut kappa = FormMatrix::zero(field, m.k().clone(), lambda.clone());
    let mut pi = FormMatrix::zero(field, lambda.clone(), spinors);
    for (k, (at, x, y)) in blocks.into_iter().enumerate() {
        kappa.set_entry(at, k, y.neg());
        kappa.set_entry(at + 1, k, x.clone());
        pi.set_entry(k, at, x);
        pi.set_entry(k, at + 1, y);
    }
    Ok(Standard {
        lambda,
        kappa,
        pi,
    })
}

/// Indices of A's summands completing `im σ` to all of A, degree by degree
/// on the constant blocks.
fn complement(sigma: &FormMatrix) -> Vec<usize> {
    let field = sigma.field();
    let a = sigma.dst();
    let lam = sigma.src();
    let degrees: std::collections::BTreeSet<i64> = a.twists().iter().map(|t| t.a).collect();
    let mut out = Vec::new();
    for e in degrees {
        let rows: Vec<usize> = (0..a.rank()).filter(|&r| a.twists()[r].a == e).collect();
        let base: Vec<Vector> = (0..lam.rank())
            .filter(|&c| lam.twists()[c].a == e)
            .map(|c| rows.iter().map(|&r| sigma.entry(r, c).constant_value()).collect())
            .collect();
        let cands: Vec<Vector> = (0..rows.len())
            .map(|k| (0..rows.len()).map(|j| if j == k { field.one() } else { field.zero() }).collect())
            .collect();
        for k in complement_indices(field, rows.len(), &base, &cands) {
            out.push(rows[k]);
        }
    }
    out
}

/// Converts a monad with free middle term into a γ-form kernel presentation
/// of its middle homology. Experimental; the output is verified by
/// cohomology table comparison over a window around the twists involved.
pub fn gamma_normalize(m: &MonadPresentation) -> Result<KerPresentation> {
    let field = m.field();
    if !m.a().is_free() {
        return Err(Error::Unsupported("normalization needs a free middle term".into()));
    }
    if m.k().is_empty() {
        return Ok(minimize_gamma(&m.middle()));
    }
    let std = standard_blocks(m)?;
    let fail = |what: &str| Error::VerificationFailed(format!("normalization failed: {what}"));
    let phi = solve_form_system_right(m.kappa(), &std.kappa).map_err(|_| fail("no projection onto the Koszul blocks"))?;
    let sigma = solve_form_system(&phi, &FormMatrix::identity(field, std.lambda.clone()))
        .map_err(|_| fail("projection does not split"))?;
    let a = m.a().clone();
    let proj = FormMatrix::identity(field, a.clone()).sub(&sigma.compose(&phi));
    let j = complement(&sigma);
    let iota = proj.select_columns(&j);
    let t = sigma.hstack(&iota);
    let tinv = solve_form_system(&t, &FormMatrix::identity(field, a.clone())).map_err(|_| fail("change of basis is singular"))?;
    if tinv.compose(&t) != FormMatrix::identity(field, t.src().clone()) {
        return Err(fail("change of basis is not invertible"));
    }
    let kprime = tinv.compose(m.kappa());
    let nl = std.lambda.rank();
    let top = kprime.select_rows(&(0..nl).collect::<Vec<_>>());
    if top != std.kappa.with_bundles(m.k().clone(), top.dst().clone())? {
        return Err(fail("κ is not in Koszul form after the change of basis"));
    }
    let p_rows: Vec<usize> = (nl..kprime.rows()).collect();
    let q = kprime.select_rows(&p_rows);
    let x = solve_form_system_right(&std.kappa, &q).map_err(|_| fail("free part of κ does not factor"))?;
    let g_lambda0 = m.psibar().compose(&sigma);
    let g_p = m.psibar().compose(&iota);
    let g_lambda = g_lambda0.add(&g_p.compose(&x));
    if !g_lambda.compose(&std.kappa).is_zero() {
        return Err(fail("ψ̄ does not vanish on the Koszul blocks"));
    }
    let h = solve_form_system_right(&std.pi, &g_lambda).map_err(|_| fail("ψ̄ does not factor through the spinors"))?;
    let g = h.hstack(&g_p);
    let p = minimize_gamma(&KerPresentation::new(g)?);
    let w = m
        .a()
        .twists()
        .iter()
        .chain(m.k().twists())
        .chain(m.b().twists())
        .map(|t| t.a.abs().max(t.b.abs()))
        .max()
        .unwrap_or(0)
        + 2;
    if BundleRep::Gamma(p.clone()).table(-w, w)? != m.table(-w, w)? {
        return Err(fail("cohomology tables differ"));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Field;
    use crate::horrocks::extract::monad_from_gamma;

    #[test]
    fn undoes_koszul_resolution() {
        let f = Field::default();
        let a = SplitBundle::new(vec![BiDegree::new(-1, 0), BiDegree::new(-1, 0), BiDegree::new(0, -1)]);
        let b = SplitBundle::new(vec![BiDegree::diag(0)]);
        let g = FormMatrix::new(f, a, b, vec![BiForm::s(f), BiForm::t(f), BiForm::u(f)]).unwrap();
        let p = KerPresentation::new(g).unwrap();
        let m = monad_from_gamma(&p).unwrap();
        let back = gamma_normalize(&m).unwrap();
        assert_eq!(back.table(-4, 4), p.table(-4, 4));
        let mut sorted = back.a().twists().to_vec();
        sorted.sort();
        let mut want = p.a().twists().to_vec();
        want.sort();
        assert_eq!(sorted, want);
    }
}
