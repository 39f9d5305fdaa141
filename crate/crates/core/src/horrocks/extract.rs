//! Invariant extraction: the triple (M, W, V) of a bundle presented as a
//! kernel in γ-form or as a monad.

use super::{acm_type, placed, BundleRep, HorrocksTriple};
use crate::bipoly::{BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Vector};
use crate::flmod::{
    minimal_presentation, module_from_kernel, module_from_monad, sigma_modules, BundleModule, FamilyKind,
    GradedSubspace,
};
use crate::linecoh::{FormMatrix, SplitBundle};
use crate::presheaf::{strip_acm, KerPresentation, MonadPresentation};

/// What a class of M_Σi must map into for it to die in H¹(E ⊗ Σi).
enum Killer<'a> {
    Kernel(&'a KerPresentation),
    Monad(&'a MonadPresentation),
}

impl Killer<'_> {
    fn image(&self, e: BiDegree) -> Result<Vec<Vector>> {
        match self {
            Killer::Kernel(p) => Ok(p.g().induced_h(0, e).columns()),
            Killer::Monad(m) => {
                let mut cols = m.psibar().induced_h(0, e).columns();
                cols.extend(m.alpha_reps(e)?);
                Ok(cols)
            }
        }
    }
}

fn assemble(bm: &BundleModule, killer: Killer<'_>) -> Result<HorrocksTriple> {
    let pres = minimal_presentation(&bm.module)?;
    let tri = sigma_modules(&pres.f())?;
    let tau = bm.tau(&pres);
    let field = bm.module.field();
    let mut subspaces = Vec::new();
    for kind in [FamilyKind::M10, FamilyKind::M01] {
        let mut sub = GradedSubspace::zero(field, kind);
        for d in tri.family(kind).degrees() {
            let e = kind.shift(d);
            let th = tau.induced_h(0, e);
            let n = th.cols();
            let img = killer.image(e)?;
            let g = Matrix::from_columns(field, th.rows(), &img);
            let joint = th.hstack(&g.scale(&-field.one()));
            for sol in joint.kernel_basis() {
                let x = tri.project(kind, d, &sol[..n]);
                if x.iter().any(|c| !c.is_zero()) {
                    sub.insert(d, x);
                }
            }
        }
        subspaces.push(sub);
    }
    let v = subspaces.pop().unwrap();
    let w = subspaces.pop().unwrap();
    HorrocksTriple::from_parts(pres, tri, w, v)
}

/// Extraction from `E = ker(g: A → B)` with A ACM and B free.
///
/// Refuses presentations with unit entries (B not minimal) and bundles
/// with ACM line bundle or spinor summands.
pub fn extract_gamma(p: &KerPresentation) -> Result<HorrocksTriple> {
    let ty = acm_type(p)?;
    if !p.b().is_free() {
        return Err(Error::Unsupported(format!("target bundle {} is not free", p.b())));
    }
    if p.g().has_unit_entry() {
        return Err(Error::NotMinimalGamma(
            "the presentation matrix has a unit entry; minimize it first".into(),
        ));
    }
    let stripped = strip_acm(p)?;
    if !stripped.removed.is_empty() {
        let list: Vec<String> = stripped.removed.iter().map(|t| format!("O{t}")).collect();
        return Err(Error::HasAcmSummands(format!("split off {} first", list.join(", "))));
    }
    let bm = module_from_kernel(p)?;
    let triple = assemble(&bm, Killer::Kernel(p))?;
    for (&j, &n) in &ty.nu {
        if triple.w.dim(placed(j)) != n {
            return Err(Error::InternalInvariantViolation(format!(
                "ν_{j} = {n} but W has dimension {} in degree {}",
                triple.w.dim(placed(j)),
                placed(j)
            )));
        }
    }
    for (&i, &n) in &ty.mu {
        if triple.v.dim(placed(i)) != n {
            return Err(Error::InternalInvariantViolation(format!(
                "μ_{i} = {n} but V has dimension {} in degree {}",
                triple.v.dim(placed(i)),
                placed(i)
            )));
        }
    }
    if triple.w.total_dim() != ty.nu.values().sum::<usize>() || triple.v.total_dim() != ty.mu.values().sum::<usize>() {
        return Err(Error::InternalInvariantViolation("W, V dimensions differ from the ACM type".into()));
    }
    Ok(triple)
}

/// Extraction from a monad `K → A → B` with A and B free, through the
/// images of the H¹ classes of K. Does not test for ACM summands.
pub fn extract_monad(m: &MonadPresentation) -> Result<HorrocksTriple> {
    if !m.a().is_free() || !m.b().is_free() {
        return Err(Error::Unsupported("monad extraction needs free middle and right terms".into()));
    }
    if m.psibar().has_unit_entry() {
        return Err(Error::NotMinimalGamma("ψ̄ has a unit entry; the right term is not minimal".into()));
    }
    let bm = module_from_monad(m)?;
    assemble(&bm, Killer::Monad(m))
}

pub fn extract(rep: &BundleRep) -> Result<HorrocksTriple> {
    match rep {
        BundleRep::Gamma(p) => extract_gamma(p),
        BundleRep::Monad(m) => extract_monad(m),
    }
}

/// Resolves every spinor summand of A by its Koszul sequence, giving a
/// monad with free middle term and the same middle homology.
///
/// Σ2(j) is replaced by 2O(j,j) mapping to it by [u,v] with kernel
/// O(j,j-1) included by (-v,u); Σ1(i) likewise with s,t.
pub fn monad_from_gamma(p: &KerPresentation) -> Result<MonadPresentation> {
    let field = p.field();
    acm_type(p)?;
    let mut k_twists = Vec::new();
    let mut mid = Vec::new();
    // pi: mid → A, and kappa columns indexed by K
    let mut pi_blocks: Vec<(Vec<usize>, Vec<BiForm>)> = Vec::new();
    let mut kappa_cols: Vec<(usize, [BiForm; 2])> = Vec::new();
    for &t in p.a().twists() {
        if t.a == t.b {
            pi_blocks.push((vec![mid.len()], vec![BiForm::one(field)]));
            mid.push(t);
        } else {
            let (c, x, y) = if t.b == t.a + 1 {
                (t.a, BiForm::u(field), BiForm::v(field))
            } else {
                (t.b, BiForm::s(field), BiForm::t(field))
            };
            let at = mid.len();
            mid.push(BiDegree::diag(c));
            mid.push(BiDegree::diag(c));
            kappa_cols.push((at, [y.neg(), x.clone()]));
            k_twists.push(BiDegree::diag(c) - y.degree());
            pi_blocks.push((vec![at, at + 1], vec![x, y]));
        }
    }
    let mid = SplitBundle::new(mid);
    let mut pi = FormMatrix::zero(field, mid.clone(), p.a().clone());
    for (row, (cols, forms)) in pi_blocks.into_iter().enumerate() {
        for (c, f) in cols.into_iter().zip(forms) {
            pi.set_entry(row, c, f);
        }
    }
    let k = SplitBundle::new(k_twists);
    let mut kappa = FormMatrix::zero(field, k, mid);
    for (col, (at, [a, b])) in kappa_cols.into_iter().enumerate() {
        kappa.set_entry(at, col, a);
        kappa.set_entry(at + 1, col, b);
    }
    let psibar = p.g().compose(&pi);
    Ok(MonadPresentation::new_unchecked(kappa, psibar))
}
