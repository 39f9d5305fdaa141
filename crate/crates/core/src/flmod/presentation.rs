//! Minimal generators and minimal free presentations of finite-length
//! modules, and the module H¹_* of a presented bundle.

use std::collections::BTreeMap;

use super::FinLengthModule;
use crate::bipoly::{monomial_basis, BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{complement_indices, Field, Matrix, QuotientData, Vector};
use crate::linecoh::{FormMatrix, SplitBundle};
use crate::presheaf::{coker_mult, KerPresentation, MonadPresentation};

/// Generators of M as (degree, vector in M_d), by increasing degree.
///
/// In each degree the generators are the standard basis vectors, chosen
/// greedily, spanning a complement of the image from the degree below.
pub fn minimal_generators(m: &FinLengthModule) -> Vec<(i64, Vector)> {
    let field = m.field();
    let mut out = Vec::new();
    for d in m.degrees() {
        let n = m.dim(d);
        let below = m.image_from_below(d);
        let std: Vec<Vector> = (0..n)
            .map(|k| {
                let mut v = vec![field.zero(); n];
                v[k] = field.one();
                v
            })
            .collect();
        for k in complement_indices(field, n, &below, &std) {
            out.push((d, std[k].clone()));
        }
    }
    out
}

/// `L1 --ψ--> L0 → M → 0` with L0 on the minimal generators.
#[derive(Clone, Debug)]
pub struct MinimalPresentation {
    pub module: FinLengthModule,
    pub generators: Vec<(i64, Vector)>,
    pub psi: FormMatrix,
}

impl MinimalPresentation {
    pub fn l0(&self) -> &SplitBundle {
        self.psi.dst()
    }

    pub fn l1(&self) -> &SplitBundle {
        self.psi.src()
    }

    /// `F = ker ψ`, the bundle associated to M.
    pub fn f(&self) -> KerPresentation {
        KerPresentation::new_unchecked(self.psi.clone())
    }

    /// The map H⁰(L0(e,e)) → M_e.
    pub fn pi(&self, e: i64) -> Matrix {
        pi_matrix(&self.module, &self.generators, e)
    }
}

fn pi_matrix(m: &FinLengthModule, gens: &[(i64, Vector)], e: i64) -> Matrix {
    let field = m.field();
    let mut cols = Vec::new();
    for (d, g) in gens {
        let k = e - d;
        if k < 0 {
            continue;
        }
        for (i, j) in monomial_basis(BiDegree::diag(k)) {
            cols.push(m.act_monomial(k, i, j, *d).mul_vec(g));
        }
    }
    Matrix::from_columns(field, m.dim(e), &cols)
}

/// Computes a minimal free presentation of a valid module.
///
/// Relations are collected degree by degree as K_e / S(Q)_1·K_{e-1} where
/// K_e = ker(H⁰(L0(e)) → M_e), up to three degrees past the top of M; the
/// result is then verified and the bound raised twice if needed.
pub fn minimal_presentation(m: &FinLengthModule) -> Result<MinimalPresentation> {
    m.validate()?;
    let field = m.field();
    let generators = minimal_generators(m);
    let l0 = SplitBundle::new(generators.iter().map(|(d, _)| BiDegree::diag(-d)).collect());
    let Some((lo, hi)) = m.support() else {
        let psi = FormMatrix::zero(field, SplitBundle::empty(), l0);
        return Ok(MinimalPresentation {
            module: m.clone(),
            generators,
            psi,
        });
    };
    let xs: Vec<FormMatrix> = (0..4).map(|i| FormMatrix::scalar(&BiForm::x(field, i), &l0)).collect();
    let mut relations: Vec<(i64, Vector)> = Vec::new();
    let mut prev_kernel: Vec<Vector> = Vec::new();
    let mut e = lo;
    let mut bound = hi + 3;
    for attempt in 0..3 {
        while e <= bound {
            let shift = BiDegree::diag(e);
            let kernel = pi_matrix(m, &generators, e).kernel_basis();
            let n = l0.h_dim(0, shift);
            let prev = BiDegree::diag(e - 1);
            let lifted: Vec<Vector> = xs
                .iter()
                .flat_map(|x| {
                    let h = x.induced_h(0, prev);
                    prev_kernel.iter().map(move |k| h.mul_vec(k)).collect::<Vec<_>>()
                })
                .collect();
            for idx in complement_indices(field, n, &lifted, &kernel) {
                relations.push((e, kernel[idx].clone()));
            }
            prev_kernel = kernel;
            e += 1;
        }
        let cols: Vec<FormMatrix> = relations
            .iter()
            .map(|(d, v)| FormMatrix::column_from_vector(field, &l0, BiDegree::diag(-d), v))
            .collect();
        let psi = FormMatrix::from_columns(field, &l0, &cols);
        if verify_presentation(m, &generators, &psi, bound) {
            return Ok(MinimalPresentation {
                module: m.clone(),
                generators,
                psi,
            });
        }
        if attempt < 2 {
            bound += 2;
        }
    }
    Err(Error::BoundExceeded(format!("relations not complete by degree {bound}")))
}

fn verify_presentation(m: &FinLengthModule, gens: &[(i64, Vector)], psi: &FormMatrix, top: i64) -> bool {
    let Some((lo, hi)) = m.support() else { return true };
    if top < hi + 1 {
        return false;
    }
    for e in lo..=top {
        let h = psi.induced_h(0, BiDegree::diag(e));
        let p = pi_matrix(m, gens, e);
        if h.rows() - h.rank() != m.dim(e) || p.rank() != m.dim(e) {
            return false;
        }
        if !p.mul(&h).is_zero() {
            return false;
        }
    }
    true
}

/// H¹_* of a presented bundle, with each piece a quotient of H⁰(B(d,d)).
#[derive(Clone, Debug)]
pub struct BundleModule {
    pub module: FinLengthModule,
    pub b: SplitBundle,
    pub quotients: BTreeMap<i64, QuotientData>,
}

impl BundleModule {
    /// Lifts of the minimal generators of M to maps O(-d,-d) → B.
    pub fn tau(&self, pres: &MinimalPresentation) -> FormMatrix {
        let field = self.module.field();
        let cols: Vec<FormMatrix> = pres
            .generators
            .iter()
            .map(|(d, v)| {
                let lift = self.quotients[d].lift(v);
                FormMatrix::column_from_vector(field, &self.b, BiDegree::diag(-d), &lift)
            })
            .collect();
        let tau = FormMatrix::from_columns(field, &self.b, &cols);
        tau.with_bundles(pres.l0().clone(), self.b.clone())
            .expect("generator degrees match L0")
    }
}

fn assemble(
    field: Field,
    b: &SplitBundle,
    mut model: impl FnMut(i64) -> Result<QuotientData>,
) -> Result<BundleModule> {
    let lo = b.twists().iter().map(|t| -t.a.min(t.b)).min().unwrap_or(0);
    let gen = b.twists().iter().map(|t| -t.a.min(t.b)).max().unwrap_or(0);
    let mut quotients = BTreeMap::new();
    let mut d = lo;
    loop {
        if d > gen + 200 {
            return Err(Error::BoundExceeded("H¹ module does not vanish in high degree".into()));
        }
        let q = model(d)?;
        let dim = q.dim();
        quotients.insert(d, q);
        if dim == 0 && d >= gen {
            break;
        }
        d += 1;
    }
    let top = d;
    let dims: Vec<usize> = (lo..=top).map(|d| quotients[&d].dim()).collect();
    let ops = (lo..=top)
        .map(|d| {
            std::array::from_fn(|i| {
                if d == top {
                    return Matrix::zeros(field, 0, quotients[&d].dim());
                }
                coker_mult(b, &BiForm::x(field, i), BiDegree::diag(d), &quotients[&d], &quotients[&(d + 1)])
            })
        })
        .collect();
    let module = FinLengthModule::new(field, lo, dims, ops)?;
    quotients.retain(|_, q| q.dim() > 0);
    Ok(BundleModule {
        module,
        b: b.clone(),
        quotients,
    })
}

/// M(E) = H¹_*(E) for E = ker g; needs H¹(A(d,d)) = 0 on the diagonal.
pub fn module_from_kernel(p: &KerPresentation) -> Result<BundleModule> {
    assemble(p.field(), p.b(), |d| p.coker_model(BiDegree::diag(d)))
}

/// M(E) for the middle homology of a monad.
pub fn module_from_monad(m: &MonadPresentation) -> Result<BundleModule> {
    assemble(m.field(), m.b(), |d| m.h1_model(BiDegree::diag(d)))
}
