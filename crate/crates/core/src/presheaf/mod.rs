//! Bundles presented by split-bundle complexes: kernels `E = ker(A → B)` and
//! monads `K → A → B`. Every cohomology group is computed from H⁰-level
//! linear algebra of the split terms.

pub mod lift;
pub mod monad;
pub mod summands;

use crate::bipoly::{BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{quotient_data, Field, Matrix, QuotientData, Vector};
use crate::linecoh::{sheaf_surjective, FormMatrix, SplitBundle};

pub use lift::{
    connecting_delta_spinor, hom_kernel, image_chase, solve_form_system, solve_form_system_right, Ruling,
};
pub use monad::MonadPresentation;
pub use summands::{
    hom_ker_to_line, hom_line_to_ker, minimize_gamma, strip_acm, summand_pairing, StripReport,
};

/// Cohomology dimensions (h⁰, h¹, h²).
pub type HDims = [usize; 3];

/// The shifts of one row of a cohomology table: O(d), Σ1(d), Σ2(d).
pub fn table_shifts(d: i64) -> [BiDegree; 3] {
    [BiDegree::diag(d), BiDegree::sigma1(d), BiDegree::sigma2(d)]
}

/// H⁰(B(e)) modulo the image of a matrix.
pub fn coker_quotient(h: &Matrix) -> QuotientData {
    quotient_data(h.field(), h.rows(), &h.columns())
}

/// `E = ker(g: A → B)` with `g` surjective as a map of sheaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KerPresentation {
    g: FormMatrix,
}

impl KerPresentation {
    /// Checks sheaf-surjectivity of `g`.
    pub fn new(g: FormMatrix) -> Result<KerPresentation> {
        let rep = sheaf_surjective(&g)?;
        if !rep.surjective {
            return Err(Error::VerificationFailed(format!(
                "map is not surjective as a map of sheaves (H⁰ cokernels {:?})",
                rep.probes
            )));
        }
        Ok(KerPresentation { g })
    }

    /// For maps already known to be surjective.
    pub fn new_unchecked(g: FormMatrix) -> KerPresentation {
        KerPresentation { g }
    }

    pub fn field(&self) -> Field {
        self.g.field()
    }

    pub fn g(&self) -> &FormMatrix {
        &self.g
    }

    pub fn a(&self) -> &SplitBundle {
        self.g.src()
    }

    pub fn b(&self) -> &SplitBundle {
        self.g.dst()
    }

    pub fn rank(&self) -> i64 {
        self.a().rank() as i64 - self.b().rank() as i64
    }

    pub fn c1(&self) -> BiDegree {
        self.a().c1() - self.b().c1()
    }

    /// A has only ACM twists and B only free ones.
    pub fn is_gamma_form(&self) -> bool {
        self.a().is_acm() && self.b().is_free()
    }

    /// Basis of H⁰(E(e)) as vectors in H⁰(A(e)).
    pub fn h0_space(&self, e: BiDegree) -> Vec<Vector> {
        self.g.induced_h(0, e).kernel_basis()
    }

    /// (h⁰, h¹, h²) of E(e) from the long exact sequence of `0 → E → A → B → 0`.
    pub fn h_dims(&self, e: BiDegree) -> HDims {
        let ranks: Vec<(usize, usize, usize)> = (0..3)
            .map(|i| {
                let m = self.g.induced_h(i, e);
                (m.rows(), m.cols(), m.rank())
            })
            .collect();
        let (r0, c0, k0) = ranks[0];
        let (r1, c1, k1) = ranks[1];
        let (_, c2, k2) = ranks[2];
        [c0 - k0, (r0 - k0) + (c1 - k1), (r1 - k1) + (c2 - k2)]
    }

    /// H¹(E(e)) as coker(H⁰(A(e)) → H⁰(B(e))); needs H¹(A(e)) = 0.
    pub fn coker_model(&self, e: BiDegree) -> Result<QuotientData> {
        if self.a().h_dim(1, e) != 0 {
            return Err(Error::PrereqVanishingFailed(format!("H¹(A{e}) ≠ 0 for A = {}", self.a())));
        }
        Ok(coker_quotient(&self.g.induced_h(0, e)))
    }

    /// H²(E(e)) dimension as ker H²(g) plus coker H¹(g).
    pub fn h2_dim(&self, e: BiDegree) -> usize {
        self.h_dims(e)[2]
    }

    /// Multiplication by `f` from the coker model at `e` to the one at `e + deg f`.
    pub fn mult_cokermodel(&self, f: &BiForm, e: BiDegree) -> Result<Matrix> {
        let src = self.coker_model(e)?;
        let dst = self.coker_model(e + f.degree())?;
        Ok(coker_mult(self.b(), f, e, &src, &dst))
    }

    pub fn twisted(&self, e: BiDegree) -> KerPresentation {
        KerPresentation::new_unchecked(self.g.twisted(e))
    }

    /// Cohomology table over O(d), Σ1(d), Σ2(d) for d in `lo..=hi`.
    pub fn table(&self, lo: i64, hi: i64) -> Vec<(BiDegree, HDims)> {
        (lo..=hi)
            .flat_map(|d| table_shifts(d).into_iter().map(|e| (e, self.h_dims(e))))
            .collect()
    }
}

/// Multiplication by `f` between two quotients of H⁰(B(·)).
pub fn coker_mult(b: &SplitBundle, f: &BiForm, e: BiDegree, src: &QuotientData, dst: &QuotientData) -> Matrix {
    let mult = FormMatrix::scalar(f, b).induced_h(0, e);
    dst.projection.mul(&mult).mul(&src.coset_basis)
}
