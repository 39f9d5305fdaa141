//! Monads `K --κ--> A --ψ̄--> B` with middle homology a vector bundle.

use rand::Rng;

use super::lift::{image_chase, Ruling};
use super::{coker_quotient, HDims, KerPresentation};
use crate::bipoly::BiDegree;
use crate::error::{Error, Result};
use crate::exactla::{quotient_data, Field, Matrix, QuotientData, Vector};
use crate::linecoh::{sheaf_surjective, FormMatrix, SplitBundle};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadPresentation {
    kappa: FormMatrix,
    psibar: FormMatrix,
}

impl MonadPresentation {
    /// Checks `ψ̄κ = 0`, sheaf-surjectivity of ψ̄, and fiberwise injectivity
    /// of κ (as sheaf-surjectivity of its dual).
    pub fn new(kappa: FormMatrix, psibar: FormMatrix) -> Result<MonadPresentation> {
        if kappa.dst() != psibar.src() {
            return Err(Error::Shape(format!("κ lands in {} but ψ̄ starts at {}", kappa.dst(), psibar.src())));
        }
        if !psibar.compose(&kappa).is_zero() {
            return Err(Error::VerificationFailed("ψ̄ ∘ κ ≠ 0".into()));
        }
        if !sheaf_surjective(&psibar)?.surjective {
            return Err(Error::VerificationFailed("ψ̄ is not surjective as a map of sheaves".into()));
        }
        if !kappa.src().is_empty() && !sheaf_surjective(&kappa.transpose())?.surjective {
            return Err(Error::VerificationFailed("κ is not injective on fibers".into()));
        }
        Ok(MonadPresentation { kappa, psibar })
    }

    pub fn new_unchecked(kappa: FormMatrix, psibar: FormMatrix) -> MonadPresentation {
        MonadPresentation { kappa, psibar }
    }

    /// A kernel presentation viewed as a monad with `K = 0`.
    pub fn from_kernel(p: &KerPresentation) -> MonadPresentation {
        let kappa = FormMatrix::zero(p.field(), SplitBundle::empty(), p.a().clone());
        MonadPresentation::new_unchecked(kappa, p.g().clone())
    }

    pub fn field(&self) -> Field {
        self.psibar.field()
    }

    pub fn kappa(&self) -> &FormMatrix {
        &self.kappa
    }

    pub fn psibar(&self) -> &FormMatrix {
        &self.psibar
    }

    pub fn k(&self) -> &SplitBundle {
        self.kappa.src()
    }

    pub fn a(&self) -> &SplitBundle {
        self.psibar.src()
    }

    pub fn b(&self) -> &SplitBundle {
        self.psibar.dst()
    }

    pub fn rank(&self) -> i64 {
        self.a().rank() as i64 - self.b().rank() as i64 - self.k().rank() as i64
    }

    pub fn c1(&self) -> BiDegree {
        self.a().c1() - self.b().c1() - self.k().c1()
    }

    /// `F̄ = ker ψ̄`.
    pub fn middle(&self) -> KerPresentation {
        KerPresentation::new_unchecked(self.psibar.clone())
    }

    /// Monte Carlo check that κ has full column rank at `samples` random
    /// points with all four coordinates nonzero.
    pub fn fiberwise_injective_sampled<R: Rng + ?Sized>(&self, rng: &mut R, samples: usize) -> bool {
        let field = self.field();
        let n = self.k().rank();
        (0..samples).all(|_| {
            let pt = [
                field.random_nonzero(rng),
                field.random_nonzero(rng),
                field.random_nonzero(rng),
                field.random_nonzero(rng),
            ];
            self.kappa.eval(&pt).rank() == n
        })
    }

    /// Representatives in H⁰(B(e)) of the images of the H¹(K(e)) basis
    /// classes in coker H⁰(ψ̄)(e).
    pub fn alpha_reps(&self, e: BiDegree) -> Result<Vec<Vector>> {
        let mut reps = Vec::new();
        for (k, &t) in self.k().twists().iter().enumerate() {
            if crate::linecoh::kunneth_dim(1, t + e) == 0 {
                continue;
            }
            let ruling = Ruling::of_h1_line(t + e).ok_or_else(|| {
                Error::Unsupported(format!("H¹ of the summand O{} of K is not one-dimensional spinor type", t + e))
            })?;
            if self.a().h_dim(1, e) != 0 {
                return Err(Error::Unsupported(format!("H¹(A{e}) ≠ 0 in a monad")));
            }
            let (at, h) = image_chase(&self.kappa.column(k), &self.psibar, ruling)?;
            debug_assert_eq!(at, e);
            reps.push(h);
        }
        Ok(reps)
    }

    /// Rank of H²(κ): H²(K(e)) → H²(F̄(e)); needs H¹(B(e)) = 0.
    pub fn beta_rank(&self, e: BiDegree) -> Result<usize> {
        if self.k().h_dim(2, e) == 0 {
            return Ok(0);
        }
        if self.b().h_dim(1, e) != 0 {
            return Err(Error::Unsupported(format!("H¹(B{e}) ≠ 0 in a monad")));
        }
        Ok(self.kappa.induced_h(2, e).rank())
    }

    fn alpha_rank(&self, e: BiDegree) -> Result<usize> {
        if self.k().h_dim(1, e) == 0 {
            return Ok(0);
        }
        let reps = self.alpha_reps(e)?;
        let h = self.psibar.induced_h(0, e);
        let base = h.rank();
        let with = h.hstack(&Matrix::from_columns(self.field(), h.rows(), &reps)).rank();
        Ok(with - base)
    }

    /// (h⁰, h¹, h²) of E(e), from `0 → K → F̄ → E → 0`.
    pub fn h_dims(&self, e: BiDegree) -> Result<HDims> {
        let f = self.middle().h_dims(e);
        let k: Vec<i64> = (0..3).map(|i| self.k().h_dim(i, e) as i64).collect();
        let ra = self.alpha_rank(e)? as i64;
        let rb = self.beta_rank(e)? as i64;
        let f: Vec<i64> = f.iter().map(|&x| x as i64).collect();
        let h0 = f[0] - k[0] + (k[1] - ra);
        let h1 = f[1] - ra + (k[2] - rb);
        let h2 = f[2] - rb;
        if h0 < 0 || h1 < 0 || h2 < 0 {
            return Err(Error::InternalInvariantViolation(format!("negative cohomology at {e}")));
        }
        Ok([h0 as usize, h1 as usize, h2 as usize])
    }

    /// H¹(E(e)) as H⁰(B(e)) modulo im H⁰(ψ̄) and the image of H¹(K(e)).
    /// Needs H¹(A(e)) = 0 and H²(κ) injective at `e`.
    pub fn h1_model(&self, e: BiDegree) -> Result<QuotientData> {
        if self.a().h_dim(1, e) != 0 {
            return Err(Error::PrereqVanishingFailed(format!("H¹(A{e}) ≠ 0 for A = {}", self.a())));
        }
        if self.beta_rank(e)? != self.k().h_dim(2, e) {
            return Err(Error::PrereqVanishingFailed(format!("H²(κ) not injective at {e}")));
        }
        let h = self.psibar.induced_h(0, e);
        if self.k().h_dim(1, e) == 0 {
            return Ok(coker_quotient(&h));
        }
        let mut gens = h.columns();
        gens.extend(self.alpha_reps(e)?);
        Ok(quotient_data(self.field(), h.rows(), &gens))
    }

    /// Cohomology table over O(d), Σ1(d), Σ2(d) for d in `lo..=hi`.
    pub fn table(&self, lo: i64, hi: i64) -> Result<Vec<(BiDegree, HDims)>> {
        let mut out = Vec::new();
        for d in lo..=hi {
            for e in super::table_shifts(d) {
                out.push((e, self.h_dims(e)?));
            }
        }
        Ok(out)
    }
}
