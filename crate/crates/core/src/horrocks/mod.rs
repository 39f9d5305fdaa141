//! Horrocks triples (M, W, V): extraction from bundles, synthesis of a
//! bundle from a triple, isomorphism testing, and consistency checks.
//!
//! Abstract degrees: a summand Σ2⁻¹(c) = O(c,c-1) of K contributes a class
//! in M_{Σ1} in degree -1-c, and Σ1⁻¹(c) = O(c-1,c) one in M_{Σ2} in degree
//! -1-c. A summand Σ2(j) of the ACM bundle A_E counts toward ν_j and Σ1(i)
//! toward μ_i, so dim W_{-1-j} = ν_j and dim V_{-1-i} = μ_i.

pub mod checks;
pub mod extract;
pub mod iso;
pub mod normalize;
pub mod synth;

use std::collections::BTreeMap;

use crate::bipoly::{BiDegree, Twist};
use crate::error::{Error, Result};
use crate::exactla::Field;
use crate::flmod::{
    minimal_presentation, sigma_modules, socle_subspace, FamilyKind, FinLengthModule, GradedSubspace,
    MinimalPresentation, TriDiag,
};
use crate::presheaf::{HDims, KerPresentation, MonadPresentation};

pub use checks::{four_term_check, roundtrip, FourTermRow, RoundtripReport};
pub use extract::{extract, extract_gamma, extract_monad, monad_from_gamma};
pub use iso::{triple_iso, TripleIso};
pub use normalize::gamma_normalize;
pub use synth::synthesize;

/// Placed degree of an abstract degree, and back (the map is an involution).
pub fn placed(c: i64) -> i64 {
    -1 - c
}

/// A bundle given either as a kernel or as a monad.
#[derive(Clone, Debug)]
pub enum BundleRep {
    Gamma(KerPresentation),
    Monad(MonadPresentation),
}

impl BundleRep {
    pub fn field(&self) -> Field {
        match self {
            BundleRep::Gamma(p) => p.field(),
            BundleRep::Monad(m) => m.field(),
        }
    }

    pub fn rank(&self) -> i64 {
        match self {
            BundleRep::Gamma(p) => p.rank(),
            BundleRep::Monad(m) => m.rank(),
        }
    }

    pub fn c1(&self) -> BiDegree {
        match self {
            BundleRep::Gamma(p) => p.c1(),
            BundleRep::Monad(m) => m.c1(),
        }
    }

    pub fn h_dims(&self, e: BiDegree) -> Result<HDims> {
        match self {
            BundleRep::Gamma(p) => Ok(p.h_dims(e)),
            BundleRep::Monad(m) => m.h_dims(e),
        }
    }

    /// Cohomology over O(d), Σ1(d), Σ2(d) for d in `lo..=hi`.
    pub fn table(&self, lo: i64, hi: i64) -> Result<Vec<(BiDegree, HDims)>> {
        match self {
            BundleRep::Gamma(p) => Ok(p.table(lo, hi)),
            BundleRep::Monad(m) => m.table(lo, hi),
        }
    }
}

/// The ACM type of A_E: multiplicities of Σ1(i), Σ2(j) and the free part.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AcmType {
    pub mu: BTreeMap<i64, usize>,
    pub nu: BTreeMap<i64, usize>,
    pub rho: Vec<Twist>,
}

impl AcmType {
    /// Reads the type off a list of ACM twists.
    pub fn from_twists(twists: &[Twist]) -> Result<AcmType> {
        let mut out = AcmType::default();
        for &t in twists {
            if t.a == t.b + 1 {
                *out.mu.entry(t.b).or_default() += 1;
            } else if t.b == t.a + 1 {
                *out.nu.entry(t.a).or_default() += 1;
            } else if t.a == t.b {
                out.rho.push(t);
            } else {
                return Err(Error::Unsupported(format!("O{t} is not an ACM line bundle")));
            }
        }
        Ok(out)
    }

    pub fn mu_at(&self, i: i64) -> usize {
        self.mu.get(&i).copied().unwrap_or(0)
    }

    pub fn nu_at(&self, j: i64) -> usize {
        self.nu.get(&j).copied().unwrap_or(0)
    }

    /// The spinor part of the type as a split bundle list.
    pub fn spinor_twists(&self) -> Vec<Twist> {
        let mut out = Vec::new();
        for (&j, &n) in &self.nu {
            out.extend(std::iter::repeat_n(BiDegree::sigma2(j), n));
        }
        for (&i, &n) in &self.mu {
            out.extend(std::iter::repeat_n(BiDegree::sigma1(i), n));
        }
        out
    }

    /// h¹ of the spinor part of A_E twisted by `e`.
    pub fn h1(&self, e: BiDegree) -> usize {
        self.spinor_twists()
            .into_iter()
            .map(|t| crate::linecoh::kunneth_dim(1, t + e))
            .sum()
    }
}

/// The type of A for a kernel presentation in γ-form.
pub fn acm_type(p: &KerPresentation) -> Result<AcmType> {
    AcmType::from_twists(p.a().twists())
}

/// A Horrocks triple with the data derived from M.
#[derive(Clone, Debug)]
pub struct HorrocksTriple {
    pub presentation: MinimalPresentation,
    pub tri: TriDiag,
    pub w: GradedSubspace,
    pub v: GradedSubspace,
}

impl HorrocksTriple {
    /// Builds a triple and checks the socle conditions.
    pub fn new(module: &FinLengthModule, w: GradedSubspace, v: GradedSubspace) -> Result<HorrocksTriple> {
        let presentation = minimal_presentation(module)?;
        let tri = sigma_modules(&presentation.f())?;
        HorrocksTriple::from_parts(presentation, tri, w, v)
    }

    pub fn from_parts(
        presentation: MinimalPresentation,
        tri: TriDiag,
        w: GradedSubspace,
        v: GradedSubspace,
    ) -> Result<HorrocksTriple> {
        if w.kind != FamilyKind::M10 || v.kind != FamilyKind::M01 {
            return Err(Error::Shape("W must live in M_Σ1 and V in M_Σ2".into()));
        }
        w.check_socle(&tri)?;
        v.check_socle(&tri)?;
        Ok(HorrocksTriple {
            presentation,
            tri,
            w,
            v,
        })
    }

    /// The triple (M, full Σ2-socle of M_Σ1 or 0, full Σ1-socle of M_Σ2 or 0).
    pub fn with_socles(module: &FinLengthModule, full_w: bool, full_v: bool) -> Result<HorrocksTriple> {
        let presentation = minimal_presentation(module)?;
        let tri = sigma_modules(&presentation.f())?;
        let field = module.field();
        let w = if full_w {
            socle_subspace(&tri, FamilyKind::M10)?
        } else {
            GradedSubspace::zero(field, FamilyKind::M10)
        };
        let v = if full_v {
            socle_subspace(&tri, FamilyKind::M01)?
        } else {
            GradedSubspace::zero(field, FamilyKind::M01)
        };
        HorrocksTriple::from_parts(presentation, tri, w, v)
    }

    pub fn field(&self) -> Field {
        self.presentation.module.field()
    }

    pub fn module(&self) -> &FinLengthModule {
        &self.presentation.module
    }

    /// dim Wabs_c for each abstract degree c.
    pub fn wabs_dims(&self) -> BTreeMap<i64, usize> {
        self.w.degrees().into_iter().map(|d| (placed(d), self.w.dim(d))).collect()
    }

    /// dim Vabs_c for each abstract degree c.
    pub fn vabs_dims(&self) -> BTreeMap<i64, usize> {
        self.v.degrees().into_iter().map(|d| (placed(d), self.v.dim(d))).collect()
    }

    /// The spinor part of A_E predicted by the subspace dimensions.
    pub fn predicted_type(&self) -> AcmType {
        AcmType {
            mu: self.vabs_dims(),
            nu: self.wabs_dims(),
            rho: Vec::new(),
        }
    }

    /// Degrees worth scanning for checks: the support of M and of M_Σi,
    /// widened by two.
    pub fn window(&self) -> (i64, i64) {
        let mut degs: Vec<i64> = self.module().degrees();
        degs.extend(self.tri.m10.degrees());
        degs.extend(self.tri.m01.degrees());
        let lo = degs.iter().copied().min().unwrap_or(0);
        let hi = degs.iter().copied().max().unwrap_or(0);
        (lo - 2, hi + 2)
    }
}
