//! The four-term exactness check and the synthesize/extract round trip.

use std::fmt;

use rand::Rng;

use super::{acm_type, extract_gamma, extract_monad, gamma_normalize, synthesize, triple_iso, BundleRep, HorrocksTriple};
use crate::error::{Error, Result};
use crate::flmod::{module_from_monad, module_iso, FamilyKind};
use crate::presheaf::{strip_acm, KerPresentation, MonadPresentation};

/// One degree of the four-term sequence
/// `0 → H¹(K⊗Σi(d)) → M_Σi,d → H¹(E⊗Σi(d)) → H¹(A_E⊗Σi(d)) → 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FourTermRow {
    pub degree: i64,
    pub i: usize,
    pub k: usize,
    pub m: usize,
    pub e: usize,
    pub a: usize,
}

impl FourTermRow {
    pub fn alternating_sum(&self) -> i64 {
        self.k as i64 - self.m as i64 + self.e as i64 - self.a as i64
    }
}

/// Checks the alternating sum degree by degree over `lo..=hi`, taking the
/// spinor part of A_E from the presentation when it is a kernel and from
/// the subspace dimensions otherwise.
pub fn four_term_check(rep: &BundleRep, t: &HorrocksTriple, lo: i64, hi: i64) -> Result<Vec<FourTermRow>> {
    let ty = match rep {
        BundleRep::Gamma(p) => acm_type(p)?,
        BundleRep::Monad(_) => t.predicted_type(),
    };
    let mut rows = Vec::new();
    for degree in lo..=hi {
        for (i, kind, sub) in [(1, FamilyKind::M10, &t.w), (2, FamilyKind::M01, &t.v)] {
            let shift = kind.shift(degree);
            let row = FourTermRow {
                degree,
                i,
                k: sub.dim(degree),
                m: t.tri.dim(kind, degree),
                e: rep.h_dims(shift)?[1],
                a: ty.h1(shift),
            };
            if row.alternating_sum() != 0 {
                return Err(Error::ExactnessViolation { degree, i });
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

#[derive(Clone, Debug)]
pub struct Stage {
    pub name: &'static str,
    pub ok: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct RoundtripReport {
    pub stages: Vec<Stage>,
    pub monad: Option<MonadPresentation>,
    pub gamma: Option<KerPresentation>,
    pub extracted: Option<HorrocksTriple>,
}

impl RoundtripReport {
    pub fn passed(&self) -> bool {
        !self.stages.is_empty() && self.stages.iter().all(|s| s.ok)
    }

    fn record(&mut self, name: &'static str, ok: bool, detail: impl Into<String>) -> bool {
        self.stages.push(Stage {
            name,
            ok,
            detail: detail.into(),
        });
        ok
    }
}

impl fmt::Display for RoundtripReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stages {
            writeln!(f, "{:<10} {}  {}", s.name, if s.ok { "ok" } else { "FAIL" }, s.detail)?;
        }
        write!(f, "roundtrip {}", if self.passed() { "passed" } else { "failed" })
    }
}

/// Synthesizes a bundle from `t`, checks it has no ACM summands, extracts
/// its triple along both paths and searches for an isomorphism with `t`.
pub fn roundtrip<R: Rng + ?Sized>(t: &HorrocksTriple, trials: usize, rng: &mut R) -> RoundtripReport {
    let mut rep = RoundtripReport::default();
    let monad = match synthesize(t) {
        Ok(m) => m,
        Err(e) => {
            rep.record("synthesize", false, e.to_string());
            return rep;
        }
    };
    rep.record(
        "synthesize",
        true,
        format!("K = {}, A = {}, B = {}, rank {}", monad.k(), monad.a(), monad.b(), monad.rank()),
    );
    rep.monad = Some(monad.clone());

    let module_ok = match module_from_monad(&monad) {
        Ok(bm) => match module_iso(&bm.module, t.module(), trials, rng) {
            Some(_) => rep.record("module", true, format!("H¹ dims {:?}", bm.module.dims_map())),
            None => rep.record("module", false, format!("H¹ dims {:?} not isomorphic to M", bm.module.dims_map())),
        },
        Err(e) => rep.record("module", false, e.to_string()),
    };
    let injective = monad.fiberwise_injective_sampled(rng, 50);
    rep.record("injective", injective, "κ has full rank at 50 random points");
    if !module_ok {
        return rep;
    }

    let gamma = match gamma_normalize(&monad) {
        Ok(g) => g,
        Err(e) => {
            rep.record("normalize", false, e.to_string());
            return rep;
        }
    };
    rep.record("normalize", true, format!("A_E = {}", gamma.a()));
    rep.gamma = Some(gamma.clone());
    match strip_acm(&gamma) {
        Ok(s) if s.removed.is_empty() => rep.record("strip", true, "no ACM summands"),
        Ok(s) => rep.record("strip", false, format!("ACM summands split off: {:?}", s.removed)),
        Err(e) => rep.record("strip", false, e.to_string()),
    };

    let extracted = match extract_monad(&monad) {
        Ok(x) => x,
        Err(e) => {
            rep.record("extract", false, e.to_string());
            return rep;
        }
    };
    rep.record(
        "extract",
        true,
        format!("W {:?}, V {:?}", extracted.w.dims_by_degree(), extracted.v.dims_by_degree()),
    );
    match extract_gamma(&gamma) {
        Ok(x) => {
            let same = x.w.same_span(&extracted.w) && x.v.same_span(&extracted.v);
            rep.record("paths", same, "kernel and monad extraction give equal subspaces")
        }
        Err(e) => rep.record("paths", false, e.to_string()),
    };
    let (lo, hi) = extracted.window();
    match four_term_check(&BundleRep::Monad(monad.clone()), &extracted, lo, hi) {
        Ok(_) => rep.record("four-term", true, format!("degrees {lo}..{hi}")),
        Err(e) => rep.record("four-term", false, e.to_string()),
    };
    match triple_iso(t, &extracted, trials, rng) {
        Ok(Some(_)) => rep.record("iso", true, "isomorphic to the input triple"),
        Ok(None) => rep.record("iso", false, format!("no isomorphism found in {trials} trials")),
        Err(e) => rep.record("iso", false, e.to_string()),
    };
    rep.extracted = Some(extracted);
    rep
}
