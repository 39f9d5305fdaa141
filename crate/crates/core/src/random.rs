//! Seeded random instances: modules with prescribed dimensions, triples with
//! random socle subspaces, and γ-form bundles.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::bipoly::{BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{quotient_data, span_rank, Field, Matrix, QuotientData, Vector};
use crate::flmod::{minimal_presentation, sigma_modules, socle_subspace, FamilyKind, FinLengthModule, GradedSubspace};
use crate::horrocks::HorrocksTriple;
use crate::linecoh::{sheaf_surjective, FormMatrix, SplitBundle};
use crate::presheaf::{coker_mult, minimize_gamma, strip_acm, KerPresentation};

fn random_vector<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Vector {
    (0..n).map(|_| field.random(rng)).collect()
}

/// A module with `dims[k]` in degree `lo + k`, built as a quotient of a
/// free module by a random graded submodule containing everything above
/// the last degree.
pub fn random_module<R: Rng + ?Sized>(field: Field, lo: i64, dims: &[usize], rng: &mut R) -> FinLengthModule {
    let hi = lo + dims.len() as i64 - 1;
    let mut gens: Vec<BiDegree> = Vec::new();
    let mut killed: BTreeMap<i64, Vec<Vector>> = BTreeMap::new();
    let mut quotients: BTreeMap<i64, QuotientData> = BTreeMap::new();
    for d in lo..=hi + 1 {
        let target = if d <= hi { dims[(d - lo) as usize] } else { 0 };
        let old = SplitBundle::new(gens.clone());
        let n_old = old.h_dim(0, BiDegree::diag(d));
        let mut forced: Vec<Vector> = Vec::new();
        if let Some(prev) = killed.get(&(d - 1)) {
            for i in 0..4 {
                let x = FormMatrix::scalar(&BiForm::x(field, i), &old).induced_h(0, BiDegree::diag(d - 1));
                forced.extend(prev.iter().map(|v| x.mul_vec(v)));
            }
        }
        let available = n_old - span_rank(field, n_old, &forced);
        if target > available {
            gens.extend(std::iter::repeat_n(BiDegree::diag(-d), target - available));
        }
        let n = SplitBundle::new(gens.clone()).h_dim(0, BiDegree::diag(d));
        for v in forced.iter_mut() {
            v.resize(n, field.zero());
        }
        while n - span_rank(field, n, &forced) > target {
            forced.push(random_vector(field, n, rng));
        }
        quotients.insert(d, quotient_data(field, n, &forced));
        killed.insert(d, forced);
    }
    let l0 = SplitBundle::new(gens);
    let ops = (lo..=hi)
        .map(|d| {
            std::array::from_fn(|i| {
                coker_mult(&l0, &BiForm::x(field, i), BiDegree::diag(d), &quotients[&d], &quotients[&(d + 1)])
            })
        })
        .collect();
    FinLengthModule::new(field, lo, dims.to_vec(), ops).expect("shapes follow the quotients")
}

/// A random subspace of the span of `basis` of random dimension.
fn random_subspace<R: Rng + ?Sized>(field: Field, basis: &[Vector], rng: &mut R) -> Vec<Vector> {
    let k = rng.gen_range(0..=basis.len());
    (0..k)
        .map(|_| {
            let coeffs: Vec<_> = basis.iter().map(|_| field.random(rng)).collect();
            let n = basis[0].len();
            let mut v = vec![field.zero(); n];
            for (c, b) in coeffs.iter().zip(basis) {
                for (acc, x) in v.iter_mut().zip(b) {
                    *acc = acc.clone() + c.clone() * x.clone();
                }
            }
            v
        })
        .collect()
}

/// A triple on `module` with W and V random subspaces of the socles.
pub fn random_triple<R: Rng + ?Sized>(module: &FinLengthModule, rng: &mut R) -> Result<HorrocksTriple> {
    let field = module.field();
    let pres = minimal_presentation(module)?;
    let tri = sigma_modules(&pres.f())?;
    let mut subs = Vec::new();
    for kind in [FamilyKind::M10, FamilyKind::M01] {
        let socle = socle_subspace(&tri, kind)?;
        let mut pieces = BTreeMap::new();
        for d in socle.degrees() {
            pieces.insert(d, random_subspace(field, socle.basis(d), rng));
        }
        subs.push(GradedSubspace::from_spanning(field, kind, pieces));
    }
    let v = subs.pop().unwrap();
    let w = subs.pop().unwrap();
    HorrocksTriple::from_parts(pres, tri, w, v)
}

/// A module of at most `max_len` consecutive degrees with pieces of
/// dimension 1..=max_dim, starting in degree -1 or 0.
pub fn random_small_module<R: Rng + ?Sized>(field: Field, max_len: usize, max_dim: usize, rng: &mut R) -> FinLengthModule {
    let len = rng.gen_range(1..=max_len);
    let lo = rng.gen_range(-1..=0);
    let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(1..=max_dim)).collect();
    random_module(field, lo, &dims, rng)
}

fn random_form<R: Rng + ?Sized>(field: Field, deg: BiDegree, rng: &mut R) -> BiForm {
    if !deg.is_effective() {
        return BiForm::zero(field, deg);
    }
    let n = crate::bipoly::form_dim(deg);
    BiForm::from_coeffs(field, deg, random_vector(field, n, rng))
}

/// A γ-form bundle: random forms from a few ACM twists onto O or 2O,
/// minimized and stripped of ACM summands, with nonzero H¹ module.
pub fn random_gamma<R: Rng + ?Sized>(field: Field, rng: &mut R) -> Result<KerPresentation> {
    let pool = [
        BiDegree::new(-1, 0),
        BiDegree::new(0, -1),
        BiDegree::new(-1, -1),
        BiDegree::new(-2, -1),
        BiDegree::new(-1, -2),
        BiDegree::new(-2, -2),
    ];
    for _ in 0..200 {
        let nb = rng.gen_range(1..=2);
        let na = nb + rng.gen_range(2..=3);
        let a: Vec<BiDegree> = (0..na).map(|_| *pool.choose(rng).unwrap()).collect();
        let a = SplitBundle::new(a);
        let b = SplitBundle::repeat(BiDegree::diag(0), nb);
        let entries: Vec<BiForm> = (0..nb)
            .flat_map(|i| (0..na).map(move |j| (i, j)))
            .map(|(i, j)| random_form(field, b.twists()[i] - a.twists()[j], rng))
            .collect();
        let g = FormMatrix::new(field, a, b, entries)?;
        if !sheaf_surjective(&g).map(|r| r.surjective).unwrap_or(false) {
            continue;
        }
        let p = minimize_gamma(&KerPresentation::new_unchecked(g));
        let p = strip_acm(&p)?.presentation;
        if p.rank() < 1 || p.b().is_empty() {
            continue;
        }
        let h0 = p.g().induced_h(0, BiDegree::diag(0));
        if h0.rank() == h0.rows() {
            continue;
        }
        return Ok(p);
    }
    Err(Error::BoundExceeded("no suitable random γ-form bundle in 200 draws".into()))
}

/// A random invertible constant matrix of size n.
pub fn random_invertible_matrix<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    loop {
        let m = Matrix::from_rows(field, n, n, random_vector(field, n * n, rng));
        if m.is_invertible() {
            return m;
        }
    }
}
