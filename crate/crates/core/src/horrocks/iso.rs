//! Isomorphism of Horrocks triples: a module isomorphism M → M′ whose
//! induced maps on M_Σ1 and M_Σ2 carry W onto W′ and V onto V′.

use std::collections::BTreeMap;

use rand::Rng;

use super::HorrocksTriple;
use crate::bipoly::BiDegree;
use crate::error::Result;
use crate::exactla::{quotient_data, span_rank, Matrix, Vector};
use crate::flmod::{hom_space, FamilyKind, GradedMap, GradedSubspace};
use crate::linecoh::FormMatrix;

#[derive(Clone, Debug)]
pub struct TripleIso {
    pub phi: GradedMap,
    /// Induced maps on M_Σ1 and M_Σ2 by degree.
    pub sigma1: BTreeMap<i64, Matrix>,
    pub sigma2: BTreeMap<i64, Matrix>,
}

/// Lift of a module map to `L0 → L0′` along the generators.
fn chain_lift(t: &HorrocksTriple, t2: &HorrocksTriple, phi: &GradedMap) -> Result<FormMatrix> {
    let field = t.field();
    let l0b = t2.presentation.l0();
    let mut cols = Vec::new();
    for (d, g) in &t.presentation.generators {
        let m = t.module();
        let image = phi.at(*d, field, t2.module().dim(*d), m.dim(*d)).mul_vec(g);
        let x = t2.presentation.pi(*d).solve(&image)?;
        cols.push(FormMatrix::column_from_vector(field, l0b, BiDegree::diag(-d), &x));
    }
    FormMatrix::from_columns(field, l0b, &cols).with_bundles(t.presentation.l0().clone(), l0b.clone())
}

/// Induced maps on one spinor diagonal, by degree.
fn induced(t: &HorrocksTriple, t2: &HorrocksTriple, phi0: &FormMatrix, kind: FamilyKind) -> BTreeMap<i64, Matrix> {
    let field = t.field();
    let mut out = BTreeMap::new();
    for d in t.tri.family(kind).degrees() {
        let h = phi0.induced_h(0, kind.shift(d));
        let q = &t.tri.family(kind).quotients[&d];
        let cols: Vec<Vector> = q
            .coset_basis
            .columns()
            .iter()
            .map(|x| t2.tri.project(kind, d, &h.mul_vec(x)))
            .collect();
        out.insert(d, Matrix::from_columns(field, t2.tri.dim(kind, d), &cols));
    }
    out
}

/// Linear conditions "the induced map sends S into S′", one row per
/// condition, one column per hom-space basis element.
fn containment_rows(maps: &[BTreeMap<i64, Matrix>], s: &GradedSubspace, s2: &GradedSubspace, dim2: impl Fn(i64) -> usize) -> Vec<Vector> {
    let field = s.field;
    let mut rows = Vec::new();
    for d in s.degrees() {
        let n2 = dim2(d);
        let q = quotient_data(field, n2, s2.basis(d));
        for w in s.basis(d) {
            let per_basis: Vec<Vector> = maps
                .iter()
                .map(|m| match m.get(&d) {
                    Some(mat) => q.projection.mul_vec(&mat.mul_vec(w)),
                    None => vec![field.zero(); q.dim()],
                })
                .collect();
            for r in 0..q.dim() {
                rows.push(per_basis.iter().map(|v| v[r].clone()).collect());
            }
        }
    }
    rows
}

fn subspace_image_equal(maps: &BTreeMap<i64, Matrix>, s: &GradedSubspace, s2: &GradedSubspace) -> bool {
    let degrees: std::collections::BTreeSet<i64> = s.degrees().into_iter().chain(s2.degrees()).collect();
    degrees.into_iter().all(|d| {
        let Some(m) = maps.get(&d) else { return s.dim(d) == 0 && s2.dim(d) == 0 };
        let img: Vec<Vector> = s.basis(d).iter().map(|w| m.mul_vec(w)).collect();
        let n = m.rows();
        let r = span_rank(s.field, n, &img);
        let joint: Vec<Vector> = img.iter().chain(s2.basis(d)).cloned().collect();
        r == s2.dim(d) && span_rank(s.field, n, &joint) == r
    })
}

/// Randomized search for an isomorphism of triples; `Ok(None)` means none
/// was found within `trials`, which does not prove there is none.
pub fn triple_iso<R: Rng + ?Sized>(
    t: &HorrocksTriple,
    t2: &HorrocksTriple,
    trials: usize,
    rng: &mut R,
) -> Result<Option<TripleIso>> {
    let (m, m2) = (t.module(), t2.module());
    if m.dims_map() != m2.dims_map()
        || t.wabs_dims() != t2.wabs_dims()
        || t.vabs_dims() != t2.vabs_dims()
    {
        return Ok(None);
    }
    let field = t.field();
    if m.is_zero() {
        return Ok(Some(TripleIso {
            phi: GradedMap { maps: BTreeMap::new() },
            sigma1: BTreeMap::new(),
            sigma2: BTreeMap::new(),
        }));
    }
    let basis = hom_space(m, m2);
    if basis.is_empty() {
        return Ok(None);
    }
    let mut ind1 = Vec::new();
    let mut ind2 = Vec::new();
    for b in &basis {
        let phi0 = chain_lift(t, t2, b)?;
        ind1.push(induced(t, t2, &phi0, FamilyKind::M10));
        ind2.push(induced(t, t2, &phi0, FamilyKind::M01));
    }
    let mut rows = containment_rows(&ind1, &t.w, &t2.w, |d| t2.tri.dim(FamilyKind::M10, d));
    rows.extend(containment_rows(&ind2, &t.v, &t2.v, |d| t2.tri.dim(FamilyKind::M01, d)));
    let coeff_space: Vec<Vector> = if rows.is_empty() {
        (0..basis.len())
            .map(|i| (0..basis.len()).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect()
    } else {
        Matrix::from_columns(field, basis.len(), &rows).transpose().kernel_basis()
    };
    let combine = |maps: &[BTreeMap<i64, Matrix>], c: &Vector| {
        let gm: Vec<GradedMap> = maps.iter().map(|m| GradedMap { maps: m.clone() }).collect();
        GradedMap::combination(&gm, c).maps
    };
    let degrees = m.degrees();
    for _ in 0..trials.max(1) {
        let c: Vec<_> = coeff_space.iter().map(|_| field.random(rng)).collect();
        let coeffs: Vector = (0..basis.len())
            .map(|j| {
                coeff_space
                    .iter()
                    .zip(&c)
                    .fold(field.zero(), |acc, (v, x)| acc + v[j].clone() * x.clone())
            })
            .collect();
        let phi = GradedMap::combination(&basis, &coeffs);
        if !(phi.is_invertible() && degrees.iter().all(|d| phi.maps.contains_key(d))) {
            continue;
        }
        let s1 = combine(&ind1, &coeffs);
        let s2 = combine(&ind2, &coeffs);
        let s1_ok = s1.values().all(Matrix::is_invertible) && subspace_image_equal(&s1, &t.w, &t2.w);
        let s2_ok = s2.values().all(Matrix::is_invertible) && subspace_image_equal(&s2, &t.v, &t2.v);
        if s1_ok && s2_ok {
            return Ok(Some(TripleIso {
                phi,
                sigma1: s1,
                sigma2: s2,
            }));
        }
    }
    Ok(None)
}
