//! Lifting problems for form matrices and the Koszul chases that realize
//! connecting maps of the spinor sequences.

use std::collections::BTreeMap;

use crate::bipoly::{BiDegree, BiForm, Twist};
use crate::error::{Error, Result};
use crate::exactla::{Matrix, Vector};
use crate::linecoh::{FormMatrix, SplitBundle};

/// Solves `u · X = w` for a form matrix `X`, one degree at a time.
///
/// `u: P → R` and `w: Q → R`; the result maps `Q → P`. Free variables are
/// set to zero, so the solution depends linearly on `w`.
pub fn solve_form_system(u: &FormMatrix, w: &FormMatrix) -> Result<FormMatrix> {
    if u.dst() != w.dst() {
        return Err(Error::Shape(format!("targets differ: {} vs {}", u.dst(), w.dst())));
    }
    let field = u.field();
    let mut by_twist: BTreeMap<Twist, Vec<usize>> = BTreeMap::new();
    for (j, &q) in w.src().twists().iter().enumerate() {
        by_twist.entry(q).or_default().push(j);
    }
    let mut cols: Vec<Option<FormMatrix>> = vec![None; w.cols()];
    for (q, idx) in by_twist {
        let h = u.induced_h(0, -q);
        let rhs: Vec<Vector> = idx.iter().map(|&j| w.column_vector(j)).collect();
        let rhs = Matrix::from_columns(field, h.rows(), &rhs);
        let x = h.solve_many(&rhs)?;
        for (k, &j) in idx.iter().enumerate() {
            cols[j] = Some(FormMatrix::column_from_vector(field, u.src(), q, &x.column(k)));
        }
    }
    let cols: Vec<FormMatrix> = cols.into_iter().map(|c| c.expect("every column solved")).collect();
    Ok(FormMatrix::from_columns(field, u.src(), &cols))
}

/// Solves `X · u = w`, with `u: P → R`, `w: P → Q` and `X: R → Q`.
pub fn solve_form_system_right(u: &FormMatrix, w: &FormMatrix) -> Result<FormMatrix> {
    Ok(solve_form_system(&u.transpose(), &w.transpose())?.transpose())
}

/// Basis of the maps `O(l) → src(u)` killed by `u`.
pub fn hom_kernel(u: &FormMatrix, l: Twist) -> Vec<FormMatrix> {
    u.induced_h(0, -l)
        .kernel_basis()
        .into_iter()
        .map(|v| FormMatrix::column_from_vector(u.field(), u.src(), l, &v))
        .collect()
}

/// One of the two rulings: the variable pair (s,t) or (u,v).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ruling {
    St,
    Uv,
}

impl Ruling {
    /// The two variables and their common bidegree.
    pub fn vars(self, field: crate::exactla::Field) -> (BiForm, BiForm, BiDegree) {
        match self {
            Ruling::St => (BiForm::s(field), BiForm::t(field), BiDegree::new(1, 0)),
            Ruling::Uv => (BiForm::u(field), BiForm::v(field), BiDegree::new(0, 1)),
        }
    }

    /// The ruling whose Koszul complex carries the H¹ class of `t`, when
    /// `t` is O(-2,0) or O(0,-2).
    pub fn of_h1_line(t: Twist) -> Option<Ruling> {
        match (t.a, t.b) {
            (-2, 0) => Some(Ruling::St),
            (0, -2) => Some(Ruling::Uv),
            _ => None,
        }
    }
}

/// `[x·I | y·I]: bundle(-unit)² → bundle`.
fn koszul_row(x: &BiForm, y: &BiForm, unit: BiDegree, bundle: &SplitBundle) -> FormMatrix {
    let lower = bundle.twisted(-unit);
    FormMatrix::scalar(x, &lower).hstack(&FormMatrix::scalar(y, &lower))
}

/// Image of the H¹ class carried by a line summand under a map to `A`.
///
/// `col: O(p,q) → A` with `psibar · col = 0`. The class lives at the shift
/// `e` where O(p,q)(e) is O(0,-2) (ruling u,v) or O(-2,0) (ruling s,t).
/// Returns a representative in H⁰(B(e)) of its image in coker H⁰(psibar).
pub fn image_chase(col: &FormMatrix, psibar: &FormMatrix, ruling: Ruling) -> Result<(BiDegree, Vector)> {
    let field = col.field();
    let a = psibar.src();
    let b = psibar.dst();
    let (x, y, unit) = ruling.vars(field);
    let pq = col.src().twists()[0];
    // O(p,q) -> 2O(pq + unit) -> O(pq + 2unit) with maps (-y, x)^T and [x, y]
    let kos = koszul_row(&y.neg(), &x, unit, a);
    let phi = solve_form_system(&kos, col).map_err(|_| {
        Error::InternalInvariantViolation(format!("no Koszul lift of a summand O{pq} through {a}"))
    })?;
    let n = a.rank();
    let first: Vec<usize> = (0..n).collect();
    let phi1 = phi
        .select_rows(&first)
        .with_bundles(SplitBundle::new(vec![pq + unit]), a.clone())?;
    let z1 = psibar.compose(&phi1);
    let lower_b = b.twisted(-unit);
    let h = solve_form_system(&FormMatrix::scalar(&x, &lower_b), &z1).map_err(|_| {
        Error::InternalInvariantViolation("Koszul factorization failed in image chase".into())
    })?;
    let e = -(pq + unit + unit);
    Ok((e, h.column_vector(0)))
}

/// Connecting map of `0 → F(f-2unit) → 2F(f-unit) → F(f) → 0` for
/// `F = ker psi`, on a section `w ∈ H⁰(F(f)) ⊂ H⁰(L1(f))`.
///
/// Returns a representative in H⁰(L0(f - 2unit)) of the class in
/// coker H⁰(psi) at that shift.
pub fn connecting_delta_spinor(psi: &FormMatrix, ruling: Ruling, f: BiDegree, w: &[crate::exactla::FieldElem]) -> Result<Vector> {
    let field = psi.field();
    let l1 = psi.src();
    let l0 = psi.dst();
    let (x, y, unit) = ruling.vars(field);
    let lift = koszul_row(&x, &y, unit, l1).induced_h(0, f);
    let a = lift
        .solve(w)
        .map_err(|_| Error::InternalInvariantViolation("section does not lift over the Koszul row".into()))?;
    let half = l1.h_dim(0, f - unit);
    let psi_a1 = psi.induced_h(0, f - unit).mul_vec(&a[..half]);
    let my = FormMatrix::scalar(&y.neg(), l0).induced_h(0, f - unit - unit);
    my.solve(&psi_a1)
        .map_err(|_| Error::InternalInvariantViolation("Koszul factorization failed in connecting map".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::Field;

    fn row(field: Field, src: &[Twist], forms: &[&str]) -> FormMatrix {
        let src = SplitBundle::new(src.to_vec());
        let dst = SplitBundle::new(vec![BiDegree::diag(0)]);
        let entries = forms.iter().map(|p| BiForm::parse(field, p, None).unwrap()).collect();
        FormMatrix::new(field, src, dst, entries).unwrap()
    }

    #[test]
    fn identity_system() {
        let f = Field::default();
        let w = row(f, &[BiDegree::new(-1, 0), BiDegree::new(0, -1)], &["s", "v"]);
        let id = FormMatrix::identity(f, w.dst().clone());
        assert_eq!(solve_form_system(&id, &w).unwrap(), w);
    }

    #[test]
    fn koszul_divisibility() {
        let f = Field::default();
        let uv = row(f, &[BiDegree::new(0, -1), BiDegree::new(0, -1)], &["u", "v"]);
        let target = row(f, &[BiDegree::new(0, -2)], &["u*v"]);
        let x = solve_form_system(&uv, &target).unwrap();
        assert_eq!(uv.compose(&x), target);
        let bad = row(f, &[BiDegree::new(-2, 0)], &["s^2"]);
        assert!(matches!(solve_form_system(&uv, &bad), Err(Error::NoSolution)));
    }

    #[test]
    fn right_solve() {
        let f = Field::default();
        let u = row(f, &[BiDegree::new(-1, 0), BiDegree::new(-1, 0)], &["s", "t"]);
        let w = FormMatrix::new(
            f,
            u.src().clone(),
            SplitBundle::new(vec![BiDegree::new(0, 1)]),
            vec![BiForm::parse(f, "s*u", None).unwrap(), BiForm::parse(f, "t*u", None).unwrap()],
        )
        .unwrap();
        let x = solve_form_system_right(&u, &w).unwrap();
        assert_eq!(x.compose(&u), w);
    }
}
