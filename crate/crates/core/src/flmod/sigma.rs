//! The three diagonals M00 = M, M10 = M_{Σ1}, M01 = M_{Σ2} of the
//! bigraded module H¹_*(F), with the s,t,u,v operators between them.

use std::collections::BTreeMap;
use std::fmt;

use crate::bipoly::{BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{span_rank, Field, Matrix, QuotientData, Vector};
use crate::presheaf::{coker_mult, KerPresentation};

/// Which diagonal: `M00_d = H¹(F(d,d))`, `M10_d = H¹(F(d+1,d))`,
/// `M01_d = H¹(F(d,d+1))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyKind {
    M00,
    M10,
    M01,
}

impl FamilyKind {
    pub fn shift(self, d: i64) -> BiDegree {
        match self {
            FamilyKind::M00 => BiDegree::diag(d),
            FamilyKind::M10 => BiDegree::sigma1(d),
            FamilyKind::M01 => BiDegree::sigma2(d),
        }
    }

    /// The variables killing the socle of this family: u,v on M10 and
    /// s,t on M01.
    pub fn socle_vars(self) -> Option<[Var; 2]> {
        match self {
            FamilyKind::M00 => None,
            FamilyKind::M10 => Some([Var::U, Var::V]),
            FamilyKind::M01 => Some([Var::S, Var::T]),
        }
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::M00 => "M",
            FamilyKind::M10 => "M_Σ1",
            FamilyKind::M01 => "M_Σ2",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    S,
    T,
    U,
    V,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::S, Var::T, Var::U, Var::V];

    pub fn form(self, field: Field) -> BiForm {
        match self {
            Var::S => BiForm::s(field),
            Var::T => BiForm::t(field),
            Var::U => BiForm::u(field),
            Var::V => BiForm::v(field),
        }
    }

    fn is_first(self) -> bool {
        matches!(self, Var::S | Var::T)
    }

    /// Target of multiplication by this variable from `kind` in degree `d`.
    pub fn target(self, kind: FamilyKind, d: i64) -> Option<(FamilyKind, i64)> {
        match (kind, self.is_first()) {
            (FamilyKind::M00, true) => Some((FamilyKind::M10, d)),
            (FamilyKind::M00, false) => Some((FamilyKind::M01, d)),
            (FamilyKind::M10, false) => Some((FamilyKind::M00, d + 1)),
            (FamilyKind::M01, true) => Some((FamilyKind::M00, d + 1)),
            _ => None,
        }
    }
}

/// One diagonal, with each piece a quotient of H⁰(L0(shift)).
#[derive(Clone, Debug)]
pub struct Family {
    pub kind: FamilyKind,
    pub quotients: BTreeMap<i64, QuotientData>,
}

impl Family {
    pub fn dim(&self, d: i64) -> usize {
        self.quotients.get(&d).map_or(0, |q| q.dim())
    }

    /// Degrees with a nonzero piece.
    pub fn degrees(&self) -> Vec<i64> {
        self.quotients.iter().filter(|(_, q)| q.dim() > 0).map(|(&d, _)| d).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.quotients.values().map(|q| q.dim()).sum()
    }

    pub fn dims_map(&self) -> BTreeMap<i64, usize> {
        self.degrees().into_iter().map(|d| (d, self.dim(d))).collect()
    }
}

/// H¹_*(F) on the three diagonals for `F = ker ψ`.
#[derive(Clone, Debug)]
pub struct TriDiag {
    pub presentation: KerPresentation,
    pub m00: Family,
    pub m10: Family,
    pub m01: Family,
    ops: BTreeMap<(Var, FamilyKind, i64), Matrix>,
}

impl TriDiag {
    pub fn field(&self) -> Field {
        self.presentation.field()
    }

    pub fn family(&self, kind: FamilyKind) -> &Family {
        match kind {
            FamilyKind::M00 => &self.m00,
            FamilyKind::M10 => &self.m10,
            FamilyKind::M01 => &self.m01,
        }
    }

    pub fn dim(&self, kind: FamilyKind, d: i64) -> usize {
        self.family(kind).dim(d)
    }

    /// Multiplication by `var` out of `kind` in degree `d`.
    pub fn op(&self, var: Var, kind: FamilyKind, d: i64) -> Result<Matrix> {
        let (tk, td) = var
            .target(kind, d)
            .ok_or_else(|| Error::Unsupported(format!("{var:?} does not act on {kind} within the three diagonals")))?;
        Ok(self
            .ops
            .get(&(var, kind, d))
            .cloned()
            .unwrap_or_else(|| Matrix::zeros(self.field(), self.dim(tk, td), self.dim(kind, d))))
    }

    /// Coset coordinates of a section of L0 at the family's shift.
    pub fn project(&self, kind: FamilyKind, d: i64, v: &[crate::exactla::FieldElem]) -> Vector {
        match self.family(kind).quotients.get(&d) {
            Some(q) => q.project(v),
            None => Vec::new(),
        }
    }

    /// A section of L0 representing a class.
    pub fn lift(&self, kind: FamilyKind, d: i64, v: &[crate::exactla::FieldElem]) -> Vector {
        match self.family(kind).quotients.get(&d) {
            Some(q) => q.lift(v),
            None => vec![self.field().zero(); self.presentation.b().h_dim(0, kind.shift(d))],
        }
    }
}

/// Builds the three diagonals of H¹_*(ker ψ) with all cross-operators.
pub fn sigma_modules(p: &KerPresentation) -> Result<TriDiag> {
    let b = p.b();
    let field = p.field();
    let lo = b.twists().iter().map(|t| -t.a.min(t.b)).min().unwrap_or(0) - 1;
    let gen = b.twists().iter().map(|t| -t.a.min(t.b)).max().unwrap_or(0);
    let mut m00 = BTreeMap::new();
    let mut d = lo;
    loop {
        if d > gen + 200 {
            return Err(Error::BoundExceeded("H¹ module does not vanish in high degree".into()));
        }
        let q = p.coker_model(BiDegree::diag(d))?;
        let zero = q.dim() == 0;
        m00.insert(d, q);
        if zero && d >= gen {
            break;
        }
        d += 1;
    }
    let top = d;
    let mut families = BTreeMap::new();
    families.insert(FamilyKind::M00, m00);
    for kind in [FamilyKind::M10, FamilyKind::M01] {
        let mut qs = BTreeMap::new();
        for d in lo..=top {
            qs.insert(d, p.coker_model(kind.shift(d))?);
        }
        families.insert(kind, qs);
    }
    let mut ops = BTreeMap::new();
    for (&kind, qs) in &families {
        for (&d, src) in qs {
            for var in Var::ALL {
                let Some((tk, td)) = var.target(kind, d) else { continue };
                let Some(dst) = families[&tk].get(&td) else { continue };
                if src.dim() == 0 || dst.dim() == 0 {
                    continue;
                }
                let m = coker_mult(b, &var.form(field), kind.shift(d), src, dst);
                ops.insert((var, kind, d), m);
            }
        }
    }
    let mut take = |k| Family {
        kind: k,
        quotients: families.remove(&k).unwrap(),
    };
    let (m00, m10, m01) = (take(FamilyKind::M00), take(FamilyKind::M10), take(FamilyKind::M01));
    Ok(TriDiag {
        presentation: p.clone(),
        m00,
        m10,
        m01,
        ops,
    })
}

/// A graded vector subspace of one of the diagonals, stored as an
/// independent spanning set per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedSubspace {
    pub kind: FamilyKind,
    pub field: Field,
    pub pieces: BTreeMap<i64, Vec<Vector>>,
}

impl GradedSubspace {
    pub fn zero(field: Field, kind: FamilyKind) -> GradedSubspace {
        GradedSubspace {
            kind,
            field,
            pieces: BTreeMap::new(),
        }
    }

    /// Keeps a maximal independent subset of the given vectors.
    pub fn from_spanning(field: Field, kind: FamilyKind, pieces: BTreeMap<i64, Vec<Vector>>) -> GradedSubspace {
        let mut out = GradedSubspace::zero(field, kind);
        for (d, vs) in pieces {
            for v in vs {
                out.insert(d, v);
            }
        }
        out
    }

    /// Adds a vector in degree `d` if it is not already in the span.
    pub fn insert(&mut self, d: i64, v: Vector) -> bool {
        let n = v.len();
        let piece = self.pieces.entry(d).or_default();
        let before = span_rank(self.field, n, piece);
        piece.push(v);
        if span_rank(self.field, n, piece) == before {
            piece.pop();
            if piece.is_empty() {
                self.pieces.remove(&d);
            }
            return false;
        }
        true
    }

    pub fn dim(&self, d: i64) -> usize {
        self.pieces.get(&d).map_or(0, Vec::len)
    }

    pub fn total_dim(&self) -> usize {
        self.pieces.values().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn degrees(&self) -> Vec<i64> {
        self.pieces.iter().filter(|(_, v)| !v.is_empty()).map(|(&d, _)| d).collect()
    }

    pub fn dims_by_degree(&self) -> BTreeMap<i64, usize> {
        self.degrees().into_iter().map(|d| (d, self.dim(d))).collect()
    }

    pub fn basis(&self, d: i64) -> &[Vector] {
        self.pieces.get(&d).map_or(&[], Vec::as_slice)
    }

    /// Same kind and equal spans in every degree.
    pub fn same_span(&self, other: &GradedSubspace) -> bool {
        if self.kind != other.kind {
            return false;
        }
        let degrees: std::collections::BTreeSet<i64> =
            self.degrees().into_iter().chain(other.degrees()).collect();
        degrees.into_iter().all(|d| {
            let (a, b) = (self.basis(d), other.basis(d));
            if a.len() != b.len() {
                return false;
            }
            let n = a.first().map_or(0, Vec::len);
            let joint: Vec<Vector> = a.iter().chain(b).cloned().collect();
            span_rank(self.field, n, &joint) == a.len()
        })
    }

    /// Checks that every vector has the right length and is killed by the
    /// socle variables of its family.
    pub fn check_socle(&self, t: &TriDiag) -> Result<()> {
        let vars = self
            .kind
            .socle_vars()
            .ok_or_else(|| Error::Unsupported("socles are defined on M_Σ1 and M_Σ2 only".into()))?;
        for (&d, vs) in &self.pieces {
            let n = t.dim(self.kind, d);
            for v in vs {
                if v.len() != n {
                    return Err(Error::Shape(format!(
                        "vector of length {} in degree {d} of {} which has dimension {n}",
                        v.len(),
                        self.kind
                    )));
                }
                for var in vars {
                    if !t.op(var, self.kind, d)?.mul_vec(v).iter().all(|x| x.is_zero()) {
                        return Err(Error::VerificationFailed(format!(
                            "vector in degree {d} of {} is not killed by {var:?}",
                            self.kind
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

/// The socle of M10 (killed by u,v) or of M01 (killed by s,t).
pub fn socle_subspace(t: &TriDiag, kind: FamilyKind) -> Result<GradedSubspace> {
    let vars = kind
        .socle_vars()
        .ok_or_else(|| Error::Unsupported("socles are defined on M_Σ1 and M_Σ2 only".into()))?;
    let mut out = GradedSubspace::zero(t.field(), kind);
    for d in t.family(kind).degrees() {
        let stacked = t.op(vars[0], kind, d)?.vstack(&t.op(vars[1], kind, d)?);
        for v in stacked.kernel_basis() {
            out.insert(d, v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flmod::{minimal_presentation, FinLengthModule};

    fn tri(m: &FinLengthModule) -> TriDiag {
        let p = minimal_presentation(m).unwrap();
        sigma_modules(&p.f()).unwrap()
    }

    #[test]
    fn omega_sigma_pieces() {
        let f = Field::default();
        let t = tri(&FinLengthModule::trivial(f, 0, vec![1]));
        for fam in [&t.m10, &t.m01] {
            assert_eq!(fam.dims_map(), BTreeMap::from([(0, 2)]));
        }
        assert_eq!(t.m00.dims_map(), BTreeMap::from([(0, 1)]));
        assert_eq!(socle_subspace(&t, FamilyKind::M10).unwrap().total_dim(), 2);
        assert_eq!(socle_subspace(&t, FamilyKind::M01).unwrap().total_dim(), 2);
    }

    #[test]
    fn twice_omega_twisted() {
        let f = Field::default();
        let t = tri(&FinLengthModule::trivial(f, -1, vec![2]));
        assert_eq!(t.m10.dims_map(), BTreeMap::from([(-1, 4)]));
        assert_eq!(t.m01.dims_map(), BTreeMap::from([(-1, 4)]));
        assert_eq!(socle_subspace(&t, FamilyKind::M10).unwrap().total_dim(), 4);
    }

    #[test]
    fn composites_match_module_operators() {
        // k in degree 0 and 1 with x0 acting by 1
        let f = Field::default();
        let one = Matrix::identity(f, 1);
        let z = Matrix::zeros(f, 1, 1);
        let zz = || Matrix::zeros(f, 0, 1);
        let m = FinLengthModule::new(
            f,
            0,
            vec![1, 1],
            vec![[one, z.clone(), z.clone(), z], [zz(), zz(), zz(), zz()]],
        )
        .unwrap();
        let t = tri(&m);
        let pairs = [(Var::S, Var::U), (Var::S, Var::V), (Var::T, Var::U), (Var::T, Var::V)];
        for d in -1..=2 {
            for (i, (a, b)) in pairs.iter().enumerate() {
                let via10 = t.op(*b, FamilyKind::M10, d).unwrap().mul(&t.op(*a, FamilyKind::M00, d).unwrap());
                let via01 = t.op(*a, FamilyKind::M01, d).unwrap().mul(&t.op(*b, FamilyKind::M00, d).unwrap());
                let x = match t.presentation.mult_cokermodel(&BiForm::x(f, i), BiDegree::diag(d)) {
                    Ok(x) => x,
                    Err(_) => continue,
                };
                assert_eq!(via10.rows(), m.dim(d + 1));
                assert_eq!(via10, x, "x{i} via M10 at {d}");
                assert_eq!(via01, x, "x{i} via M01 at {d}");
            }
        }
    }

    #[test]
    fn zero_module_is_empty() {
        let f = Field::default();
        let t = tri(&FinLengthModule::zero(f));
        assert_eq!(t.m10.total_dim(), 0);
        assert!(socle_subspace(&t, FamilyKind::M01).unwrap().is_zero());
    }
}
