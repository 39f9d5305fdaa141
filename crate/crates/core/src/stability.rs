//! Stability diagnostics for rank-two bundles with c1 = 0 in γ-form:
//! sections of E, E(1,-1), E(-1,1), and the determinants of the two
//! ruling blocks of g with their root multiplicities.

use std::fmt;

use crate::bipoly::{BiDegree, BiForm};
use crate::error::{Error, Result};
use crate::exactla::{Field, FieldElem};
use crate::linecoh::FormMatrix;
use crate::presheaf::KerPresentation;

/// Which ruling a binary form lives on: (s,t) or (u,v).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ruling {
    St,
    Uv,
}

impl Ruling {
    fn degree(self, n: i64) -> BiDegree {
        match self {
            Ruling::St => BiDegree::new(n, 0),
            Ruling::Uv => BiDegree::new(0, n),
        }
    }

    fn of(d: BiDegree) -> Option<Ruling> {
        match (d.a, d.b) {
            (0, 0) => None,
            (_, 0) => Some(Ruling::St),
            (0, _) => Some(Ruling::Uv),
            _ => None,
        }
    }

    /// Coefficients c_k of s^k t^(n-k), resp. u^k v^(n-k).
    fn coeffs(self, f: &BiForm) -> Vec<FieldElem> {
        let n = self.order(f.degree());
        (0..=n)
            .map(|k| match self {
                Ruling::St => f.coeff(k, 0),
                Ruling::Uv => f.coeff(0, k),
            })
            .collect()
    }

    fn order(self, d: BiDegree) -> i64 {
        match self {
            Ruling::St => d.a,
            Ruling::Uv => d.b,
        }
    }

    fn form(self, field: Field, c: &[FieldElem]) -> BiForm {
        let n = c.len() as i64 - 1;
        let d = self.degree(n);
        let mut f = BiForm::zero(field, d);
        for (k, x) in c.iter().enumerate() {
            let (i, j) = match self {
                Ruling::St => (k as i64, 0),
                Ruling::Uv => (0, k as i64),
            };
            f = f.add(&BiForm::monomial(field, d, i, j, x.clone()));
        }
        f
    }
}

type Poly = Vec<FieldElem>;

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn deg(p: &Poly) -> i64 {
    p.len() as i64 - 1
}

fn derivative(field: Field, p: &Poly) -> Poly {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| field.from_i64(k as i64) * c.clone()).collect())
}

fn sub(a: &Poly, b: &Poly, field: Field) -> Poly {
    let n = a.len().max(b.len());
    let z = field.zero();
    trim((0..n).map(|k| a.get(k).unwrap_or(&z) - b.get(k).unwrap_or(&z)).collect())
}

fn divmod(a: &Poly, b: &Poly, field: Field) -> (Poly, Poly) {
    let mut r = a.clone();
    let lead = b.last().expect("division by zero polynomial").inv();
    let mut q = vec![field.zero(); (a.len() + 1).saturating_sub(b.len())];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap().clone() * lead.clone();
        for (k, x) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(c.clone() * x.clone());
        }
        q[shift] = c;
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(p: Poly) -> Poly {
    match p.last() {
        Some(l) => {
            let inv = l.inv();
            p.iter().map(|c| c.clone() * inv.clone()).collect()
        }
        None => p,
    }
}

fn gcd(a: &Poly, b: &Poly, field: Field) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = divmod(&a, &b, field).1;
        a = b;
        b = r;
    }
    monic(a)
}

/// Square-free decomposition f = c·∏ a_i^i (Yun), valid when the
/// characteristic exceeds the degree.
fn squarefree(field: Field, f: &Poly) -> Vec<(Poly, usize)> {
    let mut out = Vec::new();
    if deg(f) < 1 {
        return out;
    }
    let df = derivative(field, f);
    let c = gcd(f, &df, field);
    let mut w = divmod(f, &c, field).0;
    let y = divmod(&df, &c, field).0;
    let mut z = sub(&y, &derivative(field, &w), field);
    let mut i = 1;
    while deg(&w) >= 1 {
        let a = gcd(&w, &z, field);
        w = divmod(&w, &a, field).0;
        let y = divmod(&z, &a, field).0;
        z = sub(&y, &derivative(field, &w), field);
        if deg(&a) >= 1 {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

/// A binary form with its square-free factors and the multiplicities of
/// its roots over the algebraic closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryRoots {
    pub form: BiForm,
    /// Pairs (a_i, i) with form = c·∏ a_i^i, each a_i monic and square-free.
    pub factors: Vec<(BiForm, usize)>,
    /// One entry per distinct root, sorted descending.
    pub multiplicities: Vec<usize>,
}

impl BinaryRoots {
    pub fn analyze(form: &BiForm) -> Result<BinaryRoots> {
        let field = form.field();
        let ruling = Ruling::of(form.degree()).unwrap_or(Ruling::St);
        let n = ruling.order(form.degree());
        if form.is_zero() || n == 0 {
            return Ok(BinaryRoots {
                form: form.clone(),
                factors: Vec::new(),
                multiplicities: Vec::new(),
            });
        }
        if let Field::Prime(p) = field {
            if (p as i64) <= n {
                return Err(Error::Unsupported(format!("root multiplicities of degree {n} in characteristic {p}")));
            }
        }
        let c = ruling.coeffs(form);
        let top = trim(c.clone());
        let at_infinity = (n - deg(&top)) as usize;
        let mut factors = Vec::new();
        let mut multiplicities = Vec::new();
        for (a, i) in squarefree(field, &top) {
            multiplicities.extend(std::iter::repeat_n(i, deg(&a) as usize));
            factors.push((ruling.form(field, &a), i));
        }
        if at_infinity > 0 {
            multiplicities.push(at_infinity);
            factors.push((ruling.form(field, &[field.one(), field.zero()]), at_infinity));
        }
        multiplicities.sort_unstable_by(|a, b| b.cmp(a));
        Ok(BinaryRoots {
            form: form.clone(),
            factors,
            multiplicities,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.form.is_zero()
    }

    pub fn has_repeated_root(&self) -> bool {
        self.multiplicities.iter().any(|&m| m > 1)
    }

    /// Equality up to a nonzero scalar.
    pub fn proportional(&self, other: &BiForm) -> bool {
        proportional(&self.form, other)
    }
}

impl fmt::Display for BinaryRoots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (singular block)");
        }
        write!(f, "{}", self.form)?;
        if !self.factors.is_empty() {
            let parts: Vec<String> = self
                .factors
                .iter()
                .map(|(a, i)| if *i == 1 { format!("({a})") } else { format!("({a})^{i}") })
                .collect();
            write!(f, " ~ {}", parts.join(" "))?;
        }
        write!(f, "; root multiplicities {:?}", self.multiplicities)
    }
}

fn proportional(a: &BiForm, b: &BiForm) -> bool {
    if a.degree() != b.degree() || a.is_zero() != b.is_zero() {
        return false;
    }
    let Some(k) = a.coeffs().iter().position(|c| !c.is_zero()) else { return true };
    if b.coeffs()[k].is_zero() {
        return false;
    }
    let r = b.coeffs()[k].clone() * a.coeffs()[k].inv();
    a.scale(&r) == *b
}

fn determinant(m: &FormMatrix, rows: &[usize], cols: &[usize]) -> BiForm {
    let field = m.field();
    if rows.len() == 1 {
        return m.entry(rows[0], cols[0]).clone();
    }
    let rest: Vec<usize> = rows[1..].to_vec();
    let mut acc: Option<BiForm> = None;
    for (k, &c) in cols.iter().enumerate() {
        let others: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let mut term = m.entry(rows[0], c).mul(&determinant(m, &rest, &others));
        if k % 2 == 1 {
            term = term.neg();
        }
        acc = Some(match acc {
            None => term,
            Some(a) if a.degree() == term.degree() => a.add(&term),
            Some(a) if term.is_zero() => a,
            Some(a) if a.is_zero() => term,
            Some(_) => unreachable!("minors of a graded matrix are homogeneous"),
        });
    }
    acc.unwrap_or_else(|| BiForm::zero(field, BiDegree::diag(0)))
}

/// The two ruling blocks of a γ-presentation matrix: columns from Σ2-type
/// summands O(a,a+1) of A carry (s,t)-forms, Σ1-type O(a+1,a) carry
/// (u,v)-forms.
#[derive(Clone, Debug)]
pub struct JumpingDeterminants {
    pub g1: BinaryRoots,
    pub g2: BinaryRoots,
}

pub fn jumping_determinants(p: &KerPresentation) -> Result<JumpingDeterminants> {
    let g = p.g();
    if !p.b().is_free() {
        return Err(Error::Shape("the target of g must be free".into()));
    }
    let a = p.a().twists();
    let sigma2: Vec<usize> = (0..a.len()).filter(|&j| a[j].b == a[j].a + 1).collect();
    let sigma1: Vec<usize> = (0..a.len()).filter(|&j| a[j].a == a[j].b + 1).collect();
    if sigma1.len() + sigma2.len() != a.len() {
        return Err(Error::Shape("A must consist of spinor bundles only".into()));
    }
    let rows: Vec<usize> = (0..g.rows()).collect();
    let mut blocks = Vec::new();
    for (cols, ruling, name) in [(&sigma2, Ruling::St, "g1"), (&sigma1, Ruling::Uv, "g2")] {
        if cols.len() != rows.len() {
            return Err(Error::Shape(format!(
                "{name} is {}×{}, not square",
                rows.len(),
                cols.len()
            )));
        }
        for &r in &rows {
            for &c in cols.iter() {
                let d = g.entry(r, c).degree();
                if Ruling::of(d) != Some(ruling) {
                    return Err(Error::Shape(format!("{name} entry ({r},{c}) has bidegree {d}")));
                }
            }
        }
        blocks.push(BinaryRoots::analyze(&determinant(g, &rows, cols))?);
    }
    let g2 = blocks.pop().unwrap();
    let g1 = blocks.pop().unwrap();
    Ok(JumpingDeterminants { g1, g2 })
}

#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub h0: usize,
    pub h0_plus_minus: usize,
    pub h0_minus_plus: usize,
    pub stable: bool,
    /// Present when g has the two-block spinor shape.
    pub determinants: Option<JumpingDeterminants>,
}

impl fmt::Display for StabilityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "h0(E) = {}", self.h0)?;
        writeln!(f, "h0(E(1,-1)) = {}", self.h0_plus_minus)?;
        writeln!(f, "h0(E(-1,1)) = {}", self.h0_minus_plus)?;
        writeln!(f, "le Potier stable: {}", if self.stable { "yes" } else { "no" })?;
        match &self.determinants {
            Some(d) => {
                writeln!(f, "det g1 = {}", d.g1)?;
                write!(f, "det g2 = {}", d.g2)
            }
            None => write!(f, "determinants: g is not in two-block spinor shape"),
        }
    }
}

/// Section counts deciding le Potier stability of a rank-two bundle with
/// c1 = 0, together with the jumping determinants when defined.
pub fn le_potier_check(p: &KerPresentation) -> Result<StabilityReport> {
    if p.rank() != 2 || p.c1() != BiDegree::diag(0) {
        return Err(Error::Shape(format!("need rank 2 and c1 = 0, got rank {} and c1 = {}", p.rank(), p.c1())));
    }
    let h0 = |e: BiDegree| p.h0_space(e).len();
    let (a, b, c) = (h0(BiDegree::diag(0)), h0(BiDegree::new(1, -1)), h0(BiDegree::new(-1, 1)));
    Ok(StabilityReport {
        h0: a,
        h0_plus_minus: b,
        h0_minus_plus: c,
        stable: a == 0 && b == 0 && c == 0,
        determinants: jumping_determinants(p).ok(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::linecoh::SplitBundle;

    fn gamma_matrix(f: Field, rows: &[&[&str]]) -> FormMatrix {
        let a = SplitBundle::new(vec![
            BiDegree::new(0, 1),
            BiDegree::new(0, 1),
            BiDegree::new(1, 0),
            BiDegree::new(1, 0),
        ]);
        let b = SplitBundle::repeat(BiDegree::diag(1), 2);
        let mut entries = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                entries.push(BiForm::parse(f, e, Some(b.twists()[i] - a.twists()[j])).unwrap());
            }
        }
        FormMatrix::new(f, a, b, entries).unwrap()
    }

    fn gamma(f: Field, rows: &[&[&str]]) -> KerPresentation {
        KerPresentation::new(gamma_matrix(f, rows)).unwrap()
    }

    #[test]
    fn squarefree_of_products() {
        let f = Field::default();
        let s = BiForm::s(f);
        let t = BiForm::t(f);
        let l = s.sub(&t);
        let m = s.add(&t.scale(&f.from_i64(3)));
        let g = l.pow(3).mul(&m).mul(&t.pow(2));
        let r = BinaryRoots::analyze(&g).unwrap();
        assert_eq!(r.multiplicities, vec![3, 2, 1]);
        let back = r.factors.iter().fold(BiForm::one(f), |acc, (a, i)| acc.mul(&a.pow(*i as u32)));
        assert!(proportional(&back, &g));
        let u = BiForm::u(f);
        let v = BiForm::v(f);
        let r = BinaryRoots::analyze(&u.mul(&v).mul(&u.add(&v))).unwrap();
        assert_eq!(r.multiplicities, vec![1, 1, 1]);
    }

    #[test]
    fn lepotier_example() {
        let f = Field::default();
        let p = fixture(f, "lepotier").unwrap();
        let r = le_potier_check(&p).unwrap();
        assert!(r.stable);
        let d = r.determinants.unwrap();
        let s = BiForm::s(f);
        let t = BiForm::t(f);
        assert!(d.g1.proportional(&s.sub(&t).pow(2)));
        assert!(d.g2.proportional(&BiForm::v(f).pow(2)));
        assert!(d.g1.has_repeated_root() && d.g2.has_repeated_root());
    }

    #[test]
    fn split_and_extension_are_unstable() {
        let f = Field::default();
        let r = le_potier_check(&fixture(f, "split-sum").unwrap()).unwrap();
        assert!(!r.stable);
        assert!(r.h0_plus_minus > 0 && r.h0_minus_plus > 0);
        let ext = gamma(f, &[&["s", "t", "u", "0"], &["0", "0", "v", "u"]]);
        let r = le_potier_check(&ext).unwrap();
        assert!(!r.stable);
        assert!(r.determinants.unwrap().g1.is_zero());
    }

    #[test]
    fn generic_type_is_stable_with_simple_roots() {
        let f = Field::default();
        let r = le_potier_check(&fixture(f, "null-corr-family").unwrap()).unwrap();
        assert!(r.stable);
        let d = r.determinants.unwrap();
        assert_eq!(d.g1.multiplicities, vec![1, 1]);
        assert_eq!(d.g2.multiplicities, vec![1, 1]);
    }

    #[test]
    fn diagonal_block_determinant() {
        let f = Field::default();
        let p = KerPresentation::new_unchecked(gamma_matrix(f, &[&["s", "0", "u", "0"], &["0", "t", "0", "v"]]));
        let d = jumping_determinants(&p).unwrap();
        assert!(d.g1.proportional(&BiForm::s(f).mul(&BiForm::t(f))));
        assert!(d.g2.proportional(&BiForm::u(f).mul(&BiForm::v(f))));
    }

    #[test]
    fn rejects_wrong_rank() {
        let f = Field::default();
        assert!(le_potier_check(&fixture(f, "omega1").unwrap()).is_err());
        assert!(jumping_determinants(&fixture(f, "omega1").unwrap()).is_err());
    }
}
