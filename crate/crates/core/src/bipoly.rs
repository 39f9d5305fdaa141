//! Bihomogeneous forms in k[s,t;u,v].
//!
//! A form of bidegree (a,b) is stored densely over the monomials
//! s^i t^(a-i) u^j v^(b-j), ordered by i descending and then j descending.
//! The coordinate ring of the quadric is the diagonal (d,d) part, with
//! x0, x1, x2, x3 = su, sv, tu, tv.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::exactla::{Field, FieldElem, Matrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BiDegree {
    pub a: i64,
    pub b: i64,
}

/// A line bundle O(a,b) is named by its bidegree.
pub type Twist = BiDegree;

impl BiDegree {
    pub const fn new(a: i64, b: i64) -> BiDegree {
        BiDegree { a, b }
    }

    /// O(d) = O(d,d).
    pub const fn diag(d: i64) -> BiDegree {
        BiDegree { a: d, b: d }
    }

    /// Σ1(d) = O(d+1,d).
    pub const fn sigma1(d: i64) -> BiDegree {
        BiDegree { a: d + 1, b: d }
    }

    /// Σ2(d) = O(d,d+1).
    pub const fn sigma2(d: i64) -> BiDegree {
        BiDegree { a: d, b: d + 1 }
    }

    /// True when forms of this bidegree can be nonzero.
    pub fn is_effective(self) -> bool {
        self.a >= 0 && self.b >= 0
    }

    pub fn is_acm(self) -> bool {
        (self.a - self.b).abs() <= 1
    }

    pub fn is_free(self) -> bool {
        self.a == self.b
    }

    /// Componentwise `self >= other`.
    pub fn dominates(self, other: BiDegree) -> bool {
        self.a >= other.a && self.b >= other.b
    }
}

impl fmt::Display for BiDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

impl Add for BiDegree {
    type Output = BiDegree;
    fn add(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for BiDegree {
    type Output = BiDegree;
    fn sub(self, o: BiDegree) -> BiDegree {
        BiDegree::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for BiDegree {
    type Output = BiDegree;
    fn neg(self) -> BiDegree {
        BiDegree::new(-self.a, -self.b)
    }
}

/// Number of monomials of bidegree `d`.
pub fn form_dim(d: BiDegree) -> usize {
    if d.is_effective() {
        ((d.a + 1) * (d.b + 1)) as usize
    } else {
        0
    }
}

/// Exponent pairs (i, j) meaning s^i t^(a-i) u^j v^(b-j), in basis order.
pub fn monomial_basis(d: BiDegree) -> Vec<(i64, i64)> {
    if !d.is_effective() {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(form_dim(d));
    for i in (0..=d.a).rev() {
        for j in (0..=d.b).rev() {
            out.push((i, j));
        }
    }
    out
}

#[inline]
pub fn monomial_index(d: BiDegree, i: i64, j: i64) -> usize {
    debug_assert!(0 <= i && i <= d.a && 0 <= j && j <= d.b);
    ((d.a - i) * (d.b + 1) + (d.b - j)) as usize
}

/// Basis of S(Q)_d, realized as forms of bidegree (d,d).
pub fn sq_piece(d: i64) -> Vec<(i64, i64)> {
    monomial_basis(BiDegree::diag(d))
}

/// Renders s^i t^(a-i) u^j v^(b-j), or `1`.
pub fn monomial_string(d: BiDegree, i: i64, j: i64) -> String {
    let mut parts = Vec::new();
    for (var, e) in [("s", i), ("t", d.a - i), ("u", j), ("v", d.b - j)] {
        match e {
            0 => {}
            1 => parts.push(var.to_string()),
            _ => parts.push(format!("{var}^{e}")),
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiForm {
    field: Field,
    deg: BiDegree,
    coeffs: Vec<FieldElem>,
}

impl fmt::Debug for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiForm{}[{}]", self.deg, self)
    }
}

impl BiForm {
    pub fn zero(field: Field, deg: BiDegree) -> BiForm {
        BiForm {
            field,
            deg,
            coeffs: vec![field.zero(); form_dim(deg)],
        }
    }

    pub fn from_coeffs(field: Field, deg: BiDegree, coeffs: Vec<FieldElem>) -> BiForm {
        assert_eq!(coeffs.len(), form_dim(deg), "coefficient count does not match bidegree");
        BiForm { field, deg, coeffs }
    }

    pub fn constant(field: Field, c: FieldElem) -> BiForm {
        BiForm::from_coeffs(field, BiDegree::diag(0), vec![c])
    }

    pub fn one(field: Field) -> BiForm {
        BiForm::constant(field, field.one())
    }

    /// c · s^i t^(a-i) u^j v^(b-j).
    pub fn monomial(field: Field, deg: BiDegree, i: i64, j: i64, c: FieldElem) -> BiForm {
        let mut f = BiForm::zero(field, deg);
        f.coeffs[monomial_index(deg, i, j)] = c;
        f
    }

    pub fn s(field: Field) -> BiForm {
        BiForm::monomial(field, BiDegree::new(1, 0), 1, 0, field.one())
    }

    pub fn t(field: Field) -> BiForm {
        BiForm::monomial(field, BiDegree::new(1, 0), 0, 0, field.one())
    }

    pub fn u(field: Field) -> BiForm {
        BiForm::monomial(field, BiDegree::new(0, 1), 0, 1, field.one())
    }

    pub fn v(field: Field) -> BiForm {
        BiForm::monomial(field, BiDegree::new(0, 1), 0, 0, field.one())
    }

    /// The quadric coordinate x_k, k in 0..4: su, sv, tu, tv.
    pub fn x(field: Field, k: usize) -> BiForm {
        let d = BiDegree::diag(1);
        let (i, j) = monomial_basis(d)[k];
        BiForm::monomial(field, d, i, j, field.one())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> BiDegree {
        self.deg
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: i64, j: i64) -> FieldElem {
        if 0 <= i && i <= self.deg.a && 0 <= j && j <= self.deg.b {
            self.coeffs[monomial_index(self.deg, i, j)].clone()
        } else {
            self.field.zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Nonzero terms as (i, j, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (i64, i64, &FieldElem)> + '_ {
        let d = self.deg;
        monomial_basis(d)
            .into_iter()
            .zip(self.coeffs.iter())
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j), c)| (i, j, c))
    }

    /// The constant term when the bidegree is (0,0), else zero.
    pub fn constant_value(&self) -> FieldElem {
        if self.deg == BiDegree::diag(0) {
            self.coeffs[0].clone()
        } else {
            self.field.zero()
        }
    }

    /// Nonzero scalar in bidegree (0,0).
    pub fn is_unit(&self) -> bool {
        self.deg == BiDegree::diag(0) && !self.coeffs[0].is_zero()
    }

    pub fn add(&self, o: &BiForm) -> BiForm {
        assert_eq!(self.deg, o.deg, "adding forms of different bidegree");
        let coeffs = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        BiForm::from_coeffs(self.field, self.deg, coeffs)
    }

    pub fn sub(&self, o: &BiForm) -> BiForm {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BiForm {
        let coeffs = self.coeffs.iter().map(|a| -a).collect();
        BiForm::from_coeffs(self.field, self.deg, coeffs)
    }

    pub fn scale(&self, c: &FieldElem) -> BiForm {
        let coeffs = self.coeffs.iter().map(|a| a * c).collect();
        BiForm::from_coeffs(self.field, self.deg, coeffs)
    }

    pub fn mul(&self, o: &BiForm) -> BiForm {
        let deg = self.deg + o.deg;
        let mut out = BiForm::zero(self.field, deg);
        if !deg.is_effective() {
            return out;
        }
        for (i1, j1, c1) in self.terms() {
            for (i2, j2, c2) in o.terms() {
                let k = monomial_index(deg, i1 + i2, j1 + j2);
                out.coeffs[k] = &out.coeffs[k] + &(c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> BiForm {
        let mut r = BiForm::one(self.field);
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Value at a point (s, t, u, v).
    pub fn eval(&self, pt: &[FieldElem; 4]) -> FieldElem {
        let pw = |x: &FieldElem, e: i64| {
            let mut r = self.field.one();
            for _ in 0..e {
                r = &r * x;
            }
            r
        };
        let mut acc = self.field.zero();
        for (i, j, c) in self.terms() {
            let m = pw(&pt[0], i) * pw(&pt[1], self.deg.a - i) * pw(&pt[2], j) * pw(&pt[3], self.deg.b - j);
            acc = acc + c * &m;
        }
        acc
    }

    /// Parses the polynomial syntax, e.g. `3*s^2*u - t^2*v`.
    ///
    /// With `expected` given the result has that bidegree (so `0` is accepted
    /// for any bidegree); otherwise the bidegree is read off the terms.
    pub fn parse(field: Field, text: &str, expected: Option<BiDegree>) -> Result<BiForm> {
        let terms = parse_terms(field, text)?;
        let mut deg = expected;
        for (d, _, _, c) in &terms {
            if c.is_zero() {
                continue;
            }
            match deg {
                None => deg = Some(*d),
                Some(e) if e != *d => {
                    return Err(Error::Parse(format!(
                        "term of bidegree {d} in `{text}`, expected {e}"
                    )))
                }
                _ => {}
            }
        }
        let deg = deg.unwrap_or(BiDegree::diag(0));
        let mut f = BiForm::zero(field, deg);
        for (d, i, j, c) in terms {
            if c.is_zero() {
                continue;
            }
            if !d.is_effective() || d != deg {
                return Err(Error::Parse(format!("inconsistent term in `{text}`")));
            }
            let k = monomial_index(deg, i, j);
            f.coeffs[k] = &f.coeffs[k] + &c;
        }
        Ok(f)
    }
}

impl fmt::Display for BiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, j, c) in self.terms() {
            let mono = monomial_string(self.deg, i, j);
            let neg = c.is_negative_repr();
            let mag = if neg { -c } else { c.clone() };
            let body = match (mag.is_one(), mono.as_str()) {
                (_, "1") => mag.to_string(),
                (true, _) => mono,
                (false, _) => format!("{mag}*{mono}"),
            };
            match (first, neg) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Each term as (bidegree, i, j, coefficient).
fn parse_terms(field: Field, text: &str) -> Result<Vec<(BiDegree, i64, i64, FieldElem)>> {
    let err = |m: &str| Error::Parse(format!("{m} in polynomial `{text}`"));
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(err("empty expression"));
    }
    let mut chunks: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (k, ch) in compact.chars().enumerate() {
        if (ch == '+' || ch == '-') && !(cur.ends_with('^') || cur.ends_with('*')) {
            if k > 0 {
                if cur.is_empty() {
                    return Err(err("dangling sign"));
                }
                chunks.push((neg, std::mem::take(&mut cur)));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(err("dangling sign"));
    }
    chunks.push((neg, cur));

    let mut out = Vec::new();
    for (neg, chunk) in chunks {
        let mut coeff = if neg { -field.one() } else { field.one() };
        let mut exps = [0i64; 4];
        for factor in chunk.split('*') {
            if factor.is_empty() {
                return Err(err("empty factor"));
            }
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
                None => (factor, 1),
            };
            if exp < 0 {
                return Err(err("negative exponent"));
            }
            let slot = match base {
                "s" => Some(0),
                "t" => Some(1),
                "u" => Some(2),
                "v" => Some(3),
                _ => None,
            };
            match slot {
                Some(k) => exps[k] += exp,
                None => {
                    if factor.contains('^') {
                        return Err(err("exponent on a scalar"));
                    }
                    coeff = coeff * field.parse_elem(base)?;
                }
            }
        }
        let deg = BiDegree::new(exps[0] + exps[1], exps[2] + exps[3]);
        out.push((deg, exps[0], exps[2], coeff));
    }
    Ok(out)
}

/// Matrix of multiplication by `f` from bidegree `src` to `src + deg f`.
pub fn mult_matrix(f: &BiForm, src: BiDegree) -> Matrix {
    let field = f.field();
    let dst = src + f.degree();
    let rows = form_dim(dst);
    let cols = form_dim(src);
    let mut m = Matrix::zeros(field, rows, cols);
    if rows == 0 || cols == 0 {
        return m;
    }
    for (col, (i, j)) in monomial_basis(src).into_iter().enumerate() {
        for (fi, fj, c) in f.terms() {
            let r = monomial_index(dst, i + fi, j + fj);
            m[(r, col)] = &m[(r, col)] + c;
        }
    }
    m
}
