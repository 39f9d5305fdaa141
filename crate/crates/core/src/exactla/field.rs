//! Exact scalars: a prime field `F_p` or the rationals.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// Default characteristic. Large enough that the small integer coefficients
/// of hand-written examples never vanish by accident.
pub const DEFAULT_PRIME: u32 = 32003;

/// The base field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Prime(u32),
    Rationals,
}

impl Default for Field {
    fn default() -> Self {
        Field::Prime(DEFAULT_PRIME)
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Field> {
        if p >= (1 << 31) || !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not a supported prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> FieldElem {
        self.from_i64(0)
    }

    pub fn one(self) -> FieldElem {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> FieldElem {
        match self {
            Field::Prime(p) => FieldElem::Fp {
                v: n.rem_euclid(p as i64) as u32,
                p,
            },
            Field::Rationals => FieldElem::Q(BigRational::from_integer(BigInt::from(n))),
        }
    }

    /// Uniform element of `F_p`, or a small integer in `[-9, 9]` over ℚ.
    pub fn random<R: Rng + ?Sized>(self, rng: &mut R) -> FieldElem {
        match self {
            Field::Prime(p) => FieldElem::Fp {
                v: rng.gen_range(0..p),
                p,
            },
            Field::Rationals => self.from_i64(rng.gen_range(-9..=9)),
        }
    }

    /// Random nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(self, rng: &mut R) -> FieldElem {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Parses a scalar literal: an integer, or `a/b`.
    pub fn parse_elem(self, s: &str) -> Result<FieldElem> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad scalar `{s}`"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.trim(), Some(b.trim())),
            None => (s, None),
        };
        let num = BigInt::from_str(num).map_err(|_| bad())?;
        let den = match den {
            Some(d) => BigInt::from_str(d).map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        match self {
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| {
                    let r = ((x % &pb) + &pb) % &pb;
                    r.to_u32().expect("reduced residue fits")
                };
                let n = FieldElem::Fp { v: reduce(&num), p };
                let d = FieldElem::Fp { v: reduce(&den), p };
                if d.is_zero() {
                    return Err(Error::Parse(format!("denominator of `{s}` vanishes mod {p}")));
                }
                Ok(&n / &d)
            }
            Field::Rationals => Ok(FieldElem::Q(BigRational::new(num, den))),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Prime(p) => write!(f, "p={p}"),
            Field::Rationals => write!(f, "rationals"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s == "rationals" || s == "Q" {
            return Ok(Field::Rationals);
        }
        let p = s.strip_prefix("p=").unwrap_or(s);
        let p: u32 = p
            .parse()
            .map_err(|_| Error::Parse(format!("bad field `{s}`")))?;
        Field::prime(p)
    }
}

/// An element of the session field. Operations on elements of different
/// fields panic.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElem {
    Fp { v: u32, p: u32 },
    Q(BigRational),
}

#[inline]
fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

impl FieldElem {
    pub fn field(&self) -> Field {
        match self {
            FieldElem::Fp { p, .. } => Field::Prime(*p),
            FieldElem::Q(_) => Field::Rationals,
        }
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        match self {
            FieldElem::Fp { v, .. } => *v == 0,
            FieldElem::Q(q) => q.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElem::Fp { v, .. } => *v == 1,
            FieldElem::Q(q) => q.is_one(),
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn inv(&self) -> FieldElem {
        assert!(!self.is_zero(), "inverse of zero");
        match self {
            FieldElem::Fp { v, p } => FieldElem::Fp {
                v: pow_mod(*v as u64, *p as u64 - 2, *p as u64) as u32,
                p: *p,
            },
            FieldElem::Q(q) => FieldElem::Q(q.recip()),
        }
    }

    /// Signed integer view used for printing: residues above `p/2` print
    /// as negatives.
    fn fmt_scalar(&self) -> String {
        match self {
            FieldElem::Fp { v, p } => {
                if *v > p / 2 {
                    format!("-{}", p - v)
                } else {
                    v.to_string()
                }
            }
            FieldElem::Q(q) => {
                if q.is_integer() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
        }
    }

    /// True when the printed form starts with a minus sign.
    pub fn is_negative_repr(&self) -> bool {
        match self {
            FieldElem::Fp { v, p } => *v > p / 2,
            FieldElem::Q(q) => q.is_negative(),
        }
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.fmt_scalar())
    }
}

#[inline]
fn same(p: u32, q: u32) {
    assert_eq!(p, q, "mixing elements of different prime fields");
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    #[inline]
    fn add(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: q }) => {
                same(*p, *q);
                let s = *a as u64 + *b as u64;
                FieldElem::Fp {
                    v: (s % *p as u64) as u32,
                    p: *p,
                }
            }
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a + b),
            _ => panic!("mixing prime-field and rational elements"),
        }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    #[inline]
    fn sub(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: q }) => {
                same(*p, *q);
                let s = *a as u64 + *p as u64 - *b as u64;
                FieldElem::Fp {
                    v: (s % *p as u64) as u32,
                    p: *p,
                }
            }
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a - b),
            _ => panic!("mixing prime-field and rational elements"),
        }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    #[inline]
    fn mul(self, rhs: &FieldElem) -> FieldElem {
        match (self, rhs) {
            (FieldElem::Fp { v: a, p }, FieldElem::Fp { v: b, p: q }) => {
                same(*p, *q);
                FieldElem::Fp {
                    v: ((*a as u64 * *b as u64) % *p as u64) as u32,
                    p: *p,
                }
            }
            (FieldElem::Q(a), FieldElem::Q(b)) => FieldElem::Q(a * b),
            _ => panic!("mixing prime-field and rational elements"),
        }
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &FieldElem) -> FieldElem {
        self * &rhs.inv()
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    #[inline]
    fn neg(self) -> FieldElem {
        match self {
            FieldElem::Fp { v, p } => FieldElem::Fp {
                v: if *v == 0 { 0 } else { p - v },
                p: *p,
            },
            FieldElem::Q(q) => FieldElem::Q(-q),
        }
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            #[inline]
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            #[inline]
            fn $m(self, rhs: &'a FieldElem) -> FieldElem {
                (&self).$m(rhs)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse_and_negation() {
        let f = Field::Prime(5);
        let two = f.from_i64(2);
        assert_eq!(two.inv(), f.from_i64(3));
        assert!((&two + &(-&two)).is_zero());
        for a in 1..5 {
            let x = f.from_i64(a);
            assert!((&x * &x.inv()).is_one());
        }
    }

    #[test]
    fn rational_parse_and_arith() {
        let q = Field::Rationals;
        let a = q.parse_elem("3/2").unwrap();
        let b = q.parse_elem("-1/2").unwrap();
        assert_eq!(&a + &b, q.from_i64(1));
        assert_eq!((&a * &a.inv()), q.one());
        assert_eq!(a.to_string(), "3/2");
    }

    #[test]
    fn field_parse_and_print() {
        assert_eq!("p=32003".parse::<Field>().unwrap(), Field::Prime(32003));
        assert_eq!("rationals".parse::<Field>().unwrap(), Field::Rationals);
        assert!("p=32004".parse::<Field>().is_err());
        assert_eq!(Field::Prime(7).from_i64(-1).to_string(), "-1");
        assert_eq!(Field::Prime(7).parse_elem("1/2").unwrap(), Field::Prime(7).from_i64(4));
    }

    #[test]
    #[should_panic]
    fn mixing_fields_panics() {
        let _ = Field::Prime(5).one() + Field::Prime(7).one();
    }
}
