use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::field::Field;
use super::rational::Rational;
use super::square_class::is_squarefree_integer;
use crate::error::{Error, Result};

/// Element `a + b*sqrt(d)` of the quadratic field `Q(sqrt d)`.
///
/// `d` is a squarefree integer other than 0 and 1. Binary operations require
/// both operands to live in the same field and panic otherwise.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadExtElement {
    a: Rational,
    b: Rational,
    d: BigInt,
}

impl QuadExtElement {
    pub fn new(a: Rational, b: Rational, d: BigInt) -> Result<Self> {
        if d.is_zero() || d.is_one() || !is_squarefree_integer(&d) {
            return Err(Error::InvalidInput(format!("radicand {d} must be squarefree and not 0 or 1")));
        }
        Ok(QuadExtElement { a, b, d })
    }

    /// Embeds a rational into `Q(sqrt d)`.
    pub fn embed(a: &Rational, d: &BigInt) -> Self {
        QuadExtElement { a: a.clone(), b: Rational::zero(), d: d.clone() }
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn irrational_part(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn conjugate(&self) -> Self {
        QuadExtElement { a: self.a.clone(), b: -&self.b, d: self.d.clone() }
    }

    /// `z * conj(z) = a^2 - d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - Rational::from(self.d.clone()) * &self.b * &self.b
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(self.d, other.d, "mixed quadratic fields");
    }
}

impl fmt::Display for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}\u{221a}{}", self.a, sign, self.b.abs(), self.d)
    }
}

impl fmt::Debug for QuadExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadExtElement {
    type Err = Error;

    /// Parses `a+b√d` (also `a-b√d`, or `sqrt(d)` in place of `√d`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().replace('\u{2212}', "-").replace("sqrt(", "\u{221a}").replace(')', "");
        let bad = || Error::Parse(format!("expected a+b\u{221a}d, got {s:?}"));
        let (coeffs, d) = s.split_once('\u{221a}').ok_or_else(bad)?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        let coeffs = coeffs.trim().trim_end_matches('*');
        // split at the last sign that is not the leading one
        let idx = coeffs
            .char_indices()
            .skip(1)
            .filter(|&(i, c)| (c == '+' || c == '-') && !coeffs[..i].ends_with('/'))
            .map(|(i, _)| i)
            .last();
        let coeff = |t: &str| -> Result<Rational> {
            match t.trim_start_matches('+') {
                "" => Ok(Rational::one()),
                "-" => Ok(-Rational::one()),
                t => t.parse(),
            }
        };
        let (a, b) = match idx {
            Some(i) => (coeffs[..i].parse()?, coeff(&coeffs[i..])?),
            None => (Rational::zero(), coeff(coeffs)?),
        };
        QuadExtElement::new(a, b, d)
    }
}

impl Field for QuadExtElement {
    fn zero_like(&self) -> Self {
        QuadExtElement::embed(&Rational::zero(), &self.d)
    }
    fn one_like(&self) -> Self {
        QuadExtElement::embed(&Rational::one(), &self.d)
    }
    fn from_int_like(&self, n: i64) -> Self {
        QuadExtElement::embed(&Rational::from(n), &self.d)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        self.same_field(o);
        QuadExtElement { a: &self.a + &o.a, b: &self.b + &o.b, d: self.d.clone() }
    }
    fn sub(&self, o: &Self) -> Self {
        self.same_field(o);
        QuadExtElement { a: &self.a - &o.a, b: &self.b - &o.b, d: self.d.clone() }
    }
    fn mul(&self, o: &Self) -> Self {
        self.same_field(o);
        let d = Rational::from(self.d.clone());
        QuadExtElement {
            a: &self.a * &o.a + d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d.clone(),
        }
    }
    fn neg(&self) -> Self {
        QuadExtElement { a: -&self.a, b: -&self.b, d: self.d.clone() }
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm().inv()?;
        let c = self.conjugate();
        Some(QuadExtElement { a: &c.a * &n, b: &c.b * &n, d: self.d.clone() })
    }
}
