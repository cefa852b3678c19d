use std::fmt;

use serde::{Serialize, Serializer};

use super::factor::{is_prime_u64, mul_mod, pow_mod};
use super::field::Field;
use super::rational::Rational;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;

/// Element of the prime field `F_p`, `p` an odd prime below `2^63`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpElement {
    value: u64,
    p: u64,
}

/// Checks that `p` is usable as a modulus.
pub fn check_modulus(p: u64) -> Result<()> {
    if p > 2 && p < (1 << 63) && is_prime_u64(p) {
        Ok(())
    } else {
        Err(Error::InvalidModulus(p))
    }
}

impl FpElement {
    /// Reduces `n` modulo `p`. The modulus is assumed valid; see [`check_modulus`].
    pub fn new(n: i64, p: u64) -> Self {
        let v = n.rem_euclid(p as i64) as u64;
        FpElement { value: v, p }
    }

    pub fn from_u64(n: u64, p: u64) -> Self {
        FpElement { value: n % p, p }
    }

    pub fn from_bigint(n: &BigInt, p: u64) -> Self {
        let r = n % BigInt::from(p);
        let r = r.to_i64().expect("residue fits");
        FpElement::new(r, p)
    }

    /// Reduction of a rational with denominator prime to `p`.
    pub fn from_rational(r: &Rational, p: u64) -> Option<Self> {
        let den = FpElement::from_bigint(r.denom(), p);
        let inv = den.inv()?;
        Some(FpElement::from_bigint(r.numer(), p).mul(&inv))
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn pow(&self, e: u64) -> Self {
        FpElement { value: pow_mod(self.value, e, self.p), p: self.p }
    }

    /// Legendre symbol: 0, 1, or -1.
    pub fn legendre(&self) -> i8 {
        if self.value == 0 {
            return 0;
        }
        if self.pow((self.p - 1) / 2).value == 1 {
            1
        } else {
            -1
        }
    }
}

/// Serialized as the decimal string of its canonical residue.
impl Serialize for FpElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(&self.value)
    }
}

impl fmt::Display for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Debug for FpElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

impl Field for FpElement {
    fn zero_like(&self) -> Self {
        FpElement { value: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        FpElement { value: 1, p: self.p }
    }
    fn from_int_like(&self, n: i64) -> Self {
        FpElement::new(n, self.p)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    #[inline]
    fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let s = self.value + o.value;
        FpElement { value: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
    #[inline]
    fn sub(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        let v = if self.value >= o.value {
            self.value - o.value
        } else {
            self.value + self.p - o.value
        };
        FpElement { value: v, p: self.p }
    }
    #[inline]
    fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.p, o.p);
        FpElement { value: mul_mod(self.value, o.value, self.p), p: self.p }
    }
    fn neg(&self) -> Self {
        FpElement { value: if self.value == 0 { 0 } else { self.p - self.value }, p: self.p }
    }
    fn inv(&self) -> Option<Self> {
        if self.value == 0 {
            return None;
        }
        // extended Euclid on i128 to stay exact near 2^63
        let (mut r0, mut r1) = (self.p as i128, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        let v = t0.rem_euclid(self.p as i128) as u64;
        Some(FpElement { value: v, p: self.p })
    }
}

macro_rules! fp_binop {
    ($tr:ident, $m:ident) => {
        impl std::ops::$tr for FpElement {
            type Output = FpElement;
            fn $m(self, rhs: FpElement) -> FpElement {
                Field::$m(&self, &rhs)
            }
        }
    };
}

fp_binop!(Add, add);
fp_binop!(Sub, sub);
fp_binop!(Mul, mul);

impl std::ops::Neg for FpElement {
    type Output = FpElement;
    fn neg(self) -> FpElement {
        Field::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_and_reduction() {
        let p = 1_000_003;
        for n in [1i64, 2, 17, -5, 999_999] {
            let x = FpElement::new(n, p);
            assert!(x.mul(&x.inv().unwrap()).is_one());
        }
        let r = Rational::new(-4, 1);
        assert_eq!(FpElement::from_rational(&r, 7).unwrap().value(), 3);
        assert!(FpElement::from_rational(&Rational::new(1, 7), 7).is_none());
    }

    #[test]
    fn modulus_checks() {
        assert!(check_modulus(7).is_ok());
        assert!(check_modulus(2).is_err());
        assert!(check_modulus(9).is_err());
    }
}
