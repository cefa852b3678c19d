//! Square classes `F^x / (F^x)^2` over `Q` and `F_p`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::factor::{factor_biguint, odd_support, signed, squarefree_decompose};
use super::field::Field;
use super::fp::FpElement;
use super::rational::Rational;
use crate::error::{Error, Result};

/// Canonical representative of a square class.
///
/// Over `Q` this is a sign-carrying squarefree integer (1 is the trivial
/// class); over `F_p` it is the quadratic-residue bit.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SquareClass {
    Rational(BigInt),
    Residue(bool),
}

impl SquareClass {
    pub fn is_trivial(&self) -> bool {
        match self {
            SquareClass::Rational(d) => d.is_one(),
            SquareClass::Residue(qr) => *qr,
        }
    }

    /// Class of a product.
    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass> {
        match (self, other) {
            (SquareClass::Rational(a), SquareClass::Rational(b)) => {
                let g = a.gcd(b);
                Ok(SquareClass::Rational(a * b / (&g * &g)))
            }
            (SquareClass::Residue(a), SquareClass::Residue(b)) => Ok(SquareClass::Residue(a == b)),
            _ => Err(Error::InvalidInput("square classes from different fields".into())),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Rational(d) => write!(f, "{d}"),
            SquareClass::Residue(true) => f.write_str("QR"),
            SquareClass::Residue(false) => f.write_str("NQR"),
        }
    }
}

impl Serialize for SquareClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

pub fn is_squarefree_integer(n: &BigInt) -> bool {
    !n.is_zero() && factor_biguint(n.magnitude()).values().all(|&e| e == 1)
}

/// Squarefree `s` with `r = s * q^2`, `sign(s) = sign(r)`.
pub fn squarefree_part(r: &Rational) -> Result<SquareClass> {
    Ok(SquareClass::Rational(rational_sqrt_class(r)?.0))
}

/// Decomposes `r = d * s^2` with `d` squarefree and `s > 0`.
pub fn rational_sqrt_class(r: &Rational) -> Result<(BigInt, Rational)> {
    if r.is_zero() {
        return Err(Error::DegenerateColor);
    }
    let (a, big_a) = squarefree_decompose(r.numer().magnitude());
    let (b, big_b) = squarefree_decompose(r.denom().magnitude());
    let d = signed(r.is_negative(), &a * &b);
    let s = Rational::new(BigInt::from(big_a), BigInt::from(b * big_b));
    Ok((d, s))
}

/// Exact square root in `Q`, if it exists.
pub fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_zero() {
        return Some(Rational::zero());
    }
    if r.is_negative() {
        return None;
    }
    let n = r.numer().magnitude().sqrt();
    let d = r.denom().magnitude().sqrt();
    (&n * &n == *r.numer().magnitude() && &d * &d == *r.denom().magnitude())
        .then(|| Rational::new(BigInt::from(n), BigInt::from(d)))
}

/// Quadratic-residue class of a nonzero element of `F_p` (Euler's criterion).
pub fn fp_square_class(x: &FpElement) -> Result<SquareClass> {
    match x.legendre() {
        0 => Err(Error::DegenerateColor),
        1 => Ok(SquareClass::Residue(true)),
        _ => Ok(SquareClass::Residue(false)),
    }
}

/// Square root in `F_p` (Tonelli-Shanks), normalized into `[0, (p-1)/2]`.
pub fn fp_sqrt(x: &FpElement) -> Result<FpElement> {
    let p = x.modulus();
    if x.is_zero() {
        return Ok(*x);
    }
    if x.legendre() != 1 {
        return Err(Error::NotASquare);
    }
    let root = if p % 4 == 3 {
        x.pow((p + 1) / 4)
    } else {
        let s = (p - 1).trailing_zeros();
        let q = (p - 1) >> s;
        let z = (2..p)
            .map(|n| FpElement::from_u64(n, p))
            .find(|z| z.legendre() == -1)
            .expect("non-residue exists");
        let mut m = s;
        let mut c = z.pow(q);
        let mut t = x.pow(q);
        let mut r = x.pow((q + 1) / 2);
        while !t.is_one() {
            let mut i = 0;
            let mut t2 = t;
            while !t2.is_one() {
                t2 = t2.square();
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = b.square();
            }
            m = i;
            c = b.square();
            t = t.mul(&c);
            r = r.mul(&b);
        }
        r
    };
    Ok(if root.value() > (p - 1) / 2 { root.neg() } else { root })
}

/// The rational square classes that become trivial in a multiquadratic
/// extension `Q(sqrt d_1, ..., sqrt d_r)`.
///
/// Classes are `F_2`-vectors over the tokens {-1, primes}; the generators are
/// kept in reduced echelon form keyed by their largest token, which makes
/// [`ClassQuotient::reduce`] canonical.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClassQuotient {
    generators: Vec<BigInt>,
    basis: Vec<BTreeSet<BigInt>>,
}

fn tokens_of(n: &BigInt) -> BTreeSet<BigInt> {
    let mut t: BTreeSet<BigInt> = odd_support(n).into_iter().map(BigInt::from).collect();
    if n.is_negative() {
        t.insert(BigInt::from(-1));
    }
    t
}

fn xor(a: &mut BTreeSet<BigInt>, b: &BTreeSet<BigInt>) {
    for t in b {
        if !a.remove(t) {
            a.insert(t.clone());
        }
    }
}

impl ClassQuotient {
    /// Quotient by the classes of the given nonzero integers.
    pub fn new(generators: &[BigInt]) -> Result<Self> {
        let mut basis: Vec<BTreeSet<BigInt>> = Vec::new();
        for g in generators {
            if g.is_zero() {
                return Err(Error::InvalidInput("cannot adjoin sqrt(0)".into()));
            }
            let mut v = tokens_of(g);
            for b in &basis {
                let pivot = b.last().unwrap();
                if v.contains(pivot) {
                    xor(&mut v, b);
                }
            }
            if let Some(pivot) = v.last().cloned() {
                for b in basis.iter_mut() {
                    if b.contains(&pivot) {
                        xor(b, &v);
                    }
                }
                basis.push(v);
            }
        }
        Ok(ClassQuotient { generators: generators.to_vec(), basis })
    }

    pub fn trivial() -> Self {
        ClassQuotient::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn generators(&self) -> &[BigInt] {
        &self.generators
    }

    /// Dimension of the absorbed subgroup over `F_2`.
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Canonical representative of the class of the squarefree integer `s`
    /// modulo the absorbed subgroup.
    pub fn reduce(&self, s: &BigInt) -> BigInt {
        if self.basis.is_empty() {
            return s.clone();
        }
        self.reduce_tokens(tokens_of(s))
    }

    pub(crate) fn reduce_tokens(&self, mut v: BTreeSet<BigInt>) -> BigInt {
        for b in &self.basis {
            if v.contains(b.last().unwrap()) {
                xor(&mut v, b);
            }
        }
        v.iter().fold(BigInt::one(), |acc, t| acc * t)
    }

    /// True when the squarefree `s` becomes a square in the extension.
    pub fn absorbs(&self, s: &BigInt) -> bool {
        self.reduce(s).is_one()
    }
}

/// Square test in `Q(sqrt d)`: returns `w` with `w^2 = z` if one exists.
pub fn quad_sqrt(z: &super::quad::QuadExtElement) -> Option<super::quad::QuadExtElement> {
    use super::quad::QuadExtElement;
    let d = z.radicand().clone();
    let (a, b) = (z.rational_part(), z.irrational_part());
    if b.is_zero() {
        if let Some(r) = rational_sqrt(a) {
            return Some(QuadExtElement::embed(&r, &d));
        }
        // a = d y^2
        let y = rational_sqrt(&(a / &Rational::from(d.clone())))?;
        return QuadExtElement::new(Rational::zero(), y, d).ok();
    }
    let n = rational_sqrt(&z.norm())?;
    let two = Rational::from(2);
    for cand in [(a + &n) / &two, (a - &n) / &two] {
        if let Some(x) = rational_sqrt(&cand) {
            if x.is_zero() {
                continue;
            }
            let y = b / &(&two * &x);
            let w = QuadExtElement::new(x, y, d.clone()).ok()?;
            if w.square() == *z {
                return Some(w);
            }
        }
    }
    None
}
