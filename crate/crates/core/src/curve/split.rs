use std::fmt;

use serde::{Serialize, Serializer};

use crate::arith::{Field, FpElement, Rational};
use crate::error::{Error, Result};

/// A point in affine coordinates or the point at infinity.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Point<F> {
    Infinity,
    Affine(F, F),
}

impl<F: Field> Point<F> {
    pub fn is_infinity(&self) -> bool {
        matches!(self, Point::Infinity)
    }

    pub fn x(&self) -> Option<&F> {
        match self {
            Point::Affine(x, _) => Some(x),
            Point::Infinity => None,
        }
    }

    pub fn y(&self) -> Option<&F> {
        match self {
            Point::Affine(_, y) => Some(y),
            Point::Infinity => None,
        }
    }
}

impl<F: fmt::Display> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Infinity => f.write_str("Infinity"),
            Point::Affine(x, y) => write!(f, "({x}, {y})"),
        }
    }
}

/// `{"x": "...", "y": "..."}` for affine points, `"Infinity"` otherwise.
impl<F: fmt::Display> Serialize for Point<F> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        match self {
            Point::Infinity => s.serialize_str("Infinity"),
            Point::Affine(x, y) => {
                let mut m = s.serialize_map(Some(2))?;
                m.serialize_entry("x", &x.to_string())?;
                m.serialize_entry("y", &y.to_string())?;
                m.end()
            }
        }
    }
}

/// Split Weierstrass curve `y^2 = (x - e1)(x - e2)(x - e3)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SplitCurve<F> {
    e: [F; 3],
    a2: F,
    a4: F,
}

impl<F: Field> SplitCurve<F> {
    pub fn new(e1: F, e2: F, e3: F) -> Result<Self> {
        if e1 == e2 || e1 == e3 || e2 == e3 {
            return Err(Error::SingularCurve);
        }
        let a2 = e1.add(&e2).add(&e3).neg();
        let a4 = e1.mul(&e2).add(&e1.mul(&e3)).add(&e2.mul(&e3));
        Ok(SplitCurve { e: [e1, e2, e3], a2, a4 })
    }

    pub fn roots(&self) -> &[F; 3] {
        &self.e
    }

    /// Right-hand side `(x - e1)(x - e2)(x - e3)`.
    pub fn rhs(&self, x: &F) -> F {
        self.e.iter().fold(x.one_like(), |acc, e| acc.mul(&x.sub(e)))
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Infinity => true,
            Point::Affine(x, y) => y.square() == self.rhs(x),
        }
    }

    pub fn ensure_on(&self, p: &Point<F>) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::NotOnCurve)
        }
    }

    /// The four points of `E[2]`.
    pub fn two_torsion(&self) -> Vec<Point<F>> {
        let mut out = vec![Point::Infinity];
        out.extend(self.e.iter().map(|e| Point::Affine(e.clone(), e.zero_like())));
        out
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => Point::Affine(x.clone(), y.neg()),
        }
    }

    /// Chord-and-tangent sum, checking that both inputs lie on the curve.
    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Result<Point<F>> {
        self.ensure_on(p)?;
        self.ensure_on(q)?;
        Ok(self.add_unchecked(p, q))
    }

    /// Group law without membership checks; inputs must be on the curve.
    pub fn add_unchecked(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        let (x1, y1, x2, y2) = match (p, q) {
            (Point::Infinity, _) => return q.clone(),
            (_, Point::Infinity) => return p.clone(),
            (Point::Affine(x1, y1), Point::Affine(x2, y2)) => (x1, y1, x2, y2),
        };
        let lambda = if x1 == x2 {
            if y1.add(y2).is_zero() {
                return Point::Infinity;
            }
            // tangent: (3x^2 + 2 a2 x + a4) / 2y
            let three = x1.from_int_like(3);
            let two = x1.from_int_like(2);
            let num = three.mul(&x1.square()).add(&two.mul(&self.a2).mul(x1)).add(&self.a4);
            num.div(&two.mul(y1)).expect("y != 0 on the tangent branch")
        } else {
            y2.sub(y1).div(&x2.sub(x1)).expect("distinct x")
        };
        let x3 = lambda.square().sub(&self.a2).sub(x1).sub(x2);
        let y3 = lambda.mul(&x1.sub(&x3)).sub(y1);
        Point::Affine(x3, y3)
    }

    pub fn double(&self, p: &Point<F>) -> Point<F> {
        self.add_unchecked(p, p)
    }

    /// `n * P` by double-and-add; negative `n` negates.
    pub fn scalar_mul(&self, n: i64, p: &Point<F>) -> Result<Point<F>> {
        self.ensure_on(p)?;
        Ok(self.scalar_mul_unchecked(n, p))
    }

    pub fn scalar_mul_unchecked(&self, n: i64, p: &Point<F>) -> Point<F> {
        let mut k = n.unsigned_abs();
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut acc = Point::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    /// Discriminant of the cubic, `prod_{i<j} (e_i - e_j)^2`.
    pub fn discriminant(&self) -> F {
        let [e1, e2, e3] = &self.e;
        e1.sub(e2).mul(&e1.sub(e3)).mul(&e2.sub(e3)).square()
    }
}

impl SplitCurve<Rational> {
    /// Reduction modulo an odd prime; bad when `p` divides a denominator or
    /// two roots collide.
    pub fn reduce_mod(&self, p: u64) -> Result<SplitCurve<FpElement>> {
        crate::arith::check_modulus(p)?;
        let mut r = Vec::with_capacity(3);
        for e in &self.e {
            r.push(FpElement::from_rational(e, p).ok_or(Error::BadReduction(p))?);
        }
        SplitCurve::new(r[0], r[1], r[2]).map_err(|_| Error::BadReduction(p))
    }
}

impl SplitCurve<FpElement> {
    pub fn modulus(&self) -> u64 {
        self.e[0].modulus()
    }

    /// `|E(F_p)| = p + 1 + sum_x chi(rhs(x))`, by a full character sum.
    pub fn count_points(&self) -> u64 {
        let p = self.modulus();
        let qr = residue_table(p);
        let mut n = 1u64;
        for x in 0..p {
            let r = self.rhs(&FpElement::from_u64(x, p)).value();
            n += match r {
                0 => 1,
                r if qr[r as usize] => 2,
                _ => 0,
            };
        }
        n
    }

    /// Every point of `E(F_p)`, infinity first, then by `x` and `y`.
    pub fn points(&self) -> Vec<Point<FpElement>> {
        let p = self.modulus();
        let roots = sqrt_table(p);
        let mut out = vec![Point::Infinity];
        for x in 0..p {
            let xe = FpElement::from_u64(x, p);
            let r = self.rhs(&xe).value();
            if r == 0 {
                out.push(Point::Affine(xe, FpElement::from_u64(0, p)));
            } else if let Some(y) = roots[r as usize] {
                let y = FpElement::from_u64(y, p);
                out.push(Point::Affine(xe, y));
                out.push(Point::Affine(xe, y.neg()));
            }
        }
        out
    }
}

/// `table[a]` is true when `a` is a nonzero square mod `p`.
pub fn residue_table(p: u64) -> Vec<bool> {
    let mut t = vec![false; p as usize];
    for y in 1..=(p / 2) {
        t[((y as u128 * y as u128) % p as u128) as usize] = true;
    }
    t
}

/// `table[a]` is the canonical (smaller) square root of `a` mod `p`, if any.
pub fn sqrt_table(p: u64) -> Vec<Option<u64>> {
    let mut t = vec![None; p as usize];
    for y in 0..=(p / 2) {
        let s = ((y as u128 * y as u128) % p as u128) as usize;
        if t[s].is_none() {
            t[s] = Some(y);
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    fn congruent5() -> SplitCurve<Rational> {
        SplitCurve::new(0.into(), 5.into(), (-5).into()).unwrap()
    }

    fn pt(x: Rational, y: Rational) -> Point<Rational> {
        Point::Affine(x, y)
    }

    #[test]
    fn identity_and_two_torsion() {
        let c = congruent5();
        let t = pt(0.into(), 0.into());
        assert_eq!(c.add(&t, &Point::Infinity).unwrap(), t);
        assert_eq!(c.add(&t, &t).unwrap(), Point::Infinity);
        assert_eq!(c.scalar_mul(2, &t).unwrap(), Point::Infinity);
    }

    #[test]
    fn doubling_the_base_point() {
        let c = congruent5();
        let p = pt((-4).into(), 6.into());
        let two_p = c.add(&p, &p).unwrap();
        assert_eq!(two_p, pt(Rational::new(1681, 144), Rational::new(-62279, 1728)));
        assert!(c.contains(&two_p));
    }

    #[test]
    fn scalar_mul_matches_repeated_addition() {
        let c = congruent5();
        let p = pt((-4).into(), 6.into());
        let mut acc = Point::Infinity;
        for n in 0..=8 {
            assert_eq!(c.scalar_mul(n, &p).unwrap(), acc);
            assert_eq!(c.scalar_mul(-n, &p).unwrap(), c.neg(&acc));
            acc = c.add(&acc, &p).unwrap();
        }
        assert_eq!(c.scalar_mul(1, &p).unwrap(), p);
    }

    #[test]
    fn off_curve_rejected() {
        let c = congruent5();
        let bad = pt(1.into(), 1.into());
        assert_eq!(c.add(&bad, &Point::Infinity), Err(Error::NotOnCurve));
        assert_eq!(c.scalar_mul(3, &bad), Err(Error::NotOnCurve));
    }

    #[test]
    fn singular_roots_rejected() {
        assert_eq!(SplitCurve::new(Rational::from(1), 1.into(), 2.into()), Err(Error::SingularCurve));
    }

    #[test]
    fn count_y2_x3_minus_x_over_f7() {
        let c = SplitCurve::new(FpElement::new(0, 7), FpElement::new(1, 7), FpElement::new(-1, 7)).unwrap();
        assert_eq!(c.count_points(), 8);
        assert_eq!(c.points().len(), 8);
    }

    #[test]
    fn hasse_and_lagrange_for_small_primes() {
        let c = congruent5();
        for p in crate::arith::factor::primes_in(7, 3000) {
            let cp = c.reduce_mod(p).unwrap();
            let n = cp.count_points() as i64;
            let t = n - p as i64 - 1;
            assert!((t * t) as u64 <= 4 * p, "Hasse fails at {p}");
            assert_eq!(n % 4, 0);
        }
        assert_eq!(c.reduce_mod(5), Err(Error::BadReduction(5)));
    }
}
