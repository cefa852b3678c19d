use num_bigint::BigInt;

use super::split::{Point, SplitCurve};
use crate::arith::{QuadExtElement, Rational};
use crate::error::{Error, Result};

/// The curve over `Q(sqrt d)`.
pub fn lift_curve(curve: &SplitCurve<Rational>, d: &BigInt) -> SplitCurve<QuadExtElement> {
    let [a, b, c] = curve.roots().clone().map(|e| QuadExtElement::embed(&e, d));
    SplitCurve::new(a, b, c).expect("distinct roots stay distinct")
}

pub fn lift_point(p: &Point<Rational>, d: &BigInt) -> Point<QuadExtElement> {
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => Point::Affine(QuadExtElement::embed(x, d), QuadExtElement::embed(y, d)),
    }
}

/// Applies `sqrt d -> -sqrt d` coordinatewise.
pub fn conjugate_point(p: &Point<QuadExtElement>) -> Point<QuadExtElement> {
    match p {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => Point::Affine(x.conjugate(), y.conjugate()),
    }
}

/// Rational coordinates of a point fixed by conjugation.
pub fn descend(p: &Point<QuadExtElement>) -> Option<Point<Rational>> {
    match p {
        Point::Infinity => Some(Point::Infinity),
        Point::Affine(x, y) => Some(Point::Affine(x.to_rational()?, y.to_rational()?)),
    }
}

/// `P + conj(P)`, which must have rational coordinates.
pub fn trace_point(curve: &SplitCurve<Rational>, p: &Point<QuadExtElement>) -> Result<Point<Rational>> {
    let d = match p {
        Point::Infinity => return Ok(Point::Infinity),
        Point::Affine(x, _) => x.radicand().clone(),
    };
    let lifted = lift_curve(curve, &d);
    lifted.ensure_on(p)?;
    let sum = lifted.add_unchecked(p, &conjugate_point(p));
    let out = descend(&sum).ok_or_else(|| Error::Internal(format!("trace {sum} is not rational")))?;
    if !curve.contains(&out) {
        return Err(Error::Internal("trace left the curve".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational_sqrt_class;

    fn congruent5() -> SplitCurve<Rational> {
        SplitCurve::new(0.into(), 5.into(), (-5).into()).unwrap()
    }

    /// A point `(x, s sqrt d)` from the quadratic twist by `d`.
    fn twist_point(c: &SplitCurve<Rational>, x: Rational) -> Point<QuadExtElement> {
        let (d, s) = rational_sqrt_class(&c.rhs(&x)).unwrap();
        let qx = QuadExtElement::embed(&x, &d);
        let qy = QuadExtElement::new(Rational::zero(), s, d).unwrap();
        Point::Affine(qx, qy)
    }

    #[test]
    fn rational_point_traces_to_its_double() {
        let c = congruent5();
        let p = Point::Affine((-4).into(), 6.into());
        let lifted = lift_point(&p, &BigInt::from(2));
        assert_eq!(conjugate_point(&lifted), lifted);
        assert_eq!(trace_point(&c, &lifted).unwrap(), c.double(&p));
    }

    #[test]
    fn twist_points_trace_to_infinity() {
        let c = congruent5();
        let t = twist_point(&c, 7.into());
        let conj = conjugate_point(&t);
        assert_eq!(conj, lift_curve(&c, t.x().unwrap().radicand()).neg(&t));
        assert_eq!(conjugate_point(&conj), t);
        assert_eq!(trace_point(&c, &t).unwrap(), Point::Infinity);
    }

    #[test]
    fn mixed_point_traces_to_rational_double() {
        // R + T with R rational and T a twist point has both coordinates
        // irrational; its trace is 2R.
        let c = congruent5();
        let r = Point::Affine((-4).into(), 6.into());
        let t = twist_point(&c, 7.into());
        let d = t.x().unwrap().radicand().clone();
        let lc = lift_curve(&c, &d);
        let sum = lc.add_unchecked(&lift_point(&r, &d), &t);
        let (x, y) = (sum.x().unwrap(), sum.y().unwrap());
        assert!(!x.is_rational() && !y.is_rational());
        let tr = trace_point(&c, &sum).unwrap();
        assert_eq!(tr, c.double(&r));
        assert_eq!(descend(&lc.add_unchecked(&sum, &conjugate_point(&sum))).unwrap(), tr);
    }

    #[test]
    fn off_curve_point_rejected() {
        let c = congruent5();
        let d = BigInt::from(3);
        let bogus = Point::Affine(QuadExtElement::embed(&1.into(), &d), QuadExtElement::embed(&1.into(), &d));
        assert_eq!(trace_point(&c, &bogus), Err(Error::NotOnCurve));
    }
}
