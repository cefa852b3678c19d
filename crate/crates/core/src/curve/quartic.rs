use serde::Serialize;

use super::split::{Point, SplitCurve};
use crate::arith::Field;
use crate::error::{Error, Result};

/// How a quartic model was obtained from a split curve and a base point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Provenance<F> {
    pub curve: SplitCurve<F>,
    pub x0: F,
    pub y0: F,
}

/// Quartic model `v^2 = (u + c0)(u + c1)(u + c2)(u + c3)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuarticCurve<F> {
    c: [F; 4],
    provenance: Option<Provenance<F>>,
}

/// Affine point `(u, v)` with `v^2 = f(u)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct QuarticPoint<F> {
    pub u: F,
    pub v: F,
}

impl<F: Field> QuarticCurve<F> {
    /// A bare quartic with pairwise distinct constants and no Weierstrass link.
    pub fn new(c: [F; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in i + 1..4 {
                if c[i] == c[j] {
                    return Err(Error::SingularCurve);
                }
            }
        }
        Ok(QuarticCurve { c, provenance: None })
    }

    pub fn constants(&self) -> &[F; 4] {
        &self.c
    }

    pub fn provenance(&self) -> Option<&Provenance<F>> {
        self.provenance.as_ref()
    }

    /// `f(u) = prod (u + c_i)`.
    pub fn f(&self, u: &F) -> F {
        self.c.iter().fold(u.one_like(), |acc, c| acc.mul(&u.add(c)))
    }

    pub fn contains(&self, p: &QuarticPoint<F>) -> bool {
        p.v.square() == self.f(&p.u)
    }

    fn link(&self) -> Result<&Provenance<F>> {
        self.provenance.as_ref().ok_or(Error::MissingProvenance)
    }

    /// `u = -1/x'`, `v = y / (y0 x'^2)` with `x' = x - x0`.
    ///
    /// The point at infinity goes to `(0, 0)`; the pair `+-P0` (where
    /// `x' = 0`) goes to the points at infinity of the quartic and is rejected.
    pub fn from_weierstrass(&self, p: &Point<F>) -> Result<QuarticPoint<F>> {
        let link = self.link()?;
        link.curve.ensure_on(p)?;
        let (x, y) = match p {
            Point::Infinity => {
                let z = link.x0.zero_like();
                return Ok(QuarticPoint { u: z.clone(), v: z });
            }
            Point::Affine(x, y) => (x, y),
        };
        let xt = x.sub(&link.x0);
        let inv = xt.inv().ok_or(Error::MapsToInfinity)?;
        let u = inv.neg();
        let v = y.mul(&inv.square()).div(&link.y0).expect("y0 != 0");
        Ok(QuarticPoint { u, v })
    }

    /// Inverse of [`QuarticCurve::from_weierstrass`]: `x = x0 - 1/u`,
    /// `y = v y0 x'^2`.
    pub fn to_weierstrass(&self, q: &QuarticPoint<F>) -> Result<Point<F>> {
        let link = self.link()?;
        if !self.contains(q) {
            return Err(Error::NotOnCurve);
        }
        if q.u.is_zero() {
            // f(0) = 0 forces v = 0; (0, 0) is the image of the identity
            return if q.v.is_zero() { Ok(Point::Infinity) } else { Err(Error::MapsToBasePointPair) };
        }
        let xt = q.u.inv().expect("u != 0").neg();
        let x = xt.add(&link.x0);
        let y = q.v.mul(&link.y0).mul(&xt.square());
        Ok(Point::Affine(x, y))
    }
}

/// Quartic model attached to a split curve and a base point `P0 = (x0, y0)`
/// with `y0 != 0`: `c0 = 0`, `c_i = 1 / (e_i - x0)`.
pub fn to_quartic<F: Field>(curve: &SplitCurve<F>, base: &Point<F>) -> Result<QuarticCurve<F>> {
    let (x0, y0) = match base {
        Point::Affine(x, y) => (x, y),
        Point::Infinity => return Err(Error::TwoTorsionBasePoint),
    };
    if y0.is_zero() {
        return Err(Error::TwoTorsionBasePoint);
    }
    let mut c = vec![x0.zero_like()];
    for e in curve.roots() {
        let shifted = e.sub(x0);
        c.push(shifted.inv().ok_or(Error::SingularTranslate)?);
    }
    curve.ensure_on(base)?;
    let c: [F; 4] = c.try_into().expect("four constants");
    let mut q = QuarticCurve::new(c)?;
    q.provenance = Some(Provenance { curve: curve.clone(), x0: x0.clone(), y0: y0.clone() });
    Ok(q)
}

/// The roots after translating `x0` to the origin.
pub fn translated_roots<F: Field>(curve: &SplitCurve<F>, x0: &F) -> [F; 3] {
    let r = curve.roots();
    [r[0].sub(x0), r[1].sub(x0), r[2].sub(x0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    fn congruent5() -> (SplitCurve<Rational>, Point<Rational>) {
        let c = SplitCurve::new(0.into(), 5.into(), (-5).into()).unwrap();
        (c, Point::Affine((-4).into(), 6.into()))
    }

    #[test]
    fn regression_constants() {
        let (c, p0) = congruent5();
        let q = to_quartic(&c, &p0).unwrap();
        let expected = [Rational::zero(), Rational::new(1, 4), Rational::new(1, 9), (-1).into()];
        assert_eq!(q.constants(), &expected);
        let t = translated_roots(&c, &(-4).into());
        assert_eq!(t, [4.into(), 9.into(), (-1).into()]);
        let prod = &t[0] * &t[1] * &t[2];
        assert_eq!(Rational::from(36), -prod);
    }

    #[test]
    fn rejects_two_torsion_and_singular_translates() {
        let (c, _) = congruent5();
        let t = Point::Affine(5.into(), 0.into());
        assert_eq!(to_quartic(&c, &t).unwrap_err(), Error::TwoTorsionBasePoint);
        // x0 = 1 collides with a root of y^2 = x(x-1)(x+1)
        let c2 = SplitCurve::<Rational>::new(0.into(), 1.into(), (-1).into()).unwrap();
        let p = Point::Affine(1.into(), 3.into());
        assert_eq!(to_quartic(&c2, &p).unwrap_err(), Error::SingularTranslate);
        let off = Point::Affine(2.into(), 3.into());
        assert_eq!(to_quartic(&c2, &off).unwrap_err(), Error::NotOnCurve);
    }

    #[test]
    fn doubled_base_point_maps_onto_quartic() {
        let (c, p0) = congruent5();
        let q = to_quartic(&c, &p0).unwrap();
        let two = c.double(&p0);
        let qp = q.from_weierstrass(&two).unwrap();
        assert_eq!(qp.u, Rational::new(-144, 2257));
        assert!(q.contains(&qp));
        assert_eq!(q.to_weierstrass(&qp).unwrap(), two);
        assert_eq!(q.from_weierstrass(&p0).unwrap_err(), Error::MapsToInfinity);
    }

    #[test]
    fn identity_corresponds_to_origin() {
        let (c, p0) = congruent5();
        let q = to_quartic(&c, &p0).unwrap();
        let origin = q.from_weierstrass(&Point::Infinity).unwrap();
        assert!(origin.u.is_zero() && origin.v.is_zero());
        assert_eq!(q.to_weierstrass(&origin).unwrap(), Point::Infinity);
    }

    #[test]
    fn torsion_round_trips() {
        let (c, p0) = congruent5();
        let q = to_quartic(&c, &p0).unwrap();
        for t in c.two_torsion() {
            let qp = q.from_weierstrass(&t).unwrap();
            assert_eq!(q.to_weierstrass(&qp).unwrap(), t);
        }
        let p3 = c.scalar_mul(3, &p0).unwrap();
        let qp = q.from_weierstrass(&p3).unwrap();
        assert_eq!(q.to_weierstrass(&qp).unwrap(), p3);
    }
}
