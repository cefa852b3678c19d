use super::split::{Point, SplitCurve};
use crate::arith::{rational_sqrt, Field, Rational};
use crate::error::{Error, Result};

/// Full 2-torsion criterion: `P in 2E(Q)` iff every `x(P) - e_i` is a square.
pub fn is_double(curve: &SplitCurve<Rational>, p: &Point<Rational>) -> Result<bool> {
    curve.ensure_on(p)?;
    let x = match p {
        Point::Affine(x, y) if !y.is_zero() => x,
        _ => return Err(Error::TwoTorsionInput),
    };
    Ok(curve.roots().iter().all(|e| rational_sqrt(&(x - e)).is_some()))
}

/// All rational `Q` with `2Q = P` for a non-2-torsion `P`.
pub fn halve(curve: &SplitCurve<Rational>, p: &Point<Rational>) -> Result<Vec<Point<Rational>>> {
    if !is_double(curve, p)? {
        return Ok(Vec::new());
    }
    let x = p.x().expect("affine");
    let r: Vec<Rational> = curve.roots().iter().map(|e| rational_sqrt(&(x - e)).unwrap()).collect();
    let mut out = Vec::new();
    for signs in 0..8u8 {
        let s: Vec<Rational> = (0..3)
            .map(|i| if signs >> i & 1 == 1 { -&r[i] } else { r[i].clone() })
            .collect();
        let xq = x + &(&s[0] * &s[1]) + &(&s[0] * &s[2]) + &(&s[1] * &s[2]);
        if let Some(yq) = rational_sqrt(&curve.rhs(&xq)) {
            for y in [yq.clone(), -yq] {
                let q = Point::Affine(xq.clone(), y);
                if curve.double(&q) == *p && !out.contains(&q) {
                    out.push(q);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn congruent5() -> SplitCurve<Rational> {
        SplitCurve::new(0.into(), 5.into(), (-5).into()).unwrap()
    }

    #[test]
    fn base_point_is_not_a_double() {
        let c = congruent5();
        let p = Point::Affine((-4).into(), 6.into());
        assert!(!is_double(&c, &p).unwrap());
        // brute force over small heights: nothing doubles to P
        for num in -60i64..=60 {
            for den in 1i64..=12 {
                let x = Rational::new(num, den);
                if let Some(y) = rational_sqrt(&c.rhs(&x)) {
                    let q = Point::Affine(x, y);
                    assert_ne!(c.double(&q), p);
                    assert_ne!(c.double(&c.neg(&q)), p);
                }
            }
        }
    }

    #[test]
    fn doubles_are_recognized_and_halved() {
        let c = congruent5();
        let p = Point::Affine((-4).into(), 6.into());
        for k in 1..4 {
            let r = c.scalar_mul(k, &p).unwrap();
            let two_r = c.double(&r);
            assert!(is_double(&c, &two_r).unwrap());
            let halves = halve(&c, &two_r).unwrap();
            // four halves differ by E[2]
            assert_eq!(halves.len(), 4);
            assert!(halves.contains(&r));
            for h in halves {
                assert_eq!(c.double(&h), two_r);
            }
        }
    }

    #[test]
    fn two_torsion_input_rejected() {
        let c = congruent5();
        assert_eq!(is_double(&c, &Point::Affine(0.into(), 0.into())), Err(Error::TwoTorsionInput));
    }
}
