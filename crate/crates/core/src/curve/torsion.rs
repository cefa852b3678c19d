//! Rational torsion by the Lutz-Nagell criterion on an integral model.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::split::{Point, SplitCurve};
use crate::arith::factor::factor_biguint;
use crate::arith::Rational;

/// Integral model `Y^2 = prod (X - E_i)` with `E_i = lambda^2 e_i`, related by
/// `x = X / lambda^2`, `y = Y / lambda^3`.
struct IntegralModel {
    lambda: BigInt,
    roots: [BigInt; 3],
    disc: BigInt,
}

impl IntegralModel {
    fn of(curve: &SplitCurve<Rational>) -> Self {
        let lambda = curve.roots().iter().fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let l2 = &lambda * &lambda;
        let roots = curve.roots().clone().map(|e| (e.numer() * &l2) / e.denom());
        let [a, b, c] = &roots;
        let disc = ((a - b) * (a - c) * (b - c)).pow(2);
        IntegralModel { lambda, roots, disc }
    }

    fn to_integral(&self, p: &Point<Rational>) -> Option<(BigInt, BigInt)> {
        let (x, y) = match p {
            Point::Affine(x, y) => (x, y),
            Point::Infinity => return None,
        };
        let l2 = Rational::from(&self.lambda * &self.lambda);
        let l3 = &l2 * &Rational::from(self.lambda.clone());
        let big_x = x * &l2;
        let big_y = y * &l3;
        (big_x.is_integer() && big_y.is_integer()).then(|| (big_x.numer().clone(), big_y.numer().clone()))
    }

    fn from_integral(&self, x: &BigInt, y: &BigInt) -> Point<Rational> {
        let l2 = &self.lambda * &self.lambda;
        let l3 = &l2 * &self.lambda;
        Point::Affine(Rational::new(x.clone(), l2), Rational::new(y.clone(), l3))
    }

    /// Integral, and `Y = 0` or `Y | disc`.
    fn passes(&self, p: &Point<Rational>) -> bool {
        match p {
            Point::Infinity => true,
            _ => match self.to_integral(p) {
                Some((_, y)) => y.is_zero() || (&self.disc % &y).is_zero(),
                None => false,
            },
        }
    }

    fn cubic(&self, x: &BigInt) -> BigInt {
        self.roots.iter().fold(BigInt::one(), |acc, e| acc * (x - e))
    }
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    if n.is_zero() {
        return out;
    }
    for (p, e) in factor_biguint(n.magnitude()) {
        let p = BigInt::from(p);
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pk);
                pk *= &p;
            }
        }
        out = next;
    }
    out
}

/// Integer solutions `X` of `cubic(X) = t`.
fn integer_solutions(model: &IntegralModel, t: &BigInt) -> Vec<BigInt> {
    let [a, b, c] = &model.roots;
    // X^3 + a2 X^2 + a4 X + (a6 - t)
    let a2 = -(a + b + c);
    let a4 = a * b + a * c + b * c;
    let c0 = -(a * b * c) - t;
    let mut sols = BTreeSet::new();
    if c0.is_zero() {
        sols.insert(BigInt::zero());
        let disc = &a2 * &a2 - BigInt::from(4) * &a4;
        if !disc.is_negative() {
            let r = disc.sqrt();
            if &r * &r == disc {
                for s in [&r, &-&r] {
                    let num = -&a2 + s;
                    if num.is_even() {
                        sols.insert(num / 2);
                    }
                }
            }
        }
    } else {
        for d in divisors(&c0) {
            for x in [d.clone(), -d] {
                if &model.cubic(&x) == t {
                    sols.insert(x);
                }
            }
        }
    }
    sols.into_iter().collect()
}

fn order_if_torsion(curve: &SplitCurve<Rational>, model: &IntegralModel, p: &Point<Rational>, limit: usize) -> Option<usize> {
    let mut q = p.clone();
    for n in 1..=limit.max(1) {
        if q.is_infinity() {
            return Some(n);
        }
        if !model.passes(&q) {
            return None;
        }
        q = curve.add_unchecked(&q, p);
    }
    None
}

/// The full rational torsion subgroup, infinity first and then sorted.
pub fn torsion_subgroup_q(curve: &SplitCurve<Rational>) -> Vec<Point<Rational>> {
    let model = IntegralModel::of(curve);
    let mut candidates: Vec<(BigInt, BigInt)> = model.roots.iter().map(|e| (e.clone(), BigInt::zero())).collect();
    for y in divisors(&model.disc) {
        let t = &y * &y;
        for x in integer_solutions(&model, &t) {
            candidates.push((x.clone(), y.clone()));
            candidates.push((x, -y.clone()));
        }
    }
    let limit = candidates.len() + 1;
    let mut out: Vec<Point<Rational>> = candidates
        .iter()
        .map(|(x, y)| model.from_integral(x, y))
        .filter(|p| order_if_torsion(curve, &model, p, limit).is_some())
        .collect();
    out.sort_by(|a, b| format!("{a:?}").cmp(&format!("{b:?}")));
    out.dedup();
    out.insert(0, Point::Infinity);
    out
}

/// Order of a rational point if it is torsion.
pub fn torsion_order(curve: &SplitCurve<Rational>, p: &Point<Rational>) -> Option<usize> {
    let model = IntegralModel::of(curve);
    // Mazur's bound is 12; the Lutz-Nagell filter rejects earlier for
    // non-torsion points, so 16 steps always decide.
    order_if_torsion(curve, &model, p, 16)
}

/// Exponent of the rational torsion group.
pub fn torsion_exponent(curve: &SplitCurve<Rational>) -> u64 {
    torsion_subgroup_q(curve)
        .iter()
        .map(|t| torsion_order(curve, t).expect("torsion point") as u64)
        .fold(1, |acc, n| acc.lcm(&n))
}
