use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::arith::{FpElement, Rational};
use crate::curve::{Point, SplitCurve};
use crate::error::{Error, Result};

/// Reduces `p` coordinatewise after checking good reduction of the curve.
pub fn reduce_point(curve: &SplitCurve<Rational>, pt: &Point<Rational>, p: u64) -> Result<Point<FpElement>> {
    let cp = curve.reduce_mod(p)?;
    curve.ensure_on(pt)?;
    let out = match pt {
        Point::Infinity => Point::Infinity,
        Point::Affine(x, y) => Point::Affine(
            FpElement::from_rational(x, p).ok_or(Error::BadPrimeForPoint(p))?,
            FpElement::from_rational(y, p).ok_or(Error::BadPrimeForPoint(p))?,
        ),
    };
    cp.ensure_on(&out)?;
    Ok(out)
}

/// Reductions of one point at several primes: `(p, image, |E(F_p)|)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct ReductionProfile {
    pub point_id: usize,
    pub images: Vec<(u64, Point<FpElement>, u64)>,
}

pub fn reduction_profile(
    curve: &SplitCurve<Rational>,
    pt: &Point<Rational>,
    point_id: usize,
    primes: &[u64],
) -> Result<ReductionProfile> {
    let mut images = Vec::with_capacity(primes.len());
    for &p in primes {
        let cp = curve.reduce_mod(p)?;
        images.push((p, reduce_point(curve, pt, p)?, cp.count_points()));
    }
    Ok(ReductionProfile { point_id, images })
}

/// Relations among points of `E(F_p)` inside the box `|a_i| <= B`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationSet {
    pub p: u64,
    pub bound: i64,
    pub group_order: u64,
    /// `[E(F_p) : <P_i>]`.
    pub index: u64,
    /// Nonzero relation vectors, sorted.
    pub relations: Vec<Vec<i64>>,
}

/// Most relation vectors a search may return before it is refused.
pub const RELATION_LIMIT: usize = 1 << 20;

fn code(pt: &Point<FpElement>) -> u64 {
    match pt {
        Point::Infinity => u64::MAX,
        Point::Affine(x, y) => x.value() * x.modulus() + y.value(),
    }
}

/// Every coefficient vector in `[-B, B]^k` over the given points with the
/// signature `(sum a_i P_i at each prime)`.
fn enumerate_half(curves: &[SplitCurve<FpElement>], pts: &[Vec<Point<FpElement>>], b: i64) -> Vec<(Vec<i64>, Vec<u64>)> {
    let k = pts.first().map_or(0, |v| v.len());
    let mut out = Vec::new();
    let start: Vec<Point<FpElement>> = vec![Point::Infinity; curves.len()];
    let mut coeffs = Vec::with_capacity(k);
    walk(curves, pts, b, 0, &start, &mut coeffs, &mut out);
    out
}

fn walk(
    curves: &[SplitCurve<FpElement>],
    pts: &[Vec<Point<FpElement>>],
    b: i64,
    level: usize,
    acc: &[Point<FpElement>],
    coeffs: &mut Vec<i64>,
    out: &mut Vec<(Vec<i64>, Vec<u64>)>,
) {
    let k = pts.first().map_or(0, |v| v.len());
    if level == k {
        out.push((coeffs.clone(), acc.iter().map(code).collect()));
        return;
    }
    // Start at acc - B P_level and step by P_level.
    let mut cur: Vec<Point<FpElement>> = curves
        .iter()
        .zip(acc)
        .zip(pts)
        .map(|((c, a), row)| c.add_unchecked(a, &c.scalar_mul_unchecked(-b, &row[level])))
        .collect();
    for a in -b..=b {
        coeffs.push(a);
        walk(curves, pts, b, level + 1, &cur, coeffs, out);
        coeffs.pop();
        for (i, c) in curves.iter().enumerate() {
            cur[i] = c.add_unchecked(&cur[i], &pts[i][level]);
        }
    }
}

/// `(2B+1)^e`, saturating.
pub fn box_size(b: i64, e: usize) -> u128 {
    let side = (2 * b as u128) + 1;
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(side))
}

/// Nonzero `a` in `[-B, B]^k` with `sum a_i P_i = O` at every prime, by
/// meet-in-the-middle over the first `split` coordinates. `pts[j]` lists
/// the `k` points at prime `j`.
pub(crate) fn joint_relations(
    curves: &[SplitCurve<FpElement>],
    pts: &[Vec<Point<FpElement>>],
    b: i64,
    split: usize,
) -> Result<Vec<Vec<i64>>> {
    let k = pts.first().map_or(0, |v| v.len());
    if k == 0 {
        return Ok(Vec::new());
    }
    let split = split.min(k);
    let left_pts: Vec<Vec<Point<FpElement>>> = pts.iter().map(|row| row[..split].to_vec()).collect();
    let right_pts: Vec<Vec<Point<FpElement>>> = pts.iter().map(|row| row[split..].to_vec()).collect();
    let mut table: HashMap<Vec<u64>, Vec<Vec<i64>>> = HashMap::new();
    for (a, sig) in enumerate_half(curves, &left_pts, b) {
        table.entry(sig).or_default().push(a);
    }
    let mut out = Vec::new();
    // Negated signatures of the right half are looked up among the left.
    for (a2, sig2) in enumerate_half_negated(curves, &right_pts, b) {
        if let Some(lefts) = table.get(&sig2) {
            for a1 in lefts {
                let v: Vec<i64> = a1.iter().chain(&a2).copied().collect();
                if v.iter().any(|&x| x != 0) {
                    out.push(v);
                    if out.len() > RELATION_LIMIT {
                        return Err(Error::SearchTooLarge { points: k, bound: b });
                    }
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

fn enumerate_half_negated(
    curves: &[SplitCurve<FpElement>],
    pts: &[Vec<Point<FpElement>>],
    b: i64,
) -> Vec<(Vec<i64>, Vec<u64>)> {
    let negated: Vec<Vec<Point<FpElement>>> =
        curves.iter().zip(pts).map(|(c, row)| row.iter().map(|q| c.neg(q)).collect()).collect();
    enumerate_half(curves, &negated, b)
}

/// Order of the subgroup generated by `gens`.
pub fn generated_order(curve: &SplitCurve<FpElement>, gens: &[Point<FpElement>]) -> u64 {
    let mut h: HashSet<Point<FpElement>> = HashSet::from([Point::Infinity]);
    for g in gens {
        if h.contains(g) {
            continue;
        }
        // Cosets h + jg until jg falls back into h.
        let base: Vec<Point<FpElement>> = h.iter().cloned().collect();
        let mut step = g.clone();
        while !h.contains(&step) {
            for x in &base {
                h.insert(curve.add_unchecked(x, &step));
            }
            step = curve.add_unchecked(&step, g);
        }
    }
    h.len() as u64
}

/// All nonzero `a` with `|a_i| <= B` and `sum a_i P_i = O` in `E(F_p)`, plus
/// the index of the generated subgroup. `split` picks the meet-in-the-middle
/// cut; every cut yields the same set.
pub fn relation_search_mod_p(
    curve: &SplitCurve<FpElement>,
    images: &[Point<FpElement>],
    bound: i64,
    split: Option<usize>,
) -> Result<RelationSet> {
    if bound < 0 {
        return Err(Error::InvalidInput("bound must be non-negative".into()));
    }
    for q in images {
        curve.ensure_on(q)?;
    }
    let k = images.len();
    let group_order = curve.count_points();
    let order = generated_order(curve, images);
    // Expected survivors: box size over the generated order.
    if box_size(bound, k) / order as u128 > RELATION_LIMIT as u128 {
        return Err(Error::SearchTooLarge { points: k, bound });
    }
    let relations = joint_relations(
        std::slice::from_ref(curve),
        &[images.to_vec()],
        bound,
        split.unwrap_or(k.div_ceil(2)),
    )?;
    Ok(RelationSet { p: curve.modulus(), bound, group_order, index: group_order / order, relations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn curve101() -> SplitCurve<FpElement> {
        SplitCurve::new(FpElement::new(0, 101), FpElement::new(5, 101), FpElement::new(-5, 101)).unwrap()
    }

    fn brute(curve: &SplitCurve<FpElement>, pts: &[Point<FpElement>], b: i64) -> Vec<Vec<i64>> {
        let k = pts.len();
        let mut out = Vec::new();
        let total = box_size(b, k) as i64;
        for mut n in 0..total {
            let mut a = Vec::with_capacity(k);
            for _ in 0..k {
                a.push(n % (2 * b + 1) - b);
                n /= 2 * b + 1;
            }
            let s = a
                .iter()
                .zip(pts)
                .fold(Point::Infinity, |acc, (&c, q)| curve.add_unchecked(&acc, &curve.scalar_mul_unchecked(c, q)));
            if s.is_infinity() && a.iter().any(|&x| x != 0) {
                out.push(a);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn reduce_examples() {
        let c = SplitCurve::new(Rational::from(0), 5.into(), (-5).into()).unwrap();
        let r = reduce_point(&c, &Point::Affine((-4).into(), 6.into()), 7).unwrap();
        assert_eq!(r, Point::Affine(FpElement::new(3, 7), FpElement::new(6, 7)));
        assert_eq!(reduce_point(&c, &Point::Infinity, 7).unwrap(), Point::Infinity);
        assert_eq!(reduce_point(&c, &Point::Infinity, 5).unwrap_err(), Error::BadReduction(5));
        let half = Point::Affine(Rational::new(25, 4), Rational::new(-75, 8));
        assert_eq!(reduce_point(&c, &half, 7).unwrap(), Point::Affine(FpElement::new(1, 7), FpElement::new(2, 7)));
    }

    #[test]
    fn single_point_relations_are_multiples_of_its_order() {
        let c = curve101();
        let pts = c.points();
        let q = pts[5].clone();
        let r = generated_order(&c, std::slice::from_ref(&q)) as i64;
        let rel = relation_search_mod_p(&c, std::slice::from_ref(&q), 120, None).unwrap();
        let expected: Vec<Vec<i64>> = (-120..=120).filter(|a| a % r == 0 && *a != 0).map(|a| vec![a]).collect();
        assert_eq!(rel.relations, expected);
    }

    #[test]
    fn duplicate_pair() {
        let c = curve101();
        let q = c.points()[7].clone();
        let rel = relation_search_mod_p(&c, &[q.clone(), q], 3, None).unwrap();
        assert!(rel.relations.contains(&vec![1, -1]));
    }

    #[test]
    fn matches_exhaustive_enumeration_and_split_invariance() {
        let c = curve101();
        let pts = c.points();
        assert!(pts.len() <= 122);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10 {
            let k = rng.gen_range(1..=3);
            let chosen: Vec<_> = (0..k).map(|_| pts[rng.gen_range(0..pts.len())].clone()).collect();
            let b = 4;
            let expected = brute(&c, &chosen, b);
            for split in 0..=k {
                let got = relation_search_mod_p(&c, &chosen, b, Some(split)).unwrap();
                assert_eq!(got.relations, expected);
                assert_eq!(got.group_order % got.index, 0);
            }
        }
    }

    #[test]
    fn index_of_full_group_is_one() {
        let c = curve101();
        let pts = c.points();
        assert_eq!(generated_order(&c, &pts), pts.len() as u64);
    }
}
