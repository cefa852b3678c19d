use std::collections::{HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::factor::factor_u64;
use crate::arith::{
    fp_sqrt, fp_square_class, rational_sqrt_class, squarefree_part, ClassQuotient, Field, FpElement, Rational,
    SquareClass,
};
use crate::curve::{Point, QuarticCurve, QuarticPoint};
use crate::error::{Error, Result};

/// A field whose square classes can color `Z^N` and whose square roots turn
/// monochromatic lines into points.
pub trait ColorField: Field + Serialize + 'static {
    /// Short tag used in output records.
    fn field_tag(&self) -> String;

    /// Square class of a nonzero element modulo the absorbed classes.
    fn color(&self, quotient: &ClassQuotient) -> Result<SquareClass>;

    /// Writes `self = d * s^2`; `d = 1` whenever `self` is a square.
    fn sqrt_decompose(&self) -> Result<(BigInt, Self)>;

    /// Random element for search restarts.
    fn sample(&self, rng: &mut ChaCha8Rng, bound: i64) -> Self;

    /// Trace down to the base field of the Weierstrass image of `(u, v sqrt d)`.
    fn traced_point(quartic: &QuarticCurve<Self>, u: &Self, d: &BigInt, v: &Self) -> Result<Point<Self>>;

    /// Color ids of the coloring at every point of `{0,1,2,3}^N`, indexed by
    /// `sum i_j 4^j`; `None` where the value is zero. Equal ids mean equal
    /// colors; ids carry no other meaning.
    fn color_table(spec: &ColoringSpec<Self>) -> Vec<Option<u32>> {
        let values = spec.all_values();
        let mut ids: HashMap<SquareClass, u32> = HashMap::new();
        values
            .iter()
            .map(|v| {
                let class = v.color(&spec.quotient).ok()?;
                let next = ids.len() as u32;
                Some(*ids.entry(class).or_insert(next))
            })
            .collect()
    }
}

impl ColorField for FpElement {
    fn field_tag(&self) -> String {
        format!("F_{}", self.modulus())
    }

    fn color(&self, _quotient: &ClassQuotient) -> Result<SquareClass> {
        fp_square_class(self)
    }

    fn sqrt_decompose(&self) -> Result<(BigInt, Self)> {
        Ok((BigInt::one(), fp_sqrt(self)?))
    }

    fn sample(&self, rng: &mut ChaCha8Rng, _bound: i64) -> Self {
        FpElement::from_u64(rng.gen_range(0..self.modulus()), self.modulus())
    }

    fn traced_point(quartic: &QuarticCurve<Self>, u: &Self, _d: &BigInt, v: &Self) -> Result<Point<Self>> {
        let p = quartic.to_weierstrass(&QuarticPoint { u: *u, v: *v })?;
        let curve = &quartic.provenance().ok_or(Error::MissingProvenance)?.curve;
        Ok(curve.double(&p))
    }

    fn color_table(spec: &ColoringSpec<Self>) -> Vec<Option<u32>> {
        spec.all_values()
            .iter()
            .map(|v| match v.legendre() {
                0 => None,
                1 => Some(0),
                _ => Some(1),
            })
            .collect()
    }
}

impl ColorField for Rational {
    fn field_tag(&self) -> String {
        "Q".into()
    }

    fn color(&self, quotient: &ClassQuotient) -> Result<SquareClass> {
        match squarefree_part(self)? {
            SquareClass::Rational(s) => Ok(SquareClass::Rational(quotient.reduce(&s))),
            other => Ok(other),
        }
    }

    fn sqrt_decompose(&self) -> Result<(BigInt, Self)> {
        rational_sqrt_class(self)
    }

    fn sample(&self, rng: &mut ChaCha8Rng, bound: i64) -> Self {
        Rational::from(rng.gen_range(-bound..=bound))
    }

    fn traced_point(quartic: &QuarticCurve<Self>, u: &Self, d: &BigInt, v: &Self) -> Result<Point<Self>> {
        let curve = &quartic.provenance().ok_or(Error::MissingProvenance)?.curve;
        if d.is_one() {
            let p = quartic.to_weierstrass(&QuarticPoint { u: u.clone(), v: v.clone() })?;
            return Ok(curve.double(&p));
        }
        let p = quadratic_weierstrass_point(quartic, u, d, v)?;
        crate::curve::trace_point(curve, &p)
    }

    /// Scales every value by a common denominator and colors machine
    /// integers; scaling multiplies every color by the same class, so equal
    /// ids still mean equal colors.
    fn color_table(spec: &ColoringSpec<Self>) -> Vec<Option<u32>> {
        match integer_color_table(spec) {
            Some(t) => t,
            None => {
                let values = spec.all_values();
                let mut ids: HashMap<SquareClass, u32> = HashMap::new();
                values
                    .iter()
                    .map(|v| {
                        let class = v.color(&spec.quotient).ok()?;
                        let next = ids.len() as u32;
                        Some(*ids.entry(class).or_insert(next))
                    })
                    .collect()
            }
        }
    }
}

/// Weierstrass image of the quartic point `(u, v sqrt d)` over `Q(sqrt d)`.
pub fn quadratic_weierstrass_point(
    quartic: &QuarticCurve<Rational>,
    u: &Rational,
    d: &BigInt,
    v: &Rational,
) -> Result<Point<crate::arith::QuadExtElement>> {
    use crate::arith::QuadExtElement;
    let link = quartic.provenance().ok_or(Error::MissingProvenance)?;
    if Rational::from(d.clone()) * v * v != quartic.f(u) {
        return Err(Error::NotOnCurve);
    }
    let xt = -(u.inv().ok_or(Error::MapsToBasePointPair)?);
    let x = &xt + &link.x0;
    let y = v * &link.y0 * &xt * &xt;
    let p = Point::Affine(QuadExtElement::embed(&x, d), QuadExtElement::new(Rational::zero(), y, d.clone())?);
    crate::curve::lift_curve(&link.curve, d).ensure_on(&p)?;
    Ok(p)
}

fn integer_color_table(spec: &ColoringSpec<Rational>) -> Option<Vec<Option<u32>>> {
    let mut m = spec.l.denom().clone();
    let terms: Vec<Vec<Rational>> = spec.b.iter().map(|b| spec.c.iter().map(|c| b * c).collect()).collect();
    for t in terms.iter().flatten() {
        m = m.lcm(t.denom());
    }
    let scale = Rational::from(m);
    let to_i64 = |r: &Rational| (r * &scale).numer().to_i64();
    let l = to_i64(&spec.l)?;
    let mut bound = l.unsigned_abs() as u128;
    let mut int_terms = Vec::with_capacity(terms.len());
    for row in &terms {
        let row: Option<Vec<i64>> = row.iter().map(to_i64).collect();
        let row = row?;
        bound += row.iter().map(|x| x.unsigned_abs() as u128).max().unwrap_or(0);
        int_terms.push(row);
    }
    if bound >= (1u128 << 62) {
        return None;
    }
    let mut values = vec![l];
    for row in &int_terms {
        let mut next = Vec::with_capacity(values.len() * 4);
        for t in row {
            next.extend(values.iter().map(|v| v + t));
        }
        values = next;
    }
    let mut memo: HashMap<i64, Option<u32>> = HashMap::new();
    let mut ids: HashMap<BigInt, u32> = HashMap::new();
    let table = values
        .iter()
        .map(|&v| {
            *memo.entry(v).or_insert_with(|| {
                if v == 0 {
                    return None;
                }
                let core = factor_u64(v.unsigned_abs())
                    .into_iter()
                    .filter(|(_, e)| e % 2 == 1)
                    .fold(BigInt::one(), |acc, (p, _)| acc * p);
                let core = if v < 0 { -core } else { core };
                let class = spec.quotient.reduce(&core);
                let next = ids.len() as u32;
                Some(*ids.entry(class).or_insert(next))
            })
        })
        .collect();
    Some(table)
}

/// The data `(l, b_1..b_N, c_0..c_3)` defining the coloring
/// `xi(i_1..i_N) = l + sum_j b_j c_{i_j}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColoringSpec<F> {
    pub l: F,
    pub b: Vec<F>,
    pub c: [F; 4],
    /// Square classes treated as trivial (the working field is
    /// `Q(sqrt g : g in generators)`); ignored over `F_p`.
    pub quotient: ClassQuotient,
}

/// Largest `N` whose subset-sum condition is checked exhaustively.
pub const MAX_CHECKED_N: usize = 20;

impl<F: ColorField> ColoringSpec<F> {
    pub fn new(l: F, b: Vec<F>, c: [F; 4]) -> Result<Self> {
        Self::with_quotient(l, b, c, ClassQuotient::trivial())
    }

    pub fn with_quotient(l: F, b: Vec<F>, c: [F; 4], quotient: ClassQuotient) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidSpec("need N >= 1".into()));
        }
        if b.len() > MAX_CHECKED_N {
            return Err(Error::InvalidSpec(format!("N = {} exceeds {MAX_CHECKED_N}", b.len())));
        }
        for i in 0..4 {
            for j in i + 1..4 {
                if c[i] == c[j] {
                    return Err(Error::InvalidSpec("quartic constants must be distinct".into()));
                }
            }
        }
        if has_zero_subset_sum(&b) {
            return Err(Error::InvalidSpec("a non-empty subsequence of b sums to 0".into()));
        }
        Ok(ColoringSpec { l, b, c, quotient })
    }

    pub fn n(&self) -> usize {
        self.b.len()
    }

    /// `l + sum_j b_j c_{i_j}`.
    pub fn value_at(&self, point: &[u8]) -> Result<F> {
        if point.len() != self.n() || point.iter().any(|&i| i > 3) {
            return Err(Error::InvalidInput("point outside {0,1,2,3}^N".into()));
        }
        Ok(point
            .iter()
            .zip(&self.b)
            .fold(self.l.clone(), |acc, (&i, b)| acc.add(&b.mul(&self.c[i as usize]))))
    }

    /// Values at every point of `Z^N`, indexed by `sum i_j 4^j`.
    pub fn all_values(&self) -> Vec<F> {
        let mut values = vec![self.l.clone()];
        for b in &self.b {
            let terms: Vec<F> = self.c.iter().map(|c| b.mul(c)).collect();
            let mut next = Vec::with_capacity(values.len() * 4);
            for t in &terms {
                next.extend(values.iter().map(|v| v.add(t)));
            }
            values = next;
        }
        values
    }

    /// Skips the checks; the caller guarantees them.
    pub(crate) fn from_checked_parts(l: F, b: Vec<F>, c: [F; 4], quotient: ClassQuotient) -> Self {
        ColoringSpec { l, b, c, quotient }
    }

    /// Prefix of the first `n` coefficients.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        Self::with_quotient(self.l.clone(), self.b[..n].to_vec(), self.c.clone(), self.quotient.clone())
    }
}

fn has_zero_subset_sum<F: Field>(b: &[F]) -> bool {
    let mut sums: HashSet<F> = HashSet::new();
    for x in b {
        if x.is_zero() || sums.contains(&x.neg()) {
            return true;
        }
        let shifted: Vec<F> = sums.iter().map(|s| s.add(x)).collect();
        sums.extend(shifted);
        sums.insert(x.clone());
    }
    false
}

/// Color of one point of `Z^N`.
pub fn xi_eval<F: ColorField>(spec: &ColoringSpec<F>, point: &[u8]) -> Result<SquareClass> {
    spec.value_at(point)?.color(&spec.quotient)
}

/// `{v, v + w, v + 2w, v + 3w}` with `w` a nonzero 0/1 vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CombinatorialLine {
    pub v: Vec<u8>,
    #[serde(serialize_with = "bits")]
    pub w: Vec<bool>,
}

fn bits<S: serde::Serializer>(w: &[bool], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(w.len()))?;
    for &b in w {
        seq.serialize_element(&(b as u8))?;
    }
    seq.end()
}

impl CombinatorialLine {
    pub fn new(v: Vec<u8>, w: Vec<bool>) -> Result<Self> {
        if v.len() != w.len() || v.is_empty() {
            return Err(Error::InvalidInput("v and w must have the same positive length".into()));
        }
        if !w.iter().any(|&x| x) {
            return Err(Error::InvalidInput("w must be nonzero".into()));
        }
        if v.iter().zip(&w).any(|(&vi, &wi)| vi > 3 || (wi && vi != 0)) {
            return Err(Error::InvalidInput("v must be 0 where w is 1 and lie in {0,1,2,3}".into()));
        }
        Ok(CombinatorialLine { v, w })
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    /// The point `v + k w`.
    pub fn point(&self, k: u8) -> Vec<u8> {
        self.v.iter().zip(&self.w).map(|(&v, &w)| if w { k } else { v }).collect()
    }
}

/// `r_v = sum_{w_j = 0} b_j c_{v_j}`.
pub fn r_v<F: ColorField>(spec: &ColoringSpec<F>, line: &CombinatorialLine) -> F {
    line.v
        .iter()
        .zip(&line.w)
        .zip(&spec.b)
        .filter(|((_, &w), _)| !w)
        .fold(spec.l.zero_like(), |acc, ((&v, _), b)| acc.add(&b.mul(&spec.c[v as usize])))
}

/// `s_w = sum_{w_j = 1} b_j`, nonzero by the subset-sum condition.
pub fn s_w<F: ColorField>(spec: &ColoringSpec<F>, line: &CombinatorialLine) -> F {
    line.w
        .iter()
        .zip(&spec.b)
        .filter(|(&w, _)| w)
        .fold(spec.l.zero_like(), |acc, (_, b)| acc.add(b))
}

/// `l + r_v + s_w c_k` for `k = 0..3`.
pub fn line_values<F: ColorField>(spec: &ColoringSpec<F>, line: &CombinatorialLine) -> Result<[F; 4]> {
    if line.len() != spec.n() {
        return Err(Error::InvalidInput("line dimension differs from N".into()));
    }
    let base = spec.l.add(&r_v(spec, line));
    let s = s_w(spec, line);
    Ok(spec.c.clone().map(|c| base.add(&s.mul(&c))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn regression_c() -> [Rational; 4] {
        [Rational::zero(), Rational::new(1, 4), Rational::new(1, 9), (-1).into()]
    }

    #[test]
    fn xi_examples() {
        let spec = ColoringSpec::new(2.into(), vec![1.into()], regression_c()).unwrap();
        assert_eq!(xi_eval(&spec, &[0]).unwrap(), SquareClass::Rational(2.into()));
        assert_eq!(xi_eval(&spec, &[3]).unwrap(), SquareClass::Rational(1.into()));
        assert_eq!(xi_eval(&spec, &[4]).unwrap_err(), Error::InvalidInput("point outside {0,1,2,3}^N".into()));
        let zero = ColoringSpec::new(1.into(), vec![1.into()], regression_c()).unwrap();
        assert_eq!(xi_eval(&zero, &[3]).unwrap_err(), Error::DegenerateColor);
    }

    #[test]
    fn subset_sum_condition() {
        let c = regression_c();
        assert!(ColoringSpec::new(Rational::zero(), vec![2.into(), 3.into(), (-5).into()], c.clone()).is_err());
        assert!(ColoringSpec::new(Rational::zero(), vec![2.into(), 0.into()], c.clone()).is_err());
        assert!(ColoringSpec::new(Rational::zero(), vec![2.into(), 3.into(), (-4).into()], c.clone()).is_ok());
        assert!(ColoringSpec::new(Rational::zero(), vec![], c).is_err());
    }

    #[test]
    fn line_values_instance() {
        let spec = ColoringSpec::new(5.into(), vec![7.into()], regression_c()).unwrap();
        let line = CombinatorialLine::new(vec![0], vec![true]).unwrap();
        let vals = line_values(&spec, &line).unwrap();
        let expected = regression_c().map(|c| Rational::from(5) + Rational::from(7) * c);
        assert_eq!(vals, expected);
        assert!(CombinatorialLine::new(vec![1], vec![true]).is_err());
        assert!(CombinatorialLine::new(vec![1], vec![false]).is_err());
    }

    #[test]
    fn integer_table_agrees_with_generic_coloring() {
        let q = ClassQuotient::new(&[(-1).into(), 2.into()]).unwrap();
        let spec = ColoringSpec::with_quotient(
            Rational::new(7, 3),
            vec![3.into(), Rational::new(-5, 2), 11.into()],
            regression_c(),
            q,
        )
        .unwrap();
        let fast = integer_color_table(&spec).unwrap();
        let values = spec.all_values();
        for i in 0..values.len() {
            for j in 0..values.len() {
                let same = match (values[i].color(&spec.quotient), values[j].color(&spec.quotient)) {
                    (Ok(a), Ok(b)) => Some(a == b),
                    _ => None,
                };
                let fast_same = match (fast[i], fast[j]) {
                    (Some(a), Some(b)) => Some(a == b),
                    _ => None,
                };
                assert_eq!(same, fast_same);
            }
        }
    }

    fn arb_line(n: usize) -> impl Strategy<Value = CombinatorialLine> {
        (prop::collection::vec(0u8..4, n), prop::collection::vec(any::<bool>(), n))
            .prop_filter("w nonzero", |(_, w)| w.iter().any(|&x| x))
            .prop_map(|(v, w)| {
                let v = v.iter().zip(&w).map(|(&v, &w)| if w { 0 } else { v }).collect();
                CombinatorialLine::new(v, w).unwrap()
            })
    }

    proptest! {
        #[test]
        fn successive_differences_follow_c(line in arb_line(5), l in -50i64..50, seed in 0u64..1000) {
            let b: Vec<Rational> = (0..5).map(|j| Rational::from(((seed >> j) % 7 + 1) as i64 * 10i64.pow(j as u32))).collect();
            let spec = ColoringSpec::new(Rational::from(l), b, regression_c()).unwrap();
            let vals = line_values(&spec, &line).unwrap();
            let s = s_w(&spec, &line);
            prop_assert!(!s.is_zero());
            for k in 1..4 {
                prop_assert_eq!(&vals[k] - &vals[k - 1], &s * &(&spec.c[k] - &spec.c[k - 1]));
            }
            for k in 0..4u8 {
                prop_assert_eq!(&spec.value_at(&line.point(k)).unwrap(), &vals[k as usize]);
            }
        }
    }
}
