use serde::Serialize;

use crate::arith::factor::next_prime;
use crate::arith::{FpElement, Rational};
use crate::curve::{torsion_exponent, torsion_subgroup_q, Point, SplitCurve};
use crate::error::{Error, Result};

use super::relations::{box_size, generated_order, joint_relations, reduce_point};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// No nonzero `a` with `|a_i| <= bound` puts `sum a_i P_i` in torsion.
    Independent { bound: i64 },
    /// `sum a_i P_i` is torsion, checked exactly over `Q`.
    RelationFound { vector: Vec<i64> },
    /// Candidates survived every prime but could not be checked exactly.
    Inconclusive { survivors: Vec<Vec<i64>> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeIndex {
    pub p: u64,
    pub group_order: u64,
    pub index: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceCertificate {
    pub points: Vec<Point<Rational>>,
    #[serde(rename = "B")]
    pub bound: i64,
    pub primes: Vec<u64>,
    pub verdict: Verdict,
    /// Every vector that survived all primes used.
    pub relations: Vec<Vec<i64>>,
    pub per_prime_indices: Vec<PrimeIndex>,
}

impl IndependenceCertificate {
    pub fn is_independent(&self) -> bool {
        matches!(self.verdict, Verdict::Independent { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CertifyBudget {
    pub min_primes: usize,
    pub max_primes: usize,
    /// Primes are taken above this.
    pub p_min: u64,
    /// Refuse when one side of the meet-in-the-middle exceeds this many vectors.
    pub work_limit: u64,
    /// Survivors with larger coefficients are not checked over `Q`.
    pub verify_limit: i64,
}

impl Default for CertifyBudget {
    fn default() -> Self {
        CertifyBudget { min_primes: 8, max_primes: 20, p_min: 100, work_limit: 2_000_000, verify_limit: 32 }
    }
}

/// Largest `B` (at most `cap`) whose search for `k` points fits the work limit.
pub fn feasible_bound(k: usize, cap: i64, budget: &CertifyBudget) -> i64 {
    let half = k.div_ceil(2);
    let mut b = cap;
    while b > 0 && box_size(b, half) > budget.work_limit as u128 {
        b = if b > 64 { b * 3 / 4 } else { b - 1 };
    }
    b
}

/// Smallest primes above `p_min` with good reduction at which no point has
/// `p` in a denominator.
fn good_primes(curve: &SplitCurve<Rational>, points: &[Point<Rational>], budget: &CertifyBudget) -> Result<Vec<u64>> {
    let mut primes = Vec::new();
    let mut p = budget.p_min.max(2);
    let mut tries = 0;
    while primes.len() < budget.max_primes {
        p = next_prime(p + 1);
        tries += 1;
        if tries > 100_000 {
            return Err(Error::Internal("ran out of good primes".into()));
        }
        if curve.reduce_mod(p).is_ok() && points.iter().all(|q| reduce_point(curve, q, p).is_ok()) {
            primes.push(p);
        }
    }
    Ok(primes)
}

/// Exact check that `sum a_i P_i` is torsion.
pub fn is_torsion_combination(curve: &SplitCurve<Rational>, points: &[Point<Rational>], a: &[i64]) -> Result<bool> {
    let mut s = Point::Infinity;
    for (q, &c) in points.iter().zip(a) {
        s = curve.add(&s, &curve.scalar_mul(c, q)?)?;
    }
    Ok(torsion_subgroup_q(curve).contains(&s))
}

/// Primitive representative: smallest sup norm, then smallest 1-norm, first
/// nonzero entry positive, then lexicographic.
fn canonical_order(v: &[i64]) -> (i64, i64, Vec<i64>) {
    let sign = v.iter().find(|&&x| x != 0).map_or(1, |x| x.signum());
    let w: Vec<i64> = v.iter().map(|x| x * sign).collect();
    (w.iter().map(|x| x.abs()).max().unwrap_or(0), w.iter().map(|x| x.abs()).sum(), w.iter().map(|x| -x).collect())
}

/// Bounded independence certificate for `points` modulo torsion.
///
/// Each point is multiplied by the exponent of `E(Q)_tors` before reduction,
/// so relations found modulo `p` are relations modulo torsion. The relation
/// sets at the chosen primes are intersected by one meet-in-the-middle pass
/// over the product of the groups `E(F_p)`.
pub fn certify(
    curve: &SplitCurve<Rational>,
    points: &[Point<Rational>],
    bound: i64,
    budget: &CertifyBudget,
) -> Result<IndependenceCertificate> {
    if bound < 1 {
        return Err(Error::InvalidInput("bound must be positive".into()));
    }
    for q in points {
        curve.ensure_on(q)?;
    }
    let k = points.len();
    let empty = |verdict| IndependenceCertificate {
        points: points.to_vec(),
        bound,
        primes: Vec::new(),
        verdict,
        relations: Vec::new(),
        per_prime_indices: Vec::new(),
    };
    if k == 0 {
        return Ok(empty(Verdict::Independent { bound }));
    }
    let split = k.div_ceil(2);
    if box_size(bound, split) > budget.work_limit as u128 {
        return Err(Error::SearchTooLarge { points: k, bound });
    }
    let t = torsion_exponent(curve) as i64;
    let primes = good_primes(curve, points, budget)?;
    let mut curves = Vec::with_capacity(primes.len());
    let mut images: Vec<Vec<Point<FpElement>>> = Vec::with_capacity(primes.len());
    let mut indices = Vec::with_capacity(primes.len());
    for &p in &primes {
        let cp = curve.reduce_mod(p)?;
        let raw: Vec<Point<FpElement>> = points.iter().map(|q| reduce_point(curve, q, p)).collect::<Result<_>>()?;
        let order = cp.count_points();
        indices.push(PrimeIndex { p, group_order: order, index: order / generated_order(&cp, &raw) });
        images.push(raw.iter().map(|q| cp.scalar_mul_unchecked(t, q)).collect());
        curves.push(cp);
    }
    let mut used = budget.min_primes.clamp(1, primes.len());
    loop {
        let survivors = joint_relations(&curves[..used], &images[..used], bound, split)?;
        let finish = |verdict| IndependenceCertificate {
            points: points.to_vec(),
            bound,
            primes: primes[..used].to_vec(),
            verdict,
            relations: survivors.clone(),
            per_prime_indices: indices[..used].to_vec(),
        };
        if survivors.is_empty() {
            return Ok(finish(Verdict::Independent { bound }));
        }
        let best = survivors.iter().min_by_key(|v| canonical_order(v)).expect("nonempty");
        let sign = best.iter().find(|&&x| x != 0).map_or(1, |x| x.signum());
        let best: Vec<i64> = best.iter().map(|x| x * sign).collect();
        if best.iter().all(|x| x.abs() <= budget.verify_limit) && is_torsion_combination(curve, points, &best)? {
            return Ok(finish(Verdict::RelationFound { vector: best }));
        }
        if used == primes.len() {
            log::info!("certify: {} survivors after {} primes", survivors.len(), used);
            return Ok(finish(Verdict::Inconclusive { survivors: survivors.clone() }));
        }
        used += 1;
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    fn regression() -> SplitCurve<Rational> {
        SplitCurve::new(Rational::from(0), 5.into(), (-5).into()).unwrap()
    }

    #[test]
    fn planted_relations() {
        let c = regression();
        let p = Point::Affine(Rational::from(-4), Rational::from(6));
        let p2 = c.double(&p);
        let cert = certify(&c, &[p.clone(), p2.clone()], 20, &CertifyBudget::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::RelationFound { vector: vec![2, -1] });
        let q = c.scalar_mul(3, &p).unwrap();
        let pq = c.add(&p, &q).unwrap();
        let cert = certify(&c, &[p.clone(), q, pq], 6, &CertifyBudget::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::RelationFound { vector: vec![1, 1, -1] });
    }

    #[test]
    fn regression_point_is_independent() {
        let c = regression();
        let p = Point::Affine(Rational::from(-4), Rational::from(6));
        let cert = certify(&c, std::slice::from_ref(&p), 20, &CertifyBudget::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::Independent { bound: 20 });
        assert_eq!(cert.primes.len(), 8);
        assert!(cert.primes.iter().all(|&q| q > 100));
    }

    #[test]
    fn empty_and_torsion_sets() {
        let c = regression();
        assert!(certify(&c, &[], 5, &CertifyBudget::default()).unwrap().is_independent());
        let t = Point::Affine(Rational::from(5), Rational::from(0));
        let cert = certify(&c, &[t], 5, &CertifyBudget::default()).unwrap();
        assert_eq!(cert.verdict, Verdict::RelationFound { vector: vec![1] });
    }

    #[test]
    fn oversize_search_is_refused() {
        let c = regression();
        let p = Point::Affine(Rational::from(-4), Rational::from(6));
        let pts = vec![p.clone(); 6];
        assert!(matches!(
            certify(&c, &pts, 10_000, &CertifyBudget::default()),
            Err(Error::SearchTooLarge { points: 6, bound: 10_000 })
        ));
        assert!(feasible_bound(6, 10_000, &CertifyBudget::default()) >= 1);
    }

    #[test]
    fn larger_bound_keeps_relations() {
        let c = regression();
        let p = Point::Affine(Rational::from(-4), Rational::from(6));
        let p3 = c.scalar_mul(3, &p).unwrap();
        for b in [3, 5, 9] {
            let cert = certify(&c, &[p.clone(), p3.clone()], b, &CertifyBudget::default()).unwrap();
            assert_eq!(cert.verdict, Verdict::RelationFound { vector: vec![3, -1] });
        }
    }
}
