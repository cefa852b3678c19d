use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{fp_sqrt, FpElement};
use crate::curve::{residue_table, Point, QuarticCurve, QuarticPoint};
use crate::error::{Error, Result};

use super::count::LinearForm;
use super::group::{subgroup_m_e, MultipleSubgroup};

/// Tuples `(u_1..u_k)` up to this prime are searched lexicographically,
/// beyond it at random.
pub const LEXICOGRAPHIC_LIMIT: u64 = 500;

/// A tuple `(u_1..u_k)` for which no non-empty subsequence of any
/// compatible `(P_1..P_k)` sums into `mE(F_p)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvoidanceWitness {
    pub p: u64,
    pub m: u64,
    pub u_tuple: Vec<FpElement>,
    pub checked_tuples: u64,
    pub search: String,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AvoidanceOutcome {
    Found { witness: AvoidanceWitness, candidates: u64 },
    NotFound { candidates: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AvoidanceBudget {
    /// Candidate tuples examined before giving up.
    pub max_candidates: u64,
    pub seed: u64,
}

impl Default for AvoidanceBudget {
    fn default() -> Self {
        AvoidanceBudget { max_candidates: 100_000, seed: 0 }
    }
}

/// The points of `U(F_p)` over the values `sigma(u0)`, both roots per value.
fn points_over(quartic: &QuarticCurve<FpElement>, sigma: &[LinearForm], u0: FpElement) -> Result<Vec<QuarticPoint<FpElement>>> {
    let mut out: Vec<QuarticPoint<FpElement>> = Vec::new();
    for (a, b) in sigma {
        let u = *a * u0 + *b;
        let fu = quartic.f(&u);
        let Ok(v) = fp_sqrt(&fu) else { continue };
        for w in [v, -v] {
            let q = QuarticPoint { u, v: w };
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    Ok(out)
}

fn check_forms(sigmas: &[Vec<LinearForm>], u_tuple: &[FpElement]) -> Result<()> {
    if sigmas.len() != u_tuple.len() {
        return Err(Error::InvalidInput("need one u per form sequence".into()));
    }
    if sigmas.iter().flatten().any(|(a, _)| a.value() == 0) {
        return Err(Error::InvalidInput("linear forms need a_i != 0".into()));
    }
    Ok(())
}

/// Every `(P_1..P_k)` with `u(P_j)` in `sigma_j(u_j)`.
pub fn compatible_tuples(
    quartic: &QuarticCurve<FpElement>,
    sigmas: &[Vec<LinearForm>],
    u_tuple: &[FpElement],
) -> Result<Vec<Vec<QuarticPoint<FpElement>>>> {
    check_forms(sigmas, u_tuple)?;
    let mut tuples: Vec<Vec<QuarticPoint<FpElement>>> = vec![Vec::new()];
    for (sigma, &u0) in sigmas.iter().zip(u_tuple) {
        let pts = points_over(quartic, sigma, u0)?;
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                pts.iter().map(move |q| {
                    let mut t = t.clone();
                    t.push(q.clone());
                    t
                })
            })
            .collect();
    }
    Ok(tuples)
}

/// `u0` is usable when every `f(a_i u0 + b_i)` is a nonzero square, so each
/// slot has its full set of compatible points.
fn admissible(quartic: &QuarticCurve<FpElement>, sigma: &[LinearForm], u0: FpElement, qr: &[bool]) -> bool {
    sigma.iter().all(|(a, b)| qr[quartic.f(&(*a * u0 + *b)).value() as usize])
}

/// Checks every compatible tuple and every non-empty subsequence; returns
/// the number of tuples checked, or `None` at the first sum inside `mE`.
fn avoids(
    quartic: &QuarticCurve<FpElement>,
    sigmas: &[Vec<LinearForm>],
    u_tuple: &[FpElement],
    group: &MultipleSubgroup,
) -> Result<Option<u64>> {
    let curve = &quartic.provenance().ok_or(Error::MissingProvenance)?.curve;
    let mut slots: Vec<Vec<Point<FpElement>>> = Vec::with_capacity(sigmas.len());
    for (sigma, &u0) in sigmas.iter().zip(u_tuple) {
        let pts = points_over(quartic, sigma, u0)?;
        slots.push(pts.iter().map(|q| quartic.to_weierstrass(q)).collect::<Result<_>>()?);
    }
    let k = slots.len();
    let mut idx = vec![0usize; k];
    let mut checked = 0u64;
    if slots.iter().any(|s| s.is_empty()) {
        return Ok(Some(0));
    }
    loop {
        checked += 1;
        for mask in 1u32..1 << k {
            let sum = (0..k)
                .filter(|&j| mask >> j & 1 == 1)
                .fold(Point::Infinity, |acc, j| curve.add_unchecked(&acc, &slots[j][idx[j]]));
            if group.contains(&sum) {
                return Ok(None);
            }
        }
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(Some(checked));
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < slots[j].len() {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// Searches for a witness; `p` is read off the quartic, which must carry
/// its Weierstrass link.
pub fn avoidance_search(
    quartic: &QuarticCurve<FpElement>,
    sigmas: &[Vec<LinearForm>],
    m: u64,
    budget: &AvoidanceBudget,
) -> Result<AvoidanceOutcome> {
    let link = quartic.provenance().ok_or(Error::MissingProvenance)?;
    let p = link.curve.modulus();
    let group = subgroup_m_e(&link.curve, m)?;
    let k = sigmas.len();
    if k == 0 || k > 16 {
        return Err(Error::InvalidInput("need 1 <= k <= 16 form sequences".into()));
    }
    check_forms(sigmas, &vec![FpElement::from_u64(0, p); k])?;
    let qr = residue_table(p);
    let admissible_sets: Vec<Vec<FpElement>> = sigmas
        .iter()
        .map(|s| (0..p).map(|u| FpElement::from_u64(u, p)).filter(|&u| admissible(quartic, s, u, &qr)).collect())
        .collect();
    if admissible_sets.iter().any(|s| s.is_empty()) {
        return Ok(AvoidanceOutcome::NotFound { candidates: 0 });
    }
    let found = |u_tuple: Vec<FpElement>, checked: u64, search: &str| AvoidanceWitness {
        p,
        m,
        u_tuple,
        checked_tuples: checked,
        search: search.into(),
        seed: budget.seed,
    };
    let mut candidates = 0u64;
    if p <= LEXICOGRAPHIC_LIMIT {
        // Lexicographic over F_p^k; tuples with an inadmissible slot are skipped.
        let mut idx = vec![0usize; k];
        loop {
            if candidates >= budget.max_candidates {
                break;
            }
            candidates += 1;
            let tuple: Vec<FpElement> = (0..k).map(|j| admissible_sets[j][idx[j]]).collect();
            if let Some(checked) = avoids(quartic, sigmas, &tuple, &group)? {
                let witness = found(tuple, checked, "lexicographic");
                return Ok(AvoidanceOutcome::Found { witness, candidates });
            }
            let mut j = k;
            let done = loop {
                if j == 0 {
                    break true;
                }
                j -= 1;
                idx[j] += 1;
                if idx[j] < admissible_sets[j].len() {
                    break false;
                }
                idx[j] = 0;
            };
            if done {
                break;
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
        rng.set_stream(p);
        while candidates < budget.max_candidates {
            candidates += 1;
            let tuple: Vec<FpElement> =
                admissible_sets.iter().map(|s| s[rng.gen_range(0..s.len())]).collect();
            if let Some(checked) = avoids(quartic, sigmas, &tuple, &group)? {
                let witness = found(tuple, checked, "random");
                return Ok(AvoidanceOutcome::Found { witness, candidates });
            }
        }
    }
    Ok(AvoidanceOutcome::NotFound { candidates })
}

/// Recomputes the witness property from scratch.
pub fn verify_witness(
    quartic: &QuarticCurve<FpElement>,
    sigmas: &[Vec<LinearForm>],
    witness: &AvoidanceWitness,
) -> Result<bool> {
    let link = quartic.provenance().ok_or(Error::MissingProvenance)?;
    if link.curve.modulus() != witness.p {
        return Ok(false);
    }
    check_forms(sigmas, &witness.u_tuple)?;
    let qr = residue_table(witness.p);
    if !sigmas.iter().zip(&witness.u_tuple).all(|(s, &u)| admissible(quartic, s, u, &qr)) {
        return Ok(false);
    }
    let group = subgroup_m_e(&link.curve, witness.m)?;
    Ok(avoids(quartic, sigmas, &witness.u_tuple, &group)?.is_some())
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::curve::SplitCurve;
    use crate::density::count::reduce_model;

    fn model(p: u64) -> QuarticCurve<FpElement> {
        let curve = SplitCurve::new(Rational::from(0), 5.into(), (-5).into()).unwrap();
        reduce_model(&curve, &Point::Affine((-4).into(), 6.into()), p).unwrap()
    }

    fn form(a: i64, b: i64, p: u64) -> LinearForm {
        (FpElement::new(a, p), FpElement::new(b, p))
    }

    /// `Q` in `mE` iff some point `R` has `mR = Q`, by brute force.
    fn in_m_e(curve: &SplitCurve<FpElement>, m: u64, q: &Point<FpElement>) -> bool {
        curve.points().iter().any(|r| &curve.scalar_mul_unchecked(m as i64, r) == q)
    }

    #[test]
    fn single_slot_counts() {
        let p = 101;
        let q = model(p);
        let qr = residue_table(p);
        let sq = (0..p).find(|&u| qr[q.f(&FpElement::from_u64(u, p)).value() as usize]).unwrap();
        let nsq = (1..p).find(|&u| q.f(&FpElement::from_u64(u, p)).value() != 0 && !qr[q.f(&FpElement::from_u64(u, p)).value() as usize]).unwrap();
        let sigma = vec![vec![form(1, 0, p)]];
        assert_eq!(compatible_tuples(&q, &sigma, &[FpElement::from_u64(sq, p)]).unwrap().len(), 2);
        assert_eq!(compatible_tuples(&q, &sigma, &[FpElement::from_u64(nsq, p)]).unwrap().len(), 0);
    }

    #[test]
    fn tuple_count_is_a_product() {
        let p = 103;
        let q = model(p);
        let sigmas = vec![vec![form(1, 0, p), form(2, 5, p)], vec![form(3, 1, p), form(1, 9, p)]];
        for u1 in 0..20 {
            for u2 in 0..20 {
                let t = [FpElement::new(u1, p), FpElement::new(u2, p)];
                let whole = compatible_tuples(&q, &sigmas, &t).unwrap().len();
                let a = compatible_tuples(&q, &sigmas[..1], &t[..1]).unwrap().len();
                let b = compatible_tuples(&q, &sigmas[1..], &t[1..]).unwrap().len();
                assert_eq!(whole, a * b);
            }
        }
    }

    #[test]
    fn small_prime_witness_verifies_by_brute_force() {
        let p = 199;
        let q = model(p);
        let curve = q.provenance().unwrap().curve.clone();
        let sigmas = vec![vec![form(1, 0, p), form(2, 3, p)], vec![form(5, 1, p), form(1, 7, p)]];
        let out = avoidance_search(&q, &sigmas, 2, &AvoidanceBudget::default()).unwrap();
        let AvoidanceOutcome::Found { witness, .. } = out else { panic!("no witness at p = {p}") };
        assert!(verify_witness(&q, &sigmas, &witness).unwrap());
        let tuples = compatible_tuples(&q, &sigmas, &witness.u_tuple).unwrap();
        assert_eq!(tuples.len() as u64, witness.checked_tuples);
        for t in tuples {
            let pts: Vec<_> = t.iter().map(|x| q.to_weierstrass(x).unwrap()).collect();
            for mask in 1..4u32 {
                let sum = (0..2)
                    .filter(|j| mask >> j & 1 == 1)
                    .fold(Point::Infinity, |acc, j| curve.add_unchecked(&acc, &pts[j]));
                assert!(!in_m_e(&curve, 2, &sum));
            }
        }
    }

    #[test]
    fn k1_witness_is_a_non_double() {
        let p = 101;
        let q = model(p);
        let curve = q.provenance().unwrap().curve.clone();
        let sigmas = vec![vec![form(1, 0, p)]];
        if let AvoidanceOutcome::Found { witness, .. } = avoidance_search(&q, &sigmas, 2, &AvoidanceBudget::default()).unwrap() {
            for t in compatible_tuples(&q, &sigmas, &witness.u_tuple).unwrap() {
                assert!(!in_m_e(&curve, 2, &q.to_weierstrass(&t[0]).unwrap()));
            }
        } else {
            panic!("expected a witness");
        }
    }

    #[test]
    fn huge_m_is_rejected() {
        let p = 101;
        let q = model(p);
        let sigmas = vec![vec![form(1, 0, p)]];
        assert!(matches!(
            avoidance_search(&q, &sigmas, 50, &AvoidanceBudget::default()),
            Err(Error::TorsionNotRational { .. })
        ));
    }
}
