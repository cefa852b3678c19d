use std::collections::HashSet;

use crate::arith::FpElement;
use crate::curve::{Point, SplitCurve};
use crate::error::{Error, Result};

/// `mE(F_p) = { mP : P in E(F_p) }` as an explicit set.
#[derive(Clone, Debug)]
pub struct MultipleSubgroup {
    pub m: u64,
    pub p: u64,
    pub group_order: u64,
    members: HashSet<Point<FpElement>>,
}

impl MultipleSubgroup {
    pub fn contains(&self, q: &Point<FpElement>) -> bool {
        self.members.contains(q)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index(&self) -> u64 {
        self.group_order / self.members.len() as u64
    }
}

/// Requires the full `m`-torsion over `F_p`: `m | p - 1`, `m^2 | |E(F_p)|`,
/// and exactly `m^2` points killed by `m`. The result then has exactly
/// `|E(F_p)| / m^2` elements.
pub fn subgroup_m_e(curve: &SplitCurve<FpElement>, m: u64) -> Result<MultipleSubgroup> {
    let p = curve.modulus();
    if m == 0 {
        return Err(Error::InvalidInput("m must be positive".into()));
    }
    let points = curve.points();
    let order = points.len() as u64;
    let not_rational = Error::TorsionNotRational { m, p };
    if (p - 1) % m != 0 || order % (m * m) != 0 {
        return Err(not_rational);
    }
    let multiples: Vec<Point<FpElement>> = points.iter().map(|q| curve.scalar_mul_unchecked(m as i64, q)).collect();
    let torsion = multiples.iter().filter(|q| q.is_infinity()).count() as u64;
    if torsion != m * m {
        return Err(not_rational);
    }
    let members: HashSet<_> = multiples.into_iter().collect();
    if members.len() as u64 * m * m != order {
        return Err(Error::Internal(format!("|{m}E(F_{p})| = {} for |E| = {order}", members.len())));
    }
    Ok(MultipleSubgroup { m, p, group_order: order, members })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(e: [i64; 3], p: u64) -> SplitCurve<FpElement> {
        SplitCurve::new(FpElement::new(e[0], p), FpElement::new(e[1], p), FpElement::new(e[2], p)).unwrap()
    }

    #[test]
    fn x3_minus_x_over_f7() {
        let c = curve([0, 1, -1], 7);
        let g = subgroup_m_e(&c, 2).unwrap();
        assert_eq!(g.group_order, 8);
        assert_eq!(g.len(), 2);
        let whole = subgroup_m_e(&c, 1).unwrap();
        assert_eq!(whole.len(), 8);
        assert_eq!(subgroup_m_e(&c, 4).unwrap_err(), Error::TorsionNotRational { m: 4, p: 7 });
        assert_eq!(subgroup_m_e(&c, 5).unwrap_err(), Error::TorsionNotRational { m: 5, p: 7 });
    }

    #[test]
    fn closed_subgroup_of_index_four() {
        for p in [101u64, 103, 211] {
            let c = curve([0, 5, -5], p);
            let g = subgroup_m_e(&c, 2).unwrap();
            assert!(g.contains(&Point::Infinity));
            assert_eq!(g.index(), 4);
            let members: Vec<_> = g.members.iter().cloned().collect();
            for a in &members {
                assert!(g.contains(&c.neg(a)));
                for b in &members {
                    assert!(g.contains(&c.add_unchecked(a, b)));
                }
            }
        }
    }
}
