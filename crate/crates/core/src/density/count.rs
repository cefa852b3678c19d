use serde::Serialize;

use crate::arith::{FpElement, Rational};
use crate::curve::{residue_table, to_quartic, Point, QuarticCurve, SplitCurve};
use crate::error::{Error, Result};

/// A linear form `u -> a u + b` over `F_p`.
pub type LinearForm = (FpElement, FpElement);

/// Exact count of `u0` in `F_p` with every `f(a_i u0 + b_i)` a nonzero square.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityReport {
    pub p: u64,
    pub n: usize,
    pub count: u64,
    /// `2^-(n+1)`.
    pub epsilon: Rational,
    /// `epsilon * p`.
    pub epsilon_bound: Rational,
    /// `p / 2^n`.
    pub heuristic: Rational,
    /// `count > epsilon * p`.
    pub pass: bool,
    /// `|count - p/2^n| <= 4 * 2^n * sqrt(p)`.
    pub weil_ok: bool,
}

impl DensityReport {
    /// `count / (p / 2^n)`.
    pub fn ratio(&self) -> f64 {
        self.count as f64 * (1u64 << self.n) as f64 / self.p as f64
    }
}

/// The quartic model of `curve` at `base`, reduced mod `p`. Fails with
/// `BadReductionF` when the reduced quartic would not be squarefree, and
/// with `BadPrimeForPoint` when `p` divides a denominator of `base`.
pub fn reduce_model(curve: &SplitCurve<Rational>, base: &Point<Rational>, p: u64) -> Result<QuarticCurve<FpElement>> {
    crate::arith::check_modulus(p)?;
    let cp = curve.reduce_mod(p).map_err(|_| Error::BadReductionF(p))?;
    let bp = match base {
        Point::Infinity => return Err(Error::TwoTorsionBasePoint),
        Point::Affine(x, y) => Point::Affine(
            FpElement::from_rational(x, p).ok_or(Error::BadPrimeForPoint(p))?,
            FpElement::from_rational(y, p).ok_or(Error::BadPrimeForPoint(p))?,
        ),
    };
    to_quartic(&cp, &bp).map_err(|e| match e {
        Error::TwoTorsionBasePoint | Error::SingularTranslate | Error::SingularCurve => Error::BadReductionF(p),
        other => other,
    })
}

/// Counts by a full scan of `F_p`; `p` is read off the quartic.
pub fn multiquadratic_count(quartic: &QuarticCurve<FpElement>, forms: &[LinearForm]) -> Result<DensityReport> {
    let p = quartic.constants()[0].modulus();
    if forms.iter().any(|(a, _)| a.value() == 0) {
        return Err(Error::InvalidInput("linear forms need a_i != 0".into()));
    }
    let qr = residue_table(p);
    let count = (0..p)
        .filter(|&u| {
            let u = FpElement::from_u64(u, p);
            forms.iter().all(|(a, b)| qr[quartic.f(&(*a * u + *b)).value() as usize])
        })
        .count() as u64;
    Ok(report(p, forms.len(), count))
}

fn report(p: u64, n: usize, count: u64) -> DensityReport {
    let two_n = Rational::from(2).pow(n as i32);
    let epsilon = Rational::one() / (Rational::from(2) * &two_n);
    let pr = Rational::from(p as i64);
    let epsilon_bound = &epsilon * &pr;
    let heuristic = &pr / &two_n;
    let dev = Rational::from(count as i64) - &heuristic;
    let weil_ok = &dev * &dev <= Rational::from(16) * &two_n * &two_n * &pr;
    DensityReport {
        p,
        n,
        count,
        pass: Rational::from(count as i64) > epsilon_bound,
        epsilon,
        epsilon_bound,
        heuristic,
        weil_ok,
    }
}
