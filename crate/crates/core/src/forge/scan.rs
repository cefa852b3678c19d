use serde::Serialize;

use crate::arith::ClassQuotient;
use crate::curve::QuarticCurve;
use crate::error::{Error, Result};

use super::coloring::ColorField;

/// Which members of the family give a square `f(a_i t + b_i)` at `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow<F> {
    pub t: F,
    pub hits: Vec<usize>,
}

/// For each `t`, the indices `i` with `f(a_i t + b_i)` a square in the
/// working field (zero counts as a square). Over `Q` the working field is
/// `Q(sqrt g : g in quotient)`.
pub fn scan_linear_family<F: ColorField>(
    quartic: &QuarticCurve<F>,
    sigma: &[(F, F)],
    ts: &[F],
    quotient: &ClassQuotient,
) -> Result<Vec<ScanRow<F>>> {
    if sigma.iter().any(|(a, _)| a.is_zero()) {
        return Err(Error::InvalidInput("linear forms need a_i != 0".into()));
    }
    ts.iter()
        .map(|t| {
            let mut hits = Vec::new();
            for (i, (a, b)) in sigma.iter().enumerate() {
                let fu = quartic.f(&a.mul(t).add(b));
                if fu.is_zero() || fu.color(quotient)?.is_trivial() {
                    hits.push(i);
                }
            }
            Ok(ScanRow { t: t.clone(), hits })
        })
        .collect()
}
