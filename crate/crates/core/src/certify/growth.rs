use serde::Serialize;

use crate::arith::Rational;
use crate::curve::{Point, SplitCurve};
use crate::error::Result;
use crate::forge::{forge, ForgeBudget, ForgeOutcome, RestartLog};

use super::certificate::{certify, feasible_bound, CertifyBudget, IndependenceCertificate};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub forged_traces: usize,
    pub independent: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ForgeSummary {
    pub restarts: u64,
    pub seed: u64,
    pub outcome: ForgeOutcome,
    pub results: usize,
    /// Present only when the run produced nothing.
    pub log: Option<Vec<RestartLog>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub rows: Vec<GrowthRow>,
    pub independent_set: Vec<Point<Rational>>,
    pub certificate: Option<IndependenceCertificate>,
    pub forge_runs: Vec<ForgeSummary>,
}

/// Runs forge once per budget in `schedule`, collects distinct nonzero
/// traces, and greedily keeps each trace that stays independent of those
/// kept so far. A row is emitted whenever either count changes, starting
/// from `(0, 0)`.
pub fn rank_growth_report(
    curve: &SplitCurve<Rational>,
    base: &Point<Rational>,
    schedule: &[ForgeBudget],
    bound: i64,
    cert_budget: &CertifyBudget,
) -> Result<GrowthReport> {
    let mut traces: Vec<Point<Rational>> = Vec::new();
    let mut kept: Vec<Point<Rational>> = Vec::new();
    let mut certificate = None;
    let mut rows = vec![GrowthRow { forged_traces: 0, independent: 0 }];
    let mut forge_runs = Vec::with_capacity(schedule.len());
    for budget in schedule {
        let report = forge(curve, base, budget)?;
        forge_runs.push(ForgeSummary {
            restarts: report.restarts,
            seed: budget.seed,
            outcome: report.outcome.clone(),
            results: report.results.len(),
            log: report.is_empty().then(|| report.log.clone()),
        });
        for r in &report.results {
            let t = r.traced.clone();
            if t.is_infinity() || traces.contains(&t) || traces.contains(&curve.neg(&t)) {
                continue;
            }
            traces.push(t.clone());
            let mut trial = kept.clone();
            trial.push(t.clone());
            let b = feasible_bound(trial.len(), bound, cert_budget);
            if b < 1 {
                continue;
            }
            let cert = certify(curve, &trial, b, cert_budget)?;
            if cert.is_independent() {
                kept = trial;
                certificate = Some(cert);
            }
        }
        let row = GrowthRow { forged_traces: traces.len(), independent: kept.len() };
        if rows.last() != Some(&row) {
            rows.push(row);
        }
    }
    Ok(GrowthReport { rows, independent_set: kept, certificate, forge_runs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_schedule_is_a_single_zero_row() {
        let c = SplitCurve::new(Rational::from(0), 5.into(), (-5).into()).unwrap();
        let r = rank_growth_report(&c, &Point::Affine((-4).into(), 6.into()), &[], 100, &CertifyBudget::default())
            .unwrap();
        assert_eq!(r.rows, vec![GrowthRow { forged_traces: 0, independent: 0 }]);
    }

    #[test]
    fn rank_zero_curve_stays_at_zero() {
        // y^2 = (x - 1)(x - 2)(x + 2) has E(Q) of order 8 and (0, 2) has order 4.
        let c = SplitCurve::new(Rational::from(1), 2.into(), (-2).into()).unwrap();
        let base = Point::Affine(0.into(), 2.into());
        let budget = ForgeBudget { restarts: 60, max_n: 4, seed: 3, ..ForgeBudget::default() };
        let r = rank_growth_report(&c, &base, &[budget], 50, &CertifyBudget::default()).unwrap();
        assert!(r.rows.iter().all(|row| row.independent == 0));
        assert!(r.independent_set.is_empty());
    }

    #[test]
    fn regression_curve_reaches_one() {
        let c = SplitCurve::new(Rational::from(0), 5.into(), (-5).into()).unwrap();
        let base = Point::Affine((-4).into(), 6.into());
        let budget = ForgeBudget { restarts: 4000, max_n: 1, seed: 1, ..ForgeBudget::default() };
        let r = rank_growth_report(&c, &base, &[budget], 1000, &CertifyBudget::default()).unwrap();
        assert!(r.rows.last().unwrap().independent >= 1);
        let rows = &r.rows;
        assert!(rows.windows(2).all(|w| w[0].forged_traces <= w[1].forged_traces && w[0].independent <= w[1].independent));
    }
}
