use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::factor::primes_in;
use crate::arith::{FpElement, Rational};
use crate::curve::{Point, SplitCurve};
use crate::error::Result;

use super::avoid::{avoidance_search, AvoidanceBudget, AvoidanceOutcome, AvoidanceWitness};
use super::count::{multiquadratic_count, reduce_model, DensityReport, LinearForm};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub prime_min: u64,
    pub prime_max: u64,
    /// Forms per set.
    pub n: usize,
    /// Number of form sequences for the avoidance search; 0 skips it.
    pub k: usize,
    pub m: u64,
    pub seed: u64,
    /// Candidate tuples per prime for the avoidance search.
    pub budget: u64,
    /// Primes below this are reported as informational.
    pub p_min: u64,
    /// Random form sets counted per prime.
    pub form_sets: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { prime_min: 100, prime_max: 1000, n: 2, k: 0, m: 2, seed: 0, budget: 100_000, p_min: 100, form_sets: 1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeRecord {
    pub p: u64,
    /// Set when the prime was skipped, with the error kind.
    pub skipped: Option<String>,
    pub informational: bool,
    pub reports: Vec<DensityReport>,
    pub witness_status: Option<String>,
    pub witness: Option<AvoidanceWitness>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepAggregate {
    pub primes: usize,
    pub skipped: usize,
    pub instances: usize,
    pub density_pass: usize,
    pub weil_ok: usize,
    pub min_ratio: Option<f64>,
    pub mean_ratio: Option<f64>,
    pub witness_attempts: usize,
    pub witness_found: usize,
    pub witness_rate: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub records: Vec<PrimeRecord>,
    pub aggregate: SweepAggregate,
}

/// Random forms `a u + b` with `a != 0`.
pub fn random_forms(rng: &mut ChaCha8Rng, p: u64, n: usize) -> Vec<LinearForm> {
    (0..n)
        .map(|_| (FpElement::from_u64(rng.gen_range(1..p), p), FpElement::from_u64(rng.gen_range(0..p), p)))
        .collect()
}

/// Per-prime density counts and witness searches over the odd primes in
/// `[prime_min, prime_max]`, in increasing order of `p`.
pub fn prime_sweep(curve: &SplitCurve<Rational>, base: &Point<Rational>, cfg: &SweepConfig) -> Result<SweepReport> {
    let primes: Vec<u64> = primes_in(cfg.prime_min.max(3), cfg.prime_max);
    let records: Vec<PrimeRecord> = primes.par_iter().map(|&p| sweep_prime(curve, base, cfg, p)).collect();
    let aggregate = aggregate(&records);
    Ok(SweepReport { records, aggregate })
}

fn sweep_prime(curve: &SplitCurve<Rational>, base: &Point<Rational>, cfg: &SweepConfig, p: u64) -> PrimeRecord {
    let mut record = PrimeRecord {
        p,
        skipped: None,
        informational: p < cfg.p_min,
        reports: Vec::new(),
        witness_status: None,
        witness: None,
    };
    let quartic = match reduce_model(curve, base, p) {
        Ok(q) => q,
        Err(e) => {
            record.skipped = Some(e.kind().into());
            return record;
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(p);
    for _ in 0..cfg.form_sets {
        let forms = random_forms(&mut rng, p, cfg.n);
        match multiquadratic_count(&quartic, &forms) {
            Ok(r) => record.reports.push(r),
            Err(e) => {
                record.skipped = Some(e.kind().into());
                return record;
            }
        }
    }
    if cfg.k > 0 {
        let sigmas: Vec<Vec<LinearForm>> = (0..cfg.k).map(|_| random_forms(&mut rng, p, cfg.n)).collect();
        let budget = AvoidanceBudget { max_candidates: cfg.budget, seed: cfg.seed };
        match avoidance_search(&quartic, &sigmas, cfg.m, &budget) {
            Ok(AvoidanceOutcome::Found { witness, .. }) => {
                record.witness_status = Some("found".into());
                record.witness = Some(witness);
            }
            Ok(AvoidanceOutcome::NotFound { .. }) => record.witness_status = Some("not_found".into()),
            Err(e) => record.witness_status = Some(e.kind().into()),
        }
    }
    record
}

fn aggregate(records: &[PrimeRecord]) -> SweepAggregate {
    let reports: Vec<&DensityReport> = records.iter().flat_map(|r| &r.reports).collect();
    let ratios: Vec<f64> = reports.iter().map(|r| r.ratio()).collect();
    let attempts = records
        .iter()
        .filter(|r| matches!(r.witness_status.as_deref(), Some("found") | Some("not_found")))
        .count();
    let found = records.iter().filter(|r| r.witness.is_some()).count();
    SweepAggregate {
        primes: records.len(),
        skipped: records.iter().filter(|r| r.skipped.is_some()).count(),
        instances: reports.len(),
        density_pass: reports.iter().filter(|r| r.pass).count(),
        weil_ok: reports.iter().filter(|r| r.weil_ok).count(),
        min_ratio: ratios.iter().cloned().reduce(f64::min),
        mean_ratio: (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64),
        witness_attempts: attempts,
        witness_found: found,
        witness_rate: (attempts > 0).then(|| found as f64 / attempts as f64),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn regression() -> (SplitCurve<Rational>, Point<Rational>) {
        (SplitCurve::new(Rational::from(0), 5.into(), (-5).into()).unwrap(), Point::Affine((-4).into(), 6.into()))
    }

    #[test]
    fn sweep_100_to_1000_passes() {
        let (c, b) = regression();
        let cfg = SweepConfig { prime_min: 100, prime_max: 1000, n: 2, ..SweepConfig::default() };
        let r = prime_sweep(&c, &b, &cfg).unwrap();
        assert_eq!(r.records.len(), primes_in(100, 1000).len());
        assert!(r.records.windows(2).all(|w| w[0].p < w[1].p));
        assert_eq!(r.aggregate.density_pass, r.aggregate.instances);
        assert_eq!(r.aggregate.weil_ok, r.aggregate.instances);
    }

    #[test]
    fn empty_range() {
        let (c, b) = regression();
        let cfg = SweepConfig { prime_min: 24, prime_max: 28, ..SweepConfig::default() };
        let r = prime_sweep(&c, &b, &cfg).unwrap();
        assert!(r.records.is_empty());
        assert_eq!(r.aggregate.instances, 0);
        assert_eq!(r.aggregate.mean_ratio, None);
    }

    #[test]
    fn bad_primes_are_skipped_and_small_ones_flagged() {
        let (c, b) = regression();
        let cfg = SweepConfig { prime_min: 3, prime_max: 13, p_min: 11, ..SweepConfig::default() };
        let r = prime_sweep(&c, &b, &cfg).unwrap();
        let five = r.records.iter().find(|x| x.p == 5).unwrap();
        assert_eq!(five.skipped.as_deref(), Some("BadReductionF"));
        assert!(r.records.iter().find(|x| x.p == 7).unwrap().informational);
        assert!(!r.records.iter().find(|x| x.p == 13).unwrap().informational);
    }
}
