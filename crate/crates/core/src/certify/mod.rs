//! Bounded independence certificates for points of `E(Q)` modulo torsion,
//! via reduction at good primes.
//!
//! A certificate `Independent(B)` excludes every relation with coefficients
//! up to `B`; it says nothing about larger coefficients.

pub mod certificate;
pub mod growth;
pub mod relations;

pub use certificate::{
    certify, feasible_bound, is_torsion_combination, CertifyBudget, IndependenceCertificate, PrimeIndex, Verdict,
};
pub use growth::{rank_growth_report, ForgeSummary, GrowthReport, GrowthRow};
pub use relations::{reduce_point, reduction_profile, relation_search_mod_p, ReductionProfile, RelationSet};
