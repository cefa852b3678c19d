//! Finite-field experiments: multiquadratic point counts, the subgroups
//! `mE(F_p)`, and avoidance witnesses.

pub mod avoid;
pub mod count;
pub mod group;
pub mod sweep;

pub use avoid::{
    avoidance_search, compatible_tuples, verify_witness, AvoidanceBudget, AvoidanceOutcome, AvoidanceWitness,
};
pub use count::{multiquadratic_count, reduce_model, DensityReport, LinearForm};
pub use group::{subgroup_m_e, MultipleSubgroup};
pub use sweep::{prime_sweep, random_forms, PrimeRecord, SweepAggregate, SweepConfig, SweepReport};
