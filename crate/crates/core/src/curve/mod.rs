//! Split Weierstrass and quartic models, the group law, torsion, descent and
//! Galois traces.

pub mod descent;
pub mod galois;
pub mod quartic;
pub mod split;
pub mod torsion;

pub use descent::{halve, is_double};
pub use galois::{conjugate_point, descend, lift_curve, lift_point, trace_point};
pub use quartic::{to_quartic, translated_roots, Provenance, QuarticCurve, QuarticPoint};
pub use split::{residue_table, sqrt_table, Point, SplitCurve};
pub use torsion::{torsion_exponent, torsion_order, torsion_subgroup_q};
