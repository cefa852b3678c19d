//! Rational points on elliptic curves with full 2-torsion, built from
//! monochromatic combinatorial lines of a square-class coloring, together
//! with finite-field density experiments and a bounded independence
//! certifier for the points produced.

pub mod arith;
pub mod certify;
pub mod error;

pub use error::{Error, Result};
pub mod curve;
pub mod density;
pub mod forge;
