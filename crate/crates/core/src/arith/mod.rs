//! Exact arithmetic over `Q`, `F_p` and `Q(sqrt d)`, plus square classes.

pub mod factor;
pub mod field;
pub mod fp;
pub mod quad;
pub mod rational;
pub mod square_class;

pub use field::Field;
pub use fp::{check_modulus, FpElement};
pub use quad::QuadExtElement;
pub use rational::Rational;
pub use square_class::{
    fp_sqrt, fp_square_class, quad_sqrt, rational_sqrt, rational_sqrt_class, squarefree_part, ClassQuotient,
    SquareClass,
};
