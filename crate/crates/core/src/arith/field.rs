use std::fmt::{Debug, Display};
use std::hash::Hash;

/// Minimal exact field interface used by the curve and search code.
///
/// Elements carry whatever context they need (the modulus for `F_p`, the
/// radicand for `Q(sqrt d)`), so constants are produced from an existing
/// element with the `*_like` constructors.
pub trait Field: Clone + PartialEq + Eq + Hash + Debug + Display + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, n: i64) -> Self;
    fn is_zero(&self) -> bool;

    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn square(&self) -> Self {
        self.mul(self)
    }

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}
