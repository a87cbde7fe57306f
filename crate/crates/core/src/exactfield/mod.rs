//! Exact scalars and dense linear algebra.
//!
//! Everything in this crate is computed over [`Rational`] except the
//! automorphism verifier, which needs roots of unity and works over
//! [`Cyclotomic`] elements. Both implement [`Field`], and [`Matrix`] is
//! generic over it.

mod cyclotomic;
mod matrix;
mod poly;
mod rational;

pub use cyclotomic::{cyclotomic_polynomial, Cyclotomic, CyclotomicField};
pub use matrix::{all_minors_nonzero, projective_normalize, solve_linear, LinearSolution, Matrix};
pub use poly::QPoly;
pub use rational::Rational;

use std::fmt::Debug;

/// Minimal field interface used by the generic linear algebra.
///
/// Elements of a cyclotomic field carry their modulus, so the additive and
/// multiplicative identities are produced from an existing element.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `None` exactly when `self` is zero.
    fn inv(&self) -> Option<Self>;

    fn div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|i| self.mul(&i))
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.one_like();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}
