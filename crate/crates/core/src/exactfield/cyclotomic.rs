//! Cyclotomic fields Q(ζ_k) as residues modulo the k-th cyclotomic polynomial.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Field, QPoly, Rational};
use crate::error::Error;

/// Coefficients of the monic k-th cyclotomic polynomial, ascending degree.
///
/// Computed by dividing `x^k - 1` by `Φ_e` for every proper divisor `e` of
/// `k`.
pub fn cyclotomic_polynomial(k: u32) -> Vec<BigInt> {
    assert!(k >= 1, "cyclotomic polynomial needs k >= 1");
    let mut table: Vec<Option<Vec<BigInt>>> = vec![None; k as usize + 1];
    phi_rec(k, &mut table)
}

fn phi_rec(k: u32, table: &mut [Option<Vec<BigInt>>]) -> Vec<BigInt> {
    if let Some(p) = &table[k as usize] {
        return p.clone();
    }
    let mut num = vec![BigInt::zero(); k as usize + 1];
    num[0] = BigInt::from(-1);
    num[k as usize] = BigInt::one();
    for e in 1..k {
        if k.is_multiple_of(e) {
            let div = phi_rec(e, table);
            num = exact_monic_div(&num, &div);
        }
    }
    table[k as usize] = Some(num.clone());
    num
}

fn exact_monic_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for shift in (0..quot.len()).rev() {
        let c = rem[shift + dd].clone();
        for (i, b) in den.iter().enumerate() {
            rem[shift + i] -= &c * b;
        }
        quot[shift] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// The field Q(ζ_k).
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    order: u32,
    modulus: QPoly,
}

impl CyclotomicField {
    pub fn new(order: u32) -> Result<Arc<Self>, Error> {
        if order == 0 {
            return Err(Error::InvalidInput(
                "cyclotomic order must be positive".into(),
            ));
        }
        let modulus = QPoly::new(
            cyclotomic_polynomial(order)
                .into_iter()
                .map(Rational::from)
                .collect(),
        );
        Ok(Arc::new(CyclotomicField { order, modulus }))
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Degree of the field over Q, i.e. Euler's totient of the order.
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn element(self: &Arc<Self>, poly: QPoly) -> Cyclotomic {
        let (_, rem) = poly.div_rem(&self.modulus);
        Cyclotomic {
            field: Arc::clone(self),
            value: rem,
        }
    }

    pub fn rational(self: &Arc<Self>, r: Rational) -> Cyclotomic {
        self.element(QPoly::constant(r))
    }

    pub fn zero(self: &Arc<Self>) -> Cyclotomic {
        self.element(QPoly::zero())
    }

    pub fn one(self: &Arc<Self>) -> Cyclotomic {
        self.rational(Rational::one())
    }

    /// The primitive root ζ = residue of x.
    pub fn zeta(self: &Arc<Self>) -> Cyclotomic {
        self.element(QPoly::new(vec![Rational::zero(), Rational::one()]))
    }

    pub fn zeta_pow(self: &Arc<Self>, e: i64) -> Cyclotomic {
        let e = e.rem_euclid(self.order as i64) as u64;
        self.zeta().pow(e)
    }
}

/// An element of Q(ζ_k) stored as its reduced residue.
#[derive(Clone)]
pub struct Cyclotomic {
    field: Arc<CyclotomicField>,
    value: QPoly,
}

impl Cyclotomic {
    pub fn order(&self) -> u32 {
        self.field.order
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    /// Coefficients padded to the field degree.
    pub fn coefficients(&self) -> Vec<Rational> {
        let mut c = self.value.coeffs().to_vec();
        c.resize(self.field.degree(), Rational::zero());
        c
    }

    /// The rational value, when the element lies in Q.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.value.degree() {
            None => Some(Rational::zero()),
            Some(0) => Some(self.value.coeffs()[0].clone()),
            _ => None,
        }
    }

    pub fn from_coefficients(order: u32, coeffs: Vec<Rational>) -> Result<Self, Error> {
        let field = CyclotomicField::new(order)?;
        if coeffs.len() > field.degree() {
            return Err(Error::InvalidInput(format!(
                "cyclotomic scalar of order {order} takes at most {} coefficients",
                field.degree()
            )));
        }
        Ok(field.element(QPoly::new(coeffs)))
    }

    /// The same number inside Q(ζ_m) for a multiple `m` of the order, using
    /// `ζ_k = ζ_m^{m/k}`.
    pub fn embed(&self, order: u32) -> Result<Self, Error> {
        if order == 0 || !order.is_multiple_of(self.order()) {
            return Err(Error::InvalidInput(format!(
                "cannot embed Q(zeta_{}) into Q(zeta_{order})",
                self.order()
            )));
        }
        let target = CyclotomicField::new(order)?;
        let step = (order / self.order()) as usize;
        let mut coeffs =
            vec![Rational::zero(); self.value.coeffs().len().saturating_sub(1) * step + 1];
        for (i, c) in self.value.coeffs().iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        Ok(target.element(QPoly::new(coeffs)))
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.field.order, other.field.order,
            "mixing cyclotomic fields of different order"
        );
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.field.order == other.field.order && self.value == other.value
    }
}

impl Eq for Cyclotomic {}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.value.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.value.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*z{}", self.field.order)?,
                _ => write!(f, "({c})*z{}^{i}", self.field.order)?,
            }
        }
        Ok(())
    }
}

impl Field for Cyclotomic {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }

    fn one_like(&self) -> Self {
        self.field.one()
    }

    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        Cyclotomic {
            field: Arc::clone(&self.field),
            value: self.value.add(&other.value),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.same_field(other);
        Cyclotomic {
            field: Arc::clone(&self.field),
            value: self.value.sub(&other.value),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        self.field.element(self.value.mul(&other.value))
    }

    fn neg(&self) -> Self {
        Cyclotomic {
            field: Arc::clone(&self.field),
            value: self.value.scale(&Rational::from(-1)),
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.value.is_zero() {
            return None;
        }
        // Φ_k is irreducible, so gcd(value, Φ_k) = 1 and s*value ≡ 1.
        let (g, s, _) = self.value.ext_gcd(&self.field.modulus);
        debug_assert_eq!(g.degree(), Some(0));
        Some(self.field.element(s))
    }
}

#[derive(Serialize, Deserialize)]
struct CyclotomicRepr {
    order: u32,
    coeffs: Vec<Rational>,
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        CyclotomicRepr {
            order: self.order(),
            coeffs: self.coefficients(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Cyclotomic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = CyclotomicRepr::deserialize(deserializer)?;
        Cyclotomic::from_coefficients(repr.order, repr.coeffs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(2), ints(&[1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
        assert_eq!(cyclotomic_polynomial(12), ints(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn phi_105_has_a_coefficient_minus_two() {
        let p = cyclotomic_polynomial(105);
        assert_eq!(p.len(), 49);
        assert!(p.contains(&BigInt::from(-2)));
    }

    #[test]
    fn product_over_divisors_is_x_k_minus_one() {
        for k in 1..=40u32 {
            let mut prod = QPoly::constant(Rational::one());
            for e in (1..=k).filter(|e| k % e == 0) {
                let phi = QPoly::new(
                    cyclotomic_polynomial(e)
                        .into_iter()
                        .map(Rational::from)
                        .collect(),
                );
                prod = prod.mul(&phi);
            }
            let mut expect = vec![Rational::zero(); k as usize + 1];
            expect[0] = Rational::from(-1);
            expect[k as usize] = Rational::one();
            assert_eq!(prod, QPoly::new(expect), "k = {k}");
        }
    }

    #[test]
    fn zeta_is_a_primitive_root() {
        for k in 1..=30u32 {
            let f = CyclotomicField::new(k).unwrap();
            let z = f.zeta();
            assert_eq!(z.pow(k as u64), f.one(), "k = {k}");
            for e in 1..k {
                assert_ne!(z.pow(e as u64), f.one(), "k = {k}, e = {e}");
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let f = CyclotomicField::new(12).unwrap();
        let a = f.zeta().add(&f.rational(Rational::from(3)));
        let ai = a.inv().unwrap();
        assert_eq!(a.mul(&ai), f.one());
        assert!(f.zero().inv().is_none());
    }

    #[test]
    fn embedding_respects_roots_of_unity() {
        let f4 = CyclotomicField::new(4).unwrap();
        let f12 = CyclotomicField::new(12).unwrap();
        assert_eq!(f4.zeta().embed(12).unwrap(), f12.zeta_pow(3));
        let q = f4.rational(Rational::from(5));
        assert_eq!(q.embed(12).unwrap(), f12.rational(Rational::from(5)));
        assert!(f4.zeta().embed(6).is_err());
    }

    #[test]
    fn sixth_root_relation() {
        // ζ_6 satisfies ζ^2 = ζ - 1.
        let f = CyclotomicField::new(6).unwrap();
        let z = f.zeta();
        assert_eq!(z.mul(&z), z.sub(&f.one()));
    }
}
