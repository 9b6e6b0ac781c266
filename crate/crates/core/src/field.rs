//! Exact coefficient fields: the rationals and prime fields GF(p).
//!
//! Every scalar in the library is exact. A [`Field`] value is a lightweight
//! field descriptor (zero-sized for `Rationals`, the modulus for
//! [`PrimeField`]); elements are plain values so that matrices over a runtime
//! choice of field stay cheap to store.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),
    #[error("denominator {0} is zero in GF({1})")]
    ZeroDenominator(u64, u64),
}

/// A computable field. Implementors are small copyable descriptors; all
/// arithmetic goes through `&self` so GF(p) can carry its modulus.
pub trait Field: Clone + Copy + PartialEq + Eq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;

    /// Multiplicative inverse. Panics on zero; callers guard with `is_zero`.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn from_int(&self, n: i64) -> Self::Elem;

    /// `num/den` as a field element; fails when `den` vanishes in the field.
    fn from_ratio(&self, num: i64, den: u64) -> Result<Self::Elem, FieldError>;

    /// Rescale a sparse row in place to a canonical primitive form, returning
    /// nothing of semantic significance: the row must keep the same span.
    /// Over the rationals this clears denominators and divides by the content,
    /// which keeps Gaussian elimination fraction-free between pivot steps.
    fn normalize_row(&self, _row: &mut [(u32, Self::Elem)]) {}
}

/// The field of rational numbers with arbitrary-precision values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_int(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_ratio(&self, num: i64, den: u64) -> Result<BigRational, FieldError> {
        assert!(den > 0, "denominator must be positive");
        Ok(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    fn normalize_row(&self, row: &mut [(u32, BigRational)]) {
        if row.is_empty() {
            return;
        }
        let mut denom_lcm = BigInt::one();
        for (_, v) in row.iter() {
            denom_lcm = denom_lcm.lcm(v.denom());
        }
        let mut content = BigInt::zero();
        for (_, v) in row.iter() {
            let scaled = v.numer() * (&denom_lcm / v.denom());
            content = content.gcd(&scaled);
        }
        if content.is_zero() {
            return;
        }
        // Sign convention: leading entry positive.
        let lead = row[0].1.numer() * (&denom_lcm / row[0].1.denom());
        if lead.is_negative() {
            content = -content;
        }
        let factor = BigRational::new(denom_lcm, content);
        for (_, v) in row.iter_mut() {
            *v = &*v * &factor;
        }
    }
}

/// The prime field GF(p); elements are representatives in `[0, p-1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn reduce_i64(&self, n: i64) -> u64 {
        let m = n.rem_euclid(self.p as i64);
        m as u64
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.p
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.p
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero in GF({})", self.p);
        // Extended Euclid on (a, p).
        let (mut t, mut new_t): (i128, i128) = (0, 1);
        let (mut r, mut new_r): (i128, i128) = (self.p as i128, *a as i128);
        while new_r != 0 {
            let q = r / new_r;
            (t, new_t) = (new_t, t - q * new_t);
            (r, new_r) = (new_r, r - q * new_r);
        }
        debug_assert_eq!(r, 1);
        t.rem_euclid(self.p as i128) as u64
    }
    fn from_int(&self, n: i64) -> u64 {
        self.reduce_i64(n)
    }
    fn from_ratio(&self, num: i64, den: u64) -> Result<u64, FieldError> {
        let d = den % self.p;
        if d == 0 {
            return Err(FieldError::ZeroDenominator(den, self.p));
        }
        Ok(self.mul(&self.reduce_i64(num), &self.inv(&d)))
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_rejects_composites() {
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(91).is_err());
        assert!(PrimeField::new(2).is_ok());
        assert!(PrimeField::new(97).is_ok());
    }

    #[test]
    fn gf_inverse_roundtrip() {
        let f = PrimeField::new(10007).unwrap();
        for a in [1u64, 2, 3, 5000, 10006] {
            let inv = f.inv(&a);
            assert_eq!(f.mul(&a, &inv), 1);
        }
    }

    #[test]
    fn gf_ratio_reduces() {
        let f = PrimeField::new(7).unwrap();
        // 1/2 = 4 mod 7
        assert_eq!(f.from_ratio(1, 2).unwrap(), 4);
        assert!(f.from_ratio(1, 7).is_err());
        assert_eq!(f.from_int(-1), 6);
    }

    #[test]
    fn rational_row_normalization_keeps_span_and_is_primitive() {
        let f = Rationals;
        let half = f.from_ratio(1, 2).unwrap();
        let third = f.from_ratio(-1, 3).unwrap();
        let mut row = vec![(0u32, half), (3u32, third)];
        f.normalize_row(&mut row);
        // 1/2, -1/3 scaled by 6 -> 3, -2 with content 1, leading positive.
        assert_eq!(row[0].1, f.from_int(3));
        assert_eq!(row[1].1, f.from_int(-2));
    }
}
