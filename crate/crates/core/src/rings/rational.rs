//! Arbitrary-precision rational coefficients.
//!
//! Elements are `num::BigRational`, stored in lowest terms with positive
//! denominator (the crate maintains that normalization). The absolute value
//! is the archimedean one, compared exactly via cross multiplication.

use num::{BigInt, BigRational, Signed, Zero};

use super::{big_rational_from_str, big_rational_to_string, Magnitude, Ring, RingDescriptor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rationals;

impl Ring for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::from_integer(1.into())
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.one() / a)
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn eq_elem(&self, a: &BigRational, b: &BigRational) -> bool {
        a == b
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_rational(&self, q: &BigRational) -> Result<BigRational> {
        Ok(q.clone())
    }
    fn supports_abs(&self) -> bool {
        true
    }
    fn abs(&self, a: &BigRational) -> Result<Magnitude> {
        Ok(a.abs())
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Rational
    }
    fn format_elem(&self, a: &BigRational) -> String {
        big_rational_to_string(a)
    }
    fn elem_to_json(&self, a: &BigRational) -> serde_json::Value {
        serde_json::Value::String(big_rational_to_string(a))
    }
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<BigRational> {
        match v {
            serde_json::Value::String(s) => big_rational_from_str(s),
            other => Err(Error::Parse(format!("expected rational string, got {other}"))),
        }
    }
}
