//! p-adic integers at fixed absolute precision.
//!
//! An element is a residue mod p^prec together with the number `prec` of
//! certified digits (1 <= prec <= M, the ring precision). Arithmetic
//! propagates precision pessimistically:
//!
//! - add/mul: min of the operand precisions;
//! - division by an element of valuation v: min of the precisions minus v,
//!   failing loudly (`PrecisionExhausted`) when no digit survives, and
//!   `LeavesIntegerRing` when the quotient is not a p-adic integer.
//!
//! A residue of zero means "zero to the carried precision": the valuation is
//! only bounded below by `prec`, so such elements cannot be inverted or given
//! an absolute value.

use num::bigint::Sign;
use num::{BigInt, BigRational, BigUint, Integer, One, Signed, Zero};

use super::{Magnitude, Ring, RingDescriptor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdicRing {
    p: u64,
    precision: u32,
}

/// A p-adic integer known modulo p^prec.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PAdic {
    pub residue: BigUint,
    pub prec: u32,
}

impl PAdicRing {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if !is_prime_u64(p) {
            return Err(Error::Parameter(format!("{p} is not prime")));
        }
        if precision == 0 {
            return Err(Error::Parameter("p-adic precision must be at least 1".into()));
        }
        Ok(PAdicRing { p, precision })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }
    pub fn precision(&self) -> u32 {
        self.precision
    }

    fn modulus(&self, prec: u32) -> BigUint {
        BigUint::from(self.p).pow(prec)
    }

    fn make(&self, value: BigInt, prec: u32) -> PAdic {
        let m = BigInt::from(self.modulus(prec));
        let mut r = value % &m;
        if r.sign() == Sign::Minus {
            r += &m;
        }
        PAdic { residue: r.to_biguint().expect("reduced residue is nonnegative"), prec }
    }

    /// Exact valuation of the residue, or `None` when the residue vanishes
    /// (valuation only known to be >= prec).
    pub fn valuation(&self, a: &PAdic) -> Option<u32> {
        if a.residue.is_zero() {
            return None;
        }
        let p = BigUint::from(self.p);
        let mut v = 0u32;
        let mut r = a.residue.clone();
        while (&r % &p).is_zero() {
            r /= &p;
            v += 1;
        }
        Some(v)
    }

    /// Divide out p^v and return the unit part at reduced precision.
    fn shift_down(&self, a: &PAdic, v: u32) -> Result<PAdic> {
        if v == 0 {
            return Ok(a.clone());
        }
        if a.prec <= v {
            return Err(Error::PrecisionExhausted(format!(
                "shifting by p^{v} leaves no certified digits (prec {})",
                a.prec
            )));
        }
        let pv = BigUint::from(self.p).pow(v);
        if !(&a.residue % &pv).is_zero() {
            return Err(Error::LeavesIntegerRing(v));
        }
        Ok(PAdic { residue: &a.residue / pv, prec: a.prec - v })
    }

    /// Inverse of a unit residue mod p^prec via the extended Euclid algorithm.
    fn unit_inverse(&self, a: &PAdic) -> Result<PAdic> {
        let m = BigInt::from(self.modulus(a.prec));
        let x = BigInt::from(a.residue.clone());
        let ext = x.extended_gcd(&m);
        if !ext.gcd.is_one() {
            return Err(Error::NotAUnit(format!("residue {} mod {}^{}", a.residue, self.p, a.prec)));
        }
        Ok(self.make(ext.x, a.prec))
    }

    /// Division with the spec's precision rule: prec = min(prec_a, prec_b) - v(b).
    pub fn div_tracked(&self, a: &PAdic, b: &PAdic) -> Result<PAdic> {
        if b.residue.is_zero() {
            return Err(Error::PrecisionExhausted(format!(
                "divisor is zero to precision {}; no digits of the quotient are certified",
                b.prec
            )));
        }
        let v = self.valuation(b).expect("nonzero residue has a valuation");
        let prec = a.prec.min(b.prec);
        if prec <= v {
            return Err(Error::PrecisionExhausted(format!(
                "division by valuation-{v} element destroys all {prec} certified digits"
            )));
        }
        let num = self.shift_down(&PAdic { residue: a.residue.clone(), prec: a.prec }, v)?;
        let den = self.shift_down(b, v)?;
        let den_inv = self.unit_inverse(&PAdic { residue: den.residue, prec: prec - v })?;
        let out_prec = prec - v;
        Ok(self.make(
            BigInt::from(num.residue) * BigInt::from(den_inv.residue),
            out_prec.min(num.prec),
        ))
    }
}

impl Ring for PAdicRing {
    type Elem = PAdic;

    fn zero(&self) -> PAdic {
        PAdic { residue: BigUint::zero(), prec: self.precision }
    }
    fn one(&self) -> PAdic {
        PAdic { residue: BigUint::one(), prec: self.precision }
    }
    fn add(&self, a: &PAdic, b: &PAdic) -> PAdic {
        let prec = a.prec.min(b.prec);
        self.make(BigInt::from(a.residue.clone()) + BigInt::from(b.residue.clone()), prec)
    }
    fn neg(&self, a: &PAdic) -> PAdic {
        self.make(-BigInt::from(a.residue.clone()), a.prec)
    }
    fn mul(&self, a: &PAdic, b: &PAdic) -> PAdic {
        let prec = a.prec.min(b.prec);
        self.make(BigInt::from(a.residue.clone()) * BigInt::from(b.residue.clone()), prec)
    }
    fn inv(&self, a: &PAdic) -> Result<PAdic> {
        if a.residue.is_zero() {
            return Err(Error::PrecisionExhausted(format!(
                "element is zero to precision {}; cannot certify an inverse",
                a.prec
            )));
        }
        let v = self.valuation(a).expect("nonzero residue");
        if v > 0 {
            return Err(Error::LeavesIntegerRing(v));
        }
        self.unit_inverse(a)
    }
    fn div(&self, a: &PAdic, b: &PAdic) -> Result<PAdic> {
        self.div_tracked(a, b)
    }
    fn is_zero(&self, a: &PAdic) -> bool {
        a.residue.is_zero()
    }
    fn eq_elem(&self, a: &PAdic, b: &PAdic) -> bool {
        let prec = a.prec.min(b.prec);
        let m = self.modulus(prec);
        &a.residue % &m == &b.residue % &m
    }
    fn from_i64(&self, n: i64) -> PAdic {
        self.make(BigInt::from(n), self.precision)
    }
    fn from_rational(&self, q: &BigRational) -> Result<PAdic> {
        let p = BigInt::from(self.p);
        let mut den = q.denom().abs();
        let mut vden = 0u32;
        while !den.is_zero() && (&den % &p).is_zero() {
            den /= &p;
            vden += 1;
        }
        if vden > 0 {
            let mut num = q.numer().abs();
            let mut vnum = 0u32;
            while !num.is_zero() && vnum < vden && (&num % &p).is_zero() {
                num /= &p;
                vnum += 1;
            }
            if vnum < vden {
                return Err(Error::LeavesIntegerRing(vden - vnum));
            }
        }
        let num = self.make(q.numer().clone(), self.precision);
        let den = self.make(q.denom().clone(), self.precision);
        self.div_tracked(&num, &den)
    }
    fn supports_abs(&self) -> bool {
        true
    }
    fn abs(&self, a: &PAdic) -> Result<Magnitude> {
        match self.valuation(a) {
            Some(v) => Ok(BigRational::new(BigInt::one(), BigInt::from(self.p).pow(v))),
            None => Err(Error::PrecisionExhausted(format!(
                "element is zero to precision {}; |x| is only bounded by p^-{}",
                a.prec, a.prec
            ))),
        }
    }
    fn is_exact(&self) -> bool {
        false
    }
    fn abs_upper(&self, a: &PAdic) -> Result<Magnitude> {
        match self.valuation(a) {
            Some(v) => Ok(BigRational::new(BigInt::one(), BigInt::from(self.p).pow(v))),
            None => Ok(BigRational::new(BigInt::one(), BigInt::from(self.p).pow(a.prec))),
        }
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::Padic { p: self.p, precision: self.precision }
    }
    fn format_elem(&self, a: &PAdic) -> String {
        format!("{} + O({}^{})", a.residue, self.p, a.prec)
    }
    fn elem_to_json(&self, a: &PAdic) -> serde_json::Value {
        serde_json::json!({
            "p": self.p,
            "precision": a.prec,
            "digits": digits_string(self.p, &a.residue, a.prec),
        })
    }
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<PAdic> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("expected p-adic object".into()))?;
        let p = obj.get("p").and_then(|x| x.as_u64()).ok_or_else(|| Error::Parse("missing p".into()))?;
        if p != self.p {
            return Err(Error::MixedRings(format!("element has p={p}, ring has p={}", self.p)));
        }
        let prec = obj
            .get("precision")
            .and_then(|x| x.as_u64())
            .ok_or_else(|| Error::Parse("missing precision".into()))? as u32;
        if prec == 0 || prec > self.precision {
            return Err(Error::Parse(format!(
                "element precision {prec} outside 1..={}",
                self.precision
            )));
        }
        let digits = obj
            .get("digits")
            .and_then(|x| x.as_str())
            .ok_or_else(|| Error::Parse("missing digits".into()))?;
        let residue = digits_parse(self.p, digits)?;
        if residue >= self.modulus(prec) {
            return Err(Error::Parse("digit string longer than stated precision".into()));
        }
        Ok(PAdic { residue, prec })
    }
}

/// Little-endian base-p digit string, always exactly `prec` digits.
/// Digits use 0-9a-z for p <= 36 and dot-separated decimal otherwise.
fn digits_string(p: u64, residue: &BigUint, prec: u32) -> String {
    let p_big = BigUint::from(p);
    let mut digits = Vec::with_capacity(prec as usize);
    let mut r = residue.clone();
    for _ in 0..prec {
        let d = (&r % &p_big).to_u64_digits().first().copied().unwrap_or(0);
        digits.push(d);
        r /= &p_big;
    }
    if p <= 36 {
        digits
            .iter()
            .map(|&d| char::from_digit(d as u32, 36).expect("digit below base"))
            .collect()
    } else {
        digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(".")
    }
}

fn digits_parse(p: u64, s: &str) -> Result<BigUint> {
    let digits: Vec<u64> = if p <= 36 {
        s.chars()
            .map(|c| {
                c.to_digit(36)
                    .map(u64::from)
                    .ok_or_else(|| Error::Parse(format!("bad digit `{c}`")))
            })
            .collect::<Result<_>>()?
    } else {
        s.split('.')
            .map(|d| d.parse::<u64>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?
    };
    let p_big = BigUint::from(p);
    let mut value = BigUint::zero();
    for &d in digits.iter().rev() {
        if d >= p {
            return Err(Error::Parse(format!("digit {d} not below base {p}")));
        }
        value = value * &p_big + BigUint::from(d);
    }
    Ok(value)
}

/// Deterministic Miller-Rabin for u64.
pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut base: u64, mut exp: u64| {
        let mut acc = 1u64;
        base %= n;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = mul(acc, base);
            }
            base = mul(base, base);
            exp >>= 1;
        }
        acc
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
