//! Coefficient rings: exact arithmetic pluggable under every series operation.
//!
//! Three backends implement the [`Ring`] trait:
//! - [`Rationals`]: arbitrary-precision rationals, archimedean absolute value;
//! - [`PAdicRing`]: p-adic integers at fixed absolute precision, ultrametric
//!   absolute value, honest digit tracking;
//! - [`RatFunField`]: rational functions in finitely many indeterminates over
//!   the rationals (no absolute value).
//!
//! Backends are selected at runtime by a [`RingDescriptor`] parsed from a
//! CLI/JSON descriptor string; [`dispatch`] instantiates generic code for the
//! selected backend.

pub mod mpoly;
pub mod padic;
pub mod ratfun;
pub mod rational;

use std::fmt;

use num::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use padic::{PAdic, PAdicRing};
pub use ratfun::{RatFun, RatFunField};
pub use rational::Rationals;

/// Exact magnitude of a ring element: a nonnegative rational.
///
/// Archimedean magnitudes are |p/q|; p-adic magnitudes are p^(-v). Both are
/// exact rationals, so filtration predicates compare them with cross
/// multiplication, never floating point.
pub type Magnitude = BigRational;

/// Exact arithmetic contract every coefficient backend satisfies.
///
/// A `Ring` value is a lightweight descriptor (it may carry parameters such
/// as the prime and precision); elements are plain data. All operations are
/// pure, and values are `Send + Sync`.
pub trait Ring: Clone + PartialEq + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Errors on zero and, for p-adic elements, on
    /// positive valuation (the result would leave the integer subring).
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    /// True when the element is not certified nonzero. For exact rings this
    /// is plain equality with zero; for p-adic elements it means the residue
    /// vanishes at the carried precision.
    fn is_zero(&self, a: &Self::Elem) -> bool;

    /// Semantic equality: exact for rationals and rational functions,
    /// congruence at the minimum carried precision for p-adic elements.
    fn eq_elem(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    fn from_i64(&self, n: i64) -> Self::Elem;
    /// Inject an exact rational. Errors when the denominator is not a unit
    /// (p-adic case with p | denominator).
    fn from_rational(&self, q: &BigRational) -> Result<Self::Elem>;

    /// Whether [`Ring::abs`] is defined for this ring.
    fn supports_abs(&self) -> bool;
    /// Exact absolute value as a nonnegative rational magnitude.
    fn abs(&self, a: &Self::Elem) -> Result<Magnitude>;

    /// True when `is_zero` is an exact statement (rationals, rational
    /// functions). The p-adic backend returns false: a vanishing residue
    /// only means "zero to the carried precision".
    fn is_exact(&self) -> bool {
        true
    }

    /// Certified upper bound on |a|. Equal to `abs` wherever that is exact;
    /// the p-adic backend overrides it so that residues vanishing at
    /// precision k report the sound bound p^-k instead of failing.
    fn abs_upper(&self, a: &Self::Elem) -> Result<Magnitude> {
        self.abs(a)
    }

    fn descriptor(&self) -> RingDescriptor;
    fn format_elem(&self, a: &Self::Elem) -> String;
    fn elem_to_json(&self, a: &Self::Elem) -> serde_json::Value;
    fn elem_from_json(&self, v: &serde_json::Value) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }
    fn is_one(&self, a: &Self::Elem) -> bool {
        self.eq_elem(a, &self.one())
    }
    /// a^n for signed n (n < 0 inverts first).
    fn pow(&self, a: &Self::Elem, n: i64) -> Result<Self::Elem> {
        let base = if n < 0 { self.inv(a)? } else { a.clone() };
        let mut out = self.one();
        for _ in 0..n.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        Ok(out)
    }
}

/// Serializable name of a ring backend plus its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RingDescriptor {
    Rational,
    Padic { p: u64, precision: u32 },
    RationalFunction { vars: Vec<String> },
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Rational => write!(f, "rational"),
            RingDescriptor::Padic { p, precision } => write!(f, "padic:p={p},prec={precision}"),
            RingDescriptor::RationalFunction { vars } => write!(f, "ratfun:{}", vars.join(",")),
        }
    }
}

impl RingDescriptor {
    /// Parse the CLI descriptor syntax: `rational`, `padic:p=5,prec=20`,
    /// `ratfun:c1,c2`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rational" {
            return Ok(RingDescriptor::Rational);
        }
        if let Some(rest) = s.strip_prefix("padic:") {
            let mut p = None;
            let mut prec = None;
            for part in rest.split(',') {
                let (key, value) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("bad padic parameter `{part}`")))?;
                match key.trim() {
                    "p" => p = Some(value.trim().parse::<u64>().map_err(|e| Error::Parse(e.to_string()))?),
                    "prec" | "precision" => {
                        prec = Some(value.trim().parse::<u32>().map_err(|e| Error::Parse(e.to_string()))?)
                    }
                    other => return Err(Error::Parse(format!("unknown padic parameter `{other}`"))),
                }
            }
            let p = p.ok_or_else(|| Error::Parse("padic descriptor needs p=<prime>".into()))?;
            let precision = prec.ok_or_else(|| Error::Parse("padic descriptor needs prec=<M>".into()))?;
            return Ok(RingDescriptor::Padic { p, precision });
        }
        if let Some(rest) = s.strip_prefix("ratfun:") {
            let vars: Vec<String> = rest
                .split(',')
                .map(|v| v.trim().to_string())
                .filter(|v| !v.is_empty())
                .collect();
            if vars.is_empty() {
                return Err(Error::Parse("ratfun descriptor needs at least one variable".into()));
            }
            return Ok(RingDescriptor::RationalFunction { vars });
        }
        Err(Error::Parse(format!(
            "unknown ring descriptor `{s}` (expected rational | padic:p=..,prec=.. | ratfun:v1,v2,..)"
        )))
    }

    /// Names of the registered backends, for CLI help and listings.
    pub fn registry() -> &'static [(&'static str, &'static str)] {
        &[
            ("rational", "arbitrary-precision rationals with archimedean absolute value"),
            ("padic:p=<p>,prec=<M>", "p-adic integers mod p^M with ultrametric absolute value"),
            ("ratfun:<v1>,<v2>,..", "rational functions over Q in the listed indeterminates"),
        ]
    }
}

/// Visitor used to run ring-generic code against a runtime-selected backend.
pub trait RingVisitor {
    type Out;
    fn visit<R: Ring>(self, ring: R) -> Self::Out;
}

/// Instantiate `visitor` with the backend named by `descriptor`.
pub fn dispatch<V: RingVisitor>(descriptor: &RingDescriptor, visitor: V) -> Result<V::Out> {
    match descriptor {
        RingDescriptor::Rational => Ok(visitor.visit(Rationals)),
        RingDescriptor::Padic { p, precision } => {
            let ring = PAdicRing::new(*p, *precision)?;
            Ok(visitor.visit(ring))
        }
        RingDescriptor::RationalFunction { vars } => {
            let ring = RatFunField::new(vars.clone())?;
            Ok(visitor.visit(ring))
        }
    }
}

/// Compare an exact magnitude against the rational power `c^k`, `k >= 0`.
pub fn magnitude_le_pow(m: &Magnitude, c: &BigRational, k: u32) -> bool {
    let mut pow = BigRational::from_integer(1.into());
    for _ in 0..k {
        pow *= c;
    }
    *m <= pow
}

pub(crate) fn big_rational_from_str(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: num::BigInt = num.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let d: num::BigInt = den.parse().map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    if d == num::BigInt::from(0) {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(n, d))
}

/// Canonical `p/q` string (lowest terms, positive denominator, `q` omitted
/// when it equals one).
pub(crate) fn big_rational_to_string(q: &BigRational) -> String {
    if q.denom() == &num::BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
