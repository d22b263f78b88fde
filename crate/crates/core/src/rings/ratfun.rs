//! Rational functions in finitely many indeterminates over the rationals.
//!
//! An element is a fraction of integer polynomials in canonical form:
//! numerator and denominator coprime (polynomial GCD, contents included) and
//! the denominator's lex-leading coefficient positive. Rational scalars fold
//! into the fraction, e.g. (3/2)·c1 is stored as 3·c1 / 2. There is no
//! absolute value on this ring; operations that need one reject it.

use num::{BigInt, BigRational, Integer, One, Signed, Zero};
use serde_json::{json, Value};

use super::mpoly::{gcd, MPoly, Mono};
use super::{big_rational_from_str, big_rational_to_string, Magnitude, Ring, RingDescriptor};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFunField {
    vars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatFun {
    pub num: MPoly,
    pub den: MPoly,
}

impl RatFunField {
    pub fn new(vars: Vec<String>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::Parameter("rational-function field needs at least one variable".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vars {
            if v.is_empty() || !seen.insert(v.clone()) {
                return Err(Error::Parameter(format!("bad or duplicate variable name `{v}`")));
            }
        }
        Ok(RatFunField { vars })
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    /// The indeterminate with the given index, as a ring element.
    pub fn variable(&self, index: usize) -> Result<RatFun> {
        if index >= self.vars.len() {
            return Err(Error::Parameter(format!(
                "variable index {index} out of range (field has {})",
                self.vars.len()
            )));
        }
        Ok(RatFun { num: MPoly::var(self.vars.len(), index), den: MPoly::one(self.vars.len()) })
    }

    fn normalize(&self, num: MPoly, den: MPoly) -> RatFun {
        assert!(!den.is_zero(), "zero denominator escaped a Result path");
        if num.is_zero() {
            return RatFun { num, den: MPoly::one(self.vars.len()) };
        }
        // Constant denominators and numerators need integer contents only.
        let g = if den.is_constant() || num.is_constant() {
            let c = num.int_content().gcd(&den.int_content());
            MPoly::constant(self.vars.len(), c)
        } else {
            gcd(&num, &den)
        };
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        if den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            num = num.neg();
            den = den.neg();
        }
        RatFun { num, den }
    }

    /// Evaluate at a rational point; errors when the denominator vanishes.
    pub fn eval(&self, f: &RatFun, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.vars.len() {
            return Err(Error::Parameter(format!(
                "evaluation point has {} coordinates, field has {} variables",
                point.len(),
                self.vars.len()
            )));
        }
        let d = f.den.eval(point);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(f.num.eval(point) / d)
    }

    /// Total number of terms (numerator plus denominator), for budget checks.
    pub fn term_count(&self, f: &RatFun) -> usize {
        f.num.num_terms() + f.den.num_terms()
    }
}

impl Ring for RatFunField {
    type Elem = RatFun;

    fn zero(&self) -> RatFun {
        RatFun { num: MPoly::zero(self.vars.len()), den: MPoly::one(self.vars.len()) }
    }
    fn one(&self) -> RatFun {
        RatFun { num: MPoly::one(self.vars.len()), den: MPoly::one(self.vars.len()) }
    }
    fn add(&self, a: &RatFun, b: &RatFun) -> RatFun {
        // With t = gcd of the denominators, any common factor of the naive
        // numerator and denominator divides t; one small GCD finishes.
        let t = gcd(&a.den, &b.den);
        let bden_red = b.den.div_exact(&t).expect("gcd divides");
        let aden_red = a.den.div_exact(&t).expect("gcd divides");
        let num = a.num.mul(&bden_red).add(&b.num.mul(&aden_red));
        if num.is_zero() {
            return self.zero();
        }
        let den = a.den.mul(&bden_red);
        let g = gcd(&num, &t);
        let mut num = num.div_exact(&g).expect("gcd divides");
        let mut den = den.div_exact(&g).expect("gcd divides");
        if den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            num = num.neg();
            den = den.neg();
        }
        RatFun { num, den }
    }
    fn neg(&self, a: &RatFun) -> RatFun {
        RatFun { num: a.num.neg(), den: a.den.clone() }
    }
    fn mul(&self, a: &RatFun, b: &RatFun) -> RatFun {
        // Cross-cancel: both operands are already reduced, so dividing a.num
        // by gcd(a.num, b.den) and b.num by gcd(b.num, a.den) leaves the
        // product coprime; no final GCD needed.
        if a.num.is_zero() || b.num.is_zero() {
            return self.zero();
        }
        let g1 = gcd(&a.num, &b.den);
        let g2 = gcd(&b.num, &a.den);
        let num = a.num.div_exact(&g1).expect("gcd divides").mul(
            &b.num.div_exact(&g2).expect("gcd divides"),
        );
        let mut num = num;
        let mut den = a.den.div_exact(&g2).expect("gcd divides").mul(
            &b.den.div_exact(&g1).expect("gcd divides"),
        );
        if den.leading().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            num = num.neg();
            den = den.neg();
        }
        RatFun { num, den }
    }
    fn inv(&self, a: &RatFun) -> Result<RatFun> {
        if a.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.normalize(a.den.clone(), a.num.clone()))
    }
    fn is_zero(&self, a: &RatFun) -> bool {
        a.num.is_zero()
    }
    fn eq_elem(&self, a: &RatFun, b: &RatFun) -> bool {
        a == b
    }
    fn from_i64(&self, n: i64) -> RatFun {
        RatFun {
            num: MPoly::constant(self.vars.len(), BigInt::from(n)),
            den: MPoly::one(self.vars.len()),
        }
    }
    fn from_rational(&self, q: &BigRational) -> Result<RatFun> {
        Ok(self.normalize(
            MPoly::constant(self.vars.len(), q.numer().clone()),
            MPoly::constant(self.vars.len(), q.denom().clone()),
        ))
    }
    fn supports_abs(&self) -> bool {
        false
    }
    fn abs(&self, _a: &RatFun) -> Result<Magnitude> {
        Err(Error::UnsupportedRing("rational-function coefficients have no absolute value".into()))
    }
    fn descriptor(&self) -> RingDescriptor {
        RingDescriptor::RationalFunction { vars: self.vars.clone() }
    }
    fn format_elem(&self, a: &RatFun) -> String {
        let num = poly_display(&a.num, &self.vars);
        if a.den.constant_value().map(|c| c.is_one()).unwrap_or(false) {
            num
        } else {
            format!("({num})/({})", poly_display(&a.den, &self.vars))
        }
    }
    fn elem_to_json(&self, a: &RatFun) -> Value {
        json!({ "num": poly_to_map(&a.num), "den": poly_to_map(&a.den) })
    }
    fn elem_from_json(&self, v: &Value) -> Result<RatFun> {
        let obj = v.as_object().ok_or_else(|| Error::Parse("expected rational-function object".into()))?;
        let num = poly_from_map(
            obj.get("num").ok_or_else(|| Error::Parse("missing num".into()))?,
            self.vars.len(),
        )?;
        let den = poly_from_map(
            obj.get("den").ok_or_else(|| Error::Parse("missing den".into()))?,
            self.vars.len(),
        )?;
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.normalize(num, den))
    }
}

fn poly_to_map(p: &MPoly) -> Value {
    let mut map = serde_json::Map::new();
    for (m, c) in &p.terms {
        let key = m.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
        map.insert(key, Value::String(c.to_string()));
    }
    Value::Object(map)
}

fn poly_from_map(v: &Value, nvars: usize) -> Result<MPoly> {
    let obj = v.as_object().ok_or_else(|| Error::Parse("expected coefficient map".into()))?;
    let mut p = MPoly::zero(nvars);
    for (key, value) in obj {
        let mono: Mono = key
            .split(',')
            .map(|e| e.trim().parse::<u32>().map_err(|e| Error::Parse(e.to_string())))
            .collect::<Result<_>>()?;
        if mono.len() != nvars {
            return Err(Error::Parse(format!(
                "monomial key `{key}` has {} exponents, field has {nvars} variables",
                mono.len()
            )));
        }
        let c: BigInt = value
            .as_str()
            .ok_or_else(|| Error::Parse("coefficient must be a string".into()))?
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer coefficient for `{key}`")))?;
        if c.is_zero() {
            continue;
        }
        if p.terms.insert(mono, c).is_some() {
            return Err(Error::Parse(format!("duplicate monomial key `{key}`")));
        }
    }
    Ok(p)
}

fn poly_display(p: &MPoly, vars: &[String]) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (m, c) in p.terms.iter().rev() {
        let mut factors = Vec::new();
        if !c.is_one() || m.iter().all(|&e| e == 0) {
            factors.push(c.to_string());
        }
        for (i, &e) in m.iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(vars[i].clone()),
                _ => factors.push(format!("{}^{}", vars[i], e)),
            }
        }
        parts.push(factors.join("*"));
    }
    parts.join(" + ").replace("+ -", "- ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field() -> RatFunField {
        RatFunField::new(vec!["c1".into(), "c2".into()]).unwrap()
    }

    #[test]
    fn normalization_cancels_common_factors() {
        // (c1^2 - 1)/(c1 - 1) = c1 + 1
        let f = field();
        let c1 = f.variable(0).unwrap();
        let num = f.sub(&f.mul(&c1, &c1), &f.one());
        let den = f.sub(&c1, &f.one());
        let q = f.div(&num, &den).unwrap();
        assert_eq!(q, f.add(&c1, &f.one()));
    }

    #[test]
    fn rational_scalars_fold_into_the_fraction() {
        let f = field();
        let half = f.from_rational(&BigRational::new(BigInt::one(), BigInt::from(2))).unwrap();
        let c2 = f.variable(1).unwrap();
        let x = f.mul(&half, &c2);
        assert_eq!(f.format_elem(&x), "(c2)/(2)");
    }

    #[test]
    fn abs_is_rejected() {
        let f = field();
        assert!(matches!(f.abs(&f.one()), Err(Error::UnsupportedRing(_))));
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let f = field();
        let c1 = f.variable(0).unwrap();
        let c2 = f.variable(1).unwrap();
        let x = f.div(&f.add(&f.mul(&c1, &c2), &f.from_i64(3)), &f.sub(&c1, &c2)).unwrap();
        let j = f.elem_to_json(&x);
        let back = f.elem_from_json(&j).unwrap();
        assert_eq!(back, x);
        assert_eq!(f.elem_to_json(&back), j);
    }

    #[test]
    fn evaluation_commutes_with_operations() {
        let f = field();
        let c1 = f.variable(0).unwrap();
        let c2 = f.variable(1).unwrap();
        let a = f.div(&f.add(&c1, &f.from_i64(2)), &c2).unwrap();
        let b = f.mul(&c1, &c2);
        let point = vec![
            BigRational::new(BigInt::from(3), BigInt::from(2)),
            BigRational::new(BigInt::from(-5), BigInt::from(7)),
        ];
        let lhs = f.eval(&f.mul(&a, &b), &point).unwrap();
        let rhs = f.eval(&a, &point).unwrap() * f.eval(&b, &point).unwrap();
        assert_eq!(lhs, rhs);
        let lhs = f.eval(&f.add(&a, &b), &point).unwrap();
        let rhs = f.eval(&a, &point).unwrap() + f.eval(&b, &point).unwrap();
        assert_eq!(lhs, rhs);
    }
}
