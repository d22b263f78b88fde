//! Multivariate polynomials over the integers, with exact GCD.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors (lex order on the
//! reversed comparison comes for free from `Vec<u32>: Ord`). The GCD is the
//! classical primitive polynomial-remainder-sequence algorithm: recurse on
//! the first variable of positive degree, with integer GCD at the base. Sizes
//! here are desk scale (the symbolic route is capped upstream), so PRS growth
//! is acceptable.

use std::collections::BTreeMap;

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Exponent vector; length equals the ambient number of variables.
pub type Mono = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MPoly {
    pub nvars: usize,
    /// Nonzero terms only.
    pub terms: BTreeMap<Mono, BigInt>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, BigInt::one())
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        assert!(index < nvars, "variable index out of range");
        let mut mono = vec![0; nvars];
        mono[index] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(mono, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_value(&self) -> Option<&BigInt> {
        if self.is_zero() {
            return None;
        }
        if self.is_constant() {
            self.terms.values().next()
        } else {
            None
        }
    }

    fn insert_term(&mut self, mono: Mono, coeff: BigInt) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        assert_eq!(self.nvars, other.nvars);
        let mut out = MPoly::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let mono: Mono = ma.iter().zip(mb).map(|(x, y)| x + y).collect();
                out.insert_term(mono, ca * cb);
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &BigInt) -> MPoly {
        if c.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m[var]).max().unwrap_or(0)
    }

    /// Lex-leading term (largest exponent vector).
    pub fn leading(&self) -> Option<(&Mono, &BigInt)> {
        self.terms.iter().next_back()
    }

    /// GCD of all integer coefficients (nonnegative).
    pub fn int_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
        }
        g
    }

    pub fn eval(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.nvars);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = BigRational::from_integer(c.clone());
            for (var, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    term *= &point[var];
                }
            }
            acc += term;
        }
        acc
    }

    /// Exact multivariate division; `None` if `other` does not divide `self`.
    pub fn div_exact(&self, other: &MPoly) -> Option<MPoly> {
        assert_eq!(self.nvars, other.nvars);
        assert!(!other.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = MPoly::zero(self.nvars);
        let (lm, lc) = {
            let (m, c) = other.leading().expect("nonzero divisor");
            (m.clone(), c.clone())
        };
        while !rem.is_zero() {
            let (rm, rc) = {
                let (m, c) = rem.leading().expect("nonzero remainder");
                (m.clone(), c.clone())
            };
            let mut qm = vec![0u32; self.nvars];
            for i in 0..self.nvars {
                if rm[i] < lm[i] {
                    return None;
                }
                qm[i] = rm[i] - lm[i];
            }
            let (q, r) = rc.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let mut t = MPoly::zero(self.nvars);
            t.terms.insert(qm, q);
            rem = rem.sub(&t.mul(other));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// View as univariate in `var`: coefficient polynomials indexed by degree.
    fn coeffs_in(&self, var: usize) -> Vec<MPoly> {
        let d = self.degree_in(var) as usize;
        let mut out = vec![MPoly::zero(self.nvars); d + 1];
        for (m, c) in &self.terms {
            let e = m[var] as usize;
            let mut m2 = m.clone();
            m2[var] = 0;
            out[e].insert_term(m2, c.clone());
        }
        out
    }

    fn from_coeffs_in(nvars: usize, var: usize, coeffs: &[MPoly]) -> MPoly {
        let mut out = MPoly::zero(nvars);
        for (e, c) in coeffs.iter().enumerate() {
            for (m, k) in &c.terms {
                let mut m2 = m.clone();
                m2[var] += e as u32;
                out.insert_term(m2, k.clone());
            }
        }
        out
    }

    /// Content with respect to `var`: GCD of the univariate coefficients.
    /// Once the running GCD is constant, only integer contents remain.
    fn content_in(&self, var: usize) -> MPoly {
        let mut g = MPoly::zero(self.nvars);
        let mut int_only: Option<BigInt> = None;
        for c in self.coeffs_in(var) {
            if c.is_zero() {
                continue;
            }
            match &mut int_only {
                Some(acc) => {
                    *acc = acc.gcd(&c.int_content());
                    if acc.is_one() {
                        return MPoly::one(self.nvars);
                    }
                }
                None => {
                    g = gcd(&g, &c);
                    if let Some(value) = g.constant_value() {
                        int_only = Some(value.abs());
                    }
                }
            }
        }
        match int_only {
            Some(acc) => MPoly::constant(self.nvars, acc),
            None => g,
        }
    }

    /// Normalize sign so the lex-leading coefficient is positive.
    pub fn normalize_sign(&self) -> MPoly {
        match self.leading() {
            Some((_, c)) if c.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }
}

/// Pseudo-remainder of `f` by `g` in the variable `var`.
fn pseudo_rem(f: &MPoly, g: &MPoly, var: usize) -> MPoly {
    let dg = g.degree_in(var);
    let g_coeffs = g.coeffs_in(var);
    let lc_g = g_coeffs[dg as usize].clone();
    let mut r = f.clone();
    while !r.is_zero() && r.degree_in(var) >= dg {
        let dr = r.degree_in(var);
        let r_coeffs = r.coeffs_in(var);
        let lc_r = r_coeffs[dr as usize].clone();
        // r <- lc_g * r - lc_r * x^(dr-dg) * g
        let mut shift = MPoly::zero(f.nvars);
        let mut mono = vec![0u32; f.nvars];
        mono[var] = dr - dg;
        shift.terms.insert(mono, BigInt::one());
        r = r.mul(&lc_g).sub(&lc_r.mul(&shift).mul(g));
        debug_assert!(r.is_zero() || r.degree_in(var) < dr);
    }
    r
}

/// GCD, normalized to positive lex-leading coefficient.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    assert_eq!(a.nvars, b.nvars);
    if a.is_zero() {
        return b.normalize_sign();
    }
    if b.is_zero() {
        return a.normalize_sign();
    }
    if a == b {
        return a.normalize_sign();
    }
    // A constant side reduces to integer contents.
    if let Some(c) = a.constant_value() {
        return MPoly::constant(a.nvars, c.gcd(&b.int_content()));
    }
    if let Some(c) = b.constant_value() {
        return MPoly::constant(a.nvars, c.gcd(&a.int_content()));
    }
    let var = (0..a.nvars)
        .find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
        .expect("non-constant polynomials use a variable");

    let cont_a = a.content_in(var);
    let cont_b = b.content_in(var);
    let cont_gcd = gcd(&cont_a, &cont_b);
    let mut f = a.div_exact(&cont_a).expect("content divides");
    let mut g = b.div_exact(&cont_b).expect("content divides");
    if f.degree_in(var) < g.degree_in(var) {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_zero() {
        let r = pseudo_rem(&f, &g, var);
        f = g;
        g = if r.is_zero() {
            r
        } else {
            let c = r.content_in(var);
            r.div_exact(&c).expect("content divides")
        };
    }
    let f = f.div_exact(&f.content_in(var)).expect("content divides");
    cont_gcd.mul(&f).normalize_sign()
}
