//! Truncated formal diffeomorphisms and their compositional calculus.
//!
//! A [`Germ`] stores the coefficients a_1..a_N of f(z) = sum a_n z^n modulo
//! z^(N+1), with a_1 certified nonzero. Every binary operation returns the
//! minimum order of its inputs and never silently extends precision. A jet is
//! simply a germ truncated to the jet order; truncated composition makes the
//! set of order-l germs the l-jet group.
//!
//! Inversion is implemented twice on purpose:
//! - ascending-coefficient substitution solving f(g(z)) = z (the default);
//! - the explicit multinomial inversion formula, summing over exponent
//!   sequences with k_1 + 2 k_2 + 3 k_3 + ... = n - 1.
//!
//! The two must agree exactly; the formula serves as an independent oracle
//! for the substitution path.

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::rings::Ring;

#[derive(Debug, Clone, PartialEq)]
pub struct Germ<R: Ring> {
    ring: R,
    /// coeffs[i] is A_{i+1}(f); the length is the truncation order N >= 1.
    coeffs: Vec<R::Elem>,
}

/// Which inversion algorithm to run; both satisfy the same contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InversionMethod {
    AscendingSubstitution,
    MultinomialFormula,
}

impl InversionMethod {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "substitution" => Ok(Self::AscendingSubstitution),
            "formula" => Ok(Self::MultinomialFormula),
            other => Err(Error::Parse(format!(
                "unknown inversion method `{other}` (expected substitution | formula)"
            ))),
        }
    }
}

impl<R: Ring> Germ<R> {
    /// Build a germ from A_1..A_N. The linear coefficient must be certified
    /// nonzero for the series to be a formal diffeomorphism.
    pub fn new(ring: R, coeffs: Vec<R::Elem>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::OrderZero);
        }
        if ring.is_zero(&coeffs[0]) {
            return Err(Error::Parameter("a formal diffeomorphism needs A1 != 0".into()));
        }
        Ok(Germ { ring, coeffs })
    }

    pub fn identity(ring: R, order: usize) -> Result<Self> {
        Self::homothety(ring.clone(), ring.one(), order)
    }

    /// The homothety z -> lambda z at the given order.
    pub fn homothety(ring: R, lambda: R::Elem, order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::OrderZero);
        }
        let mut coeffs = vec![ring.zero(); order];
        coeffs[0] = lambda;
        Self::new(ring, coeffs)
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }
    pub fn coeffs(&self) -> &[R::Elem] {
        &self.coeffs
    }

    /// A_n(f), 1-based.
    pub fn coefficient(&self, n: usize) -> Result<&R::Elem> {
        if n == 0 || n > self.order() {
            return Err(Error::OrderTooHigh { requested: n, order: self.order() });
        }
        Ok(&self.coeffs[n - 1])
    }

    /// Normalized coefficient A~_n(f) = A_n(f)/A_1(f).
    pub fn normalized_coefficient(&self, n: usize) -> Result<R::Elem> {
        let a_n = self.coefficient(n)?.clone();
        let a_1_inv = self
            .ring
            .inv(&self.coeffs[0])
            .map_err(|_| Error::NonInvertibleLeadingCoefficient)?;
        Ok(self.ring.mul(&a_n, &a_1_inv))
    }

    pub fn linear_coefficient(&self) -> &R::Elem {
        &self.coeffs[0]
    }

    /// Jet of order l: plain truncation. An order-l germ *is* the l-jet, and
    /// truncated composition realizes the jet-group law.
    pub fn jet(&self, l: usize) -> Result<Self> {
        if l == 0 {
            return Err(Error::OrderZero);
        }
        if l > self.order() {
            return Err(Error::OrderTooHigh { requested: l, order: self.order() });
        }
        Ok(Germ { ring: self.ring.clone(), coeffs: self.coeffs[..l].to_vec() })
    }

    /// True when the germ equals the identity to its own order.
    pub fn is_identity(&self) -> bool {
        self.ring.is_one(&self.coeffs[0])
            && self.coeffs[1..].iter().all(|c| self.ring.is_zero(c))
    }

    /// Coefficient-wise equality up to the minimum of the two orders, exact
    /// in the ring (p-adic: at the minimum carried precision).
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.ring != other.ring {
            return false;
        }
        let n = self.order().min(other.order());
        (0..n).all(|i| self.ring.eq_elem(&self.coeffs[i], &other.coeffs[i]))
    }

    fn check_same_ring(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::MixedRings(format!(
                "{} vs {}",
                self.ring.descriptor(),
                other.ring.descriptor()
            )));
        }
        Ok(())
    }

    /// First index n with A_n(f) different from A_n(id), if any.
    pub fn first_deviation_from_identity(&self) -> Option<(usize, R::Elem)> {
        let one = self.ring.one();
        if !self.ring.eq_elem(&self.coeffs[0], &one) {
            return Some((1, self.coeffs[0].clone()));
        }
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            if !self.ring.is_zero(c) {
                return Some((i + 1, c.clone()));
            }
        }
        None
    }
}

/// Truncated product of two coefficient slices indexed from z^0, in place of
/// a full polynomial type; `len` entries are kept.
fn mul_trunc<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], len: usize) -> Vec<R::Elem> {
    let mut out = vec![ring.zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if ring.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            if ring.is_zero(bj) {
                continue;
            }
            out[i + j] = ring.add(&out[i + j], &ring.mul(ai, bj));
        }
    }
    out
}

/// f o g to the minimum order of the operands, by Horner accumulation of
/// powers of g. The composition polynomials P_n are realized operationally.
pub fn compose<R: Ring>(f: &Germ<R>, g: &Germ<R>) -> Result<Germ<R>> {
    f.check_same_ring(g)?;
    let ring = f.ring.clone();
    let n = f.order().min(g.order());
    // Series with constant slot: gs[0] = 0, gs[i] = A_i(g).
    let mut gs = vec![ring.zero(); n + 1];
    for i in 1..=n {
        gs[i] = g.coeffs[i - 1].clone();
    }
    // Horner: ((a_N g + a_{N-1}) g + ...) g, constants entering at slot 0.
    let mut acc = vec![ring.zero(); n + 1];
    acc[0] = f.coeffs[n - 1].clone();
    for k in (1..n).rev() {
        acc = mul_trunc(&ring, &acc, &gs, n + 1);
        acc[0] = ring.add(&acc[0], &f.coeffs[k - 1]);
    }
    acc = mul_trunc(&ring, &acc, &gs, n + 1);
    debug_assert!(ring.is_zero(&acc[0]));
    Germ::new(ring, acc[1..].to_vec())
}

/// Compose-power f^k (k may be negative), exact at the germ's order.
pub fn compose_pow<R: Ring>(f: &Germ<R>, k: i64) -> Result<Germ<R>> {
    let base = if k < 0 { invert(f)? } else { f.clone() };
    let mut result = Germ::identity(f.ring.clone(), f.order())?;
    let mut sq = base;
    let mut e = k.unsigned_abs();
    while e > 0 {
        if e & 1 == 1 {
            result = compose(&result, &sq)?;
        }
        e >>= 1;
        if e > 0 {
            sq = compose(&sq, &sq)?;
        }
    }
    Ok(result)
}

/// Compositional inverse; ascending substitution by default.
pub fn invert<R: Ring>(f: &Germ<R>) -> Result<Germ<R>> {
    invert_with(f, InversionMethod::AscendingSubstitution)
}

pub fn invert_with<R: Ring>(f: &Germ<R>, method: InversionMethod) -> Result<Germ<R>> {
    match method {
        InversionMethod::AscendingSubstitution => invert_substitution(f),
        InversionMethod::MultinomialFormula => invert_formula(f),
    }
}

/// Solve f(g(z)) = z coefficient by coefficient: once g is known to degree
/// n-1, the z^n coefficient of f(g) is a_1 g_n plus terms in known data.
fn invert_substitution<R: Ring>(f: &Germ<R>) -> Result<Germ<R>> {
    let ring = f.ring.clone();
    let n = f.order();
    let a1_inv = ring.inv(&f.coeffs[0]).map_err(|_| Error::NonInvertibleLeadingCoefficient)?;
    let mut g = vec![ring.zero(); n];
    g[0] = a1_inv.clone();
    for m in 2..=n {
        // z^m coefficient of f(g_partial) with the unknown g_m left at zero.
        let s = compose_prefix_coefficient(&ring, &f.coeffs, &g, m);
        g[m - 1] = ring.neg(&ring.mul(&a1_inv, &s));
    }
    Germ::new(ring, g)
}

/// z^m coefficient of f o g where g is known below degree m (index m-1 of
/// `g` is ignored). Horner up to degree m only.
fn compose_prefix_coefficient<R: Ring>(
    ring: &R,
    f: &[R::Elem],
    g: &[R::Elem],
    m: usize,
) -> R::Elem {
    let mut gs = vec![ring.zero(); m + 1];
    for i in 1..=m.min(g.len()) {
        if i != m {
            gs[i] = g[i - 1].clone();
        }
    }
    let kmax = m.min(f.len());
    let mut acc = vec![ring.zero(); m + 1];
    acc[0] = f[kmax - 1].clone();
    for k in (1..kmax).rev() {
        acc = mul_trunc(ring, &acc, &gs, m + 1);
        acc[0] = ring.add(&acc[0], &f[k - 1]);
    }
    acc = mul_trunc(ring, &acc, &gs, m + 1);
    acc[m].clone()
}

/// The explicit inversion formula: A_n(f^{-1}) is a_1^{-n} times a signed
/// sum over exponent sequences (k_1, k_2, ...) with k_1 + 2k_2 + ... = n-1 of
///   (n+1)(n+2)...(n-1+K) / (k_1! k_2! ...) * (a_2/a_1)^{k_1} (a_3/a_1)^{k_2} ...
/// with K = k_1 + k_2 + ... and sign (-1)^K. The combinatorial factor is an
/// exact integer; this is asserted before injecting it into the ring.
fn invert_formula<R: Ring>(f: &Germ<R>) -> Result<Germ<R>> {
    let ring = f.ring.clone();
    let order = f.order();
    let a1_inv = ring.inv(&f.coeffs[0]).map_err(|_| Error::NonInvertibleLeadingCoefficient)?;
    // Normalized tails a_{j+1}/a_1 for j >= 1.
    let tails: Vec<R::Elem> =
        (2..=order).map(|i| ring.mul(&f.coeffs[i - 1], &a1_inv)).collect();

    let mut out = Vec::with_capacity(order);
    for n in 1..=order {
        let mut sum = ring.zero();
        let mut ks: Vec<u32> = Vec::new();
        enumerate_exponent_sequences(n - 1, 1, &mut ks, &mut |ks| {
            let k_total: u64 = ks.iter().map(|&k| k as u64).sum();
            let coeff = multinomial_factor(n as u64, k_total, ks);
            let mut term = ring
                .from_rational(&coeff)
                .expect("integer factor injects into every ring");
            if k_total % 2 == 1 {
                term = ring.neg(&term);
            }
            for (j, &k) in ks.iter().enumerate() {
                for _ in 0..k {
                    term = ring.mul(&term, &tails[j]);
                }
            }
            sum = ring.add(&sum, &term);
        });
        let mut a1_pow = ring.one();
        for _ in 0..n {
            a1_pow = ring.mul(&a1_pow, &a1_inv);
        }
        out.push(ring.mul(&a1_pow, &sum));
    }
    Germ::new(ring, out)
}

/// (n+1)(n+2)...(n-1+K) / prod k_j!, asserted integral.
fn multinomial_factor(n: u64, k_total: u64, ks: &[u32]) -> BigRational {
    let mut num = BigInt::one();
    for i in 1..k_total {
        num *= BigInt::from(n + i);
    }
    let mut den = BigInt::one();
    for &k in ks {
        for j in 2..=k as u64 {
            den *= BigInt::from(j);
        }
    }
    let q = BigRational::new(num, den);
    assert!(q.denom().is_one(), "inversion-formula factor must be an integer");
    q
}

/// All sequences (k_1, k_2, ...) of nonnegative integers with
/// sum j*k_j = target; `ks` collects parts for indices >= `part`.
fn enumerate_exponent_sequences<F: FnMut(&[u32])>(
    target: usize,
    part: usize,
    ks: &mut Vec<u32>,
    emit: &mut F,
) {
    if target == 0 {
        emit(ks);
        return;
    }
    if part > target {
        return;
    }
    for k in 0..=(target / part) as u32 {
        ks.push(k);
        enumerate_exponent_sequences(target - part * k as usize, part + 1, ks, emit);
        ks.pop();
    }
}

/// Does j_l(f o g) = j_l(f) o j_l(g)? Truncated composition factors through
/// jets, so this must always hold; exposed as a checkable predicate.
pub fn jet_morphism_check<R: Ring>(f: &Germ<R>, g: &Germ<R>, l: usize) -> Result<bool> {
    let lhs = compose(f, g)?.jet(l)?;
    let rhs = compose(&f.jet(l)?, &g.jet(l)?)?;
    Ok(lhs.agrees_with(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{PAdicRing, Rationals, Ring};
    use num::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn germ_i64(coeffs: &[i64], order: usize) -> Germ<Rationals> {
        let mut v: Vec<BigRational> = coeffs.iter().map(|&c| Rationals.from_i64(c)).collect();
        v.resize(order, Rationals.zero());
        Germ::new(Rationals, v).unwrap()
    }

    /// z/(1+3z) truncated at the given order: coefficients (-3)^(n-1).
    pub(crate) fn moebius_contraction(order: usize) -> Germ<Rationals> {
        let mut c = Vec::with_capacity(order);
        let mut acc = BigRational::one();
        for _ in 0..order {
            c.push(acc.clone());
            acc *= rat(-3, 1);
        }
        Germ::new(Rationals, c).unwrap()
    }

    #[test]
    fn moebius_self_composition() {
        // f0 o f0 = z/(1+6z): coefficients (-6)^(n-1), from [[1,0],[3,1]]^2.
        let f0 = moebius_contraction(8);
        let sq = compose(&f0, &f0).unwrap();
        let mut acc = BigRational::one();
        for n in 1..=8 {
            assert_eq!(sq.coefficient(n).unwrap(), &acc, "coefficient {n}");
            acc *= rat(-6, 1);
        }
    }

    #[test]
    fn identity_is_neutral() {
        let f = germ_i64(&[2, 0, 5, -1], 6);
        let id = Germ::identity(Rationals, 6).unwrap();
        assert!(compose(&id, &f).unwrap().agrees_with(&f));
        assert!(compose(&f, &id).unwrap().agrees_with(&f));
    }

    #[test]
    fn homotheties_multiply() {
        let m2 = Germ::homothety(Rationals, rat(2, 1), 5).unwrap();
        let m3 = Germ::homothety(Rationals, rat(3, 1), 5).unwrap();
        let m6 = Germ::homothety(Rationals, rat(6, 1), 5).unwrap();
        assert!(compose(&m2, &m3).unwrap().agrees_with(&m6));
    }

    #[test]
    fn catalan_inverse_of_z_plus_z2() {
        // (z + z^2)^{-1} = z - z^2 + 2z^3 - 5z^4 (signed Catalan numbers).
        let f = germ_i64(&[1, 1], 4);
        for method in [InversionMethod::AscendingSubstitution, InversionMethod::MultinomialFormula] {
            let g = invert_with(&f, method).unwrap();
            let expected = germ_i64(&[1, -1, 2, -5], 4);
            assert!(g.agrees_with(&expected), "{method:?}");
            assert!(compose(&f, &g).unwrap().is_identity());
            assert!(compose(&g, &f).unwrap().is_identity());
        }
    }

    #[test]
    fn moebius_inverse_closed_form() {
        // f0^{-1} = z/(1-3z): coefficients 3^(n-1).
        let f0 = moebius_contraction(10);
        let inv = invert(&f0).unwrap();
        let mut acc = BigRational::one();
        for n in 1..=10 {
            assert_eq!(inv.coefficient(n).unwrap(), &acc);
            acc *= rat(3, 1);
        }
    }

    #[test]
    fn invert_identity() {
        let id = Germ::identity(Rationals, 7).unwrap();
        assert!(invert(&id).unwrap().is_identity());
    }

    #[test]
    fn non_invertible_leading_coefficient_p_adic() {
        let ring = PAdicRing::new(5, 8).unwrap();
        let f = Germ::new(ring.clone(), vec![ring.from_i64(5), ring.one()]).unwrap();
        assert_eq!(invert(&f), Err(Error::NonInvertibleLeadingCoefficient));
    }

    #[test]
    fn jets_truncate() {
        let f = germ_i64(&[1, 0, 5], 3);
        let j = f.jet(2).unwrap();
        assert!(j.is_identity()); // z + 5z^3 truncates to z at order 2
        assert_eq!(f.jet(3).unwrap().order(), 3);
        assert!(matches!(f.jet(4), Err(Error::OrderTooHigh { .. })));
        assert!(matches!(f.jet(0), Err(Error::OrderZero)));
    }

    #[test]
    fn jet_of_moebius() {
        // jet(f0, 3) = z - 3z^2 + 9z^3.
        let j = moebius_contraction(8).jet(3).unwrap();
        assert!(j.agrees_with(&germ_i64(&[1, -3, 9], 3)));
    }

    #[test]
    fn coefficient_queries() {
        let f0 = moebius_contraction(8);
        assert_eq!(f0.coefficient(3).unwrap(), &rat(9, 1));
        assert_eq!(f0.normalized_coefficient(1).unwrap(), rat(1, 1));
        assert!(matches!(f0.coefficient(9), Err(Error::OrderTooHigh { .. })));
    }

    #[test]
    fn mixed_rings_rejected() {
        let f = germ_i64(&[1, 1], 4);
        let ring = PAdicRing::new(5, 8).unwrap();
        let g = Germ::identity(ring, 4).unwrap();
        // Different ring types cannot even meet compose(); the runtime check
        // guards same-type rings with different parameters.
        let ring7 = PAdicRing::new(7, 8).unwrap();
        let h5 = Germ::identity(PAdicRing::new(5, 8).unwrap(), 4).unwrap();
        let h7 = Germ::identity(ring7, 4).unwrap();
        assert!(matches!(compose(&h5, &h7), Err(Error::MixedRings(_))));
        let _ = (f, g);
    }

    #[test]
    fn order_is_minimum() {
        let f = germ_i64(&[2, 1], 6);
        let g = germ_i64(&[3, 0, 1], 4);
        assert_eq!(compose(&f, &g).unwrap().order(), 4);
    }
}
