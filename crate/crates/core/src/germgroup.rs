//! Group-theoretic layer over germs: word maps, homothety conjugation,
//! filtration membership, radius estimation, closure constants, affine
//! combinations.
//!
//! Filtration predicates are truncation-level statements: they certify the
//! stated bound for the finitely many coefficients available, never for the
//! untruncated germ.

use std::collections::HashMap;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rings::{Magnitude, Rationals, Ring};
use crate::series::{compose, invert, Germ};
use crate::words::FreeWord;

/// f o g o f^{-1} o g^{-1}.
pub fn commutator<R: Ring>(f: &Germ<R>, g: &Germ<R>) -> Result<Germ<R>> {
    compose(&compose(f, g)?, &compose(&invert(f)?, &invert(g)?)?)
}

/// Evaluate the word map w(g_1, ..., g_m) by composition. Inverses of
/// generators are computed once per distinct generator and reused; powers
/// use binary exponentiation (composition is exactly associative at fixed
/// truncation order).
pub fn word_eval<R: Ring>(word: &FreeWord, germs: &[Germ<R>]) -> Result<Germ<R>> {
    if germs.is_empty() {
        return Err(Error::Parameter("word evaluation needs at least one germ".into()));
    }
    for g in &germs[1..] {
        if g.ring() != germs[0].ring() {
            return Err(Error::MixedRings(format!(
                "{} vs {}",
                germs[0].ring().descriptor(),
                g.ring().descriptor()
            )));
        }
    }
    let order = germs.iter().map(Germ::order).min().expect("nonempty");
    let mut inverses: HashMap<usize, Germ<R>> = HashMap::new();
    let mut result = Germ::identity(germs[0].ring().clone(), order)?;
    for &(gen, exp) in word.letters() {
        let base = germs.get(gen).ok_or(Error::VariantMismatch {
            index: gen + 1,
            count: germs.len(),
        })?;
        let factor = if exp < 0 {
            if !inverses.contains_key(&gen) {
                inverses.insert(gen, invert(base)?);
            }
            inverses[&gen].clone()
        } else {
            base.clone()
        };
        result = compose(&result, &compose_pow_positive(&factor, exp.unsigned_abs())?)?;
    }
    Ok(result)
}

fn compose_pow_positive<R: Ring>(f: &Germ<R>, e: u64) -> Result<Germ<R>> {
    let mut result = Germ::identity(f.ring().clone(), f.order())?;
    let mut sq = f.clone();
    let mut e = e;
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

/// m_alpha o f o m_alpha^{-1}, via the closed form A_n -> alpha^(1-n) A_n.
/// The closed form is verified against direct composition in the tests.
pub fn homothety_conjugate<R: Ring>(f: &Germ<R>, alpha: &R::Elem) -> Result<Germ<R>> {
    let ring = f.ring().clone();
    let alpha_inv = ring.inv(alpha).map_err(|_| Error::NonInvertibleScalar)?;
    let mut coeffs = Vec::with_capacity(f.order());
    let mut scale = ring.one(); // alpha^(1-n) for n = 1
    for (i, a) in f.coeffs().iter().enumerate() {
        if i > 0 {
            scale = ring.mul(&scale, &alpha_inv);
        }
        coeffs.push(ring.mul(&scale, a));
    }
    Germ::new(ring, coeffs)
}

/// The class Diff_c (and Diff_{lambda0,c} when `lambda0` is present):
/// |A~_n(f)| <= c^(n-1) for all n, plus 1/lambda0 <= |A_1(f)| <= lambda0.
#[derive(Debug, Clone, PartialEq)]
pub struct FiltrationClass {
    pub c: BigRational,
    pub lambda0: Option<BigRational>,
}

impl FiltrationClass {
    pub fn new(c: BigRational, lambda0: Option<BigRational>) -> Result<Self> {
        if c <= BigRational::zero() {
            return Err(Error::Parameter("filtration constant c must be positive".into()));
        }
        if let Some(l) = &lambda0 {
            if *l <= BigRational::one() {
                return Err(Error::Parameter("lambda0 must exceed 1".into()));
            }
        }
        Ok(FiltrationClass { c, lambda0 })
    }
}

fn pow_rational(c: &BigRational, k: usize) -> BigRational {
    let mut out = BigRational::one();
    for _ in 0..k {
        out *= c;
    }
    out
}

/// Truncation-level membership of f in Diff_c / Diff_{lambda0,c}.
pub fn in_filtration<R: Ring>(f: &Germ<R>, class: &FiltrationClass) -> Result<bool> {
    let ring = f.ring();
    if !ring.supports_abs() {
        return Err(Error::UnsupportedRing(format!("{}", ring.descriptor())));
    }
    let a1_abs = ring.abs(f.linear_coefficient())?;
    if let Some(l) = &class.lambda0 {
        let inv_l = BigRational::one() / l;
        if a1_abs < inv_l || a1_abs > *l {
            return Ok(false);
        }
    }
    for n in 2..=f.order() {
        // |A~_n| = |A_n| / |A_1| compared as exact magnitudes.
        let upper = ring.abs_upper(f.coefficient(n)?)? / &a1_abs;
        if upper > pow_rational(&class.c, n - 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Truncation-level membership in C_c{z}: |A_n(f)| <= c^(n+1) for all n.
pub fn in_c_space<R: Ring>(f: &Germ<R>, c: &BigRational) -> Result<bool> {
    let ring = f.ring();
    if !ring.supports_abs() {
        return Err(Error::UnsupportedRing(format!("{}", ring.descriptor())));
    }
    if *c <= BigRational::zero() {
        return Err(Error::Parameter("c must be positive".into()));
    }
    for n in 1..=f.order() {
        if ring.abs_upper(f.coefficient(n)?)? > pow_rational(c, n + 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimal admissible filtration constant for the truncation: the maximum
/// over n of |A~_n|^(1/(n-1)), reported as the attaining index and an exact
/// rational bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct CMembership {
    /// Index n and magnitude |A~_n| attaining the maximum; `None` when every
    /// normalized coefficient above the first vanishes (any c > 0 works).
    pub attained: Option<(usize, Magnitude)>,
    /// [lo, hi] with lo <= c* <= hi; `hi` is always admissible.
    pub bracket: Option<(BigRational, BigRational)>,
}

pub fn c_membership<R: Ring>(f: &Germ<R>, tolerance: &BigRational) -> Result<CMembership> {
    let ring = f.ring();
    if !ring.supports_abs() {
        return Err(Error::UnsupportedRing(format!("{}", ring.descriptor())));
    }
    let a1_abs = ring.abs(f.linear_coefficient())?;
    // Track the max of m_n^(1/(n-1)) by exact cross-power comparison:
    // x^(1/a) < y^(1/b)  iff  x^b < y^a.
    let mut best: Option<(usize, Magnitude)> = None;
    for n in 2..=f.order() {
        let m = ring.abs_upper(f.coefficient(n)?)? / &a1_abs;
        if m.is_zero() {
            continue;
        }
        best = Some(match best {
            None => (n, m),
            Some((bn, bm)) => {
                let lhs = pow_rational(&m, bn - 1);
                let rhs = pow_rational(&bm, n - 1);
                if lhs > rhs {
                    (n, m)
                } else {
                    (bn, bm)
                }
            }
        });
    }
    let Some((n, m)) = best.clone() else {
        return Ok(CMembership { attained: None, bracket: None });
    };
    let bracket = nth_root_bracket(&m, (n - 1) as u32, tolerance);
    Ok(CMembership { attained: best, bracket: Some(bracket) })
}

/// Exact rational bracket [lo, hi] of x^(1/k) with hi - lo <= tolerance and
/// lo^k <= x <= hi^k.
pub fn nth_root_bracket(x: &Magnitude, k: u32, tolerance: &BigRational) -> (BigRational, BigRational) {
    assert!(k >= 1);
    assert!(*x >= BigRational::zero());
    if x.is_zero() {
        return (BigRational::zero(), BigRational::zero());
    }
    if k == 1 {
        return (x.clone(), x.clone());
    }
    let one = BigRational::one();
    let mut lo = BigRational::zero();
    let mut hi = if *x >= one { x.clone() + &one } else { one.clone() };
    while &hi - &lo > *tolerance {
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if pow_rational(&mid, k as usize) <= *x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Heuristic reciprocal-root estimate of the convergence radius from a
/// truncation. A truncation can never determine rad(f); this brackets
/// (max_{2<=n<=N} |a_n|^(1/n))^(-1) and is labeled an estimate.
#[derive(Debug, Clone, PartialEq)]
pub enum RadiusEstimate {
    /// All coefficients above the linear one vanish at this truncation.
    Unbounded,
    /// Exact rational bracket of the estimate.
    Bracket { lo: BigRational, hi: BigRational },
}

pub fn radius_estimate<R: Ring>(f: &Germ<R>, tolerance: &BigRational) -> Result<RadiusEstimate> {
    let ring = f.ring();
    if !ring.supports_abs() {
        return Err(Error::UnsupportedRing(format!("{}", ring.descriptor())));
    }
    if f.order() < 4 {
        return Err(Error::Parameter("radius estimation needs order at least 4".into()));
    }
    let mut best: Option<(usize, Magnitude)> = None;
    for n in 2..=f.order() {
        let m = ring.abs_upper(f.coefficient(n)?)?;
        if m.is_zero() {
            continue;
        }
        best = Some(match best {
            None => (n, m),
            Some((bn, bm)) => {
                if pow_rational(&m, bn) > pow_rational(&bm, n) {
                    (n, m)
                } else {
                    (bn, bm)
                }
            }
        });
    }
    match best {
        None => Ok(RadiusEstimate::Unbounded),
        Some((n, m)) => {
            // rad estimate = m^(-1/n) = (1/m)^(1/n).
            let (lo, hi) = nth_root_bracket(&(BigRational::one() / m), n as u32, tolerance);
            Ok(RadiusEstimate::Bracket { lo, hi })
        }
    }
}

/// Coefficients K_1..K_n of the compositional inverse of the majorant
/// g(z) = (z - 2z^2)/(1 - z) = z - z^2 - z^3 - ... (all integers).
pub fn majorant_inverse_coefficients(n: usize) -> Result<Vec<BigInt>> {
    let ring = Rationals;
    let mut coeffs = vec![BigRational::from_integer(BigInt::from(-1)); n];
    coeffs[0] = BigRational::one();
    let g = Germ::new(ring, coeffs)?;
    let inv = invert(&g)?;
    inv.coeffs()
        .iter()
        .map(|c| {
            if c.denom().is_one() {
                Ok(c.numer().clone())
            } else {
                Err(Error::Parameter("majorant reversion produced a non-integer".into()))
            }
        })
        .collect()
}

/// Closure constant for Diff_{c,c} at truncation order n: a c' >= c^2 such
/// that f, g in Diff_{c,c} implies f o g and f^{-1} in Diff_{c',c'} for the
/// first n coefficients. Built from the coefficients of F o F with
/// F = cz/(1-cz) and from the majorant coefficients K_n of the inverse of
/// (z - 2z^2)/(1 - z).
pub fn closure_constants(c: &BigRational, n: usize) -> Result<BigRational> {
    if *c <= BigRational::one() {
        return Err(Error::Parameter("closure constants need c > 1".into()));
    }
    if n < 2 {
        return Err(Error::Parameter("closure constants need order at least 2".into()));
    }
    let c2 = c * c;
    let c4 = &c2 * &c2;
    // Composition side: |A~_k(f o g)| <= c^2 * A~_k(F o F) = c^4 (c + c^2)^(k-1),
    // dominated by c' = c^4 (c + c^2) for every k >= 2 once c > 1.
    let comp = &c4 * (c + &c2);
    // Inversion side: |A~_k(f^{-1})| <= (c_0 c^2)^(k-1) with K_k <= c_0^(k-1).
    let ks = majorant_inverse_coefficients(n)?;
    let mut c0 = BigInt::one();
    for (idx, k) in ks.iter().enumerate().skip(1) {
        let exp = idx; // K_{idx+1} <= c0^idx
        while num::pow::pow(c0.clone(), exp) < *k {
            c0 += BigInt::one();
        }
    }
    let inv_side = &c2 * BigRational::from_integer(c0);
    Ok(c2.max(comp).max(inv_side))
}

/// Coefficient-wise affine combination (1-t) f0 + t f1.
pub fn convex_combine<R: Ring>(f0: &Germ<R>, f1: &Germ<R>, t: &R::Elem) -> Result<Germ<R>> {
    if f0.ring() != f1.ring() {
        return Err(Error::MixedRings(format!(
            "{} vs {}",
            f0.ring().descriptor(),
            f1.ring().descriptor()
        )));
    }
    if f0.order() != f1.order() {
        return Err(Error::Parameter("affine combination needs equal orders".into()));
    }
    let ring = f0.ring().clone();
    let s = ring.sub(&ring.one(), t);
    let coeffs: Vec<R::Elem> = f0
        .coeffs()
        .iter()
        .zip(f1.coeffs())
        .map(|(a, b)| ring.add(&ring.mul(&s, a), &ring.mul(t, b)))
        .collect();
    if ring.is_zero(&coeffs[0]) {
        return Err(Error::DegenerateCombination);
    }
    Germ::new(ring, coeffs)
}

/// The affine-combination bound: under c0 <= c1 and c0 |A_1(f0)| <= c1 |A_1(f1)|,
/// every coefficient of f_t = (1-t) f0 + t f1 with t in [0,1] satisfies
/// |A_n(f_t)| <= |A_1(f1)| c1^(n-1). Checked exactly on the truncation.
pub fn convex_bound_holds<R: Ring>(
    f0: &Germ<R>,
    c0: &BigRational,
    f1: &Germ<R>,
    c1: &BigRational,
    ft: &Germ<R>,
) -> Result<bool> {
    let ring = f0.ring();
    if !ring.supports_abs() {
        return Err(Error::UnsupportedRing(format!("{}", ring.descriptor())));
    }
    let l0 = ring.abs(f0.linear_coefficient())?;
    let l1 = ring.abs(f1.linear_coefficient())?;
    if c0 > c1 || &l0 * c0 > &l1 * c1 {
        return Err(Error::Parameter(
            "hypotheses c0 <= c1 and c0|A1(f0)| <= c1|A1(f1)| do not hold".into(),
        ));
    }
    for n in 1..=ft.order() {
        let bound = &l1 * pow_rational(c1, n - 1);
        if ring.abs_upper(ft.coefficient(n)?)? > bound {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Rationals;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn f0(order: usize) -> Germ<Rationals> {
        let mut c = Vec::with_capacity(order);
        let mut acc = BigRational::one();
        for _ in 0..order {
            c.push(acc.clone());
            acc *= rat(-3, 1);
        }
        Germ::new(Rationals, c).unwrap()
    }

    fn germ(coeffs: &[BigRational], order: usize) -> Germ<Rationals> {
        let mut v = coeffs.to_vec();
        v.resize(order, BigRational::zero());
        Germ::new(Rationals, v).unwrap()
    }

    #[test]
    fn word_eval_free_reduction() {
        let w = FreeWord::parse("g1 g1^-1", None, false).unwrap();
        let out = word_eval(&w, &[f0(8)]).unwrap();
        assert!(out.is_identity());
    }

    #[test]
    fn word_eval_square_matches_compose() {
        let w = FreeWord::parse("g1^2", None, false).unwrap();
        let out = word_eval(&w, &[f0(8)]).unwrap();
        assert!(out.agrees_with(&compose(&f0(8), &f0(8)).unwrap()));
    }

    #[test]
    fn commutator_has_unit_derivative() {
        let f = germ(&[rat(2, 1), rat(1, 1)], 6);
        let g = germ(&[rat(3, 1), rat(0, 1), rat(1, 1)], 6);
        let w = FreeWord::generator(0).commutator(&FreeWord::generator(1));
        let c = word_eval(&w, &[f, g]).unwrap();
        assert_eq!(c.coefficient(1).unwrap(), &rat(1, 1));
    }

    #[test]
    fn homothety_conjugation_closed_form() {
        // f = z + z^2, alpha = 2 -> z + z^2/2.
        let f = germ(&[rat(1, 1), rat(1, 1)], 4);
        let out = homothety_conjugate(&f, &rat(2, 1)).unwrap();
        assert!(out.agrees_with(&germ(&[rat(1, 1), rat(1, 2)], 4)));
        // f0 conjugated by 3 is z/(1+z): coefficients (-1)^(n-1).
        let out = homothety_conjugate(&f0(6), &rat(3, 1)).unwrap();
        for n in 1..=6 {
            let expected = if n % 2 == 1 { rat(1, 1) } else { rat(-1, 1) };
            assert_eq!(out.coefficient(n).unwrap(), &expected);
        }
    }

    #[test]
    fn homothety_conjugation_matches_composition() {
        let f = germ(&[rat(2, 1), rat(1, 3), rat(-5, 1), rat(7, 2)], 8);
        let alpha = rat(-5, 3);
        let closed = homothety_conjugate(&f, &alpha).unwrap();
        let m = Germ::homothety(Rationals, alpha.clone(), 8).unwrap();
        let direct = compose(&compose(&m, &f).unwrap(), &invert(&m).unwrap()).unwrap();
        assert!(closed.agrees_with(&direct));
    }

    #[test]
    fn homothety_fixes_homotheties() {
        let m5 = Germ::homothety(Rationals, rat(5, 1), 6).unwrap();
        let out = homothety_conjugate(&m5, &rat(7, 2)).unwrap();
        assert!(out.agrees_with(&m5));
    }

    #[test]
    fn filtration_membership_of_f0() {
        let f = f0(16);
        let c3 = FiltrationClass::new(rat(3, 1), None).unwrap();
        let c2 = FiltrationClass::new(rat(2, 1), None).unwrap();
        assert!(in_filtration(&f, &c3).unwrap());
        assert!(!in_filtration(&f, &c2).unwrap());
        let id = Germ::identity(Rationals, 16).unwrap();
        let tiny = FiltrationClass::new(rat(1, 100), None).unwrap();
        assert!(in_filtration(&id, &tiny).unwrap());
    }

    #[test]
    fn filtration_rejects_ratfun() {
        let field = crate::rings::RatFunField::new(vec!["s".into()]).unwrap();
        let g = Germ::identity(field, 4).unwrap();
        let class = FiltrationClass::new(rat(2, 1), None).unwrap();
        assert!(matches!(in_filtration(&g, &class), Err(Error::UnsupportedRing(_))));
    }

    #[test]
    fn c_membership_bracket() {
        // For f0 the max of |A~_n|^(1/(n-1)) is exactly 3 (attained at every n).
        let m = c_membership(&f0(16), &rat(1, 1000)).unwrap();
        let (lo, hi) = m.bracket.unwrap();
        assert!(lo <= rat(3, 1) && rat(3, 1) <= hi);
        assert!(&hi - &lo <= rat(1, 1000));
        let id = Germ::identity(Rationals, 8).unwrap();
        assert!(c_membership(&id, &rat(1, 1000)).unwrap().attained.is_none());
    }

    #[test]
    fn radius_estimate_brackets() {
        // |a_n| = 2^(-n) gives estimate exactly 2.
        let coeffs: Vec<BigRational> = (1..=8).map(|n| rat(1, 1 << n)).collect();
        let f = Germ::new(Rationals, coeffs).unwrap();
        match radius_estimate(&f, &rat(1, 1 << 20)).unwrap() {
            RadiusEstimate::Bracket { lo, hi } => {
                assert!(lo <= rat(2, 1) && rat(2, 1) <= hi);
            }
            other => panic!("unexpected {other:?}"),
        }
        // Homotheties have no higher coefficients: unbounded estimate.
        let m = Germ::homothety(Rationals, rat(7, 1), 6).unwrap();
        assert_eq!(radius_estimate(&m, &rat(1, 64)).unwrap(), RadiusEstimate::Unbounded);
        // z + z^N alone brackets near 1.
        let mut coeffs = vec![BigRational::zero(); 8];
        coeffs[0] = BigRational::one();
        coeffs[7] = BigRational::one();
        let f = Germ::new(Rationals, coeffs).unwrap();
        match radius_estimate(&f, &rat(1, 1024)).unwrap() {
            RadiusEstimate::Bracket { lo, hi } => {
                assert!(lo <= rat(1, 1) && rat(1, 1) <= hi);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn majorant_coefficients() {
        let ks = majorant_inverse_coefficients(3).unwrap();
        assert_eq!(ks, vec![BigInt::from(1), BigInt::from(1), BigInt::from(3)]);
    }

    #[test]
    fn closure_constant_edge() {
        assert!(closure_constants(&rat(1, 1), 8).is_err());
        let c = closure_constants(&rat(2, 1), 16).unwrap();
        assert!(c >= rat(4, 1));
    }

    #[test]
    fn convex_combination_endpoints() {
        let f0 = germ(&[rat(2, 1), rat(1, 1)], 5);
        let f1 = germ(&[rat(3, 1), rat(-1, 1)], 5);
        assert!(convex_combine(&f0, &f1, &rat(0, 1)).unwrap().agrees_with(&f0));
        assert!(convex_combine(&f0, &f1, &rat(1, 1)).unwrap().agrees_with(&f1));
    }

    #[test]
    fn convex_combination_degenerate_parameter() {
        // A1(f_t) = (1-t) - t = 0 at t = 1/2.
        let f0 = germ(&[rat(1, 1)], 3);
        let f1 = germ(&[rat(-1, 1)], 3);
        assert_eq!(convex_combine(&f0, &f1, &rat(1, 2)), Err(Error::DegenerateCombination));
    }
}
