//! Linearization of germs with non-resonant derivative, multiplicative
//! flows, the twisted-conjugacy solver, and the commutator decomposition.
//!
//! Convention: the linearizer h satisfies h o f = m_lambda o h with
//! A_1(h) = 1, lambda = A_1(f). Flows are flow(f, s) = h^{-1} o m_s o h, so
//! that flow(f, lambda) = f to the truncation order.
//!
//! Truncated linearization only needs lambda^j != 1 for j up to the order
//! (mode `FormalToOrder`); the `Hyperbolic` flag additionally records
//! |lambda| != 1, the hypothesis under which the untruncated series
//! converges. Over the p-adic ring, each division by lambda^j - 1 subtracts
//! the divisor's valuation from the certified digits and fails loudly when
//! nothing remains.

use crate::error::{Error, Result};
use crate::germgroup::commutator;
use crate::rings::Ring;
use crate::series::{compose, invert, Germ};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearizationMode {
    /// |A_1(f)| != 1: the paper's convergence hypothesis also holds.
    Hyperbolic,
    /// Only the order-bounded non-resonance lambda^j != 1, j <= N, was
    /// checked (all that truncated linearization needs).
    FormalToOrder,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Linearization<R: Ring> {
    /// Normalized linearizer: A_1(h) = 1 and h o f = m_lambda o h.
    pub h: Germ<R>,
    pub lambda: R::Elem,
    pub mode: LinearizationMode,
}

/// Reject lambda with lambda^j = 1 for some 1 <= j <= n. Over the p-adic
/// ring a vanishing residue of lambda^j - 1 is a precision failure, not a
/// certified root of unity.
fn root_of_unity_check<R: Ring>(ring: &R, lambda: &R::Elem, n: usize) -> Result<()> {
    let mut pow = ring.one();
    for j in 1..=n {
        pow = ring.mul(&pow, lambda);
        if ring.eq_elem(&pow, &ring.one()) {
            if ring.is_exact() {
                return Err(Error::RootOfUnityObstruction(j));
            }
            return Err(Error::PrecisionExhausted(format!(
                "lambda^{j} - 1 has no certified nonzero digit"
            )));
        }
    }
    Ok(())
}

/// Solve h o f = m_lambda o h coefficient by coefficient. Comparing z^n
/// coefficients gives the ascending recursion
///   h_n = -(sum_{k<n} h_k [z^n](f^k)) / (lambda (lambda^(n-1) - 1)),
/// whose denominators are exactly the non-resonance quantities; each h_n is
/// a polynomial in the A_i(f) and the (lambda^j - 1)^{-1}.
pub fn linearize<R: Ring>(f: &Germ<R>) -> Result<Linearization<R>> {
    let ring = f.ring().clone();
    let n = f.order();
    let lambda = f.linear_coefficient().clone();
    root_of_unity_check(&ring, &lambda, n)?;

    // Powers f^k as coefficient rows indexed from z^0, truncated at z^n.
    let mut frow = vec![ring.zero(); n + 1];
    for (i, c) in f.coeffs().iter().enumerate() {
        frow[i + 1] = c.clone();
    }
    let mut powers: Vec<Vec<R::Elem>> = Vec::with_capacity(n);
    powers.push(frow.clone());
    for _ in 2..n {
        let prev = powers.last().expect("nonempty");
        powers.push(mul_rows(&ring, prev, &frow, n + 1));
    }

    let mut h = vec![ring.zero(); n];
    h[0] = ring.one();
    let mut lambda_pow = ring.one(); // lambda^(m-1) while solving h_m
    for m in 2..=n {
        lambda_pow = ring.mul(&lambda_pow, &lambda);
        let mut s = ring.zero();
        for k in 1..m {
            let contrib = ring.mul(&h[k - 1], &powers[k - 1][m]);
            s = ring.add(&s, &contrib);
        }
        let denom = ring.mul(&lambda, &ring.sub(&lambda_pow, &ring.one()));
        h[m - 1] = ring.neg(&ring.div(&s, &denom)?);
    }
    let h = Germ::new(ring.clone(), h)?;

    let mode = if ring.supports_abs() {
        match ring.abs(&lambda) {
            Ok(a) if a != num::BigRational::from_integer(1.into()) => LinearizationMode::Hyperbolic,
            _ => LinearizationMode::FormalToOrder,
        }
    } else {
        LinearizationMode::FormalToOrder
    };
    Ok(Linearization { h, lambda, mode })
}

fn mul_rows<R: Ring>(ring: &R, a: &[R::Elem], b: &[R::Elem], len: usize) -> Vec<R::Elem> {
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

/// The multiplicative flow through f, reusing one linearization for many
/// exponents. flow(lambda) = f and flow(s) o flow(s') = flow(s s') to the
/// truncation order.
#[derive(Debug, Clone)]
pub struct Flow<R: Ring> {
    lin: Linearization<R>,
    h_inv: Germ<R>,
}

impl<R: Ring> Flow<R> {
    pub fn new(f: &Germ<R>) -> Result<Self> {
        let lin = linearize(f)?;
        let h_inv = invert(&lin.h)?;
        Ok(Flow { lin, h_inv })
    }

    pub fn linearization(&self) -> &Linearization<R> {
        &self.lin
    }

    /// h^{-1} o m_s o h; s must be invertible.
    pub fn at(&self, s: &R::Elem) -> Result<Germ<R>> {
        let ring = self.lin.h.ring().clone();
        ring.inv(s).map_err(|_| Error::NonInvertibleScalar)?;
        let m = Germ::homothety(ring, s.clone(), self.lin.h.order())?;
        compose(&self.h_inv, &compose(&m, &self.lin.h)?)
    }

    /// flow at s^{-1} = (flow at s)^{-1}.
    pub fn at_inverse(&self, s: &R::Elem) -> Result<Germ<R>> {
        let ring = self.lin.h.ring().clone();
        let s_inv = ring.inv(s).map_err(|_| Error::NonInvertibleScalar)?;
        self.at(&s_inv)
    }
}

/// One-shot flow evaluation.
pub fn flow<R: Ring>(f: &Germ<R>, s: &R::Elem) -> Result<Germ<R>> {
    Flow::new(f)?.at(s)
}

/// Given g, fbar, gbar with A_1(g) non-resonant, produce the unique f
/// tangent to the identity with [f, g] = [fbar, gbar] to the truncation
/// order: linearize g and [fbar,gbar] o g to the same homothety and take
/// f = h_2^{-1} o h_1.
pub fn solve_twisted_conjugacy<R: Ring>(
    g: &Germ<R>,
    fbar: &Germ<R>,
    gbar: &Germ<R>,
) -> Result<Germ<R>> {
    let lin1 = linearize(g)?;
    let twisted = compose(&commutator(fbar, gbar)?, g)?;
    let lin2 = linearize(&twisted)?;
    compose(&invert(&lin2.h)?, &lin1.h)
}

/// Write a tangent-to-identity f as a commutator [h, m_lambda]: linearize
/// f o m_lambda to get k with k o (f o m_lambda) = m_lambda o k and take
/// h = k^{-1}. The bracket convention [x, y] = x o y o x^{-1} o y^{-1} is
/// verified by direct evaluation in the tests.
pub fn express_as_commutator<R: Ring>(
    f: &Germ<R>,
    lambda: &R::Elem,
) -> Result<(Germ<R>, Germ<R>)> {
    let ring = f.ring().clone();
    if !ring.is_one(f.linear_coefficient()) {
        return Err(Error::NotTangentToIdentity);
    }
    let m = Germ::homothety(ring, lambda.clone(), f.order())?;
    let k = linearize(&compose(f, &m)?)?;
    Ok((invert(&k.h)?, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{RatFunField, Rationals, Ring};
    use num::{BigInt, BigRational, Zero};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn germ(coeffs: &[BigRational], order: usize) -> Germ<Rationals> {
        let mut v = coeffs.to_vec();
        v.resize(order, BigRational::zero());
        Germ::new(Rationals, v).unwrap()
    }

    #[test]
    fn linearize_homothety_is_identity() {
        let m = Germ::homothety(Rationals, rat(5, 2), 8).unwrap();
        let lin = linearize(&m).unwrap();
        assert!(lin.h.is_identity());
        assert_eq!(lin.mode, LinearizationMode::Hyperbolic);
    }

    #[test]
    fn linearize_hand_example() {
        // f = z/2 + z^2 has h = z + 4z^2 at order 2 (h_2 = 1/(lambda(1-lambda))).
        let f = germ(&[rat(1, 2), rat(1, 1)], 2);
        let lin = linearize(&f).unwrap();
        assert!(lin.h.agrees_with(&germ(&[rat(1, 1), rat(4, 1)], 2)));
    }

    #[test]
    fn linearization_functional_equation() {
        let f = germ(&[rat(1, 2), rat(1, 3), rat(-2, 1), rat(7, 5)], 12);
        let lin = linearize(&f).unwrap();
        let m = Germ::homothety(Rationals, lin.lambda.clone(), 12).unwrap();
        assert!(compose(&lin.h, &f).unwrap().agrees_with(&compose(&m, &lin.h).unwrap()));
        assert!(Rationals.is_one(lin.h.linear_coefficient()));
    }

    #[test]
    fn tangent_to_identity_is_obstructed() {
        let f = germ(&[rat(1, 1), rat(1, 1)], 4);
        assert_eq!(linearize(&f), Err(Error::RootOfUnityObstruction(1)));
        let g = germ(&[rat(-1, 1), rat(1, 1)], 4);
        assert_eq!(linearize(&g), Err(Error::RootOfUnityObstruction(2)));
    }

    #[test]
    fn flow_reproduces_the_germ_at_lambda() {
        let f = germ(&[rat(1, 2), rat(1, 1)], 10);
        let out = flow(&f, &rat(1, 2)).unwrap();
        assert!(out.agrees_with(&f));
        assert!(flow(&f, &rat(1, 1)).unwrap().is_identity());
    }

    #[test]
    fn flow_of_homothety() {
        let m = Germ::homothety(Rationals, rat(3, 1), 6).unwrap();
        let out = flow(&m, &rat(7, 2)).unwrap();
        assert!(out.agrees_with(&Germ::homothety(Rationals, rat(7, 2), 6).unwrap()));
    }

    #[test]
    fn flow_group_law_and_commutation() {
        let f = germ(&[rat(2, 1), rat(1, 1), rat(1, 2)], 10);
        let fl = Flow::new(&f).unwrap();
        let a = fl.at(&rat(3, 1)).unwrap();
        let b = fl.at(&rat(5, 7)).unwrap();
        let ab = fl.at(&rat(15, 7)).unwrap();
        assert!(compose(&a, &b).unwrap().agrees_with(&ab));
        assert!(compose(&a, &f).unwrap().agrees_with(&compose(&f, &a).unwrap()));
    }

    #[test]
    fn koenigs_uniqueness_under_flow_conjugation() {
        // Linearizing h^{-1} m_lambda h recovers the same normalized h.
        let f = germ(&[rat(1, 2), rat(1, 1), rat(3, 4)], 10);
        let lin = linearize(&f).unwrap();
        let rebuilt = flow(&f, &lin.lambda).unwrap();
        let lin2 = linearize(&rebuilt).unwrap();
        assert!(compose(&lin2.h, &invert(&lin.h).unwrap()).unwrap().is_identity());
    }

    #[test]
    fn twisted_conjugacy_identities() {
        let g = Germ::homothety(Rationals, rat(1, 2), 8).unwrap();
        let id = Germ::identity(Rationals, 8).unwrap();
        // fbar = gbar = id forces f = id.
        let f = solve_twisted_conjugacy(&g, &id, &id).unwrap();
        assert!(f.is_identity());
        // gbar = id makes [fbar, gbar] = id, again forcing f = id.
        let fbar = germ(&[rat(1, 1), rat(1, 1)], 8);
        let f = solve_twisted_conjugacy(&g, &fbar, &id).unwrap();
        assert!(f.is_identity());
    }

    #[test]
    fn twisted_conjugacy_spec_example() {
        let g = Germ::homothety(Rationals, rat(1, 2), 16).unwrap();
        let fbar = germ(&[rat(1, 1), rat(1, 1)], 16);
        let gbar = Germ::homothety(Rationals, rat(1, 3), 16).unwrap();
        let f = solve_twisted_conjugacy(&g, &fbar, &gbar).unwrap();
        assert!(Rationals.is_one(f.linear_coefficient()));
        let lhs = commutator(&f, &g).unwrap();
        let rhs = commutator(&fbar, &gbar).unwrap();
        assert!(lhs.agrees_with(&rhs));
    }

    #[test]
    fn commutator_split_round_trip() {
        let f = germ(&[rat(1, 1), rat(1, 1)], 16);
        let (h, m) = express_as_commutator(&f, &rat(2, 1)).unwrap();
        let back = commutator(&h, &m).unwrap();
        assert!(back.agrees_with(&f));
        // f = id gives h = id.
        let id = Germ::identity(Rationals, 8).unwrap();
        let (h, _) = express_as_commutator(&id, &rat(2, 1)).unwrap();
        assert!(h.is_identity());
    }

    #[test]
    fn commutator_split_requires_unit_derivative() {
        let f = germ(&[rat(2, 1), rat(1, 1)], 8);
        assert_eq!(express_as_commutator(&f, &rat(2, 1)), Err(Error::NotTangentToIdentity));
    }

    #[test]
    fn linearizer_denominators_divide_the_resonance_product() {
        // Over Q(l) with lambda = l, the denominator of h_n divides
        // l^(n-1) * prod_{j<=n-1} (l^j - 1).
        let field = RatFunField::new(vec!["l".into()]).unwrap();
        let l = field.variable(0).unwrap();
        let n = 6;
        let mut coeffs = vec![field.from_i64(1); n];
        coeffs[0] = l.clone();
        let f = Germ::new(field.clone(), coeffs).unwrap();
        let lin = linearize(&f).unwrap();
        let lpoly = crate::rings::mpoly::MPoly::var(1, 0);
        for m in 2..=n {
            let h_m = lin.h.coefficient(m).unwrap();
            let mut bound = crate::rings::mpoly::MPoly::one(1);
            for _ in 0..m - 1 {
                bound = bound.mul(&lpoly);
            }
            for j in 1..=m - 1 {
                let mut pw = crate::rings::mpoly::MPoly::one(1);
                for _ in 0..j {
                    pw = pw.mul(&lpoly);
                }
                bound = bound.mul(&pw.sub(&crate::rings::mpoly::MPoly::one(1)));
            }
            // Divisibility over Q: compare against the primitive part of the
            // canonical integer denominator.
            let den = &h_m.den;
            let den_pp = den
                .div_exact(&crate::rings::mpoly::MPoly::constant(1, den.int_content()))
                .expect("content divides");
            assert!(
                bound.div_exact(&den_pp).is_some(),
                "denominator of h_{m} does not divide the resonance product"
            );
        }
    }

    #[test]
    fn flow_coefficients_are_laurent_in_the_exponent() {
        // Over Q(s), the coefficients of flow(f, s) have monomial denominators.
        let field = RatFunField::new(vec!["s".into()]).unwrap();
        let s = field.variable(0).unwrap();
        let coeffs = vec![
            field.from_rational(&rat(1, 2)).unwrap(),
            field.from_i64(1),
            field.from_rational(&rat(-3, 4)).unwrap(),
        ];
        let f = Germ::new(field.clone(), coeffs).unwrap();
        let fl = Flow::new(&f).unwrap();
        let germ_s = fl.at(&s).unwrap();
        for n in 1..=germ_s.order() {
            let den = &germ_s.coefficient(n).unwrap().den;
            assert_eq!(den.num_terms(), 1, "denominator of A_{n} is not a monomial in s");
        }
    }
}
