//! Representations of surface groups into germ groups, with relator
//! certificates and nontriviality witnesses.
//!
//! Builders construct the flow representations of the three-boundary
//! genus-2 presentation, the even and odd non-orientable presentations, and
//! the Koenigs (twisted-conjugacy) representation of the standard genus-2
//! presentation. Every build verifies all relators to the truncation order
//! and stores the certificate; a relator failure indicates an implementation
//! fault, never expected behavior, when the preconditions hold.
//!
//! Nontriviality is one-sided by design: a word whose image agrees with the
//! identity to order N is reported `UndecidedAtOrder(N)`; triviality is
//! never claimed.

pub mod freepair;
pub mod generic;
pub mod orbit;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::germgroup::word_eval;
use crate::koenigs::{solve_twisted_conjugacy, Flow};
use crate::presentations::{self, SurfacePresentation};
use crate::rings::Ring;
use crate::series::{compose, compose_pow, invert, Germ};
use crate::words::FreeWord;

pub use freepair::{explicit_free_pair, f0_coefficients, g0_coefficients};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorCertificate {
    pub relator: String,
    pub verified_to_order: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation<R: Ring> {
    /// Registry name of the presentation.
    pub presentation: String,
    /// Generator images, in presentation order.
    pub generators: Vec<(String, Germ<R>)>,
    pub order: usize,
    pub certificate: Vec<RelatorCertificate>,
}

impl<R: Ring> Representation<R> {
    /// Evaluate relators on the generator images and certify each one.
    pub fn build(pres: &dyn SurfacePresentation, images: Vec<Germ<R>>) -> Result<Self> {
        let names = pres.generator_names();
        if images.len() != names.len() {
            return Err(Error::Parameter(format!(
                "presentation {} has {} generators, got {} images",
                pres.name(),
                names.len(),
                images.len()
            )));
        }
        let order = images.iter().map(Germ::order).min().ok_or(Error::OrderZero)?;
        let mut certificate = Vec::new();
        for relator in pres.relators() {
            let image = word_eval(&relator, &images)?;
            if let Some((index, _)) = image.first_deviation_from_identity() {
                return Err(Error::RelatorFailure {
                    relator: relator.display(Some(&names)),
                    index,
                });
            }
            certificate.push(RelatorCertificate {
                relator: relator.display(Some(&names)),
                verified_to_order: image.order(),
            });
        }
        Ok(Representation {
            presentation: pres.name(),
            generators: names.into_iter().zip(images).collect(),
            order,
            certificate,
        })
    }

    pub fn images(&self) -> Vec<Germ<R>> {
        self.generators.iter().map(|(_, g)| g.clone()).collect()
    }

    /// Re-verify every relator by independent re-evaluation through the
    /// series layer only.
    pub fn verify(&self) -> Result<()> {
        let pres = presentations::lookup(&self.presentation)?;
        let images = self.images();
        let names = pres.generator_names();
        for relator in pres.relators() {
            let image = word_eval(&relator, &images)?;
            if let Some((index, _)) = image.first_deviation_from_identity() {
                return Err(Error::RelatorFailure {
                    relator: relator.display(Some(&names)),
                    index,
                });
            }
        }
        Ok(())
    }

    /// Evaluate a word over the presentation generators.
    pub fn evaluate(&self, word: &FreeWord) -> Result<Germ<R>> {
        word_eval(word, &self.images())
    }
}

/// First coefficient index where a word's image deviates from the identity.
#[derive(Debug, Clone, PartialEq)]
pub enum Nontriviality<R: Ring> {
    /// All coefficients below `index` equal those of the identity; the one
    /// at `index` does not.
    Deviates { index: usize, coefficient: R::Elem },
    /// The image agrees with the identity to this order. Not a triviality
    /// claim: a truncation can never certify that a germ is the identity.
    UndecidedAtOrder(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct NontrivialityCertificate<R: Ring> {
    pub word: FreeWord,
    pub result: Nontriviality<R>,
}

/// Evaluate each word on the generator images and report the first
/// deviating coefficient. Runs data-parallel over the word list with
/// deterministic output order.
pub fn certify_nontrivial<R: Ring>(
    rep: &Representation<R>,
    words: &[FreeWord],
) -> Result<Vec<NontrivialityCertificate<R>>> {
    let images = rep.images();
    words
        .par_iter()
        .map(|w| {
            let image = word_eval(w, &images)?;
            let result = match image.first_deviation_from_identity() {
                Some((index, coefficient)) => Nontriviality::Deviates { index, coefficient },
                None => Nontriviality::UndecidedAtOrder(image.order()),
            };
            Ok(NontrivialityCertificate { word: w.clone(), result })
        })
        .collect()
}

/// The flow representation of the three-boundary genus-2 presentation:
/// a_i -> f_i and t_i -> flow(f_i, s_i) o flow(f_0, s_0)^{-1} with
/// f_0 = f_2^{-1} o f_1^{-1}. The inverse flow on the 0-component makes the
/// specialization s = (l0^N, l1^N, l2^N) equal to rho_0 o p o tau^N exactly
/// (and s = (1,1,1) equal to rho_0 o p); any centralizer element of f_0
/// keeps the relators valid, so well-definedness is unaffected.
pub fn build_rep_genus2_flows<R: Ring>(
    f1: &Germ<R>,
    f2: &Germ<R>,
    s: (&R::Elem, &R::Elem, &R::Elem),
) -> Result<Representation<R>> {
    let f0 = invert(&compose(f1, f2)?)?;
    let flow0 = Flow::new(&f0)?;
    let flow1 = Flow::new(f1)?;
    let flow2 = Flow::new(f2)?;
    let t1 = compose(&flow1.at(s.1)?, &flow0.at_inverse(s.0)?)?;
    let t2 = compose(&flow2.at(s.2)?, &flow0.at_inverse(s.0)?)?;
    let pres = presentations::Genus2ThreeBoundary;
    Representation::build(&pres, vec![f0, f1.clone(), f2.clone(), t1, t2])
}

/// The even non-orientable representation: a_i -> f_i and
/// b_i -> phi^s o f_i^{-1} o phi^{-s}, phi the flow of (f_1^2 o f_2^2)^{-1}.
pub fn build_rep_n4<R: Ring>(
    f1: &Germ<R>,
    f2: &Germ<R>,
    s: &R::Elem,
) -> Result<Representation<R>> {
    let gamma = invert(&compose(&compose_pow(f1, 2)?, &compose_pow(f2, 2)?)?)?;
    let phi = Flow::new(&gamma)?;
    let phi_s = phi.at(s)?;
    let phi_s_inv = invert(&phi_s)?;
    let conj = |g: &Germ<R>| -> Result<Germ<R>> { compose(&compose(&phi_s, g)?, &phi_s_inv) };
    let b1 = conj(&invert(f1)?)?;
    let b2 = conj(&invert(f2)?)?;
    let pres = presentations::N4;
    Representation::build(&pres, vec![f1.clone(), f2.clone(), b1, b2])
}

/// Generators for the odd non-orientable case from a free pair:
/// f_i = g1^i o g2^2 o g1^{-i} for i < k and f_k = g1^k o g2 o g1^{-k}.
pub fn derive_nodd_generators<R: Ring>(
    g1: &Germ<R>,
    g2: &Germ<R>,
    k: usize,
) -> Result<Vec<Germ<R>>> {
    if k < 2 {
        return Err(Error::Parameter("odd-genus construction needs k >= 2".into()));
    }
    let mut out = Vec::with_capacity(k);
    for i in 1..=k {
        let core = if i < k { compose_pow(g2, 2)? } else { g2.clone() };
        let left = compose_pow(g1, i as i64)?;
        let right = compose_pow(g1, -(i as i64))?;
        out.push(compose(&compose(&left, &core)?, &right)?);
    }
    Ok(out)
}

/// The odd non-orientable representation on < a1..ak, c, b1..bk >:
/// c -> phi^s o f_k^{-2} o phi^{-s} and
/// b_i -> phi^s psi^{s'} o f_i^{+-1} o (phi^s psi^{s'})^{-1}, where phi flows
/// through (f_1^2 o ... o f_k^2)^{-1} and psi through
/// f_k^2 o f_{k-1}^{-2} o ... o f_1^{-2}.
pub fn build_rep_nodd<R: Ring>(
    fs: &[Germ<R>],
    s: &R::Elem,
    s_prime: &R::Elem,
) -> Result<Representation<R>> {
    let k = fs.len();
    if k < 2 {
        return Err(Error::Parameter("odd-genus representation needs k >= 2 generators".into()));
    }
    let order = fs.iter().map(Germ::order).min().expect("nonempty");
    let ring = fs[0].ring().clone();

    let mut squares = Germ::identity(ring.clone(), order)?;
    for f in fs {
        squares = compose(&squares, &compose_pow(f, 2)?)?;
    }
    let gamma = invert(&squares)?;

    let mut delta = compose_pow(&fs[k - 1], 2)?;
    for f in fs[..k - 1].iter().rev() {
        delta = compose(&delta, &compose_pow(f, -2)?)?;
    }

    let phi = Flow::new(&gamma)?;
    let psi = Flow::new(&delta)?;
    let phi_s = phi.at(s)?;
    let u = compose(&phi_s, &psi.at(s_prime)?)?;
    let u_inv = invert(&u)?;

    let c_image = compose(&compose(&phi_s, &compose_pow(&fs[k - 1], -2)?)?, &invert(&phi_s)?)?;
    let mut images: Vec<Germ<R>> = fs.to_vec();
    images.push(c_image);
    for (i, f) in fs.iter().enumerate() {
        let core = if i + 1 < k { invert(f)? } else { f.clone() };
        images.push(compose(&compose(&u, &core)?, &u_inv)?);
    }
    let pres = presentations::NOdd::new(k)?;
    Representation::build(&pres, images)
}

/// The Koenigs representation of the standard genus-2 presentation: given
/// (g, fbar, gbar), solve for the unique tangent-to-identity f with
/// [f, g] = [fbar, gbar] and certify the relator.
pub fn build_rep_genus2_koenigs<R: Ring>(
    g: &Germ<R>,
    fbar: &Germ<R>,
    gbar: &Germ<R>,
) -> Result<Representation<R>> {
    let f = solve_twisted_conjugacy(g, fbar, gbar)?;
    let pres = presentations::Genus2Standard;
    Representation::build(&pres, vec![f, g.clone(), fbar.clone(), gbar.clone()])
}

/// The separation seed: rho(a) = [m_2 f0, m_3 g0] and rho(b) = (m_3 g0)^{-1}
/// over the rationals. rho(a) is tangent to the identity and rho(b) is a
/// contraction, so the triple (rho(b), rho(a), rho(b)) feeds the Koenigs
/// builder and the solver must reproduce rho(a) by uniqueness.
pub fn separation_seed(order: usize) -> Result<(Germ<crate::rings::Rationals>, Germ<crate::rings::Rationals>)> {
    use crate::rings::Rationals;
    let ring = Rationals;
    let (f0, g0) = explicit_free_pair(&ring, order)?;
    let m2 = Germ::homothety(ring, num::BigRational::from_integer(2.into()), order)?;
    let m3 = Germ::homothety(ring, num::BigRational::from_integer(3.into()), order)?;
    let f1 = compose(&m2, &f0)?;
    let f2 = compose(&m3, &g0)?;
    let rho_a = crate::germgroup::commutator(&f1, &f2)?;
    let rho_b = invert(&f2)?;
    Ok((rho_a, rho_b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::{Rationals, Ring};
    use num::{BigInt, BigRational, One};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn germ(coeffs: &[BigRational], order: usize) -> Germ<Rationals> {
        let mut v = coeffs.to_vec();
        v.resize(order, Rationals.zero());
        Germ::new(Rationals, v).unwrap()
    }

    fn sample_hyperbolic_pair(order: usize) -> (Germ<Rationals>, Germ<Rationals>) {
        let f1 = germ(&[rat(2, 1), rat(1, 1)], order);
        let f2 = germ(&[rat(3, 1), rat(0, 1), rat(1, 2)], order);
        (f1, f2)
    }

    #[test]
    fn genus2_flow_relators_certify() {
        let (f1, f2) = sample_hyperbolic_pair(12);
        let rep =
            build_rep_genus2_flows(&f1, &f2, (&rat(5, 7), &rat(2, 3), &rat(9, 4))).unwrap();
        assert_eq!(rep.certificate.len(), 2);
        rep.verify().unwrap();
    }

    #[test]
    fn genus2_flow_at_unit_parameters_is_rho0_p() {
        let (f1, f2) = sample_hyperbolic_pair(10);
        let one = rat(1, 1);
        let rep = build_rep_genus2_flows(&f1, &f2, (&one, &one, &one)).unwrap();
        // t_i must be the identity germ.
        assert!(rep.generators[3].1.is_identity());
        assert!(rep.generators[4].1.is_identity());
    }

    #[test]
    fn genus2_flow_twist_specialization() {
        // At s = (l0^N, l1^N, l2^N) the representation equals
        // rho_0 o p o tau^N on arbitrary words.
        let (f1, f2) = sample_hyperbolic_pair(10);
        let l1 = rat(2, 1);
        let l2 = rat(3, 1);
        let l0 = rat(1, 6);
        let pres = presentations::Genus2ThreeBoundary;
        let rho0 = |w: &FreeWord| -> Germ<Rationals> {
            // rho_0 on the (a1, a2) free basis.
            word_eval(w, &[f1.clone(), f2.clone()]).unwrap()
        };
        for n in 0..=3u32 {
            let pw = |x: &BigRational| -> BigRational {
                let mut acc = rat(1, 1);
                for _ in 0..n {
                    acc *= x;
                }
                acc
            };
            let rep =
                build_rep_genus2_flows(&f1, &f2, (&pw(&l0), &pw(&l1), &pw(&l2))).unwrap();
            for word_text in ["t1", "t2", "a1 t1^-1 a2", "t1 t2^-1 a0"] {
                let w = pres.parse_word(word_text, false).unwrap();
                let lhs = rep.evaluate(&w).unwrap();
                let rhs = rho0(&pres.project(&pres.twist(&w, n as u64).unwrap()).unwrap());
                assert!(lhs.agrees_with(&rhs), "N={n} word={word_text}");
            }
        }
    }

    #[test]
    fn n4_relator_certifies_and_specializes() {
        let (f1, f2) = sample_hyperbolic_pair(10);
        let rep = build_rep_n4(&f1, &f2, &rat(3, 5)).unwrap();
        rep.verify().unwrap();
        // rho_{lambda^N} = rho_0 o p o tau^N with lambda = A_1(gamma image).
        let pres = presentations::N4;
        let lambda = rat(1, 36); // (2^2 * 3^2)^{-1}
        for n in 0..=2u32 {
            let mut s = rat(1, 1);
            for _ in 0..n {
                s *= &lambda;
            }
            let rep_n = build_rep_n4(&f1, &f2, &s).unwrap();
            for word_text in ["b1", "b2 a1", "b1^2 a2^-1"] {
                let w = pres.parse_word(word_text, false).unwrap();
                let lhs = rep_n.evaluate(&w).unwrap();
                let projected = pres.project(&pres.twist(&w, n as u64).unwrap()).unwrap();
                let rhs = word_eval(&projected, &[f1.clone(), f2.clone()]).unwrap();
                assert!(lhs.agrees_with(&rhs), "N={n} word={word_text}");
            }
        }
    }

    #[test]
    fn nodd_relator_certifies_and_unit_parameters_match_p() {
        let g1 = germ(&[rat(2, 1), rat(1, 1)], 8);
        let g2 = germ(&[rat(3, 1), rat(1, 2)], 8);
        let fs = derive_nodd_generators(&g1, &g2, 2).unwrap();
        assert_eq!(fs.len(), 2);
        // f_i' (0): f_1 = g1 g2^2 g1^-1 has derivative 9 > 1; f_2 = g1^2 g2 g1^-2 has 3.
        assert_eq!(fs[0].linear_coefficient(), &rat(9, 1));
        assert_eq!(fs[1].linear_coefficient(), &rat(3, 1));
        let rep = build_rep_nodd(&fs, &rat(1, 1), &rat(1, 1)).unwrap();
        rep.verify().unwrap();
        // At (s, s') = (1, 1): c -> f_k^-2, b_i -> f_i^-1 for i < k, b_k -> f_k.
        assert!(rep.generators[2].1.agrees_with(&invert(&compose_pow(&fs[1], 2).unwrap()).unwrap()));
        assert!(rep.generators[3].1.agrees_with(&invert(&fs[0]).unwrap()));
        assert!(rep.generators[4].1.agrees_with(&fs[1]));
    }

    #[test]
    fn nodd_twist_specialization() {
        let g1 = germ(&[rat(2, 1), rat(1, 1)], 8);
        let g2 = germ(&[rat(3, 1), rat(1, 2)], 8);
        let fs = derive_nodd_generators(&g1, &g2, 2).unwrap();
        let pres = presentations::NOdd::new(2).unwrap();
        // lambda = A_1(gamma image) = (81 * 9)^{-1}; mu = A_1(delta image) = 9/81.
        let lambda = rat(1, 729);
        let mu = rat(9, 81);
        let rho0_images = [fs[0].clone(), fs[1].clone()];
        for n in 0..=2u32 {
            let pw = |x: &BigRational| {
                let mut acc = rat(1, 1);
                for _ in 0..n {
                    acc *= x;
                }
                acc
            };
            let rep = build_rep_nodd(&fs, &pw(&lambda), &pw(&mu)).unwrap();
            for word_text in ["c", "b1", "b2 c^-1 a1"] {
                let w = pres.parse_word(word_text, false).unwrap();
                let lhs = rep.evaluate(&w).unwrap();
                let projected = pres.project(&pres.twist(&w, n as u64).unwrap()).unwrap();
                let rhs = word_eval(&projected, &rho0_images).unwrap();
                assert!(lhs.agrees_with(&rhs), "N={n} word={word_text}");
            }
        }
    }

    #[test]
    fn koenigs_representation_certifies() {
        let g = Germ::homothety(Rationals, rat(1, 2), 16).unwrap();
        let fbar = germ(&[rat(1, 1), rat(1, 1)], 16);
        let gbar = Germ::homothety(Rationals, rat(1, 3), 16).unwrap();
        let rep = build_rep_genus2_koenigs(&g, &fbar, &gbar).unwrap();
        rep.verify().unwrap();
        assert_eq!(rep.generators[0].1.linear_coefficient(), &rat(1, 1));
    }

    #[test]
    fn koenigs_representation_trivial_bars() {
        let g = Germ::homothety(Rationals, rat(1, 2), 8).unwrap();
        let id = Germ::identity(Rationals, 8).unwrap();
        let rep = build_rep_genus2_koenigs(&g, &id, &id).unwrap();
        assert!(rep.generators[0].1.is_identity());
    }

    #[test]
    fn separation_seed_round_trips_through_the_solver() {
        let (rho_a, rho_b) = separation_seed(10).unwrap();
        assert_eq!(rho_a.linear_coefficient(), &rat(1, 1));
        assert_eq!(rho_b.linear_coefficient(), &rat(1, 3));
        let rep = build_rep_genus2_koenigs(&rho_b, &rho_a, &rho_b).unwrap();
        // Uniqueness forces the solved generator to equal rho(a).
        assert!(rep.generators[0].1.agrees_with(&rho_a));
    }

    #[test]
    fn certify_reports_first_deviation() {
        let (f1, f2) = sample_hyperbolic_pair(12);
        let rep =
            build_rep_genus2_flows(&f1, &f2, (&rat(5, 7), &rat(2, 3), &rat(9, 4))).unwrap();
        let pres = presentations::Genus2ThreeBoundary;
        let relator = pres.relators()[0].clone();
        let a1 = FreeWord::generator(1);
        let certs = certify_nontrivial(&rep, &[relator, a1]).unwrap();
        assert!(matches!(certs[0].result, Nontriviality::UndecidedAtOrder(12)));
        match &certs[1].result {
            Nontriviality::Deviates { index: 1, coefficient } => {
                assert_eq!(coefficient, &rat(2, 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn commutator_certificate_on_the_free_pair() {
        let ring = Rationals;
        let (f0, g0) = explicit_free_pair(&ring, 24).unwrap();
        let pres = presentations::Genus2Standard;
        // Use the free pair as (a1, b1) images and fold a2, b2 onto them:
        // the relator holds trivially, giving a certified representation.
        let rep = Representation::build(
            &pres,
            vec![f0.clone(), g0.clone(), f0.clone(), g0.clone()],
        )
        .unwrap();
        let w = FreeWord::generator(0).commutator(&FreeWord::generator(1));
        let certs = certify_nontrivial(&rep, &[w]).unwrap();
        match &certs[0].result {
            Nontriviality::Deviates { index, coefficient } => {
                assert!(*index <= 24);
                assert!(coefficient.denom().is_one());
            }
            other => panic!("commutator should deviate, got {other:?}"),
        }
    }
}
