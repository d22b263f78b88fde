//! The group G_p of p-adic germs with integer coefficients and unit
//! derivative, its jet filtration, and instance checks of the subgroup
//! claims.
//!
//! Freeness is never claimed: the module emits nontriviality certificates
//! for finite word lists only. Over this backend every germ coefficient is
//! already a p-adic integer; membership therefore reduces to the unit
//! condition |a_1| = 1, reported with the first violating index.

use num::BigRational;

use crate::error::{Error, Result};
use crate::germgroup::{radius_estimate, word_eval, RadiusEstimate};
use crate::reps::freepair::explicit_free_pair;
use crate::reps::{Nontriviality, NontrivialityCertificate};
use crate::rings::{PAdicRing, Ring};
use crate::series::{compose, invert, Germ};
use crate::words::FreeWord;

/// Outcome of the G_p membership check.
#[derive(Debug, Clone, PartialEq)]
pub enum GpMembership {
    Member,
    /// First coefficient index violating the conditions, with a note.
    Violation { index: usize, reason: String },
}

impl GpMembership {
    pub fn is_member(&self) -> bool {
        matches!(self, GpMembership::Member)
    }
}

/// Check f in G_p: all a_n in Z_p (structural over this backend) and
/// |a_1| = 1. The valuation of every coefficient is inspected so that a
/// non-unit a_1 is reported at index 1.
pub fn gp_membership(f: &Germ<PAdicRing>) -> Result<GpMembership> {
    let ring = f.ring();
    let a1 = f.coefficient(1)?;
    match ring.valuation(a1) {
        Some(0) => Ok(GpMembership::Member),
        Some(v) => Ok(GpMembership::Violation {
            index: 1,
            reason: format!("|a_1| = p^-{v} != 1"),
        }),
        None => Ok(GpMembership::Violation {
            index: 1,
            reason: format!("a_1 vanishes to precision {}; |a_1| = 1 cannot be certified", precision_of(ring, a1)),
        }),
    }
}

fn precision_of(_ring: &PAdicRing, a: &crate::rings::PAdic) -> u32 {
    a.prec
}

/// Instance check of the subgroup claim: f o g and f^{-1} are members (to
/// the available order and precision).
pub fn gp_closure_check(f: &Germ<PAdicRing>, g: &Germ<PAdicRing>) -> Result<bool> {
    let composed = compose(f, g)?;
    let inverse = invert(f).map_err(|e| match e {
        Error::NonInvertibleLeadingCoefficient => Error::PrecisionExhausted(
            "leading coefficient is not a certified unit".into(),
        ),
        other => other,
    })?;
    Ok(gp_membership(&composed)?.is_member() && gp_membership(&inverse)?.is_member())
}

/// Is f in the kernel G_{p,l} of the jet morphism j_l, exactly at the
/// carried precision?
pub fn jet_kernel_membership(f: &Germ<PAdicRing>, l: usize) -> Result<bool> {
    let jet = f.jet(l)?;
    Ok(jet.is_identity())
}

/// Two elements of G_{p,l} given as nested-commutator words in the explicit
/// free pair, each with a jet-kernel certificate and a joint nontriviality
/// certificate for their commutator.
#[derive(Debug, Clone)]
pub struct DerivedFreeGenerators {
    pub words: (FreeWord, FreeWord),
    pub germs: (Germ<PAdicRing>, Germ<PAdicRing>),
    /// First deviating coefficient of the commutator of the two germs.
    pub commutator_deviation: (usize, crate::rings::PAdic),
}

/// Search nested commutators of (f0, g0) for a pair lying in G_{p,l} whose
/// commutator is nontrivial to the truncation order.
pub fn derived_free_generators(
    ring: &PAdicRing,
    l: usize,
    order: usize,
) -> Result<DerivedFreeGenerators> {
    if l < 1 {
        return Err(Error::Parameter("jet order must be at least 1".into()));
    }
    if order <= l {
        return Err(Error::Parameter(format!(
            "truncation order {order} must exceed the jet order {l}"
        )));
    }
    let (f0, g0) = explicit_free_pair(ring, order)?;
    let a = FreeWord::generator(0);
    let b = FreeWord::generator(1);
    // Candidates ordered by word length: the pair itself, then nested
    // commutators which gain tangency with every level.
    let mut candidates: Vec<FreeWord> = vec![a.clone(), b.clone()];
    let mut level = vec![a.commutator(&b)];
    for _ in 0..(l + 2) {
        candidates.extend(level.iter().cloned());
        let mut next = Vec::new();
        for w in &level {
            next.push(w.commutator(&a));
            next.push(w.commutator(&b));
        }
        level = next;
    }
    let germs_for = |w: &FreeWord| -> Result<Germ<PAdicRing>> {
        word_eval(w, &[f0.clone(), g0.clone()])
    };
    let mut in_kernel: Vec<(FreeWord, Germ<PAdicRing>)> = Vec::new();
    for w in &candidates {
        let germ = germs_for(w)?;
        if jet_kernel_membership(&germ, l)? {
            in_kernel.push((w.clone(), germ));
        }
        if in_kernel.len() >= 6 {
            break;
        }
    }
    for i in 0..in_kernel.len() {
        for j in i + 1..in_kernel.len() {
            let c = crate::germgroup::commutator(&in_kernel[i].1, &in_kernel[j].1)?;
            if let Some((index, coefficient)) = c.first_deviation_from_identity() {
                return Ok(DerivedFreeGenerators {
                    words: (in_kernel[i].0.clone(), in_kernel[j].0.clone()),
                    germs: (in_kernel[i].1.clone(), in_kernel[j].1.clone()),
                    commutator_deviation: (index, coefficient),
                });
            }
        }
    }
    Err(Error::SearchBudgetExceeded(format!(
        "no pair in the j_{l} kernel with certifiably nontrivial commutator at order {order}"
    )))
}

/// The parameter family rho_t(a) = m_t o f0, rho_t(b) = g0 at a sampled
/// p-adic unit t, with nontriviality certificates for the supplied words.
#[derive(Debug, Clone)]
pub struct ParameterFamilySample {
    pub t: crate::rings::PAdic,
    pub rho_a: Germ<PAdicRing>,
    pub rho_b: Germ<PAdicRing>,
    pub certificates: Vec<NontrivialityCertificate<PAdicRing>>,
}

pub fn parameter_family_sample(
    ring: &PAdicRing,
    t: &crate::rings::PAdic,
    order: usize,
    words: &[FreeWord],
) -> Result<ParameterFamilySample> {
    match ring.valuation(t) {
        Some(0) => {}
        _ => return Err(Error::NotAUnit(ring.format_elem(t))),
    }
    let (f0, g0) = explicit_free_pair(ring, order)?;
    let m_t = Germ::homothety(ring.clone(), t.clone(), order)?;
    let rho_a = compose(&m_t, &f0)?;
    let rho_b = g0;
    let images = [rho_a.clone(), rho_b.clone()];
    let certificates = words
        .iter()
        .map(|w| {
            let image = word_eval(w, &images)?;
            let result = match image.first_deviation_from_identity() {
                Some((index, coefficient)) => Nontriviality::Deviates { index, coefficient },
                None => Nontriviality::UndecidedAtOrder(image.order()),
            };
            Ok(NontrivialityCertificate { word: w.clone(), result })
        })
        .collect::<Result<_>>()?;
    Ok(ParameterFamilySample { t: t.clone(), rho_a, rho_b, certificates })
}

/// Instance of the radius claim for G_p members: integer coefficients give
/// a truncation radius estimate of at least 1.
pub fn radius_claim_holds(f: &Germ<PAdicRing>) -> Result<bool> {
    match radius_estimate(f, &BigRational::new(1.into(), 1024.into()))? {
        RadiusEstimate::Unbounded => Ok(true),
        RadiusEstimate::Bracket { hi, .. } => Ok(hi >= BigRational::from_integer(1.into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    fn z5(prec: u32) -> PAdicRing {
        PAdicRing::new(5, prec).unwrap()
    }

    #[test]
    fn free_pair_members_of_g5_and_g3() {
        let ring = z5(10);
        let (f0, g0) = explicit_free_pair(&ring, 12).unwrap();
        assert!(gp_membership(&f0).unwrap().is_member());
        assert!(gp_membership(&g0).unwrap().is_member());
        let ring3 = PAdicRing::new(3, 10).unwrap();
        let (f0, _) = explicit_free_pair(&ring3, 12).unwrap();
        // Coefficients (-3)^(n-1) have valuation n-1 >= 0 and a_1 = 1.
        assert!(gp_membership(&f0).unwrap().is_member());
    }

    #[test]
    fn non_unit_derivative_is_reported_at_index_one() {
        let ring = z5(8);
        let f = Germ::new(ring.clone(), vec![ring.from_i64(5), ring.one()]).unwrap();
        match gp_membership(&f).unwrap() {
            GpMembership::Violation { index: 1, .. } => {}
            other => panic!("unexpected {other:?}"),
        }
        // z/p itself is not even constructible over Z_p: 1/p leaves the ring.
        let inv_p = ring.from_rational(&BigRational::new(1.into(), 5.into()));
        assert_eq!(inv_p, Err(Error::LeavesIntegerRing(1)));
    }

    #[test]
    fn closure_instances() {
        let ring = z5(20);
        let (f0, g0) = explicit_free_pair(&ring, 16).unwrap();
        assert!(gp_closure_check(&f0, &g0).unwrap());
        let id = Germ::identity(ring.clone(), 16).unwrap();
        assert!(gp_closure_check(&id, &id).unwrap());
        // A member composed with a non-member need not be a member; the
        // check reports faithfully.
        let bad = Germ::new(ring.clone(), vec![ring.from_i64(5), ring.one()]).unwrap();
        let composed = compose(&f0, &bad).unwrap();
        assert!(!gp_membership(&composed).unwrap().is_member());
    }

    #[test]
    fn jet_kernel_examples() {
        let ring = z5(12);
        let (f0, g0) = explicit_free_pair(&ring, 12).unwrap();
        // g0 = z - 9 z^4 + ... lies in the kernel of j_3 but f0 does not pass j_2.
        assert!(jet_kernel_membership(&g0, 3).unwrap());
        assert!(jet_kernel_membership(&f0, 1).unwrap());
        assert!(!jet_kernel_membership(&f0, 2).unwrap());
        let id = Germ::identity(ring, 12).unwrap();
        for l in [1, 2, 7] {
            assert!(jet_kernel_membership(&id, l).unwrap());
        }
    }

    #[test]
    fn jet_kernel_is_multiplicative() {
        let ring = z5(16);
        let (f0, g0) = explicit_free_pair(&ring, 12).unwrap();
        let u = crate::germgroup::commutator(&f0, &g0).unwrap(); // deep tangency
        assert!(jet_kernel_membership(&u, 3).unwrap());
        let v = g0;
        let prod = compose(&u, &v).unwrap();
        assert!(jet_kernel_membership(&prod, 3).unwrap());
        assert!(jet_kernel_membership(&invert(&u).unwrap(), 3).unwrap());
    }

    #[test]
    fn derived_generators_at_level_one_and_three() {
        let ring = z5(20);
        let out = derived_free_generators(&ring, 1, 16).unwrap();
        // At l = 1 the free pair itself qualifies.
        assert_eq!(out.words.0, FreeWord::generator(0));
        assert_eq!(out.words.1, FreeWord::generator(1));
        let out = derived_free_generators(&ring, 3, 24).unwrap();
        assert!(jet_kernel_membership(&out.germs.0, 3).unwrap());
        assert!(jet_kernel_membership(&out.germs.1, 3).unwrap());
        assert!(out.commutator_deviation.0 <= 24);
        assert!(derived_free_generators(&ring, 0, 16).is_err());
    }

    #[test]
    fn parameter_family_samples() {
        let ring = z5(16);
        let order = 16;
        let a = FreeWord::generator(0);
        let b = FreeWord::generator(1);
        // t = 1: rho_1(a) = f0.
        let one = ring.one();
        let sample = parameter_family_sample(&ring, &one, order, &[]).unwrap();
        let (f0, _) = explicit_free_pair(&ring, order).unwrap();
        assert!(sample.rho_a.agrees_with(&f0));
        // t = 1 + p deviates from the identity at n = 1.
        let t = ring.from_i64(6);
        let sample = parameter_family_sample(&ring, &t, order, &[a.clone()]).unwrap();
        match &sample.certificates[0].result {
            Nontriviality::Deviates { index: 1, .. } => {}
            other => panic!("unexpected {other:?}"),
        }
        // t = 2: the commutator word receives a certificate.
        let t = ring.from_i64(2);
        let w = a.commutator(&b);
        let sample = parameter_family_sample(&ring, &t, order, &[w]).unwrap();
        assert!(matches!(
            sample.certificates[0].result,
            Nontriviality::Deviates { .. }
        ));
        // Non-units are rejected.
        let t = ring.from_i64(10);
        assert!(matches!(
            parameter_family_sample(&ring, &t, order, &[]),
            Err(Error::NotAUnit(_))
        ));
    }

    #[test]
    fn radius_claim_instances() {
        let ring = z5(16);
        let (f0, g0) = explicit_free_pair(&ring, 12).unwrap();
        assert!(radius_claim_holds(&f0).unwrap());
        assert!(radius_claim_holds(&g0).unwrap());
    }
}
