//! Symbolic certification over indeterminate coefficients.
//!
//! The generators carry one fresh indeterminate per coefficient slot:
//!   g    = a1 z + sum_{i>=1}    a_{3i+1} z^{i+1},
//!   fbar = z    + sum_{i>=l}    a_{3i+2} z^{i+1},
//!   gbar = z    + sum_{i>=l}    a_{3i+3} z^{i+1},
//! over Q(a1, ..., a_{3N}). The twisted-conjugacy solver produces the fourth
//! generator symbolically (the resonance quantities a1^j - 1 are nonzero
//! polynomials), and a word's deviating coefficient is a rational function:
//! nonzero as such, it certifies nontriviality for *every* algebraically
//! free specialization of the indeterminates.
//!
//! Term counts are capped rather than aggressively simplified; exceeding the
//! cap fails predictably with `SymbolicBlowup`.

use crate::error::{Error, Result};
use crate::reps::{build_rep_genus2_koenigs, certify_nontrivial, NontrivialityCertificate, Representation};
use crate::rings::{RatFun, RatFunField, Ring};
use crate::series::Germ;
use crate::words::FreeWord;

#[derive(Debug)]
pub struct GenericCertifyOutcome {
    pub representation: Representation<RatFunField>,
    pub certificates: Vec<NontrivialityCertificate<RatFunField>>,
}

/// Number of indeterminates the construction at truncation `order` needs.
pub fn required_indeterminates(order: usize) -> usize {
    3 * order
}

/// Build the generic representation and certify the given words.
///
/// `num_indeterminates` must cover the 3N slots; `tangency` is the order l
/// up to which fbar and gbar agree with the identity; `term_budget` caps the
/// total number of polynomial terms in any germ handled along the way.
pub fn generic_representation_certify(
    words: &[FreeWord],
    num_indeterminates: usize,
    order: usize,
    tangency: usize,
    term_budget: usize,
) -> Result<GenericCertifyOutcome> {
    if order < 2 {
        return Err(Error::Parameter("symbolic certification needs order >= 2".into()));
    }
    if tangency < 1 {
        return Err(Error::Parameter("tangency order must be at least 1".into()));
    }
    let needed = required_indeterminates(order);
    if num_indeterminates < needed {
        return Err(Error::Parameter(format!(
            "order {order} needs {needed} indeterminates, got {num_indeterminates}"
        )));
    }
    let vars: Vec<String> = (1..=num_indeterminates).map(|i| format!("a{i}")).collect();
    let field = RatFunField::new(vars)?;

    // a_j is variable index j - 1.
    let var = |j: usize| field.variable(j - 1).expect("index validated");

    let mut g_coeffs = vec![field.zero(); order];
    g_coeffs[0] = var(1);
    for i in 1..order {
        g_coeffs[i] = var(3 * i + 1);
    }
    let g = Germ::new(field.clone(), g_coeffs)?;

    let mut fbar_coeffs = vec![field.zero(); order];
    fbar_coeffs[0] = field.one();
    let mut gbar_coeffs = vec![field.zero(); order];
    gbar_coeffs[0] = field.one();
    for i in tangency..order {
        fbar_coeffs[i] = var(3 * i + 2);
        gbar_coeffs[i] = var(3 * i + 3);
    }
    let fbar = Germ::new(field.clone(), fbar_coeffs)?;
    let gbar = Germ::new(field.clone(), gbar_coeffs)?;

    let representation = build_rep_genus2_koenigs(&g, &fbar, &gbar)?;
    check_budget(&field, representation.generators.iter().map(|(_, g)| g), term_budget)?;

    let certificates = certify_nontrivial(&representation, words)?;
    for cert in &certificates {
        if let crate::reps::Nontriviality::Deviates { coefficient, .. } = &cert.result {
            check_elem_budget(&field, coefficient, term_budget)?;
        }
    }
    Ok(GenericCertifyOutcome { representation, certificates })
}

fn check_budget<'a>(
    field: &RatFunField,
    germs: impl Iterator<Item = &'a Germ<RatFunField>>,
    budget: usize,
) -> Result<()> {
    for germ in germs {
        let total: usize = germ.coeffs().iter().map(|c| field.term_count(c)).sum();
        if total > budget {
            return Err(Error::SymbolicBlowup(format!(
                "germ holds {total} polynomial terms, budget is {budget}"
            )));
        }
    }
    Ok(())
}

fn check_elem_budget(field: &RatFunField, elem: &RatFun, budget: usize) -> Result<()> {
    let n = field.term_count(elem);
    if n > budget {
        return Err(Error::SymbolicBlowup(format!(
            "coefficient holds {n} polynomial terms, budget is {budget}"
        )));
    }
    Ok(())
}
