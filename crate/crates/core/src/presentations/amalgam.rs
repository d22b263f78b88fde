//! Alternating normal forms in the double amalgam underlying the odd-genus
//! presentation.
//!
//! The presentation splits as A1 *_(e12=e21) A2 *_(e23=e32) A3 with
//! A1 = <a1..ak>, A2 = <gamma, c>, A3 = <b1..bk> and edge identifications
//! e12 = (a1^2...ak^2)^-1 = gamma = e21 and e23 = c^-2 gamma = delta =
//! bk^2...b1^2 = e32. A word over the presentation alphabet decomposes into
//! an alternating factor sequence; pinch moves shorten it whenever an
//! interior factor between equal labels lies in the edge subgroup. The
//! greedy loop rescans after every pinch, so on desk-scale words it reaches
//! the minimal form the proof of the injectivity lemma works with.

use super::NOdd;
use crate::error::{Error, Result};
use crate::words::FreeWord;

/// Vertex label (1, 2 or 3) and a word in that vertex group's own basis:
/// A1 words over a1..ak, A2 words over (gamma, c), A3 words over b1..bk.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamFactor {
    pub label: u8,
    pub word: FreeWord,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AmalgamNormalForm {
    pub factors: Vec<AmalgamFactor>,
}

impl AmalgamNormalForm {
    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Sum of factor word lengths.
    pub fn length(&self) -> u64 {
        self.factors.iter().map(|f| f.word.len()).sum()
    }
}

/// Edge element of A_label pointing toward the neighbor label, in the basis
/// of A_label. A2 uses basis index 0 = gamma, 1 = c.
fn edge_element(pres: &NOdd, label: u8, toward: u8) -> FreeWord {
    let k = pres.k();
    match (label, toward) {
        (1, 2) => {
            let mut w = FreeWord::identity();
            for i in 0..k {
                w = w.concat(&FreeWord::from_letters([(i, 2)]));
            }
            w.inverse() // (a1^2...ak^2)^-1
        }
        (2, 1) => FreeWord::generator(0), // gamma
        (2, 3) => FreeWord::from_letters([(1usize, -2), (0, 1)]), // c^-2 gamma
        (3, 2) => {
            let mut w = FreeWord::identity();
            for i in (0..k).rev() {
                w = w.concat(&FreeWord::from_letters([(i, 2)]));
            }
            w // bk^2...b1^2
        }
        _ => unreachable!("labels differ by one"),
    }
}

/// Is `w` a power of `e` in the free vertex group? Returns the exponent.
fn edge_power(w: &FreeWord, e: &FreeWord) -> Option<i64> {
    if w.is_identity() {
        return Some(0);
    }
    let lw = w.len();
    let le = e.len();
    if le == 0 || lw % le != 0 {
        return None;
    }
    let m = (lw / le) as i64;
    if *w == e.pow(m) {
        return Some(m);
    }
    if *w == e.pow(-m) {
        return Some(-m);
    }
    None
}

/// Map a presentation letter to (vertex label, basis index).
fn letter_home(pres: &NOdd, gen: usize) -> (u8, usize) {
    let k = pres.k();
    if gen < k {
        (1, gen)
    } else if gen == k {
        (2, 1) // c is basis index 1 of A2
    } else {
        (3, gen - k - 1)
    }
}

/// Decompose a word over the presentation alphabet into a minimal
/// alternating amalgam form. Identity input gives the empty sequence.
pub fn amalgam_normal_form(pres: &NOdd, w: &FreeWord) -> Result<AmalgamNormalForm> {
    use super::SurfacePresentation;
    pres.validate(w)?;

    // Naive grouping of consecutive letters by home vertex, with trivial A2
    // factors inserted between labels 1 and 3.
    let mut factors: Vec<AmalgamFactor> = Vec::new();
    for &(gen, exp) in w.letters() {
        let (label, index) = letter_home(pres, gen);
        let piece = FreeWord::from_letters([(index, exp)]);
        match factors.last_mut() {
            Some(f) if f.label == label => {
                f.word = f.word.concat(&piece);
            }
            _ => {
                if let Some(last) = factors.last() {
                    if last.label.abs_diff(label) == 2 {
                        factors.push(AmalgamFactor { label: 2, word: FreeWord::identity() });
                    }
                }
                factors.push(AmalgamFactor { label, word: piece });
            }
        }
    }

    loop {
        // Drop trivial boundary factors.
        while factors.first().map(|f| f.word.is_identity() && factors.len() > 1).unwrap_or(false) {
            factors.remove(0);
        }
        while factors.last().map(|f| f.word.is_identity() && factors.len() > 1).unwrap_or(false) {
            factors.pop();
        }
        if factors.len() == 1 && factors[0].word.is_identity() {
            factors.clear();
        }

        // Pinch: an interior factor between equal labels lying in the edge
        // subgroup moves across and merges its neighbors.
        let mut pinched = false;
        for i in 1..factors.len().saturating_sub(1) {
            let (left, mid, right) = (factors[i - 1].label, factors[i].label, factors[i + 1].label);
            if left != right {
                continue;
            }
            let e_here = edge_element(pres, mid, left);
            if let Some(m) = edge_power(&factors[i].word, &e_here) {
                let e_there = edge_element(pres, left, mid);
                let merged = factors[i - 1]
                    .word
                    .concat(&e_there.pow(m))
                    .concat(&factors[i + 1].word);
                factors.splice(i - 1..=i + 1, [AmalgamFactor { label: left, word: merged }]);
                pinched = true;
                break;
            }
        }
        if !pinched {
            break;
        }
    }

    // The survivors satisfy the minimality condition by construction.
    Ok(AmalgamNormalForm { factors })
}

/// Does the factor equal a power of an incident edge element? Used to state
/// the minimality condition in reports.
pub fn factor_edge_membership(pres: &NOdd, factor: &AmalgamFactor) -> Vec<(u8, i64)> {
    let mut out = Vec::new();
    for toward in [factor.label.wrapping_sub(1), factor.label + 1] {
        if !(1..=3).contains(&toward) || toward == factor.label {
            continue;
        }
        let e = edge_element(pres, factor.label, toward);
        if let Some(m) = edge_power(&factor.word, &e) {
            out.push((toward, m));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::SurfacePresentation;

    fn pres() -> NOdd {
        NOdd::new(2).unwrap()
    }

    fn parse(p: &NOdd, s: &str) -> FreeWord {
        p.parse_word(s, false).unwrap()
    }

    #[test]
    fn single_generator_is_one_factor() {
        let p = pres();
        let nf = amalgam_normal_form(&p, &parse(&p, "a1")).unwrap();
        assert_eq!(nf.factors.len(), 1);
        assert_eq!(nf.factors[0].label, 1);
        assert_eq!(nf.factors[0].word, FreeWord::generator(0));
    }

    #[test]
    fn gamma_is_a_single_edge_factor() {
        // gamma = (a1^2 a2^2)^-1 written over the alphabet is one A1 factor
        // equal to the edge element e_{1,2}.
        let p = pres();
        let nf = amalgam_normal_form(&p, &parse(&p, "a2^-2 a1^-2")).unwrap();
        assert_eq!(nf.factors.len(), 1);
        assert_eq!(nf.factors[0].label, 1);
        let memberships = factor_edge_membership(&p, &nf.factors[0]);
        assert!(memberships.contains(&(2, 1)));
    }

    #[test]
    fn conjugate_of_b_alternates() {
        // c b1 c^-1 decomposes as A2 . A3 . A2 and is already minimal.
        let p = pres();
        let nf = amalgam_normal_form(&p, &parse(&p, "c b1 c^-1")).unwrap();
        let labels: Vec<u8> = nf.factors.iter().map(|f| f.label).collect();
        assert_eq!(labels, vec![2, 3, 2]);
        assert!(factor_edge_membership(&p, &nf.factors[1]).is_empty());
    }

    #[test]
    fn pinch_collapses_edge_conjugation() {
        // c delta c^-1 pinches: delta = e_{3,2} moves into A2, where the
        // whole product c (c^-2 gamma) c^-1 is a single A2 factor.
        let p = pres();
        let w = parse(&p, "c").concat(&p.delta()).concat(&parse(&p, "c^-1"));
        let nf = amalgam_normal_form(&p, &w).unwrap();
        assert_eq!(nf.factors.len(), 1);
        assert_eq!(nf.factors[0].label, 2);
    }

    #[test]
    fn identity_is_empty() {
        let p = pres();
        let nf = amalgam_normal_form(&p, &FreeWord::identity()).unwrap();
        assert!(nf.is_identity());
        let cancelling = parse(&p, "a1 b1 b1^-1 a1^-1");
        assert!(amalgam_normal_form(&p, &cancelling).unwrap().is_identity());
    }

    #[test]
    fn alternation_invariant_holds() {
        let p = pres();
        for s in ["a1 c b1", "b2 a1^3 c^2", "c^2 b1 a2 b2 c"] {
            let nf = amalgam_normal_form(&p, &parse(&p, s)).unwrap();
            for pair in nf.factors.windows(2) {
                assert_eq!(pair[0].label.abs_diff(pair[1].label), 1, "{s}");
            }
        }
    }
}
