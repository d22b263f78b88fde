//! Freely reduced words over a finite generator alphabet.
//!
//! Letters are (generator index, nonzero exponent) pairs with adjacent
//! letters on distinct generators; reduction of any input sequence is
//! confluent, so this form is canonical. Commutation of two nontrivial
//! elements is decided exactly by primitive-root extraction: cyclically
//! reduce, extract the primitive period, and compare roots up to inversion.
//!
//! Textual format: whitespace-separated tokens `g3^-2` with 1-based
//! generator indices (named alphabets may substitute `a1^2`-style tokens).

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct FreeWord {
    letters: Vec<(usize, i64)>,
}

impl FreeWord {
    pub fn identity() -> Self {
        FreeWord::default()
    }

    pub fn generator(index: usize) -> Self {
        FreeWord { letters: vec![(index, 1)] }
    }

    pub fn from_letters<I: IntoIterator<Item = (usize, i64)>>(letters: I) -> Self {
        let mut w = FreeWord::identity();
        for (g, e) in letters {
            w.push(g, e);
        }
        w
    }

    fn push(&mut self, gen: usize, exp: i64) {
        if exp == 0 {
            return;
        }
        if let Some(last) = self.letters.last_mut() {
            if last.0 == gen {
                last.1 += exp;
                if last.1 == 0 {
                    self.letters.pop();
                }
                return;
            }
        }
        self.letters.push((gen, exp));
    }

    pub fn letters(&self) -> &[(usize, i64)] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Word length: the sum of absolute exponents.
    pub fn len(&self) -> u64 {
        self.letters.iter().map(|&(_, e)| e.unsigned_abs()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.is_identity()
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|&(g, _)| g).max()
    }

    pub fn concat(&self, other: &FreeWord) -> FreeWord {
        let mut w = self.clone();
        for &(g, e) in &other.letters {
            w.push(g, e);
        }
        w
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn pow(&self, n: i64) -> FreeWord {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// u w u^{-1}.
    pub fn conjugate_by(&self, u: &FreeWord) -> FreeWord {
        u.concat(self).concat(&u.inverse())
    }

    /// [self, other] = self other self^{-1} other^{-1}.
    pub fn commutator(&self, other: &FreeWord) -> FreeWord {
        self.concat(other).concat(&self.inverse()).concat(&other.inverse())
    }

    /// Substitute each generator by its image word (a homomorphism).
    pub fn substitute(&self, images: &[FreeWord]) -> Result<FreeWord> {
        let mut out = FreeWord::identity();
        for &(g, e) in &self.letters {
            let image = images.get(g).ok_or(Error::VariantMismatch {
                index: g + 1,
                count: images.len(),
            })?;
            out = out.concat(&image.pow(e));
        }
        Ok(out)
    }

    /// Expansion into single-exponent letters (g, ±1).
    fn units(&self) -> Vec<(usize, i8)> {
        let mut out = Vec::with_capacity(self.len() as usize);
        for &(g, e) in &self.letters {
            let s: i8 = if e > 0 { 1 } else { -1 };
            for _ in 0..e.unsigned_abs() {
                out.push((g, s));
            }
        }
        out
    }

    fn from_units(units: &[(usize, i8)]) -> FreeWord {
        FreeWord::from_letters(units.iter().map(|&(g, s)| (g, s as i64)))
    }

    /// Split w = u v u^{-1} with v cyclically reduced; returns (u, v).
    pub fn cyclic_reduce(&self) -> (FreeWord, FreeWord) {
        let units = self.units();
        let mut lo = 0usize;
        let mut hi = units.len();
        while hi - lo >= 2 {
            let (g1, s1) = units[lo];
            let (g2, s2) = units[hi - 1];
            if g1 == g2 && s1 == -s2 {
                lo += 1;
                hi -= 1;
            } else {
                break;
            }
        }
        (FreeWord::from_units(&units[..lo]), FreeWord::from_units(&units[lo..hi]))
    }

    /// Primitive root r with self = r^k (k >= 1); `None` for the identity.
    ///
    /// The root of u p^k u^{-1} is u p u^{-1} with p the primitive period of
    /// the cyclically reduced core.
    pub fn primitive_root(&self) -> Option<FreeWord> {
        if self.is_identity() {
            return None;
        }
        let (u, core) = self.cyclic_reduce();
        let units = core.units();
        let n = units.len();
        for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            if (d..n).all(|i| units[i] == units[i - d]) {
                let p = FreeWord::from_units(&units[..d]);
                return Some(p.conjugate_by(&u));
            }
        }
        unreachable!("period n always matches");
    }

    /// Exact commutation test in the free group: two nontrivial elements
    /// commute iff they are powers of a common primitive root (up to
    /// inversion). The identity commutes with everything.
    pub fn commutes_with(&self, other: &FreeWord) -> bool {
        match (self.primitive_root(), other.primitive_root()) {
            (None, _) | (_, None) => true,
            (Some(r), Some(s)) => r == s || r == s.inverse(),
        }
    }

    /// Parse `g3^-2`-style tokens. With `names` given, tokens may also use
    /// the listed generator names (`a1^2 t1^-1`). When `strict` is set,
    /// input that is not already freely reduced is rejected.
    pub fn parse(input: &str, names: Option<&[String]>, strict: bool) -> Result<FreeWord> {
        let mut raw: Vec<(usize, i64)> = Vec::new();
        for token in input.split_whitespace() {
            let (base, exp) = match token.split_once('^') {
                Some((b, e)) => {
                    let exp: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in token `{token}`")))?;
                    (b, exp)
                }
                None => (token, 1),
            };
            let index = resolve_generator(base, names)?;
            if exp != 0 {
                raw.push((index, exp));
            }
        }
        let reduced = FreeWord::from_letters(raw.iter().copied());
        if strict && reduced.letters.as_slice() != raw.as_slice() {
            return Err(Error::Parse(format!("word `{input}` is not freely reduced")));
        }
        Ok(reduced)
    }

    /// Render with the given names, or `g<i>` indices when none are given.
    pub fn display(&self, names: Option<&[String]>) -> String {
        if self.is_identity() {
            return "1".to_string();
        }
        self.letters
            .iter()
            .map(|&(g, e)| {
                let base = match names {
                    Some(ns) if g < ns.len() => ns[g].clone(),
                    _ => format!("g{}", g + 1),
                };
                if e == 1 {
                    base
                } else {
                    format!("{base}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn resolve_generator(base: &str, names: Option<&[String]>) -> Result<usize> {
    if let Some(ns) = names {
        if let Some(i) = ns.iter().position(|n| n == base) {
            return Ok(i);
        }
    }
    if let Some(num) = base.strip_prefix('g') {
        if let Ok(i) = num.parse::<usize>() {
            if i >= 1 {
                return Ok(i - 1);
            }
        }
    }
    Err(Error::Parse(format!("unknown generator token `{base}`")))
}

impl fmt::Display for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display(None))
    }
}
