//! Seeded random generation of ring elements and germs for the property and
//! acceptance suites. Everything is reproducible from a `u64` seed through
//! ChaCha20.

use num::{BigInt, BigRational};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::Result;
use crate::rings::{PAdicRing, Rationals, Ring};
use crate::series::Germ;
use crate::words::FreeWord;

pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Small nonzero rational with numerator in [-9, 9] and denominator in [1, 9].
pub fn small_rational(rng: &mut ChaCha20Rng) -> BigRational {
    BigRational::new(
        BigInt::from(rng.gen_range(-9i64..=9)),
        BigInt::from(rng.gen_range(1i64..=9)),
    )
}

pub fn small_nonzero_rational(rng: &mut ChaCha20Rng) -> BigRational {
    loop {
        let q = small_rational(rng);
        if q != BigRational::from_integer(0.into()) {
            return q;
        }
    }
}

/// Random rational germ at the given order. The linear coefficient is
/// nonzero; when `lambda` is provided it is used verbatim.
pub fn random_rational_germ(
    rng: &mut ChaCha20Rng,
    order: usize,
    lambda: Option<BigRational>,
) -> Result<Germ<Rationals>> {
    let mut coeffs = Vec::with_capacity(order);
    coeffs.push(match lambda {
        Some(l) => l,
        None => small_nonzero_rational(rng),
    });
    for _ in 1..order {
        coeffs.push(small_rational(rng));
    }
    Germ::new(Rationals, coeffs)
}

/// Random germ over Z_p with unit linear coefficient (a G_p member).
pub fn random_gp_member(
    ring: &PAdicRing,
    rng: &mut ChaCha20Rng,
    order: usize,
) -> Result<Germ<PAdicRing>> {
    let p = ring.prime();
    let mut coeffs = Vec::with_capacity(order);
    let unit = loop {
        let candidate = rng.gen_range(1..10_000u64);
        if candidate % p != 0 {
            break candidate;
        }
    };
    coeffs.push(ring.from_i64(unit as i64));
    for _ in 1..order {
        coeffs.push(ring.from_i64(rng.gen_range(-10_000i64..10_000)));
    }
    Germ::new(ring.clone(), coeffs)
}

/// Random freely reduced word of length at most `max_len` over `rank`
/// generators; never the identity.
pub fn random_word(rng: &mut ChaCha20Rng, rank: usize, max_len: usize) -> FreeWord {
    loop {
        let len = rng.gen_range(1..=max_len);
        let mut letters = Vec::with_capacity(len);
        for _ in 0..len {
            let gen = rng.gen_range(0..rank);
            let exp: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
            letters.push((gen, exp));
        }
        let w = FreeWord::from_letters(letters);
        if !w.is_identity() {
            return w;
        }
    }
}

/// Random germ in Diff_{c,c} at the given truncation: |A_1| and 1/|A_1| at
/// most c, and |A~_n| <= c^(n-1).
pub fn random_filtration_member(
    rng: &mut ChaCha20Rng,
    order: usize,
    c: &BigRational,
) -> Result<Germ<Rationals>> {
    // Draw A_1 in [1/c, c] by picking a rational in the interval.
    let one = BigRational::from_integer(1.into());
    let lambda = loop {
        let q = small_nonzero_rational(rng);
        let a = if q < BigRational::from_integer(0.into()) { -q.clone() } else { q.clone() };
        if &a <= c && a >= one.clone() / c {
            break q;
        }
    };
    let mut coeffs = vec![lambda.clone()];
    let mut bound = one;
    for _ in 2..=order {
        bound *= c;
        // |A~_n| <= c^(n-1) scaled into |A_n| <= |A_1| c^(n-1).
        let numer = rng.gen_range(-8i64..=8);
        let tilde = BigRational::new(BigInt::from(numer), BigInt::from(8)) * &bound;
        coeffs.push(tilde * &lambda);
    }
    Germ::new(Rationals, coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germgroup::{in_filtration, FiltrationClass};
    use crate::nottingham::gp_membership;

    #[test]
    fn deterministic_from_seed() {
        let mut a = rng_from_seed(11);
        let mut b = rng_from_seed(11);
        let ga = random_rational_germ(&mut a, 8, None).unwrap();
        let gb = random_rational_germ(&mut b, 8, None).unwrap();
        assert_eq!(ga, gb);
    }

    #[test]
    fn filtration_member_generator_is_sound() {
        let mut rng = rng_from_seed(5);
        let c = BigRational::from_integer(2.into());
        let class = FiltrationClass::new(c.clone(), Some(c.clone())).unwrap();
        for _ in 0..20 {
            let f = random_filtration_member(&mut rng, 12, &c).unwrap();
            assert!(in_filtration(&f, &class).unwrap());
        }
    }

    #[test]
    fn gp_member_generator_is_sound() {
        let ring = PAdicRing::new(5, 12).unwrap();
        let mut rng = rng_from_seed(5);
        for _ in 0..20 {
            let f = random_gp_member(&ring, &mut rng, 10).unwrap();
            assert!(gp_membership(&f).unwrap().is_member());
        }
    }
}
