//! The explicit free pair: f0 = z/(1+3z) and g0 = z(1+(3z)^3)^(-1/3).
//!
//! Both are tangent to the identity and have integer coefficients:
//! A_n(f0) = (-3)^(n-1), and g0 is supported on exponents 3n+1 with
//! A_{3n+1}(g0) = binom(-1/3, n) 27^n. Integrality is asserted after exact
//! computation, then the values are injected into the requested ring.

use num::{BigInt, BigRational, One, Zero};

use crate::error::{Error, Result};
use crate::rings::Ring;
use crate::series::Germ;

/// Exact rational coefficients A_1..A_order of f0.
pub fn f0_coefficients(order: usize) -> Vec<BigRational> {
    let mut out = Vec::with_capacity(order);
    let mut acc = BigRational::one();
    let minus3 = BigRational::from_integer(BigInt::from(-3));
    for _ in 0..order {
        out.push(acc.clone());
        acc *= &minus3;
    }
    out
}

/// Exact rational coefficients A_1..A_order of g0; zero off the 3n+1 grid.
pub fn g0_coefficients(order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order];
    // binom(-1/3, n) * 27^n placed at exponent 3n+1.
    let mut binom = BigRational::one();
    let third = BigRational::new(BigInt::from(-1), BigInt::from(3));
    let mut n = 0u32;
    loop {
        let index = 3 * n as usize + 1;
        if index > order {
            break;
        }
        let value = &binom * BigRational::from_integer(BigInt::from(27).pow(n));
        out[index - 1] = value;
        // binom(-1/3, n+1) = binom(-1/3, n) * (-1/3 - n)/(n + 1)
        binom *= (&third - BigRational::from_integer(BigInt::from(n)))
            / BigRational::from_integer(BigInt::from(n + 1));
        n += 1;
    }
    out
}

/// Materialize (f0, g0) over a ring containing the integers, with the
/// integrality of every coefficient asserted first.
pub fn explicit_free_pair<R: Ring>(ring: &R, order: usize) -> Result<(Germ<R>, Germ<R>)> {
    let inject = |coeffs: Vec<BigRational>| -> Result<Germ<R>> {
        let elems: Vec<R::Elem> = coeffs
            .iter()
            .map(|q| {
                if !q.denom().is_one() {
                    return Err(Error::Parameter(format!(
                        "free-pair coefficient {q} is not an integer"
                    )));
                }
                ring.from_rational(q)
            })
            .collect::<Result<_>>()?;
        Germ::new(ring.clone(), elems)
    };
    Ok((inject(f0_coefficients(order))?, inject(g0_coefficients(order))?))
}
