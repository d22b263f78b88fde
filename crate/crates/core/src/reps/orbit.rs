//! Orbit-separation search: given rational maps f, g fixing 0 and a
//! nontrivial word w, find a polynomial germ h = z + z^2 P(z) and a rational
//! witness point z0 with w(h f h^{-1}, g)(z0) != z0, everything evaluated in
//! exact rational arithmetic.
//!
//! The search maintains the orbit z_1 = g^{n_1}(z_0), z_2 = f_h^{n_2}(z_1),
//! ... and *chooses* the values h takes where the conjugated blocks need
//! them: each choice pins a pair h(x) = y, realized by adding a perturbation
//! eta z^2 prod_j (z - x_j) that fixes 0 and every previously pinned
//! preimage, with eta solved linearly. Fresh values are drawn from a
//! deterministic small-rational enumeration avoiding all points seen so far,
//! which keeps the orbit pairwise distinct and the pin table a bijection.
//!
//! A returned witness is verified from scratch: the orbit is re-evaluated
//! against the explicit polynomial (each inverse use checks h(x) = v exactly
//! and h'(x) != 0), and independently the truncated germ of
//! w(h f h^{-1}, g) must deviate from the identity at some coefficient. The
//! point certificate is the spec'd contract; the germ deviation pins the
//! group-level claim.

use std::collections::HashSet;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::germgroup::word_eval;
use crate::rings::Rationals;
use crate::series::{compose, invert, Germ};
use crate::words::FreeWord;

/// A rational map P(z)/Q(z) with P(0) = 0, Q(0) != 0 and P'(0) != 0,
/// evaluated exactly on rational points.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalMap {
    num: Vec<BigRational>,
    den: Vec<BigRational>,
}

impl RationalMap {
    pub fn new(num: Vec<BigRational>, den: Vec<BigRational>) -> Result<Self> {
        let mut num = num;
        let mut den = den;
        while num.last().map(|c| c.is_zero()).unwrap_or(false) {
            num.pop();
        }
        while den.last().map(|c| c.is_zero()).unwrap_or(false) {
            den.pop();
        }
        if den.is_empty() {
            return Err(Error::NonRationalInput("zero denominator".into()));
        }
        if num.len() < 2 || !num[0].is_zero() || num[1].is_zero() || den[0].is_zero() {
            return Err(Error::NonRationalInput(
                "map must fix 0 with nonzero derivative (P(0)=0, P'(0)!=0, Q(0)!=0)".into(),
            ));
        }
        Ok(RationalMap { num, den })
    }

    pub fn homothety(q: BigRational) -> Result<Self> {
        RationalMap::new(vec![BigRational::zero(), q], vec![BigRational::one()])
    }

    pub fn numerator(&self) -> &[BigRational] {
        &self.num
    }
    pub fn denominator(&self) -> &[BigRational] {
        &self.den
    }

    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let d = poly_eval(&self.den, x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(poly_eval(&self.num, x) / d)
    }

    pub fn is_moebius(&self) -> bool {
        self.num.len() <= 2 && self.den.len() <= 2
    }

    /// Exact inverse, available for Moebius maps only.
    pub fn inverse(&self) -> Result<RationalMap> {
        if !self.is_moebius() {
            return Err(Error::NonRationalInput(
                "negative powers need a Moebius map (exact rational inverse)".into(),
            ));
        }
        // f(z) = a z / (d0 + d1 z) inverts to z = d0 w / (a - d1 w).
        let a = self.num[1].clone();
        let d0 = self.den[0].clone();
        let d1 = self.den.get(1).cloned().unwrap_or_else(BigRational::zero);
        RationalMap::new(vec![BigRational::zero(), d0], vec![a, -d1])
    }

    pub fn apply_power(&self, x: &BigRational, k: i64) -> Result<BigRational> {
        let map = if k < 0 { self.inverse()? } else { self.clone() };
        let mut v = x.clone();
        for _ in 0..k.unsigned_abs() {
            v = map.eval(&v)?;
        }
        Ok(v)
    }

    /// Truncated power series of the map (a germ over the rationals).
    pub fn to_germ(&self, order: usize) -> Result<Germ<Rationals>> {
        // 1/Q as a power series via the standard recurrence, then times P.
        let n = order + 1;
        let q0_inv = BigRational::one() / &self.den[0];
        let mut inv_den = vec![BigRational::zero(); n];
        inv_den[0] = q0_inv.clone();
        for m in 1..n {
            let mut s = BigRational::zero();
            for k in 1..=m.min(self.den.len() - 1) {
                s += &self.den[k] * &inv_den[m - k];
            }
            inv_den[m] = -&q0_inv * s;
        }
        let mut series = vec![BigRational::zero(); n];
        for (i, p) in self.num.iter().enumerate().take(n) {
            if p.is_zero() {
                continue;
            }
            for (j, q) in inv_den.iter().enumerate().take(n - i) {
                series[i + j] += p * q;
            }
        }
        Germ::new(Rationals, series[1..].to_vec())
    }

    /// Bounded finite-order detection on the truncated germ; `Some(k)` means
    /// the k-th compositional power is the identity to the probe order.
    pub fn detect_finite_order(&self, max_k: u64, probe_order: usize) -> Result<Option<u64>> {
        let germ = self.to_germ(probe_order)?;
        let mut acc = germ.clone();
        for k in 1..=max_k {
            if acc.is_identity() {
                return Ok(Some(k));
            }
            acc = compose(&acc, &germ)?;
        }
        Ok(None)
    }
}

fn poly_eval(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn poly_derivative_eval(coeffs: &[BigRational], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for (k, c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * x + c * BigRational::from_integer(BigInt::from(k));
    }
    acc
}

/// Newton-form interpolation of the pins: h = z + sum_m eta_m z^2
/// prod_{j<m} (z - x_j), each perturbation fixing 0 and all previously
/// pinned preimages, with eta_m solved linearly from the new pin.
fn interpolate_pins(pins: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let mut h = vec![BigRational::zero(), BigRational::one()];
    let mut basis = vec![BigRational::zero(), BigRational::zero(), BigRational::one()];
    for (x, y) in pins {
        let hx = poly_eval(&h, x);
        let bx = poly_eval(&basis, x);
        debug_assert!(!bx.is_zero(), "pin preimages are distinct and nonzero");
        let eta = (y - hx) / bx;
        if h.len() < basis.len() {
            h.resize(basis.len(), BigRational::zero());
        }
        for (k, b) in basis.iter().enumerate() {
            let add = &eta * b;
            h[k] += add;
        }
        // basis *= (z - x)
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        for (k, b) in basis.iter().enumerate() {
            next[k + 1] += b;
            next[k] -= &(b * x);
        }
        basis = next;
    }
    h
}

#[derive(Debug, Clone)]
pub struct OrbitBudget {
    /// Base-point / fresh-choice attempts before giving up.
    pub max_attempts: u64,
    /// Cap on numerator+denominator bit size of any orbit value.
    pub max_bits: u64,
    /// Truncation order for the independent germ-deviation check.
    pub germ_order: usize,
}

impl Default for OrbitBudget {
    fn default() -> Self {
        OrbitBudget { max_attempts: 64, max_bits: 4096, germ_order: 16 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbitWitness {
    /// Polynomial h = z + z^2 P(z), coefficients ascending from z^0.
    pub h: Vec<BigRational>,
    pub base_point: BigRational,
    /// Orbit values after each block, starting with the base point.
    pub orbit: Vec<BigRational>,
    /// Pinned pairs (x, y) with h(x) = y, used by the inverse steps.
    pub pins: Vec<(BigRational, BigRational)>,
    /// First coefficient where the germ w(h f h^{-1}, g) deviates from the
    /// identity, with its value.
    pub germ_deviation: (usize, BigRational),
}

/// Deterministic enumeration of small nonzero rationals, skipping a set.
struct FreshChooser {
    counter: u64,
}

impl FreshChooser {
    fn new(offset: u64) -> Self {
        FreshChooser { counter: offset }
    }

    fn candidate(index: u64) -> BigRational {
        // 1/2, -1/2, 1/3, 2/3, -1/3, -2/3, 1/4, 3/4, ...
        let mut seen = 0u64;
        let mut den: i64 = 2;
        loop {
            let mut numerators = Vec::new();
            for n in 1..den {
                if num::integer::gcd(n, den) == 1 {
                    numerators.push(n);
                }
            }
            for &n in &numerators {
                for sign in [1i64, -1] {
                    if seen == index {
                        return BigRational::new(BigInt::from(sign * n), BigInt::from(den));
                    }
                    seen += 1;
                }
            }
            den += 1;
        }
    }

    fn next(&mut self, used: &HashSet<BigRational>) -> BigRational {
        loop {
            let c = Self::candidate(self.counter);
            self.counter += 1;
            if !used.contains(&c) {
                return c;
            }
        }
    }
}

fn bits(q: &BigRational) -> u64 {
    q.numer().abs().bits() + q.denom().bits()
}

enum PinMode<'a> {
    /// Search: invent fresh values, recording pins.
    Search { chooser: &'a mut FreshChooser },
    /// Verify: use the fixed pin table and the explicit polynomial.
    Verify { h: &'a [BigRational] },
}

struct OrbitRun {
    orbit: Vec<BigRational>,
    pins: Vec<(BigRational, BigRational)>,
}

/// Walk the word right-to-left. Generator 0 is the conjugated letter
/// (blocks h o f^n o h^{-1}), generator 1 acts directly by g^n.
fn run_orbit(
    f: &RationalMap,
    g: &RationalMap,
    word: &FreeWord,
    z0: &BigRational,
    max_bits: u64,
    mut mode: PinMode<'_>,
    mut pins: Vec<(BigRational, BigRational)>,
) -> Result<OrbitRun> {
    let mut used: HashSet<BigRational> = HashSet::new();
    used.insert(BigRational::zero());
    used.insert(z0.clone());
    for (x, y) in &pins {
        used.insert(x.clone());
        used.insert(y.clone());
    }

    let mut v = z0.clone();
    let mut orbit = vec![z0.clone()];
    for &(gen, exp) in word.letters().iter().rev() {
        match gen {
            1 => {
                v = g.apply_power(&v, exp)?;
            }
            0 => {
                // x = h^{-1}(v)
                let x = if v.is_zero() {
                    BigRational::zero()
                } else if let Some((px, _)) = pins.iter().find(|(_, y)| *y == v) {
                    px.clone()
                } else {
                    match &mut mode {
                        PinMode::Search { chooser } => {
                            let x = chooser.next(&used);
                            used.insert(x.clone());
                            pins.push((x.clone(), v.clone()));
                            x
                        }
                        PinMode::Verify { h } => {
                            // Unpinned inverse use is only valid where h
                            // fixes the point (in particular for h = id).
                            if poly_eval(h, &v) == v {
                                v.clone()
                            } else {
                                return Err(Error::NotFound(format!(
                                    "no recorded preimage for orbit value {v}"
                                )));
                            }
                        }
                    }
                };
                if let PinMode::Verify { h } = &mode {
                    if poly_eval(h, &x) != v {
                        return Err(Error::NotFound(format!("pin h({x}) != {v}")));
                    }
                    if poly_derivative_eval(h, &x).is_zero() {
                        return Err(Error::NotFound(format!("h'({x}) vanishes")));
                    }
                }
                let t = f.apply_power(&x, exp)?;
                // v = h(t)
                v = if t.is_zero() {
                    BigRational::zero()
                } else if let Some((_, py)) = pins.iter().find(|(x0, _)| *x0 == t) {
                    py.clone()
                } else {
                    match &mut mode {
                        PinMode::Search { chooser } => {
                            let y = chooser.next(&used);
                            used.insert(t.clone());
                            used.insert(y.clone());
                            pins.push((t.clone(), y.clone()));
                            y
                        }
                        PinMode::Verify { h } => poly_eval(h, &t),
                    }
                };
            }
            other => {
                return Err(Error::VariantMismatch { index: other + 1, count: 2 });
            }
        }
        if bits(&v) > max_bits {
            return Err(Error::SearchBudgetExceeded(format!(
                "orbit value exceeds {max_bits} bits"
            )));
        }
        used.insert(v.clone());
        orbit.push(v.clone());
    }
    Ok(OrbitRun { orbit, pins })
}

fn germ_deviation(
    f: &RationalMap,
    g: &RationalMap,
    word: &FreeWord,
    h: &[BigRational],
    order: usize,
) -> Result<Option<(usize, BigRational)>> {
    let f_germ = f.to_germ(order)?;
    let g_germ = g.to_germ(order)?;
    let conj = if h.len() <= 2 {
        f_germ
    } else {
        let mut coeffs = vec![BigRational::zero(); order];
        for (k, c) in h.iter().enumerate().skip(1).take(order) {
            coeffs[k - 1] = c.clone();
        }
        let h_germ = Germ::new(Rationals, coeffs)?;
        compose(&compose(&h_germ, &f_germ)?, &invert(&h_germ)?)?
    };
    let image = word_eval(word, &[conj, g_germ])?;
    Ok(image.first_deviation_from_identity())
}

fn pairwise_distinct(points: &[BigRational]) -> bool {
    let set: HashSet<&BigRational> = points.iter().collect();
    set.len() == points.len()
}

/// Search for (h, z0) with w(h f h^{-1}, g)(z0) != z0, then verify the
/// output before returning it.
pub fn orbit_separation_search(
    f: &RationalMap,
    g: &RationalMap,
    word: &FreeWord,
    budget: &OrbitBudget,
) -> Result<OrbitWitness> {
    if word.is_identity() {
        return Err(Error::Parameter("the word must be nontrivial".into()));
    }
    if let Some(gen) = word.max_generator() {
        if gen > 1 {
            return Err(Error::VariantMismatch { index: gen + 1, count: 2 });
        }
    }
    for (map, name) in [(f, "f"), (g, "g")] {
        if map.detect_finite_order(24, 8)?.is_some() {
            return Err(Error::Parameter(format!(
                "{name} has finite order at the probe truncation; the construction needs infinite order"
            )));
        }
    }
    // Negative powers need exact inverses.
    for &(gen, exp) in word.letters() {
        if exp < 0 {
            let map = if gen == 0 { f } else { g };
            if !map.is_moebius() {
                return Err(Error::NonRationalInput(format!(
                    "word uses a negative power of generator {} but the map is not Moebius",
                    gen + 1
                )));
            }
        }
    }

    // Fast path: h = id already separates.
    let identity_h = vec![BigRational::zero(), BigRational::one()];
    if let Some(dev) = germ_deviation(f, g, word, &identity_h, budget.germ_order)? {
        for i in 0..budget.max_attempts.min(16) {
            let z0 = FreshChooser::candidate(i);
            let run = match run_orbit(
                f,
                g,
                word,
                &z0,
                budget.max_bits,
                PinMode::Verify { h: &identity_h },
                Vec::new(),
            ) {
                Ok(run) => run,
                Err(_) => continue,
            };
            let z_end = run.orbit.last().expect("nonempty");
            if z_end != &z0 {
                let witness = OrbitWitness {
                    h: identity_h.clone(),
                    base_point: z0,
                    orbit: run.orbit,
                    pins: Vec::new(),
                    germ_deviation: dev.clone(),
                };
                verify_orbit_witness(f, g, word, &witness, budget.germ_order)?;
                return Ok(witness);
            }
        }
    }

    // Pinned search: choose the values of h along the orbit.
    for attempt in 0..budget.max_attempts {
        let z0 = FreshChooser::candidate(attempt);
        let mut chooser = FreshChooser::new(attempt + 1);
        let run = match run_orbit(
            f,
            g,
            word,
            &z0,
            budget.max_bits,
            PinMode::Search { chooser: &mut chooser },
            Vec::new(),
        ) {
            Ok(run) => run,
            Err(Error::SearchBudgetExceeded(e)) => return Err(Error::SearchBudgetExceeded(e)),
            Err(_) => continue,
        };
        let z_end = run.orbit.last().expect("nonempty");
        if z_end == &z0 || !pairwise_distinct(&run.orbit) {
            continue;
        }
        let h = interpolate_pins(&run.pins);
        let Some(dev) = germ_deviation(f, g, word, &h, budget.germ_order)? else {
            continue;
        };
        let witness = OrbitWitness {
            h,
            base_point: z0,
            orbit: run.orbit,
            pins: run.pins,
            germ_deviation: dev,
        };
        if verify_orbit_witness(f, g, word, &witness, budget.germ_order).is_ok() {
            return Ok(witness);
        }
    }
    Err(Error::NotFound(format!(
        "no separating (h, z0) within {} attempts",
        budget.max_attempts
    )))
}

/// Re-derive everything in the witness from scratch and fail on any
/// mismatch: the orbit against the explicit polynomial (checking h(x) = v
/// and h'(x) != 0 at every inverse use), the endpoint inequality, pairwise
/// distinctness, and the germ-level deviation.
pub fn verify_orbit_witness(
    f: &RationalMap,
    g: &RationalMap,
    word: &FreeWord,
    witness: &OrbitWitness,
    germ_order: usize,
) -> Result<()> {
    // h must have the shape z + z^2 P(z).
    if witness.h.len() < 2
        || !witness.h[0].is_zero()
        || witness.h[1] != BigRational::one()
    {
        return Err(Error::NotFound("h is not of the form z + z^2 P(z)".into()));
    }
    for (x, y) in &witness.pins {
        if poly_eval(&witness.h, x) != *y {
            return Err(Error::NotFound(format!("pin table inconsistent at x = {x}")));
        }
    }
    let run = run_orbit(
        f,
        g,
        word,
        &witness.base_point,
        u64::MAX,
        PinMode::Verify { h: &witness.h },
        witness.pins.clone(),
    )?;
    if run.orbit != witness.orbit {
        return Err(Error::NotFound("recomputed orbit differs from the witness".into()));
    }
    let z_end = run.orbit.last().expect("nonempty");
    if z_end == &witness.base_point {
        return Err(Error::NotFound("endpoint equals the base point".into()));
    }
    if !pairwise_distinct(&run.orbit) {
        return Err(Error::NotFound("orbit points are not pairwise distinct".into()));
    }
    match germ_deviation(f, g, word, &witness.h, germ_order)? {
        Some(dev) if dev == witness.germ_deviation => Ok(()),
        Some(dev) => Err(Error::NotFound(format!(
            "germ deviation mismatch: recomputed ({}, {}), witnessed ({}, {})",
            dev.0, dev.1, witness.germ_deviation.0, witness.germ_deviation.1
        ))),
        None => Err(Error::NotFound("germ shows no deviation at the probe order".into())),
    }
}
