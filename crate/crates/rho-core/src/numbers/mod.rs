//! Arbitrary-precision primitives shared by every engine: modular
//! exponentiation, Legendre symbols, inverse-free geometric sums, p-adic
//! splitting, and the symbolic [`RhoValue`] carrier for formula outputs.

mod primality;
mod value;

pub use primality::is_prime;
pub use value::{GeomTerm, PowerTerm, RhoValue, Term, DEFAULT_EXACT_LIMIT_BITS};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision nonnegative integer. `num-bigint` keeps the limb
/// representation canonical (no leading zero limbs) and all of comparison,
/// add, mul and divrem are total.
pub type Natural = BigUint;

/// Arbitrary-precision signed integer (term coefficients, exponent algebra).
pub type Int = BigInt;

/// Counter of big-integer arithmetic operations.
///
/// A power, a modular power, a geometric-sum evaluation and a Legendre symbol
/// each count as one operation, matching how the closed formulas are costed:
/// their bit-level expense is a separate concern from the operation count.
/// Engines take the accumulator per call; there is no global state. The
/// counter uses interior mutability so counted expressions compose.
#[derive(Clone, Debug, Default)]
pub struct OpCount(std::cell::Cell<u64>);

impl OpCount {
    pub fn new() -> Self {
        OpCount::default()
    }

    pub fn get(&self) -> u64 {
        self.0.get()
    }

    /// Records `n` operations performed elsewhere (reference-engine loops).
    pub fn bump(&self, n: u64) {
        self.0.set(self.0.get() + n);
    }

    #[inline]
    fn tick(&self) {
        self.0.set(self.0.get() + 1);
    }

    pub fn mul(&self, a: &Natural, b: &Natural) -> Natural {
        self.tick();
        a * b
    }

    pub fn mul_int(&self, a: &Int, b: &Int) -> Int {
        self.tick();
        a * b
    }

    pub fn add(&self, a: &Natural, b: &Natural) -> Natural {
        self.tick();
        a + b
    }

    pub fn add_int(&self, a: &Int, b: &Int) -> Int {
        self.tick();
        a + b
    }

    /// `a - b`; caller guarantees `a >= b`.
    pub fn sub(&self, a: &Natural, b: &Natural) -> Natural {
        self.tick();
        debug_assert!(a >= b);
        a - b
    }

    pub fn sub_int(&self, a: &Int, b: &Int) -> Int {
        self.tick();
        a - b
    }

    /// Floor division by two.
    pub fn half(&self, a: &Natural) -> Natural {
        self.tick();
        a >> 1
    }

    /// `a mod m` for a small machine-word modulus.
    pub fn rem_u64(&self, a: &Natural, m: u64) -> u64 {
        self.tick();
        (a % m).to_u64().unwrap()
    }

    pub fn modpow(&self, base: &Natural, exp: &Natural, m: &Natural) -> Result<Natural> {
        self.tick();
        modpow(base, exp, m)
    }

    pub fn geom_sum_mod(&self, x: &Natural, count: &Natural, m: &Natural) -> Result<Natural> {
        self.tick();
        geom_sum_mod(x, count, m)
    }

    pub fn legendre(&self, a: &Natural, p: &Natural) -> Result<i8> {
        self.tick();
        legendre(a, p)
    }
}

/// `base^exp mod m` in O(log exp) modular multiplications.
pub fn modpow(base: &Natural, exp: &Natural, m: &Natural) -> Result<Natural> {
    if m.is_zero() {
        return Err(Error::InvalidModulus);
    }
    if m.is_one() {
        return Ok(Natural::zero());
    }
    Ok(base.modpow(exp, m))
}

/// Legendre symbol (a/p) for an odd prime p, via Euler's criterion.
/// Primality of p is the caller's responsibility.
pub fn legendre(a: &Natural, p: &Natural) -> Result<i8> {
    if p.is_one() || !p.bit(0) {
        return Err(Error::InvalidPrime(format!("{p} is not an odd prime")));
    }
    let a = a % p;
    if a.is_zero() {
        return Ok(0);
    }
    let e = (p - 1u32) >> 1;
    let r = a.modpow(&e, p);
    if r.is_one() {
        Ok(1)
    } else {
        // For prime p the only other value is p - 1.
        debug_assert_eq!(&r + 1u32, *p, "Euler criterion failed; composite p?");
        Ok(-1)
    }
}

/// `(sum_{j=0}^{count-1} x^j) mod m` by recursive doubling, O(log count)
/// steps. Uses the identity S(2c) = S(c) * (1 + x^c), so no modular inverse
/// of x - 1 is ever needed and any modulus m >= 1 works.
pub fn geom_sum_mod(x: &Natural, count: &Natural, m: &Natural) -> Result<Natural> {
    if m.is_zero() {
        return Err(Error::InvalidModulus);
    }
    if m.is_one() || count.is_zero() {
        return Ok(Natural::zero());
    }
    let x = x % m;
    let mut sum = Natural::zero(); // sum_{j<c} x^j for the prefix c of count
    let mut xp = Natural::one() % m; // x^c mod m
    for i in (0..count.bits()).rev() {
        sum = &sum * (&xp + 1u32) % m;
        xp = &xp * &xp % m;
        if count.bit(i) {
            sum = (sum + &xp) % m;
            xp = xp * &x % m;
        }
    }
    Ok(sum)
}

/// Splits `lam = p^r * unit` with `p` not dividing `unit`.
///
/// Builds the ladder p, p^2, p^4, ... and strips the valuation greedily from
/// the top, so the number of big divisions is logarithmic in r instead of r
/// single-prime divisions.
pub fn p_adic_split(lam: &Natural, p: &Natural) -> Result<(Natural, Natural)> {
    if lam.is_zero() {
        return Err(Error::ZeroValuation);
    }
    if p < &Natural::from(2u32) {
        return Err(Error::InvalidPrime(format!("{p} cannot be a prime base")));
    }
    if !(lam % p).is_zero() {
        return Ok((Natural::zero(), lam.clone()));
    }
    let mut ladder = vec![p.clone()];
    loop {
        let last = ladder.last().unwrap();
        let next = last * last;
        if next > *lam {
            break;
        }
        ladder.push(next);
    }
    let mut unit = lam.clone();
    let mut r = Natural::zero();
    for (j, q) in ladder.iter().enumerate().rev() {
        let (quot, rem) = num_integer::Integer::div_rem(&unit, q);
        if rem.is_zero() {
            unit = quot;
            r.set_bit(j as u64, true);
        }
    }
    debug_assert!(!(&unit % p).is_zero());
    Ok((r, unit))
}

/// `base^exp` with the exponent required to fit in a machine word; callers
/// guard overall size before asking for an exact power.
pub fn nat_pow(base: &Natural, exp: &Natural) -> Result<Natural> {
    let e = exp
        .to_u64()
        .ok_or_else(|| Error::Budget(format!("exponent {exp} too large for exact rendering")))?;
    Ok(num_traits::Pow::pow(base, e))
}

/// Exact division; a nonzero remainder indicates a formula transcription bug.
pub fn exact_div(a: &Natural, b: &Natural) -> Natural {
    let (q, r) = num_integer::Integer::div_rem(a, b);
    debug_assert!(r.is_zero(), "exact_div with nonzero remainder");
    q
}

/// log10 of a Natural, as an f64 upper bound good to ~1e-9 relative.
pub(crate) fn log10_upper(x: &Natural) -> f64 {
    debug_assert!(!x.is_zero());
    match x.to_f64() {
        Some(v) if v.is_finite() => v.log10() * (1.0 + 1e-12) + 1e-12,
        _ => x.bits() as f64 * std::f64::consts::LOG10_2 * (1.0 + 1e-12),
    }
}

pub(crate) fn nat_to_f64_saturating(x: &Natural) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}
