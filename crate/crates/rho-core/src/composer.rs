//! General-n evaluation: the count is multiplicative in n, so a query
//! factors into prime powers, each prime power goes to the chosen engine,
//! and the results multiply back together. Inputs like 5^1000000 whose
//! decimal form is infeasible arrive as structured integers and are reduced
//! per prime power symbolically.

use std::fmt;

use num_traits::{One, ToPrimitive, Zero};

use crate::closed_form::{rho_prime_power_counted, PrimePowerQuery};
#[cfg(test)]
use crate::closed_form::LambdaClass;
use crate::error::{Error, Result};
use crate::numbers::{
    is_prime, modpow, p_adic_split, Natural, OpCount, RhoValue, DEFAULT_EXACT_LIMIT_BITS,
};
use crate::recursive_form::rho_rec_query_counted;
use crate::reference;

/// Factoring scope: opaque composites above 2^128 are a declared non-goal.
const FACTOR_BITS_LIMIT: u64 = 128;
/// Trial division bound before the rho cycle finder takes over.
const TRIAL_LIMIT: u64 = 1_000_000;
/// Iteration budget for the Brent rho cycle finder.
const RHO_BUDGET: u64 = 8_000_000;

/// An integer given either plainly or as a product of explicit powers.
/// Factor bases need not be prime at parse time.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuredInt {
    Plain(Natural),
    Product(Vec<(Natural, Natural)>),
}

impl StructuredInt {
    pub fn from_u64(v: u64) -> Self {
        StructuredInt::Plain(Natural::from(v))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            StructuredInt::Plain(v) => v.is_zero(),
            StructuredInt::Product(fs) => fs
                .iter()
                .any(|(base, exp)| base.is_zero() && !exp.is_zero()),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            StructuredInt::Plain(v) => v.is_one(),
            StructuredInt::Product(fs) => fs
                .iter()
                .all(|(base, exp)| base.is_one() || exp.is_zero()),
        }
    }

    /// Upper bound on the bit length of the value.
    pub fn bits_bound(&self) -> Natural {
        match self {
            StructuredInt::Plain(v) => Natural::from(v.bits()),
            StructuredInt::Product(fs) => {
                let mut total = Natural::zero();
                for (base, exp) in fs {
                    if base.is_zero() || exp.is_zero() {
                        continue;
                    }
                    total += exp * base.bits();
                }
                total + Natural::one()
            }
        }
    }

    /// Materializes the value, guarded against astronomically large inputs.
    pub fn eval(&self, limit_bits: u64) -> Result<Natural> {
        if self.bits_bound() > Natural::from(limit_bits) {
            return Err(Error::TooLarge {
                digits10: (self.bits_bound() * 30103u64 / 100000u64 + 1u32).to_string(),
                limit_bits,
            });
        }
        match self {
            StructuredInt::Plain(v) => Ok(v.clone()),
            StructuredInt::Product(fs) => {
                let mut acc = Natural::one();
                for (base, exp) in fs {
                    acc *= crate::numbers::nat_pow(base, exp)?;
                }
                Ok(acc)
            }
        }
    }

    /// The value mod m via modular powering; cheap regardless of magnitude.
    pub fn eval_mod(&self, m: &Natural) -> Result<Natural> {
        if m.is_zero() {
            return Err(Error::InvalidModulus);
        }
        match self {
            StructuredInt::Plain(v) => Ok(v % m),
            StructuredInt::Product(fs) => {
                let mut acc = Natural::one() % m;
                for (base, exp) in fs {
                    acc = acc * modpow(base, exp, m)? % m;
                }
                Ok(acc)
            }
        }
    }
}

impl fmt::Display for StructuredInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuredInt::Plain(v) => write!(f, "{v}"),
            StructuredInt::Product(fs) => {
                if fs.is_empty() {
                    return write!(f, "1");
                }
                for (i, (base, exp)) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    if exp.is_one() {
                        write!(f, "{base}")?;
                    } else {
                        write!(f, "{base}^{exp}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

/// Parses the grammar INT := DEC | DEC '^' DEC | INT '*' INT, whitespace
/// insensitive, '^' binding tighter than '*'. Value 0 is representable
/// (lambda may be zero); callers needing a modulus reject it separately.
pub fn parse_structured(text: &str) -> Result<StructuredInt> {
    let bytes = text.as_bytes();
    let mut pos = 0usize;

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
    };
    let parse_dec = |pos: &mut usize| -> Result<Natural> {
        skip_ws(pos);
        let start = *pos;
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::Parse {
                pos: start,
                msg: "expected a decimal integer".into(),
            });
        }
        let digits = std::str::from_utf8(&bytes[start..*pos]).unwrap();
        digits.parse::<Natural>().map_err(|e| Error::Parse {
            pos: start,
            msg: e.to_string(),
        })
    };

    let mut factors: Vec<(Natural, Natural)> = Vec::new();
    let mut any_caret = false;
    loop {
        let base = parse_dec(&mut pos)?;
        skip_ws(&mut pos);
        let exp = if pos < bytes.len() && bytes[pos] == b'^' {
            pos += 1;
            any_caret = true;
            parse_dec(&mut pos)?
        } else {
            Natural::one()
        };
        factors.push((base, exp));
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] == b'*' {
            pos += 1;
        } else {
            return Err(Error::Parse {
                pos,
                msg: format!("unexpected character '{}'", bytes[pos] as char),
            });
        }
    }
    if factors.len() == 1 && !any_caret {
        Ok(StructuredInt::Plain(factors.pop().unwrap().0))
    } else {
        Ok(StructuredInt::Product(factors))
    }
}

/// Parses a structured integer that must be a valid modulus (nonzero).
pub fn parse_modulus(text: &str) -> Result<StructuredInt> {
    let v = parse_structured(text)?;
    if v.is_zero() {
        return Err(Error::InvalidInput("n must be nonzero".into()));
    }
    Ok(v)
}

/// Prime-power decomposition with strictly increasing certified primes.
/// Certification is Miller-Rabin: deterministic below 3.3e14, error below
/// 2^-128 above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    factors: Vec<(Natural, Natural)>,
}

impl Factorization {
    pub fn factors(&self) -> &[(Natural, Natural)] {
        &self.factors
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Re-multiplies mod m (consistency checks for structured inputs).
    pub fn eval_mod(&self, m: &Natural) -> Result<Natural> {
        if m.is_zero() {
            return Err(Error::InvalidModulus);
        }
        let mut acc = Natural::one() % m;
        for (p, s) in &self.factors {
            acc = acc * modpow(p, s, m)? % m;
        }
        Ok(acc)
    }
}

/// Pollard rho cycle finder; returns a nontrivial factor or None within the
/// iteration budget. n must be odd, composite and not a perfect square
/// (trial division and square peeling run first).
fn pollard_rho(n: &Natural, budget: u64) -> Option<Natural> {
    let one = Natural::one();
    for c in 1u64..=8 {
        let cn = Natural::from(c);
        let f = |x: &Natural| (x * x + &cn) % n;
        let mut x = Natural::from(2u64);
        let mut y = x.clone();
        let mut d = one.clone();
        let mut count = 0u64;
        while d.is_one() {
            if count >= budget / 8 {
                break;
            }
            x = f(&x);
            y = f(&f(&y));
            count += 1;
            let diff = if x >= y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break; // cycle without factor; retry with another c
            }
            d = num_integer::Integer::gcd(&diff, n);
        }
        if !d.is_one() && d != *n {
            return Some(d);
        }
    }
    None
}

/// Splits an opaque natural into certified prime factors.
fn factor_natural(v: &Natural, out: &mut Vec<(Natural, Natural)>) -> Result<()> {
    if v.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    if v.bits() > FACTOR_BITS_LIMIT && !is_prime(v) {
        return Err(Error::FactorGiveUp(v.to_string()));
    }
    let mut rest = v.clone();
    // trial division by 2, 3 and the 6k+-1 wheel up to the limit
    let mut trial = |d: u64, rest: &mut Natural| {
        let db = Natural::from(d);
        let mut e = 0u64;
        while (&*rest % &db).is_zero() {
            *rest /= &db;
            e += 1;
        }
        if e > 0 {
            out.push((db, Natural::from(e)));
        }
    };
    trial(2, &mut rest);
    trial(3, &mut rest);
    let mut d = 5u64;
    while d <= TRIAL_LIMIT && Natural::from(d) * Natural::from(d) <= rest {
        trial(d, &mut rest);
        trial(d + 2, &mut rest);
        d += 6;
    }
    // whatever remains is prime, 1, or needs the cycle finder
    let mut stack = vec![rest];
    while let Some(v) = stack.pop() {
        if v.is_one() {
            continue;
        }
        if is_prime(&v) {
            out.push((v, Natural::one()));
            continue;
        }
        // perfect squares defeat the rho iteration; peel them first
        let root = v.sqrt();
        if &root * &root == v {
            stack.push(root.clone());
            stack.push(root);
            continue;
        }
        match pollard_rho(&v, RHO_BUDGET) {
            Some(d) => {
                stack.push(&v / &d);
                stack.push(d);
            }
            None => return Err(Error::FactorGiveUp(v.to_string())),
        }
    }
    Ok(())
}

/// Canonical factorization of a structured integer; exponents of equal
/// primes merge, bases that are not prime are split further.
pub fn factorize(x: &StructuredInt) -> Result<Factorization> {
    if x.is_zero() {
        return Err(Error::InvalidInput("cannot factor 0".into()));
    }
    let mut raw: Vec<(Natural, Natural)> = Vec::new();
    match x {
        StructuredInt::Plain(v) => {
            if !v.is_one() {
                factor_natural(v, &mut raw)?;
            }
        }
        StructuredInt::Product(fs) => {
            for (base, exp) in fs {
                if exp.is_zero() || base.is_one() {
                    continue;
                }
                if is_prime(base) {
                    raw.push((base.clone(), exp.clone()));
                    continue;
                }
                if base.bits() > FACTOR_BITS_LIMIT {
                    return Err(Error::FactorGiveUp(base.to_string()));
                }
                let mut parts = Vec::new();
                factor_natural(base, &mut parts)?;
                for (p, e) in parts {
                    raw.push((p, e * exp));
                }
            }
        }
    }
    let mut merged: std::collections::BTreeMap<Natural, Natural> = Default::default();
    for (p, e) in raw {
        *merged.entry(p).or_default() += e;
    }
    Ok(Factorization {
        factors: merged.into_iter().collect(),
    })
}

/// Which engine evaluates each prime power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    Closed,
    Recursive,
    Bruteforce,
    Gauss,
    Toth,
    Matrix,
}

impl Engine {
    pub fn name(&self) -> &'static str {
        match self {
            Engine::Closed => "closed",
            Engine::Recursive => "recursive",
            Engine::Bruteforce => "bruteforce",
            Engine::Gauss => "gauss",
            Engine::Toth => "toth",
            Engine::Matrix => "matrix",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "closed" => Ok(Engine::Closed),
            "recursive" => Ok(Engine::Recursive),
            "bruteforce" => Ok(Engine::Bruteforce),
            "gauss" => Ok(Engine::Gauss),
            "toth" => Ok(Engine::Toth),
            "matrix" => Ok(Engine::Matrix),
            other => Err(Error::InvalidInput(format!("unknown engine '{other}'"))),
        }
    }
}

/// Per-prime-power results; the full count is their product.
#[derive(Clone, Debug)]
pub struct GeneralResult {
    factors: Vec<(PrimePowerQuery, RhoValue)>,
}

impl GeneralResult {
    pub fn factors(&self) -> &[(PrimePowerQuery, RhoValue)] {
        &self.factors
    }

    pub fn eval_exact(&self) -> Result<Natural> {
        self.eval_exact_limited(DEFAULT_EXACT_LIMIT_BITS)
    }

    pub fn eval_exact_limited(&self, limit_bits: u64) -> Result<Natural> {
        let mut acc = Natural::one();
        for (_, v) in &self.factors {
            acc *= v.eval_exact_limited(limit_bits)?;
        }
        Ok(acc)
    }

    pub fn eval_mod(&self, m: &Natural) -> Result<Natural> {
        if m.is_zero() {
            return Err(Error::InvalidModulus);
        }
        let mut acc = Natural::one() % m;
        for (_, v) in &self.factors {
            acc = acc * v.eval_mod(m)? % m;
        }
        Ok(acc)
    }

    /// Upper bound on the decimal digits of the product.
    pub fn digits_estimate(&self) -> Natural {
        let mut total = Natural::zero();
        for (_, v) in &self.factors {
            total += v.digits_estimate();
        }
        if total.is_zero() {
            Natural::one()
        } else {
            total
        }
    }
}

/// Builds the prime-power query for lambda against p^s. Structured lambdas
/// reduce symbolically: the valuation accumulates from the factor bases and
/// the unit residue is a modular product, so no giant integer is formed.
fn query_for(
    k: &Natural,
    lam: &StructuredInt,
    p: &Natural,
    s: &Natural,
) -> Result<PrimePowerQuery> {
    if lam.is_zero() {
        return PrimePowerQuery::zero(k.clone(), p.clone(), s.clone());
    }
    match lam {
        StructuredInt::Plain(v) => PrimePowerQuery::new(k.clone(), p.clone(), s.clone(), v),
        StructuredInt::Product(fs) => {
            let unit_mod = if *p == Natural::from(2u32) {
                Natural::from(8u32)
            } else {
                p.clone()
            };
            let mut r_total = Natural::zero();
            let mut unit = Natural::one();
            for (base, exp) in fs {
                if exp.is_zero() || base.is_one() {
                    continue;
                }
                let (v, u) = p_adic_split(base, p)?;
                r_total += v * exp;
                unit = unit * modpow(&u, exp, &unit_mod)? % &unit_mod;
            }
            if r_total >= *s {
                return PrimePowerQuery::zero(k.clone(), p.clone(), s.clone());
            }
            PrimePowerQuery::from_split(k.clone(), p.clone(), s.clone(), r_total, unit)
        }
    }
}

/// rho_{k,lambda}(n) via the multiplicative product over the prime powers
/// of n, each evaluated by the chosen engine. lambda is reduced mod n
/// (per prime power). n = 1 yields the empty product, value 1.
pub fn rho_general(
    k: &Natural,
    lam: &StructuredInt,
    n: &StructuredInt,
    engine: Engine,
) -> Result<GeneralResult> {
    rho_general_counted(k, lam, n, engine, &OpCount::new())
}

pub fn rho_general_counted(
    k: &Natural,
    lam: &StructuredInt,
    n: &StructuredInt,
    engine: Engine,
    ops: &OpCount,
) -> Result<GeneralResult> {
    if n.is_zero() {
        return Err(Error::InvalidInput("n must be at least 1".into()));
    }
    if k.is_zero() {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let fac = factorize(n)?;
    let mut factors = Vec::with_capacity(fac.factors().len());
    for (p, s) in fac.factors() {
        let q = query_for(k, lam, p, s)?;
        let value = match engine {
            Engine::Closed => rho_prime_power_counted(&q, ops)?,
            Engine::Recursive => rho_rec_query_counted(&q, ops)?,
            Engine::Bruteforce | Engine::Gauss | Engine::Toth | Engine::Matrix => {
                reference_value(k, lam, p, s, engine, ops)?
            }
        };
        factors.push((q, value));
    }
    Ok(GeneralResult { factors })
}

/// Desk-scale engines: they need the honest residue lambda mod p^s and a
/// machine-size modulus, so structured astronomically-large inputs are
/// rejected rather than silently reduced through the theorems they are
/// supposed to verify.
fn reference_value(
    k: &Natural,
    lam: &StructuredInt,
    p: &Natural,
    s: &Natural,
    engine: Engine,
    ops: &OpCount,
) -> Result<RhoValue> {
    let su = s
        .to_u32()
        .ok_or_else(|| Error::Budget(format!("reference engines cannot take s = {s}")))?;
    let pu = p
        .to_u64()
        .ok_or_else(|| Error::Budget(format!("reference engines cannot take p = {p}")))?;
    let m = checked_pow(pu, su)
        .ok_or_else(|| Error::Budget(format!("reference engines cannot take {pu}^{su}")))?;
    let mb = Natural::from(m);
    let lam_small = lam.eval_mod(&mb)?.to_u64().unwrap();
    let small_k = || {
        k.to_u32()
            .ok_or_else(|| Error::Budget(format!("engine {} cannot take k = {k}", engine.name())))
    };
    let count = match engine {
        Engine::Bruteforce => {
            reference::brute_histogram_counted(small_k()?, m, reference::BRUTE_BUDGET, ops)?
                .get(lam_small)
                .clone()
        }
        Engine::Gauss => {
            let h = reference::gauss_histogram_counted(small_k()?, m, ops)?;
            h.get(lam_small).clone()
        }
        Engine::Toth => {
            let h = reference::toth_histogram_counted(small_k()?, m, ops)?;
            h.get(lam_small).clone()
        }
        Engine::Matrix => reference::matrix_power_rho_counted(k, m, None, ops)?
            .get(lam_small)
            .clone(),
        _ => unreachable!(),
    };
    Ok(RhoValue::from_integer(p.clone(), count))
}

fn checked_pow(p: u64, s: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..s {
        acc = acc.checked_mul(p)?;
    }
    Some(acc)
}
