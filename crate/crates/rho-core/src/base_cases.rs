//! Closed-form base values every engine bottoms out on: rho_{k,lambda}(p)
//! for odd primes (Lebesgue, 1837) and rho_{k,lambda}(2^t) for t in {1,2,3},
//! plus the unit-coordinate corrections rho^(1).
//!
//! The mod-4 and mod-8 formulas mix powers of 2^(k/2) with cos/sin at
//! multiples of pi/4. Floating point is never touched: each trig factor is a
//! sign times a power of sqrt(2) selected by k mod 8, products are combined
//! as exact sqrt(2)-exponents, and whatever survives cancellation must land
//! on an integer power of 2. k can therefore be of any magnitude.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numbers::{Int, Natural, OpCount, RhoValue};

/// Sign and p-exponent of the Lebesgue auxiliary quantities
/// t = (-1)^((p-1)(k-1)/4) * p^((k-1)/2) (odd k only) and
/// l = (-1)^(k(p-1)/4) * p^((k-2)/2) (even k only).
/// Only k mod 4 and p mod 4 decide the signs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LebesgueAux {
    pub sign: i8,
    pub exp: Natural,
}

impl LebesgueAux {
    /// The `t` quantity; defined only for odd k.
    pub fn t(k: &Natural, p: &Natural) -> Result<Self> {
        if !k.bit(0) {
            return Err(Error::InvalidInput("t is defined only for odd k".into()));
        }
        let k4 = (k % 4u32).to_u8().unwrap();
        let p4 = (p % 4u32).to_u8().unwrap();
        let sign = if k4 == 3 && p4 == 3 { -1 } else { 1 };
        Ok(LebesgueAux {
            sign,
            exp: (k - 1u32) >> 1,
        })
    }

    /// The `l` quantity; defined only for even k.
    pub fn l(k: &Natural, p: &Natural) -> Result<Self> {
        if k.bit(0) {
            return Err(Error::InvalidInput("l is defined only for even k".into()));
        }
        let k4 = (k % 4u32).to_u8().unwrap();
        let p4 = (p % 4u32).to_u8().unwrap();
        let sign = if k4 == 2 && p4 == 3 { -1 } else { 1 };
        Ok(LebesgueAux {
            sign,
            exp: (k - 2u32) >> 1,
        })
    }
}

/// Exact value of a trig factor at a multiple of pi/4: sign * sqrt2^half_exp
/// with half_exp in {-1, 0}. Any such coefficient that survives into a rho
/// value must combine to an even sqrt2-exponent, i.e. an integer power of 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoAdicCoeff {
    pub sign: i8,
    pub half_exp: i8,
}

const Z: TwoAdicCoeff = TwoAdicCoeff { sign: 0, half_exp: 0 };
const P0: TwoAdicCoeff = TwoAdicCoeff { sign: 1, half_exp: 0 };
const N0: TwoAdicCoeff = TwoAdicCoeff { sign: -1, half_exp: 0 };
const PH: TwoAdicCoeff = TwoAdicCoeff { sign: 1, half_exp: -1 };
const NH: TwoAdicCoeff = TwoAdicCoeff { sign: -1, half_exp: -1 };

/// cos(a*pi/4) indexed by a mod 8.
const COS8: [TwoAdicCoeff; 8] = [P0, PH, Z, NH, N0, NH, Z, PH];
/// sin(a*pi/4) indexed by a mod 8.
const SIN8: [TwoAdicCoeff; 8] = [Z, PH, P0, PH, Z, NH, N0, NH];

#[derive(Clone, Copy)]
enum Trig {
    One,
    Cos,
    Sin,
}

/// One summand of a mod-2^t formula:
/// coeff * sqrt2^(alpha*k + beta) * trig((mul*k + add) * pi / 4).
#[derive(Clone, Copy)]
struct RawTerm {
    coeff: i8,
    alpha: u8,
    beta: i8,
    trig: Trig,
    mul: u8,
    add: u8,
}

const fn one(coeff: i8, alpha: u8, beta: i8) -> RawTerm {
    RawTerm { coeff, alpha, beta, trig: Trig::One, mul: 0, add: 0 }
}
const fn cos(coeff: i8, alpha: u8, beta: i8, mul: u8, add: u8) -> RawTerm {
    RawTerm { coeff, alpha, beta, trig: Trig::Cos, mul, add }
}
const fn sin(coeff: i8, alpha: u8, beta: i8, mul: u8, add: u8) -> RawTerm {
    RawTerm { coeff, alpha, beta, trig: Trig::Sin, mul, add }
}

/// rho_{k,lambda}(2) = 2^(k-1) for both lambda.
const MOD2: [&[RawTerm]; 2] = [&[one(1, 2, -2)], &[one(1, 2, -2)]];

/// rho_{k,lambda}(4) = 4^(k-1) +- 2^(3k/2-1) * cos/sin(k pi/4).
const MOD4: [&[RawTerm]; 4] = [
    &[one(1, 4, -4), cos(1, 3, -2, 1, 0)],
    &[one(1, 4, -4), sin(1, 3, -2, 1, 0)],
    &[one(1, 4, -4), cos(-1, 3, -2, 1, 0)],
    &[one(1, 4, -4), sin(-1, 3, -2, 1, 0)],
];

/// rho_{k,lambda}(8): eight four-term combinations of 8^(k-1), 2^(2k-2),
/// 2^(5k/2-2) and phase-shifted trig factors.
const MOD8: [&[RawTerm]; 8] = [
    &[one(1, 6, -6), cos(1, 4, -4, 1, 0), cos(1, 5, -4, 1, 0), cos(1, 4, -4, 3, 0)],
    &[one(1, 6, -6), sin(1, 5, -4, 1, 0), sin(1, 4, -4, 1, 1), cos(-1, 4, -4, 3, 1)],
    &[one(1, 6, -6), cos(-1, 5, -4, 1, 0), sin(1, 4, -4, 1, 0), sin(-1, 4, -4, 3, 0)],
    &[one(1, 6, -6), sin(-1, 5, -4, 1, 0), cos(-1, 4, -4, 1, 1), cos(-1, 4, -4, 3, 3)],
    &[one(1, 6, -6), cos(-1, 4, -4, 1, 0), cos(1, 5, -4, 1, 0), cos(-1, 4, -4, 3, 0)],
    &[one(1, 6, -6), sin(1, 5, -4, 1, 0), sin(-1, 4, -4, 1, 1), cos(1, 4, -4, 3, 1)],
    &[one(1, 6, -6), cos(-1, 5, -4, 1, 0), sin(-1, 4, -4, 1, 0), sin(1, 4, -4, 3, 0)],
    &[one(1, 6, -6), sin(-1, 5, -4, 1, 0), sin(-1, 4, -4, 3, 1), cos(1, 4, -4, 1, 1)],
];

/// Test hook: flips one table sign when RHO_FAULT_INJECT is set, so the
/// differential suites can demonstrate they catch a corrupted table.
fn fault_injected() -> bool {
    static FAULT: OnceLock<bool> = OnceLock::new();
    *FAULT.get_or_init(|| std::env::var_os("RHO_FAULT_INJECT").is_some())
}

/// rho_{k,lambda}(p) for an odd prime p, Lebesgue's closed form.
pub fn rho_odd_prime_counted(
    k: &Natural,
    lam_mod_p: &Natural,
    p: &Natural,
    ops: &OpCount,
) -> Result<RhoValue> {
    if p.is_one() || !p.bit(0) {
        return Err(Error::InvalidPrime(format!("{p} is not an odd prime")));
    }
    if k.is_zero() {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if lam_mod_p >= p {
        return Err(Error::InvalidInput(format!(
            "lambda residue {lam_mod_p} not reduced mod {p}"
        )));
    }
    let chi = ops.legendre(lam_mod_p, p)?;
    let mut v = RhoValue::zero(p.clone());
    v.push_pow(Int::one(), ops.sub(k, &Natural::one()));
    if k.bit(0) {
        // odd k: p^(k-1) + chi * t
        if chi != 0 {
            let t = LebesgueAux::t(k, p)?;
            v.push_pow(Int::from(chi as i32 * t.sign as i32), t.exp);
        }
    } else {
        // even k: p^(k-1) - l + (1 - |chi|) p l
        let l = LebesgueAux::l(k, p)?;
        let ls = Int::from(l.sign as i32);
        if chi == 0 {
            v.push_pow(ls.clone(), ops.add(&l.exp, &Natural::one()));
        }
        v.push_pow(-ls, l.exp);
    }
    v.normalize();
    Ok(v)
}

pub fn rho_odd_prime(k: &Natural, lam_mod_p: &Natural, p: &Natural) -> Result<RhoValue> {
    rho_odd_prime_counted(k, lam_mod_p, p, &OpCount::new())
}

/// rho_{k,lambda}(2^t) for t in {1,2,3}, exact for k of any size.
pub fn rho_two_small_counted(
    k: &Natural,
    lam: &Natural,
    t: u8,
    ops: &OpCount,
) -> Result<RhoValue> {
    if k.is_zero() {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let table: &[&[RawTerm]] = match t {
        1 => &MOD2,
        2 => &MOD4,
        3 => &MOD8,
        _ => {
            return Err(Error::InvalidInput(format!(
                "two-adic base cases cover moduli 2, 4, 8 only (got exponent {t})"
            )))
        }
    };
    let lam_ix = lam.to_usize().filter(|&l| l < table.len()).ok_or_else(|| {
        Error::InvalidInput(format!("lambda = {lam} out of range for modulus 2^{t}"))
    })?;

    let k8 = ops.rem_u64(k, 8) as u8;
    let ki = Int::from(k.clone());

    // Group the summands by their exact sqrt2-exponent alpha*k + beta and
    // let opposite signs cancel; only even exponents may survive.
    let mut groups: BTreeMap<Int, i64> = BTreeMap::new();
    for (ix, rt) in table[lam_ix].iter().enumerate() {
        let mut coeff = rt.coeff;
        if fault_injected() && t == 2 && lam_ix == 1 && ix == 1 {
            coeff = -coeff;
        }
        let tv = match rt.trig {
            Trig::One => P0,
            Trig::Cos => COS8[((rt.mul * k8 + rt.add) % 8) as usize],
            Trig::Sin => SIN8[((rt.mul * k8 + rt.add) % 8) as usize],
        };
        if tv.sign == 0 {
            continue;
        }
        let e = ops.add_int(
            &ops.mul_int(&Int::from(rt.alpha), &ki),
            &Int::from(rt.beta as i32 + tv.half_exp as i32),
        );
        *groups.entry(e).or_default() += coeff as i64 * tv.sign as i64;
    }

    let mut v = RhoValue::zero(Natural::from(2u32));
    for (e, c) in groups {
        if c == 0 {
            continue;
        }
        assert!(
            e.bit(0) == false && !e.is_negative(),
            "two-adic table produced a non-integral power: coeff {c} * sqrt2^{e} at (t={t}, lambda={lam_ix}, k mod 8 = {k8})"
        );
        let half: Int = e >> 1;
        v.push_pow(Int::from(c), half.to_biguint().unwrap());
    }
    v.normalize();
    Ok(v)
}

pub fn rho_two_small(k: &Natural, lam: &Natural, t: u8) -> Result<RhoValue> {
    rho_two_small_counted(k, lam, t, &OpCount::new())
}

/// rho^(1): solutions with at least one unit coordinate, at the base moduli.
/// Equals rho minus 1 (odd p or modulus 2, lambda = 0), minus 2^k (modulus 4,
/// lambda = 0), minus 2^(2k-1) (modulus 8, lambda in {0, 4}); rho otherwise.
pub fn rho1_base_counted(
    k: &Natural,
    lam: &Natural,
    m: &Natural,
    ops: &OpCount,
) -> Result<RhoValue> {
    let two = Natural::from(2u32);
    let four = Natural::from(4u32);
    let eight = Natural::from(8u32);
    let mut v;
    if *m == two {
        v = rho_two_small_counted(k, lam, 1, ops)?;
        if lam.is_zero() {
            v.push_pow(Int::from(-1), Natural::zero());
        }
    } else if *m == four {
        v = rho_two_small_counted(k, lam, 2, ops)?;
        if lam.is_zero() {
            v.push_pow(Int::from(-1), k.clone());
        }
    } else if *m == eight {
        v = rho_two_small_counted(k, lam, 3, ops)?;
        if lam.is_zero() || *lam == four {
            let e = ops.sub(&ops.mul(&two, k), &Natural::one());
            v.push_pow(Int::from(-1), e);
        }
    } else {
        let lam = lam % m;
        v = rho_odd_prime_counted(k, &lam, m, ops)?;
        if lam.is_zero() {
            v.push_pow(Int::from(-1), Natural::zero());
        }
    }
    v.normalize();
    Ok(v)
}

pub fn rho1_base(k: &Natural, lam: &Natural, m: &Natural) -> Result<RhoValue> {
    rho1_base_counted(k, lam, m, &OpCount::new())
}
