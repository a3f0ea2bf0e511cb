//! Independent O(s)-operation engine used to cross-check the closed forms.
//!
//! It evaluates the underlying recursions term by term: the unit-coordinate
//! count rho^(1) lifts from the base modulus by a fixed power, the
//! all-divisible count rho^(2) descends two powers at a time, and the
//! resulting explicit sums run over Theta(r) or Theta(s) summands. The sums
//! are accumulated iteratively, never by self-call, so the operation count
//! is transparent and deep instances cannot overflow the stack.

use num_traits::{One, ToPrimitive, Zero};

use crate::base_cases::{rho1_base_counted, rho_two_small_counted};
use crate::closed_form::{LambdaClass, PrimePowerQuery};
use crate::error::{Error, Result};
use crate::numbers::{Int, Natural, OpCount, RhoValue};

/// rho split by whether some coordinate is a unit (rho1) or every
/// coordinate is divisible by p (rho2); rho1 + rho2 = rho.
#[derive(Clone, Debug)]
pub struct SplitCounts {
    pub rho1: RhoValue,
    pub rho2: RhoValue,
}

/// Case tag of the rho^(2) recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descent {
    /// rho2 = 1 (s = 1, lambda = 0)
    One,
    /// rho2 = p^k (s = 2, lambda = 0)
    PowPk,
    /// rho2 = p^k * rho_{k, lambda/p^2}(p^(s-2)) (s >= 3, p^2 | lambda)
    Recurse { lambda: Natural, s: Natural },
    /// rho2 = 0
    Zero,
}

/// rho^(2) case analysis for lambda already reduced mod p^s.
pub fn rho2_descend(p: &Natural, s: &Natural, lam: &Natural) -> Descent {
    let one = Natural::one();
    let two = Natural::from(2u32);
    if *s == one {
        return if lam.is_zero() { Descent::One } else { Descent::Zero };
    }
    if *s == two {
        return if lam.is_zero() { Descent::PowPk } else { Descent::Zero };
    }
    let p2 = p * p;
    if (lam % &p2).is_zero() {
        Descent::Recurse {
            lambda: lam / p2,
            s: s - &two,
        }
    } else {
        Descent::Zero
    }
}

/// rho^(1) at p^s from the base-case rho^(1), scaled by p^((s-1)(k-1))
/// (odd p) or 2^((s-3)(k-1)) (p = 2, s >= 3; the base residue is taken
/// mod 8).
pub fn rho1_lift(k: &Natural, p: &Natural, s: &Natural, lam: &Natural) -> Result<RhoValue> {
    let ops = OpCount::new();
    rho1_lift_counted(k, p, s, lam, &ops)
}

pub fn rho1_lift_counted(
    k: &Natural,
    p: &Natural,
    s: &Natural,
    lam: &Natural,
    ops: &OpCount,
) -> Result<RhoValue> {
    let one = Natural::one();
    if s.is_zero() {
        return Err(Error::InvalidInput("s must be at least 1".into()));
    }
    let k1 = ops.sub(k, &one);
    if *p == Natural::from(2u32) {
        let three = Natural::from(3u32);
        if *s < three {
            return Err(Error::InvalidInput(
                "p = 2 with s < 3: use rho1_base directly".into(),
            ));
        }
        let mut v = rho1_base_counted(k, &(lam % 8u32), &Natural::from(8u32), ops)?;
        v.shift_exp(&ops.mul(&ops.sub(s, &three), &k1));
        Ok(v)
    } else {
        let mut v = rho1_base_counted(k, &(lam % p), p, ops)?;
        v.shift_exp(&ops.mul(&ops.sub(s, &one), &k1));
        Ok(v)
    }
}

/// Both halves of the split; rho2 follows the descent chain through the
/// recursive engine.
pub fn rho_split(k: &Natural, p: &Natural, s: &Natural, lam: &Natural) -> Result<SplitCounts> {
    let two = Natural::from(2u32);
    let three = Natural::from(3u32);
    let rho1 = if *p == two && *s < three {
        let t = s.to_u8().unwrap();
        let m = Natural::from(1u64 << t);
        rho1_base_counted(k, &(lam % m.clone()), &m, &OpCount::new())?
    } else {
        rho1_lift(k, p, s, lam)?
    };
    let rho2 = match rho2_descend(p, s, lam) {
        Descent::One => RhoValue::from_integer(p.clone(), Natural::one()),
        Descent::PowPk => RhoValue::power(p.clone(), Int::one(), k.clone()),
        Descent::Recurse { lambda, s: s2 } => {
            let mut inner = rho_rec(k, p, &s2, &lambda)?;
            inner.shift_exp(k);
            inner
        }
        Descent::Zero => RhoValue::zero(p.clone()),
    };
    Ok(SplitCounts { rho1, rho2 })
}

/// Upper bound on s for the recursive engine; the sums have Theta(s) terms,
/// so astronomically large s belongs to the closed engine.
fn s_as_u64(s: &Natural) -> Result<u64> {
    s.to_u64().ok_or_else(|| {
        Error::Budget(format!(
            "recursive engine runs Theta(s) operations; s = {s} is out of reach"
        ))
    })
}

/// Shared iteration over the summands of the four explicit recursion sums.
/// `emit(ops, factors, exp, idx)` receives each summand as p^exp times
/// factors[idx]; the factor values are computed once up front.
fn rec_visit<F>(q: &PrimePowerQuery, ops: &OpCount, mut emit: F) -> Result<()>
where
    F: FnMut(&OpCount, &[RhoValue], Natural, usize),
{
    let (k, p, s) = (q.k(), q.p(), q.s());
    let one = Natural::one();
    let two = Natural::from(2u32);
    let su = s_as_u64(s)?;
    let k1 = ops.sub(k, &one);
    let mut factors: Vec<RhoValue> = Vec::new();

    if *p == two {
        debug_assert!(su > 3);
        let eight = Natural::from(8u32);
        // exponent of the i-th interior summand: k i + (s - 2i - 3)(k - 1)
        let interior_exp = |i: u64, ops: &OpCount| -> Natural {
            let ki = ops.mul(k, &Natural::from(i));
            let tail = ops.mul(&ops.sub(s, &Natural::from(2 * i + 3)), &k1);
            ops.add(&ki, &tail)
        };
        match q.lambda() {
            LambdaClass::Zero => {
                factors.push(rho1_base_counted(k, &Natural::zero(), &eight, ops)?);
                let half_s1 = (su - 1) / 2;
                // middle: 2^(k floor((s-1)/2)) * rho1(0, 2^t), t = s - 2 floor((s-1)/2)
                let t = su - 2 * half_s1;
                let m = Natural::from(1u64 << t);
                factors.push(rho1_base_counted(k, &Natural::zero(), &m, ops)?);
                // final: 2^(k floor(s/2)) * 1
                factors.push(RhoValue::from_integer(two.clone(), one.clone()));
                for i in 0..half_s1 {
                    let e = interior_exp(i, ops);
                    emit(ops, &factors, e, 0);
                }
                let e = ops.mul(k, &Natural::from(half_s1));
                emit(ops, &factors, e, 1);
                let e = ops.mul(k, &Natural::from(su / 2));
                emit(ops, &factors, e, 2);
            }
            LambdaClass::Split { r, unit } => {
                let ru = r.to_u64().expect("r < s fits u64");
                // interior summands: residue 0 mod 8 while r - 2i >= 3, else 4
                factors.push(rho1_base_counted(k, &Natural::zero(), &eight, ops)?);
                factors.push(rho1_base_counted(k, &Natural::from(4u32), &eight, ops)?);
                // final: 2^(k floor(r/2)) * rho1(mu, 2^t),
                // t = s - 2 floor(r/2), mu = 2^(r mod 2) * unit
                let t = su - 2 * (ru / 2);
                let mu = if ru % 2 == 1 { unit * 2u32 } else { unit.clone() };
                let f = if t >= 3 {
                    let mut f = rho1_base_counted(k, &(&mu % 8u32), &eight, ops)?;
                    f.shift_exp(&ops.mul(&ops.sub(&Natural::from(t), &Natural::from(3u32)), &k1));
                    f
                } else {
                    let m = Natural::from(1u64 << t);
                    rho1_base_counted(k, &(mu % &m), &m, ops)?
                };
                factors.push(f);
                for i in 0..ru / 2 {
                    let e = interior_exp(i, ops);
                    emit(ops, &factors, e, if ru - 2 * i >= 3 { 0 } else { 1 });
                }
                let e = ops.mul(k, &Natural::from(ru / 2));
                emit(ops, &factors, e, 2);
            }
        }
        return Ok(());
    }

    // odd p; exponent of the i-th summand: k i + (s - 2i - 1)(k - 1)
    let interior_exp = |i: u64, ops: &OpCount| -> Natural {
        let ki = ops.mul(k, &Natural::from(i));
        let tail = ops.mul(&ops.sub(s, &Natural::from(2 * i + 1)), &k1);
        ops.add(&ki, &tail)
    };
    match q.lambda() {
        LambdaClass::Zero => {
            factors.push(rho1_base_counted(k, &Natural::zero(), p, ops)?);
            factors.push(RhoValue::from_integer(p.clone(), one.clone()));
            for i in 0..=(su - 1) / 2 {
                let e = interior_exp(i, ops);
                emit(ops, &factors, e, 0);
            }
            let e = ops.mul(k, &Natural::from(su / 2));
            emit(ops, &factors, e, 1);
        }
        LambdaClass::Split { r, unit } => {
            let ru = r.to_u64().expect("r < s fits u64");
            factors.push(rho1_base_counted(k, &Natural::zero(), p, ops)?);
            factors.push(rho1_base_counted(k, unit, p, ops)?);
            for i in 0..=ru / 2 {
                let e = interior_exp(i, ops);
                emit(ops, &factors, e, if ru - 2 * i >= 1 { 0 } else { 1 });
            }
        }
    }
    Ok(())
}

/// rho_{k,lambda}(p^s) as the explicit recursion sum, exact.
pub fn rho_rec_query_counted(q: &PrimePowerQuery, ops: &OpCount) -> Result<RhoValue> {
    let (k, p, s) = (q.k(), q.p(), q.s());
    if *p == Natural::from(2u32) {
        if let Some(t) = s.to_u8().filter(|&t| t <= 3) {
            let lam = Natural::from(q.lambda_small(1 << t));
            return rho_two_small_counted(k, &lam, t, ops);
        }
    }
    let mut acc = RhoValue::zero(p.clone());
    rec_visit(q, ops, |_, factors, e, idx| {
        let mut t = factors[idx].clone();
        t.shift_exp(&e);
        acc.add_assign(t);
    })?;
    acc.normalize();
    Ok(acc)
}

pub fn rho_rec_query(q: &PrimePowerQuery) -> Result<RhoValue> {
    rho_rec_query_counted(q, &OpCount::new())
}

pub fn rho_rec(k: &Natural, p: &Natural, s: &Natural, lam: &Natural) -> Result<RhoValue> {
    let q = PrimePowerQuery::new(k.clone(), p.clone(), s.clone(), lam)?;
    rho_rec_query(&q)
}

/// Residue of the recursion sum mod m, accumulated term by term without
/// materializing the Theta(s) symbolic value.
pub fn rho_rec_mod_counted(q: &PrimePowerQuery, m: &Natural, ops: &OpCount) -> Result<Natural> {
    if m.is_zero() {
        return Err(Error::InvalidModulus);
    }
    let p = q.p();
    if *p == Natural::from(2u32) {
        if let Some(t) = q.s().to_u8().filter(|&t| t <= 3) {
            let lam = Natural::from(q.lambda_small(1 << t));
            return rho_two_small_counted(q.k(), &lam, t, ops)?.eval_mod_counted(m, ops);
        }
    }
    let mut factor_mods: Vec<Natural> = Vec::new();
    let mut acc = Natural::zero();
    let mut err = None;
    rec_visit(q, ops, |ops, factors, e, idx| {
        if err.is_some() {
            return;
        }
        while factor_mods.len() < factors.len() {
            match factors[factor_mods.len()].eval_mod_counted(m, ops) {
                Ok(v) => factor_mods.push(v),
                Err(e) => {
                    err = Some(e);
                    return;
                }
            }
        }
        match ops.modpow(p, &e, m) {
            Ok(pw) => {
                let t = ops.mul(&pw, &factor_mods[idx]) % m;
                acc = ops.add(&acc, &t) % m;
            }
            Err(e) => err = Some(e),
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    Ok(acc)
}

pub fn rho_rec_mod(q: &PrimePowerQuery, m: &Natural) -> Result<Natural> {
    rho_rec_mod_counted(q, m, &OpCount::new())
}
