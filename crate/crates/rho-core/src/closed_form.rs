//! Constant-operation evaluation of rho_{k,lambda}(p^s).
//!
//! Every formula here reduces to O(1) big-integer operations regardless of
//! the magnitudes of k, s and the p-adic valuation of lambda: the interior
//! geometric sums collapse into [`omega`], and the handful of base values
//! come from [`crate::base_cases`]. The p = 2 case guards (empty sums for
//! r in {0,1,2,3}, the mod-8 correction term only for even r >= 2) are
//! derived from the underlying recursions rather than transcribed, and the
//! whole engine is differentially tested against the recursive and oracle
//! engines.

use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::base_cases::{rho1_base_counted, rho_odd_prime_counted, rho_two_small_counted};
use crate::error::{Error, Result};
use crate::numbers::{is_prime, p_adic_split, Int, Natural, OpCount, RhoValue};

/// One prime-power instance (k, p, s) with lambda classified as zero or as
/// p^r * unit. For nonzero lambda, r < s and the unit is kept only modulo p
/// (odd p) or modulo 8 (p = 2); the formulas consume nothing finer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePowerQuery {
    k: Natural,
    p: Natural,
    s: Natural,
    lambda: LambdaClass,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaClass {
    /// lambda = 0 mod p^s
    Zero,
    /// lambda = p^r * unit with p not dividing unit and r < s
    Split { r: Natural, unit: Natural },
}

impl PrimePowerQuery {
    fn check_base(k: &Natural, p: &Natural, s: &Natural) -> Result<()> {
        if k.is_zero() {
            return Err(Error::InvalidInput("k must be at least 1".into()));
        }
        if s.is_zero() {
            return Err(Error::InvalidInput("s must be at least 1".into()));
        }
        if !is_prime(p) {
            return Err(Error::InvalidPrime(format!("{p} is not prime")));
        }
        Ok(())
    }

    /// Query with lambda = 0.
    pub fn zero(k: Natural, p: Natural, s: Natural) -> Result<Self> {
        Self::check_base(&k, &p, &s)?;
        Ok(PrimePowerQuery {
            k,
            p,
            s,
            lambda: LambdaClass::Zero,
        })
    }

    /// Query with lambda = p^r * unit given pre-split. A valuation r >= s
    /// means lambda = 0 mod p^s and collapses to the zero class. The unit is
    /// reduced to the residue the formulas need.
    pub fn from_split(k: Natural, p: Natural, s: Natural, r: Natural, unit: Natural) -> Result<Self> {
        Self::check_base(&k, &p, &s)?;
        if (&unit % &p).is_zero() {
            return Err(Error::InvalidInput(format!(
                "unit part {unit} is divisible by p = {p}"
            )));
        }
        if r >= s {
            return Self::zero(k, p, s);
        }
        let unit = if p == Natural::from(2u32) {
            unit % 8u32
        } else {
            unit % &p
        };
        Ok(PrimePowerQuery {
            k,
            p,
            s,
            lambda: LambdaClass::Split { r, unit },
        })
    }

    /// Query from a plain lambda, reduced mod p^s by p-adic splitting.
    pub fn new(k: Natural, p: Natural, s: Natural, lam: &Natural) -> Result<Self> {
        Self::check_base(&k, &p, &s)?;
        if lam.is_zero() {
            return Self::zero(k, p, s);
        }
        let (r, unit) = p_adic_split(lam, &p)?;
        Self::from_split(k, p, s, r, unit)
    }

    pub fn k(&self) -> &Natural {
        &self.k
    }
    pub fn p(&self) -> &Natural {
        &self.p
    }
    pub fn s(&self) -> &Natural {
        &self.s
    }
    pub fn lambda(&self) -> &LambdaClass {
        &self.lambda
    }

    pub fn is_zero_class(&self) -> bool {
        matches!(self.lambda, LambdaClass::Zero)
    }

    /// lambda mod p^s as a machine word; only valid when p^s fits (used for
    /// the 2^t base-case dispatch and the desk-scale reference engines).
    pub(crate) fn lambda_small(&self, modulus: u64) -> u64 {
        match &self.lambda {
            LambdaClass::Zero => 0,
            LambdaClass::Split { r, unit } => {
                let r = r.to_u64().expect("valuation exceeds machine range");
                let pr = self
                    .p
                    .to_u64()
                    .expect("p exceeds machine range")
                    .pow(r as u32);
                let rest = modulus / pr;
                pr * ((unit % rest).to_u64().unwrap())
            }
        }
    }
}

/// Omega(k, p, s, N) = sum_{i=0}^{N} p^(k i + (s-2i-1)(k-1)), the geometric
/// backbone of every closed form, with the exponent kept nonnegative by
/// reindexing: for k >= 3 it is p^((s-1)(k-1) - N(k-2)) * sum_{j<=N} p^(j(k-2)).
/// N < 0 yields the empty sum. Constant number of terms for every N.
pub fn omega_counted(k: &Natural, p: &Natural, s: &Natural, n_upper: &Int, ops: &OpCount) -> RhoValue {
    omega_shifted(k, p, s, n_upper, &Natural::zero(), ops)
}

pub fn omega(k: &Natural, p: &Natural, s: &Natural, n_upper: &Int) -> RhoValue {
    omega_counted(k, p, s, n_upper, &OpCount::new())
}

/// Omega divided by p^down, the division absorbed into exponents. Callers
/// guarantee the resulting exponents are nonnegative.
fn omega_shifted(
    k: &Natural,
    p: &Natural,
    s: &Natural,
    n_upper: &Int,
    down: &Natural,
    ops: &OpCount,
) -> RhoValue {
    let mut v = RhoValue::zero(p.clone());
    if n_upper.is_negative() {
        return v;
    }
    let n = n_upper.magnitude().clone();
    let count = ops.add(&n, &Natural::one());
    let one = Natural::one();
    if k.is_one() {
        debug_assert!(down.is_zero());
        // sum_{j<=N} p^j
        v.push_geom(Int::one(), Natural::zero(), one, count);
        return v;
    }
    let k1 = ops.sub(k, &one);
    let s1 = ops.sub(s, &one);
    if *k == Natural::from(2u32) {
        // (N+1) * p^(s-1)
        let exp = ops.sub(&s1, down);
        v.push_pow(Int::from(count), exp);
        return v;
    }
    let k2 = ops.sub(k, &Natural::from(2u32));
    let lead = ops.mul(&s1, &k1);
    let drop = ops.mul(&n, &k2);
    let exp0 = ops.sub(&ops.sub(&lead, &drop), down);
    v.push_geom(Int::one(), exp0, k2, count);
    v
}

/// rho_{k,lambda}(p^s) for odd p and nonzero lambda = p^r * unit.
pub fn rho_odd_pp_counted(q: &PrimePowerQuery, ops: &OpCount) -> Result<RhoValue> {
    let (r, unit) = match &q.lambda {
        LambdaClass::Split { r, unit } => (r, unit),
        LambdaClass::Zero => {
            return Err(Error::InvalidInput(
                "lambda = 0: use the zero-lambda formula".into(),
            ))
        }
    };
    let (k, p, s) = (&q.k, &q.p, &q.s);
    let one = Natural::one();
    let zero_factor = rho1_base_counted(k, &Natural::zero(), p, ops)?; // rho_{k,0}(p) - 1
    let mut v;
    if r.bit(0) {
        // r odd: Omega(k,p,s,(r-1)/2) * (rho_{k,0}(p) - 1)
        let n_up = Int::from(ops.half(&ops.sub(r, &one)));
        v = omega_counted(k, p, s, &n_up, ops).mul(&zero_factor);
    } else {
        // r even: Omega(k,p,s,(r-2)/2) * (rho_{k,0}(p) - 1)
        //         + p^(k r/2 + (s-r-1)(k-1)) * rho_{k,unit}(p)
        let n_up = ops.sub_int(&Int::from(ops.half(r)), &Int::one());
        v = omega_counted(k, p, s, &n_up, ops).mul(&zero_factor);
        let k1 = ops.sub(k, &one);
        let tail = ops.mul(&ops.sub(&ops.sub(s, r), &one), &k1);
        let exp = ops.add(&ops.mul(k, &ops.half(r)), &tail);
        let mut last = rho_odd_prime_counted(k, unit, p, ops)?;
        last.shift_exp(&exp);
        v.add_assign(last);
    }
    v.normalize();
    Ok(v)
}

pub fn rho_odd_pp(q: &PrimePowerQuery) -> Result<RhoValue> {
    rho_odd_pp_counted(q, &OpCount::new())
}

/// rho_{k,0}(p^s) for odd p:
/// Omega(k,p,s,floor((s-1)/2)) * (rho_{k,0}(p) - 1) + p^(k floor(s/2)).
pub fn rho_odd_zero_pp_counted(
    k: &Natural,
    p: &Natural,
    s: &Natural,
    ops: &OpCount,
) -> Result<RhoValue> {
    let zero_factor = rho1_base_counted(k, &Natural::zero(), p, ops)?;
    let n_up = Int::from(ops.half(&ops.sub(s, &Natural::one())));
    let mut v = omega_counted(k, p, s, &n_up, ops).mul(&zero_factor);
    v.push_pow(Int::one(), ops.mul(k, &ops.half(s)));
    v.normalize();
    Ok(v)
}

pub fn rho_odd_zero_pp(k: &Natural, p: &Natural, s: &Natural) -> Result<RhoValue> {
    rho_odd_zero_pp_counted(k, p, s, &OpCount::new())
}

/// rho_{k,lambda}(2^s) for s >= 3 and nonzero lambda = 2^r * unit.
///
/// Five cases split on the parity of r and on s - r. The interior sum is
/// Omega(...)/2^(2(k-1)) times (rho_{k,0}(8) - 2^(2k-1)), empty for
/// r in {0,1,2,3}; the extra (rho_{k,4}(8) - 2^(2k-1)) correction exists
/// only for even r >= 2.
pub fn rho_two_pp_counted(q: &PrimePowerQuery, ops: &OpCount) -> Result<RhoValue> {
    let (r, unit) = match &q.lambda {
        LambdaClass::Split { r, unit } => (r, unit),
        LambdaClass::Zero => {
            return Err(Error::InvalidInput(
                "lambda = 0: use the zero-lambda formula".into(),
            ))
        }
    };
    let (k, s) = (&q.k, &q.s);
    let two = Natural::from(2u32);
    let three = Natural::from(3u32);
    if *s < three {
        return Err(Error::InvalidInput(
            "s < 3: use the mod 2/4/8 base cases".into(),
        ));
    }
    let one = Natural::one();
    let k1 = ops.sub(k, &one);
    let down = ops.mul(&two, &k1); // divide Omega by 2^(2(k-1))
    let rho1_zero8 = rho1_base_counted(k, &Natural::zero(), &Natural::from(8u32), ops)?;
    let s_minus_r = ops.sub(s, r);

    let mut v;
    if r.bit(0) {
        // interior: N = (r-3)/2, empty at r = 1
        let n_up = ops.sub_int(&Int::from(ops.half(r)), &Int::one());
        v = omega_shifted(k, &two, s, &n_up, &down, ops).mul(&rho1_zero8);
        let head = ops.mul(k, &ops.half(r)); // k(r-1)/2
        if s_minus_r > one {
            // + 2^(k(r-1)/2 + (s-r-2)(k-1)) * rho_{k, 2*unit mod 8}(8)
            let exp = ops.add(&head, &ops.mul(&ops.sub(&s_minus_r, &two), &k1));
            let mu = (unit * 2u32) % 8u32;
            let mut tail = rho_two_small_counted(k, &mu, 3, ops)?;
            tail.shift_exp(&exp);
            v.add_assign(tail);
        } else {
            // s - r = 1: + 2^(k(r-1)/2) * rho_{k,2}(4)
            let mut tail = rho_two_small_counted(k, &two, 2, ops)?;
            tail.shift_exp(&head);
            v.add_assign(tail);
        }
    } else {
        // interior: N = (r-4)/2, empty at r in {0, 2}
        let n_up = ops.sub_int(&Int::from(ops.half(r)), &Int::from(2));
        v = omega_shifted(k, &two, s, &n_up, &down, ops).mul(&rho1_zero8);
        if !r.is_zero() {
            // + 2^(k(r-2)/2 + (s-r-1)(k-1)) * (rho_{k,4}(8) - 2^(2k-1))
            let half_r = ops.half(r);
            let head = ops.mul(k, &ops.sub(&half_r, &one));
            let exp = ops.add(&head, &ops.mul(&ops.sub(&s_minus_r, &one), &k1));
            let mut mid = rho1_base_counted(k, &Natural::from(4u32), &Natural::from(8u32), ops)?;
            mid.shift_exp(&exp);
            v.add_assign(mid);
        }
        let head = ops.mul(k, &ops.half(r)); // k r/2
        let (exp, mut tail) = if s_minus_r > two {
            // + 2^(k r/2 + (s-r-3)(k-1)) * rho_{k, unit mod 8}(8)
            let exp = ops.add(&head, &ops.mul(&ops.sub(&s_minus_r, &three), &k1));
            (exp, rho_two_small_counted(k, unit, 3, ops)?)
        } else if s_minus_r == two {
            (head, rho_two_small_counted(k, &(unit % 4u32), 2, ops)?)
        } else {
            (head, rho_two_small_counted(k, &one, 1, ops)?)
        };
        tail.shift_exp(&exp);
        v.add_assign(tail);
    }
    v.normalize();
    Ok(v)
}

pub fn rho_two_pp(q: &PrimePowerQuery) -> Result<RhoValue> {
    rho_two_pp_counted(q, &OpCount::new())
}

/// rho_{k,0}(2^s) for s >= 3. The s-odd tail is
/// 2^(k(s-1)/2) * 2^(k-1), per the underlying recursion (the corollary as
/// printed ends in 2^((s-1)/2), which fails its own oracle at k=1, s=5).
pub fn rho_two_zero_pp_counted(k: &Natural, s: &Natural, ops: &OpCount) -> Result<RhoValue> {
    let two = Natural::from(2u32);
    let three = Natural::from(3u32);
    if *s < three {
        return Err(Error::InvalidInput(
            "s < 3: use the mod 2/4/8 base cases".into(),
        ));
    }
    if k.is_zero() {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let one = Natural::one();
    let k1 = ops.sub(k, &one);
    let down = ops.mul(&two, &k1);
    let rho1_zero8 = rho1_base_counted(k, &Natural::zero(), &Natural::from(8u32), ops)?;
    let half_s1 = ops.half(&ops.sub(s, &one)); // floor((s-1)/2)
    let mut v;
    if s.bit(0) {
        // N = (s-3)/2; tail 2^(k(s-1)/2 + k - 1)
        let n_up = ops.sub_int(&Int::from(half_s1.clone()), &Int::one());
        v = omega_shifted(k, &two, s, &n_up, &down, ops).mul(&rho1_zero8);
        let exp = ops.add(&ops.mul(k, &half_s1), &k1);
        v.push_pow(Int::one(), exp);
    } else {
        // N = (s-4)/2; + 2^(k(s-2)/2) * (rho_{k,0}(4) - 2^k) + 2^(k s/2)
        let half_s = ops.half(s);
        let n_up = ops.sub_int(&Int::from(half_s1), &Int::one());
        v = omega_shifted(k, &two, s, &n_up, &down, ops).mul(&rho1_zero8);
        let mut mid = rho1_base_counted(k, &Natural::zero(), &Natural::from(4u32), ops)?;
        mid.shift_exp(&ops.mul(k, &ops.sub(&half_s, &one)));
        v.add_assign(mid);
        v.push_pow(Int::one(), ops.mul(k, &half_s));
    }
    v.normalize();
    Ok(v)
}

pub fn rho_two_zero_pp(k: &Natural, s: &Natural) -> Result<RhoValue> {
    rho_two_zero_pp_counted(k, s, &OpCount::new())
}

/// Dispatch: routes a prime-power query to the matching closed form.
pub fn rho_prime_power_counted(q: &PrimePowerQuery, ops: &OpCount) -> Result<RhoValue> {
    let (k, p, s) = (&q.k, &q.p, &q.s);
    if *p == Natural::from(2u32) {
        if let Some(t) = s.to_u8().filter(|&t| t <= 3) {
            let lam = Natural::from(q.lambda_small(1 << t));
            return rho_two_small_counted(k, &lam, t, ops);
        }
        return match &q.lambda {
            LambdaClass::Zero => rho_two_zero_pp_counted(k, s, ops),
            LambdaClass::Split { .. } => rho_two_pp_counted(q, ops),
        };
    }
    if s.is_one() {
        let lam = match &q.lambda {
            LambdaClass::Zero => Natural::zero(),
            LambdaClass::Split { unit, .. } => unit.clone(), // r < s = 1 forces r = 0
        };
        return rho_odd_prime_counted(k, &lam, p, ops);
    }
    match &q.lambda {
        LambdaClass::Zero => rho_odd_zero_pp_counted(k, p, s, ops),
        LambdaClass::Split { .. } => rho_odd_pp_counted(q, ops),
    }
}

pub fn rho_prime_power(q: &PrimePowerQuery) -> Result<RhoValue> {
    rho_prime_power_counted(q, &OpCount::new())
}

/// Convenience entry taking lambda as a plain Natural (reduced mod p^s).
pub fn rho_prime_power_lambda(k: &Natural, p: &Natural, s: &Natural, lam: &Natural) -> Result<RhoValue> {
    let q = PrimePowerQuery::new(k.clone(), p.clone(), s.clone(), lam)?;
    rho_prime_power(&q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> Natural {
        Natural::from(v)
    }

    fn eval(v: &RhoValue) -> u64 {
        v.eval_exact().unwrap().to_u64().unwrap()
    }

    fn rho(k: u64, p: u64, s: u64, lam: u64) -> u64 {
        eval(&rho_prime_power_lambda(&n(k), &n(p), &n(s), &n(lam)).unwrap())
    }

    #[test]
    fn omega_examples() {
        // k = 1: (p^(N+1)-1)/(p-1)
        assert_eq!(eval(&omega(&n(1), &n(3), &n(7), &Int::from(1))), 4);
        // k = 2: p^(s-1) (N+1)
        assert_eq!(eval(&omega(&n(2), &n(5), &n(3), &Int::from(2))), 75);
        // k = 3: direct summation 5^6 + 5^5
        assert_eq!(eval(&omega(&n(3), &n(5), &n(4), &Int::from(1))), 18750);
        // empty sum
        assert!(omega(&n(4), &n(7), &n(9), &Int::from(-1)).is_zero());
    }

    #[test]
    fn omega_matches_direct_sum() {
        for k in 1..=5u64 {
            for (p, s) in [(2u64, 5u64), (3, 4), (5, 3), (7, 6)] {
                for nn in -1i64..=((s as i64 - 1) / 2) {
                    let v = omega(&n(k), &n(p), &n(s), &Int::from(nn));
                    let mut direct = 0u128;
                    for i in 0..=nn.max(-1) {
                        if i < 0 {
                            continue;
                        }
                        let e = k as i64 * i + (s as i64 - 2 * i - 1) * (k as i64 - 1);
                        direct += (p as u128).pow(e as u32);
                    }
                    assert_eq!(
                        v.eval_exact().unwrap().to_u128().unwrap(),
                        direct,
                        "k={k} p={p} s={s} N={nn}"
                    );
                }
            }
        }
    }

    #[test]
    fn odd_prime_power_examples() {
        // x^2 = 9 mod 27 has 6 solutions
        assert_eq!(rho(1, 3, 3, 9), 6);
        // s = 1 collapses to the Lebesgue base case
        assert_eq!(rho(2, 5, 1, 1), 4);
        // x^2+y^2 = 3 mod 9 has no solutions: the interior sum is
        // Omega(2,3,2,0)*(rho_{2,0}(3)-1) = 3*(1-1) = 0
        assert_eq!(rho(2, 3, 2, 3), 0);
        assert_eq!(rho(1, 3, 2, 0), 3);
        assert_eq!(rho(1, 3, 1, 0), 1);
        assert_eq!(rho(2, 5, 3, 0), 425);
    }

    #[test]
    fn two_power_examples() {
        assert_eq!(rho(1, 2, 4, 4), 4); // x^2 = 4 mod 16: {2,6,10,14}
        assert_eq!(rho(1, 2, 3, 1), 4); // x^2 = 1 mod 8: {1,3,5,7}
        assert_eq!(rho(2, 2, 5, 8), 64);
        assert_eq!(rho(1, 2, 4, 0), 4); // {0,4,8,12}
        assert_eq!(rho(1, 2, 5, 0), 4); // {0,8,16,24}
        assert_eq!(rho(2, 2, 3, 0), 8);
    }

    #[test]
    fn dispatch_rejects_bad_inputs() {
        assert!(rho_prime_power_lambda(&n(2), &n(6), &n(2), &n(1)).is_err()); // composite p
        assert!(rho_prime_power_lambda(&n(0), &n(5), &n(2), &n(1)).is_err()); // k = 0
        assert!(rho_prime_power_lambda(&n(2), &n(5), &n(0), &n(1)).is_err()); // s = 0
        assert!(rho_two_pp(&PrimePowerQuery::from_split(n(2), n(2), n(2), n(0), n(1)).unwrap()).is_err());
    }

    #[test]
    fn query_reduces_lambda() {
        // lambda with valuation >= s collapses to the zero class
        let q = PrimePowerQuery::new(n(2), n(3), n(2), &n(27)).unwrap();
        assert!(q.is_zero_class());
        // unit kept mod p
        let q = PrimePowerQuery::new(n(2), n(3), n(5), &n(3 * 14)).unwrap();
        match q.lambda() {
            LambdaClass::Split { r, unit } => {
                assert_eq!(*r, n(1));
                assert_eq!(*unit, n(2)); // 14 mod 3
            }
            _ => panic!(),
        }
        // p = 2 keeps the unit mod 8
        let q = PrimePowerQuery::new(n(2), n(2), n(9), &n(4 * 29)).unwrap();
        match q.lambda() {
            LambdaClass::Split { r, unit } => {
                assert_eq!(*r, n(2));
                assert_eq!(*unit, n(5)); // 29 mod 8
            }
            _ => panic!(),
        }
    }

    /// Convolution-count oracle, independent of every closed form.
    fn hist(k: u32, m: u64) -> Vec<u64> {
        let mu = m as usize;
        let mut row = vec![0u64; mu];
        for x in 0..m {
            row[(x * x % m) as usize] += 1;
        }
        let mut cur = row.clone();
        for _ in 1..k {
            let mut nxt = vec![0u64; mu];
            for (i, &a) in cur.iter().enumerate() {
                for (j, &b) in row.iter().enumerate() {
                    nxt[(i + j) % mu] += a * b;
                }
            }
            cur = nxt;
        }
        cur
    }

    #[test]
    fn closed_form_matches_oracle_on_prime_powers() {
        let cases: &[(u64, u64)] = &[
            (2, 1),
            (2, 2),
            (2, 3),
            (2, 4),
            (2, 5),
            (2, 6),
            (2, 7),
            (3, 1),
            (3, 2),
            (3, 3),
            (3, 4),
            (5, 1),
            (5, 2),
            (5, 3),
            (7, 1),
            (7, 2),
            (11, 1),
            (13, 1),
        ];
        for &(p, s) in cases {
            let m = p.pow(s as u32);
            for k in 1..=4u32 {
                let h = hist(k, m);
                for lam in 0..m {
                    assert_eq!(
                        rho(k as u64, p, s, lam),
                        h[lam as usize],
                        "k={k} p={p} s={s} lam={lam}"
                    );
                }
            }
        }
    }

    #[test]
    fn op_count_is_independent_of_s() {
        // identical big-integer operation counts at s = 10^3 and s = 10^6
        let count_for = |s: u64, lam_zero: bool| {
            let q = if lam_zero {
                PrimePowerQuery::zero(n(10), n(5), n(s)).unwrap()
            } else {
                PrimePowerQuery::from_split(n(10), n(5), n(s), n(s / 2), n(3)).unwrap()
            };
            let ops = OpCount::new();
            rho_prime_power_counted(&q, &ops).unwrap();
            ops.get()
        };
        assert_eq!(count_for(1_000, true), count_for(1_000_000, true));
        assert_eq!(count_for(1_000, false), count_for(1_000_000, false));
        assert!(count_for(1_000, true) > 0);
    }

    #[test]
    fn astronomical_instance_is_cheap_and_stable() {
        // rho_{10, 5^100000}(5^1000000): value has ~6.29e6 digits
        let q = PrimePowerQuery::from_split(n(10), n(5), n(1_000_000), n(100_000), n(1)).unwrap();
        let v = rho_prime_power(&q).unwrap();
        let d = v.digits_estimate().to_u64().unwrap();
        assert!((6_280_000..=6_300_000).contains(&d), "digits {d}");
        let m = n(1_000_000_007);
        let r1 = v.eval_mod(&m).unwrap();
        assert!(r1 < m);
    }
}
