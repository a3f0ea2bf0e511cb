//! Symbolic representation of engine outputs.
//!
//! Counts like rho_{k,lambda}(p^s) can have ~10^12 decimal digits for large
//! (k, s), so engines return a short list of power and geometric-series terms
//! over the ambient prime instead of an integer. Exact rendering is opt-in
//! and size-guarded; residues and digit estimates cost time logarithmic in
//! the exponent magnitudes.

use std::fmt;

use num_bigint::Sign;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{
    exact_div, log10_upper, nat_pow, nat_to_f64_saturating, Int, Natural, OpCount,
};
use crate::error::{Error, Result};

/// Default cap on the estimated size of an exactly rendered value: 2^30 bits.
pub const DEFAULT_EXACT_LIMIT_BITS: u64 = 1 << 30;

/// `coeff * p^exp` for the ambient base p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerTerm {
    pub coeff: Int,
    pub exp: Natural,
}

/// `coeff * p^exp0 * sum_{j=0}^{count-1} p^(j*step)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeomTerm {
    pub coeff: Int,
    pub exp0: Natural,
    pub step: Natural,
    pub count: Natural,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Pow(PowerTerm),
    Geom(GeomTerm),
}

/// Exact symbolic value over a fixed prime base.
///
/// Invariants: terms with zero coefficient or zero count are dropped, and an
/// empty term list means 0. Every value an engine returns evaluates to a
/// nonnegative integer, and `eval_mod(v, m)` agrees with
/// `eval_exact(v) mod m` whenever the exact rendering is feasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoValue {
    base: Natural,
    terms: Vec<Term>,
}

/// Above this many terms, normalization keeps insertion order instead of
/// sorting and merging; the recursive engine can emit Theta(s) terms.
const NORMALIZE_MERGE_CAP: usize = 1 << 14;

impl RhoValue {
    pub fn zero(base: Natural) -> Self {
        RhoValue {
            base,
            terms: Vec::new(),
        }
    }

    /// A plain integer constant (as `value * p^0`).
    pub fn from_integer(base: Natural, value: Natural) -> Self {
        let mut v = RhoValue::zero(base);
        v.push_pow(Int::from(value), Natural::zero());
        v
    }

    pub fn power(base: Natural, coeff: Int, exp: Natural) -> Self {
        let mut v = RhoValue::zero(base);
        v.push_pow(coeff, exp);
        v
    }

    pub fn base(&self) -> &Natural {
        &self.base
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push_pow(&mut self, coeff: Int, exp: Natural) {
        if !coeff.is_zero() {
            self.terms.push(Term::Pow(PowerTerm { coeff, exp }));
        }
    }

    pub fn push_geom(&mut self, coeff: Int, exp0: Natural, step: Natural, count: Natural) {
        if coeff.is_zero() || count.is_zero() {
            return;
        }
        debug_assert!(!step.is_zero());
        if count.is_one() {
            self.terms.push(Term::Pow(PowerTerm { coeff, exp: exp0 }));
        } else {
            self.terms.push(Term::Geom(GeomTerm {
                coeff,
                exp0,
                step,
                count,
            }));
        }
    }

    /// Adds another value over the same base.
    pub fn add_assign(&mut self, other: RhoValue) {
        debug_assert_eq!(self.base, other.base);
        self.terms.extend(other.terms);
    }

    /// Multiplies by `p^e`.
    pub fn shift_exp(&mut self, e: &Natural) {
        if e.is_zero() {
            return;
        }
        for t in &mut self.terms {
            match t {
                Term::Pow(pt) => pt.exp += e,
                Term::Geom(gt) => gt.exp0 += e,
            }
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&mut self, c: &Int) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        if c.is_one() {
            return;
        }
        for t in &mut self.terms {
            match t {
                Term::Pow(pt) => pt.coeff *= c,
                Term::Geom(gt) => gt.coeff *= c,
            }
        }
    }

    /// Term-by-term product. At most one side may carry geometric terms;
    /// the engines only ever multiply a geometric series by a short sum of
    /// power terms.
    pub fn mul(&self, other: &RhoValue) -> RhoValue {
        debug_assert_eq!(self.base, other.base);
        let mut out = RhoValue::zero(self.base.clone());
        for a in &self.terms {
            for b in &other.terms {
                match (a, b) {
                    (Term::Pow(x), Term::Pow(y)) => {
                        out.push_pow(&x.coeff * &y.coeff, &x.exp + &y.exp);
                    }
                    (Term::Pow(x), Term::Geom(y)) | (Term::Geom(y), Term::Pow(x)) => {
                        out.push_geom(
                            &x.coeff * &y.coeff,
                            &x.exp + &y.exp0,
                            y.step.clone(),
                            y.count.clone(),
                        );
                    }
                    (Term::Geom(_), Term::Geom(_)) => {
                        unreachable!("product of two geometric terms is not representable")
                    }
                }
            }
        }
        out.normalize();
        out
    }

    /// Drops vanished terms, merges equal-exponent power terms and orders
    /// terms canonically (skipping the merge for very long term lists).
    pub fn normalize(&mut self) {
        if self.terms.len() > NORMALIZE_MERGE_CAP {
            self.terms.retain(|t| match t {
                Term::Pow(pt) => !pt.coeff.is_zero(),
                Term::Geom(gt) => !gt.coeff.is_zero() && !gt.count.is_zero(),
            });
            return;
        }
        let mut pows: std::collections::BTreeMap<Natural, Int> = Default::default();
        let mut geoms: Vec<GeomTerm> = Vec::new();
        for t in self.terms.drain(..) {
            match t {
                Term::Pow(pt) => {
                    if !pt.coeff.is_zero() {
                        *pows.entry(pt.exp).or_default() += pt.coeff;
                    }
                }
                Term::Geom(gt) => {
                    if !gt.coeff.is_zero() && !gt.count.is_zero() {
                        geoms.push(gt);
                    }
                }
            }
        }
        geoms.sort_by(|a, b| (&a.exp0, &a.step).cmp(&(&b.exp0, &b.step)));
        for gt in geoms {
            self.terms.push(Term::Geom(gt));
        }
        for (exp, coeff) in pows {
            if !coeff.is_zero() {
                self.terms.push(Term::Pow(PowerTerm { coeff, exp }));
            }
        }
    }

    /// Upper bound on bits of the exact value; infinite when the exponents
    /// themselves exceed f64 range.
    fn bits_upper(&self) -> f64 {
        let log2p = log10_upper(&self.base) / std::f64::consts::LOG10_2;
        let mut max_bits = 0.0f64;
        for t in &self.terms {
            let b = match t {
                Term::Pow(pt) => {
                    nat_to_f64_saturating(&pt.exp) * log2p + pt.coeff.abs().to_f64().map_or(f64::INFINITY, |c| c.max(1.0).log2())
                }
                Term::Geom(gt) => {
                    let top = nat_to_f64_saturating(&gt.exp0)
                        + nat_to_f64_saturating(&gt.step)
                            * (nat_to_f64_saturating(&gt.count) - 1.0).max(0.0);
                    top * log2p
                        + gt.coeff.abs().to_f64().map_or(f64::INFINITY, |c| c.max(1.0).log2())
                        + nat_to_f64_saturating(&gt.count).max(1.0).log2()
                }
            };
            max_bits = max_bits.max(b);
        }
        max_bits + (self.terms.len().max(1) as f64).log2() + 2.0
    }

    /// Upper bound on the decimal digit count of the exact value, monotone
    /// in the term exponents.
    pub fn digits_estimate(&self) -> Natural {
        if self.terms.is_empty() {
            return Natural::one();
        }
        let log10p = log10_upper(&self.base);
        let mut max_d = 0.0f64;
        let mut huge: Option<Natural> = None;
        for t in &self.terms {
            let (exp_top, extra) = match t {
                Term::Pow(pt) => (pt.exp.clone(), coeff_digits(&pt.coeff)),
                Term::Geom(gt) => (
                    &gt.exp0 + &gt.step * (&gt.count - 1u32),
                    coeff_digits(&gt.coeff) + log10_upper(&gt.count),
                ),
            };
            let e = nat_to_f64_saturating(&exp_top);
            if e.is_finite() {
                max_d = max_d.max(e * log10p + extra);
            } else {
                // Integer fallback for astronomically large exponents:
                // digits <= exp * bits(p) * log10(2) + slack, rounded up.
                let bound = (exp_top * self.base.bits() * 30103u64) / 100000u64
                    + Natural::from(3u32 + extra as u32);
                huge = Some(match huge {
                    Some(h) if h >= bound => h,
                    _ => bound,
                });
            }
        }
        if let Some(h) = huge {
            return h + Natural::from(self.terms.len() as u64);
        }
        let total = max_d + (self.terms.len() as f64).log10();
        Natural::from(total.floor() as u64 + 1)
    }

    pub fn eval_exact(&self) -> Result<Natural> {
        self.eval_exact_limited(DEFAULT_EXACT_LIMIT_BITS)
    }

    /// Exact integer value. Geometric terms expand through exact division
    /// (p^(step*count) - 1) / (p^step - 1); any nonzero remainder would be a
    /// formula transcription bug.
    pub fn eval_exact_limited(&self, limit_bits: u64) -> Result<Natural> {
        if self.bits_upper() > limit_bits as f64 {
            return Err(Error::TooLarge {
                digits10: self.digits_estimate().to_string(),
                limit_bits,
            });
        }
        let mut acc = Int::zero();
        for t in &self.terms {
            match t {
                Term::Pow(pt) => {
                    acc += &pt.coeff * Int::from(nat_pow(&self.base, &pt.exp)?);
                }
                Term::Geom(gt) => {
                    let pe = nat_pow(&self.base, &gt.step)?;
                    let top = nat_pow(&pe, &gt.count)?;
                    let series = exact_div(&(top - 1u32), &(pe - 1u32));
                    acc += &gt.coeff * Int::from(nat_pow(&self.base, &gt.exp0)? * series);
                }
            }
        }
        match acc.sign() {
            Sign::Minus => Err(Error::InvalidInput(format!(
                "value evaluates to the negative integer {acc}"
            ))),
            _ => Ok(acc.to_biguint().unwrap()),
        }
    }

    pub fn eval_mod(&self, m: &Natural) -> Result<Natural> {
        let ops = OpCount::new();
        self.eval_mod_counted(m, &ops)
    }

    /// `eval_exact mod m` using only modular powers and inverse-free
    /// geometric sums; cost is logarithmic in the exponent magnitudes.
    pub fn eval_mod_counted(&self, m: &Natural, ops: &OpCount) -> Result<Natural> {
        if m.is_zero() {
            return Err(Error::InvalidModulus);
        }
        if m.is_one() {
            return Ok(Natural::zero());
        }
        let mi = Int::from(m.clone());
        let mut acc = Int::zero();
        for t in &self.terms {
            let v = match t {
                Term::Pow(pt) => {
                    let pw = ops.modpow(&self.base, &pt.exp, m)?;
                    ops.mul_int(&(&pt.coeff % &mi), &Int::from(pw))
                }
                Term::Geom(gt) => {
                    let head = ops.modpow(&self.base, &gt.exp0, m)?;
                    let x = ops.modpow(&self.base, &gt.step, m)?;
                    let series = ops.geom_sum_mod(&x, &gt.count, m)?;
                    let prod = ops.mul(&head, &series) % m;
                    ops.mul_int(&(&gt.coeff % &mi), &Int::from(prod))
                }
            };
            acc = ops.add_int(&acc, &v) % &mi;
        }
        let r = ((acc % &mi) + &mi) % &mi;
        Ok(r.to_biguint().unwrap())
    }
}

fn coeff_digits(c: &Int) -> f64 {
    let a = c.abs();
    if a.is_zero() || a.is_one() {
        0.0
    } else {
        log10_upper(a.magnitude())
    }
}

impl fmt::Display for RhoValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let p = &self.base;
        for (i, t) in self.terms.iter().enumerate() {
            let (coeff, body) = match t {
                Term::Pow(pt) => (&pt.coeff, format!("{p}^{}", pt.exp)),
                Term::Geom(gt) => (
                    &gt.coeff,
                    format!(
                        "{p}^{} * sum_{{j<{}}} {p}^({}j)",
                        gt.exp0, gt.count, gt.step
                    ),
                ),
            };
            let mag = coeff.magnitude();
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else if coeff.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if mag.is_one() {
                write!(f, "{body}")?;
            } else {
                write!(f, "{mag}*{body}")?;
            }
        }
        Ok(())
    }
}
