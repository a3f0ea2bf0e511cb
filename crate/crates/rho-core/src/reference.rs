//! Desk-scale oracle engines: literal enumeration, cyclic-convolution
//! counting, circulant matrix powering, and the two exponential-sum
//! reference formulas evaluated in complex doubles with an asserted
//! rounding margin. These exist to verify the fast engines, so they stay
//! deliberately independent of every closed form.

use num_complex::Complex64;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numbers::{Natural, OpCount};

/// Default enumeration budget for the brute-force oracle.
pub const BRUTE_BUDGET: u64 = 1_000_000_000;
/// Default work budget (k * n^2) for the convolution oracle.
pub const CONV_BUDGET: u64 = 1_000_000_000;
/// Largest modulus the circulant-power oracle accepts.
pub const MATRIX_MAX_N: u64 = 64;
/// Budgets for the floating-point formulas (rounding-error envelope).
pub const GAUSS_MAX_N: u64 = 200;
pub const GAUSS_MAX_K: u32 = 4;
pub const TOTH_MAX_N: u64 = 512;

/// The family {rho_{k,lambda}(n)}_lambda for one (k, n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Histogram {
    n: u64,
    counts: Vec<Natural>,
}

impl Histogram {
    fn from_u64(n: u64, counts: Vec<u64>) -> Self {
        Histogram {
            n,
            counts: counts.into_iter().map(Natural::from).collect(),
        }
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn counts(&self) -> &[Natural] {
        &self.counts
    }

    pub fn get(&self, lam: u64) -> &Natural {
        &self.counts[lam as usize]
    }

    pub fn total(&self) -> Natural {
        self.counts.iter().sum()
    }
}

/// The circulant kernel: row[j] = rho_{1,j}(n), the number of x with
/// x^2 = j mod n. Acting by cyclic convolution with this row advances the
/// histogram from k-1 squares to k squares.
#[derive(Clone, Debug)]
pub struct CirculantM {
    n: u64,
    row: Vec<Natural>,
}

impl CirculantM {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidModulus);
        }
        Ok(CirculantM {
            n,
            row: square_count_row(n).into_iter().map(Natural::from).collect(),
        })
    }

    pub fn modulus(&self) -> u64 {
        self.n
    }

    pub fn row(&self) -> &[Natural] {
        &self.row
    }
}

fn square_count_row(n: u64) -> Vec<u64> {
    let mut row = vec![0u64; n as usize];
    for x in 0..n {
        row[((x * x) % n) as usize] += 1;
    }
    row
}

fn alloc_guard(n: u64) -> Result<()> {
    if n > (1 << 24) {
        return Err(Error::Budget(format!(
            "modulus {n} too large for an in-memory histogram"
        )));
    }
    Ok(())
}

pub fn brute_histogram(k: u32, n: u64) -> Result<Histogram> {
    brute_histogram_counted(k, n, BRUTE_BUDGET, &OpCount::new())
}

/// Literal exhaustive enumeration of all n^k tuples. The outer coordinate is
/// partitioned across worker threads with private count vectors merged at
/// the end, so the result is schedule-independent.
pub fn brute_histogram_counted(
    k: u32,
    n: u64,
    budget: u64,
    ops: &OpCount,
) -> Result<Histogram> {
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    alloc_guard(n)?;
    let work = checked_pow_u64(n, k);
    match work {
        Some(w) if w <= budget => {}
        _ => {
            return Err(Error::Budget(format!(
                "n^k = {n}^{k} exceeds the enumeration budget {budget}; use conv_histogram"
            )))
        }
    }
    ops.bump(work.unwrap());
    let sq: Vec<u64> = (0..n).map(|x| x * x % n).collect();

    let fold_range = |x1_range: std::ops::Range<u64>| -> Vec<u64> {
        let mut counts = vec![0u64; n as usize];
        let inner = k - 1;
        let mut idx = vec![0u64; inner as usize];
        for x1 in x1_range {
            let base = sq[x1 as usize];
            if inner == 0 {
                counts[base as usize] += 1;
                continue;
            }
            idx.iter_mut().for_each(|v| *v = 0);
            loop {
                let s: u64 = base + idx.iter().map(|&i| sq[i as usize]).sum::<u64>();
                counts[(s % n) as usize] += 1;
                let mut j = inner as usize;
                let mut done = false;
                loop {
                    if j == 0 {
                        done = true;
                        break;
                    }
                    j -= 1;
                    idx[j] += 1;
                    if idx[j] < n {
                        break;
                    }
                    idx[j] = 0;
                }
                if done {
                    break;
                }
            }
        }
        counts
    };

    let counts: Vec<u64> = if k >= 2 && n >= 8 {
        (0..n)
            .into_par_iter()
            .map(|x1| fold_range(x1..x1 + 1))
            .reduce(
                || vec![0u64; n as usize],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    } else {
        fold_range(0..n)
    };
    Ok(Histogram::from_u64(n, counts))
}

fn checked_pow_u64(n: u64, k: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..k {
        acc = acc.checked_mul(n)?;
    }
    Some(acc)
}

fn cyclic_convolve(a: &[Natural], b: &[Natural], m: Option<&Natural>, ops: &OpCount) -> Vec<Natural> {
    let n = a.len();
    let mut out = vec![Natural::zero(); n];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            ops.bump(1);
            let mut t = ai * bj;
            if let Some(m) = m {
                t %= m;
            }
            let ix = (i + j) % n;
            out[ix] += t;
        }
    }
    if let Some(m) = m {
        for v in &mut out {
            *v %= m;
        }
    }
    out
}

pub fn conv_histogram(k: u32, n: u64) -> Result<Histogram> {
    conv_histogram_counted(k, n, CONV_BUDGET, &OpCount::new())
}

/// k - 1 cyclic convolutions of the square-count row, exact integers.
pub fn conv_histogram_counted(k: u32, n: u64, budget: u64, ops: &OpCount) -> Result<Histogram> {
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    alloc_guard(n)?;
    match (k as u64).checked_mul(n.checked_mul(n).unwrap_or(u64::MAX)) {
        Some(w) if w <= budget => {}
        _ => {
            return Err(Error::Budget(format!(
                "k * n^2 = {k} * {n}^2 exceeds the convolution budget {budget}"
            )))
        }
    }
    let row: Vec<Natural> = square_count_row(n).into_iter().map(Natural::from).collect();
    let mut cur = row.clone();
    for _ in 1..k {
        cur = cyclic_convolve(&cur, &row, None, ops);
    }
    Ok(Histogram { n, counts: cur })
}

pub fn matrix_power_rho(k: &Natural, n: u64, m: Option<&Natural>) -> Result<Histogram> {
    matrix_power_rho_counted(k, n, m, &OpCount::new())
}

/// M(n)^(k-1) R_1(n) by square-and-multiply on the circulant row: O(log k)
/// cyclic convolutions, entries exact or reduced mod m. Validates the
/// two-adic base tables at k far beyond enumeration range.
pub fn matrix_power_rho_counted(
    k: &Natural,
    n: u64,
    m: Option<&Natural>,
    ops: &OpCount,
) -> Result<Histogram> {
    if n == 0 || n > MATRIX_MAX_N {
        return Err(Error::Budget(format!(
            "circulant powering accepts 1 <= n <= {MATRIX_MAX_N}, got {n}"
        )));
    }
    if k.is_zero() {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    if let Some(m) = m {
        if m.is_zero() {
            return Err(Error::InvalidModulus);
        }
    }
    let row: Vec<Natural> = square_count_row(n)
        .into_iter()
        .map(|c| {
            let c = Natural::from(c);
            match m {
                Some(m) => c % m,
                None => c,
            }
        })
        .collect();
    // delta vector: identity for cyclic convolution
    let mut acc: Vec<Natural> = vec![Natural::zero(); n as usize];
    acc[0] = match m {
        Some(m) if m.is_one() => Natural::zero(),
        _ => Natural::one(),
    };
    let mut base = row;
    let mut e = k.clone();
    while !e.is_zero() {
        if e.bit(0) {
            acc = cyclic_convolve(&acc, &base, m, ops);
        }
        e >>= 1;
        if !e.is_zero() {
            base = cyclic_convolve(&base, &base, m, ops);
        }
    }
    Ok(Histogram { n, counts: acc })
}

/// Quadratic Gauss sum S(l, r) = sum_{j=1}^{r} exp(2 pi i l j^2 / r).
pub fn quad_gauss_sum(l: u64, r: u64) -> Result<Complex64> {
    if r == 0 || r > 1_000_000 {
        return Err(Error::Budget(format!("quad_gauss_sum needs 1 <= r <= 10^6, got {r}")));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    let tau = std::f64::consts::TAU;
    for j in 1..=r {
        let jj = ((j as u128 * j as u128) % r as u128) as u64;
        let phase = ((l as u128 * jj as u128) % r as u128) as f64 / r as f64;
        acc += Complex64::new(0.0, tau * phase).exp();
    }
    Ok(acc)
}

fn round_checked(raw: Complex64, context: &str) -> Result<Natural> {
    let rounded = raw.re.round();
    let tol = 1e-4 * rounded.abs().max(1.0);
    if (raw.re - rounded).abs() >= tol || raw.im.abs() >= tol || rounded < 0.0 {
        return Err(Error::Numerical(format!(
            "{context}: raw value {raw} does not round cleanly"
        )));
    }
    Ok(Natural::from(rounded as u64))
}

fn gauss_budget(k: u32, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    if n > GAUSS_MAX_N || k == 0 || k > GAUSS_MAX_K {
        return Err(Error::Budget(format!(
            "exponential-sum formula limited to 1 <= k <= {GAUSS_MAX_K}, n <= {GAUSS_MAX_N} (got k={k}, n={n})"
        )));
    }
    Ok(())
}

/// The n^2-operation identity
/// rho_{k,lambda}(n) = (1/n) sum_a e(-a lambda / n) (sum_x e(a x^2 / n))^k,
/// evaluated in complex doubles and rounded with an asserted margin.
pub fn gauss_formula_rho(k: u32, lam: u64, n: u64) -> Result<Natural> {
    gauss_budget(k, n)?;
    let h = gauss_histogram_counted(k, n, &OpCount::new())?;
    Ok(h.get(lam % n).clone())
}

/// All residues at once (the inner sums do not depend on lambda).
pub fn gauss_histogram(k: u32, n: u64) -> Result<Histogram> {
    gauss_histogram_counted(k, n, &OpCount::new())
}

pub fn gauss_histogram_counted(k: u32, n: u64, ops: &OpCount) -> Result<Histogram> {
    gauss_budget(k, n)?;
    let tau = std::f64::consts::TAU;
    // powered Gauss sums S(a, n)^k
    let mut powered = Vec::with_capacity(n as usize);
    for a in 1..=n {
        let s = quad_gauss_sum(a, n)?;
        powered.push(s.powi(k as i32));
        ops.bump(n + 1);
    }
    let mut counts = Vec::with_capacity(n as usize);
    for lam in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in 1..=n {
            let phase = -(tau * ((a as u128 * lam as u128 % n as u128) as f64) / n as f64);
            acc += Complex64::new(0.0, phase).exp() * powered[(a - 1) as usize];
            ops.bump(1);
        }
        counts.push(round_checked(acc / n as f64, &format!("Eq.(1) k={k} lam={lam} n={n}"))?);
    }
    Ok(Histogram { n, counts })
}

fn toth_budget(k: u32, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidModulus);
    }
    if n > TOTH_MAX_N || k == 0 || k > GAUSS_MAX_K {
        return Err(Error::Budget(format!(
            "divisor-sum formula limited to 1 <= k <= {GAUSS_MAX_K}, n <= {TOTH_MAX_N} (got k={k}, n={n})"
        )));
    }
    Ok(())
}

/// The divisor-sum identity
/// rho_{k,lambda}(n) = n^(k-1) sum_{d|n} d^-k sum_{gcd(l,d)=1} e(-l lambda/d) S(l,d)^k.
/// The coprimality constraint binds l to the outer divisor d; the printed
/// placement inside the j-sum of S does not survive contact with the
/// brute-force oracle.
pub fn toth_formula_rho(k: u32, lam: u64, n: u64) -> Result<Natural> {
    toth_budget(k, n)?;
    let h = toth_histogram_counted(k, n, &OpCount::new())?;
    Ok(h.get(lam % n).clone())
}

pub fn toth_histogram(k: u32, n: u64) -> Result<Histogram> {
    toth_histogram_counted(k, n, &OpCount::new())
}

pub fn toth_histogram_counted(k: u32, n: u64, ops: &OpCount) -> Result<Histogram> {
    toth_budget(k, n)?;
    let tau = std::f64::consts::TAU;
    // (d, l, S(l,d)^k / d^k) for every divisor d and unit l mod d
    let mut kernel: Vec<(u64, u64, Complex64)> = Vec::new();
    for d in 1..=n {
        if n % d != 0 {
            continue;
        }
        let dk = (d as f64).powi(k as i32);
        for l in 1..=d {
            if gcd_u64(l, d) == 1 {
                let s = quad_gauss_sum(l, d)?;
                kernel.push((d, l, s.powi(k as i32) / dk));
                ops.bump(d + 1);
            }
        }
    }
    let scale = (n as f64).powi(k as i32 - 1);
    let mut counts = Vec::with_capacity(n as usize);
    for lam in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for &(d, l, sk) in &kernel {
            let phase = -(tau * ((l as u128 * lam as u128 % d as u128) as f64) / d as f64);
            acc += Complex64::new(0.0, phase).exp() * sk;
            ops.bump(1);
        }
        counts.push(round_checked(
            acc * scale,
            &format!("Eq.(2) k={k} lam={lam} n={n}"),
        )?);
    }
    Ok(Histogram { n, counts })
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}
