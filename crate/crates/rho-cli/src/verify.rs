//! Differential verification suites behind `rho verify`.
//!
//! The exhaustive suite compares every engine that accepts the instance, for
//! all n up to a bound and every residue; the random-large suite drives the
//! closed and recursive engines over structured instances far beyond
//! enumeration range and compares residues at independent 62-bit primes.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use rho_core::closed_form::{rho_prime_power, PrimePowerQuery};
use rho_core::composer::{rho_general, Engine, StructuredInt};
use rho_core::numbers::{is_prime, Natural};
use rho_core::recursive_form::rho_rec_mod;
use rho_core::reference;
use rho_core::Result;

fn n64(v: u64) -> Natural {
    Natural::from(v)
}

#[derive(Debug, Default)]
pub struct VerifyOutcome {
    pub cases: u64,
    /// Sorted; the first entry is the minimal failing tuple.
    pub failures: Vec<String>,
}

impl VerifyOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Engine-vs-oracle agreement for every n <= max_n, k <= max_k and every
/// lambda. Work fans out per modulus; output order is canonical (sorted by
/// (n, k, lambda)) regardless of scheduling.
pub fn exhaustive_suite(max_n: u64, max_k: u32) -> Result<VerifyOutcome> {
    let mut results: Vec<(u64, u64, Vec<String>)> = (1..=max_n)
        .into_par_iter()
        .map(|n| {
            let (cases, mut failures) = verify_one_modulus(n, max_k);
            failures.sort();
            (n, cases, failures)
        })
        .collect();
    results.sort_by_key(|(n, _, _)| *n);
    let mut out = VerifyOutcome::default();
    for (_, cases, failures) in results {
        out.cases += cases;
        out.failures.extend(failures);
    }
    Ok(out)
}

fn verify_one_modulus(n: u64, max_k: u32) -> (u64, Vec<String>) {
    let mut cases = 0u64;
    let mut failures = Vec::new();
    let fac = match rho_core::factorize(&StructuredInt::Plain(n64(n))) {
        Ok(f) => f,
        Err(e) => return (0, vec![format!("n={n}: factorization failed: {e}")]),
    };
    let tuple_name = |k: u32, lam: u64| -> String {
        if fac.factors().len() == 1 {
            let (p, s) = &fac.factors()[0];
            format!("(k={k}, p={p}, s={s}, lambda={lam})")
        } else {
            format!("(k={k}, n={n}, lambda={lam})")
        }
    };
    for k in 1..=max_k {
        let conv = match reference::conv_histogram(k, n) {
            Ok(h) => h,
            Err(e) => {
                failures.push(format!("{} conv: {e}", tuple_name(k, 0)));
                continue;
            }
        };
        // oracle self-check: literal enumeration where affordable
        if n.checked_pow(k).map_or(false, |w| w <= 20_000_000) {
            match reference::brute_histogram(k, n) {
                Ok(b) => {
                    cases += n;
                    if b != conv {
                        let lam = (0..n).find(|&l| b.get(l) != conv.get(l)).unwrap();
                        failures.push(format!("{} brute != conv", tuple_name(k, lam)));
                    }
                }
                Err(e) => failures.push(format!("{} brute: {e}", tuple_name(k, 0))),
            }
        }
        if n <= reference::MATRIX_MAX_N {
            cases += n;
            match reference::matrix_power_rho(&n64(k as u64), n, None) {
                Ok(mx) if mx != conv => {
                    let lam = (0..n).find(|&l| mx.get(l) != conv.get(l)).unwrap();
                    failures.push(format!("{} matrix != conv", tuple_name(k, lam)));
                }
                Err(e) => failures.push(format!("{} matrix: {e}", tuple_name(k, 0))),
                _ => {}
            }
        }
        let gauss = (n <= 100 && k <= reference::GAUSS_MAX_K)
            .then(|| reference::gauss_histogram(k, n))
            .transpose()
            .unwrap_or(None);
        let toth = (n <= reference::TOTH_MAX_N && k <= reference::GAUSS_MAX_K)
            .then(|| reference::toth_histogram(k, n))
            .transpose()
            .unwrap_or(None);
        for lam in 0..n {
            cases += 1;
            let expect = conv.get(lam);
            for engine in [Engine::Closed, Engine::Recursive] {
                let got = rho_general(
                    &n64(k as u64),
                    &StructuredInt::Plain(n64(lam)),
                    &StructuredInt::Plain(n64(n)),
                    engine,
                )
                .and_then(|r| r.eval_exact());
                match got {
                    Ok(v) if v == *expect => {}
                    Ok(v) => failures.push(format!(
                        "{} {} = {v}, oracle {expect}",
                        tuple_name(k, lam),
                        engine.name()
                    )),
                    Err(e) => {
                        failures.push(format!("{} {}: {e}", tuple_name(k, lam), engine.name()))
                    }
                }
            }
            if let Some(g) = &gauss {
                cases += 1;
                if g.get(lam) != expect {
                    failures.push(format!("{} gauss != oracle", tuple_name(k, lam)));
                }
            }
            if let Some(t) = &toth {
                cases += 1;
                if t.get(lam) != expect {
                    failures.push(format!("{} toth != oracle", tuple_name(k, lam)));
                }
            }
        }
    }
    (cases, failures)
}

/// Generates a prime in [2^61, 2^62) from the stream.
pub fn random_62bit_prime(rng: &mut ChaCha8Rng) -> Natural {
    loop {
        let candidate: u64 = rng.gen_range((1u64 << 61)..(1u64 << 62)) | 1;
        let c = n64(candidate);
        if is_prime(&c) {
            return c;
        }
    }
}

fn small_primes_to(limit: u64) -> Vec<u64> {
    let mut sieve = vec![true; (limit + 1) as usize];
    let mut out = Vec::new();
    for p in 2..=limit {
        if sieve[p as usize] {
            out.push(p);
            let mut q = p * p;
            while q <= limit {
                sieve[q as usize] = false;
                q += p;
            }
        }
    }
    out
}

/// Seeded random large instances: p <= 10^4 prime, s <= 5000, k <= 10^3,
/// lambda structured with random valuation r < s. The closed and recursive
/// engines must give identical residues at five independent 62-bit primes.
pub fn random_large_suite(count: u32, seed: u64) -> Result<VerifyOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let moduli: Vec<Natural> = (0..5).map(|_| random_62bit_prime(&mut rng)).collect();
    let primes = small_primes_to(10_000);

    let instances: Vec<(u64, u64, u64, Option<(u64, u64)>)> = (0..count)
        .map(|_| {
            let p = primes[rng.gen_range(0..primes.len())];
            let s = rng.gen_range(1..=5000u64);
            let k = rng.gen_range(1..=1000u64);
            let lam = if rng.gen_bool(0.1) {
                None
            } else {
                let r = rng.gen_range(0..s);
                let u = if p == 2 {
                    2 * rng.gen_range(0..1_000_000u64) + 1
                } else {
                    let raw = rng.gen_range(1..1_000_000u64);
                    if raw % p == 0 {
                        raw + 1
                    } else {
                        raw
                    }
                };
                Some((r, u))
            };
            (p, s, k, lam)
        })
        .collect();

    let failures: Vec<String> = instances
        .par_iter()
        .enumerate()
        .filter_map(|(i, &(p, s, k, lam))| {
            let q = match lam {
                None => PrimePowerQuery::zero(n64(k), n64(p), n64(s)),
                Some((r, u)) => PrimePowerQuery::from_split(n64(k), n64(p), n64(s), n64(r), n64(u)),
            };
            let q = match q {
                Ok(q) => q,
                Err(e) => return Some((i, format!("instance {i}: {e}"))),
            };
            let closed = match rho_prime_power(&q) {
                Ok(v) => v,
                Err(e) => return Some((i, format!("instance {i} closed: {e}"))),
            };
            for m in &moduli {
                let c = closed.eval_mod(m);
                let r = rho_rec_mod(&q, m);
                match (c, r) {
                    (Ok(c), Ok(r)) if c == r => {}
                    (c, r) => {
                        return Some((
                            i,
                            format!(
                                "(k={k}, p={p}, s={s}, lambda={lam:?}) mod {m}: closed={c:?} recursive={r:?}"
                            ),
                        ))
                    }
                }
            }
            None
        })
        .collect::<Vec<_>>()
        .into_iter()
        .map(|(_, msg)| msg)
        .collect();

    Ok(VerifyOutcome {
        cases: count as u64 * 5,
        failures,
    })
}
