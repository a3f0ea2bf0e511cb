//! Base-case table validation behind `rho selftest`.
//!
//! Checks the Lebesgue closed form and the mod-2/4/8 tables against the
//! convolution oracle for small k (the oracle itself is first checked
//! against literal enumeration), then validates the tables at very large k
//! through circulant powering mod a 61-bit prime. Runs in seconds and is
//! deterministic.


use rho_core::base_cases::{rho_odd_prime, rho_two_small};
use rho_core::numbers::Natural;
use rho_core::reference::{brute_histogram, conv_histogram, matrix_power_rho};

fn n64(v: u64) -> Natural {
    Natural::from(v)
}

/// Runs every identity; returns the number checked, or the first failing
/// identity as an error string.
pub fn run() -> Result<u64, String> {
    let mut checked = 0u64;

    // the convolution oracle agrees with literal enumeration
    for n in 1..=12u64 {
        for k in 1..=3u32 {
            let b = brute_histogram(k, n).map_err(|e| format!("brute({k},{n}): {e}"))?;
            let c = conv_histogram(k, n).map_err(|e| format!("conv({k},{n}): {e}"))?;
            if b != c {
                return Err(format!("oracle disagreement: conv vs brute at (k={k}, n={n})"));
            }
            checked += 1;
        }
    }

    // Lebesgue closed form, all odd primes to 50, k to 6, every residue
    for p in [3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        for k in 1..=6u64 {
            let oracle = conv_histogram(k as u32, p).map_err(|e| e.to_string())?;
            for lam in 0..p {
                let got = rho_odd_prime(&n64(k), &n64(lam), &n64(p))
                    .and_then(|v| v.eval_exact())
                    .map_err(|e| format!("lebesgue(k={k}, lambda={lam}, p={p}): {e}"))?;
                if got != *oracle.get(lam) {
                    return Err(format!(
                        "lebesgue table: (k={k}, lambda={lam}, p={p}) = {got}, oracle {}",
                        oracle.get(lam)
                    ));
                }
                checked += 1;
            }
        }
    }

    // mod 2/4/8 tables for k <= 10
    for t in 1..=3u8 {
        let m = 1u64 << t;
        for k in 1..=10u64 {
            let oracle = conv_histogram(k as u32, m).map_err(|e| e.to_string())?;
            for lam in 0..m {
                let got = rho_two_small(&n64(k), &n64(lam), t)
                    .and_then(|v| v.eval_exact())
                    .map_err(|e| format!("two-adic(t={t}, lambda={lam}, k mod 8 = {}): {e}", k % 8))?;
                if got != *oracle.get(lam) {
                    return Err(format!(
                        "two-adic table: (t={t}, lambda={lam}, k mod 8 = {}) = {got}, oracle {}",
                        k % 8,
                        oracle.get(lam)
                    ));
                }
                checked += 1;
            }
        }
    }

    // large-k validation via circulant powering mod 2^61 - 1
    let m61: Natural = (n64(1) << 61) - 1u32;
    for k in [12_345u64, 1_000_000_007] {
        for t in 1..=3u8 {
            let m = 1u64 << t;
            let oracle = matrix_power_rho(&n64(k), m, Some(&m61)).map_err(|e| e.to_string())?;
            for lam in 0..m {
                let got = rho_two_small(&n64(k), &n64(lam), t)
                    .and_then(|v| v.eval_mod(&m61))
                    .map_err(|e| format!("two-adic large k={k}: {e}"))?;
                if got != *oracle.get(lam) {
                    return Err(format!(
                        "two-adic table at large k: (t={t}, lambda={lam}, k mod 8 = {}) mismatch mod 2^61-1",
                        k % 8
                    ));
                }
                checked += 1;
            }
        }
    }

    Ok(checked)
}
