//! Miller-Rabin primality testing.
//!
//! Below 3.317e14 the fixed witness set {2,3,5,7,11,13,17} is deterministic.
//! Above that, 64 further rounds with bases drawn from a ChaCha stream seeded
//! by the candidate itself push the error probability under 2^-128 while
//! keeping results reproducible.

use num_bigint::RandBigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Natural;

const SMALL_PRIMES: [u64; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Deterministic witness bound: {2,3,5,7,11,13,17} suffices below this.
const DETERMINISTIC_BOUND: u64 = 341_550_071_728_321;

pub fn is_prime(n: &Natural) -> bool {
    if n < &Natural::from(2u32) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let pb = Natural::from(p);
        if *n == pb {
            return true;
        }
        if (n % p).is_zero() {
            return false;
        }
    }

    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap();
    let d = &n_minus_1 >> s;

    let witness_fails = |a: &Natural| -> bool {
        // returns true when `a` proves n composite
        let a = a % n;
        if a.is_zero() {
            return false;
        }
        let mut x = a.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            return false;
        }
        for _ in 1..s {
            x = &x * &x % n;
            if x == n_minus_1 {
                return false;
            }
        }
        true
    };

    if let Some(v) = n.to_u64() {
        let bases: &[u64] = if v < DETERMINISTIC_BOUND {
            &[2, 3, 5, 7, 11, 13, 17]
        } else {
            &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
        };
        return !bases.iter().any(|&b| witness_fails(&Natural::from(b)));
    }

    for &b in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if witness_fails(&Natural::from(b)) {
            return false;
        }
    }
    // Deterministic per candidate: seed from the low bits of n.
    let seed = (n % ((1u128 << 64) - 59) as u64).to_u64().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let two = Natural::from(2u32);
    let hi = n - 2u32;
    for _ in 0..64 {
        let a = rng.gen_biguint_range(&two, &hi);
        if witness_fails(&a) {
            return false;
        }
    }
    true
}
