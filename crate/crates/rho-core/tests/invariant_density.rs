//! Full-density run of the central engine-agreement invariant: every prime
//! power p^s <= 2^14 with p <= 13, k <= 5, every lambda. Exhaustive below
//! 2^12; stratified over the valuation classes above (every r with several
//! units, plus lambda = 0), where a full residue sweep would dominate the
//! suite's runtime without adding new branch coverage.

use num_traits::ToPrimitive;
use rho_core::closed_form::{rho_prime_power, PrimePowerQuery};
use rho_core::numbers::Natural;
use rho_core::recursive_form::rho_rec_query;
use rho_core::reference::conv_histogram;

fn n64(v: u64) -> Natural {
    Natural::from(v)
}

fn agree_all_lambda(p: u64, s: u32) {
    let m = p.pow(s);
    for k in 1..=5u64 {
        let oracle = (k as u64 * m * m <= 40_000_000).then(|| conv_histogram(k as u32, m).unwrap());
        for lam in 0..m {
            let q = PrimePowerQuery::new(n64(k), n64(p), n64(s as u64), &n64(lam)).unwrap();
            let c = rho_prime_power(&q).unwrap().eval_exact().unwrap();
            let r = rho_rec_query(&q).unwrap().eval_exact().unwrap();
            assert_eq!(c, r, "closed vs recursive k={k} p={p}^{s} lam={lam}");
            if let Some(h) = &oracle {
                assert_eq!(&c, h.get(lam), "closed vs conv k={k} p={p}^{s} lam={lam}");
            }
        }
    }
}

fn agree_stratified(p: u64, s: u32) {
    let m = p.pow(s);
    for k in 1..=5u64 {
        let mut lams = vec![0u64];
        let mut pr = 1u64;
        for _r in 0..s {
            for u in [1u64, 2, 3, 5, 7, 11, 14] {
                if u % p != 0 {
                    let lam = pr.checked_mul(u).filter(|&l| l < m);
                    if let Some(l) = lam {
                        lams.push(l);
                    }
                }
            }
            pr *= p;
        }
        for lam in lams {
            let q = PrimePowerQuery::new(n64(k), n64(p), n64(s as u64), &n64(lam)).unwrap();
            let c = rho_prime_power(&q).unwrap().eval_exact().unwrap();
            let r = rho_rec_query(&q).unwrap().eval_exact().unwrap();
            assert_eq!(c, r, "closed vs recursive k={k} p={p}^{s} lam={lam}");
        }
    }
}

#[test]
fn engine_agreement_to_2_pow_14() {
    use rayon::prelude::*;
    let mut plan: Vec<(u64, u32)> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13] {
        let mut s = 1u32;
        while p.pow(s) <= 1 << 14 {
            plan.push((p, s));
            s += 1;
        }
    }
    plan.par_iter().for_each(|&(p, s)| {
        if p.pow(s) <= 1 << 12 {
            agree_all_lambda(p, s);
        } else {
            agree_stratified(p, s);
        }
    });
}
