//! Benchmark suites behind `rho bench`: CSV rows of instrumented operation
//! counts and wall times.
//!
//! `scaling` demonstrates the complexity separation: the closed engine's
//! operation count is flat in s while the recursive engine's grows linearly.
//! `engines` compares every engine producing a full residue histogram at
//! desk scale.

use std::time::Instant;


use rho_core::closed_form::{rho_prime_power_counted, PrimePowerQuery};
use rho_core::numbers::{Natural, OpCount};
use rho_core::recursive_form::rho_rec_mod_counted;
use rho_core::reference;
use rho_core::Result;

#[derive(Clone, Debug)]
pub struct BenchRow {
    pub engine: String,
    pub p: u64,
    pub s: u64,
    pub k: u64,
    pub ops: u64,
    pub ns: u128,
}

pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("engine,p,s,k,ops,ns\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.engine, r.p, r.s, r.k, r.ops, r.ns
        ));
    }
    out
}

fn n64(v: u64) -> Natural {
    Natural::from(v)
}

/// Closed vs recursive at fixed (k, p, lambda = 0) across s from 10^3 to
/// 10^6: the closed rows carry identical op counts, the recursive rows grow
/// linearly. Both engines are driven to a residue mod a fixed prime so the
/// measured work includes rendering.
pub fn scaling_suite() -> Result<Vec<BenchRow>> {
    let modulus = n64(1_000_000_007);
    let (k, p) = (10u64, 5u64);
    let mut rows = Vec::new();
    for s in [1_000u64, 10_000, 100_000, 1_000_000] {
        let q = PrimePowerQuery::zero(n64(k), n64(p), n64(s))?;

        let ops = OpCount::new();
        let t0 = Instant::now();
        let v = rho_prime_power_counted(&q, &ops)?;
        v.eval_mod_counted(&modulus, &ops)?;
        rows.push(BenchRow {
            engine: "closed".into(),
            p,
            s,
            k,
            ops: ops.get(),
            ns: t0.elapsed().as_nanos(),
        });

        let ops = OpCount::new();
        let t0 = Instant::now();
        rho_rec_mod_counted(&q, &modulus, &ops)?;
        rows.push(BenchRow {
            engine: "recursive".into(),
            p,
            s,
            k,
            ops: ops.get(),
            ns: t0.elapsed().as_nanos(),
        });
    }
    Ok(rows)
}

/// Full-histogram comparison of all engines at prime powers up to 512.
pub fn engines_suite() -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for (p, s) in [(2u64, 4u32), (2, 6), (3, 5), (2, 8), (2, 9)] {
        let m = p.pow(s);
        for k in [2u64, 3] {
            rows.extend(engine_histogram_rows(p, s as u64, k, m)?);
        }
    }
    Ok(rows)
}

fn engine_histogram_rows(p: u64, s: u64, k: u64, m: u64) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    let mut push = |engine: &str, ops: u64, ns: u128| {
        rows.push(BenchRow {
            engine: engine.into(),
            p,
            s,
            k,
            ops,
            ns,
        });
    };

    // closed and recursive: one evaluation per residue
    let ops = OpCount::new();
    let t0 = Instant::now();
    for lam in 0..m {
        let q = PrimePowerQuery::new(n64(k), n64(p), n64(s), &n64(lam))?;
        rho_prime_power_counted(&q, &ops)?.eval_exact()?;
    }
    push("closed", ops.get(), t0.elapsed().as_nanos());

    let ops = OpCount::new();
    let t0 = Instant::now();
    for lam in 0..m {
        let q = PrimePowerQuery::new(n64(k), n64(p), n64(s), &n64(lam))?;
        rho_core::recursive_form::rho_rec_query_counted(&q, &ops)?.eval_exact()?;
    }
    push("recursive", ops.get(), t0.elapsed().as_nanos());

    let ops = OpCount::new();
    let t0 = Instant::now();
    reference::brute_histogram_counted(k as u32, m, reference::BRUTE_BUDGET, &ops)?;
    push("bruteforce", ops.get(), t0.elapsed().as_nanos());

    if m <= reference::GAUSS_MAX_N && k <= reference::GAUSS_MAX_K as u64 {
        let ops = OpCount::new();
        let t0 = Instant::now();
        reference::gauss_histogram_counted(k as u32, m, &ops)?;
        push("gauss", ops.get(), t0.elapsed().as_nanos());
    }
    if m <= reference::TOTH_MAX_N && k <= reference::GAUSS_MAX_K as u64 {
        let ops = OpCount::new();
        let t0 = Instant::now();
        reference::toth_histogram_counted(k as u32, m, &ops)?;
        push("toth", ops.get(), t0.elapsed().as_nanos());
    }
    if m <= reference::MATRIX_MAX_N {
        let ops = OpCount::new();
        let t0 = Instant::now();
        reference::matrix_power_rho_counted(&n64(k), m, None, &ops)?;
        push("matrix", ops.get(), t0.elapsed().as_nanos());
    }
    Ok(rows)
}
