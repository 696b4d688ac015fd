//! Range-sharded scans on a rayon pool.
//!
//! Work is cut into units of [`UNIT`] candidates, each unit runs the
//! sequential scan from the core crate, and results are merged and sorted
//! so the output never depends on the thread count.

use std::sync::OnceLock;

use anyhow::{Context, Result};
use chebprime_core::arith::{is_perfect_square, trial_division_oracle};
use chebprime_core::primality::{proth_test, Status};
use chebprime_core::search::{self, NonSquarefreeHit, PseudoprimeHit, TuScan};
use num_bigint::BigUint;
use rayon::prelude::*;

pub const UNIT: u64 = 10_000;

pub const THREADS_ENV: &str = "CHEBPRIME_THREADS";

/// Thread count from `CHEBPRIME_THREADS`, else the number of logical CPUs.
pub fn thread_count() -> usize {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

fn pool() -> Result<&'static rayon::ThreadPool> {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    if let Some(p) = POOL.get() {
        return Ok(p);
    }
    let p = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count())
        .build()
        .context("building the worker pool")?;
    Ok(POOL.get_or_init(|| p))
}

/// Runs `scan` on every unit of `[lo, hi)` and concatenates the results in
/// range order.
pub fn sharded<T, F>(lo: u64, hi: u64, unit: u64, scan: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, u64) -> Vec<T> + Sync,
{
    let unit = unit.max(1);
    let starts: Vec<u64> = (lo..hi).step_by(unit as usize).collect();
    let parts: Vec<Vec<T>> = pool()?.install(|| {
        starts
            .par_iter()
            .map(|&s| scan(s, (s + unit).min(hi)))
            .collect()
    });
    Ok(parts.into_iter().flatten().collect())
}

pub fn pseudoprimes(a: i64, limit: u64, strong_only: bool) -> Result<Vec<PseudoprimeHit>> {
    if (-1..=1).contains(&a) {
        anyhow::bail!("base must not be 0 or ±1");
    }
    let mut hits = sharded(3, limit.saturating_add(1), UNIT, |lo, hi| {
        search::scan_pseudoprimes(a, lo, hi, strong_only)
    })?;
    hits.sort_by_key(|h| h.q);
    Ok(hits)
}

pub fn nonsquarefree(limit: u64, bases: &[i64]) -> Result<Vec<NonSquarefreeHit>> {
    let mut hits = sharded(3, limit.saturating_add(1), UNIT, |lo, hi| {
        search::scan_nonsquarefree(lo, hi, bases)
    })?;
    hits.sort_by_key(|h| h.q);
    Ok(hits)
}

pub fn squarefree_t_implies_u(limit: u64, bases: &[i64]) -> Result<TuScan> {
    let parts = sharded(3, limit.saturating_add(1), UNIT, |lo, hi| {
        vec![search::scan_squarefree_t_implies_u(lo, hi, bases)]
    })?;
    let mut out = TuScan::default();
    for p in parts {
        out.merge(p);
    }
    out.t_passes.sort_unstable();
    out.violations.sort_unstable();
    Ok(out)
}

pub fn weak_universal(limit: u64) -> Result<Vec<u64>> {
    let mut hits = sharded(3, limit.saturating_add(1), 500, search::scan_weak_universal)?;
    hits.sort_unstable();
    Ok(hits)
}

/// One disagreement between the Proth test and the oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProthMismatch {
    pub k: u64,
    pub n: u64,
    pub value: u64,
    pub test_prime: bool,
    pub oracle_prime: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProthSweep {
    pub checked: u64,
    pub inconclusive: u64,
    pub squares: u64,
    pub mismatches: Vec<ProthMismatch>,
}

/// Every Proth number `k·2^n + 1 < limit` with odd `k < 2^n`.
pub fn proth_candidates(limit: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    for n in 1..63u64 {
        if (1u64 << n) + 1 >= limit {
            break;
        }
        let mut k = 1u64;
        while k < (1u64 << n) {
            match k.checked_shl(n as u32).and_then(|v| v.checked_add(1)) {
                Some(v) if v < limit && (v >> n) == k => out.push((k, n)),
                _ => break,
            }
            k += 2;
        }
    }
    out
}

/// Proth test against the trial-division oracle on every candidate below `limit`.
pub fn proth_oracle(limit: u64, base_cap: u64) -> Result<ProthSweep> {
    let cands = proth_candidates(limit);
    let rows: Vec<(u64, u64, u64, Option<bool>, bool)> = pool()?.install(|| {
        cands
            .par_iter()
            .map(|&(k, n)| {
                let value = (k << n) + 1;
                let big = BigUint::from(value);
                let square = is_perfect_square(&big).is_some();
                let verdict = if square {
                    None
                } else {
                    proth_test(&BigUint::from(k), n, base_cap)
                        .ok()
                        .filter(|v| v.status != Status::Inconclusive)
                        .map(|v| v.passed())
                };
                (k, n, value, verdict, square)
            })
            .collect()
    });
    let mut sweep = ProthSweep::default();
    for (k, n, value, verdict, square) in rows {
        if square {
            sweep.squares += 1;
            continue;
        }
        let Some(test_prime) = verdict else {
            sweep.inconclusive += 1;
            continue;
        };
        sweep.checked += 1;
        let oracle_prime = trial_division_oracle(&BigUint::from(value), None).is_prime();
        if test_prime != oracle_prime {
            sweep.mismatches.push(ProthMismatch {
                k,
                n,
                value,
                test_prime,
                oracle_prime,
            });
        }
    }
    sweep.mismatches.sort_by_key(|m| m.value);
    Ok(sweep)
}
