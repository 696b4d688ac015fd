//! Batch scans over ranges of candidates.
//!
//! Every scan takes a half-open range `[lo, hi)` so callers can shard the
//! work; the `find_*` helpers cover `[3, limit]` in one piece.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{self, OddModulus, OracleStatus};
use crate::error::{Error, Result};
use crate::kernel::{self, ExponentForm};
use crate::primality::{self, Profile};

/// Composite `Q` passing the base test to base `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PseudoprimeHit {
    pub q: u64,
    pub base: i64,
    pub factors: Vec<(u64, u32)>,
    pub strong_pass: bool,
    pub profile: Profile,
}

fn odd_range(lo: u64, hi: u64) -> impl Iterator<Item = u64> {
    let start = lo.max(3) | 1;
    (start..hi).step_by(2)
}

fn coprime_to_base(q: u64, a: i64) -> bool {
    let d = (i128::from(a) * i128::from(a) - 1).unsigned_abs();
    (d % u128::from(q)).gcd(&u128::from(q)) == 1
}

/// Evaluates the raw congruences for one candidate; perfect squares are
/// not filtered out.
pub fn pseudoprime_candidate(q: u64, a: i64) -> Option<PseudoprimeHit> {
    if q < 3 || q % 2 == 0 || !coprime_to_base(q, a) {
        return None;
    }
    let m = OddModulus::from_u64(q).ok()?;
    let base = BigInt::from(a);
    let c = primality::congruences(&m, &base).ok()?;
    if !c.holds() || arith::is_prime_u64(q) {
        return None;
    }
    let profile = primality::profile(&m, &base, c.symbols);
    let strong_pass = profile.rule_violation(m.value()).is_none();
    Some(PseudoprimeHit {
        q,
        base: a,
        factors: arith::factor_u64(q),
        strong_pass,
        profile,
    })
}

/// Pseudoprimes to base `a` in `[lo, hi)`, ascending.
pub fn scan_pseudoprimes(a: i64, lo: u64, hi: u64, strong_only: bool) -> Vec<PseudoprimeHit> {
    odd_range(lo, hi)
        .filter_map(|q| pseudoprime_candidate(q, a))
        .filter(|h| h.strong_pass || !strong_only)
        .collect()
}

/// All pseudoprimes to base `a` up to `limit`.
pub fn find_pseudoprimes(a: i64, limit: u64, strong_only: bool) -> Result<Vec<PseudoprimeHit>> {
    if (-1..=1).contains(&a) {
        return Err(Error::invalid("base must not be 0 or ±1"));
    }
    Ok(scan_pseudoprimes(a, 3, limit.saturating_add(1), strong_only))
}

/// A candidate covering set for `k·2^n + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSpec {
    pub k: u64,
    pub primes: Vec<u64>,
    pub period: u64,
}

/// True iff every `k·2^n + 1`, `1 ≤ n ≤ period`, has a divisor in the set
/// and the order of 2 modulo each prime divides the period.
pub fn sierpinski_cover_verify(spec: &CoverSpec) -> Result<bool> {
    if spec.k % 2 == 0 {
        return Err(Error::invalid("k must be odd"));
    }
    if spec.period == 0 {
        return Err(Error::invalid("period must be positive"));
    }
    for &p in &spec.primes {
        if p < 3 || !arith::is_prime_u64(p) {
            return Err(Error::invalid("cover entries must be odd primes"));
        }
        match arith::multiplicative_order_u64(2, p) {
            Some(o) if spec.period % o == 0 => {}
            _ => return Ok(false),
        }
    }
    let covered = |n: u64| {
        spec.primes.iter().any(|&p| {
            let r = u128::from(spec.k % p) * u128::from(arith::pow_mod_u64(2, n, p));
            (r + 1) % u128::from(p) == 0
        })
    };
    Ok((1..=spec.period).all(covered))
}

/// One row of [`sierpinski_cheb_scan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SierpinskiRow {
    pub n: u64,
    pub value: BigUint,
    /// Root of `N_n` when it is a perfect square.
    pub square_root: Option<BigUint>,
    /// `gcd(N_n, a² − 1)` when it is not 1; the congruences are skipped.
    pub shared_factor: Option<BigUint>,
    /// `T_{(N−1)/2}(a) ≡ 1 (mod N)`
    pub t_holds: bool,
    /// `U_{(N−1)/2−1}(a) ≡ 0 (mod N)`
    pub u_holds: bool,
    /// `T_{(N−1)/2}(a) ≡ 1 (mod N²)`
    pub t_square_holds: bool,
    pub oracle: OracleStatus,
}

impl SierpinskiRow {
    pub fn passes(&self) -> bool {
        self.shared_factor.is_none() && self.t_holds && self.u_holds
    }
}

/// Runs `ω_a^{(N_n−1)/2} ≡ 1` for `N_n = k·2^n + 1`, `n` in `[n_lo, n_hi]`.
/// `oracle_bound` caps the trial division used for the oracle column.
pub fn sierpinski_cheb_scan(
    k: u64,
    a: i64,
    n_lo: u64,
    n_hi: u64,
    oracle_bound: Option<u64>,
) -> Result<Vec<SierpinskiRow>> {
    if k % 2 == 0 {
        return Err(Error::invalid("k must be odd"));
    }
    if n_lo < 1 || n_lo > n_hi {
        return Err(Error::invalid("empty or invalid n range"));
    }
    let base = BigInt::from(a);
    let d = (&base * &base - 1u32).abs().to_biguint().unwrap_or_default();
    let mut rows = Vec::new();
    for n in n_lo..=n_hi {
        let value = (BigUint::from(k) << n as usize) + 1u32;
        let m = OddModulus::new(value.clone())?;
        let g = d.gcd(&value);
        let mut row = SierpinskiRow {
            n,
            square_root: arith::is_perfect_square(&value),
            shared_factor: None,
            t_holds: false,
            u_holds: false,
            t_square_holds: false,
            oracle: arith::trial_division_oracle(&value, oracle_bound).status,
            value,
        };
        if !g.is_one() {
            row.shared_factor = Some(g);
            rows.push(row);
            continue;
        }
        let e = ExponentForm::proth(k, n - 1, 0);
        let pair = kernel::unit_pow(&base, &e, &m);
        row.t_holds = pair.t.is_one();
        row.u_holds = pair.u.is_zero();
        row.t_square_holds = kernel::cheb_t(&base, &e, &m.squared()).is_one();
        rows.push(row);
    }
    Ok(rows)
}

/// Outcome for one index of [`primitive_divisor_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimitiveDivisor {
    /// Smallest prime dividing `U_n(a)` but none of the earlier data.
    Found(BigUint),
    /// Every prime of `U_n(a)` already divides earlier data.
    Violation,
    /// The new part could not be split below the trial-division bound.
    Unresolved(BigUint),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveDivisorRow {
    pub n: u32,
    pub u_n: BigInt,
    pub outcome: PrimitiveDivisor,
}

/// Exact `U_0(a), …, U_{n_max}(a)`.
pub fn u_sequence(a: i64, n_max: u32) -> Vec<BigInt> {
    let two_a = BigInt::from(2 * i128::from(a));
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(BigInt::one());
    if n_max >= 1 {
        out.push(two_a.clone());
    }
    for n in 2..=n_max as usize {
        let next = &two_a * &out[n - 1] - &out[n - 2];
        out.push(next);
    }
    out
}

/// Smallest prime factor of `x` by trial division up to `bound`.
fn smallest_prime_factor(x: &BigUint, bound: u64) -> Option<BigUint> {
    match arith::factor_big(x, bound) {
        Some(f) => f.into_iter().next().map(|(p, _)| p),
        None => {
            let mut d = 2u64;
            while d <= bound {
                if (x % d).is_zero() {
                    return Some(BigUint::from(d));
                }
                d += if d == 2 { 1 } else { 2 };
            }
            None
        }
    }
}

/// For each `n` in `(1, n_max]`, the smallest prime dividing `U_n(a)` but
/// not `a(a²−1)·U_0(a)⋯U_{n−1}(a)`.
pub fn primitive_divisor_check(
    a: i64,
    n_max: u32,
    bound: u64,
) -> Result<Vec<PrimitiveDivisorRow>> {
    if (-1..=1).contains(&a) {
        return Err(Error::invalid("base must not be 0 or ±1"));
    }
    if n_max > 40 {
        return Err(Error::invalid("n_max must be at most 40"));
    }
    let seq = u_sequence(a, n_max);
    let big_a = BigInt::from(a);
    let mut earlier = (&big_a * (&big_a * &big_a - 1u32)).magnitude().clone();
    earlier *= seq[0].magnitude();
    if n_max >= 1 {
        earlier *= seq[1].magnitude();
    }
    let mut rows = Vec::new();
    for n in 2..=n_max {
        let u_n = seq[n as usize].clone();
        let mut rest = u_n.magnitude().clone();
        loop {
            let g = rest.gcd(&earlier);
            if g.is_one() {
                break;
            }
            rest /= g;
        }
        let outcome = if rest.is_one() {
            PrimitiveDivisor::Violation
        } else {
            match smallest_prime_factor(&rest, bound) {
                Some(p) => PrimitiveDivisor::Found(p),
                None => PrimitiveDivisor::Unresolved(rest),
            }
        };
        earlier *= u_n.magnitude();
        rows.push(PrimitiveDivisorRow { n, u_n, outcome });
    }
    Ok(rows)
}

/// One row of [`digit_dip_scan`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DipRow {
    pub p: u64,
    pub phi: BigUint,
    /// `2·T_{q^p}(a) − 2·T_{q+ε−1}(a) mod Φ_p(q)`
    pub residue: BigUint,
    /// Decimal digits of the residue's representative in `(−Φ/2, Φ/2]`.
    pub residue_digits: usize,
    pub phi_status: OracleStatus,
}

fn odd_primes_upto(limit: u64) -> impl Iterator<Item = u64> {
    (3..=limit).step_by(2).filter(|&p| arith::is_prime_u64(p))
}

/// The cyclotomic residue for every odd prime `p ≤ p_max`. When `Φ_p(q)`
/// shares a factor with `a² − 1`, `ε = 0` is used as is.
pub fn digit_dip_scan(
    q: i64,
    a: i64,
    p_max: u64,
    oracle_bound: Option<u64>,
) -> Result<Vec<DipRow>> {
    if q.unsigned_abs() < 2 {
        return Err(Error::invalid("|q| must be at least 2"));
    }
    if (-1..=1).contains(&a) {
        return Err(Error::invalid("base must not be 0 or ±1"));
    }
    let base = BigInt::from(a);
    let mut rows = Vec::new();
    for p in odd_primes_upto(p_max) {
        let phi = primality::cyclotomic_value(q, p)?;
        let m = if q == 2 {
            OddModulus::special(arith::SpecialForm::mersenne(p)?)
        } else {
            OddModulus::new(phi.clone())?
        };
        let eps = arith::jacobi(&(&base * &base - 1u32), &phi)?;
        let lhs = kernel::compose_iterate(&base, q, p, &m)?;
        let rhs = kernel::cheb_t(&base, &ExponentForm::from(q + i64::from(eps) - 1), &m);
        let diff = (lhs + &phi - rhs) % &phi;
        let residue = (diff << 1u32) % &phi;
        rows.push(DipRow {
            p,
            residue_digits: arith::centered_digits(&residue, &phi),
            phi_status: arith::trial_division_oracle(&phi, oracle_bound).status,
            phi,
            residue,
        });
    }
    Ok(rows)
}

/// Odd composite, non-squarefree `Q` passing both congruences.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonSquarefreeHit {
    pub q: u64,
    pub factors: Vec<(u64, u32)>,
    /// Bases from the scan list that `Q` passes.
    pub bases: Vec<i64>,
}

impl NonSquarefreeHit {
    pub fn is_prime_square(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 2
    }
}

fn has_square_factor(q: u64) -> bool {
    arith::factor_u64(q).iter().any(|&(_, e)| e > 1)
}

fn passes_raw(q: u64, a: i64) -> bool {
    if !coprime_to_base(q, a) {
        return false;
    }
    OddModulus::from_u64(q)
        .ok()
        .and_then(|m| primality::congruences(&m, &BigInt::from(a)).ok())
        .is_some_and(|c| c.holds())
}

/// Non-squarefree odd `Q` in `[lo, hi)` passing for at least one base.
pub fn scan_nonsquarefree(lo: u64, hi: u64, bases: &[i64]) -> Vec<NonSquarefreeHit> {
    odd_range(lo, hi)
        .filter(|&q| has_square_factor(q))
        .filter_map(|q| {
            let passing: Vec<i64> = bases.iter().copied().filter(|&a| passes_raw(q, a)).collect();
            (!passing.is_empty()).then(|| NonSquarefreeHit {
                q,
                factors: arith::factor_u64(q),
                bases: passing,
            })
        })
        .collect()
}

pub fn nonsquarefree_scan(limit: u64, bases: &[i64]) -> Vec<NonSquarefreeHit> {
    scan_nonsquarefree(3, limit.saturating_add(1), bases)
}

/// Counts for the squarefree `T ⇒ U` scan.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TuScan {
    /// (Q, a) pairs examined.
    pub checked: u64,
    /// Composite pairs passing the `T` half.
    pub t_passes: Vec<(u64, i64)>,
    /// Pairs passing `T` but not `U`.
    pub violations: Vec<(u64, i64)>,
}

impl TuScan {
    pub fn merge(&mut self, other: TuScan) {
        self.checked += other.checked;
        self.t_passes.extend(other.t_passes);
        self.violations.extend(other.violations);
    }
}

/// Squarefree odd composites in `[lo, hi)`: does the `T` half imply the `U` half?
pub fn scan_squarefree_t_implies_u(lo: u64, hi: u64, bases: &[i64]) -> TuScan {
    let mut out = TuScan::default();
    for q in odd_range(lo, hi) {
        if arith::is_prime_u64(q) || has_square_factor(q) {
            continue;
        }
        let m = match OddModulus::from_u64(q) {
            Ok(m) => m,
            Err(_) => continue,
        };
        for &a in bases {
            if !coprime_to_base(q, a) {
                continue;
            }
            out.checked += 1;
            if let Ok(c) = primality::congruences(&m, &BigInt::from(a)) {
                if c.t_holds {
                    out.t_passes.push((q, a));
                    if !c.u_holds {
                        out.violations.push((q, a));
                    }
                }
            }
        }
    }
    out
}

/// `T_Q(a) ≡ a (mod Q)` for every `a` in `[0, Q)`.
pub fn is_weak_universal(q: u64) -> bool {
    let m = match OddModulus::from_u64(q) {
        Ok(m) => m,
        Err(_) => return false,
    };
    (0..q).all(|a| {
        let x = BigUint::from(a);
        kernel::cheb_t_at(&x, q, &m) == x
    })
}

/// Odd composites in `[lo, hi)` that pass the weak test to every base.
pub fn scan_weak_universal(lo: u64, hi: u64) -> Vec<u64> {
    odd_range(lo, hi)
        .filter(|&q| !arith::is_prime_u64(q) && is_weak_universal(q))
        .collect()
}

/// Bases in `[lo, hi]` to which `q` is a strong pseudoprime.
pub fn strong_bases(q: u64, lo: i64, hi: i64) -> Vec<i64> {
    let m = match OddModulus::from_u64(q) {
        Ok(m) => m,
        Err(_) => return Vec::new(),
    };
    (lo..=hi)
        .filter(|&a| {
            primality::strong_test(&m, &BigInt::from(a)).is_ok_and(|v| v.passed())
        })
        .collect()
}
