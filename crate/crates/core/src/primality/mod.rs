//! Primality and pseudoprimality tests built on the unit `ω_a`.
//!
//! For an odd prime `Q` with `gcd(Q, a²−1) = 1`, put `ε = (a²−1 | Q)`,
//! `δ = (2(a+1) | Q)` and `h = (Q − ε)/2`. Then
//!
//! ```text
//! ω^h ≡ δ,  i.e.  T_h(a) ≡ δ  and  U_{h−1}(a) ≡ 0   (mod Q)
//! ```
//!
//! and even `T_h(a) ≡ δ (mod Q²)`. Every test in this module is a
//! consequence of that congruence; the family certifiers in [`family`]
//! specialise it to numbers of special shape.

use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{self, is_perfect_square, jacobi, OddModulus, SpecialForm};
use crate::error::{Error, Result};
use crate::kernel::{self, ChebPair, ExponentForm};

pub mod family;

pub use family::{family_test, FamilyOptions, FamilySpec};

/// The Jacobi symbols `ε = (a²−1 | Q)` and `δ = (2(a+1) | Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymbolPair {
    pub epsilon: i8,
    pub delta: i8,
}

/// Strong-test residue chain `[T_{Q₁}, T_{2Q₁}, …, T_{2^t Q₁}] mod Q` where
/// `(Q − ε)/2 = 2^t·Q₁` with `Q₁` odd.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub entries: Vec<BigUint>,
}

impl Profile {
    /// Entries with `Q − 1` rendered as `−1`.
    pub fn signed_entries(&self, q: &BigUint) -> Vec<BigInt> {
        let minus_one = q - 1u32;
        self.entries
            .iter()
            .map(|e| {
                if *e == minus_one {
                    -BigInt::one()
                } else {
                    BigInt::from(e.clone())
                }
            })
            .collect()
    }

    /// Position of the first entry that rules out primality: a `1` whose
    /// predecessor is not `±1`, or a `−1` whose predecessor is not `0`.
    /// The first entry has no predecessor and never triggers.
    pub fn rule_violation(&self, q: &BigUint) -> Option<usize> {
        let minus_one = q - 1u32;
        self.entries.windows(2).position(|w| {
            let (prev, cur) = (&w[0], &w[1]);
            (cur.is_one() && !prev.is_one() && *prev != minus_one)
                || (*cur == minus_one && !prev.is_zero())
        })
        .map(|i| i + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    ProvedPrime,
    ProvedComposite,
    ProbablePrime,
    Inconclusive,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::ProvedPrime => "proved-prime",
            Status::ProvedComposite => "proved-composite",
            Status::ProbablePrime => "probable-prime",
            Status::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    /// All congruences the test asks for hold.
    CongruencesHold,
    FailedCongruence,
    SharedFactor,
    PerfectSquare,
    ProfileRule,
    /// `ω` has order `Q ± 1`, which forces `Q` prime.
    OrderCertificate,
    /// The order could not be pinned down with this base.
    OrderUnresolved,
    NoQualifyingBase,
    /// The symbols of this modulus do not admit the family's sufficiency route.
    SymbolMismatch,
}

impl Reason {
    pub fn as_str(self) -> &'static str {
        match self {
            Reason::CongruencesHold => "congruences-hold",
            Reason::FailedCongruence => "failed-congruence",
            Reason::SharedFactor => "shared-factor",
            Reason::PerfectSquare => "perfect-square",
            Reason::ProfileRule => "profile-rule",
            Reason::OrderCertificate => "order-certificate",
            Reason::OrderUnresolved => "order-unresolved",
            Reason::NoQualifyingBase => "no-qualifying-base",
            Reason::SymbolMismatch => "symbol-mismatch",
        }
    }
}

/// Supporting data for a verdict.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Certificate {
    pub base: Option<BigInt>,
    pub symbols: Option<SymbolPair>,
    pub profile: Option<Profile>,
    /// A nontrivial factor, or the root of a perfect square.
    pub witness: Option<BigUint>,
    /// Proven multiplicative order of `ω` modulo the candidate.
    pub order: Option<BigUint>,
    /// Final term of the family's Lucas-Lehmer style sequence.
    pub residue: Option<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub reason: Reason,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn new(status: Status, reason: Reason, certificate: Certificate) -> Self {
        Verdict {
            status,
            reason,
            certificate,
        }
    }

    fn composite(reason: Reason, certificate: Certificate) -> Self {
        Self::new(Status::ProvedComposite, reason, certificate)
    }

    fn witness(reason: Reason, base: Option<&BigInt>, witness: BigUint) -> Self {
        Self::composite(
            reason,
            Certificate {
                base: base.cloned(),
                witness: Some(witness),
                ..Certificate::default()
            },
        )
    }

    /// Prime or probable prime.
    pub fn passed(&self) -> bool {
        matches!(self.status, Status::ProvedPrime | Status::ProbablePrime)
    }

    pub fn is_composite(&self) -> bool {
        self.status == Status::ProvedComposite
    }
}

/// `ε` and `δ` for `(a, Q)`; fails with the shared factor when either is 0.
pub fn symbols(a: &BigInt, m: &OddModulus) -> Result<SymbolPair> {
    let q = m.value();
    let d = a * a - 1u32;
    let epsilon = jacobi(&d, q)?;
    if epsilon == 0 {
        let g = arith::residue(&d, q).gcd(q);
        let gcd = if g.is_zero() { q.clone() } else { g };
        return Err(Error::SharedFactor { gcd });
    }
    // gcd(2(a+1), Q) divides gcd(a²−1, Q) = 1 here.
    let delta = jacobi(&((a + 1u32) * 2u32), q)?;
    Ok(SymbolPair { epsilon, delta })
}

/// `(Q − ε)/2`
pub fn half_exponent(m: &OddModulus, s: SymbolPair) -> BigUint {
    let q = m.value();
    if s.epsilon > 0 {
        (q - 1u32) >> 1
    } else {
        (q + 1u32) >> 1
    }
}

/// Both halves of `ω^h ≡ δ`, evaluated without any pre-filtering.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Congruences {
    pub symbols: SymbolPair,
    /// `ω^h` with `h = (Q − ε)/2`.
    pub pair: ChebPair,
    /// `T_h(a) ≡ δ`
    pub t_holds: bool,
    /// `U_{h−1}(a) ≡ 0`
    pub u_holds: bool,
}

impl Congruences {
    pub fn holds(&self) -> bool {
        self.t_holds && self.u_holds
    }
}

pub fn congruences(m: &OddModulus, a: &BigInt) -> Result<Congruences> {
    let s = symbols(a, m)?;
    let h = half_exponent(m, s);
    let pair = kernel::unit_pow(a, &ExponentForm::from(h), m);
    let t_holds = pair.t == m.sign_residue(s.delta);
    let u_holds = pair.u.is_zero();
    Ok(Congruences {
        symbols: s,
        pair,
        t_holds,
        u_holds,
    })
}

/// Turns a proper shared factor into a composite verdict; `gcd = Q` stays
/// an error because it says nothing about `Q`.
fn absorb_shared_factor(err: Error, m: &OddModulus, a: &BigInt) -> Result<Verdict> {
    match err {
        Error::SharedFactor { gcd } if &gcd < m.value() && !gcd.is_one() => {
            Ok(Verdict::witness(Reason::SharedFactor, Some(a), gcd))
        }
        other => Err(other),
    }
}

fn square_verdict(m: &OddModulus, a: Option<&BigInt>) -> Option<Verdict> {
    is_perfect_square(m.value()).map(|root| Verdict::witness(Reason::PerfectSquare, a, root))
}

fn congruence_verdict(c: &Congruences, a: &BigInt) -> Verdict {
    let certificate = Certificate {
        base: Some(a.clone()),
        symbols: Some(c.symbols),
        ..Certificate::default()
    };
    if c.holds() {
        Verdict::new(Status::ProbablePrime, Reason::CongruencesHold, certificate)
    } else {
        Verdict::composite(Reason::FailedCongruence, certificate)
    }
}

/// `T_h(a) ≡ δ` and `U_{h−1}(a) ≡ 0 (mod Q)`. Perfect squares are rejected
/// up front.
pub fn chebyshev_test(m: &OddModulus, a: &BigInt) -> Result<Verdict> {
    if let Some(v) = square_verdict(m, Some(a)) {
        return Ok(v);
    }
    match congruences(m, a) {
        Ok(c) => Ok(congruence_verdict(&c, a)),
        Err(e) => absorb_shared_factor(e, m, a),
    }
}

/// The strong-test chain for `(Q, a)`.
pub fn profile(m: &OddModulus, a: &BigInt, s: SymbolPair) -> Profile {
    let h = half_exponent(m, s);
    let twos = h.trailing_zeros().unwrap_or(0);
    let odd = &h >> twos;
    let mut cur = kernel::cheb_t(a, &ExponentForm::from(odd), m);
    let mut entries = Vec::with_capacity(twos as usize + 1);
    entries.push(cur.clone());
    for _ in 0..twos {
        cur = kernel::cheb_t_at(&cur, 2, m);
        entries.push(cur.clone());
    }
    Profile { entries }
}

/// Base test plus the profile rule.
pub fn strong_test(m: &OddModulus, a: &BigInt) -> Result<Verdict> {
    if let Some(v) = square_verdict(m, Some(a)) {
        return Ok(v);
    }
    let c = match congruences(m, a) {
        Ok(c) => c,
        Err(e) => return absorb_shared_factor(e, m, a),
    };
    let prof = profile(m, a, c.symbols);
    Ok(strong_verdict(&c, prof, m, a))
}

fn strong_verdict(c: &Congruences, prof: Profile, m: &OddModulus, a: &BigInt) -> Verdict {
    let mut v = congruence_verdict(c, a);
    if v.passed() && prof.rule_violation(m.value()).is_some() {
        v = Verdict::composite(Reason::ProfileRule, v.certificate);
    }
    v.certificate.profile = Some(prof);
    v
}

/// Strong test on the raw congruences, skipping the perfect-square filter.
/// Used by scans that study squares on purpose.
pub fn strong_test_unfiltered(m: &OddModulus, a: &BigInt) -> Result<Verdict> {
    let c = congruences(m, a)?;
    let prof = profile(m, a, c.symbols);
    Ok(strong_verdict(&c, prof, m, a))
}

/// `T_Q(a) ≡ a (mod Q)`.
pub fn weak_test(m: &OddModulus, a: &BigInt) -> bool {
    let t = kernel::cheb_t(a, &ExponentForm::from(m.value().clone()), m);
    t == m.residue_of(a)
}

/// `T_h(a) ≡ δ (mod Q²)`, the lift of the base congruence for prime `Q`.
pub fn mod_square_check(m: &OddModulus, a: &BigInt) -> Result<bool> {
    let s = symbols(a, m)?;
    let h = half_exponent(m, s);
    let sq = m.squared();
    let t = kernel::cheb_t(a, &ExponentForm::from(h), &sq);
    Ok(t == sq.sign_residue(s.delta))
}

/// `Φ_p(q) = (q^p − 1)/(q − 1)`; negative `q` gives the Wagstaff-type values.
pub fn cyclotomic_value(q: i64, p: u64) -> Result<BigUint> {
    if q.unsigned_abs() < 2 {
        return Err(Error::invalid("cyclotomic base must satisfy |q| >= 2"));
    }
    let p = usize::try_from(p).map_err(|_| Error::invalid("exponent too large"))?;
    let num = num_traits::pow(BigInt::from(q), p) - 1;
    let value: BigInt = num / BigInt::from(q - 1);
    value
        .to_biguint()
        .ok_or_else(|| Error::invalid("cyclotomic value is negative"))
}

fn cyclotomic_modulus(q: i64, p: u64) -> Result<OddModulus> {
    if q == 2 {
        return Ok(OddModulus::special(SpecialForm::mersenne(p)?));
    }
    OddModulus::new(cyclotomic_value(q, p)?)
}

/// Both congruences of the generalised Lucas-Lehmer theorem modulo
/// `Φ_p(q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem1Outcome {
    pub modulus: BigUint,
    pub epsilon: i8,
    /// `T_{q^p}(a)`, computed by composing `T_|q|` `p` times.
    pub t_iterate: BigUint,
    /// `T_{q+ε−1}(a)`
    pub t_target: BigUint,
    /// `U_{q^p − ε(q−1) − 2}(a)`
    pub u_value: BigUint,
}

impl Theorem1Outcome {
    /// The simple Lucas-Lehmer form `s_p ≡ T_{q+ε−1}(a)` with `s_0 = a`.
    pub fn t_holds(&self) -> bool {
        self.t_iterate == self.t_target
    }

    pub fn u_holds(&self) -> bool {
        self.u_value.is_zero()
    }

    pub fn holds(&self) -> bool {
        self.t_holds() && self.u_holds()
    }
}

/// `T_{q^p}(a) ≡ T_{q+ε−1}(a)` and `U_{q^p−ε(q−1)−2}(a) ≡ 0 (mod Φ_p(q))`.
///
/// These hold whenever `Φ_p(q)` is prime; the caller decides primality.
pub fn theorem1_check(q: i64, p: u64, a: &BigInt) -> Result<Theorem1Outcome> {
    if p < 3 || p % 2 == 0 || !arith::is_prime_u64(p) {
        return Err(Error::invalid("p must be an odd prime"));
    }
    let m = cyclotomic_modulus(q, p)?;
    let d = a * a - 1u32;
    let epsilon = jacobi(&d, m.value())?;
    if epsilon == 0 {
        let gcd = arith::residue(&d, m.value()).gcd(m.value());
        let gcd = if gcd.is_zero() { m.value().clone() } else { gcd };
        return Err(Error::SharedFactor { gcd });
    }
    let eps = i64::from(epsilon);
    let t_iterate = kernel::compose_iterate(a, q, p, &m)?;
    let t_target = kernel::cheb_t(a, &ExponentForm::from(q + eps - 1), &m);
    let u_index = ExponentForm::power_offset(q, p, -eps * (q - 1) - 2);
    let u_value = kernel::cheb_u(a, &u_index, &m);
    Ok(Theorem1Outcome {
        modulus: m.value().clone(),
        epsilon,
        t_iterate,
        t_target,
        u_value,
    })
}

/// `T_m(a) mod Q` predicted from `ω^h ≡ δ`: writing `m = j·h + r` with
/// `|r| ≤ h/2` gives `T_m = δ^j·T_r`. Valid whenever `Q` is prime.
pub fn predicted_t(a: &BigInt, m: &OddModulus, s: SymbolPair, exponent: &BigUint) -> BigUint {
    let h = half_exponent(m, s);
    let (mut j, mut r) = exponent.div_rem(&h);
    if r.clone() << 1u32 > h {
        j += 1u32;
        r = &h - r;
    }
    let t = kernel::cheb_t(a, &ExponentForm::from(r), m);
    if s.delta < 0 && j.is_odd() && !t.is_zero() {
        m.value() - t
    } else {
        t
    }
}

/// `gcd(T_e − 1, U_{e−1}, Q)`: 1 means `ω^e ≢ 1` modulo every prime
/// factor of `Q`.
fn order_gcd(pair: &ChebPair) -> BigUint {
    let q = pair.modulus.value();
    let t_minus_one = (&pair.t + q - 1u32) % q;
    t_minus_one.gcd(&pair.u).gcd(q)
}

/// Outcome of checking that `ω^e ≢ 1` modulo every prime factor of `Q`.
pub(crate) enum OrderStep {
    Clear,
    Factor(BigUint),
    Unresolved,
}

pub(crate) fn order_step(a: &BigInt, m: &OddModulus, e: &ExponentForm) -> OrderStep {
    let pair = kernel::unit_pow(a, e, m);
    let g = order_gcd(&pair);
    if g.is_one() {
        OrderStep::Clear
    } else if &g == m.value() {
        OrderStep::Unresolved
    } else {
        OrderStep::Factor(g)
    }
}

/// Order certificate: with `δ = −1` and the full factorisation of `Q − ε`,
/// `ω^h ≡ −1` plus `ω^{(Q−ε)/q_j} ≢ 1` for every odd prime `q_j` pins the
/// order of `ω` to `Q − ε`, which forces `Q` prime.
pub fn order_certify(m: &OddModulus, a: &BigInt, factors: &[(BigUint, u32)]) -> Result<Verdict> {
    let s = match symbols(a, m) {
        Ok(s) => s,
        Err(e) => return absorb_shared_factor(e, m, a),
    };
    if s.delta != -1 {
        return Err(Error::precondition("order certificate needs delta = -1"));
    }
    let q = m.value();
    let target = if s.epsilon > 0 { q - 1u32 } else { q + 1u32 };
    let mut product = BigUint::one();
    for (f, e) in factors {
        if f < &BigUint::from(2u32) {
            return Err(Error::invalid("factorisation contains a non-prime entry"));
        }
        if arith::trial_division_oracle(f, Some(1 << 20)).is_composite() {
            return Err(Error::invalid("factorisation contains a composite entry"));
        }
        product *= num_traits::pow(f.clone(), *e as usize);
    }
    if product != target {
        return Err(Error::invalid("factorisation does not multiply to Q - epsilon"));
    }
    let mut certificate = Certificate {
        base: Some(a.clone()),
        symbols: Some(s),
        ..Certificate::default()
    };
    let half = kernel::unit_pow(a, &ExponentForm::from(&target >> 1u32), m);
    if !half.is_minus_one() {
        return Ok(Verdict::composite(Reason::FailedCongruence, certificate));
    }
    for (f, _) in factors.iter().filter(|(f, _)| f.is_odd()) {
        let e = ExponentForm::from(&target / f);
        match order_step(a, m, &e) {
            OrderStep::Clear => {}
            OrderStep::Factor(g) => {
                certificate.witness = Some(g);
                return Ok(Verdict::composite(Reason::SharedFactor, certificate));
            }
            OrderStep::Unresolved => {
                return Ok(Verdict::new(
                    Status::Inconclusive,
                    Reason::OrderUnresolved,
                    certificate,
                ))
            }
        }
    }
    certificate.order = Some(target);
    Ok(Verdict::new(
        Status::ProvedPrime,
        Reason::OrderCertificate,
        certificate,
    ))
}

/// Default cap for the Proth base search.
pub const PROTH_BASE_CAP: u64 = 200;

fn proth_modulus(k: &BigUint, n: u64) -> Result<OddModulus> {
    if k.is_zero() || k.is_even() {
        return Err(Error::invalid("Proth multiplier k must be odd and positive"));
    }
    if n == 0 || k.bits() > n {
        return Err(Error::invalid("Proth numbers need k < 2^n"));
    }
    Ok(OddModulus::special(SpecialForm::new(k.clone(), n, true)?))
}

/// Chebyshev analogue of Proth's theorem for `N = k·2^n + 1`, `k < 2^n`:
/// with a base where `ε = 1`, `δ = −1`, `N` is prime iff `ω^{(N−1)/2} ≡ −1`.
///
/// Bases are tried in increasing order from 2 up to `base_cap`.
pub fn proth_test(k: &BigUint, n: u64, base_cap: u64) -> Result<Verdict> {
    let m = proth_modulus(k, n)?;
    if let Some(v) = square_verdict(&m, None) {
        return Ok(v);
    }
    for a in 2..=base_cap.max(1) {
        let a = BigInt::from(a);
        match symbols(&a, &m) {
            Ok(s) if s.epsilon == 1 && s.delta == -1 => return Ok(proth_run(k, n, &a, &m, s)),
            Ok(_) => {}
            Err(e) => {
                if let Ok(v) = absorb_shared_factor(e, &m, &a) {
                    return Ok(v);
                }
            }
        }
    }
    Ok(Verdict::new(
        Status::Inconclusive,
        Reason::NoQualifyingBase,
        Certificate::default(),
    ))
}

/// [`proth_test`] with a caller-chosen base, which must have `ε = 1, δ = −1`.
pub fn proth_test_with_base(k: &BigUint, n: u64, a: &BigInt) -> Result<Verdict> {
    let m = proth_modulus(k, n)?;
    if let Some(v) = square_verdict(&m, Some(a)) {
        return Ok(v);
    }
    let s = match symbols(a, &m) {
        Ok(s) => s,
        Err(e) => return absorb_shared_factor(e, &m, a),
    };
    if s.epsilon != 1 {
        return Err(Error::precondition("Proth base needs epsilon = 1"));
    }
    if s.delta != -1 {
        return Err(Error::precondition("Proth base needs delta = -1"));
    }
    Ok(proth_run(k, n, a, &m, s))
}

fn proth_run(k: &BigUint, n: u64, a: &BigInt, m: &OddModulus, s: SymbolPair) -> Verdict {
    let pair = kernel::unit_pow(a, &ExponentForm::proth(k.clone(), n - 1, 0), m);
    let mut certificate = Certificate {
        base: Some(a.clone()),
        symbols: Some(s),
        ..Certificate::default()
    };
    if pair.is_minus_one() {
        certificate.order = Some(m.value() - 1u32);
        Verdict::new(Status::ProvedPrime, Reason::CongruencesHold, certificate)
    } else {
        Verdict::composite(Reason::FailedCongruence, certificate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use num_traits::ToPrimitive;

    fn m(q: u64) -> OddModulus {
        OddModulus::from_u64(q).unwrap()
    }

    fn b(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(
            symbols(&b(2), &m(11)),
            Ok(SymbolPair {
                epsilon: 1,
                delta: -1
            })
        );
        assert_eq!(
            symbols(&b(2), &m(31)),
            Ok(SymbolPair {
                epsilon: -1,
                delta: -1
            })
        );
        assert_eq!(symbols(&b(4), &m(9)), Err(Error::SharedFactor { gcd: big(3) }));
        assert_eq!(symbols(&b(8), &m(7)), Err(Error::SharedFactor { gcd: big(7) }));
    }

    #[test]
    fn base_test_examples() {
        assert_eq!(chebyshev_test(&m(11), &b(2)).unwrap().status, Status::ProbablePrime);
        assert!(chebyshev_test(&m(989), &b(2)).unwrap().passed());
        let v = chebyshev_test(&m(15), &b(2)).unwrap();
        assert_eq!(v.status, Status::ProvedComposite);
        assert_eq!(v.reason, Reason::SharedFactor);
        assert_eq!(v.certificate.witness, Some(big(3)));
    }

    #[test]
    fn base_test_rejects_squares_first() {
        let v = chebyshev_test(&m(10609), &b(2)).unwrap();
        assert_eq!(v.reason, Reason::PerfectSquare);
        assert_eq!(v.certificate.witness, Some(big(103)));
        // Without the filter 103² satisfies both congruences.
        assert!(congruences(&m(10609), &b(2)).unwrap().holds());
    }

    #[test]
    fn base_test_on_degenerate_base_is_an_error() {
        // 7 | 8² − 1, so the gcd is the modulus itself.
        assert!(matches!(
            chebyshev_test(&m(7), &b(8)),
            Err(Error::SharedFactor { .. })
        ));
    }

    fn signed_profile(q: u64, a: i64) -> Vec<i64> {
        let v = strong_test_unfiltered(&m(q), &b(a)).unwrap();
        v.certificate
            .profile
            .unwrap()
            .signed_entries(&big(q))
            .iter()
            .map(|x| x.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn strong_test_examples() {
        let v = strong_test(&m(15505), &b(2)).unwrap();
        assert_eq!(v.status, Status::ProvedComposite);
        assert_eq!(v.reason, Reason::ProfileRule);
        assert_eq!(signed_profile(15505, 2), [8416, 4431, 8861, 1]);

        assert!(strong_test(&m(2701), &b(2)).unwrap().passed());
        assert_eq!(signed_profile(2701, 2), [0, -1]);

        assert!(strong_test(&m(989), &b(2)).unwrap().passed());
        assert_eq!(signed_profile(989, 2), [1]);

        assert_eq!(
            strong_test(&m(18721), &b(2)).unwrap().reason,
            Reason::ProfileRule
        );
    }

    #[test]
    fn profile_rule_boundaries() {
        let q = big(101);
        let p = |e: &[u64]| Profile {
            entries: e.iter().map(|&x| big(x)).collect(),
        };
        assert_eq!(p(&[1]).rule_violation(&q), None);
        assert_eq!(p(&[100]).rule_violation(&q), None);
        assert_eq!(p(&[0, 100, 1]).rule_violation(&q), None);
        assert_eq!(p(&[5, 1]).rule_violation(&q), Some(1));
        assert_eq!(p(&[5, 100]).rule_violation(&q), Some(1));
        assert_eq!(p(&[0, 100, 1, 1, 7]).rule_violation(&q), None);
    }

    #[test]
    fn weak_test_examples() {
        assert!(weak_test(&m(31), &b(2)));
        assert!(weak_test(&m(989), &b(2)));
        assert!(!weak_test(&m(9), &b(2)));
    }

    #[test]
    fn mod_square_examples() {
        assert_eq!(mod_square_check(&m(11), &b(2)), Ok(true));
        assert_eq!(mod_square_check(&m(7), &b(3)), Ok(true));
        assert_eq!(mod_square_check(&m(5), &b(2)), Ok(true));
    }

    #[test]
    fn theorem1_examples() {
        let o = theorem1_check(2, 5, &b(2)).unwrap();
        assert_eq!((o.modulus.clone(), o.epsilon), (big(31), -1));
        assert_eq!(o.t_iterate, big(1));
        assert!(o.holds());

        let o = theorem1_check(-2, 5, &b(2)).unwrap();
        assert_eq!((o.modulus.clone(), o.epsilon), (big(11), 1));
        assert_eq!(o.t_iterate, big(7));
        assert!(o.holds());

        let o = theorem1_check(11, 3, &b(2)).unwrap();
        assert_eq!(o.modulus, big(133));
        assert!(o.t_holds());
    }

    #[test]
    fn theorem1_rejects_bad_input() {
        assert!(theorem1_check(2, 4, &b(2)).is_err());
        assert!(theorem1_check(1, 5, &b(2)).is_err());
        assert!(matches!(
            theorem1_check(-2, 3, &b(2)),
            Err(Error::SharedFactor { .. })
        ));
    }

    #[test]
    fn order_certificate_examples() {
        let v = order_certify(&m(31), &b(2), &[(big(2), 5)]).unwrap();
        assert_eq!(v.status, Status::ProvedPrime);
        assert_eq!(v.certificate.order, Some(big(32)));

        let v = order_certify(&m(11), &b(2), &[(big(2), 1), (big(5), 1)]).unwrap();
        assert_eq!(v.status, Status::ProvedPrime);

        for f in [
            vec![(big(2), 2), (big(13), 1), (big(19), 1)],
            vec![(big(2), 1), (big(3), 2), (big(5), 1), (big(11), 1)],
        ] {
            let r = order_certify(&m(989), &b(2), &f);
            assert!(!matches!(r, Ok(ref v) if v.status == Status::ProvedPrime));
        }
    }

    #[test]
    fn order_certificate_validates_input() {
        assert!(matches!(
            order_certify(&m(11), &b(2), &[(big(2), 1), (big(3), 1)]),
            Err(Error::InvalidArgument(_))
        ));
        // δ(2, 23) = +1
        assert!(matches!(
            order_certify(&m(23), &b(2), &[(big(2), 1), (big(11), 1)]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn proth_examples() {
        let v = proth_test(&big(3), 2, PROTH_BASE_CAP).unwrap();
        assert_eq!(v.status, Status::ProvedPrime);
        assert_eq!(v.certificate.base, Some(b(2)));

        let v = proth_test(&big(3), 4, PROTH_BASE_CAP).unwrap();
        assert_eq!(v.reason, Reason::PerfectSquare);
        assert_eq!(v.certificate.witness, Some(big(7)));

        let v = proth_test(&big(5), 3, 20).unwrap();
        assert_eq!(v.status, Status::ProvedPrime);
    }

    #[test]
    fn proth_rejects_large_multiplier() {
        assert!(proth_test(&big(5), 2, 200).is_err());
        assert!(proth_test(&big(4), 5, 200).is_err());
    }

    #[test]
    fn proth_with_fixed_base() {
        assert_eq!(
            proth_test_with_base(&big(3), 2, &b(2)).unwrap().status,
            Status::ProvedPrime
        );
        assert!(matches!(
            proth_test_with_base(&big(3), 2, &b(3)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn predicted_values_match_kernel_for_primes() {
        for q in [11u64, 13, 31, 43, 683, 2731] {
            let md = m(q);
            let s = symbols(&b(2), &md).unwrap();
            for e in [1u64, 7, 100, 1000, 65536] {
                assert_eq!(
                    predicted_t(&b(2), &md, s, &big(e)),
                    kernel::cheb_t(&b(2), &(e as i64).into(), &md),
                    "Q={q} e={e}"
                );
            }
        }
    }
}
