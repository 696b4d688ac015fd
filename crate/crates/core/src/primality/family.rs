//! Certifiers for numbers of special shape.
//!
//! Symbols are always taken from the concrete modulus; none of the
//! residue-class shortcuts are trusted.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{
    absorb_shared_factor, chebyshev_test, order_step, proth_test,
    proth_test_with_base, symbols, theorem1_check, Certificate, OrderStep, Reason, Status,
    SymbolPair, Verdict, PROTH_BASE_CAP,
};
use crate::arith::{self, OddModulus, SpecialForm};
use crate::error::{Error, Result};
use crate::kernel::{self, ExponentForm};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    /// `2^p − 1`
    Mersenne { p: u64 },
    /// `(2^p + 1)/3`
    Wagstaff { p: u64 },
    /// `(q^p − 1)/(q − 1)`
    GenMersenne { q: u64, p: u64 },
    /// `(q^p + 1)/(q + 1)`
    GenWagstaff { q: u64, p: u64 },
    /// `3·2^n ± 1`
    ThreeTimesPow { n: u64, sign: i8 },
    /// `(3^p − 1)/2` for `sign = −1`, `(3^p + 1)/4` for `sign = +1`
    Cubic { p: u64, sign: i8 },
    /// `r·2^n − 1` with `n ≡ (2 − r) mod 3 (mod 2)`
    Riesel { r: u64, n: u64 },
    /// `12·q^n + 1`
    TwelveQ { q: u64, n: u64 },
    /// `k·2^n + 1` with odd `k < 2^n`
    Proth { k: BigUint, n: u64 },
    /// `2^(2^n) + 1`
    Fermat { n: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyOptions {
    /// Replaces the family's default base where the criterion allows it.
    pub base: Option<BigInt>,
    /// Run the sufficiency half where the family has one.
    pub sufficiency: bool,
    /// Upper bound of the Proth base search.
    pub base_cap: u64,
}

impl Default for FamilyOptions {
    fn default() -> Self {
        FamilyOptions {
            base: None,
            sufficiency: false,
            base_cap: PROTH_BASE_CAP,
        }
    }
}

fn pow2(n: u64) -> Result<BigUint> {
    let n = usize::try_from(n).map_err(|_| Error::invalid("exponent too large"))?;
    Ok(BigUint::one() << n)
}

fn check_sign(sign: i8) -> Result<()> {
    if sign == 1 || sign == -1 {
        Ok(())
    } else {
        Err(Error::invalid("sign must be +1 or -1"))
    }
}

/// `(2 − r) mod 3`, the parity the exponent must have.
fn riesel_parity(r: u64) -> u64 {
    (2 + 3 - r % 3) % 3
}

fn is_squarefree_u64(r: u64) -> bool {
    arith::factor_u64(r).iter().all(|&(_, e)| e == 1)
}

fn pow_u64(q: u64, n: u64) -> Result<BigUint> {
    let n = usize::try_from(n).map_err(|_| Error::invalid("exponent too large"))?;
    Ok(num_traits::pow(BigUint::from(q), n))
}

impl FamilySpec {
    pub fn name(&self) -> &'static str {
        match self {
            FamilySpec::Mersenne { .. } => "mersenne",
            FamilySpec::Wagstaff { .. } => "wagstaff",
            FamilySpec::GenMersenne { .. } => "genmersenne",
            FamilySpec::GenWagstaff { .. } => "genwagstaff",
            FamilySpec::ThreeTimesPow { .. } => "three-pow",
            FamilySpec::Cubic { .. } => "cubic",
            FamilySpec::Riesel { .. } => "riesel",
            FamilySpec::TwelveQ { .. } => "twelveq",
            FamilySpec::Proth { .. } => "proth",
            FamilySpec::Fermat { .. } => "fermat",
        }
    }

    /// The integer described by the parameters, after validating them.
    pub fn target(&self) -> Result<BigUint> {
        let three = BigUint::from(3u32);
        let value = match self {
            FamilySpec::Mersenne { p } => {
                if *p < 3 {
                    return Err(Error::invalid("Mersenne exponent must be at least 3"));
                }
                pow2(*p)? - 1u32
            }
            FamilySpec::Wagstaff { p } => {
                if *p < 5 || p % 2 == 0 {
                    return Err(Error::invalid("Wagstaff exponent must be odd and at least 5"));
                }
                (pow2(*p)? + 1u32) / &three
            }
            FamilySpec::GenMersenne { q, p } | FamilySpec::GenWagstaff { q, p } => {
                if *q < 2 {
                    return Err(Error::invalid("q must be at least 2"));
                }
                if *p < 3 || !arith::is_prime_u64(*p) {
                    return Err(Error::invalid("p must be an odd prime"));
                }
                let q = i64::try_from(*q).map_err(|_| Error::invalid("q too large"))?;
                let signed = if matches!(self, FamilySpec::GenMersenne { .. }) { q } else { -q };
                super::cyclotomic_value(signed, *p)?
            }
            FamilySpec::ThreeTimesPow { n, sign } => {
                check_sign(*sign)?;
                if *n < 3 {
                    return Err(Error::invalid("n must be greater than 2"));
                }
                let base = pow2(*n)? * 3u32;
                if *sign > 0 {
                    base + 1u32
                } else {
                    base - 1u32
                }
            }
            FamilySpec::Cubic { p, sign } => {
                check_sign(*sign)?;
                if *p < 3 || !arith::is_prime_u64(*p) {
                    return Err(Error::invalid("p must be an odd prime"));
                }
                let power = pow_u64(3, *p)?;
                if *sign > 0 {
                    (power + 1u32) / 4u32
                } else {
                    (power - 1u32) / 2u32
                }
            }
            FamilySpec::Riesel { r, n } => {
                if r % 2 == 0 || r % 3 == 0 || !is_squarefree_u64(*r) {
                    return Err(Error::invalid(
                        "r must be odd, squarefree and not divisible by 3",
                    ));
                }
                if *n < 2 {
                    return Err(Error::invalid("exponent must be at least 2"));
                }
                if n % 2 != riesel_parity(*r) {
                    return Err(Error::invalid(format!(
                        "exponent must be congruent to {} mod 2 for r = {}",
                        riesel_parity(*r),
                        r
                    )));
                }
                pow2(*n)? * *r - 1u32
            }
            FamilySpec::TwelveQ { q, n } => {
                if *q < 3 || !arith::is_prime_u64(*q) {
                    return Err(Error::invalid("q must be an odd prime"));
                }
                if *n < 1 {
                    return Err(Error::invalid("n must be positive"));
                }
                pow_u64(*q, *n)? * 12u32 + 1u32
            }
            FamilySpec::Proth { k, n } => {
                if k.is_zero() || k.is_even() {
                    return Err(Error::invalid("Proth multiplier k must be odd and positive"));
                }
                if *n == 0 || k.bits() > *n {
                    return Err(Error::invalid("Proth numbers need k < 2^n"));
                }
                (k.clone() << *n as usize) + 1u32
            }
            FamilySpec::Fermat { n } => {
                if *n < 2 || *n > 40 {
                    return Err(Error::invalid("Fermat index must be in 2..=40"));
                }
                pow2(1u64 << n)? + 1u32
            }
        };
        if value <= three {
            return Err(Error::invalid("family member must exceed 3"));
        }
        Ok(value)
    }
}

fn no_override(opts: &FamilyOptions, spec: &FamilySpec) -> Result<()> {
    match opts.base {
        Some(_) => Err(Error::invalid(format!(
            "the {} criterion is tied to its own base",
            spec.name()
        ))),
        None => Ok(()),
    }
}

fn cert(a: &BigInt, s: Option<SymbolPair>) -> Certificate {
    Certificate {
        base: Some(a.clone()),
        symbols: s,
        ..Certificate::default()
    }
}

fn doubled(t: &BigUint, m: &OddModulus) -> BigUint {
    (t << 1u32) % m.value()
}

/// Runs the certifier for `spec`.
pub fn family_test(spec: &FamilySpec, opts: &FamilyOptions) -> Result<Verdict> {
    let q = spec.target()?;
    match spec {
        FamilySpec::Mersenne { p } => mersenne(*p, opts),
        FamilySpec::Wagstaff { p } => wagstaff(*p, q, opts),
        FamilySpec::GenMersenne { q: base, p } => gen_cyclotomic(*base as i64, *p, opts),
        FamilySpec::GenWagstaff { q: base, p } => gen_cyclotomic(-(*base as i64), *p, opts),
        FamilySpec::ThreeTimesPow { n, sign } => {
            no_override(opts, spec)?;
            three_times_pow(*n, *sign, q)
        }
        FamilySpec::Cubic { p, sign } => cubic(*p, *sign, opts),
        FamilySpec::Riesel { r, n } => {
            no_override(opts, spec)?;
            riesel(*r, *n, opts.sufficiency)
        }
        FamilySpec::TwelveQ { q: base, n } => {
            no_override(opts, spec)?;
            twelve_q(*base, *n, q, opts.sufficiency)
        }
        FamilySpec::Proth { k, n } => match &opts.base {
            Some(a) => proth_test_with_base(k, *n, a),
            None => proth_test(k, *n, opts.base_cap),
        },
        FamilySpec::Fermat { n } => {
            no_override(opts, spec)?;
            fermat(*n)
        }
    }
}

/// `2^p − 1` is prime iff `T_{2^{p−2}}(a) ≡ 0` for any base with `ε = δ = −1`.
fn mersenne(p: u64, opts: &FamilyOptions) -> Result<Verdict> {
    let m = OddModulus::special(SpecialForm::mersenne(p)?);
    let a = opts.base.clone().unwrap_or_else(|| BigInt::from(2));
    let s = match symbols(&a, &m) {
        Ok(s) => s,
        Err(e) => return absorb_shared_factor(e, &m, &a),
    };
    if opts.base.is_some() {
        if s.epsilon != -1 {
            return Err(Error::precondition("base needs epsilon = -1"));
        }
        if s.delta != -1 {
            return Err(Error::precondition("base needs delta = -1"));
        }
    }
    let t = kernel::cheb_t(&a, &ExponentForm::proth(1u32, p - 2, 0), &m);
    let mut c = cert(&a, Some(s));
    c.residue = Some(doubled(&t, &m));
    if t.is_zero() {
        c.order = Some(m.value() + 1u32);
        Ok(Verdict::new(Status::ProvedPrime, Reason::OrderCertificate, c))
    } else {
        Ok(Verdict::new(Status::ProvedComposite, Reason::FailedCongruence, c))
    }
}

/// Necessity only: `ω^{(Q−ε)/2} ≡ δ`. The residue is `s_{p−1} = 2T_{2^{p−1}}(a)`.
fn wagstaff(p: u64, q: BigUint, opts: &FamilyOptions) -> Result<Verdict> {
    let m = OddModulus::new(q)?;
    let a = opts.base.clone().unwrap_or_else(|| BigInt::from(2));
    let mut v = chebyshev_test(&m, &a)?;
    let t = kernel::cheb_t(&a, &ExponentForm::proth(1u32, p - 1, 0), &m);
    v.certificate.residue = Some(doubled(&t, &m));
    Ok(v)
}

/// Both congruences of the cyclotomic theorem; the residue is
/// `s_p = T_{q^p}(a)` with `s_0 = a`.
fn gen_cyclotomic(q: i64, p: u64, opts: &FamilyOptions) -> Result<Verdict> {
    let a = opts.base.clone().unwrap_or_else(|| BigInt::from(2));
    let o = match theorem1_check(q, p, &a) {
        Ok(o) => o,
        Err(e) => {
            let m = OddModulus::new(super::cyclotomic_value(q, p)?)?;
            return absorb_shared_factor(e, &m, &a);
        }
    };
    let holds = o.holds();
    let mut c = cert(&a, None);
    c.residue = Some(o.t_iterate);
    Ok(if holds {
        Verdict::new(Status::ProbablePrime, Reason::CongruencesHold, c)
    } else {
        Verdict::new(Status::ProvedComposite, Reason::FailedCongruence, c)
    })
}

/// With `s = s_{n−1} = 2T_{2^{n−1}}(2)`: `3·2^n − 1` prime implies
/// `s³ − 3s − 4 ≡ 0`, and `3·2^n + 1` prime implies `(s + 1)(s − 2) ≡ 0`.
fn three_times_pow(n: u64, sign: i8, q: BigUint) -> Result<Verdict> {
    let form = SpecialForm::new(BigUint::from(3u32), n, sign > 0)?;
    let m = OddModulus::special(form);
    let a = BigInt::from(2);
    let t = kernel::cheb_t(&a, &ExponentForm::proth(1u32, n - 1, 0), &m);
    let s = doubled(&t, &m);
    let value = if sign < 0 {
        (&s * &s * &s + &q * 4u32 - &s * 3u32 - 4u32) % &q
    } else {
        ((&s + 1u32) * (&s + &q - 2u32)) % &q
    };
    let mut c = cert(&a, None);
    c.residue = Some(s);
    Ok(if value.is_zero() {
        Verdict::new(Status::ProbablePrime, Reason::CongruencesHold, c)
    } else {
        Verdict::new(Status::ProvedComposite, Reason::FailedCongruence, c)
    })
}

/// `s_0 = a`, `s_{k+1} = T_3(s_k)`; prime `Q` gives `s_p ≡ T_{±3+ε−1}(a)`.
fn cubic(p: u64, sign: i8, opts: &FamilyOptions) -> Result<Verdict> {
    let q = if sign > 0 { -3 } else { 3 };
    let a = opts.base.clone().unwrap_or_else(|| BigInt::from(2));
    let o = match theorem1_check(q, p, &a) {
        Ok(o) => o,
        Err(e) => {
            let m = OddModulus::new(super::cyclotomic_value(q, p)?)?;
            return absorb_shared_factor(e, &m, &a);
        }
    };
    let holds = o.t_holds();
    let mut c = cert(&a, None);
    c.residue = Some(o.t_iterate);
    Ok(if holds {
        Verdict::new(Status::ProbablePrime, Reason::CongruencesHold, c)
    } else {
        Verdict::new(Status::ProvedComposite, Reason::FailedCongruence, c)
    })
}

/// Checks `ω^e ≢ 1` modulo every prime factor for each exponent. `None`
/// means all clear.
fn sufficiency(
    a: &BigInt,
    m: &OddModulus,
    exponents: &[ExponentForm],
    c: &mut Certificate,
) -> Option<Verdict> {
    for e in exponents {
        match order_step(a, m, e) {
            OrderStep::Clear => {}
            OrderStep::Factor(g) => {
                c.witness = Some(g);
                return Some(Verdict::new(
                    Status::ProvedComposite,
                    Reason::SharedFactor,
                    c.clone(),
                ));
            }
            OrderStep::Unresolved => {
                return Some(Verdict::new(
                    Status::Inconclusive,
                    Reason::OrderUnresolved,
                    c.clone(),
                ))
            }
        }
    }
    None
}

/// `Q = r·2^n − 1`. Necessity `T_{r·2^{n−2}}(2) ≡ 0`; sufficiency
/// `ω^{(r/r_j)·2^n} ≢ 1` for every prime `r_j | r`.
///
/// The necessity route assumes `ε = δ = −1`, which fails for the smallest
/// exponents; there the plain Chebyshev test is used and no proof is
/// attempted.
fn riesel(r: u64, n: u64, want_proof: bool) -> Result<Verdict> {
    let m = OddModulus::special(SpecialForm::new(BigUint::from(r), n, false)?);
    let a = BigInt::from(2);
    let s = match symbols(&a, &m) {
        Ok(s) => s,
        Err(e) => return absorb_shared_factor(e, &m, &a),
    };
    if s.epsilon != -1 || s.delta != -1 {
        let mut v = chebyshev_test(&m, &a)?;
        if v.passed() && want_proof {
            v = Verdict::new(Status::Inconclusive, Reason::SymbolMismatch, v.certificate);
        }
        return Ok(v);
    }
    let t = kernel::cheb_t(&a, &ExponentForm::proth(r, n - 2, 0), &m);
    let mut c = cert(&a, Some(s));
    c.residue = Some(t.clone());
    if !t.is_zero() {
        return Ok(Verdict::new(Status::ProvedComposite, Reason::FailedCongruence, c));
    }
    if !want_proof {
        return Ok(Verdict::new(Status::ProbablePrime, Reason::CongruencesHold, c));
    }
    let exponents: Vec<ExponentForm> = arith::factor_u64(r)
        .iter()
        .map(|&(rj, _)| ExponentForm::proth(r / rj, n, 0))
        .collect();
    if let Some(v) = sufficiency(&a, &m, &exponents, &mut c) {
        return Ok(v);
    }
    c.order = Some(m.value() + 1u32);
    Ok(Verdict::new(Status::ProvedPrime, Reason::OrderCertificate, c))
}

/// `Q = 12·q^n + 1`. Necessity `T_{3q^n}(2) ≡ 0`; sufficiency
/// `ω^{4q^n} ≢ 1` and `ω^{12q^{n−1}} ≢ 1`.
fn twelve_q(q: u64, n: u64, value: BigUint, want_proof: bool) -> Result<Verdict> {
    let m = OddModulus::new(value)?;
    let a = BigInt::from(2);
    let qn = pow_u64(q, n)?;
    let t = kernel::cheb_t(&a, &ExponentForm::from(&qn * 3u32), &m);
    let mut c = cert(&a, symbols(&a, &m).ok());
    c.residue = Some(t.clone());
    if !t.is_zero() {
        return Ok(Verdict::new(Status::ProvedComposite, Reason::FailedCongruence, c));
    }
    if !want_proof {
        return Ok(Verdict::new(Status::ProbablePrime, Reason::CongruencesHold, c));
    }
    let exponents = [
        ExponentForm::from(&qn * 4u32),
        ExponentForm::from(pow_u64(q, n - 1)? * 12u32),
    ];
    if let Some(v) = sufficiency(&a, &m, &exponents, &mut c) {
        return Ok(v);
    }
    c.order = Some(m.value() - 1u32);
    Ok(Verdict::new(Status::ProvedPrime, Reason::OrderCertificate, c))
}

/// `F_n` is prime iff `T_{2^{2^n−2}}(4) ≡ 0`; in doubled form `s_0 = 8`,
/// `s_{k+1} = s_k² − 2` and `F_n | s_{2^n−2}`.
fn fermat(n: u64) -> Result<Verdict> {
    let exp = 1u64 << n;
    let m = OddModulus::special(SpecialForm::new(BigUint::one(), exp, true)?);
    let a = BigInt::from(4);
    let t = kernel::cheb_t(&a, &ExponentForm::proth(1u32, exp - 2, 0), &m);
    let mut c = cert(&a, symbols(&a, &m).ok());
    c.residue = Some(doubled(&t, &m));
    if t.is_zero() {
        c.order = Some(m.value() - 1u32);
        Ok(Verdict::new(Status::ProvedPrime, Reason::OrderCertificate, c))
    } else {
        Ok(Verdict::new(Status::ProvedComposite, Reason::FailedCongruence, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::trial_division_oracle;

    fn run(spec: FamilySpec) -> Verdict {
        family_test(&spec, &FamilyOptions::default()).unwrap()
    }

    fn proof(spec: FamilySpec) -> Verdict {
        let opts = FamilyOptions {
            sufficiency: true,
            ..FamilyOptions::default()
        };
        family_test(&spec, &opts).unwrap()
    }

    #[test]
    fn mersenne_examples() {
        let v = run(FamilySpec::Mersenne { p: 5 });
        assert_eq!(v.status, Status::ProvedPrime);
        assert_eq!(v.certificate.residue, Some(BigUint::zero()));
        assert_eq!(run(FamilySpec::Mersenne { p: 7 }).status, Status::ProvedPrime);
        assert_eq!(run(FamilySpec::Mersenne { p: 11 }).status, Status::ProvedComposite);
    }

    #[test]
    fn mersenne_against_oracle() {
        for p in 3..=40u64 {
            let q = FamilySpec::Mersenne { p }.target().unwrap();
            let prime = trial_division_oracle(&q, None).is_prime();
            assert_eq!(run(FamilySpec::Mersenne { p }).passed(), prime, "p={p}");
        }
    }

    #[test]
    fn mersenne_alternative_base() {
        // a = 1 + x² with a + 1 = 6y²
        let opts = FamilyOptions {
            base: Some(BigInt::from(5)),
            ..FamilyOptions::default()
        };
        for p in [3u64, 5, 7, 13, 17, 19, 31] {
            let v = family_test(&FamilySpec::Mersenne { p }, &opts).unwrap();
            assert_eq!(v.status, Status::ProvedPrime, "p={p}");
        }
        let bad = FamilyOptions {
            base: Some(BigInt::from(3)),
            ..FamilyOptions::default()
        };
        assert!(matches!(
            family_test(&FamilySpec::Mersenne { p: 7 }, &bad),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn wagstaff_example() {
        let v = run(FamilySpec::Wagstaff { p: 7 });
        assert_eq!(v.status, Status::ProbablePrime);
        assert_eq!(v.certificate.residue, Some(BigUint::from(14u32)));
    }

    #[test]
    fn fermat_examples() {
        for n in 2..=4 {
            assert_eq!(run(FamilySpec::Fermat { n }).status, Status::ProvedPrime);
        }
        assert_eq!(run(FamilySpec::Fermat { n: 5 }).status, Status::ProvedComposite);
        assert_eq!(run(FamilySpec::Fermat { n: 6 }).status, Status::ProvedComposite);
    }

    #[test]
    fn three_times_pow_example() {
        let v = run(FamilySpec::ThreeTimesPow { n: 3, sign: -1 });
        assert_eq!(v.status, Status::ProbablePrime);
        assert_eq!(v.certificate.residue, Some(BigUint::from(10u32)));
    }

    #[test]
    fn three_times_pow_primes_pass() {
        for n in 3..=45u64 {
            for sign in [-1i8, 1] {
                let spec = FamilySpec::ThreeTimesPow { n, sign };
                let q = spec.target().unwrap();
                if trial_division_oracle(&q, None).is_prime() {
                    assert!(run(spec).passed(), "n={n} sign={sign}");
                }
            }
        }
    }

    #[test]
    fn cubic_example() {
        let v = run(FamilySpec::Cubic { p: 3, sign: 1 });
        assert_eq!(v.status, Status::ProbablePrime);
        assert_eq!(v.certificate.residue, Some(BigUint::from(5u32)));
    }

    #[test]
    fn riesel_validation() {
        assert!(FamilySpec::Riesel { r: 5, n: 3 }.target().is_err());
        assert!(FamilySpec::Riesel { r: 9, n: 2 }.target().is_err());
        assert!(FamilySpec::Riesel { r: 25, n: 2 }.target().is_err());
        assert_eq!(
            FamilySpec::Riesel { r: 5, n: 4 }.target().unwrap(),
            BigUint::from(79u32)
        );
    }

    #[test]
    fn riesel_five() {
        assert_eq!(proof(FamilySpec::Riesel { r: 5, n: 18 }).status, Status::Inconclusive);
        assert_eq!(proof(FamilySpec::Riesel { r: 5, n: 4 }).status, Status::ProvedPrime);
        assert_eq!(proof(FamilySpec::Riesel { r: 5, n: 6 }).status, Status::ProvedComposite);
        assert_eq!(run(FamilySpec::Riesel { r: 5, n: 18 }).status, Status::ProbablePrime);
    }

    #[test]
    fn twelve_q_five() {
        assert_eq!(proof(FamilySpec::TwelveQ { q: 5, n: 5 }).status, Status::ProvedPrime);
        assert_eq!(proof(FamilySpec::TwelveQ { q: 5, n: 2 }).status, Status::ProvedComposite);
    }

    #[test]
    fn proth_delegates() {
        let v = run(FamilySpec::Proth {
            k: BigUint::from(3u32),
            n: 2,
        });
        assert_eq!(v.status, Status::ProvedPrime);
    }

    #[test]
    fn base_override_rejected_where_fixed() {
        let opts = FamilyOptions {
            base: Some(BigInt::from(3)),
            ..FamilyOptions::default()
        };
        assert!(family_test(&FamilySpec::Fermat { n: 3 }, &opts).is_err());
    }
}
