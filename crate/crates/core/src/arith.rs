//! Integer utilities: Jacobi symbol, perfect squares, special-form
//! reduction and a deliberately naive trial-division oracle.

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::{Integer, Roots};
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest trial divisor the oracle will ever try.
pub const ORACLE_DIVISOR_CAP: u64 = 1 << 32;

/// Low 64 bits of `n`.
pub(crate) fn low_u64(n: &BigUint) -> u64 {
    n.iter_u64_digits().next().unwrap_or(0)
}

/// Canonical residue of a signed integer in `[0, m)`.
pub fn residue(a: &BigInt, m: &BigUint) -> BigUint {
    let r = a.magnitude() % m;
    if a.sign() == Sign::Minus && !r.is_zero() {
        m - r
    } else {
        r
    }
}

/// A modulus of shape `k·2^n + 1` or `k·2^n − 1` with `k` odd.
#[derive(Clone, PartialEq, Eq)]
pub struct SpecialForm {
    k: BigUint,
    n: u64,
    plus: bool,
    value: BigUint,
    mask: BigUint,
}

impl SpecialForm {
    pub fn new(k: BigUint, n: u64, plus: bool) -> Result<Self> {
        if k.is_zero() || k.is_even() {
            return Err(Error::invalid("special form needs an odd multiplier k"));
        }
        if n == 0 {
            return Err(Error::invalid("special form needs an exponent n >= 1"));
        }
        let shifted = &k << n;
        let value = if plus { shifted + 1u32 } else { shifted - 1u32 };
        if value < BigUint::from(3u32) {
            return Err(Error::invalid("special form evaluates to a modulus below 3"));
        }
        let mask = (BigUint::one() << n) - 1u32;
        Ok(SpecialForm {
            k,
            n,
            plus,
            value,
            mask,
        })
    }

    /// `2^p − 1`.
    pub fn mersenne(p: u64) -> Result<Self> {
        Self::new(BigUint::one(), p, false)
    }

    pub fn k(&self) -> &BigUint {
        &self.k
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn is_plus(&self) -> bool {
        self.plus
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    /// `x mod (k·2^n ± 1)` by folding the high part onto the low part:
    /// `k·2^n ≡ ∓1`.
    pub fn reduce(&self, mut x: BigUint) -> BigUint {
        let q = &self.value;
        loop {
            if &x < q {
                return x;
            }
            let hi = &x >> self.n;
            let lo = &x & &self.mask;
            let (qk, rk) = if self.k.is_one() {
                (hi, BigUint::zero())
            } else {
                hi.div_rem(&self.k)
            };
            if qk.is_zero() {
                // Q <= x < k·2^n, only reachable for the minus shape.
                return x - q;
            }
            let pos = (rk << self.n) | lo;
            if self.plus {
                let a = self.reduce(pos);
                let b = self.reduce(qk);
                return if a >= b { a - b } else { a + q - b };
            }
            x = pos + qk;
        }
    }
}

impl fmt::Debug for SpecialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.plus { '+' } else { '-' };
        write!(f, "{}*2^{}{}1", self.k, self.n, sign)
    }
}

/// `x mod Q` for a special-shape `Q`. Identical to generic reduction.
pub fn reduce_special(x: &BigUint, form: &SpecialForm) -> BigUint {
    form.reduce(x.clone())
}

/// An odd modulus `Q ≥ 3`, optionally tagged with a special shape that
/// enables bit-fold reduction.
#[derive(Clone)]
pub struct OddModulus {
    value: BigUint,
    form: Option<SpecialForm>,
    small: Option<u64>,
}

impl OddModulus {
    pub fn new(value: BigUint) -> Result<Self> {
        if value.is_even() || value < BigUint::from(3u32) {
            return Err(Error::invalid("modulus must be odd and at least 3"));
        }
        let small = value.to_u64();
        Ok(OddModulus {
            value,
            form: None,
            small,
        })
    }

    pub fn from_u64(value: u64) -> Result<Self> {
        Self::new(BigUint::from(value))
    }

    pub fn special(form: SpecialForm) -> Self {
        let value = form.value().clone();
        let small = value.to_u64();
        OddModulus {
            value,
            form: Some(form),
            small,
        }
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn form(&self) -> Option<&SpecialForm> {
        self.form.as_ref()
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.small
    }

    /// Canonical reduction into `[0, Q)`.
    pub fn reduce(&self, x: BigUint) -> BigUint {
        match &self.form {
            Some(form) => form.reduce(x),
            None => x % &self.value,
        }
    }

    pub fn residue_of(&self, a: &BigInt) -> BigUint {
        residue(a, &self.value)
    }

    /// `Q − 1`, the canonical representative of −1.
    pub fn minus_one(&self) -> BigUint {
        &self.value - 1u32
    }

    /// `δ ∈ {−1, +1}` as a canonical residue.
    pub fn sign_residue(&self, sign: i8) -> BigUint {
        if sign < 0 {
            self.minus_one()
        } else {
            BigUint::one()
        }
    }

    /// The modulus `Q²`, used for the mod-square strengthening.
    pub fn squared(&self) -> OddModulus {
        let value = &self.value * &self.value;
        let small = value.to_u64();
        OddModulus {
            value,
            form: None,
            small,
        }
    }
}

impl PartialEq for OddModulus {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for OddModulus {}

impl fmt::Debug for OddModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            Some(form) => write!(f, "OddModulus({} = {:?})", self.value, form),
            None => write!(f, "OddModulus({})", self.value),
        }
    }
}

/// Jacobi symbol `(a | n)` for odd `n ≥ 1`.
pub fn jacobi(a: &BigInt, n: &BigUint) -> Result<i8> {
    if n.is_zero() || n.is_even() {
        return Err(Error::invalid("Jacobi symbol needs an odd positive modulus"));
    }
    let mut num = residue(a, n);
    let mut den = n.clone();
    let mut sign = 1i8;
    loop {
        if den.is_one() {
            return Ok(sign);
        }
        num %= &den;
        if num.is_zero() {
            return Ok(0);
        }
        let twos = num.trailing_zeros().unwrap_or(0);
        if twos & 1 == 1 {
            let d8 = low_u64(&den) & 7;
            if d8 == 3 || d8 == 5 {
                sign = -sign;
            }
        }
        num >>= twos;
        if low_u64(&num) & 3 == 3 && low_u64(&den) & 3 == 3 {
            sign = -sign;
        }
        core::mem::swap(&mut num, &mut den);
    }
}

/// Jacobi symbol for machine-word arguments.
pub fn jacobi_i64(a: i64, n: u64) -> Result<i8> {
    jacobi(&BigInt::from(a), &BigUint::from(n))
}

/// `Some(root)` iff `n = root²`.
pub fn is_perfect_square(n: &BigUint) -> Option<BigUint> {
    // Quadratic residues mod 64 reject most non-squares without a sqrt.
    const SQUARES_MOD_64: u64 = 0x0202_0212_0203_0213;
    if (SQUARES_MOD_64 >> (low_u64(n) & 63)) & 1 == 0 {
        return None;
    }
    let root = n.sqrt();
    if &root * &root == *n {
        Some(root)
    } else {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleStatus {
    Prime,
    Composite,
    Unknown,
}

/// Result of the trial-division oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleVerdict {
    pub status: OracleStatus,
    /// Smallest factor found, only for `Composite`.
    pub witness_factor: Option<BigUint>,
}

impl OracleVerdict {
    fn prime() -> Self {
        OracleVerdict {
            status: OracleStatus::Prime,
            witness_factor: None,
        }
    }

    fn unknown() -> Self {
        OracleVerdict {
            status: OracleStatus::Unknown,
            witness_factor: None,
        }
    }

    fn composite(f: BigUint) -> Self {
        OracleVerdict {
            status: OracleStatus::Composite,
            witness_factor: Some(f),
        }
    }

    pub fn is_prime(&self) -> bool {
        self.status == OracleStatus::Prime
    }

    pub fn is_composite(&self) -> bool {
        self.status == OracleStatus::Composite
    }
}

/// Trial division by every candidate up to `min(bound, ⌊√n⌋, 2^32)`.
///
/// Independent of every Chebyshev code path; tests use it as ground truth.
pub fn trial_division_oracle(n: &BigUint, bound: Option<u64>) -> OracleVerdict {
    if n < &BigUint::from(2u32) {
        return OracleVerdict::unknown();
    }
    let root = n.sqrt();
    let root_small = root.to_u64().unwrap_or(u64::MAX);
    let limit = root_small
        .min(bound.unwrap_or(u64::MAX))
        .min(ORACLE_DIVISOR_CAP);
    let found = if let Some(m) = n.to_u64() {
        smallest_factor_u64(m, limit)
    } else if let Some(m) = n.to_u128() {
        first_divisor(limit, |d| m % u128::from(d) == 0)
    } else {
        first_divisor(limit, |d| (n % d).is_zero())
    };
    match found {
        Some(d) => OracleVerdict::composite(BigUint::from(d)),
        None if BigUint::from(limit) >= root => OracleVerdict::prime(),
        None => OracleVerdict::unknown(),
    }
}

fn first_divisor(limit: u64, divides: impl Fn(u64) -> bool) -> Option<u64> {
    if limit >= 2 && divides(2) {
        return Some(2);
    }
    let mut d = 3u64;
    while d <= limit {
        if divides(d) {
            return Some(d);
        }
        d += 2;
    }
    None
}

fn smallest_factor_u64(n: u64, limit: u64) -> Option<u64> {
    first_divisor(limit, |d| n % d == 0)
}

/// Trial-division primality for machine words.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let root = n.sqrt();
    smallest_factor_u64(n, root).is_none()
}

/// Complete factorisation of `n` by trial division, ascending primes.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Complete factorisation of an arbitrary-precision integer, provided
/// every prime factor but the largest is below `bound`.
pub fn factor_big(n: &BigUint, bound: u64) -> Option<Vec<(BigUint, u32)>> {
    if let Some(m) = n.to_u64() {
        if m.sqrt() <= bound {
            return Some(
                factor_u64(m)
                    .into_iter()
                    .map(|(p, e)| (BigUint::from(p), e))
                    .collect(),
            );
        }
    }
    let mut rest = n.clone();
    let mut out = Vec::new();
    let mut d = 2u64;
    while d <= bound {
        let dd = BigUint::from(d);
        if (&dd * &dd).cmp(&rest) == Ordering::Greater {
            break;
        }
        if (&rest % d).is_zero() {
            let mut e = 0;
            while (&rest % d).is_zero() {
                rest /= d;
                e += 1;
            }
            out.push((dd, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if rest.is_one() {
        return Some(out);
    }
    let d = BigUint::from(d);
    if &d * &d > rest {
        out.push((rest, 1));
        Some(out)
    } else {
        None
    }
}

/// Multiplicative order of `base` modulo the odd prime `p`.
pub fn multiplicative_order_u64(base: u64, p: u64) -> Option<u64> {
    if p < 2 || base % p == 0 {
        return None;
    }
    let mut order = p - 1;
    for (f, _) in factor_u64(p - 1) {
        while order % f == 0 && pow_mod_u64(base, order / f, p) == 1 {
            order /= f;
        }
    }
    (pow_mod_u64(base, order, p) == 1).then_some(order)
}

pub fn pow_mod_u64(base: u64, mut exp: u64, m: u64) -> u64 {
    let m128 = u128::from(m);
    let mut b = u128::from(base) % m128;
    let mut acc = 1u128 % m128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        exp >>= 1;
    }
    acc as u64
}

/// Decimal digit count of the representative of `r` in `(−m/2, m/2]`.
pub fn centered_digits(r: &BigUint, m: &BigUint) -> usize {
    let half = m >> 1;
    let magnitude = if r > &half { m - r } else { r.clone() };
    magnitude.to_str_radix(10).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi_i64(1, 9), Ok(1));
        assert_eq!(jacobi_i64(3, 11), Ok(1));
        assert_eq!(jacobi_i64(6, 11), Ok(-1));
        assert_eq!(jacobi_i64(3, 15), Ok(0));
    }

    #[test]
    fn jacobi_rejects_even_or_zero_modulus() {
        assert!(matches!(jacobi_i64(3, 10), Err(Error::InvalidArgument(_))));
        assert!(matches!(jacobi_i64(3, 0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn jacobi_negative_numerator() {
        // (−1 | n) = (−1)^((n−1)/2)
        assert_eq!(jacobi_i64(-1, 5), Ok(1));
        assert_eq!(jacobi_i64(-1, 7), Ok(-1));
        assert_eq!(jacobi_i64(-3, 7), Ok(1));
    }

    #[test]
    fn jacobi_against_square_enumeration() {
        for p in [3u64, 5, 7, 11, 13, 101] {
            for a in 0..p {
                let is_square = (1..p).any(|x| x * x % p == a);
                let expected = if a == 0 {
                    0
                } else if is_square {
                    1
                } else {
                    -1
                };
                assert_eq!(jacobi_i64(a as i64, p), Ok(expected), "({a}|{p})");
            }
        }
    }

    #[test]
    fn perfect_squares() {
        assert_eq!(is_perfect_square(&big(10609)), Some(big(103)));
        assert_eq!(is_perfect_square(&big(2)), None);
        assert_eq!(is_perfect_square(&big(0)), Some(big(0)));
        assert_eq!(is_perfect_square(&big(1)), Some(big(1)));
        assert_eq!(is_perfect_square(&big(48)), None);
    }

    #[test]
    fn oracle_examples() {
        let v = trial_division_oracle(&big(989), None);
        assert_eq!(v.status, OracleStatus::Composite);
        assert_eq!(v.witness_factor, Some(big(23)));
        let v = trial_division_oracle(&big(133), None);
        assert_eq!(v.witness_factor, Some(big(7)));
        assert!(trial_division_oracle(&big(31), None).is_prime());
        assert!(trial_division_oracle(&big(2), None).is_prime());
        assert_eq!(
            trial_division_oracle(&big(4), None).witness_factor,
            Some(big(2))
        );
    }

    #[test]
    fn oracle_reports_unknown_below_bound() {
        // 10403 = 101 · 103
        let v = trial_division_oracle(&big(10403), Some(50));
        assert_eq!(v.status, OracleStatus::Unknown);
        let v = trial_division_oracle(&big(10403), Some(101));
        assert_eq!(v.witness_factor, Some(big(101)));
    }

    #[test]
    fn oracle_on_wide_inputs() {
        // F_6 = 274177 · 67280421310721
        let f6 = (BigUint::one() << 64u32) + 1u32;
        let v = trial_division_oracle(&f6, None);
        assert_eq!(v.witness_factor, Some(big(274177)));
        let m = (BigUint::one() << 127u32) - 1u32;
        assert_eq!(
            trial_division_oracle(&m, Some(1000)).status,
            OracleStatus::Unknown
        );
    }

    #[test]
    fn special_reduction_examples() {
        let m5 = SpecialForm::mersenne(5).unwrap();
        assert_eq!(reduce_special(&(BigUint::one() << 5u32), &m5), big(1));
        assert_eq!(reduce_special(&big(37634), &m5), big(0));
        assert_eq!(reduce_special(&big(0), &m5), big(0));
        assert_eq!(reduce_special(&big(31), &m5), big(0));
    }

    #[test]
    fn special_form_validation() {
        assert!(SpecialForm::new(big(2), 5, true).is_err());
        assert!(SpecialForm::new(big(0), 5, true).is_err());
        assert!(SpecialForm::new(big(3), 0, true).is_err());
        assert!(SpecialForm::mersenne(1).is_err());
        assert_eq!(SpecialForm::new(big(1), 1, true).unwrap().value(), &big(3));
    }

    #[test]
    fn modulus_validation() {
        assert!(OddModulus::from_u64(1).is_err());
        assert!(OddModulus::from_u64(10).is_err());
        assert!(OddModulus::from_u64(3).is_ok());
    }

    #[test]
    fn factorisation() {
        assert_eq!(factor_u64(15505), [(5, 1), (7, 1), (443, 1)]);
        assert_eq!(factor_u64(10609), [(103, 2)]);
        assert_eq!(factor_u64(1), []);
        let f = factor_big(&big(988), 100).unwrap();
        assert_eq!(f, [(big(2), 2), (big(13), 1), (big(19), 1)]);
    }

    #[test]
    fn orders_of_two() {
        let orders: Vec<u64> = [3u64, 5, 7, 13, 19, 37, 73]
            .iter()
            .map(|&p| multiplicative_order_u64(2, p).unwrap())
            .collect();
        assert_eq!(orders, [2, 4, 3, 12, 18, 36, 9]);
    }

    #[test]
    fn centered_digit_counts() {
        assert_eq!(centered_digits(&big(0), &big(31)), 1);
        assert_eq!(centered_digits(&big(30), &big(31)), 1);
        assert_eq!(centered_digits(&big(15), &big(31)), 2);
        assert_eq!(centered_digits(&big(16), &big(31)), 2);
    }
}
