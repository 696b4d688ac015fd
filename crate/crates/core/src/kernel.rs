//! Evaluation of Chebyshev pairs `(T_n(a), U_{n−1}(a)) mod Q`.
//!
//! Pairs `(t, u)` stand for `t + u·√D` with `D = a² − 1` and multiply as
//! `(t₁t₂ + D·u₁u₂, t₁u₂ + t₂u₁)`. The unit `ω = (a, 1)` has conjugate
//! `ω̄ = (a, −1)` and `ω·ω̄ = 1`, so negative powers are conjugates:
//! `T_{−n} = T_n` and `U_{−n} = −U_{n−2}`.

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::OddModulus;
use crate::error::{Error, Result};

/// An exponent, possibly given in a shape that admits faster evaluation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExponentForm {
    Literal(BigInt),
    /// `q^p + c`, evaluated by `p` compositions of `x ↦ x^|q|`.
    PowerOffset { q: i64, p: u64, c: i64 },
    /// `k·2^n + c`, evaluated by powering over `k` then `n` squarings.
    ProthForm { k: BigUint, n: u64, c: i64 },
}

impl ExponentForm {
    pub fn power_offset(q: i64, p: u64, c: i64) -> Self {
        ExponentForm::PowerOffset { q, p, c }
    }

    pub fn proth(k: impl Into<BigUint>, n: u64, c: i64) -> Self {
        ExponentForm::ProthForm { k: k.into(), n, c }
    }

    /// The integer this form denotes.
    pub fn value(&self) -> BigInt {
        match self {
            ExponentForm::Literal(n) => n.clone(),
            ExponentForm::PowerOffset { q, p, c } => {
                let p = usize::try_from(*p).expect("exponent fits in memory");
                num_traits::pow(BigInt::from(*q), p) + c
            }
            ExponentForm::ProthForm { k, n, c } => {
                BigInt::from(k.clone() << *n) + c
            }
        }
    }

    /// The form denoting `self + delta`.
    pub fn shifted(&self, delta: i64) -> Self {
        match self {
            ExponentForm::Literal(n) => ExponentForm::Literal(n + delta),
            ExponentForm::PowerOffset { q, p, c } => ExponentForm::PowerOffset {
                q: *q,
                p: *p,
                c: c + delta,
            },
            ExponentForm::ProthForm { k, n, c } => ExponentForm::ProthForm {
                k: k.clone(),
                n: *n,
                c: c + delta,
            },
        }
    }
}

impl From<i64> for ExponentForm {
    fn from(n: i64) -> Self {
        ExponentForm::Literal(BigInt::from(n))
    }
}

impl From<BigInt> for ExponentForm {
    fn from(n: BigInt) -> Self {
        ExponentForm::Literal(n)
    }
}

impl From<BigUint> for ExponentForm {
    fn from(n: BigUint) -> Self {
        ExponentForm::Literal(BigInt::from(n))
    }
}

/// `ω_a^n = T_n(a) + U_{n−1}(a)·√(a²−1) (mod Q)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChebPair {
    /// `T_n(a) mod Q`
    pub t: BigUint,
    /// `U_{n−1}(a) mod Q`
    pub u: BigUint,
    pub base: BigInt,
    pub modulus: OddModulus,
    pub index: ExponentForm,
}

impl ChebPair {
    /// `ω^n == 1`
    pub fn is_one(&self) -> bool {
        self.t.is_one() && self.u.is_zero()
    }

    /// `ω^n == −1`
    pub fn is_minus_one(&self) -> bool {
        self.t == self.modulus.minus_one() && self.u.is_zero()
    }

    /// `ω̄^n = (t, −u)`, the pair at index `−n`.
    pub fn conjugate(&self) -> ChebPair {
        ChebPair {
            t: self.t.clone(),
            u: neg_mod(&self.u, self.modulus.value()),
            base: self.base.clone(),
            modulus: self.modulus.clone(),
            index: negate_form(&self.index),
        }
    }

    /// Ring product `ω^m · ω^n`. Both pairs must share base and modulus.
    pub fn mul(&self, other: &ChebPair) -> Result<ChebPair> {
        if self.modulus != other.modulus
            || self.modulus.residue_of(&self.base) != other.modulus.residue_of(&other.base)
        {
            return Err(Error::invalid("pairs belong to different rings"));
        }
        let ring = BigRing::new(&self.base, &self.modulus);
        let (t, u) = ring.mul(
            &(self.t.clone(), self.u.clone()),
            &(other.t.clone(), other.u.clone()),
        );
        Ok(ChebPair {
            t,
            u,
            base: self.base.clone(),
            modulus: self.modulus.clone(),
            index: ExponentForm::Literal(self.index.value() + other.index.value()),
        })
    }

    /// `t² − (a²−1)·u² mod Q`; always 1.
    pub fn norm(&self) -> BigUint {
        let q = self.modulus.value();
        let d = self.modulus.residue_of(&(&self.base * &self.base - 1));
        let tt = &self.t * &self.t % q;
        let duu = d * &self.u % q * &self.u % q;
        (tt + q - duu) % q
    }
}

fn neg_mod(x: &BigUint, q: &BigUint) -> BigUint {
    if x.is_zero() {
        BigUint::zero()
    } else {
        q - x
    }
}

fn negate_form(f: &ExponentForm) -> ExponentForm {
    ExponentForm::Literal(-f.value())
}

/// Modular scalar arithmetic shared by the word-size and big-integer paths.
trait ModArith {
    type S: Clone + PartialEq;
    fn add(&self, x: &Self::S, y: &Self::S) -> Self::S;
    fn sub(&self, x: &Self::S, y: &Self::S) -> Self::S;
    fn mul(&self, x: &Self::S, y: &Self::S) -> Self::S;
    fn one(&self) -> Self::S;
    fn zero(&self) -> Self::S;
}

struct SmallMod {
    q: u64,
}

impl ModArith for SmallMod {
    type S = u64;

    fn add(&self, x: &u64, y: &u64) -> u64 {
        let s = u128::from(*x) + u128::from(*y);
        (s % u128::from(self.q)) as u64
    }

    fn sub(&self, x: &u64, y: &u64) -> u64 {
        if x >= y {
            x - y
        } else {
            self.q - (y - x)
        }
    }

    fn mul(&self, x: &u64, y: &u64) -> u64 {
        (u128::from(*x) * u128::from(*y) % u128::from(self.q)) as u64
    }

    fn one(&self) -> u64 {
        1
    }

    fn zero(&self) -> u64 {
        0
    }
}

struct BigMod<'m> {
    m: &'m OddModulus,
}

impl ModArith for BigMod<'_> {
    type S = BigUint;

    fn add(&self, x: &BigUint, y: &BigUint) -> BigUint {
        let s = x + y;
        if &s >= self.m.value() {
            s - self.m.value()
        } else {
            s
        }
    }

    fn sub(&self, x: &BigUint, y: &BigUint) -> BigUint {
        if x >= y {
            x - y
        } else {
            self.m.value() - (y - x)
        }
    }

    fn mul(&self, x: &BigUint, y: &BigUint) -> BigUint {
        self.m.reduce(x * y)
    }

    fn one(&self) -> BigUint {
        BigUint::one()
    }

    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
}

/// The ring `(Z/QZ)[√D]` with distinguished unit `ω = (a, 1)`.
struct PairRing<M: ModArith> {
    ar: M,
    a: M::S,
    d: M::S,
}

type Pair<S> = (S, S);

impl<M: ModArith> PairRing<M> {
    fn one(&self) -> Pair<M::S> {
        (self.ar.one(), self.ar.zero())
    }

    fn gen(&self) -> Pair<M::S> {
        (self.a.clone(), self.ar.one())
    }

    fn mul(&self, x: &Pair<M::S>, y: &Pair<M::S>) -> Pair<M::S> {
        let ar = &self.ar;
        let tt = ar.mul(&x.0, &y.0);
        let uu = ar.mul(&x.1, &y.1);
        let t = ar.add(&tt, &ar.mul(&self.d, &uu));
        let u = ar.add(&ar.mul(&x.0, &y.1), &ar.mul(&x.1, &y.0));
        (t, u)
    }

    fn sqr(&self, x: &Pair<M::S>) -> Pair<M::S> {
        let ar = &self.ar;
        let tt = ar.mul(&x.0, &x.0);
        let uu = ar.mul(&x.1, &x.1);
        let t = ar.add(&tt, &ar.mul(&self.d, &uu));
        let tu = ar.mul(&x.0, &x.1);
        (t, ar.add(&tu, &tu))
    }

    /// `x · ω`
    fn mul_gen(&self, x: &Pair<M::S>) -> Pair<M::S> {
        let ar = &self.ar;
        let t = ar.add(&ar.mul(&x.0, &self.a), &ar.mul(&self.d, &x.1));
        let u = ar.add(&x.0, &ar.mul(&self.a, &x.1));
        (t, u)
    }

    fn conj(&self, x: &Pair<M::S>) -> Pair<M::S> {
        (x.0.clone(), self.ar.sub(&self.ar.zero(), &x.1))
    }

    /// `ω^n`, most significant bit first.
    fn pow_gen(&self, n: &BigUint) -> Pair<M::S> {
        let mut acc = self.one();
        for i in (0..n.bits()).rev() {
            acc = self.sqr(&acc);
            if n.bit(i) {
                acc = self.mul_gen(&acc);
            }
        }
        acc
    }

    fn pow_signed_gen(&self, n: &BigInt) -> Pair<M::S> {
        let p = self.pow_gen(n.magnitude());
        if n.sign() == Sign::Minus {
            self.conj(&p)
        } else {
            p
        }
    }

    fn pow(&self, x: &Pair<M::S>, e: u64) -> Pair<M::S> {
        let mut acc = self.one();
        for i in (0..u64::BITS - e.leading_zeros()).rev() {
            acc = self.sqr(&acc);
            if (e >> i) & 1 == 1 {
                acc = self.mul(&acc, x);
            }
        }
        acc
    }

    fn eval(&self, form: &ExponentForm) -> Pair<M::S> {
        match form {
            ExponentForm::Literal(n) => self.pow_signed_gen(n),
            ExponentForm::PowerOffset { q, p, c } => {
                let base = q.unsigned_abs();
                if base < 2 {
                    return self.pow_signed_gen(&form.value());
                }
                let mut x = self.gen();
                for _ in 0..*p {
                    x = self.pow(&x, base);
                }
                if *q < 0 && p & 1 == 1 {
                    x = self.conj(&x);
                }
                self.mul(&x, &self.pow_signed_gen(&BigInt::from(*c)))
            }
            ExponentForm::ProthForm { k, n, c } => {
                let mut x = self.pow_gen(k);
                for _ in 0..*n {
                    x = self.sqr(&x);
                }
                self.mul(&x, &self.pow_signed_gen(&BigInt::from(*c)))
            }
        }
    }

    /// `T_m(x)` by the ladder `T_{2k} = 2T_k² − 1`, `T_{2k+1} = 2T_kT_{k+1} − x`.
    fn cheb_t_scalar(&self, x: &M::S, m: u64) -> M::S {
        let ar = &self.ar;
        let one = ar.one();
        let mut lo = one.clone();
        let mut hi = x.clone();
        for i in (0..u64::BITS - m.leading_zeros()).rev() {
            let cross = ar.mul(&lo, &hi);
            let cross = ar.sub(&ar.add(&cross, &cross), x);
            if (m >> i) & 1 == 1 {
                let sq = ar.mul(&hi, &hi);
                hi = ar.sub(&ar.add(&sq, &sq), &one);
                lo = cross;
            } else {
                let sq = ar.mul(&lo, &lo);
                lo = ar.sub(&ar.add(&sq, &sq), &one);
                hi = cross;
            }
        }
        lo
    }
}

type BigRing<'m> = PairRing<BigMod<'m>>;

impl<'m> BigRing<'m> {
    fn new(a: &BigInt, m: &'m OddModulus) -> Self {
        let ar = BigMod { m };
        let a = m.residue_of(a);
        let d = ar.sub(&ar.mul(&a, &a), &BigUint::one());
        PairRing { ar, a, d }
    }
}

impl PairRing<SmallMod> {
    fn new_small(a: &BigInt, m: &OddModulus, q: u64) -> Self {
        let ar = SmallMod { q };
        let a = m.residue_of(a).to_u64().expect("residue below a u64 modulus");
        let d = ar.sub(&ar.mul(&a, &a), &1);
        PairRing { ar, a, d }
    }
}

/// `ω_a^n mod Q` as the pair `(T_n(a), U_{n−1}(a))`.
pub fn unit_pow(a: &BigInt, n: &ExponentForm, m: &OddModulus) -> ChebPair {
    let (t, u) = match (m.as_u64(), m.form()) {
        (Some(q), None) => {
            let ring = PairRing::new_small(a, m, q);
            let (t, u) = ring.eval(n);
            (BigUint::from(t), BigUint::from(u))
        }
        _ => BigRing::new(a, m).eval(n),
    };
    ChebPair {
        t,
        u,
        base: a.clone(),
        modulus: m.clone(),
        index: n.clone(),
    }
}

/// `T_n(a) mod Q`.
pub fn cheb_t(a: &BigInt, n: &ExponentForm, m: &OddModulus) -> BigUint {
    unit_pow(a, n, m).t
}

/// `U_n(a) mod Q`, with `U_{−n} = −U_{n−2}` (so `U_{−1} = 0`).
pub fn cheb_u(a: &BigInt, n: &ExponentForm, m: &OddModulus) -> BigUint {
    unit_pow(a, &n.shifted(1), m).u
}

/// `T_m(x) mod Q` for a residue `x` and a word-size index.
pub fn cheb_t_at(x: &BigUint, index: u64, m: &OddModulus) -> BigUint {
    let x = m.reduce(x.clone());
    match (m.as_u64(), m.form()) {
        (Some(q), None) => {
            let ring = PairRing::new_small(&BigInt::zero(), m, q);
            let x = x.to_u64().expect("residue below a u64 modulus");
            BigUint::from(ring.cheb_t_scalar(&x, index))
        }
        _ => BigRing::new(&BigInt::zero(), m).cheb_t_scalar(&x, index),
    }
}

/// `s_steps` of `s_0 = a`, `s_{k+1} = T_|q|(s_k)`, i.e. `T_{|q|^steps}(a) mod Q`.
///
/// Works on the scalar alone, independently of the pair arithmetic used
/// by [`unit_pow`].
pub fn compose_iterate(a: &BigInt, q: i64, steps: u64, m: &OddModulus) -> Result<BigUint> {
    let degree = q.unsigned_abs();
    if degree < 2 {
        return Err(Error::invalid("composition needs |q| >= 2"));
    }
    let s0 = m.residue_of(a);
    Ok(match (m.as_u64(), m.form()) {
        (Some(qv), None) => {
            let ring = PairRing::new_small(&BigInt::zero(), m, qv);
            let mut s = s0.to_u64().expect("residue below a u64 modulus");
            for _ in 0..steps {
                s = ring.cheb_t_scalar(&s, degree);
            }
            BigUint::from(s)
        }
        _ => {
            let ring = BigRing::new(&BigInt::zero(), m);
            let mut s = s0;
            for _ in 0..steps {
                s = ring.cheb_t_scalar(&s, degree);
            }
            s
        }
    })
}

/// Least `m ≥ 1` with `ω^m ≡ 1 (mod Q)`, searched up to `limit`.
/// Brute force; meant for small moduli.
pub fn unit_order(a: &BigInt, m: &OddModulus, limit: u64) -> Option<u64> {
    let ring = BigRing::new(a, m);
    let one = ring.one();
    let mut x = ring.gen();
    for k in 1..=limit {
        if x == one {
            return Some(k);
        }
        x = ring.mul_gen(&x);
    }
    None
}
