use chebprime_core::arith::{
    self, is_perfect_square, jacobi, reduce_special, trial_division_oracle, OddModulus,
    SpecialForm,
};
use chebprime_core::kernel::{self, cheb_t, compose_iterate, unit_pow, ExponentForm};
use chebprime_core::primality::{self, strong_test, weak_test};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use proptest::prelude::*;

fn odd_modulus() -> impl Strategy<Value = u64> {
    (1u64..u64::MAX / 2).prop_map(|x| 2 * x + 1)
}

fn primes_below(limit: u64) -> Vec<u64> {
    (3..limit).step_by(2).filter(|&q| arith::is_prime_u64(q)).collect()
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn euler(a: i64, p: u64) -> i8 {
    let r = a.rem_euclid(p as i64) as u64;
    match arith::pow_mod_u64(r, (p - 1) / 2, p) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `T_n(a)` and `U_{n−1}(a)` from the three-term recurrence over the integers.
fn recurrence(a: i64, n: usize, q: u64) -> (BigUint, BigUint) {
    let a = BigInt::from(a);
    let q = BigInt::from(q);
    let (mut t0, mut t1) = (BigInt::one(), a.clone());
    let (mut u0, mut u1) = (BigInt::zero(), BigInt::one());
    if n == 0 {
        return (big(1) % q.to_biguint().unwrap(), BigUint::zero());
    }
    for _ in 1..n {
        let t2 = 2 * &a * &t1 - &t0;
        let u2 = 2 * &a * &u1 - &u0;
        t0 = t1;
        t1 = t2;
        u0 = u1;
        u1 = u2;
    }
    let modp = |x: BigInt| ((x % &q + &q) % &q).to_biguint().unwrap();
    (modp(t1), modp(u1))
}

proptest! {
    #[test]
    fn jacobi_multiplicative(a in -10_000i64..10_000, b in -10_000i64..10_000, n in odd_modulus()) {
        let n = big(n);
        let lhs = jacobi(&BigInt::from(a * b), &n).unwrap();
        let rhs = jacobi(&BigInt::from(a), &n).unwrap() * jacobi(&BigInt::from(b), &n).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn jacobi_matches_euler(a in -1_000_000i64..1_000_000, p in prop::sample::select(primes_below(200_000))) {
        prop_assert_eq!(jacobi(&BigInt::from(a), &big(p)).unwrap(), euler(a, p));
    }

    #[test]
    fn special_reduction_matches_remainder(
        k in (0u64..1 << 20).prop_map(|x| 2 * x + 1),
        n in 1u64..200,
        plus in any::<bool>(),
        words in proptest::collection::vec(any::<u64>(), 1..12),
    ) {
        let form = match SpecialForm::new(big(k), n, plus) {
            Ok(f) => f,
            Err(_) => return Ok(()),
        };
        let x = BigUint::from_slice(
            &words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect::<Vec<_>>(),
        );
        prop_assert_eq!(reduce_special(&x, &form), &x % form.value());
    }

    #[test]
    fn perfect_square_matches_isqrt(x in any::<u128>(), square in any::<bool>()) {
        let n = if square { BigUint::from(x >> 64) * BigUint::from(x >> 64) } else { BigUint::from(x) };
        let root = n.sqrt();
        let expected = (&root * &root == n).then_some(root);
        prop_assert_eq!(is_perfect_square(&n), expected);
    }

    #[test]
    fn kernel_matches_recurrence(a in -50i64..50, n in 0usize..300, q in (1u64..1 << 40).prop_map(|x| 2 * x + 1)) {
        let m = OddModulus::from_u64(q.max(3)).unwrap();
        let pair = unit_pow(&BigInt::from(a), &(n as i64).into(), &m);
        let (t, u) = recurrence(a, n, q.max(3));
        prop_assert_eq!(pair.t, t);
        prop_assert_eq!(pair.u, u);
    }

    #[test]
    fn pell_invariant(a in 2i64..1_000_000, n in any::<u64>(), q in odd_modulus()) {
        let m = OddModulus::from_u64(q.max(3)).unwrap();
        let pair = unit_pow(&BigInt::from(a), &BigInt::from(n).into(), &m);
        prop_assert!(pair.norm().is_one());
    }

    #[test]
    fn composition_matches_binary_powering(
        q in 2i64..=7,
        p in 1u64..=10,
        a in 2i64..=6,
        modulus in odd_modulus(),
        negate in any::<bool>(),
    ) {
        let m = OddModulus::from_u64(modulus.max(3)).unwrap();
        let q = if negate { -q } else { q };
        let literal = ExponentForm::Literal(num_traits::pow(BigInt::from(q), p as usize));
        let a = BigInt::from(a);
        prop_assert_eq!(compose_iterate(&a, q, p, &m).unwrap(), cheb_t(&a, &literal, &m));
        let offset = ExponentForm::power_offset(q, p, 3);
        prop_assert_eq!(unit_pow(&a, &offset, &m).t, cheb_t(&a, &literal.shifted(3), &m));
    }

    #[test]
    fn homomorphism(a in 2i64..1000, x in -1_000_000i64..1_000_000, y in -1_000_000i64..1_000_000, q in odd_modulus()) {
        let m = OddModulus::from_u64(q.max(3)).unwrap();
        let a = BigInt::from(a);
        let lhs = unit_pow(&a, &(x + y).into(), &m);
        let rhs = unit_pow(&a, &x.into(), &m).mul(&unit_pow(&a, &y.into(), &m)).unwrap();
        prop_assert_eq!((lhs.t, lhs.u), (rhs.t, rhs.u));
    }

    #[test]
    fn doubling(a in 2i64..1000, n in 0i64..1 << 40, q in odd_modulus()) {
        let m = OddModulus::from_u64(q.max(3)).unwrap();
        let a = BigInt::from(a);
        let tn = cheb_t(&a, &n.into(), &m);
        let t2n = cheb_t(&a, &(2 * n).into(), &m);
        let qv = big(q.max(3));
        prop_assert_eq!(t2n, (&tn * &tn * 2u32 + &qv - 1u32) % &qv);
    }

    #[test]
    fn conjugate_law(a in 2i64..1000, n in 0i64..1 << 40, q in odd_modulus()) {
        let m = OddModulus::from_u64(q.max(3)).unwrap();
        let a = BigInt::from(a);
        let pos = unit_pow(&a, &n.into(), &m);
        let neg = unit_pow(&a, &(-n).into(), &m);
        let conj = pos.conjugate();
        prop_assert_eq!((&neg.t, &neg.u), (&conj.t, &conj.u));
        let prod = pos.mul(&neg).unwrap();
        prop_assert!(prod.is_one());
    }

    #[test]
    fn special_modulus_agrees_with_generic(a in 2i64..100, e in any::<u64>(), p in prop::sample::select(vec![61u64, 89, 107, 127, 521])) {
        let special = OddModulus::special(SpecialForm::mersenne(p).unwrap());
        let generic = OddModulus::new(special.value().clone()).unwrap();
        let a = BigInt::from(a);
        let e: ExponentForm = BigInt::from(e).into();
        prop_assert_eq!(cheb_t(&a, &e, &special), cheb_t(&a, &e, &generic));
    }

    #[test]
    fn strong_implies_base_implies_weak(q in (1u64..50_000).prop_map(|x| 2 * x + 1), a in 2i64..=10) {
        let m = OddModulus::from_u64(q).unwrap();
        let a = BigInt::from(a);
        let strong = strong_test(&m, &a);
        let base = primality::chebyshev_test(&m, &a);
        if let (Ok(s), Ok(b)) = (strong, base) {
            if s.passed() {
                prop_assert!(b.passed());
            }
            if b.passed() {
                prop_assert!(weak_test(&m, &a));
            }
        }
    }

    #[test]
    fn order_divides_q_minus_epsilon(q in prop::sample::select(primes_below(3000)), a in 2i64..=10) {
        let m = OddModulus::from_u64(q).unwrap();
        let a = BigInt::from(a);
        if let Ok(s) = primality::symbols(&a, &m) {
            let order = kernel::unit_order(&a, &m, q + 1).unwrap();
            let target = if s.epsilon > 0 { q - 1 } else { q + 1 };
            prop_assert_eq!(target % order, 0);
        }
    }
}

#[test]
fn primes_pass_every_test() {
    for &q in primes_below(100_000).iter().step_by(7) {
        let m = OddModulus::from_u64(q).unwrap();
        for a in 2..=10i64 {
            let a = BigInt::from(a);
            if primality::symbols(&a, &m).is_err() {
                continue;
            }
            assert!(primality::chebyshev_test(&m, &a).unwrap().passed(), "Q={q}");
            assert!(strong_test(&m, &a).unwrap().passed(), "Q={q}");
            assert!(weak_test(&m, &a), "Q={q}");
        }
    }
}

#[test]
fn mod_square_on_small_primes() {
    for q in (3..2000u64).filter(|&q| arith::is_prime_u64(q)) {
        let m = OddModulus::from_u64(q).unwrap();
        for a in 2..=20i64 {
            if let Ok(holds) = primality::mod_square_check(&m, &BigInt::from(a)) {
                assert!(holds, "Q={q} a={a}");
            }
        }
    }
}

#[test]
fn proth_agrees_with_oracle_below_ten_thousand() {
    for n in 1..14u64 {
        for k in (1..1u64 << n).step_by(2) {
            let value = (k << n) + 1;
            if value >= 10_000 || is_perfect_square(&big(value)).is_some() {
                continue;
            }
            let v = primality::proth_test(&big(k), n, 200).unwrap();
            if v.status == primality::Status::Inconclusive {
                continue;
            }
            let prime = trial_division_oracle(&big(value), None).is_prime();
            assert_eq!(v.passed(), prime, "N={value}");
        }
    }
}

#[test]
fn pseudoprime_profiles_follow_squarefree_rule() {
    for a in [2i64, 3, 5, 7] {
        for hit in chebprime_core::search::find_pseudoprimes(a, 60_000, false).unwrap() {
            if hit.factors.iter().any(|&(_, e)| e > 1) {
                continue;
            }
            let q = big(hit.q);
            let minus_one = &q - 1u32;
            for w in hit.profile.entries.windows(2) {
                if w[1] == minus_one {
                    assert!(w[0].is_zero(), "Q={} a={a}", hit.q);
                }
            }
            assert!(hit.q.to_u64().is_some());
        }
    }
}
