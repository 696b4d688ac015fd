//! Chebyshev-polynomial generalisation of the Lucas-Lehmer test.
//!
//! Every residue computed here is a component of a power of the unit
//! `ω = a + √(a²−1)` in `(Z/QZ)[√(a²−1)]`:
//!
//! ```text
//! ω^n = T_n(a) + U_{n−1}(a)·√(a²−1)    (mod Q)
//! ```
//!
//! The crate is `no_std` and only needs `alloc`. Parallel scans, file
//! formats and the command-line front end live in the `chebprime` crate.
//!
//! ```
//! use chebprime_core::{kernel, primality, OddModulus};
//! use num_bigint::{BigInt, BigUint};
//!
//! let q = OddModulus::new(BigUint::from(11u32)).unwrap();
//! let pair = kernel::unit_pow(&BigInt::from(2), &5.into(), &q);
//! assert_eq!((pair.t, pair.u), (BigUint::from(10u32), BigUint::from(0u32)));
//!
//! let verdict = primality::chebyshev_test(&q, &BigInt::from(2)).unwrap();
//! assert!(verdict.passed());
//! ```
#![no_std]

extern crate alloc;

pub mod arith;
pub mod error;
pub mod kernel;
pub mod primality;
pub mod search;

pub use arith::{OddModulus, OracleStatus, OracleVerdict, SpecialForm};
pub use error::{Error, Result};
pub use kernel::{ChebPair, ExponentForm};
pub use primality::{
    Certificate, FamilyOptions, FamilySpec, Profile, Reason, Status, SymbolPair, Verdict,
};
