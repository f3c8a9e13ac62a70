//! Exact computation of LMOV/BPS invariants of the framed unknot.
//!
//! Everything is exact: big integers, big rationals, and Laurent polynomials
//! in q^{1/2}, a^{1/2} with rational coefficients. No floats anywhere.
//!
//! The crate is no_std + alloc; IO, serialization, and the verification
//! suites live in the companion `lmov-cli` crate.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod arith;
pub mod frac;
pub mod invariant;
pub mod laurent;
pub mod partition;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
