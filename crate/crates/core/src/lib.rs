//! Exact computation of Jacobians, Artin–Ihara polynomials and Iwasawa
//! invariants of ell-towers of covers over Cayley graphs of finite groups,
//! together with verifiers for the character-indexed factorization of the
//! tower polynomial and its companion identities.
//!
//! Everything is exact: big-integer Smith normal forms, cyclotomic integer
//! arithmetic in power bases, and ell-adic valuations at auto-escalating
//! finite precision. No floating point anywhere.

pub mod chartab;
pub mod cyclo;
pub mod error;
pub mod graphs;
pub mod groups;
pub mod iwasawa;
pub mod job;
pub mod polydet;
pub mod report;
pub mod xlaurent;

pub use error::{Error, Result};
