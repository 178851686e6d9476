//! Exact local objects for counting integral points on thin sets of type II.
//!
//! The crate computes, at desk scale, the local data attached to a polynomial
//! `F(Y, X1..Xn)` that is monic in `Y`:
//!
//! * [`polyring`] — sparse multivariate integer polynomials, parsing, and the
//!   essential-variables test,
//! * [`primefield`] — prime-field contexts, univariate algebra over `F_p`,
//!   resultants, squarefree decomposition and multiplicative characters,
//! * [`localcount`] — dense tables of the root counts `v_p(x)` and zero-set
//!   censuses over boxes,
//! * [`expsum`] — the complete exponential sums `S(u,p)` via prime-length
//!   DFTs, with exact cyclotomic cross-checks,
//! * [`strata`] — tier censuses and hyperplane second moments,
//! * [`sieve`] — exact point counts `N(F,B)`, smooth weights, sieving sets
//!   and the bilinear sieve terms.
//!
//! Everything is pure computation over `alloc`; IO and the CLI live in the
//! companion crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod expsum;
pub mod localcount;
pub mod polyring;
pub mod primefield;
pub mod sieve;
pub mod strata;

pub use polyring::{Polynomial, SievedForm};
pub use primefield::{Character, PrimeCtx};
