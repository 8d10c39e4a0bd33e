//! Exact arithmetic for truncated power sums.
//!
//! For natural numbers `a`, `b` and an exponent `n >= 2`, the library studies
//!
//! ```text
//! U(a, b) = (a + b)^n - a^n - b^n
//! ```
//!
//! — the cross terms of the binomial expansion — and its three-summand
//! extension `U(a, b, c) = (a + b + c)^n - a^n - b^n - c^n`. The central
//! question is how many factors of `n` divide `U`: the `n`-adic valuation.
//! Which answer to expect is governed entirely by the residues of the
//! summands modulo `n`, and the crate ships that case analysis, the
//! quotient machinery that explains the prime case, a scanner for hunting
//! primes with degenerate quotients, and a range-scan harness that measures
//! everything over rectangles and persists the evidence.
//!
//! Modules:
//!
//! - [`exact`] — integer primitives: binomial coefficients, powers, modular
//!   powers, divide-loop valuations, gcd, deterministic primality, a sieve.
//! - [`binomial`] — the two-summand pipeline: normalization, residue
//!   decomposition, case classification, predictions, capped and exact
//!   valuations, and the cross-checked [`binomial::verify`] entry point.
//! - [`trinomial`] — the three-summand extension via the split identity
//!   `U(a, b, c) = U(a, b) + U(a + b, c)`.
//! - [`fermat`] — quotient quantities `(x^p - x) / p`, the unfolding
//!   `U = p * M`, the exceptional-pair criterion, and base-`b` scans for
//!   primes whose quotient vanishes.
//! - [`scan`] — the range-scan harness: configs, deterministic parallel
//!   execution, JSONL/CSV persistence, checkpoint/resume, the
//!   exceptional-frequency census, and the built-in claim suite.
//!
//! All arithmetic is exact (`num-bigint`); nothing here rounds or
//! approximates. Scans run on a rayon pool when the default `parallel`
//! feature is on and fall back to a sequential loop without it — with
//! byte-identical output either way.

pub mod binomial;
pub mod error;
pub mod exact;
pub mod fermat;
pub mod scan;
pub mod trinomial;

pub use error::{Error, Result};
