//! Lattice zonotopes inscribed in the hypercube `[0, n]^d`.
//!
//! A lattice zonotope is, up to translation, a multiset of signed primitive
//! integer directions. Folding every direction into the positive orthant turns
//! the counting problem into a partition problem with generating function
//!
//! ```text
//! Zon_d(x) = prod_{v primitive, v >= 0} (1 - x^v)^(-2^(d(v) - 1))
//! ```
//!
//! where `d(v)` is the number of nonzero coordinates of `v`. This crate offers
//! three independent views of that function:
//!
//! - [`exact`]: arbitrary-precision coefficient extraction by dynamic
//!   programming, plus a brute-force enumerator used as an oracle;
//! - [`asympt`]: the closed-form saddle-point estimate
//!   `alpha_d n^beta_d exp(Q_d(n^(1/(d+1))) + I_crit)`, with the oscillating
//!   correction carried by the non-trivial zeros of the Riemann zeta function;
//! - [`sampler`]: a Boltzmann sampler drawing independent geometric
//!   multiplicities per sign class.
//!
//! [`special`] holds the zeta/Gamma/Bernoulli stack the estimate needs, and
//! [`primitives`] the enumeration of primitive directions shared by everything.

// Negated comparisons double as NaN rejection throughout.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asympt;
pub mod error;
pub mod exact;
pub mod primitives;
pub mod sampler;
pub mod special;

mod ratio_serde;

pub use error::{Error, Result};
pub use ratio_serde::{format_ratio, parse_ratio};
