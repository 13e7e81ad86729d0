//! Exact arithmetic in the local Weyl algebra of linear differential
//! operators at a Fuchsian singular point.
//!
//! Operators are stored in the graded Euler form `Σ tᵏ pₖ(ε)` where
//! `ε = t·d/dt`, with polynomial coefficients over ℚ or ℚ(i) and an explicit
//! truncation order. On top of that representation the crate provides:
//!
//! * [`operator`]: products, sums, `∂`/`ε` conversions, Eulerization;
//! * [`euclid`]: right division, gcd with Bézout cofactors, lcm, Weyl
//!   conjugation and its inversion;
//! * [`fuchs`]: Fuchsianity tests and root-free resonance detection;
//! * [`normal_form`]: homological equations and Fuchsian normal forms;
//! * [`solutions`]: Frobenius series, first-order chains, apparent
//!   singularity classification.
//!
//! Everything is `no_std` with `alloc`; values are immutable and all
//! functions are pure.

#![no_std]

extern crate alloc;

pub mod error;
pub mod euclid;
pub mod fuchs;
pub mod linalg;
pub mod normal_form;
pub mod operator;
pub mod poly;
pub mod scalar;
pub mod series;
pub mod solutions;

pub use error::{Error, Result};
pub use operator::OperatorSeries;
pub use poly::Poly;
pub use scalar::{Field, Scalar};
pub use series::LaurentSeries;
