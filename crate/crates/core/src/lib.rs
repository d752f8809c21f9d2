//! Exact rank distributions of random matrices over finite fields.
//!
//! The crate covers six matrix ensembles (rectangular uniform, symmetric,
//! symmetric with zero diagonal / skew-symmetric, skew centrosymmetric and
//! Hermitian). For each it provides
//!
//! - the exact finite-`n` law of `Q_n = n - rank` as arbitrary-precision
//!   rationals ([`ensembles::finite_pmf`]),
//! - the `n -> infinity` limit with certified interval enclosures
//!   ([`ensembles::limit_pmf`]),
//! - Stein characterizations, Stein-equation solutions and their exact
//!   supremum norms ([`stein`]),
//! - certified total-variation distances checked against explicit windows
//!   ([`tvbounds`]),
//! - finite-field samplers, rank computation and brute-force enumeration
//!   ([`gfmatrix`]), and the rank-one-update Markov chain ([`markov`]).
//!
//! No floating point is used on certified paths; Monte-Carlo code is the
//! only place where `f64` appears.

#![forbid(unsafe_code)]

pub mod ensembles;
pub mod error;
pub mod gfmatrix;
pub mod interval;
pub mod markov;
pub mod qseries;
pub mod rational;
pub mod stein;
pub mod tvbounds;

pub use ensembles::{finite_pmf, limit_pmf, EnsembleId, LimitPmf, RankPmf};
pub use error::{Error, Result};
pub use interval::IntervalRat;
pub use rational::Rat;
