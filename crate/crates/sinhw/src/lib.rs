//! Branch-aware evaluation of ψ(a,·), the multivalued inverse of
//! f(w) = sinh(aw)·exp(w) for a fixed shape parameter 0 < a < 1.
//!
//! The crate provides the forward map and its critical structure ([`map`]),
//! the w-plane region geometry that delimits the branch codomains
//! ([`geometry`]), seeded evaluation of the real and complex branch families
//! ([`branch`]), and analytic continuation along paths in the z-plane with
//! cut-crossing bookkeeping and monodromy probes ([`continuation`]).
//!
//! All evaluation routines are pure functions of their arguments and safe to
//! call concurrently. With the `parallel` feature (default) the batch
//! helpers in [`batch`] fan work out over rayon; without it they run
//! sequentially with identical results.

pub mod batch;
pub mod branch;
pub mod continuation;
pub mod error;
pub mod geometry;
pub mod map;
pub mod param;
pub mod verify;

pub use error::{Error, Result};
pub use param::{Category, Parameter};

pub use num_complex::Complex64;
