//! Classification of primes l ≡ 1 mod 8 by binary-quadratic-form
//! representation conditions, and tabulation of the resulting 4-rank
//! statistics for the fields Q(√±pl), Q(√±2pl) with p ≡ 7 mod 8.
//!
//! The pipeline: `arith` supplies exact integer primitives; `qforms` the form
//! class groups and the representation scans; `criteria` decides which of the
//! conditions ⟨1,32⟩, ⟨1,2p⟩, ⟨2,p⟩ a prime satisfies; `classify` maps the
//! profile through the eight-case table to a rank tuple; `report` counts
//! classes over Ω(p, N); `cli` exposes each stage as a subcommand.

pub mod arith;
pub mod classify;
pub mod cli;
pub mod criteria;
pub mod error;
pub mod qforms;
pub mod report;

pub use error::{Error, Result};
