//! Truncated p-typical Witt vectors over finite products of finite fields
//! and the torsion Breuil–Kisin–Fargues module categories `BK_1`, `BK_n`
//! built on them.
//!
//! Over a perfect base `S = Π F_{q_i}` the distinguished element `ξ` can be
//! taken to be `p`: `S` is `ξ_0`-adically complete only if `ξ_0` is
//! nilpotent, hence zero in a reduced ring, and `ξ_1` is a unit absorbed by
//! rescaling.
//!
//! Layout:
//! - [`arith`]: `F_q`, `W_n(F_q)`, [`arith::WittVector`] over a product base.
//! - [`semilinear`]: matrices, Smith normal form, exactness, semilinear maps.
//! - [`bk`]: BK modules, their validators, presented modules, the `O_C` model.
//! - [`normal_rep`]: normal representations and isomorphism search.
//! - [`lifting`]: truncation and lifting between levels.
//! - [`enumerate`]: brute-force classification.

pub mod arith;
pub mod bk;
pub mod enumerate;
pub mod error;
pub mod json;
pub mod lifting;
pub mod normal_rep;
pub mod par;
pub mod semilinear;

pub use arith::{Fq, GaloisField, PerfectBase, Witt, WittRing, WittVector};
pub use error::{Error, Result};

/// Embedded in every JSON document the CLI writes.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
