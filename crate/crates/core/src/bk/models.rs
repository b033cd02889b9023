//! The standard rank-one examples over `F_p`.

use super::BknModule;
use crate::arith::{PerfectBase, WittRing};
use crate::error::Result;
use crate::semilinear::Matrix;

fn rank_one(p: u32, level: usize, phi: i64, psi: i64) -> Result<BknModule> {
    let ring = WittRing::get(p, 1, level)?;
    BknModule::new(
        PerfectBase::prime_field(p)?,
        level,
        vec![Matrix::from_ints(ring, &[&[phi]])],
        vec![Matrix::from_ints(ring, &[&[psi]])],
    )
}

/// `μ_{p^n}`: `φ = p`, `ψ = 1`. At level 1 this is `(0, 1)`.
pub fn mu_p(p: u32, level: usize) -> Result<BknModule> {
    rank_one(p, level, i64::from(p), 1)
}

/// `ℤ/p^n`: `φ = 1`, `ψ = p`.
pub fn z_mod_p(p: u32, level: usize) -> Result<BknModule> {
    rank_one(p, level, 1, i64::from(p))
}

/// `α_p` at level 1: `φ = ψ = 0`. Satisfies the axioms but not exactness.
pub fn alpha_p(p: u32) -> Result<BknModule> {
    rank_one(p, 1, 0, 0)
}
