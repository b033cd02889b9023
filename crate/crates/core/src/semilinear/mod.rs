//! Linear and semilinear algebra over `W_n(S)` for a product base `S`.
//!
//! `W_n(S) = Π W_n(F_{q_i})` and each factor is local, so finite projective
//! modules are free per factor and every map is a tuple of per-factor
//! matrices.

pub mod gl;
pub mod matrix;
pub mod snf;

pub use gl::{gl_order, GeneralLinear};
pub use matrix::{residue_pivots, Matrix};
pub use snf::{
    cokernel_invariants, image_length, is_exact_pair, kernel_generators, kernel_length,
    smith_normal_form, solve_linear, Snf, Solution,
};

use crate::arith::PerfectBase;
use crate::error::{Error, Result};

/// `⊕_i W_n(F_{q_i})^{r_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjModule {
    pub base: PerfectBase,
    pub level: usize,
    pub ranks: Vec<usize>,
}

impl ProjModule {
    pub fn new(base: PerfectBase, level: usize, ranks: Vec<usize>) -> Result<Self> {
        if ranks.len() != base.factor_count() {
            return Err(Error::Shape(format!(
                "{} ranks for {} factors",
                ranks.len(),
                base.factor_count()
            )));
        }
        if level == 0 {
            return Err(Error::LevelOutOfRange {
                level,
                min: 1,
                max: usize::MAX,
            });
        }
        Ok(ProjModule { base, level, ranks })
    }

    pub fn fiber(&self, s: usize) -> Result<ProjModule> {
        Ok(ProjModule {
            base: self.base.fiber(s)?,
            level: self.level,
            ranks: vec![self.ranks[s]],
        })
    }

    pub fn reduce_level(&self, m: usize) -> Result<ProjModule> {
        check_level(m, self.level)?;
        Ok(ProjModule {
            base: self.base.clone(),
            level: m,
            ranks: self.ranks.clone(),
        })
    }
}

pub(crate) fn check_level(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::LevelOutOfRange {
            level: m,
            min: 1,
            max: n,
        });
    }
    Ok(())
}

/// A `W_n(S)`-linear map `M^{σ^e} → N`, one matrix per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SemilinearMap {
    source: ProjModule,
    target: ProjModule,
    twist: i64,
    blocks: Vec<Matrix>,
}

impl SemilinearMap {
    pub fn new(
        source: ProjModule,
        target: ProjModule,
        twist: i64,
        blocks: Vec<Matrix>,
    ) -> Result<Self> {
        source.base.check_same(&target.base)?;
        if source.level != target.level {
            return Err(Error::LevelMismatch {
                left: source.level,
                right: target.level,
            });
        }
        if blocks.len() != source.base.factor_count() {
            return Err(Error::Shape(format!(
                "{} blocks for {} factors",
                blocks.len(),
                source.base.factor_count()
            )));
        }
        for (s, b) in blocks.iter().enumerate() {
            if !std::ptr::eq(b.ring(), source.base.ring(s, source.level)?) {
                return Err(Error::BaseMismatch(format!(
                    "block {s} lives in {:?}",
                    b.ring()
                )));
            }
            if b.rows() != target.ranks[s] || b.cols() != source.ranks[s] {
                return Err(Error::Shape(format!(
                    "block {s} is {}x{}, expected {}x{}",
                    b.rows(),
                    b.cols(),
                    target.ranks[s],
                    source.ranks[s]
                )));
            }
        }
        Ok(SemilinearMap {
            source,
            target,
            twist,
            blocks,
        })
    }

    pub fn identity(module: &ProjModule) -> Result<Self> {
        let blocks = module
            .ranks
            .iter()
            .enumerate()
            .map(|(s, &r)| Ok(Matrix::identity(module.base.ring(s, module.level)?, r)))
            .collect::<Result<Vec<_>>>()?;
        SemilinearMap::new(module.clone(), module.clone(), 0, blocks)
    }

    pub fn source(&self) -> &ProjModule {
        &self.source
    }

    pub fn target(&self) -> &ProjModule {
        &self.target
    }

    pub fn twist(&self) -> i64 {
        self.twist
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// `(A, e) ∘ (B, f) = (A·σ^e(B), e + f)`.
    pub fn compose(&self, inner: &SemilinearMap) -> Result<SemilinearMap> {
        if self.source != inner.target {
            return Err(Error::Shape(
                "source of outer map ≠ target of inner map".into(),
            ));
        }
        let blocks = self
            .blocks
            .iter()
            .zip(&inner.blocks)
            .map(|(a, b)| a.checked_mul(&b.frobenius(self.twist)))
            .collect::<Result<Vec<_>>>()?;
        SemilinearMap::new(
            inner.source.clone(),
            self.target.clone(),
            self.twist + inner.twist,
            blocks,
        )
    }

    pub fn fiber(&self, s: usize) -> Result<SemilinearMap> {
        SemilinearMap::new(
            self.source.fiber(s)?,
            self.target.fiber(s)?,
            self.twist,
            vec![self.blocks[s].clone()],
        )
    }

    pub fn reduce_level(&self, m: usize) -> Result<SemilinearMap> {
        SemilinearMap::new(
            self.source.reduce_level(m)?,
            self.target.reduce_level(m)?,
            self.twist,
            self.blocks
                .iter()
                .map(|b| b.truncate(m))
                .collect::<Result<Vec<_>>>()?,
        )
    }
}

/// `coker(A)` for a presentation matrix `A` over `W_N(S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedModule {
    base: PerfectBase,
    ambient_level: usize,
    blocks: Vec<Matrix>,
}

impl PresentedModule {
    pub fn new(base: PerfectBase, ambient_level: usize, blocks: Vec<Matrix>) -> Result<Self> {
        if blocks.len() != base.factor_count() {
            return Err(Error::Shape(format!(
                "{} presentation blocks for {} factors",
                blocks.len(),
                base.factor_count()
            )));
        }
        for (s, b) in blocks.iter().enumerate() {
            if !std::ptr::eq(b.ring(), base.ring(s, ambient_level)?) {
                return Err(Error::BaseMismatch(format!(
                    "block {s} lives in {:?}",
                    b.ring()
                )));
            }
        }
        Ok(PresentedModule {
            base,
            ambient_level,
            blocks,
        })
    }

    pub fn base(&self) -> &PerfectBase {
        &self.base
    }

    pub fn ambient_level(&self) -> usize {
        self.ambient_level
    }

    pub fn blocks(&self) -> &[Matrix] {
        &self.blocks
    }

    /// Per factor, `a_i` with `coker ≅ ⊕ W_N/p^{a_i}` (zeros kept).
    pub fn invariants(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(cokernel_invariants).collect()
    }

    /// `log_p |coker|`.
    pub fn log_cardinality(&self) -> u64 {
        self.invariants()
            .iter()
            .zip(self.base.degrees())
            .map(|(inv, &f)| inv.iter().map(|&a| a as u64 * u64::from(f)).sum::<u64>())
            .sum()
    }

    pub fn fiber(&self, s: usize) -> Result<PresentedModule> {
        PresentedModule::new(
            self.base.fiber(s)?,
            self.ambient_level,
            vec![self.blocks[s].clone()],
        )
    }
}
