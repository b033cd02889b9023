//! Torsion Breuil–Kisin–Fargues modules over `W_n(S)` with `ξ = p`.
//!
//! A module is a rank tuple and two per-factor square matrices: `P` for
//! `φ: M^σ → M` (twist `+1`) and `Q` for `ψ: M → M^σ` (twist `−1`). In the
//! bases `e_j` of `M` and `1⊗e_j` of `M^σ` both composites are plain
//! products, so the axioms read `P·Q = Q·P = ξ·I`. A morphism `G: M → M'`
//! satisfies `G·P = P'·σ(G)` and `σ(G)·Q = Q'·G`.

pub mod models;
pub mod oc;
pub mod presented;
pub mod validate;

pub use oc::{oc_rank1_check, OcRankOneModel, OcReport};
pub use presented::{tor_exact_check, validate_bkn_presented, PresentedReport};
pub use validate::{
    fiberwise_report, height_dim, psi_from_phi, validate_bk, validate_bk1, validate_bkn, Failure,
    FailureCode, FiberwiseReport, HeightDim, ValidationReport,
};

use crate::arith::{PerfectBase, WittVector};
use crate::error::{Error, Result};
use crate::semilinear::{check_level, Matrix, ProjModule, SemilinearMap};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BknModule {
    module: ProjModule,
    phi: SemilinearMap,
    psi: SemilinearMap,
}

impl BknModule {
    /// Build from per-factor `P` (for `φ`) and `Q` (for `ψ`); ranks are read
    /// off `P`. Only shapes are checked here; axioms are checked by the
    /// validators.
    pub fn new(
        base: PerfectBase,
        level: usize,
        phi: Vec<Matrix>,
        psi: Vec<Matrix>,
    ) -> Result<Self> {
        if phi.len() != base.factor_count() {
            return Err(Error::Shape(format!(
                "{} phi blocks for {} factors",
                phi.len(),
                base.factor_count()
            )));
        }
        for (s, p) in phi.iter().enumerate() {
            if !p.is_square() {
                return Err(Error::Shape(format!("phi block {s} is not square")));
            }
        }
        let ranks = phi.iter().map(Matrix::rows).collect();
        let module = ProjModule::new(base, level, ranks)?;
        let phi = SemilinearMap::new(module.clone(), module.clone(), 1, phi)?;
        let psi = SemilinearMap::new(module.clone(), module.clone(), -1, psi)?;
        Ok(BknModule { module, phi, psi })
    }

    pub fn from_maps(phi: SemilinearMap, psi: SemilinearMap) -> Result<Self> {
        if phi.twist() != 1 || psi.twist() != -1 {
            return Err(Error::Malformed(format!(
                "phi must carry twist +1 and psi twist -1, got {} and {}",
                phi.twist(),
                psi.twist()
            )));
        }
        if phi.source() != phi.target()
            || psi.source() != phi.source()
            || psi.target() != phi.source()
        {
            return Err(Error::Shape(
                "phi and psi must be endomorphisms of one module".into(),
            ));
        }
        Ok(BknModule {
            module: phi.source().clone(),
            phi,
            psi,
        })
    }

    pub fn base(&self) -> &PerfectBase {
        &self.module.base
    }

    pub fn level(&self) -> usize {
        self.module.level
    }

    pub fn ranks(&self) -> &[usize] {
        &self.module.ranks
    }

    pub fn module(&self) -> &ProjModule {
        &self.module
    }

    pub fn phi(&self) -> &SemilinearMap {
        &self.phi
    }

    pub fn psi(&self) -> &SemilinearMap {
        &self.psi
    }

    pub fn phi_blocks(&self) -> &[Matrix] {
        self.phi.blocks()
    }

    pub fn psi_blocks(&self) -> &[Matrix] {
        self.psi.blocks()
    }

    pub fn xi(&self) -> WittVector {
        WittVector::p_scalar(self.base(), self.level()).expect("base validated")
    }

    pub fn factor_count(&self) -> usize {
        self.module.base.factor_count()
    }

    /// `M ⊗ W_n(κ(s))`.
    pub fn fiber(&self, s: usize) -> Result<BknModule> {
        Ok(BknModule {
            module: self.module.fiber(s)?,
            phi: self.phi.fiber(s)?,
            psi: self.psi.fiber(s)?,
        })
    }

    /// `M / p^m`.
    pub fn reduce_level(&self, m: usize) -> Result<BknModule> {
        check_level(m, self.level())?;
        Ok(BknModule {
            module: self.module.reduce_level(m)?,
            phi: self.phi.reduce_level(m)?,
            psi: self.psi.reduce_level(m)?,
        })
    }

    pub fn direct_sum(&self, other: &BknModule) -> Result<BknModule> {
        self.base().check_same(other.base())?;
        if self.level() != other.level() {
            return Err(Error::LevelMismatch {
                left: self.level(),
                right: other.level(),
            });
        }
        let phi = self
            .phi_blocks()
            .iter()
            .zip(other.phi_blocks())
            .map(|(a, b)| a.block_diag(b))
            .collect();
        let psi = self
            .psi_blocks()
            .iter()
            .zip(other.psi_blocks())
            .map(|(a, b)| a.block_diag(b))
            .collect();
        BknModule::new(self.base().clone(), self.level(), phi, psi)
    }

    /// Transport along an invertible `G`: `P' = G·P·σ(G)^{-1}`,
    /// `Q' = σ(G)·Q·G^{-1}`. `G` is then an isomorphism `self → result`.
    pub fn twisted_conjugate(&self, g: &[Matrix]) -> Result<BknModule> {
        if g.len() != self.factor_count() {
            return Err(Error::Shape(
                "one change of basis per factor expected".into(),
            ));
        }
        let mut phi = Vec::with_capacity(g.len());
        let mut psi = Vec::with_capacity(g.len());
        for (s, gs) in g.iter().enumerate() {
            let g_inv = gs.inverse().ok_or(Error::NotInvertible { factor: s })?;
            let sg = gs.frobenius(1);
            let sg_inv = g_inv.frobenius(1);
            phi.push(
                gs.checked_mul(&self.phi_blocks()[s])?
                    .checked_mul(&sg_inv)?,
            );
            psi.push(sg.checked_mul(&self.psi_blocks()[s])?.checked_mul(&g_inv)?);
        }
        BknModule::new(self.base().clone(), self.level(), phi, psi)
    }
}
