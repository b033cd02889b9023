//! Normal representations `(L, P, Φ)` of `BK_n`-modules and isomorphism
//! testing by exhaustive search.
//!
//! The module associated with `(L, P, Φ)` has basis `L` first, then `P`,
//! and
//!
//! ```text
//! Q_ψ = Φ · diag(I_L, ξ·I_P),   P_φ = diag(ξ·I_L, I_P) · Φ^{-1},
//! ```
//!
//! so `ψ = α ⊕ ξβ` and `φ = ξα^{-1} ⊕ β^{-1}` for `α = Φ|_L`, `β = Φ|_P`.

use crate::arith::PerfectBase;
use crate::bk::{height_dim, validate_bk, validate_bkn, BknModule};
use crate::error::{Error, Result};
use crate::par::{find_first_range, Execution};
use crate::semilinear::{cokernel_invariants, gl_order, residue_pivots, GeneralLinear, Matrix};

/// Largest `|GL_r(W_n(F_q))|` searched exhaustively, per factor.
pub const ISO_SEARCH_BOUND: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalRepresentation {
    base: PerfectBase,
    level: usize,
    l_ranks: Vec<usize>,
    p_ranks: Vec<usize>,
    phi: Vec<Matrix>,
    /// Per factor, the indices `j` whose `e_j` span `L` in the source
    /// module, when computed from one.
    l_indices: Option<Vec<Vec<usize>>>,
}

impl NormalRepresentation {
    pub fn new(
        base: PerfectBase,
        level: usize,
        l_ranks: Vec<usize>,
        phi: Vec<Matrix>,
    ) -> Result<Self> {
        if l_ranks.len() != base.factor_count() || phi.len() != base.factor_count() {
            return Err(Error::Shape(format!(
                "need one L-rank and one Φ per factor ({} factors)",
                base.factor_count()
            )));
        }
        let mut p_ranks = Vec::with_capacity(phi.len());
        for (s, (m, &l)) in phi.iter().zip(&l_ranks).enumerate() {
            if !std::ptr::eq(m.ring(), base.ring(s, level)?) {
                return Err(Error::BaseMismatch(format!(
                    "Φ block {s} lives in {:?}",
                    m.ring()
                )));
            }
            if !m.is_square() || m.rows() < l {
                return Err(Error::Shape(format!(
                    "Φ block {s} is {}x{} with L-rank {l}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_invertible() {
                return Err(Error::NotInvertible { factor: s });
            }
            p_ranks.push(m.rows() - l);
        }
        Ok(NormalRepresentation {
            base,
            level,
            l_ranks,
            p_ranks,
            phi,
            l_indices: None,
        })
    }

    pub fn base(&self) -> &PerfectBase {
        &self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn l_ranks(&self) -> &[usize] {
        &self.l_ranks
    }

    pub fn p_ranks(&self) -> &[usize] {
        &self.p_ranks
    }

    pub fn phi_blocks(&self) -> &[Matrix] {
        &self.phi
    }

    pub fn l_indices(&self) -> Option<&[Vec<usize>]> {
        self.l_indices.as_deref()
    }

    /// The same `(L, P)` with `Φ` zero-padded to level `n ≥ level`.
    pub fn zero_pad(&self, n: usize) -> Result<NormalRepresentation> {
        let phi = self
            .phi
            .iter()
            .map(|m| m.zero_pad(n))
            .collect::<Result<Vec<_>>>()?;
        NormalRepresentation::new(self.base.clone(), n, self.l_ranks.clone(), phi)
    }
}

/// `diag(a·I_l, b·I_{r-l})` with `a, b ∈ {1, ξ}` chosen by `xi_on_l`.
fn split_diag(m: &Matrix, l: usize, xi_on_l: bool) -> Matrix {
    let ring = m.ring();
    let (one, xi) = (ring.one(), ring.p_elem());
    let entries: Vec<_> = (0..m.rows())
        .map(|i| {
            if (i < l) == xi_on_l {
                xi.clone()
            } else {
                one.clone()
            }
        })
        .collect();
    Matrix::diagonal(ring, &entries)
}

pub fn associated_module(nr: &NormalRepresentation) -> Result<BknModule> {
    let mut phi = Vec::with_capacity(nr.phi.len());
    let mut psi = Vec::with_capacity(nr.phi.len());
    for (s, (m, &l)) in nr.phi.iter().zip(&nr.l_ranks).enumerate() {
        let inv = m.inverse().ok_or(Error::NotInvertible { factor: s })?;
        psi.push(m.checked_mul(&split_diag(m, l, false))?);
        phi.push(split_diag(m, l, true).checked_mul(&inv)?);
    }
    let module = BknModule::new(nr.base.clone(), nr.level, phi, psi)?;
    if !validate_bk(&module).valid {
        return Err(Error::Internal("associated module fails the axioms".into()));
    }
    Ok(module)
}

/// Per factor, an invertible `G` with `G·P = P'·σ(G)` and `σ(G)·Q = Q'·G`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IsoWitness {
    pub blocks: Vec<Matrix>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WitnessCheck {
    pub invertible: bool,
    pub phi_compatible: bool,
    pub psi_compatible: bool,
}

impl WitnessCheck {
    pub fn holds(&self) -> bool {
        self.invertible && self.phi_compatible && self.psi_compatible
    }
}

fn intertwines_phi(g: &Matrix, p: &Matrix, p2: &Matrix) -> bool {
    let sg = g.frobenius(1);
    g.checked_mul(p).ok() == p2.checked_mul(&sg).ok()
}

fn intertwines_psi(g: &Matrix, q: &Matrix, q2: &Matrix) -> bool {
    let sg = g.frobenius(1);
    sg.checked_mul(q).ok() == q2.checked_mul(g).ok()
}

impl IsoWitness {
    pub fn identity(m: &BknModule) -> IsoWitness {
        IsoWitness {
            blocks: m
                .phi_blocks()
                .iter()
                .map(|p| Matrix::identity(p.ring(), p.rows()))
                .collect(),
        }
    }

    /// Checks the witness as a map `source → target`, exactly.
    pub fn check(&self, source: &BknModule, target: &BknModule) -> Result<WitnessCheck> {
        source.base().check_same(target.base())?;
        if self.blocks.len() != source.factor_count() || source.ranks() != target.ranks() {
            return Err(Error::Shape("witness does not match the modules".into()));
        }
        let mut out = WitnessCheck {
            invertible: true,
            phi_compatible: true,
            psi_compatible: true,
        };
        for (s, g) in self.blocks.iter().enumerate() {
            if g.rows() != source.ranks()[s]
                || !std::ptr::eq(g.ring(), source.phi_blocks()[s].ring())
            {
                return Err(Error::Shape(format!(
                    "witness block {s} has the wrong shape or ring"
                )));
            }
            out.invertible &= g.is_invertible();
            out.phi_compatible &=
                intertwines_phi(g, &source.phi_blocks()[s], &target.phi_blocks()[s]);
            out.psi_compatible &=
                intertwines_psi(g, &source.psi_blocks()[s], &target.psi_blocks()[s]);
        }
        Ok(out)
    }

    pub fn verify(&self, source: &BknModule, target: &BknModule) -> Result<bool> {
        Ok(self.check(source, target)?.holds())
    }
}

/// `(nr, G)` with `G: M → associated_module(nr)` an isomorphism.
///
/// Per factor: `L` is spanned by the `e_j` outside the pivot rows of
/// `im(φ̄)`, the complement `C` of `im(ψ̄)` in `M̄^σ` likewise, and
/// `B = [E_L | P·E_C]` is the new basis. Then `Φ = σ(B)^{-1}·[Q·E_L | E_C]`
/// and `G = B^{-1}`.
pub fn compute_normal_rep(m: &BknModule) -> Result<(NormalRepresentation, IsoWitness)> {
    let report = validate_bkn(m)?;
    if !report.valid {
        return Err(Error::NotBkn {
            factor: report.failures.first().and_then(|f| f.factor).unwrap_or(0),
            reason: format!("{:?}", report.codes()),
        });
    }
    let mut l_ranks = Vec::new();
    let mut l_indices = Vec::new();
    let mut phis = Vec::new();
    let mut gs = Vec::new();
    for (s, (p, q)) in m.phi_blocks().iter().zip(m.psi_blocks()).enumerate() {
        let r = p.rows();
        let complement = |a: &Matrix| -> Vec<usize> {
            let piv = residue_pivots(&a.residue().transpose());
            (0..r).filter(|j| !piv.contains(j)).collect()
        };
        let l_idx = complement(p);
        let c_idx = complement(q);
        let ring = p.ring();
        let id = Matrix::identity(ring, r);
        let e_l = id.select_columns(&l_idx);
        let e_c = id.select_columns(&c_idx);
        let b = e_l.hstack(&p.checked_mul(&e_c)?)?;
        let not_bkn = |reason: &str| Error::NotBkn {
            factor: s,
            reason: reason.to_string(),
        };
        if !b.is_square() {
            return Err(not_bkn("rank of φ̄ does not complement L"));
        }
        let b_inv = b
            .inverse()
            .ok_or_else(|| not_bkn("φ(C) ⊕ L → M is not an isomorphism"))?;
        let right = q.checked_mul(&e_l)?.hstack(&e_c)?;
        if !right.is_invertible() {
            return Err(not_bkn("C ⊕ ψ(L) → M^σ is not an isomorphism"));
        }
        let phi = b_inv.frobenius(1).checked_mul(&right)?;
        l_ranks.push(l_idx.len());
        l_indices.push(l_idx);
        phis.push(phi);
        gs.push(b_inv);
    }
    let mut nr = NormalRepresentation::new(m.base().clone(), m.level(), l_ranks, phis)?;
    nr.l_indices = Some(l_indices);
    let witness = IsoWitness { blocks: gs };
    let assoc = associated_module(&nr)?;
    let check = witness.check(m, &assoc)?;
    if !check.holds() {
        return Err(Error::Internal(format!(
            "normal representation witness fails: {check:?}"
        )));
    }
    Ok((nr, witness))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoOutcome {
    Isomorphic(IsoWitness),
    NotIsomorphic(String),
    /// Some factor's `|GL|` exceeds the search bound.
    Inconclusive {
        factor: usize,
        group_order: u128,
    },
}

pub fn is_isomorphic(a: &BknModule, b: &BknModule) -> Result<IsoOutcome> {
    is_isomorphic_with(a, b, Execution::default(), ISO_SEARCH_BOUND)
}

/// Negative checks on invariants, then for each factor the first `G` in
/// [`GeneralLinear`] order intertwining both `φ` and `ψ`.
pub fn is_isomorphic_with(
    a: &BknModule,
    b: &BknModule,
    exec: Execution,
    bound: u128,
) -> Result<IsoOutcome> {
    a.base().check_same(b.base())?;
    if a.level() != b.level() {
        return Err(Error::LevelMismatch {
            left: a.level(),
            right: b.level(),
        });
    }
    if a.ranks() != b.ranks() {
        return Ok(IsoOutcome::NotIsomorphic("heights differ".into()));
    }
    if height_dim(a) != height_dim(b) {
        return Ok(IsoOutcome::NotIsomorphic("dimensions differ".into()));
    }
    for s in 0..a.factor_count() {
        if cokernel_invariants(&a.phi_blocks()[s]) != cokernel_invariants(&b.phi_blocks()[s]) {
            return Ok(IsoOutcome::NotIsomorphic(format!(
                "invariants of φ differ on factor {s}"
            )));
        }
        if cokernel_invariants(&a.psi_blocks()[s]) != cokernel_invariants(&b.psi_blocks()[s]) {
            return Ok(IsoOutcome::NotIsomorphic(format!(
                "invariants of ψ differ on factor {s}"
            )));
        }
    }
    for (s, p) in a.phi_blocks().iter().enumerate() {
        let ring = p.ring();
        let order = gl_order(u64::from(ring.field().order()), p.rows(), ring.level());
        if order > bound {
            return Ok(IsoOutcome::Inconclusive {
                factor: s,
                group_order: order,
            });
        }
    }
    let mut blocks = Vec::with_capacity(a.factor_count());
    for s in 0..a.factor_count() {
        let (p, q) = (&a.phi_blocks()[s], &a.psi_blocks()[s]);
        let (p2, q2) = (&b.phi_blocks()[s], &b.psi_blocks()[s]);
        let gl = GeneralLinear::new(p.ring(), p.rows());
        let found = find_first_range(exec, gl.len(), |k| {
            let g = gl.element(k);
            (intertwines_phi(&g, p, p2) && intertwines_psi(&g, q, q2)).then_some(g)
        });
        match found {
            Some(g) => blocks.push(g),
            None => {
                return Ok(IsoOutcome::NotIsomorphic(format!(
                    "no intertwining G on factor {s}"
                )))
            }
        }
    }
    Ok(IsoOutcome::Isomorphic(IsoWitness { blocks }))
}
