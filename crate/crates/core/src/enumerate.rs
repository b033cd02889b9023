//! Brute-force classification of small `BK_n`-modules over `W_n(F_q)` up to
//! twisted conjugation `(P, Q) ↦ (G·P·σ(G)^{-1}, σ(G)·Q·G^{-1})`.

use std::collections::{BTreeMap, BTreeSet};

use crate::arith::field::split_prime_power;
use crate::arith::{PerfectBase, WittRing};
use crate::bk::{height_dim, validate_bkn, BknModule};
use crate::error::{Error, Result};
use crate::lifting::{lift_bk, truncate_bk};
use crate::par::{filter_map_range, map_slice, Execution};
use crate::semilinear::{gl_order, GeneralLinear, Matrix};

pub const DEFAULT_BUDGET: u128 = 200_000_000;
/// Environment variable overriding [`DEFAULT_BUDGET`].
pub const BUDGET_ENV: &str = "BKN_ENUM_BUDGET";

pub fn budget_from_env() -> Result<u128> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Malformed(format!("{BUDGET_ENV}={s:?} is not an integer"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Class {
    pub repr: BknModule,
    pub orbit_size: u64,
    pub height: usize,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub q: u32,
    pub rank: usize,
    pub level: usize,
    pub valid_pairs: u64,
    /// Sorted by the key of the representative, which is the least key in
    /// its orbit.
    pub classes: Vec<Class>,
    members: BTreeMap<Vec<u32>, usize>,
}

impl Enumeration {
    pub fn total(&self) -> usize {
        self.classes.len()
    }

    /// The class containing `m`, if `m` lies in the enumerated domain.
    pub fn class_of(&self, m: &BknModule) -> Option<usize> {
        if m.factor_count() != 1 {
            return None;
        }
        self.members
            .get(&pair_key(&m.phi_blocks()[0], &m.psi_blocks()[0]))
            .copied()
    }
}

fn pair_key(p: &Matrix, q: &Matrix) -> Vec<u32> {
    let mut k = p.key();
    k.extend(q.key());
    k
}

/// Search cost `(q^n)^{2r²} · |GL_r(W_n(F_q))|`, saturating.
pub fn enumeration_cost(q: u32, r: usize, n: usize) -> u128 {
    let pairs = u128::from(q).saturating_pow((2 * r * r * n) as u32);
    pairs.saturating_mul(gl_order(u64::from(q), r, n))
}

pub fn enumerate_dieudonne(q: u32, r: usize) -> Result<Enumeration> {
    enumerate_bkn(q, r, 1)
}

pub fn enumerate_bkn(q: u32, r: usize, n: usize) -> Result<Enumeration> {
    enumerate_bkn_with(q, r, n, Execution::default(), budget_from_env()?)
}

pub fn enumerate_bkn_with(
    q: u32,
    r: usize,
    n: usize,
    exec: Execution,
    budget: u128,
) -> Result<Enumeration> {
    let (p, f) = split_prime_power(q)?;
    let ring = WittRing::get(p, f, n)?;
    let base = PerfectBase::new(p, vec![f])?;
    let cost = enumeration_cost(q, r, n);
    if cost > budget {
        return Err(Error::BudgetExceeded { cost, budget });
    }
    let size = ring.size();
    let cells = r * r;
    let pair_count = size.pow((2 * cells) as u32);
    let decode = |mut k: u64| {
        let mut digits = Vec::with_capacity(2 * cells);
        for _ in 0..2 * cells {
            digits.push(k % size);
            k /= size;
        }
        let p_mat = Matrix::from_fn(ring, r, r, |i, j| ring.from_index(digits[i * r + j]));
        let q_mat = Matrix::from_fn(ring, r, r, |i, j| {
            ring.from_index(digits[cells + i * r + j])
        });
        (p_mat, q_mat)
    };
    let module = |p_mat: Matrix, q_mat: Matrix| {
        BknModule::new(base.clone(), n, vec![p_mat], vec![q_mat]).expect("shapes fixed")
    };
    let mut valid: Vec<BknModule> = filter_map_range(exec, pair_count, |k| {
        let (p_mat, q_mat) = decode(k);
        let m = module(p_mat, q_mat);
        validate_bkn(&m).ok()?.valid.then_some(m)
    });
    valid.sort_by_cached_key(|m| pair_key(&m.phi_blocks()[0], &m.psi_blocks()[0]));

    let gl = GeneralLinear::new(ring, r);
    let group: Vec<(Matrix, Matrix, Matrix, Matrix)> = (0..gl.len())
        .map(|k| {
            let g = gl.element(k);
            let g_inv = g.inverse().expect("GL element is invertible");
            let sg = g.frobenius(1);
            let sg_inv = g_inv.frobenius(1);
            (g, g_inv, sg, sg_inv)
        })
        .collect();

    let valid_keys: BTreeSet<Vec<u32>> = valid
        .iter()
        .map(|m| pair_key(&m.phi_blocks()[0], &m.psi_blocks()[0]))
        .collect();
    let mut members = BTreeMap::new();
    let mut classes = Vec::new();
    for m in &valid {
        let (p_mat, q_mat) = (&m.phi_blocks()[0], &m.psi_blocks()[0]);
        if members.contains_key(&pair_key(p_mat, q_mat)) {
            continue;
        }
        let orbit: BTreeSet<Vec<u32>> = map_slice(exec, &group, |(g, g_inv, sg, sg_inv)| {
            let p2 = g.checked_mul(p_mat).and_then(|x| x.checked_mul(sg_inv));
            let q2 = sg.checked_mul(q_mat).and_then(|x| x.checked_mul(g_inv));
            pair_key(&p2.expect("square"), &q2.expect("square"))
        })
        .into_iter()
        .collect();
        let idx = classes.len();
        for key in &orbit {
            if !valid_keys.contains(key) {
                return Err(Error::Internal(
                    "twisted conjugation left the valid set".into(),
                ));
            }
            members.insert(key.clone(), idx);
        }
        let hd = height_dim(m);
        classes.push(Class {
            repr: m.clone(),
            orbit_size: orbit.len() as u64,
            height: hd.height[0],
            dim: hd.dim[0],
        });
    }
    Ok(Enumeration {
        q,
        rank: r,
        level: n,
        valid_pairs: valid.len() as u64,
        classes,
        members,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageReport {
    /// For each level-`n` class, the level-1 class of its truncation.
    pub truncation_image: Vec<usize>,
    /// Every level-1 class is the truncation of some level-`n` class.
    pub truncation_surjective: bool,
    /// For each level-1 class, the level-`n` class of its lift.
    pub lift_targets: Vec<usize>,
    /// Number of distinct level-`n` classes reached by lifting.
    pub lift_coverage: usize,
}

/// Truncation from `upper` (level `n`) to `lower` (level 1) on classes, and
/// which upper classes the lifts of lower representatives land in.
pub fn truncation_coverage(upper: &Enumeration, lower: &Enumeration) -> Result<CoverageReport> {
    if (upper.q, upper.rank) != (lower.q, lower.rank) || lower.level != 1 {
        return Err(Error::Shape(
            "enumerations must share q and rank, lower at level 1".into(),
        ));
    }
    let missing = || Error::Internal("class outside the enumerated domain".into());
    let truncation_image = upper
        .classes
        .iter()
        .map(|c| {
            lower
                .class_of(&truncate_bk(&c.repr, 1)?)
                .ok_or_else(missing)
        })
        .collect::<Result<Vec<_>>>()?;
    let hit: BTreeSet<usize> = truncation_image.iter().copied().collect();
    let lift_targets = lower
        .classes
        .iter()
        .map(|c| {
            upper
                .class_of(&lift_bk(&c.repr, upper.level)?.module)
                .ok_or_else(missing)
        })
        .collect::<Result<Vec<_>>>()?;
    let lift_coverage = lift_targets.iter().collect::<BTreeSet<_>>().len();
    Ok(CoverageReport {
        truncation_surjective: hit.len() == lower.classes.len(),
        truncation_image,
        lift_targets,
        lift_coverage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bk::validate_bk1;

    fn counts(q: u32, r: usize, n: usize) -> usize {
        enumerate_bkn_with(q, r, n, Execution::Sequential, DEFAULT_BUDGET)
            .unwrap()
            .total()
    }

    #[test]
    fn rank_one_over_prime_fields() {
        for p in [2, 3, 5] {
            assert_eq!(counts(p, 1, 1), 2 * (p as usize - 1));
        }
    }

    #[test]
    fn rank_one_over_f4() {
        let e = enumerate_dieudonne(4, 1).unwrap();
        assert_eq!(e.total(), 2);
        assert_eq!(e.valid_pairs, 6);
        assert_eq!(e.classes.iter().map(|c| c.orbit_size).sum::<u64>(), 6);
    }

    #[test]
    fn rank_one_level_two_over_f2() {
        let e = enumerate_bkn(2, 1, 2).unwrap();
        let reprs: Vec<(u64, u64)> = e
            .classes
            .iter()
            .map(|c| {
                (
                    c.repr.phi_blocks()[0].get(0, 0).index(),
                    c.repr.psi_blocks()[0].get(0, 0).index(),
                )
            })
            .collect();
        // indices are Witt coordinates: 2 ↦ (0,1) = 2, 3 ↦ (1,1) = 3
        let mut ints: Vec<(u64, u64)> = reprs;
        ints.sort();
        assert_eq!(ints.len(), 4);
        assert_eq!(ints, vec![(1, 2), (2, 1), (2, 3), (3, 2)]);
    }

    #[test]
    fn sequential_and_parallel_agree() {
        let a = enumerate_bkn_with(2, 2, 1, Execution::Sequential, DEFAULT_BUDGET).unwrap();
        let b = enumerate_bkn_with(2, 2, 1, Execution::Parallel, DEFAULT_BUDGET).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rank_two_over_f2_classes_are_dieudonne() {
        let e = enumerate_dieudonne(2, 2).unwrap();
        for c in &e.classes {
            let r = validate_bk1(&c.repr).unwrap();
            assert!(r.valid && r.reverse_exact == Some(true));
        }
        let sizes: u64 = e.classes.iter().map(|c| c.orbit_size).sum();
        assert_eq!(sizes, e.valid_pairs);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(
            enumerate_bkn_with(2, 2, 2, Execution::Sequential, 10),
            Err(Error::BudgetExceeded { budget: 10, .. })
        ));
        assert_eq!(enumeration_cost(2, 1, 1), 4);
    }

    #[test]
    fn truncation_is_surjective_on_classes() {
        let upper = enumerate_bkn(2, 1, 2).unwrap();
        let lower = enumerate_bkn(2, 1, 1).unwrap();
        let rep = truncation_coverage(&upper, &lower).unwrap();
        assert!(rep.truncation_surjective);
        assert_eq!(rep.lift_coverage, 2);
    }
}
