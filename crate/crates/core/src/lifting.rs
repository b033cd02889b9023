//! Truncation `BK_n → BK_m` and lifting back up through normal
//! representations, with `Φ` lifted by zero-padding its Witt coordinates.

use crate::bk::BknModule;
use crate::error::{Error, Result};
use crate::normal_rep::{
    associated_module, compute_normal_rep, is_isomorphic, IsoOutcome, IsoWitness,
    NormalRepresentation,
};
use crate::par::{map_slice, Execution};

/// `M / p^m`.
pub fn truncate_bk(m: &BknModule, level: usize) -> Result<BknModule> {
    m.reduce_level(level)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftResult {
    /// The lift at the requested level.
    pub module: BknModule,
    /// Normal representation of the input, at the input's level.
    pub normal_rep: NormalRepresentation,
    /// `input → associated_module(normal_rep)`; the latter is exactly the
    /// truncation of `module`.
    pub witness: IsoWitness,
}

impl LiftResult {
    /// The adapted-basis form of the input.
    pub fn adapted(&self) -> Result<BknModule> {
        associated_module(&self.normal_rep)
    }
}

pub fn lift_bk(m: &BknModule, n: usize) -> Result<LiftResult> {
    if n < m.level() {
        return Err(Error::LevelOutOfRange {
            level: n,
            min: m.level(),
            max: usize::MAX,
        });
    }
    let (normal_rep, witness) = compute_normal_rep(m)?;
    let module = associated_module(&normal_rep.zero_pad(n)?)?;
    let adapted = associated_module(&normal_rep)?;
    if truncate_bk(&module, m.level())? != adapted {
        return Err(Error::Internal(
            "lift does not truncate to the adapted form".into(),
        ));
    }
    Ok(LiftResult {
        module,
        normal_rep,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerReport {
    pub base_level: usize,
    pub top_level: usize,
    /// `(n1, n2, truncate(lift(n2), n1) == lift(n1))` for `m ≤ n1 ≤ n2 ≤ N`.
    pub pairs: Vec<(usize, usize, bool)>,
    /// Each `truncate(lift(n), m)` is carried back to the input by the
    /// stored witness.
    pub witnessed: bool,
    pub coherent: bool,
}

pub fn lift_tower_check(m: &BknModule, top: usize) -> Result<TowerReport> {
    lift_tower_check_with(m, top, Execution::default())
}

pub fn lift_tower_check_with(m: &BknModule, top: usize, exec: Execution) -> Result<TowerReport> {
    let base_level = m.level();
    if top < base_level {
        return Err(Error::LevelOutOfRange {
            level: top,
            min: base_level,
            max: usize::MAX,
        });
    }
    let levels: Vec<usize> = (base_level..=top).collect();
    let lifts = map_slice(exec, &levels, |&n| lift_bk(m, n))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for (i, &n1) in levels.iter().enumerate() {
        for (j, &n2) in levels.iter().enumerate().skip(i) {
            let ok = truncate_bk(&lifts[j].module, n1)? == lifts[i].module;
            pairs.push((n1, n2, ok));
        }
    }
    let mut witnessed = true;
    for lift in &lifts {
        let bottom = truncate_bk(&lift.module, base_level)?;
        witnessed &= lift.witness.verify(m, &bottom)?;
    }
    let coherent = witnessed && pairs.iter().all(|&(_, _, ok)| ok);
    Ok(TowerReport {
        base_level,
        top_level: top,
        pairs,
        witnessed,
        coherent,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftComparison {
    pub truncations: IsoOutcome,
    pub lifts: IsoOutcome,
}

/// Compares two modules at one level that are both meant to lift something
/// at level `m`: whether their truncations agree, and whether they do.
pub fn compare_lifts(a: &BknModule, b: &BknModule, m: usize) -> Result<LiftComparison> {
    Ok(LiftComparison {
        truncations: is_isomorphic(&truncate_bk(a, m)?, &truncate_bk(b, m)?)?,
        lifts: is_isomorphic(a, b)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{PerfectBase, WittRing};
    use crate::bk::models::{mu_p, z_mod_p};
    use crate::bk::validate_bk;
    use crate::semilinear::Matrix;

    #[test]
    fn truncation_of_models() {
        assert_eq!(
            truncate_bk(&mu_p(2, 3).unwrap(), 1).unwrap(),
            mu_p(2, 1).unwrap()
        );
        let m = z_mod_p(3, 2).unwrap();
        assert_eq!(truncate_bk(&m, 2).unwrap(), m);
        assert!(truncate_bk(&m, 3).is_err());
        assert!(validate_bk(&truncate_bk(&m, 1).unwrap()).valid);
    }

    #[test]
    fn lifts_of_models() {
        for n in 1..=4 {
            assert_eq!(
                lift_bk(&mu_p(2, 1).unwrap(), n).unwrap().module,
                mu_p(2, n).unwrap()
            );
            assert_eq!(
                lift_bk(&z_mod_p(5, 1).unwrap(), n).unwrap().module,
                z_mod_p(5, n).unwrap()
            );
        }
        let m = mu_p(3, 2).unwrap();
        let same = lift_bk(&m, 2).unwrap();
        assert_eq!(same.module, same.adapted().unwrap());
        assert!(lift_bk(&m, 1).is_err());
    }

    #[test]
    fn tower_over_f2() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let rep = lift_tower_check_with(&mu_p(2, 1).unwrap(), 4, exec).unwrap();
            assert!(rep.coherent);
            assert_eq!(rep.pairs.len(), 10);
        }
        let single = lift_tower_check(&z_mod_p(2, 2).unwrap(), 2).unwrap();
        assert!(single.coherent && single.pairs == vec![(2, 2, true)]);
    }

    #[test]
    fn two_lifts_of_mu_p_need_not_agree() {
        // (φ, ψ) = (2, 1) and (2, 3) over ℤ/4 both reduce to (0, 1).
        let r = WittRing::get(2, 1, 2).unwrap();
        let b = PerfectBase::prime_field(2).unwrap();
        let a = BknModule::new(
            b.clone(),
            2,
            vec![Matrix::from_ints(r, &[&[2]])],
            vec![Matrix::from_ints(r, &[&[1]])],
        )
        .unwrap();
        let c = BknModule::new(
            b,
            2,
            vec![Matrix::from_ints(r, &[&[2]])],
            vec![Matrix::from_ints(r, &[&[3]])],
        )
        .unwrap();
        let cmp = compare_lifts(&a, &c, 1).unwrap();
        assert!(matches!(cmp.truncations, IsoOutcome::Isomorphic(_)));
        assert!(matches!(cmp.lifts, IsoOutcome::NotIsomorphic(_)));
    }
}
