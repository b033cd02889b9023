//! Rank-one modules over `O_C^♭` with `φ = a`, recorded only through the
//! normalized valuation `v = v(a)`, `v(p^♭) = 1`. The cokernel of `φ` is
//! `O_C^♭/a`, killed by `ξ_0 = p^♭` exactly when `v ≤ 1`, and projective
//! over `O_C^♭/p^♭` exactly when it is `0` or everything.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct OcRankOneModel {
    v: Ratio<i64>,
}

impl OcRankOneModel {
    pub fn new(v: Ratio<i64>) -> Result<Self> {
        if v < Ratio::zero() || v > Ratio::one() {
            return Err(Error::ValuationOutOfRange(v.to_string()));
        }
        Ok(OcRankOneModel { v })
    }

    pub fn valuation(&self) -> Ratio<i64> {
        self.v
    }
}

impl FromStr for OcRankOneModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v = s
            .trim()
            .parse::<Ratio<i64>>()
            .map_err(|e| Error::Malformed(format!("valuation {s:?}: {e}")))?;
        OcRankOneModel::new(v)
    }
}

impl fmt::Display for OcRankOneModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OcReport {
    pub v: Ratio<i64>,
    pub torsion_bkf: bool,
    pub projective_cokernel: bool,
    pub label: &'static str,
}

pub const LABEL_ETALE: &str = "étale (ℤ/p)";
pub const LABEL_MULTIPLICATIVE: &str = "multiplicative (μ_p)";
pub const LABEL_NOT_BK1: &str = "not BK₁";

pub fn oc_rank1_check(m: &OcRankOneModel) -> OcReport {
    let v = m.valuation();
    let label = if v.is_zero() {
        LABEL_ETALE
    } else if v.is_one() {
        LABEL_MULTIPLICATIVE
    } else {
        LABEL_NOT_BK1
    };
    OcReport {
        v,
        torsion_bkf: true,
        projective_cokernel: v.is_zero() || v.is_one(),
        label,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(s: &str) -> OcReport {
        oc_rank1_check(&s.parse().unwrap())
    }

    #[test]
    fn endpoints_and_middle() {
        let r = check("0");
        assert!(r.projective_cokernel && r.torsion_bkf);
        assert_eq!(r.label, LABEL_ETALE);
        let r = check("1");
        assert!(r.projective_cokernel);
        assert_eq!(r.label, LABEL_MULTIPLICATIVE);
        let r = check("1/2");
        assert!(!r.projective_cokernel && r.torsion_bkf);
        assert_eq!(r.label, LABEL_NOT_BK1);
        assert_eq!(check("2/2").label, LABEL_MULTIPLICATIVE);
    }

    #[test]
    fn out_of_range_and_garbage() {
        assert!(matches!(
            "3/2".parse::<OcRankOneModel>(),
            Err(Error::ValuationOutOfRange(_))
        ));
        assert!("-1/4".parse::<OcRankOneModel>().is_err());
        assert!(matches!(
            "x".parse::<OcRankOneModel>(),
            Err(Error::Malformed(_))
        ));
        assert!("1/0".parse::<OcRankOneModel>().is_err());
    }
}
