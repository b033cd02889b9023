//! Exact arithmetic: finite fields, truncated Witt rings, and Witt vectors
//! over finite products of finite fields.

pub mod field;
pub mod poly;
pub mod witt;

use serde::{Deserialize, Serialize};

pub use field::{Fq, GaloisField};
pub use poly::{witt_polynomials, UniversalWittPolynomials};
pub use witt::{Witt, WittRing};

use crate::error::{Error, Result};

/// `S = F_{p^{f_1}} × … × F_{p^{f_k}}`. The maximal ideals of `S` are the
/// factor indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawBase")]
pub struct PerfectBase {
    p: u32,
    degrees: Vec<u32>,
}

#[derive(Deserialize)]
struct RawBase {
    p: u32,
    degrees: Vec<u32>,
}

impl TryFrom<RawBase> for PerfectBase {
    type Error = Error;
    fn try_from(raw: RawBase) -> Result<Self> {
        PerfectBase::new(raw.p, raw.degrees)
    }
}

impl PerfectBase {
    pub fn new(p: u32, degrees: Vec<u32>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::EmptyBase);
        }
        for &f in &degrees {
            GaloisField::get(p, f)?;
        }
        Ok(PerfectBase { p, degrees })
    }

    pub fn prime_field(p: u32) -> Result<Self> {
        PerfectBase::new(p, vec![1])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn factor_count(&self) -> usize {
        self.degrees.len()
    }

    /// The residue field at factor `s`, as a one-factor base.
    pub fn fiber(&self, s: usize) -> Result<PerfectBase> {
        let f = *self.degrees.get(s).ok_or(Error::FactorOutOfRange {
            index: s,
            count: self.degrees.len(),
        })?;
        Ok(PerfectBase {
            p: self.p,
            degrees: vec![f],
        })
    }

    pub fn ring(&self, s: usize, level: usize) -> Result<&'static WittRing> {
        let f = *self.degrees.get(s).ok_or(Error::FactorOutOfRange {
            index: s,
            count: self.degrees.len(),
        })?;
        WittRing::get(self.p, f, level)
    }

    pub fn rings(&self, level: usize) -> Result<Vec<&'static WittRing>> {
        (0..self.factor_count())
            .map(|s| self.ring(s, level))
            .collect()
    }

    pub(crate) fn check_same(&self, other: &PerfectBase) -> Result<()> {
        if self != other {
            return Err(Error::BaseMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }
}

/// An element of `W_n(S)`, one Witt vector per factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WittVector {
    base: PerfectBase,
    level: usize,
    factors: Vec<Witt>,
}

impl WittVector {
    pub fn new(base: PerfectBase, factors: Vec<Witt>) -> Result<Self> {
        if factors.len() != base.factor_count() {
            return Err(Error::Shape(format!(
                "{} factor components for a base with {} factors",
                factors.len(),
                base.factor_count()
            )));
        }
        let level = factors[0].level();
        for (s, w) in factors.iter().enumerate() {
            if !std::ptr::eq(w.ring(), base.ring(s, level)?) {
                return Err(Error::BaseMismatch(format!(
                    "component {s} lives in {:?}",
                    w.ring()
                )));
            }
        }
        Ok(WittVector {
            base,
            level,
            factors,
        })
    }

    fn map(&self, f: impl Fn(&Witt) -> Witt) -> WittVector {
        WittVector {
            base: self.base.clone(),
            level: self.level,
            factors: self.factors.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &WittVector, f: impl Fn(&Witt, &Witt) -> Witt) -> Result<WittVector> {
        self.base.check_same(&other.base)?;
        if self.level != other.level {
            return Err(Error::LevelMismatch {
                left: self.level,
                right: other.level,
            });
        }
        Ok(WittVector {
            base: self.base.clone(),
            level: self.level,
            factors: self
                .factors
                .iter()
                .zip(&other.factors)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn zero(base: &PerfectBase, level: usize) -> Result<Self> {
        let factors = base.rings(level)?.into_iter().map(|r| r.zero()).collect();
        WittVector::new(base.clone(), factors)
    }

    pub fn one(base: &PerfectBase, level: usize) -> Result<Self> {
        let factors = base.rings(level)?.into_iter().map(|r| r.one()).collect();
        WittVector::new(base.clone(), factors)
    }

    /// `p·1 = V(1) = (0, 1, 0, …)` in every factor.
    pub fn p_scalar(base: &PerfectBase, level: usize) -> Result<Self> {
        let factors = base.rings(level)?.into_iter().map(|r| r.p_elem()).collect();
        WittVector::new(base.clone(), factors)
    }

    /// `[c]` for `c ∈ S` given by its factor components.
    pub fn teichmuller(base: &PerfectBase, c: &[Fq], level: usize) -> Result<Self> {
        let rings = base.rings(level)?;
        if c.len() != rings.len() {
            return Err(Error::Shape("one residue per factor expected".into()));
        }
        let mut factors = Vec::with_capacity(c.len());
        for (r, x) in rings.into_iter().zip(c) {
            if !std::ptr::eq(r.field(), x.field()) {
                return Err(Error::BaseMismatch(format!("{x:?} not in {:?}", r.field())));
            }
            factors.push(r.teichmuller(*x));
        }
        WittVector::new(base.clone(), factors)
    }

    pub fn base(&self) -> &PerfectBase {
        &self.base
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn factors(&self) -> &[Witt] {
        &self.factors
    }

    pub fn checked_add(&self, other: &WittVector) -> Result<WittVector> {
        self.zip(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &WittVector) -> Result<WittVector> {
        self.zip(other, |a, b| a - b)
    }

    pub fn checked_mul(&self, other: &WittVector) -> Result<WittVector> {
        self.zip(other, |a, b| a * b)
    }

    pub fn neg(&self) -> WittVector {
        self.map(|a| -a)
    }

    pub fn frobenius(&self, e: i64) -> WittVector {
        self.map(|a| a.frobenius(e))
    }

    /// Level-shifting `V: W_n(S) → W_{n+1}(S)`.
    pub fn verschiebung(&self) -> Result<WittVector> {
        let factors = self
            .factors
            .iter()
            .map(|a| a.verschiebung())
            .collect::<Result<Vec<_>>>()?;
        WittVector::new(self.base.clone(), factors)
    }

    /// In-level `V`: the top coordinate is dropped.
    pub fn verschiebung_in_level(&self) -> WittVector {
        self.map(|a| a.verschiebung_in_level())
    }

    /// Per-factor valuation in `0..=n`.
    pub fn valuation(&self) -> Vec<usize> {
        self.factors.iter().map(|a| a.valuation()).collect()
    }

    pub fn truncate(&self, m: usize) -> Result<WittVector> {
        let factors = self
            .factors
            .iter()
            .map(|a| a.truncate(m))
            .collect::<Result<Vec<_>>>()?;
        WittVector::new(self.base.clone(), factors)
    }

    pub fn zero_pad(&self, n: usize) -> Result<WittVector> {
        let factors = self
            .factors
            .iter()
            .map(|a| a.zero_pad(n))
            .collect::<Result<Vec<_>>>()?;
        WittVector::new(self.base.clone(), factors)
    }

    pub fn fiber(&self, s: usize) -> Result<WittVector> {
        let base = self.base.fiber(s)?;
        WittVector::new(base, vec![self.factors[s].clone()])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_validation() {
        assert!(matches!(PerfectBase::new(2, vec![]), Err(Error::EmptyBase)));
        assert!(PerfectBase::new(2, vec![1, 5]).is_err());
        let b = PerfectBase::new(3, vec![1, 2]).unwrap();
        assert_eq!(b.fiber(1).unwrap().degrees(), &[2]);
        assert!(matches!(
            b.fiber(2),
            Err(Error::FactorOutOfRange { index: 2, count: 2 })
        ));
    }

    #[test]
    fn vector_ops_check_base_and_level() {
        let b = PerfectBase::new(2, vec![1, 2]).unwrap();
        let c = PerfectBase::new(2, vec![1]).unwrap();
        let one = WittVector::one(&b, 2).unwrap();
        let p = WittVector::p_scalar(&b, 2).unwrap();
        assert_eq!(one.checked_add(&one).unwrap(), p);
        assert!(one.checked_add(&WittVector::one(&c, 2).unwrap()).is_err());
        assert!(matches!(
            one.checked_mul(&WittVector::one(&b, 3).unwrap()),
            Err(Error::LevelMismatch { .. })
        ));
        assert_eq!(p.valuation(), vec![1, 1]);
        assert_eq!(WittVector::zero(&b, 2).unwrap().valuation(), vec![2, 2]);
        assert_eq!(p.fiber(1).unwrap().base().degrees(), &[2]);
    }

    #[test]
    fn teichmuller_is_multiplicative_on_product_base() {
        let b = PerfectBase::new(2, vec![1, 2]).unwrap();
        let f2 = GaloisField::get(2, 1).unwrap();
        let f4 = GaloisField::get(2, 2).unwrap();
        for x in f4.elements() {
            for y in f4.elements() {
                let a = WittVector::teichmuller(&b, &[f2.one(), x], 3).unwrap();
                let c = WittVector::teichmuller(&b, &[f2.one(), y], 3).unwrap();
                let ac = WittVector::teichmuller(&b, &[f2.one(), x * y], 3).unwrap();
                assert_eq!(a.checked_mul(&c).unwrap(), ac);
            }
        }
    }
}
