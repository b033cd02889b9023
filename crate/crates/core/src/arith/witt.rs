//! Truncated Witt vectors `W_n(F_q)` in Witt coordinates.
//!
//! Arithmetic evaluates the universal polynomials with coefficients reduced
//! mod `p` and exponents reduced mod `q - 1`, both of which are exact in
//! `F_q`. Over a perfect field `p·x = V(F(x))`, so multiplication and exact
//! division by powers of `p` are coordinate shifts combined with Frobenius.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use smallvec::SmallVec;

use super::field::{Fq, GaloisField};
use super::poly::{witt_polynomials, IntPoly};
use crate::error::Result;

#[derive(Debug)]
struct EvalTerm {
    coef: u16,
    factors: SmallVec<[(u8, u32); 4]>,
}

/// A universal polynomial specialised to one finite field.
#[derive(Debug)]
struct EvalPoly {
    terms: Vec<EvalTerm>,
}

impl EvalPoly {
    fn specialise(poly: &IntPoly, field: &GaloisField) -> EvalPoly {
        let p = BigInt::from(field.characteristic());
        let period = field.order() - 1;
        let mut merged: HashMap<Vec<(u8, u32)>, u32> = HashMap::new();
        for (mono, coef) in poly.terms() {
            let c = (coef % &p + &p) % &p;
            let c = c.to_u32().expect("reduced coefficient fits");
            if c == 0 {
                continue;
            }
            let key: Vec<(u8, u32)> = mono
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| (v as u8, (e - 1) % period + 1))
                .collect();
            let slot = merged.entry(key).or_insert(0);
            *slot = (*slot + c) % field.characteristic();
        }
        let mut terms: Vec<EvalTerm> = merged
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(factors, c)| EvalTerm {
                coef: c as u16,
                factors: factors.into_iter().collect(),
            })
            .collect();
        terms.sort_by(|a, b| a.factors.cmp(&b.factors));
        EvalPoly { terms }
    }

    #[inline]
    fn eval(&self, field: &GaloisField, vals: &[u16]) -> u16 {
        let mut acc = 0u16;
        'terms: for t in &self.terms {
            let mut log = 0u64;
            for &(v, e) in &t.factors {
                let x = vals[v as usize];
                if x == 0 {
                    continue 'terms;
                }
                log += u64::from(e) * u64::from(field.log_raw(x));
            }
            let value = field.mul_raw(t.coef, field.exp_raw(log));
            acc = field.add_raw(acc, value);
        }
        acc
    }
}

/// The ring `W_n(F_q)`, shared by all of its elements.
pub struct WittRing {
    field: &'static GaloisField,
    level: usize,
    sum: Vec<EvalPoly>,
    product: Vec<EvalPoly>,
}

impl fmt::Debug for WittRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}({:?})", self.level, self.field)
    }
}

/// Rings are interned, so identity is pointer identity.
impl PartialEq for WittRing {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
    }
}

impl Eq for WittRing {}

impl std::hash::Hash for WittRing {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.p(), self.degree(), self.level).hash(state);
    }
}

type RingCache = Mutex<HashMap<(u32, u32, usize), &'static WittRing>>;

static RINGS: OnceLock<RingCache> = OnceLock::new();

impl WittRing {
    pub fn get(p: u32, degree: u32, level: usize) -> Result<&'static WittRing> {
        if level == 0 {
            return Err(crate::Error::LevelOutOfRange {
                level,
                min: 1,
                max: usize::MAX,
            });
        }
        let field = GaloisField::get(p, degree)?;
        let registry = RINGS.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(r) = registry
            .lock()
            .expect("ring registry poisoned")
            .get(&(p, degree, level))
        {
            return Ok(r);
        }
        let polys = witt_polynomials(p, level);
        let ring = WittRing {
            field,
            level,
            sum: polys
                .sum
                .iter()
                .map(|q| EvalPoly::specialise(q, field))
                .collect(),
            product: polys
                .product
                .iter()
                .map(|q| EvalPoly::specialise(q, field))
                .collect(),
        };
        let mut guard = registry.lock().expect("ring registry poisoned");
        let entry = guard
            .entry((p, degree, level))
            .or_insert_with(|| Box::leak(Box::new(ring)));
        Ok(*entry)
    }

    pub fn field(&self) -> &'static GaloisField {
        self.field
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn p(&self) -> u32 {
        self.field.characteristic()
    }

    pub fn degree(&self) -> u32 {
        self.field.degree()
    }

    /// Number of elements, `q^n`.
    pub fn size(&self) -> u64 {
        u64::from(self.field.order()).pow(self.level as u32)
    }

    /// The same field at another level.
    pub fn at_level(&self, level: usize) -> Result<&'static WittRing> {
        WittRing::get(self.p(), self.degree(), level)
    }

    pub fn zero(&'static self) -> Witt {
        Witt {
            ring: self,
            coords: SmallVec::from_elem(0, self.level),
        }
    }

    pub fn one(&'static self) -> Witt {
        self.teichmuller(self.field.one())
    }

    /// The element `p = V(1) = (0, 1, 0, …)`.
    pub fn p_elem(&'static self) -> Witt {
        self.one().mul_p_power(1)
    }

    /// `p^k`, which is zero for `k ≥ n`.
    pub fn p_power(&'static self, k: usize) -> Witt {
        self.one().mul_p_power(k)
    }

    /// Teichmüller representative `[c] = (c, 0, …, 0)`.
    pub fn teichmuller(&'static self, c: Fq) -> Witt {
        assert!(std::ptr::eq(c.field(), self.field), "field mismatch");
        let mut w = self.zero();
        w.coords[0] = c.raw();
        w
    }

    /// The image of an integer under `ℤ → W_n(F_q)`.
    pub fn from_int(&'static self, k: i64) -> Witt {
        let one = self.one();
        let mut acc = self.zero();
        let mut base = one;
        let mut m = k.unsigned_abs();
        while m > 0 {
            if m & 1 == 1 {
                acc = &acc + &base;
            }
            base = &base + &base;
            m >>= 1;
        }
        if k < 0 {
            -&acc
        } else {
            acc
        }
    }

    pub fn from_coords(&'static self, coords: &[Fq]) -> Result<Witt> {
        if coords.len() != self.level {
            return Err(crate::Error::LevelMismatch {
                left: self.level,
                right: coords.len(),
            });
        }
        if let Some(c) = coords.iter().find(|c| !std::ptr::eq(c.field(), self.field)) {
            return Err(crate::Error::BaseMismatch(format!(
                "coordinate in {:?}, expected {:?}",
                c.field(),
                self.field
            )));
        }
        Ok(Witt {
            ring: self,
            coords: coords.iter().map(|c| c.raw()).collect(),
        })
    }

    /// Element with index `Σ coords[i]·q^i`, the enumeration order.
    pub fn from_index(&'static self, mut index: u64) -> Witt {
        let q = u64::from(self.field.order());
        let coords = (0..self.level)
            .map(|_| {
                let d = (index % q) as u16;
                index /= q;
                d
            })
            .collect();
        Witt { ring: self, coords }
    }

    pub fn elements(&'static self) -> impl Iterator<Item = Witt> {
        (0..self.size()).map(move |i| self.from_index(i))
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Mul,
}

/// An element of `W_n(F_q)`.
#[derive(Clone)]
pub struct Witt {
    ring: &'static WittRing,
    coords: SmallVec<[u16; 4]>,
}

impl PartialEq for Witt {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.ring, other.ring) && self.coords == other.coords
    }
}

impl Eq for Witt {}

impl std::hash::Hash for Witt {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Debug for Witt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ring.degree() == 1 {
            write!(f, "{:?}", self.coords.as_slice())
        } else {
            let cs: Vec<Vec<u32>> = self.coords().iter().map(|c| c.coeffs()).collect();
            write!(f, "{cs:?}")
        }
    }
}

impl Witt {
    pub fn ring(&self) -> &'static WittRing {
        self.ring
    }

    pub fn level(&self) -> usize {
        self.ring.level
    }

    pub fn coords(&self) -> Vec<Fq> {
        self.coords
            .iter()
            .map(|&v| self.ring.field.element(v))
            .collect()
    }

    pub fn coord(&self, i: usize) -> Fq {
        self.ring.field.element(self.coords[i])
    }

    pub fn index(&self) -> u64 {
        let q = u64::from(self.ring.field.order());
        self.coords
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * q + u64::from(d))
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0] == 1 && self.coords[1..].iter().all(|&c| c == 0)
    }

    /// Least `i` with `x_i ≠ 0`, or `n` for zero.
    pub fn valuation(&self) -> usize {
        self.coords
            .iter()
            .position(|&c| c != 0)
            .unwrap_or(self.ring.level)
    }

    pub fn is_unit(&self) -> bool {
        self.coords[0] != 0
    }

    /// Residue in `F_q`.
    pub fn residue(&self) -> Fq {
        self.coord(0)
    }

    fn same_ring(&self, other: &Witt) {
        assert!(
            std::ptr::eq(self.ring, other.ring),
            "ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    fn binary(&self, other: &Witt, op: BinOp) -> Witt {
        self.same_ring(other);
        let n = self.ring.level;
        let field = self.ring.field;
        if n == 1 {
            let (a, b) = (self.coords[0], other.coords[0]);
            let c = match op {
                BinOp::Add => field.add_raw(a, b),
                BinOp::Mul => field.mul_raw(a, b),
            };
            return Witt {
                ring: self.ring,
                coords: SmallVec::from_elem(c, 1),
            };
        }
        let polys = match op {
            BinOp::Add => &self.ring.sum,
            BinOp::Mul => &self.ring.product,
        };
        let mut vals: SmallVec<[u16; 8]> = SmallVec::with_capacity(2 * n);
        vals.extend_from_slice(&self.coords);
        vals.extend_from_slice(&other.coords);
        let coords = polys.iter().map(|q| q.eval(field, &vals)).collect();
        Witt {
            ring: self.ring,
            coords,
        }
    }

    /// Additive inverse by solving `a + b = 0` one coordinate at a time:
    /// `S_i = x_i + y_i + R_i(x_{<i}, y_{<i})`.
    fn neg_by_solving(&self) -> Witt {
        let n = self.ring.level;
        let field = self.ring.field;
        let mut vals: SmallVec<[u16; 8]> = SmallVec::from_elem(0, 2 * n);
        vals[..n].copy_from_slice(&self.coords);
        let mut out: SmallVec<[u16; 4]> = SmallVec::from_elem(0, n);
        for i in 0..n {
            let xi = vals[i];
            vals[i] = 0;
            let rest = self.ring.sum[i].eval(field, &vals);
            vals[i] = xi;
            out[i] = field.sub_raw(field.neg_raw(xi), rest);
            vals[n + i] = out[i];
        }
        Witt {
            ring: self.ring,
            coords: out,
        }
    }

    /// Coordinatewise Frobenius `x_i ↦ x_i^{p^e}`.
    pub fn frobenius(&self, e: i64) -> Witt {
        let field = self.ring.field;
        Witt {
            ring: self.ring,
            coords: self
                .coords
                .iter()
                .map(|&c| field.frobenius_raw(c, e))
                .collect(),
        }
    }

    /// `V: W_n → W_{n+1}`, `(x_0, …) ↦ (0, x_0, …)`.
    pub fn verschiebung(&self) -> Result<Witt> {
        let ring = self.ring.at_level(self.ring.level + 1)?;
        let mut coords = SmallVec::with_capacity(ring.level);
        coords.push(0);
        coords.extend_from_slice(&self.coords);
        Ok(Witt { ring, coords })
    }

    /// `V` inside `W_n`: shift right and drop the top coordinate.
    pub fn verschiebung_in_level(&self) -> Witt {
        let n = self.ring.level;
        let mut coords: SmallVec<[u16; 4]> = SmallVec::from_elem(0, n);
        coords[1..].copy_from_slice(&self.coords[..n - 1]);
        Witt {
            ring: self.ring,
            coords,
        }
    }

    /// `p^k · a = V^k F^k a`.
    pub fn mul_p_power(&self, k: usize) -> Witt {
        let n = self.ring.level;
        let field = self.ring.field;
        let mut coords: SmallVec<[u16; 4]> = SmallVec::from_elem(0, n);
        for i in k..n {
            coords[i] = field.frobenius_raw(self.coords[i - k], k as i64);
        }
        Witt {
            ring: self.ring,
            coords,
        }
    }

    /// The element `b` with `p^k b = a` whose top `k` coordinates are zero;
    /// `None` when `valuation(a) < k`.
    pub fn div_p_power(&self, k: usize) -> Option<Witt> {
        let n = self.ring.level;
        if k > n || self.valuation() < k {
            return None;
        }
        let field = self.ring.field;
        let mut coords: SmallVec<[u16; 4]> = SmallVec::from_elem(0, n);
        for i in 0..n - k {
            coords[i] = field.frobenius_raw(self.coords[i + k], -(k as i64));
        }
        Some(Witt {
            ring: self.ring,
            coords,
        })
    }

    /// Multiplicative inverse of a unit by Newton iteration from the
    /// Teichmüller lift of the residue inverse.
    pub fn inverse(&self) -> Option<Witt> {
        let field = self.ring.field;
        let r = field.inv_raw(self.coords[0])?;
        let one = self.ring.one();
        let mut x = self.ring.teichmuller(field.element(r));
        loop {
            let err = &one - &(self * &x);
            if err.is_zero() {
                return Some(x);
            }
            x = &x + &(&x * &err);
        }
    }

    /// Some `c` with `c·b = a`, if one exists.
    pub fn div_exact(&self, b: &Witt) -> Option<Witt> {
        self.same_ring(b);
        let vb = b.valuation();
        if vb == self.ring.level {
            return self.is_zero().then(|| self.ring.zero());
        }
        if self.valuation() < vb {
            return None;
        }
        let unit = b.div_p_power(vb)?;
        let c = self.div_p_power(vb)?;
        Some(&c * &unit.inverse()?)
    }

    /// Drop coordinates `≥ m`.
    pub fn truncate(&self, m: usize) -> Result<Witt> {
        if m == 0 || m > self.ring.level {
            return Err(crate::Error::LevelOutOfRange {
                level: m,
                min: 1,
                max: self.ring.level,
            });
        }
        let ring = self.ring.at_level(m)?;
        Ok(Witt {
            ring,
            coords: self.coords[..m].iter().copied().collect(),
        })
    }

    /// Lift to level `n ≥ current` by appending zero coordinates.
    pub fn zero_pad(&self, n: usize) -> Result<Witt> {
        if n < self.ring.level {
            return Err(crate::Error::LevelOutOfRange {
                level: n,
                min: self.ring.level,
                max: usize::MAX,
            });
        }
        let ring = self.ring.at_level(n)?;
        let mut coords = self.coords.clone();
        coords.resize(n, 0);
        Ok(Witt { ring, coords })
    }
}

impl<'a> std::ops::Add<&'a Witt> for &'a Witt {
    type Output = Witt;
    fn add(self, rhs: &Witt) -> Witt {
        self.binary(rhs, BinOp::Add)
    }
}

impl<'a> std::ops::Mul<&'a Witt> for &'a Witt {
    type Output = Witt;
    fn mul(self, rhs: &Witt) -> Witt {
        self.binary(rhs, BinOp::Mul)
    }
}

impl std::ops::Neg for &Witt {
    type Output = Witt;
    fn neg(self) -> Witt {
        let field = self.ring.field;
        if self.ring.p() != 2 {
            // -x = [-1]·x and [c]·(x_i) = (c^{p^i} x_i); (-1)^{p^i} = -1 for odd p
            Witt {
                ring: self.ring,
                coords: self.coords.iter().map(|&c| field.neg_raw(c)).collect(),
            }
        } else {
            self.neg_by_solving()
        }
    }
}

impl<'a> std::ops::Sub<&'a Witt> for &'a Witt {
    type Output = Witt;
    fn sub(self, rhs: &Witt) -> Witt {
        self + &(-rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(ring: &'static WittRing, coords: &[u16]) -> Witt {
        let f = ring.field();
        ring.from_coords(&coords.iter().map(|&c| f.element(c)).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn one_plus_one_in_w2_f2_is_p() {
        let r = WittRing::get(2, 1, 2).unwrap();
        assert_eq!(&w(r, &[1, 0]) + &w(r, &[1, 0]), w(r, &[0, 1]));
        assert_eq!(r.p_elem(), w(r, &[0, 1]));
    }

    #[test]
    fn p_squared_vanishes_in_w2() {
        let r = WittRing::get(2, 1, 2).unwrap();
        let p = w(r, &[0, 1]);
        assert!((&p * &p).is_zero());
    }

    #[test]
    fn p_scalar_level_three() {
        let r = WittRing::get(2, 1, 3).unwrap();
        assert_eq!(r.p_elem(), w(r, &[0, 1, 0]));
        // p·1 computed by repeated addition
        let one = r.one();
        assert_eq!(&one + &one, r.p_elem());
        assert_eq!(
            r.p_elem().truncate(2).unwrap(),
            r.at_level(2).unwrap().p_elem()
        );
        assert_eq!(
            r.p_elem().truncate(1).unwrap(),
            r.at_level(1).unwrap().zero()
        );
    }

    #[test]
    fn negation_shortcut_matches_solver() {
        for (p, f, n) in [(3, 1, 3), (5, 1, 2), (3, 2, 2), (7, 1, 2)] {
            let r = WittRing::get(p, f, n).unwrap();
            for a in r.elements().take(500) {
                assert_eq!(-&a, a.neg_by_solving());
                assert!((&a + &(-&a)).is_zero());
            }
        }
    }

    #[test]
    fn minus_one_in_w3_f2_is_all_ones() {
        let r = WittRing::get(2, 1, 3).unwrap();
        assert_eq!(-&r.one(), w(r, &[1, 1, 1]));
    }

    #[test]
    fn valuations() {
        let r = WittRing::get(2, 1, 2).unwrap();
        assert_eq!(w(r, &[1, 1]).valuation(), 0);
        assert_eq!(w(r, &[0, 1]).valuation(), 1);
        assert_eq!(r.zero().valuation(), 2);
    }

    #[test]
    fn inverse_and_exact_division() {
        let r = WittRing::get(3, 2, 3).unwrap();
        for a in r.elements().step_by(37) {
            match a.inverse() {
                Some(b) => assert!((&a * &b).is_one()),
                None => assert!(!a.is_unit()),
            }
            for b in r.elements().step_by(101) {
                let prod = &a * &b;
                let q = prod.div_exact(&b).expect("product divisible by factor");
                assert_eq!(&q * &b, prod);
            }
        }
    }

    #[test]
    fn p_power_shift_and_division_roundtrip() {
        let r = WittRing::get(2, 2, 4).unwrap();
        for a in r.elements().step_by(7) {
            for k in 0..=4 {
                let shifted = a.mul_p_power(k);
                assert_eq!(shifted, &a * &r.p_power(k));
                let back = shifted.div_p_power(k).unwrap();
                assert_eq!(back.mul_p_power(k), shifted);
            }
        }
    }

    #[test]
    fn truncation_and_zero_pad_errors() {
        let r = WittRing::get(2, 1, 2).unwrap();
        assert!(r.one().truncate(3).is_err());
        assert!(r.one().truncate(0).is_err());
        assert!(r.one().zero_pad(1).is_err());
        assert_eq!(
            r.one().zero_pad(4).unwrap(),
            WittRing::get(2, 1, 4).unwrap().one()
        );
    }

    #[test]
    fn verschiebung_shifts_level() {
        let r1 = WittRing::get(2, 1, 1).unwrap();
        let v = r1.one().verschiebung().unwrap();
        assert_eq!(v, WittRing::get(2, 1, 2).unwrap().p_elem());
        let r3 = WittRing::get(2, 1, 3).unwrap();
        assert_eq!(r3.one().verschiebung_in_level(), r3.p_elem());
    }

    #[test]
    fn integers_map_onto_w2_f2_as_z_mod_4() {
        let r = WittRing::get(2, 1, 2).unwrap();
        assert_eq!(r.from_int(3), w(r, &[1, 1]));
        assert_eq!(r.from_int(2), w(r, &[0, 1]));
        assert!(r.from_int(4).is_zero());
        assert_eq!(r.from_int(-1), r.from_int(3));
    }
}
