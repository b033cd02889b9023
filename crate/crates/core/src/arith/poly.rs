//! Universal Witt addition and multiplication polynomials over `ℤ`.
//!
//! Variables are `x_0..x_{n-1}` (indices `0..n`) followed by
//! `y_0..y_{n-1}` (indices `n..2n`). Polynomials are obtained by inverting
//! the ghost map one level at a time; every division by `p^k` is exact and
//! is checked.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, Zero};

/// Exponent vector, one entry per variable.
pub type Monomial = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPoly {
    pub fn zero(nvars: usize) -> Self {
        IntPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: BigInt) -> Self {
        let mut p = IntPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut m = vec![0; nvars];
        m[index] = 1;
        let mut p = IntPoly::zero(nvars);
        p.terms.insert(m, BigInt::one());
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        let mut out = IntPoly::zero(self.nvars);
        if k.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                *acc.entry(m).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        IntPoly {
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Repeated multiplication by the base; the bases raised here are small,
    /// so this beats squaring on term count.
    pub fn pow(&self, e: u32) -> IntPoly {
        let mut out = IntPoly::constant(self.nvars, BigInt::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Divide every coefficient by `d`; `None` if some division is inexact.
    pub fn div_exact(&self, d: &BigInt) -> Option<IntPoly> {
        let mut out = IntPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.terms.insert(m.clone(), q);
        }
        Some(out)
    }

    pub fn eval(&self, point: &[BigInt]) -> BigInt {
        assert_eq!(point.len(), self.nvars);
        let mut cache: HashMap<(usize, u32), BigInt> = HashMap::new();
        let mut total = BigInt::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache
                    .entry((v, e))
                    .or_insert_with(|| Pow::pow(&point[v], e));
                t *= &*pw;
            }
            total += t;
        }
        total
    }

    pub fn max_abs_coefficient(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

/// Ghost component `w_k = Σ_{j≤k} p^j v_j^{p^{k-j}}` evaluated on integers.
pub fn ghost_component(p: u32, k: usize, coords: &[BigInt]) -> BigInt {
    let pb = BigInt::from(p);
    (0..=k)
        .map(|j| {
            let e = p.pow((k - j) as u32);
            Pow::pow(&pb, j as u32) * Pow::pow(&coords[j], e)
        })
        .sum()
}

/// Ghost component as a polynomial in a block of variables starting at `offset`.
fn ghost_poly(p: u32, k: usize, nvars: usize, offset: usize) -> IntPoly {
    let pb = BigInt::from(p);
    let mut out = IntPoly::zero(nvars);
    for j in 0..=k {
        let e = p.pow((k - j) as u32);
        let mut m = vec![0; nvars];
        m[offset + j] = e;
        out.add_term(m, Pow::pow(&pb, j as u32));
    }
    out
}

/// The sum polynomials `S_0..S_{n-1}` and product polynomials `P_0..P_{n-1}`.
#[derive(Debug)]
pub struct UniversalWittPolynomials {
    pub p: u32,
    pub level: usize,
    pub sum: Vec<IntPoly>,
    pub product: Vec<IntPoly>,
}

impl UniversalWittPolynomials {
    fn compute(p: u32, n: usize) -> Self {
        let nvars = 2 * n;
        let pb = BigInt::from(p);
        let mut sum: Vec<IntPoly> = Vec::with_capacity(n);
        let mut product: Vec<IntPoly> = Vec::with_capacity(n);
        for k in 0..n {
            let wx = ghost_poly(p, k, nvars, 0);
            let wy = ghost_poly(p, k, nvars, n);
            let mut s = wx.add(&wy);
            let mut m = wx.mul(&wy);
            for j in 0..k {
                let e = p.pow((k - j) as u32);
                let pj = Pow::pow(&pb, j as u32);
                s = s.sub(&sum[j].pow(e).scale(&pj));
                m = m.sub(&product[j].pow(e).scale(&pj));
            }
            let pk = Pow::pow(&pb, k as u32);
            let s = s
                .div_exact(&pk)
                .unwrap_or_else(|| panic!("sum polynomial S_{k} not integral for p={p}"));
            let m = m
                .div_exact(&pk)
                .unwrap_or_else(|| panic!("product polynomial P_{k} not integral for p={p}"));
            sum.push(s);
            product.push(m);
        }
        UniversalWittPolynomials {
            p,
            level: n,
            sum,
            product,
        }
    }

    /// Check `w_k(S(x,y)) = w_k(x) + w_k(y)` and `w_k(P(x,y)) = w_k(x)·w_k(y)`
    /// for all `k` at one integer point `(x, y)`.
    pub fn ghost_identities_hold(&self, x: &[BigInt], y: &[BigInt]) -> bool {
        let n = self.level;
        assert!(x.len() == n && y.len() == n);
        let point: Vec<BigInt> = x.iter().chain(y).cloned().collect();
        let s: Vec<BigInt> = self.sum.iter().map(|q| q.eval(&point)).collect();
        let m: Vec<BigInt> = self.product.iter().map(|q| q.eval(&point)).collect();
        (0..n).all(|k| {
            let wx = ghost_component(self.p, k, x);
            let wy = ghost_component(self.p, k, y);
            ghost_component(self.p, k, &s) == &wx + &wy && ghost_component(self.p, k, &m) == wx * wy
        })
    }
}

type PolyCache = Mutex<HashMap<(u32, usize), Arc<UniversalWittPolynomials>>>;

static POLYS: OnceLock<PolyCache> = OnceLock::new();

/// Universal polynomials for `(p, n)`, computed once per process.
pub fn witt_polynomials(p: u32, n: usize) -> Arc<UniversalWittPolynomials> {
    assert!(n >= 1, "Witt level must be at least 1");
    let registry = POLYS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = registry.lock().expect("poly cache poisoned").get(&(p, n)) {
        return hit.clone();
    }
    // computed outside the lock; a concurrent duplicate is harmless
    let polys = Arc::new(UniversalWittPolynomials::compute(p, n));
    registry
        .lock()
        .expect("poly cache poisoned")
        .entry((p, n))
        .or_insert(polys)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly_from(nvars: usize, terms: &[(&[u32], i64)]) -> IntPoly {
        let mut p = IntPoly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m.to_vec(), BigInt::from(*c));
        }
        p
    }

    #[test]
    fn level_one_is_plain_sum_and_product() {
        let w = witt_polynomials(2, 1);
        assert_eq!(w.sum[0], poly_from(2, &[(&[1, 0], 1), (&[0, 1], 1)]));
        assert_eq!(w.product[0], poly_from(2, &[(&[1, 1], 1)]));
    }

    #[test]
    fn second_sum_polynomial_p2() {
        // vars x0 x1 y0 y1
        let w = witt_polynomials(2, 2);
        let expect = poly_from(
            4,
            &[(&[0, 1, 0, 0], 1), (&[0, 0, 0, 1], 1), (&[1, 0, 1, 0], -1)],
        );
        assert_eq!(w.sum[1], expect);
    }

    #[test]
    fn second_sum_polynomial_p3() {
        let w = witt_polynomials(3, 2);
        let expect = poly_from(
            4,
            &[
                (&[0, 1, 0, 0], 1),
                (&[0, 0, 0, 1], 1),
                (&[2, 0, 1, 0], -1),
                (&[1, 0, 2, 0], -1),
            ],
        );
        assert_eq!(w.sum[1], expect);
    }

    #[test]
    fn second_product_polynomial_p2() {
        // P_1 = x0^2 y1 + y0^2 x1 + 2 x1 y1
        let w = witt_polynomials(2, 2);
        let expect = poly_from(
            4,
            &[(&[2, 0, 0, 1], 1), (&[0, 1, 2, 0], 1), (&[0, 1, 0, 1], 2)],
        );
        assert_eq!(w.product[1], expect);
    }

    #[test]
    fn ghost_identity_small_grid() {
        for p in [2u32, 3] {
            for n in 1..=3 {
                let w = witt_polynomials(p, n);
                for seed in 0..20i64 {
                    let x: Vec<BigInt> = (0..n)
                        .map(|i| BigInt::from((seed * 7 + i as i64 * 3) % 11 - 5))
                        .collect();
                    let y: Vec<BigInt> = (0..n)
                        .map(|i| BigInt::from((seed * 5 + i as i64 * 13) % 9 - 4))
                        .collect();
                    assert!(w.ghost_identities_hold(&x, &y), "p={p} n={n} seed={seed}");
                }
            }
        }
    }
}
