//! Finite fields `F_{p^f}` for `p ∈ {2,3,5,7}`, `f ≤ 4`.
//!
//! Elements are stored as a single integer `Σ c_i p^i` where `c_i` are the
//! coefficients in the basis `1, g, …, g^{f-1}` of the Conway-polynomial
//! generator `g`. Conway polynomials are primitive, so `g` also generates the
//! multiplicative group and multiplication goes through exp/log tables.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};

/// `(p, f, coefficients)`, little-endian and monic.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (5, 4, &[2, 4, 4, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
    (7, 3, &[4, 0, 6, 1]),
    (7, 4, &[3, 4, 5, 0, 1]),
];

pub const SUPPORTED_PRIMES: [u32; 4] = [2, 3, 5, 7];
pub const MAX_DEGREE: u32 = 4;

pub fn conway_polynomial(p: u32, degree: u32) -> Option<&'static [u32]> {
    CONWAY
        .iter()
        .find(|(cp, cf, _)| *cp == p && *cf == degree)
        .map(|(_, _, c)| *c)
}

/// Parse a prime power `q` into `(p, f)` when the field is supported.
pub fn split_prime_power(q: u32) -> Result<(u32, u32)> {
    for &p in &SUPPORTED_PRIMES {
        let mut acc = 1u32;
        for f in 1..=MAX_DEGREE {
            acc *= p;
            if acc == q {
                return Ok((p, f));
            }
        }
    }
    Err(Error::Malformed(format!(
        "q = {q} is not a supported prime power"
    )))
}

pub struct GaloisField {
    p: u32,
    degree: u32,
    order: u32,
    modulus: &'static [u32],
    exp: Vec<u16>,
    log: Vec<u32>,
    add: Option<Vec<u16>>,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.degree)
    }
}

static FIELDS: OnceLock<Mutex<HashMap<(u32, u32), &'static GaloisField>>> = OnceLock::new();

impl GaloisField {
    /// The process-wide instance of `F_{p^f}`.
    pub fn get(p: u32, degree: u32) -> Result<&'static GaloisField> {
        if !SUPPORTED_PRIMES.contains(&p) {
            return Err(Error::UnsupportedPrime(p));
        }
        let modulus = conway_polynomial(p, degree).ok_or(Error::UnsupportedField { p, degree })?;
        let registry = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = registry.lock().expect("field registry poisoned");
        let field = guard
            .entry((p, degree))
            .or_insert_with(|| Box::leak(Box::new(GaloisField::build(p, degree, modulus))));
        Ok(*field)
    }

    fn build(p: u32, degree: u32, modulus: &'static [u32]) -> GaloisField {
        let order = p.pow(degree);
        let f = degree as usize;
        let encode = |c: &[u32]| c.iter().rev().fold(0u32, |acc, &d| acc * p + d) as u16;

        // x for f > 1; the root of x + c_0 for f = 1.
        let generator: Vec<u32> = if f == 1 {
            vec![(p - modulus[0]) % p]
        } else {
            let mut g = vec![0; f];
            g[1] = 1;
            g
        };

        let mut exp = Vec::with_capacity(order as usize - 1);
        let mut log = vec![u32::MAX; order as usize];
        let mut cur = vec![0u32; f];
        cur[0] = 1;
        for k in 0..order - 1 {
            let v = encode(&cur);
            assert_eq!(
                log[v as usize],
                u32::MAX,
                "Conway polynomial for ({p},{degree}) is not primitive"
            );
            log[v as usize] = k;
            exp.push(v);
            cur = poly_mulmod(&cur, &generator, modulus, p);
        }
        assert_eq!(
            encode(&cur),
            1,
            "generator order mismatch for ({p},{degree})"
        );

        let mut field = GaloisField {
            p,
            degree,
            order,
            modulus,
            exp,
            log,
            add: None,
        };
        if order <= 256 {
            let q = order as usize;
            let mut table = vec![0u16; q * q];
            for a in 0..q {
                for b in 0..q {
                    table[a * q + b] = field.add_digits(a as u16, b as u16);
                }
            }
            field.add = Some(table);
        }
        field
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn modulus(&self) -> &'static [u32] {
        self.modulus
    }

    pub fn zero(&'static self) -> Fq {
        Fq {
            field: self,
            value: 0,
        }
    }

    pub fn one(&'static self) -> Fq {
        Fq {
            field: self,
            value: 1,
        }
    }

    /// The canonical generator: the class of `x` modulo the Conway polynomial.
    pub fn generator(&'static self) -> Fq {
        Fq {
            field: self,
            value: self.exp[1 % self.exp.len()],
        }
    }

    pub fn element(&'static self, value: u16) -> Fq {
        assert!(u32::from(value) < self.order, "raw value out of range");
        Fq { field: self, value }
    }

    pub fn from_int(&'static self, k: i64) -> Fq {
        let v = k.rem_euclid(i64::from(self.p)) as u16;
        Fq {
            field: self,
            value: v,
        }
    }

    /// Build an element from its little-endian coefficient vector.
    pub fn from_coeffs(&'static self, coeffs: &[u32]) -> Result<Fq> {
        if coeffs.len() != self.degree as usize {
            return Err(Error::Malformed(format!(
                "expected {} coefficients for {:?}, got {}",
                self.degree,
                self,
                coeffs.len()
            )));
        }
        if let Some(&c) = coeffs.iter().find(|&&c| c >= self.p) {
            return Err(Error::Malformed(format!(
                "coefficient {c} not reduced mod {}",
                self.p
            )));
        }
        let v = coeffs.iter().rev().fold(0u32, |acc, &d| acc * self.p + d);
        Ok(Fq {
            field: self,
            value: v as u16,
        })
    }

    pub fn elements(&'static self) -> impl Iterator<Item = Fq> {
        (0..self.order).map(move |v| Fq {
            field: self,
            value: v as u16,
        })
    }

    // Raw operations on encoded values.

    fn add_digits(&self, a: u16, b: u16) -> u16 {
        let (mut a, mut b) = (u32::from(a), u32::from(b));
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u16
    }

    #[inline]
    pub(crate) fn add_raw(&self, a: u16, b: u16) -> u16 {
        match &self.add {
            Some(t) => t[a as usize * self.order as usize + b as usize],
            None => self.add_digits(a, b),
        }
    }

    #[inline]
    pub(crate) fn neg_raw(&self, a: u16) -> u16 {
        let mut a = u32::from(a);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.degree {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as u16
    }

    #[inline]
    pub(crate) fn sub_raw(&self, a: u16, b: u16) -> u16 {
        self.add_raw(a, self.neg_raw(b))
    }

    #[inline]
    pub(crate) fn mul_raw(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.order - 1;
        let k = (self.log[a as usize] + self.log[b as usize]) % n;
        self.exp[k as usize]
    }

    #[inline]
    pub(crate) fn log_raw(&self, a: u16) -> u32 {
        self.log[a as usize]
    }

    #[inline]
    pub(crate) fn exp_raw(&self, k: u64) -> u16 {
        self.exp[(k % u64::from(self.order - 1)) as usize]
    }

    pub(crate) fn inv_raw(&self, a: u16) -> Option<u16> {
        if a == 0 {
            return None;
        }
        let n = self.order - 1;
        Some(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub(crate) fn pow_raw(&self, a: u16, e: u64) -> u16 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = u64::from(self.order - 1);
        let k = (u64::from(self.log[a as usize]) * (e % n)) % n;
        self.exp[k as usize]
    }

    /// `a ↦ a^{p^e}` for any integer `e`; `e` is taken mod the degree.
    pub(crate) fn frobenius_raw(&self, a: u16, e: i64) -> u16 {
        let e = e.rem_euclid(i64::from(self.degree)) as u32;
        if e == 0 || a == 0 {
            return a;
        }
        self.pow_raw(a, u64::from(self.p.pow(e)))
    }

    pub(crate) fn coeffs_raw(&self, a: u16) -> Vec<u32> {
        let mut a = u32::from(a);
        (0..self.degree)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }
}

fn poly_mulmod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let f = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (f..prod.len()).rev() {
        let c = prod[k];
        if c == 0 {
            continue;
        }
        for (i, &m) in modulus.iter().enumerate() {
            prod[k - f + i] = (prod[k - f + i] + (p - c) * m) % p;
        }
    }
    prod.truncate(f);
    prod
}

/// An element of a finite field, tagged with its field.
#[derive(Clone, Copy)]
pub struct Fq {
    field: &'static GaloisField,
    value: u16,
}

impl Fq {
    pub fn field(&self) -> &'static GaloisField {
        self.field
    }

    pub fn raw(&self) -> u16 {
        self.value
    }

    pub fn coeffs(&self) -> Vec<u32> {
        self.field.coeffs_raw(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inverse(&self) -> Option<Fq> {
        self.field.inv_raw(self.value).map(|v| Fq {
            field: self.field,
            value: v,
        })
    }

    pub fn pow(&self, e: u64) -> Fq {
        Fq {
            field: self.field,
            value: self.field.pow_raw(self.value, e),
        }
    }

    pub fn frobenius(&self, e: i64) -> Fq {
        Fq {
            field: self.field,
            value: self.field.frobenius_raw(self.value, e),
        }
    }

    fn check(&self, other: &Fq) {
        assert!(
            std::ptr::eq(self.field, other.field),
            "field mismatch: {:?} vs {:?}",
            self.field,
            other.field
        );
    }
}

impl PartialEq for Fq {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.field, other.field) && self.value == other.value
    }
}

impl Eq for Fq {}

impl std::hash::Hash for Fq {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.field.degree.hash(state);
        self.value.hash(state);
    }
}

impl fmt::Debug for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.coeffs())
    }
}

impl std::ops::Add for Fq {
    type Output = Fq;
    fn add(self, rhs: Fq) -> Fq {
        self.check(&rhs);
        Fq {
            field: self.field,
            value: self.field.add_raw(self.value, rhs.value),
        }
    }
}

impl std::ops::Sub for Fq {
    type Output = Fq;
    fn sub(self, rhs: Fq) -> Fq {
        self.check(&rhs);
        Fq {
            field: self.field,
            value: self.field.sub_raw(self.value, rhs.value),
        }
    }
}

impl std::ops::Mul for Fq {
    type Output = Fq;
    fn mul(self, rhs: Fq) -> Fq {
        self.check(&rhs);
        Fq {
            field: self.field,
            value: self.field.mul_raw(self.value, rhs.value),
        }
    }
}

impl std::ops::Neg for Fq {
    type Output = Fq;
    fn neg(self) -> Fq {
        Fq {
            field: self.field,
            value: self.field.neg_raw(self.value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
        // A monic polynomial of degree ≤ 4 is irreducible iff it has no
        // monic factor of degree ≤ 2.
        let f = modulus.len() - 1;
        for d in 1..=f / 2 {
            let count = p.pow(d as u32);
            for k in 0..count {
                let mut g: Vec<u32> = (0..d).map(|i| (k / p.pow(i as u32)) % p).collect();
                g.push(1);
                if poly_rem(modulus, &g, p).iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }

    fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        let db = b.len() - 1;
        while r.len() > db {
            let c = *r.last().unwrap();
            let shift = r.len() - 1 - db;
            for (i, &bi) in b.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (p - c) * bi) % p;
            }
            r.pop();
        }
        r
    }

    #[test]
    fn conway_table_is_irreducible_and_primitive() {
        for &(p, f, c) in CONWAY {
            assert!(is_irreducible(p, c), "({p},{f}) reducible");
            // build() asserts primitivity
            let field = GaloisField::get(p, f).unwrap();
            assert_eq!(field.order(), p.pow(f));
        }
    }

    #[test]
    fn prime_field_generators_are_least_primitive_roots() {
        let expect = [(2, 1), (3, 2), (5, 2), (7, 3)];
        for (p, g) in expect {
            let field = GaloisField::get(p, 1).unwrap();
            assert_eq!(field.generator().raw(), g);
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for (p, f) in [(2, 2), (3, 2), (2, 3)] {
            let field = GaloisField::get(p, f).unwrap();
            let els: Vec<Fq> = field.elements().collect();
            for &a in &els {
                assert_eq!(a + (-a), field.zero());
                if !a.is_zero() {
                    assert_eq!(a * a.inverse().unwrap(), field.one());
                }
                for &b in &els {
                    assert_eq!(a + b, b + a);
                    assert_eq!(a * b, b * a);
                    for &c in &els {
                        assert_eq!(a * (b + c), a * b + a * c);
                    }
                }
            }
        }
    }

    #[test]
    fn frobenius_on_f4_squares_the_generator() {
        let f4 = GaloisField::get(2, 2).unwrap();
        let g = f4.generator();
        assert_eq!(g.frobenius(1), g * g);
        assert_eq!(g.frobenius(1).frobenius(-1), g);
        assert_eq!(g.frobenius(2), g);
        // g^2 = g + 1 in the Conway basis
        assert_eq!((g * g).coeffs(), vec![1, 1]);
    }

    #[test]
    fn frobenius_is_identity_on_prime_fields() {
        for p in SUPPORTED_PRIMES {
            let field = GaloisField::get(p, 1).unwrap();
            for a in field.elements() {
                assert_eq!(a.frobenius(1), a);
            }
        }
    }

    #[test]
    fn unsupported_inputs_are_rejected() {
        assert!(matches!(
            GaloisField::get(11, 1),
            Err(Error::UnsupportedPrime(11))
        ));
        assert!(matches!(
            GaloisField::get(2, 5),
            Err(Error::UnsupportedField { p: 2, degree: 5 })
        ));
        let f4 = GaloisField::get(2, 2).unwrap();
        assert!(f4.from_coeffs(&[2, 0]).is_err());
        assert!(f4.from_coeffs(&[1]).is_err());
        assert_eq!(split_prime_power(49).unwrap(), (7, 2));
        assert!(split_prime_power(6).is_err());
    }
}
