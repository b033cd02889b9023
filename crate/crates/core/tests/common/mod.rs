#![allow(dead_code)]

use bkn::bk::BknModule;
use bkn::semilinear::Matrix;
use bkn::{PerfectBase, WittRing};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn random_matrix(
    rng: &mut ChaCha8Rng,
    ring: &'static WittRing,
    rows: usize,
    cols: usize,
) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |_, _| {
        ring.from_index(rng.gen_range(0..ring.size()))
    })
}

pub fn random_invertible(rng: &mut ChaCha8Rng, ring: &'static WittRing, r: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, ring, r, r);
        if m.is_invertible() {
            return m;
        }
    }
}

/// `P = U·D·V^{-1}`, `Q = V·D'·U^{-1}` with `D·D' = D'·D = ξ`, each diagonal
/// entry of `D` being `1` or `ξ`. Valid at every level by construction.
pub fn random_bkn_block(
    rng: &mut ChaCha8Rng,
    ring: &'static WittRing,
    r: usize,
) -> (Matrix, Matrix) {
    let u = random_invertible(rng, ring, r);
    let v = random_invertible(rng, ring, r);
    let (one, xi) = (ring.one(), ring.p_elem());
    let mut d = Vec::with_capacity(r);
    let mut d2 = Vec::with_capacity(r);
    for _ in 0..r {
        if rng.gen_bool(0.5) {
            d.push(one.clone());
            d2.push(xi.clone());
        } else {
            d.push(xi.clone());
            d2.push(one.clone());
        }
    }
    let d = Matrix::diagonal(ring, &d);
    let d2 = Matrix::diagonal(ring, &d2);
    let p = u
        .checked_mul(&d)
        .unwrap()
        .checked_mul(&v.inverse().unwrap())
        .unwrap();
    let q = v
        .checked_mul(&d2)
        .unwrap()
        .checked_mul(&u.inverse().unwrap())
        .unwrap();
    (p, q)
}

pub fn random_bkn(
    rng: &mut ChaCha8Rng,
    base: &PerfectBase,
    level: usize,
    max_rank: usize,
) -> BknModule {
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for s in 0..base.factor_count() {
        let ring = base.ring(s, level).unwrap();
        let r = rng.gen_range(1..=max_rank);
        let (p, q) = random_bkn_block(rng, ring, r);
        phi.push(p);
        psi.push(q);
    }
    BknModule::new(base.clone(), level, phi, psi).unwrap()
}

/// A level-1 pair with `PQ = QP = 0`: `P = U·diag(I_a, 0)·V^{-1}`,
/// `Q = V·diag(0, X)·U^{-1}` with `X` random. Exact iff `X` is invertible.
pub fn random_complex_block(
    rng: &mut ChaCha8Rng,
    ring: &'static WittRing,
    r: usize,
) -> (Matrix, Matrix) {
    assert_eq!(ring.level(), 1);
    let a = rng.gen_range(0..=r);
    let u = random_invertible(rng, ring, r);
    let v = random_invertible(rng, ring, r);
    let x = random_matrix(rng, ring, r - a, r - a);
    let ia = Matrix::identity(ring, a).block_diag(&Matrix::zeros(ring, r - a, r - a));
    let xa = Matrix::zeros(ring, a, a).block_diag(&x);
    let p = u
        .checked_mul(&ia)
        .unwrap()
        .checked_mul(&v.inverse().unwrap())
        .unwrap();
    let q = v
        .checked_mul(&xa)
        .unwrap()
        .checked_mul(&u.inverse().unwrap())
        .unwrap();
    (p, q)
}

pub fn random_complex(rng: &mut ChaCha8Rng, base: &PerfectBase, max_rank: usize) -> BknModule {
    let mut phi = Vec::new();
    let mut psi = Vec::new();
    for s in 0..base.factor_count() {
        let ring = base.ring(s, 1).unwrap();
        let r = rng.gen_range(1..=max_rank);
        let (p, q) = random_complex_block(rng, ring, r);
        phi.push(p);
        psi.push(q);
    }
    BknModule::new(base.clone(), 1, phi, psi).unwrap()
}

/// Every `(P, Q)` of size `r` over `F_q` at level 1 (single-factor base).
pub fn all_level_one_pairs(p: u32, f: u32, r: usize) -> Vec<BknModule> {
    let ring = WittRing::get(p, f, 1).unwrap();
    let base = PerfectBase::new(p, vec![f]).unwrap();
    let q = ring.size();
    let cells = r * r;
    let total = q.pow(2 * cells as u32);
    (0..total)
        .map(|mut k| {
            let mut digits = Vec::with_capacity(2 * cells);
            for _ in 0..2 * cells {
                digits.push(k % q);
                k /= q;
            }
            let a = Matrix::from_fn(ring, r, r, |i, j| ring.from_index(digits[i * r + j]));
            let b = Matrix::from_fn(ring, r, r, |i, j| {
                ring.from_index(digits[cells + i * r + j])
            });
            BknModule::new(base.clone(), 1, vec![a], vec![b]).unwrap()
        })
        .collect()
}
