//! Indexed enumeration of `GL_r(W_n(F_q))`.

use super::matrix::Matrix;
use crate::arith::WittRing;

/// `|GL_r(W_n(F_q))| = q^{r²(n-1)} · Π_{i<r} (q^r − q^i)`, saturating.
pub fn gl_order(q: u64, r: usize, n: usize) -> u128 {
    let q = u128::from(q);
    let r32 = r as u32;
    let mut acc: u128 = 1;
    for i in 0..r32 {
        let term = q.saturating_pow(r32).saturating_sub(q.saturating_pow(i));
        acc = acc.saturating_mul(term);
    }
    acc.saturating_mul(q.saturating_pow(r32 * r32 * (n as u32 - 1)))
}

/// Element `k` is the residue-invertible matrix whose residue is the
/// `k / q^{r²(n-1)}`-th invertible residue matrix (in index order) and whose
/// higher coordinates are the base-`q` digits of `k mod q^{r²(n-1)}`.
pub struct GeneralLinear {
    ring: &'static WittRing,
    r: usize,
    residues: Vec<Vec<u64>>,
    high: u64,
}

impl GeneralLinear {
    /// Callers bound `gl_order` first; this materializes all residue
    /// matrices.
    pub fn new(ring: &'static WittRing, r: usize) -> GeneralLinear {
        let field_ring = ring.at_level(1).expect("level 1 exists");
        let q = u64::from(ring.field().order());
        let cells = (r * r) as u32;
        let residues = (0..q.pow(cells))
            .filter_map(|k| {
                let digits = digits(k, q, r * r);
                let m = Matrix::from_fn(field_ring, r, r, |i, j| {
                    field_ring.from_index(digits[i * r + j])
                });
                m.is_invertible().then_some(digits)
            })
            .collect();
        let high = q.pow(cells * (ring.level() as u32 - 1));
        GeneralLinear {
            ring,
            r,
            residues,
            high,
        }
    }

    pub fn len(&self) -> u64 {
        self.residues.len() as u64 * self.high
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn element(&self, k: u64) -> Matrix {
        let q = u64::from(self.ring.field().order());
        let res = &self.residues[(k / self.high) as usize];
        let cells = self.r * self.r;
        let hi = digits(k % self.high, q, cells * (self.ring.level() - 1));
        Matrix::from_fn(self.ring, self.r, self.r, |i, j| {
            let c = i * self.r + j;
            let mut idx = res[c];
            let mut scale = q;
            for lvl in 1..self.ring.level() {
                idx += hi[(lvl - 1) * cells + c] * scale;
                scale *= q;
            }
            self.ring.from_index(idx)
        })
    }
}

fn digits(mut k: u64, q: u64, len: usize) -> Vec<u64> {
    (0..len)
        .map(|_| {
            let d = k % q;
            k /= q;
            d
        })
        .collect()
}
