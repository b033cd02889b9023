//! Smith normal form over the chain ring `W_n(F_q)` and what it decides:
//! cokernels, lengths, linear systems, exactness.

use super::matrix::Matrix;
use crate::arith::Witt;
use crate::error::{Error, Result};

/// `U·A·V = diag(p^{a_1}, …, p^{a_k})` padded with zeros, `k = min(rows, cols)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snf {
    pub row_transform: Matrix,
    pub col_transform: Matrix,
    /// Nondecreasing, each in `0..=n`; `n` stands for a zero diagonal entry.
    pub valuations: Vec<usize>,
}

impl Snf {
    pub fn diagonal(&self) -> Matrix {
        let ring = self.row_transform.ring();
        let mut d = Matrix::zeros(ring, self.row_transform.rows(), self.col_transform.rows());
        for (i, &a) in self.valuations.iter().enumerate() {
            d.set(i, i, ring.p_power(a));
        }
        d
    }
}

/// Pivot: an entry of least valuation, first in row-major order.
pub fn smith_normal_form(a: &Matrix) -> Snf {
    let ring = a.ring();
    let n = ring.level();
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = Matrix::identity(ring, rows);
    let mut v = Matrix::identity(ring, cols);
    let k_max = rows.min(cols);
    let mut valuations = Vec::with_capacity(k_max);

    for k in 0..k_max {
        let mut best = (n, k, k);
        'search: for i in k..rows {
            for j in k..cols {
                let val = d.get(i, j).valuation();
                if val < best.0 {
                    best = (val, i, j);
                    if val == 0 {
                        break 'search;
                    }
                }
            }
        }
        let (val, pi, pj) = best;
        if val == n {
            valuations.resize(k_max, n);
            break;
        }
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);

        let unit = d.get(k, k).div_p_power(val).expect("valuation checked");
        let unit_inv = unit.inverse().expect("unit part is invertible");
        d.scale_row(k, &unit_inv);
        u.scale_row(k, &unit_inv);
        let pivot = d.get(k, k).clone();

        for i in k + 1..rows {
            if d.get(i, k).is_zero() {
                continue;
            }
            let c = -&d
                .get(i, k)
                .div_exact(&pivot)
                .expect("pivot has least valuation");
            d.add_row_multiple(i, k, &c);
            u.add_row_multiple(i, k, &c);
        }
        for j in k + 1..cols {
            if d.get(k, j).is_zero() {
                continue;
            }
            let c = -&d
                .get(k, j)
                .div_exact(&pivot)
                .expect("pivot has least valuation");
            d.add_col_multiple(j, k, &c);
            v.add_col_multiple(j, k, &c);
        }
        valuations.push(val);
    }

    Snf {
        row_transform: u,
        col_transform: v,
        valuations,
    }
}

/// `coker(A) ≅ ⊕ W_n / p^{a_i}`; rows beyond the diagonal contribute `n`.
pub fn cokernel_invariants(a: &Matrix) -> Vec<usize> {
    let n = a.ring().level();
    let mut inv = smith_normal_form(a).valuations;
    inv.resize(a.rows(), n);
    inv
}

/// Composition length of `im(A)` as a `W_n(F_q)`-module.
pub fn image_length(a: &Matrix) -> usize {
    let n = a.ring().level();
    smith_normal_form(a).valuations.iter().map(|&v| n - v).sum()
}

/// Composition length of `ker(A)`.
pub fn kernel_length(a: &Matrix) -> usize {
    a.cols() * a.ring().level() - image_length(a)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Solved(Vec<Witt>),
    /// Row `row` of the transformed system `D·y = U·b` has no solution.
    NoSolution {
        row: usize,
    },
}

impl Solution {
    pub fn into_option(self) -> Option<Vec<Witt>> {
        match self {
            Solution::Solved(x) => Some(x),
            Solution::NoSolution { .. } => None,
        }
    }
}

/// One solution of `A·x = b` with zero free coordinates, or the obstruction.
pub fn solve_linear(a: &Matrix, b: &[Witt]) -> Solution {
    solve_with(&smith_normal_form(a), a.cols(), b)
}

pub(crate) fn solve_with(snf: &Snf, cols: usize, b: &[Witt]) -> Solution {
    let ring = snf.row_transform.ring();
    let c = snf.row_transform.mul_vec(b);
    let mut y = vec![ring.zero(); cols];
    for (i, ci) in c.iter().enumerate() {
        match snf.valuations.get(i) {
            Some(&a) => match ci.div_p_power(a) {
                Some(q) => y[i] = q,
                None => return Solution::NoSolution { row: i },
            },
            None => {
                if !ci.is_zero() {
                    return Solution::NoSolution { row: i };
                }
            }
        }
    }
    Solution::Solved(snf.col_transform.mul_vec(&y))
}

/// Generators of `ker(A)`: `V·p^{n-a_j} e_j` on the diagonal, `V·e_j` past it.
pub fn kernel_generators(a: &Matrix) -> Vec<Vec<Witt>> {
    let ring = a.ring();
    let n = ring.level();
    let snf = smith_normal_form(a);
    let mut gens = Vec::new();
    for j in 0..a.cols() {
        let scale = match snf.valuations.get(j) {
            Some(0) => continue,
            Some(&v) => n - v,
            None => 0,
        };
        let mut e = vec![ring.zero(); a.cols()];
        e[j] = ring.p_power(scale);
        gens.push(snf.col_transform.mul_vec(&e));
    }
    gens
}

/// Whether `im(A) = ker(B)` for `A: W^s → W^r`, `B: W^r → W^t` with `B·A = 0`.
///
/// Decided twice: by length (`len im A = len ker B`, given `im A ⊆ ker B`)
/// and by solving `A·x = g` for each kernel generator `g` of `B`. A
/// disagreement is an internal error.
pub fn is_exact_pair(a: &Matrix, b: &Matrix) -> Result<bool> {
    if a.rows() != b.cols() || !std::ptr::eq(a.ring(), b.ring()) {
        return Err(Error::Shape(format!(
            "A is {}x{}, B is {}x{}; need rows(A) = cols(B)",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if !b.checked_mul(a)?.is_zero() {
        return Err(Error::NotAComplex { factor: 0 });
    }
    let by_length = image_length(a) == kernel_length(b);
    let snf_a = smith_normal_form(a);
    let by_membership = kernel_generators(b)
        .iter()
        .all(|g| matches!(solve_with(&snf_a, a.cols(), g), Solution::Solved(_)));
    if by_length != by_membership {
        return Err(Error::Internal(format!(
            "exactness by length ({by_length}) and by membership ({by_membership}) disagree"
        )));
    }
    Ok(by_length)
}
