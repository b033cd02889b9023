use std::fmt;

use crate::arith::{Witt, WittRing};
use crate::error::{Error, Result};

/// Dense matrix over one local ring `W_n(F_q)`; column `j` is the image of
/// the `j`-th source basis vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: &'static WittRing,
    rows: usize,
    cols: usize,
    data: Vec<Witt>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[", self.ring)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(ring: &'static WittRing, rows: usize, cols: usize) -> Matrix {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &'static WittRing, size: usize) -> Matrix {
        Matrix::scalar(ring, size, &ring.one())
    }

    pub fn scalar(ring: &'static WittRing, size: usize, c: &Witt) -> Matrix {
        let mut m = Matrix::zeros(ring, size, size);
        for i in 0..size {
            m.set(i, i, c.clone());
        }
        m
    }

    pub fn diagonal(ring: &'static WittRing, entries: &[Witt]) -> Matrix {
        let mut m = Matrix::zeros(ring, entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn from_fn(
        ring: &'static WittRing,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Witt,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                debug_assert!(std::ptr::eq(e.ring(), ring));
                data.push(e);
            }
        }
        Matrix {
            ring,
            rows,
            cols,
            data,
        }
    }

    pub fn from_rows(ring: &'static WittRing, rows: Vec<Vec<Witt>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(Error::Shape(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for e in row {
                if !std::ptr::eq(e.ring(), ring) {
                    return Err(Error::BaseMismatch(format!(
                        "entry in {:?}, expected {:?}",
                        e.ring(),
                        ring
                    )));
                }
                data.push(e);
            }
        }
        Ok(Matrix {
            ring,
            rows: r,
            cols: c,
            data,
        })
    }

    /// Matrix over `W_n(F_p)` from integers, convenient in tests.
    pub fn from_ints(ring: &'static WittRing, rows: &[&[i64]]) -> Matrix {
        let c = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(ring, rows.len(), c, |i, j| ring.from_int(rows[i][j]))
    }

    pub fn ring(&self) -> &'static WittRing {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Witt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Witt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Witt] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Witt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Witt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Witt::is_zero)
    }

    fn map(&self, f: impl Fn(&Witt) -> Witt) -> Matrix {
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || !std::ptr::eq(self.ring, other.ring) {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} over {:?} by {}x{} over {:?}",
                self.rows, self.cols, self.ring, other.rows, other.cols, other.ring
            )));
        }
        let mut out = Matrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.same_shape(other)?;
        Ok(Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    fn same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows
            || self.cols != other.cols
            || !std::ptr::eq(self.ring, other.ring)
        {
            return Err(Error::Shape(format!(
                "{}x{} over {:?} vs {}x{} over {:?}",
                self.rows, self.cols, self.ring, other.rows, other.cols, other.ring
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Witt) -> Matrix {
        self.map(|a| a * c)
    }

    pub fn mul_vec(&self, v: &[Witt]) -> Vec<Witt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(self.ring.zero(), |acc, j| &acc + &(self.get(i, j) * &v[j]))
            })
            .collect()
    }

    /// Entrywise `σ^e`.
    pub fn frobenius(&self, e: i64) -> Matrix {
        self.map(|a| a.frobenius(e))
    }

    pub fn truncate(&self, m: usize) -> Result<Matrix> {
        let ring = self.ring.at_level(m)?;
        if m > self.ring.level() {
            return Err(Error::LevelOutOfRange {
                level: m,
                min: 1,
                max: self.ring.level(),
            });
        }
        Ok(Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| a.truncate(m))
                .collect::<Result<_>>()?,
        })
    }

    pub fn zero_pad(&self, n: usize) -> Result<Matrix> {
        let ring = self.ring.at_level(n)?;
        Ok(Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| a.zero_pad(n))
                .collect::<Result<_>>()?,
        })
    }

    /// Reduction mod `p`, a matrix over `W_1(F_q) = F_q`.
    pub fn residue(&self) -> Matrix {
        self.truncate(1).expect("level ≥ 1")
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |i, j| {
            self.get(j, i).clone()
        })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || !std::ptr::eq(self.ring, other.ring) {
            return Err(Error::Shape("hstack needs equal row counts".into()));
        }
        Ok(Matrix::from_fn(
            self.ring,
            self.rows,
            self.cols + other.cols,
            |i, j| {
                if j < self.cols {
                    self.get(i, j).clone()
                } else {
                    other.get(i, j - self.cols).clone()
                }
            },
        ))
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        assert!(std::ptr::eq(self.ring, other.ring));
        let zero = self.ring.zero();
        Matrix::from_fn(
            self.ring,
            self.rows + other.rows,
            self.cols + other.cols,
            |i, j| match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => zero.clone(),
            },
        )
    }

    /// Columns `cols` in order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, cols.len(), |i, j| {
            self.get(i, cols[j]).clone()
        })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] += c · row[source]`.
    pub fn add_row_multiple(&mut self, target: usize, source: usize, c: &Witt) {
        for j in 0..self.cols {
            let v = self.get(source, j) * c;
            let idx = target * self.cols + j;
            self.data[idx] = &self.data[idx] + &v;
        }
    }

    /// `col[target] += c · col[source]`.
    pub fn add_col_multiple(&mut self, target: usize, source: usize, c: &Witt) {
        for i in 0..self.rows {
            let v = self.get(i, source) * c;
            let idx = i * self.cols + target;
            self.data[idx] = &self.data[idx] + &v;
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Witt) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = &self.data[idx] * c;
        }
    }

    /// Rank of the residue matrix over `F_q`.
    pub fn residue_rank(&self) -> usize {
        residue_pivots(&self.residue().transpose()).len()
    }

    /// A square matrix over a local ring is invertible iff its residue is.
    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.residue_rank() == self.rows
    }

    /// Gauss–Jordan with unit pivots.
    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(self.ring, n);
        for k in 0..n {
            let pivot = (k..n).find(|&i| a.get(i, k).is_unit())?;
            a.swap_rows(k, pivot);
            inv.swap_rows(k, pivot);
            let u = a.get(k, k).inverse()?;
            a.scale_row(k, &u);
            inv.scale_row(k, &u);
            for i in 0..n {
                if i != k && !a.get(i, k).is_zero() {
                    let c = -a.get(i, k);
                    a.add_row_multiple(i, k, &c);
                    inv.add_row_multiple(i, k, &c);
                }
            }
        }
        Some(inv)
    }

    /// Stable byte-level key: element indices in row-major order.
    pub fn key(&self) -> Vec<u32> {
        self.data.iter().map(|w| w.index() as u32).collect()
    }
}

/// Pivot columns of the reduced row echelon form of a matrix over `F_q`
/// (level 1), scanning columns left to right.
pub fn residue_pivots(m: &Matrix) -> Vec<usize> {
    assert_eq!(
        m.ring().level(),
        1,
        "residue_pivots expects a level-1 matrix"
    );
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..a.cols() {
        if row == a.rows() {
            break;
        }
        let Some(p) = (row..a.rows()).find(|&i| !a.get(i, col).is_zero()) else {
            continue;
        };
        a.swap_rows(row, p);
        let u = a
            .get(row, col)
            .inverse()
            .expect("nonzero is a unit in a field");
        a.scale_row(row, &u);
        for i in 0..a.rows() {
            if i != row && !a.get(i, col).is_zero() {
                let c = -a.get(i, col);
                a.add_row_multiple(i, row, &c);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}
