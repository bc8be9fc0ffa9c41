//! Dense matrices over a prime field.

mod charpoly;
mod elim;

pub use elim::{extend_to_full_basis, solve_right, Rref, SubspaceBasis};

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

/// Row-major matrix of canonical residues. Zero-sized shapes are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl Matrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from integer rows, reducing every entry mod p.
    pub fn from_rows<R: AsRef<[u64]>>(field: PrimeField, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend(r.iter().map(|&v| field.reduce(v)));
        }
        Ok(Self {
            field,
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(
        field: PrimeField,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> u64,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(field.reduce(f(i, j)));
            }
        }
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    /// Single-column matrix.
    pub fn column_vector(field: PrimeField, v: &[u64]) -> Self {
        Self::from_fn(field, v.len(), 1, |i, _| v[i])
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns<C: AsRef<[u64]>>(
        field: PrimeField,
        rows: usize,
        cols: &[C],
    ) -> Result<Self> {
        if let Some((j, c)) = cols
            .iter()
            .enumerate()
            .find(|(_, c)| c.as_ref().len() != rows)
        {
            return Err(Error::Dimension(format!(
                "column {j} has {} entries, expected {rows}",
                c.as_ref().len()
            )));
        }
        Ok(Self::from_fn(field, rows, cols.len(), |i, j| {
            cols[j].as_ref()[i]
        }))
    }

    pub(crate) fn from_raw(field: PrimeField, rows: usize, cols: usize, data: Vec<u32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self {
            field,
            rows,
            cols,
            data,
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.elem(self[(i, j)] as u64)
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) -> Result<()> {
        if v.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.modulus(),
                right: v.field().modulus(),
            });
        }
        self[(i, j)] = v.raw();
        Ok(())
    }

    #[inline]
    pub(crate) fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self[(i, j)] as u64).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|&v| v as u64).collect())
            .collect()
    }

    pub fn to_columns(&self) -> Vec<Vec<u64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    fn check_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.modulus(),
                right: other.field.modulus(),
            })
        }
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        self.check_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "{op} of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sum")?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.add_raw(a, b))
            .collect();
        Ok(Self::from_raw(f, self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "difference")?;
        let f = self.field;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f.sub_raw(a, b))
            .collect();
        Ok(Self::from_raw(f, self.rows, self.cols, data))
    }

    pub fn scale(&self, s: FieldElement) -> Self {
        assert_eq!(s.field(), self.field, "field mismatch");
        let f = self.field;
        let s = s.raw();
        Self::from_raw(
            f,
            self.rows,
            self.cols,
            self.data.iter().map(|&a| f.mul_raw(a, s)).collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "product of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = self.field;
        let p = f.modulus();
        let mut out = Self::zeros(f, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for (k, &a) in self.row(i).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (slot, &b) in acc.iter_mut().zip(other.row(k)) {
                    *slot = (*slot + a as u64 * b as u64) % p;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out[(i, j)] = v as u32;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(self.field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self * x` for a vector of canonical residues.
    pub(crate) fn mul_vec_into(&self, x: &[u32], out: &mut [u32]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        let p = self.field.modulus();
        // Defer the reduction when a whole row of products cannot overflow.
        let lazy = (p - 1) * (p - 1) <= u64::MAX / (self.cols.max(1) as u64);
        for (i, o) in out.iter_mut().enumerate() {
            let terms = self.row(i).iter().zip(x);
            let s = if lazy {
                terms.map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p
            } else {
                terms.fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p)
            };
            *o = s as u32;
        }
    }

    pub fn mul_vec(&self, x: &[u64]) -> Result<Vec<u64>> {
        if x.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        let xr: Vec<u32> = x.iter().map(|&v| self.field.reduce(v)).collect();
        let mut out = vec![0; self.rows];
        self.mul_vec_into(&xr, &mut out);
        Ok(out.into_iter().map(u64::from).collect())
    }

    /// Copy of the `rows x cols` block whose top-left corner is `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        assert!(
            r0 + rows <= self.rows && c0 + cols <= self.cols,
            "block out of range"
        );
        Self::from_fn(self.field, rows, cols, |i, j| self[(r0 + i, c0 + j)] as u64)
    }

    /// Columns of `self` followed by columns of `other`.
    pub fn hstack(&self, other: &Self) -> Result<Self> {
        self.check_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        let mut out = Self::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)];
            }
        }
        Ok(out)
    }

    /// Vertical concatenation of blocks that share a column count.
    pub fn vstack(field: PrimeField, cols: usize, blocks: &[Matrix]) -> Result<Self> {
        let mut data = Vec::new();
        let mut rows = 0;
        for b in blocks {
            if b.field != field {
                return Err(Error::FieldMismatch {
                    left: field.modulus(),
                    right: b.field.modulus(),
                });
            }
            if b.cols != cols {
                return Err(Error::Dimension(format!(
                    "vstack block with {} columns, expected {cols}",
                    b.cols
                )));
            }
            data.extend_from_slice(&b.data);
            rows += b.rows;
        }
        Ok(Self::from_raw(field, rows, cols, data))
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let aug = self.hstack(&Self::identity(self.field, n))?;
        let r = aug.rref();
        if r.pivots.iter().take_while(|&&c| c < n).count() < n {
            return Err(Error::DivisionByZero);
        }
        Ok(r.reduced.submatrix(0, n, n, n))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = u32;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &u32 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u32 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}
