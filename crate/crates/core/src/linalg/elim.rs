//! Gauss–Jordan elimination and the subspace operations built on it.

use super::Matrix;
use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    /// Strictly increasing.
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Matrix {
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| m[(r, col)] != 0) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = f.inv_raw(m[(row, col)]).expect("pivot is nonzero");
            for j in col..m.cols {
                m[(row, j)] = f.mul_raw(m[(row, j)], inv);
            }
            for r in 0..m.rows {
                let factor = m[(r, col)];
                if r == row || factor == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let t = f.mul_raw(factor, m[(row, j)]);
                    m[(r, j)] = f.sub_raw(m[(r, j)], t);
                }
            }
            pivots.push(col);
            row += 1;
        }
        let rank = pivots.len();
        Rref {
            reduced: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of `{x : self * x = 0}`.
    pub fn kernel_basis(&self) -> SubspaceBasis {
        let f = self.field;
        let Rref {
            reduced, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut k = Matrix::zeros(f, self.cols, free.len());
        for (j, &fc) in free.iter().enumerate() {
            k[(fc, j)] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                k[(pc, j)] = f.neg_raw(reduced[(r, fc)]);
            }
        }
        SubspaceBasis::span(&k)
    }

    /// Canonical basis of the column space.
    pub fn image_basis(&self) -> SubspaceBasis {
        SubspaceBasis::span(self)
    }
}

/// A linear subspace of `F_p^n`, held in canonical form.
///
/// The basis matrix has the subspace's vectors as columns; its transpose is
/// in reduced row echelon form. Two subspaces are equal exactly when their
/// canonical bases are equal, so `PartialEq` is subspace equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubspaceBasis {
    basis: Matrix,
}

impl SubspaceBasis {
    /// The span of the columns of `columns`.
    pub fn span(columns: &Matrix) -> Self {
        let r = columns.transpose().rref();
        let rows = r.reduced.submatrix(0, 0, r.rank, columns.rows());
        Self {
            basis: rows.transpose(),
        }
    }

    pub fn full(field: PrimeField, n: usize) -> Self {
        Self {
            basis: Matrix::identity(field, n),
        }
    }

    pub fn trivial(field: PrimeField, n: usize) -> Self {
        Self {
            basis: Matrix::zeros(field, n, 0),
        }
    }

    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Basis vectors as the columns of an `ambient_dim x dim` matrix.
    pub fn matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn vectors(&self) -> Vec<Vec<u64>> {
        self.basis.to_columns()
    }

    pub fn contains(&self, v: &[u64]) -> Result<bool> {
        if v.len() != self.ambient_dim() {
            return Err(Error::Dimension(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim()
            )));
        }
        let col = Matrix::column_vector(self.field(), v);
        Ok(self.basis.hstack(&col)?.rank() == self.dim())
    }

    pub fn is_subspace_of(&self, other: &Self) -> Result<bool> {
        if self.ambient_dim() != other.ambient_dim() {
            return Err(Error::Dimension(
                "subspaces of different ambient spaces".into(),
            ));
        }
        Ok(other.basis.hstack(&self.basis)?.rank() == other.dim())
    }

    /// Whether `a` maps the subspace into itself.
    pub fn is_invariant_under(&self, a: &Matrix) -> Result<bool> {
        let image = a.mul(&self.basis)?;
        Ok(self.basis.hstack(&image)?.rank() == self.dim())
    }
}

/// Solves `b * x = c` for `x`, where `b` has full column rank.
///
/// Fails with [`Error::Inconsistent`] when some column of `c` lies outside
/// the column space of `b`.
pub fn solve_right(b: &Matrix, c: &Matrix) -> Result<Matrix> {
    if b.rows() != c.rows() {
        return Err(Error::Dimension(format!(
            "solve with {} and {} rows",
            b.rows(),
            c.rows()
        )));
    }
    let k = b.cols();
    let r = b.hstack(c)?.rref();
    let lhs_pivots = r.pivots.iter().take_while(|&&p| p < k).count();
    if lhs_pivots < k {
        return Err(Error::Precondition(
            "coefficient matrix does not have full column rank".into(),
        ));
    }
    if let Some(&p) = r.pivots.get(k) {
        return Err(Error::Inconsistent(format!(
            "right-hand column {} is outside the column space",
            p - k
        )));
    }
    Ok(r.reduced.submatrix(0, k, k, c.cols()))
}

/// Completes linearly independent columns to an invertible square matrix.
///
/// The given columns come first, unchanged; then standard unit vectors are
/// scanned in index order and each one that raises the rank is appended.
pub fn extend_to_full_basis(b: &Matrix) -> Result<Matrix> {
    let n = b.rows();
    if b.rank() != b.cols() {
        return Err(Error::Precondition(
            "basis vectors are linearly dependent".into(),
        ));
    }
    let f = b.field();
    let mut t = b.clone();
    for i in 0..n {
        if t.cols() == n {
            break;
        }
        let mut e = Matrix::zeros(f, n, 1);
        e[(i, 0)] = 1;
        let candidate = t.hstack(&e)?;
        if candidate.rank() == candidate.cols() {
            t = candidate;
        }
    }
    debug_assert_eq!(t.cols(), n);
    Ok(t)
}
