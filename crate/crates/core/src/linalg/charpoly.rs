//! Characteristic and minimal polynomials, nilpotency.

use super::{solve_right, Matrix};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

impl Matrix {
    /// Upper Hessenberg matrix similar to `self`.
    ///
    /// Elimination below the subdiagonal pivots on any nonzero entry, so
    /// the reduction never divides by zero in characteristic p.
    pub fn hessenberg(&self) -> Result<Matrix> {
        self.require_square()?;
        let f = self.field;
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| h[(i, j)] != 0) else {
                continue;
            };
            h.swap_rows(piv, j + 1);
            h.swap_cols(piv, j + 1);
            let inv = f.inv_raw(h[(j + 1, j)])?;
            for k in j + 2..n {
                let u = f.mul_raw(h[(k, j)], inv);
                if u == 0 {
                    continue;
                }
                // row_k -= u * row_{j+1}
                for c in 0..n {
                    let t = f.mul_raw(u, h[(j + 1, c)]);
                    h[(k, c)] = f.sub_raw(h[(k, c)], t);
                }
                // col_{j+1} += u * col_k
                for r in 0..n {
                    let t = f.mul_raw(u, h[(r, k)]);
                    h[(r, j + 1)] = f.add_raw(h[(r, j + 1)], t);
                }
            }
        }
        Ok(h)
    }

    /// `det(xI - A)`, monic of degree `rows`. The 0x0 matrix gives `1`.
    pub fn char_poly(&self) -> Result<Polynomial> {
        let h = self.hessenberg()?;
        let f = self.field;
        let n = self.rows;
        // chain[m] = characteristic polynomial of the leading m x m block.
        let mut chain: Vec<Polynomial> = Vec::with_capacity(n + 1);
        chain.push(Polynomial::one(f));
        for m in 0..n {
            let linear = Polynomial::from_raw(f, vec![f.neg_raw(h[(m, m)]), 1]);
            let mut pm = &linear * &chain[m];
            let mut t = 1u32;
            for i in 1..=m {
                t = f.mul_raw(t, h[(m - i + 1, m - i)]);
                let c = f.mul_raw(t, h[(m - i, m)]);
                if c == 0 {
                    continue;
                }
                pm = &pm - &chain[m - i].scale(f.elem(c as u64))?;
            }
            chain.push(pm);
        }
        Ok(chain.pop().expect("chain starts non-empty"))
    }

    /// Substitutes the matrix into `g` by Horner's rule.
    pub fn eval_poly(&self, g: &Polynomial) -> Result<Matrix> {
        self.require_square()?;
        if g.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field.modulus(),
                right: g.field().modulus(),
            });
        }
        let n = self.rows;
        let mut acc = Matrix::zeros(self.field, n, n);
        for &c in g.raw().iter().rev() {
            acc = acc.mul(self)?;
            for i in 0..n {
                acc[(i, i)] = self.field.add_raw(acc[(i, i)], c);
            }
        }
        Ok(acc)
    }

    /// Monic polynomial of least degree with `v` in its kernel after substitution.
    fn local_annihilator(&self, v: Matrix) -> Result<Polynomial> {
        let f = self.field;
        let mut krylov = Matrix::zeros(f, self.rows, 0);
        let mut cur = v;
        loop {
            let extended = krylov.hstack(&cur)?;
            if extended.rank() < extended.cols() {
                // cur = sum_i c_i A^i v, so x^k - sum_i c_i x^i kills v.
                let c = solve_right(&krylov, &cur)?;
                let k = krylov.cols();
                let mut coeffs: Vec<u32> = (0..k).map(|i| f.neg_raw(c[(i, 0)])).collect();
                coeffs.push(1);
                return Ok(Polynomial::from_raw(f, coeffs));
            }
            krylov = extended;
            cur = self.mul(&cur)?;
        }
    }

    /// Minimal polynomial as the LCM of the local annihilators of the
    /// standard basis vectors. The 0x0 matrix gives `1`.
    pub fn min_poly(&self) -> Result<Polynomial> {
        self.require_square()?;
        let f = self.field;
        let mut acc = Polynomial::one(f);
        for j in 0..self.rows {
            let mut e = Matrix::zeros(f, self.rows, 1);
            e[(j, 0)] = 1;
            let g = self.local_annihilator(e)?;
            acc = acc.lcm(&g)?;
        }
        Ok(acc)
    }

    /// Nilpotency decided twice: `char_poly == x^r` and `A^r == 0`.
    /// The two must agree; a disagreement is reported as a consistency error.
    pub fn is_nilpotent(&self) -> Result<bool> {
        self.require_square()?;
        let r = self.rows;
        let by_poly = self.char_poly()? == Polynomial::monomial(self.field, r);
        let by_power = self.pow(r as u64)?.is_zero();
        if by_poly != by_power {
            return Err(Error::Consistency(format!(
                "nilpotency tests disagree (char poly: {by_poly}, power: {by_power})"
            )));
        }
        Ok(by_poly)
    }
}
