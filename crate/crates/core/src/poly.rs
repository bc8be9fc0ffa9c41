//! Dense univariate polynomials over a prime field.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

/// Coefficients are stored in ascending degree with trailing zeros trimmed;
/// the zero polynomial has no coefficients and `degree() == None`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl Polynomial {
    pub fn zero(field: PrimeField) -> Self {
        Self {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: PrimeField) -> Self {
        Self::monomial(field, 0)
    }

    /// `x^k`.
    pub fn monomial(field: PrimeField, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = 1 % field.modulus() as u32;
        Self::from_raw(field, coeffs)
    }

    /// Builds from ascending coefficients, reducing each mod p.
    pub fn from_coeffs(field: PrimeField, coeffs: &[u64]) -> Self {
        Self::from_raw(field, coeffs.iter().map(|&c| field.reduce(c)).collect())
    }

    pub(crate) fn from_raw(field: PrimeField, mut coeffs: Vec<u32>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Self { field, coeffs }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.field
            .elem(self.coeffs.get(i).copied().unwrap_or(0) as u64)
    }

    /// Ascending coefficient list in canonical form.
    pub fn to_vec(&self) -> Vec<u64> {
        self.coeffs.iter().map(|&c| c as u64).collect()
    }

    pub(crate) fn raw(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().map(|&c| self.field.elem(c as u64))
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    /// Scales to leading coefficient one. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lc) => {
                let inv = self.field.inv_raw(lc).expect("nonzero leading coefficient");
                self.scale_raw(inv)
            }
        }
    }

    fn scale_raw(&self, s: u32) -> Self {
        let f = self.field;
        Self::from_raw(f, self.coeffs.iter().map(|&c| f.mul_raw(c, s)).collect())
    }

    pub fn scale(&self, s: FieldElement) -> Result<Self> {
        self.check(s.field())?;
        Ok(self.scale_raw(s.raw()))
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        Self {
            field: self.field,
            coeffs,
        }
    }

    fn check(&self, other: PrimeField) -> Result<()> {
        if self.field == other {
            Ok(())
        } else {
            Err(Error::FieldMismatch {
                left: self.field.modulus(),
                right: other.modulus(),
            })
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs.field)?;
        let f = self.field;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                f.add_raw(a, b)
            })
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs.field)?;
        let f = self.field;
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or(0);
                let b = rhs.coeffs.get(i).copied().unwrap_or(0);
                f.sub_raw(a, b)
            })
            .collect();
        Ok(Self::from_raw(f, coeffs))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs.field)?;
        if self.is_zero() || rhs.is_zero() {
            return Ok(Self::zero(self.field));
        }
        let f = self.field;
        let mut out = vec![0u32; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = f.add_raw(out[i + j], f.mul_raw(a, b));
            }
        }
        Ok(Self::from_raw(f, out))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: FieldElement) -> Result<FieldElement> {
        self.check(x.field())?;
        let f = self.field;
        let v = self
            .coeffs
            .iter()
            .rev()
            .fold(0u32, |acc, &c| f.add_raw(f.mul_raw(acc, x.raw()), c));
        Ok(f.elem(v as u64))
    }

    /// Euclidean division: returns `(q, r)` with `self = q*g + r` and `deg r < deg g`.
    pub fn divmod(&self, g: &Self) -> Result<(Self, Self)> {
        self.check(g.field)?;
        let dg = g.degree().ok_or(Error::DivisionByZero)?;
        let f = self.field;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dg {
            return Ok((Self::zero(f), self.clone()));
        }
        let lead_inv = f.inv_raw(g.coeffs[dg])?;
        let mut quot = vec![0u32; rem.len() - dg];
        for k in (0..quot.len()).rev() {
            let c = f.mul_raw(rem[k + dg], lead_inv);
            quot[k] = c;
            if c == 0 {
                continue;
            }
            for (j, &gj) in g.coeffs.iter().enumerate() {
                rem[k + j] = f.sub_raw(rem[k + j], f.mul_raw(c, gj));
            }
        }
        rem.truncate(dg);
        Ok((Self::from_raw(f, quot), Self::from_raw(f, rem)))
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.divmod(self)?.1.is_zero())
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.check(other.field)?;
        if self.is_zero() && other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divmod(&b)?.1;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// Monic least common multiple; both inputs must be nonzero.
    pub fn lcm(&self, other: &Self) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let g = self.gcd(other)?;
        let (q, _) = self.checked_mul(other)?.divmod(&g)?;
        Ok(q.monic())
    }

    /// Splits `self = x^k * f` with `f(0) != 0`.
    pub fn split_nilpotent_part(&self) -> Result<(usize, Self)> {
        let k = self
            .coeffs
            .iter()
            .position(|&c| c != 0)
            .ok_or(Error::ZeroPolynomial)?;
        Ok((
            k,
            Self {
                field: self.field,
                coeffs: self.coeffs[k..].to_vec(),
            },
        ))
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Self) -> Polynomial {
        self.checked_add(rhs).expect("field mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Self) -> Polynomial {
        self.checked_sub(rhs).expect("field mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Self) -> Polynomial {
        self.checked_mul(rhs).expect("field mismatch")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "x")?,
                (1, c) => write!(f, "{c}x")?,
                (i, 1) => write!(f, "x^{i}")?,
                (i, c) => write!(f, "{c}x^{i}")?,
            }
        }
        Ok(())
    }
}
