//! Arbitrary-precision integer matrices, row-major. Rectangular shapes are
//! allowed; operations that need a square matrix check for one.

use crate::error::{Error, Result};
use crate::intpoly::IntPoly;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::invalid(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged rows"));
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&v| BigInt::from(v)))
            .collect();
        IntMatrix::new(r, c, entries)
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigInt::one();
        }
        m
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

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.entries[r * self.cols + c]
    }

    pub fn get_mut(&mut self, r: usize, c: usize) -> &mut BigInt {
        &mut self.entries[r * self.cols + c]
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.get_mut(c, r) = self.get(r, c).clone();
            }
        }
        t
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::invalid("shape mismatch in matrix addition"));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        IntMatrix::new(self.rows, self.cols, entries)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != other.rows {
            return Err(Error::invalid("shape mismatch in matrix product"));
        }
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        *out.get_mut(r, c) += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_scalar(&self, s: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> Result<IntMatrix> {
        if !self.is_square() {
            return Err(Error::invalid("power of a non-square matrix"));
        }
        let mut acc = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = e;
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

    pub fn trace(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::invalid("trace of a non-square matrix"));
        }
        Ok((0..self.rows).map(|i| self.get(i, i)).sum())
    }

    /// Vertical stacking; column counts must agree.
    pub fn stack(blocks: &[IntMatrix]) -> Result<IntMatrix> {
        let Some(first) = blocks.first() else {
            return Err(Error::invalid("stacking zero blocks"));
        };
        let cols = first.cols;
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::invalid("column mismatch in stacking"));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let entries = blocks.iter().flat_map(|b| b.entries.clone()).collect();
        IntMatrix::new(rows, cols, entries)
    }

    /// Exact characteristic polynomial, monic of degree = size. The scalar
    /// divisions in the recurrence are exact over the integers.
    pub fn char_poly(&self) -> Result<IntPoly> {
        if !self.is_square() {
            return Err(Error::invalid("characteristic polynomial of a non-square matrix"));
        }
        let n = self.rows;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix::identity(n);
        for k in 1..=n {
            let am = self.mul(&m)?;
            let (c, rem) = num_integer::div_rem(-am.trace()?, BigInt::from(k as i64));
            debug_assert!(rem.is_zero());
            coeffs[n - k] = c.clone();
            m = am;
            for i in 0..n {
                *m.get_mut(i, i) += &c;
            }
        }
        Ok(IntPoly::from_coeffs(coeffs))
    }

    pub fn det(&self) -> Result<BigInt> {
        let p = self.char_poly()?;
        let c0 = p.coeff(0);
        Ok(if self.rows % 2 == 1 { -c0 } else { c0 })
    }

    /// JSON array-of-arrays of decimal strings.
    pub fn to_json(&self) -> String {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).to_string()).collect())
            .collect();
        serde_json::to_string(&rows).unwrap()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self.get(r, c).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}
