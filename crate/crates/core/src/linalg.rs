//! Dense exact linear algebra over the rationals.
//!
//! Rank, kernel and solve are all plain Gaussian elimination with a fixed
//! pivot rule (first nonzero entry in column order), so every output is
//! deterministic and every equality below is exact. No floating point is
//! involved anywhere.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rational};

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Build from explicit rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        for (i, row) in rows.iter().enumerate() {
            if row.len() != width {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {width}",
                    row.len()
                )));
            }
        }
        Ok(Self {
            rows: height,
            cols: width,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for integer-valued matrices.
    pub fn from_integer_rows(rows: &[Vec<i64>]) -> Self {
        let height = rows.len();
        let width = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == width));
        Self {
            rows: height,
            cols: width,
            entries: rows.iter().flatten().map(|&n| rat_int(n)).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "add {}x{} to {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "subtract {}x{} from {}x{}",
                other.rows, other.cols, self.rows, self.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for (j, x) in v.iter().enumerate() {
                    acc += self.get(i, j) * x;
                }
                acc
            })
            .collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Stack `self` on top of `other` (both must have the same column count).
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ambient_dim: usize, columns: &[Vec<Rational>]) -> Result<Self> {
        for (j, c) in columns.iter().enumerate() {
            if c.len() != ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has length {}, expected {ambient_dim}",
                    c.len()
                )));
            }
        }
        let mut m = Self::zeros(ambient_dim, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    /// Exact rank over the rationals. Forward elimination only; the reduced
    /// form is not needed for the count.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank >= m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pivot != rank {
                m.swap_rows(pivot, rank);
            }
            let pivot_val = m.get(rank, col).clone();
            for r in (rank + 1)..m.rows {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) / &pivot_val;
                m.set(r, col, Rational::zero());
                for j in (col + 1)..m.cols {
                    let v = m.get(r, j) - &factor * m.get(rank, j);
                    m.set(r, j, v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Reduced row echelon form together with the pivot column list.
    ///
    /// Pivot selection: scan columns left to right, take the first row at or
    /// below the current pivot row with a nonzero entry. This makes the
    /// output, and everything derived from it, deterministic.
    fn row_echelon(&self) -> (RationalMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;

        for col in 0..m.cols {
            if pivot_row >= m.rows {
                break;
            }
            let found = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero());
            let Some(row) = found else { continue };
            if row != pivot_row {
                m.swap_rows(row, pivot_row);
            }

            let pivot = m.get(pivot_row, col).clone();
            for j in col..m.cols {
                let v = m.get(pivot_row, j) / &pivot;
                m.set(pivot_row, j, v);
            }
            for r in 0..m.rows {
                if r == pivot_row || m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for j in col..m.cols {
                    let v = m.get(r, j) - &factor * m.get(pivot_row, j);
                    m.set(r, j, v);
                }
            }

            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Basis of `{ v : self * v = 0 }`. Each basis vector is scaled so its
    /// first nonzero entry is 1; vectors are ordered by free column.
    pub fn kernel_basis(&self) -> Subspace {
        let (rref, pivots) = self.row_echelon();
        let pivot_of_col: std::collections::HashMap<usize, usize> = pivots
            .iter()
            .enumerate()
            .map(|(row, &col)| (col, row))
            .collect();

        let mut basis = Vec::new();
        for free_col in 0..self.cols {
            if pivot_of_col.contains_key(&free_col) {
                continue;
            }
            let mut v = vec![Rational::zero(); self.cols];
            v[free_col] = Rational::one();
            for &pc in &pivots {
                v[pc] = -rref.get(pivot_of_col[&pc], free_col).clone();
            }
            normalize_leading_one(&mut v);
            basis.push(v);
        }
        Subspace {
            ambient_dim: self.cols,
            basis,
        }
    }

    /// One exact solution of `self * x = rhs`, or `None` if inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, rhs: &[Rational]) -> Result<Option<Vec<Rational>>> {
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "rhs length {} does not match {} rows",
                rhs.len(),
                self.rows
            )));
        }
        // Eliminate on the augmented matrix [self | rhs].
        let mut aug = RationalMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let (rref, pivots) = aug.row_echelon();
        // A pivot in the augmented column means 0 = 1 somewhere.
        if pivots.contains(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = rref.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Determinant via elimination. Square matrices only.
    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "determinant of {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = Rational::one();
        for col in 0..n {
            let found = (col..n).find(|&r| !m.get(r, col).is_zero());
            let Some(row) = found else {
                return Ok(Rational::zero());
            };
            if row != col {
                m.swap_rows(row, col);
                det = -det;
            }
            let pivot = m.get(col, col).clone();
            det *= &pivot;
            for r in (col + 1)..n {
                if m.get(r, col).is_zero() {
                    continue;
                }
                let factor = m.get(r, col) / &pivot;
                for j in col..n {
                    let v = m.get(r, j) - &factor * m.get(col, j);
                    m.set(r, j, v);
                }
            }
        }
        Ok(det)
    }
}

impl std::fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(crate::rational::format_rational)
                .collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

/// Scale a vector so its first nonzero entry is 1 (no-op on the zero vector).
pub fn normalize_leading_one(v: &mut [Rational]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x /= &lead;
        }
    }
}

/// A linear subspace of Q^n given by an independent basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    /// Validating constructor: checks vector lengths and linear independence.
    pub fn new(ambient_dim: usize, basis: Vec<Vec<Rational>>) -> Result<Self> {
        for (i, v) in basis.iter().enumerate() {
            if v.len() != ambient_dim {
                return Err(Error::DimensionMismatch(format!(
                    "basis vector {i} has length {}, expected {ambient_dim}",
                    v.len()
                )));
            }
        }
        let m = RationalMatrix::from_columns(ambient_dim, &basis)?;
        if m.rank() != basis.len() {
            return Err(Error::DimensionMismatch(
                "basis vectors are linearly dependent".to_string(),
            ));
        }
        Ok(Self { ambient_dim, basis })
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    /// Exact membership test: true iff `v` is in the span of the basis,
    /// decided by comparing rank([B]) with rank([B | v]).
    pub fn contains(&self, v: &[Rational]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        if v.iter().all(|x| x.is_zero()) {
            return Ok(true);
        }
        let b = RationalMatrix::from_columns(self.ambient_dim, &self.basis)?;
        let mut cols = self.basis.clone();
        cols.push(v.to_vec());
        let extended = RationalMatrix::from_columns(self.ambient_dim, &cols)?;
        Ok(extended.rank() == b.rank())
    }
}

/// Exact dot product.
pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(a: &[Rational], factor: &Rational) -> Vec<Rational> {
    a.iter().map(|x| x * factor).collect()
}

pub fn vec_is_zero(a: &[Rational]) -> bool {
    a.iter().all(|x| x.is_zero())
}
