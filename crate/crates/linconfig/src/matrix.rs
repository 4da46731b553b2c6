//! Dense integer matrices with exact arbitrary-precision entries.
//!
//! Everything in this module is exact: determinants and ranks are computed
//! with fraction-free (Bareiss) elimination over `BigInt`, never floating
//! point.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::LinAlgError;

/// A dense `rows x cols` matrix over the integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntMatrix { rows, cols, entries }
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
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows of `i64` entries. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row);
        }
        IntMatrix { rows: r, cols: c, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vec<BigInt> {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[BigInt]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in matrix product");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum::<BigInt>()
            })
            .collect()
    }

    pub fn neg_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += k * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let add = k * &self[(src, j)];
            self[(dst, j)] += add;
        }
    }

    /// col[dst] += k * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let add = k * &self[(i, src)];
            self[(i, dst)] += add;
        }
    }

    pub fn neg_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let v = -self[(i, j)].clone();
            self[(i, j)] = v;
        }
    }

    /// Returns a copy with row `i` removed.
    pub fn delete_row(&self, i: usize) -> IntMatrix {
        let rows: Vec<Vec<BigInt>> = (0..self.rows)
            .filter(|&r| r != i)
            .map(|r| self.row_vec(r))
            .collect();
        if rows.is_empty() {
            IntMatrix::zero(0, self.cols)
        } else {
            IntMatrix::from_rows(rows)
        }
    }

    /// Returns a copy with column `j` removed.
    pub fn delete_col(&self, j: usize) -> IntMatrix {
        let mut entries = Vec::with_capacity(self.rows * (self.cols - 1));
        for i in 0..self.rows {
            for c in 0..self.cols {
                if c != j {
                    entries.push(self[(i, c)].clone());
                }
            }
        }
        IntMatrix {
            rows: self.rows,
            cols: self.cols - 1,
            entries,
        }
    }

    /// Selects the rows listed in `idx`, in order.
    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        if idx.is_empty() {
            return IntMatrix::zero(0, self.cols);
        }
        IntMatrix::from_rows(idx.iter().map(|&i| self.row_vec(i)).collect())
    }

    /// Selects the columns listed in `idx`, in order.
    pub fn select_cols(&self, idx: &[usize]) -> IntMatrix {
        let mut entries = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                entries.push(self[(i, j)].clone());
            }
        }
        IntMatrix {
            rows: self.rows,
            cols: idx.len(),
            entries,
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        IntMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows);
        let mut entries = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for i in 0..self.rows {
            entries.extend(self.row(i).iter().cloned());
            entries.extend(other.row(i).iter().cloned());
        }
        IntMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            entries,
        }
    }

    pub fn reverse_rows(&self) -> IntMatrix {
        IntMatrix::from_rows((0..self.rows).rev().map(|i| self.row_vec(i)).collect())
    }

    pub fn reverse_cols(&self) -> IntMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for i in 0..self.rows {
            entries.extend(self.row(i).iter().rev().cloned());
        }
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn is_zero_matrix(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Exact determinant by fraction-free Bareiss elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = 1i32;
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                    Some(p) => {
                        a.swap_rows(k, p);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = &num / &prev;
                }
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        let d = a[(n - 1, n - 1)].clone();
        if sign < 0 {
            -d
        } else {
            d
        }
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Exact rank via fraction-free elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..a.cols {
            let pivot = (row..a.rows).find(|&i| !a[(i, col)].is_zero());
            let Some(p) = pivot else { continue };
            a.swap_rows(row, p);
            for i in row + 1..a.rows {
                if a[(i, col)].is_zero() {
                    continue;
                }
                // clear a[(i, col)] using the pivot row over Q, scaled to stay integral
                let piv = a[(row, col)].clone();
                let val = a[(i, col)].clone();
                for j in col..a.cols {
                    let v = &piv * &a[(i, j)] - &val * &a[(row, j)];
                    a[(i, j)] = v;
                }
            }
            row += 1;
            rank += 1;
            if row == a.rows {
                break;
            }
        }
        rank
    }

    /// gcd of the determinants of all non-singular `order x order` submatrices.
    ///
    /// Errors with `RankDeficient` when the rank is below `order`.
    pub fn determinantal_divisor(&self, order: usize) -> Result<BigInt, LinAlgError> {
        assert!(
            order <= self.rows.min(self.cols),
            "minor order exceeds matrix dimensions"
        );
        if self.rank() < order {
            return Err(LinAlgError::RankDeficient);
        }
        if order == 0 {
            return Ok(BigInt::one());
        }
        let mut g = BigInt::zero();
        let row_sets = combinations(self.rows, order);
        let col_sets = combinations(self.cols, order);
        for rs in &row_sets {
            let sub_rows = self.select_rows(rs);
            for cs in &col_sets {
                let minor = sub_rows.select_cols(cs).determinant();
                if !minor.is_zero() {
                    g = num_integer::gcd(g, minor);
                    if g.is_one() {
                        return Ok(g);
                    }
                }
            }
        }
        Ok(g)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.entries[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            if i + 1 < self.rows {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// gcd of a slice of integers (non-negative result, 0 for the empty slice).
pub fn vec_gcd(v: &[BigInt]) -> BigInt {
    v.iter()
        .fold(BigInt::zero(), |acc, x| num_integer::gcd(acc, x.clone()))
}
