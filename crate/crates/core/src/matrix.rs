//! Exact sparse integer matrices.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

/// A square matrix over `i64` stored by rows. Zero entries are never stored,
/// so structural equality is matrix equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    rows: Vec<BTreeMap<usize, i64>>,
}

impl Matrix {
    pub fn zero(n: usize) -> Self {
        Matrix { n, rows: vec![BTreeMap::new(); n] }
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal_from(&vec![1; n])
    }

    pub fn diagonal_from(d: &[i64]) -> Self {
        let mut m = Self::zero(d.len());
        for (i, &x) in d.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (usize, usize, i64)>) -> Self {
        let mut m = Self::zero(n);
        for (r, c, x) in entries {
            let sum = m.get(r, c) + x;
            m.set(r, c, sum);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.rows[r].get(&c).copied().unwrap_or(0)
    }

    pub fn set(&mut self, r: usize, c: usize, x: i64) {
        assert!(r < self.n && c < self.n, "entry ({r}, {c}) outside a {0}x{0} matrix", self.n);
        if x == 0 {
            self.rows[r].remove(&c);
        } else {
            self.rows[r].insert(c, x);
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.rows.iter().enumerate().flat_map(|(r, row)| row.iter().map(move |(&c, &x)| (r, c, x)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BTreeMap::is_empty)
    }

    /// The transpose, which is the adjoint for real entries.
    pub fn adjoint(&self) -> Self {
        Self::from_entries(self.n, self.entries().map(|(r, c, x)| (c, r, x)))
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(r, c, _)| r == c)
    }

    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn is_projection(&self) -> bool {
        &(self * self) == self && &self.adjoint() == self
    }

    pub fn is_partial_isometry(&self) -> bool {
        &(&(self * &self.adjoint()) * self) == self
    }

    /// Product of a sequence, starting from the identity.
    pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a Matrix>) -> Self {
        factors.into_iter().fold(Self::identity(n), |acc, f| &acc * f)
    }

    /// Rows of space separated integers, one line per row.
    pub fn to_dense_text(&self) -> String {
        let mut out = String::new();
        for r in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|c| self.get(r, c).to_string()).collect();
            writeln!(out, "{}", row.join(" ")).unwrap();
        }
        out
    }

    fn combine(&self, other: &Matrix, sign: i64) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut m = self.clone();
        for (r, c, x) in other.entries() {
            let sum = m.get(r, c) + sign * x;
            m.set(r, c, sum);
        }
        m
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, other: &Matrix) -> Matrix {
        self.combine(other, 1)
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, other: &Matrix) -> Matrix {
        self.combine(other, -1)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, other: &Matrix) -> Matrix {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut m = Matrix::zero(self.n);
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc: BTreeMap<usize, i64> = BTreeMap::new();
            for (&j, &x) in row {
                for (&c, &y) in &other.rows[j] {
                    *acc.entry(c).or_insert(0) += x * y;
                }
            }
            acc.retain(|_, x| *x != 0);
            m.rows[r] = acc;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Matrix::from_entries(2, [(0, 1, 1)]);
        let b = a.adjoint();
        assert_eq!(&a * &b, Matrix::from_entries(2, [(0, 0, 1)]));
        assert_eq!(&b * &a, Matrix::from_entries(2, [(1, 1, 1)]));
        assert!((&a - &a).is_zero());
        assert_eq!(&(&a * &b) + &(&b * &a), Matrix::identity(2));
        assert!(a.is_partial_isometry());
        assert!(!a.is_projection());
        assert!((&a * &b).is_projection());
        assert_eq!(Matrix::product(2, [&a, &a]), Matrix::zero(2));
        assert_eq!(a.to_dense_text(), "0 1\n0 0\n");
    }
}
