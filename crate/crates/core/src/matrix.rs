//! Sparse matrices over the rationals.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num::Zero;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::rational::{self, one, Q};

/// Row-major sparse matrix. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Q>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, entries: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, one());
        }
        m
    }

    pub fn from_entries(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, Q)>,
    ) -> Result<Self> {
        let mut m = Self::zeros(rows, cols);
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return invalid(format!("entry ({r},{c}) outside {rows}x{cols} matrix"));
            }
            m.add_at(r, c, &v);
        }
        Ok(m)
    }

    /// Matrix with a single unit entry.
    pub fn unit(rows: usize, cols: usize, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.set(r, c, one());
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, r: usize, c: usize) -> Q {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn set(&mut self, r: usize, c: usize, v: Q) {
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Q) {
        if v.is_zero() {
            return;
        }
        let slot = self.entries.entry((r, c)).or_insert_with(Q::zero);
        *slot += v;
        if slot.is_zero() {
            self.entries.remove(&(r, c));
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, &Q)> + '_ {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn scale(&self, k: &Q) -> Self {
        if k.is_zero() {
            return Self::zeros(self.rows, self.cols);
        }
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&p, v)| (p, v * k)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
        }
    }

    pub fn trace(&self) -> Q {
        self.entries
            .iter()
            .filter(|((r, c), _)| r == c)
            .fold(Q::zero(), |acc, (_, v)| acc + v)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            ));
        }
        let mut by_row: BTreeMap<usize, Vec<(usize, &Q)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for (c, b) in row {
                    out.add_at(r, *c, &(a * *b));
                }
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.try_mul(other)? - &other.try_mul(self)?)
    }

    /// Kronecker product.
    pub fn kron(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (&(r1, c1), a) in &self.entries {
            for (&(r2, c2), b) in &other.entries {
                out.set(r1 * other.rows + r2, c1 * other.cols + c2, a * b);
            }
        }
        out
    }

    /// Submatrix `[r0, r0+rows) x [c0, c0+cols)`.
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for (&(r, c), v) in self.entries.range((r0, 0)..(r0 + rows, 0)) {
            if c >= c0 && c < c0 + cols {
                out.set(r - r0, c - c0, v.clone());
            }
        }
        out
    }

    /// Dense row-major rendering with `"p/q"` entries.
    pub fn to_dense_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| rational::to_string(&self.get(r, c))).collect())
            .collect()
    }

    /// Exact inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); n];
        let mut inv: Vec<BTreeMap<usize, Q>> = vec![BTreeMap::new(); n];
        for (&(r, c), v) in &self.entries {
            a[r].insert(c, v.clone());
        }
        for (i, row) in inv.iter_mut().enumerate() {
            row.insert(i, one());
        }
        for col in 0..n {
            let pivot = (col..n).find(|&r| a[r].contains_key(&col))?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][&col].clone();
            for v in a[col].values_mut() {
                *v /= &p;
            }
            for v in inv[col].values_mut() {
                *v /= &p;
            }
            let (prow, pinv) = (a[col].clone(), inv[col].clone());
            for r in 0..n {
                if r == col {
                    continue;
                }
                let Some(f) = a[r].get(&col).cloned() else { continue };
                for (c, v) in &prow {
                    sub_scaled(&mut a[r], *c, &f, v);
                }
                for (c, v) in &pinv {
                    sub_scaled(&mut inv[r], *c, &f, v);
                }
            }
        }
        let mut out = Self::zeros(n, n);
        for (r, row) in inv.into_iter().enumerate() {
            for (c, v) in row {
                out.set(r, c, v);
            }
        }
        Some(out)
    }
}

fn sub_scaled(row: &mut BTreeMap<usize, Q>, c: usize, f: &Q, v: &Q) {
    let slot = row.entry(c).or_insert_with(Q::zero);
    *slot -= f * v;
    if slot.is_zero() {
        row.remove(&c);
    }
}

impl Add for &SparseMatrix {
    type Output = SparseMatrix;
    fn add(self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch");
        let mut out = self.clone();
        for (&(r, c), v) in &rhs.entries {
            out.add_at(r, c, v);
        }
        out
    }
}

impl Sub for &SparseMatrix {
    type Output = SparseMatrix;
    fn sub(self, rhs: &SparseMatrix) -> SparseMatrix {
        self + &(-rhs)
    }
}

impl Neg for &SparseMatrix {
    type Output = SparseMatrix;
    fn neg(self) -> SparseMatrix {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|(&p, v)| (p, -v)).collect(),
        }
    }
}

impl Mul for &SparseMatrix {
    type Output = SparseMatrix;
    fn mul(self, rhs: &SparseMatrix) -> SparseMatrix {
        self.try_mul(rhs).expect("shape mismatch")
    }
}

#[derive(Serialize)]
struct MatrixEntry {
    row: usize,
    col: usize,
    #[serde(with = "rational::serde_q")]
    value: Q,
}

impl Serialize for SparseMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let entries: Vec<MatrixEntry> = self
            .iter()
            .map(|(row, col, v)| MatrixEntry { row, col, value: v.clone() })
            .collect();
        let mut st = s.serialize_struct("SparseMatrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, q_frac};

    #[test]
    fn inverse_of_small_matrix() {
        let m = SparseMatrix::from_entries(
            3,
            3,
            [(0, 0, q(2)), (0, 1, q(1)), (1, 1, q(3)), (2, 0, q(1)), (2, 2, q(4))],
        )
        .unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, SparseMatrix::identity(3));
        assert_eq!(inv.get(0, 0), q_frac(1, 2));
    }

    #[test]
    fn singular_has_no_inverse() {
        let m = SparseMatrix::from_entries(2, 2, [(0, 0, q(1)), (1, 0, q(2))]).unwrap();
        assert!(m.inverse().is_none());
    }

    #[test]
    fn kron_and_blocks() {
        let a = SparseMatrix::unit(2, 2, 0, 1);
        let b = SparseMatrix::identity(2);
        let k = a.kron(&b);
        assert_eq!(k.get(0, 2), q(1));
        assert_eq!(k.get(1, 3), q(1));
        assert_eq!(k.nnz(), 2);
        assert_eq!(k.block(0, 2, 2, 2), SparseMatrix::identity(2));
    }

    #[test]
    fn mismatched_product_is_rejected() {
        let a = SparseMatrix::zeros(2, 3);
        assert!(a.try_mul(&a).is_err());
    }
}
