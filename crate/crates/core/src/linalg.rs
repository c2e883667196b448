//! Dense exact linear algebra over a prime field `F_p`.
//!
//! Every coefficient in the crate lives in a [`Matrix`]: hom-space bases,
//! action matrices, connecting maps. Entries are residues `0 <= e < p`
//! stored as `u32`; the characteristic is carried by each matrix and must
//! agree between operands. Products are accumulated in `u64`, which is why
//! `p` is capped below `2^16`.
//!
//! Pivoting is deterministic (first nonzero entry, scanning rows top-down in
//! column order), so every result is reproducible bit for bit.

use std::fmt;

use crate::error::{Error, Result};

/// Largest admissible characteristic (exclusive).
pub const MAX_CHAR: u32 = 1 << 16;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn check_char(p: u32) -> Result<()> {
    if p < MAX_CHAR && is_prime(p) {
        Ok(())
    } else {
        Err(Error::BadCharacteristic(p))
    }
}

#[inline]
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p), "inverse of zero");
    // Fermat: a^(p-2)
    let (mut base, mut exp, mut acc) = (a as u64 % p as u64, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        exp >>= 1;
    }
    acc as u32
}

#[inline]
fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

/// A dense `rows × cols` matrix over `F_p`, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix<F_{}> {}x{} [", self.p, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Matrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % p;
        }
        m
    }

    /// Builds a matrix from row-major data, reducing every entry mod `p`.
    pub fn from_vec(p: u32, rows: usize, cols: usize, data: Vec<u32>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        let data = data.into_iter().map(|e| e % p).collect();
        Ok(Matrix {
            p,
            rows,
            cols,
            data,
        })
    }

    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::from_vec(p, rows.len(), cols, rows.concat())
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, &e) in c.iter().enumerate() {
                m.data[i * m.cols + j] = e % p;
            }
        }
        m
    }

    pub fn column_vector(p: u32, v: &[u32]) -> Self {
        Self::from_columns(p, v.len(), &[v.to_vec()])
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }
    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }
    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }
    #[inline]
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }
    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.p;
    }
    #[inline]
    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<u32>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.p, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.data[r * self.cols + c];
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.p, other.p, "characteristic mismatch");
        assert_eq!(
            self.cols, other.rows,
            "product of {}x{} by {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let p = self.p as u64;
        let n = other.cols;
        let mut acc = vec![0u64; n];
        let mut out = Matrix::zeros(self.p, self.rows, n);
        for r in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for (k, &a) in self.row(r).iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let a = a as u64;
                let orow = other.row(k);
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    // a, b < 2^16 so a*b < 2^32; reduce often enough to stay in u64
                    *slot += a * b as u64;
                }
                if k % 4096 == 4095 {
                    acc.iter_mut().for_each(|s| *s %= p);
                }
            }
            for (c, s) in acc.iter().enumerate() {
                out.data[r * n + c] = (s % p) as u32;
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len(), "vector length");
        let p = self.p as u64;
        (0..self.rows)
            .map(|r| {
                let s: u64 = self
                    .row(r)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * b as u64)
                    .sum();
                (s % p) as u32
            })
            .collect()
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(u32, u32) -> u32) -> Matrix {
        assert_eq!(self.p, other.p, "characteristic mismatch");
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch"
        );
        Matrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        let p = self.p;
        self.zip_with(other, |a, b| (a + b) % p)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        let p = self.p;
        self.zip_with(other, |a, b| (a + p - b) % p)
    }

    pub fn scale(&self, s: u32) -> Matrix {
        let p = self.p as u64;
        let s = s as u64 % p;
        Matrix {
            p: self.p,
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|&a| (a as u64 * s % p) as u32)
                .collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        let p = self.p;
        Matrix {
            p,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| neg_mod(a, p)).collect(),
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let cols = self.cols + other.cols;
        let mut m = Matrix::zeros(self.p, self.rows, cols);
        for r in 0..self.rows {
            m.data[r * cols..r * cols + self.cols].copy_from_slice(self.row(r));
            m.data[r * cols + self.cols..(r + 1) * cols].copy_from_slice(other.row(r));
        }
        m
    }

    /// `[self ; other]`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix {
            p: self.p,
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.p, self.rows + other.rows, self.cols + other.cols);
        m.paste(0, 0, self);
        m.paste(self.rows, self.cols, other);
        m
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        for r in 0..block.rows {
            let dst = (r0 + r) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(r));
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut m = Matrix::zeros(self.p, rows, cols);
        for r in 0..rows {
            let src = (r0 + r) * self.cols + c0;
            m.data[r * cols..(r + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        m
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.p, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                m.data[r * idx.len() + j] = self.get(r, c);
            }
        }
        m
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            p: self.p,
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    /// Row-major flattening as a column vector of length `rows*cols`.
    pub fn flatten(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn unflatten(p: u32, rows: usize, cols: usize, v: &[u32]) -> Matrix {
        Matrix {
            p,
            rows,
            cols,
            data: v.to_vec(),
        }
    }

    /// In-place Gauss–Jordan elimination; returns the pivot columns.
    ///
    /// Only the first `limit` columns are eligible as pivots, which lets
    /// augmented systems keep their right-hand side out of the pivot set.
    fn reduce_in_place(&mut self, limit: usize) -> Vec<usize> {
        let p = self.p;
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..limit.min(cols) {
            if rank == self.rows {
                break;
            }
            let Some(pr) = (rank..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if pr != rank {
                for k in c..cols {
                    self.data.swap(pr * cols + k, rank * cols + k);
                }
            }
            let inv = inv_mod(self.data[rank * cols + c], p) as u64;
            if inv != 1 {
                for k in c..cols {
                    let e = &mut self.data[rank * cols + k];
                    *e = (*e as u64 * inv % p as u64) as u32;
                }
            }
            let (before, rest) = self.data.split_at_mut(rank * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            let eliminate = |row: &mut [u32]| {
                let f = row[c];
                if f == 0 {
                    return;
                }
                let f = (p - f) as u64;
                for k in c..cols {
                    let pv = pivot_row[k];
                    if pv != 0 {
                        row[k] = ((row[k] as u64 + f * pv as u64) % p as u64) as u32;
                    }
                }
            };
            before.chunks_exact_mut(cols).for_each(eliminate);
            after.chunks_exact_mut(cols).for_each(eliminate);
            pivots.push(c);
            rank += 1;
        }
        pivots
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(self.cols);
        let rank = pivots.len();
        Rref {
            matrix: m,
            pivots,
            rank,
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows > self.cols {
            // eliminating on the wide side is cheaper
            let mut t = self.transpose();
            t.reduce_in_place(t.cols).len()
        } else {
            let mut m = self.clone();
            m.reduce_in_place(m.cols).len()
        }
    }

    /// Basis of the right kernel `{v : self·v = 0}`; `cols - rank` vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let Rref { matrix, pivots, .. } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        pivots.iter().for_each(|&c| is_pivot[c] = true);
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0; self.cols];
                v[f] = 1 % p;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = neg_mod(matrix.get(i, f), p);
                }
                v
            })
            .collect()
    }

    /// Kernel basis as the columns of a `cols × nullity` matrix.
    pub fn kernel_matrix(&self) -> Matrix {
        Matrix::from_columns(self.p, self.cols, &self.kernel_basis())
    }

    /// Some `x` with `self·x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let rhs = Matrix::column_vector(self.p, b);
        Ok(self.solve_many(&rhs)?.map(|x| x.column(0)))
    }

    /// Solves `self·X = B` column by column with one elimination.
    pub fn solve_many(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if b.rows != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side with {} rows for {} rows",
                b.rows, self.rows
            )));
        }
        let mut aug = self.hstack(b);
        let pivots = aug.reduce_in_place(self.cols);
        let rank = pivots.len();
        // consistency: rows below the rank must vanish on the rhs block
        for r in rank..aug.rows {
            if aug.row(r)[self.cols..].iter().any(|&e| e != 0) {
                return Ok(None);
            }
        }
        let mut x = Matrix::zeros(self.p, self.cols, b.cols);
        for (i, &pc) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.data[pc * b.cols + j] = aug.get(i, self.cols + j);
            }
        }
        Ok(Some(x))
    }

    /// Columns of `self` at its pivot positions: a basis of the column space.
    pub fn column_space(&self) -> Matrix {
        let pivots = self.rref().pivots;
        self.select_columns(&pivots)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let x = self.solve_many(&Matrix::identity(self.p, n)).ok()??;
        // solve_many may return a particular solution for singular input
        if self.rank() == n {
            Some(x)
        } else {
            None
        }
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// For full column rank: `L` with `L·self = I`, supported on a set of
    /// independent rows.
    pub fn left_inverse(&self) -> Option<Matrix> {
        let rows = self.transpose().rref().pivots;
        if rows.len() != self.cols {
            return None;
        }
        let square = self.select_rows(&rows);
        let inv = square.inverse()?;
        let mut l = Matrix::zeros(self.p, self.cols, self.rows);
        for (j, &r) in rows.iter().enumerate() {
            for i in 0..self.cols {
                l.data[i * self.rows + r] = inv.get(i, j);
            }
        }
        Some(l)
    }

    /// For full row rank: `R` with `self·R = I`.
    pub fn right_inverse(&self) -> Option<Matrix> {
        Some(self.transpose().left_inverse()?.transpose())
    }

    pub fn pow(&self, mut e: u32) -> Matrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.p, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows as u32).is_zero()
    }
}

/// Extends the columns of `basis` (independent, `n` rows) by standard basis
/// vectors to a basis of `F_p^n`; returns the indices of the added vectors.
pub fn complement_indices(basis: &Matrix) -> Vec<usize> {
    let n = basis.rows();
    let ext = basis.hstack(&Matrix::identity(basis.p(), n));
    ext.rref()
        .pivots
        .into_iter()
        .filter(|&c| c >= basis.cols())
        .map(|c| c - basis.cols())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(p: u32, rows: &[&[u32]]) -> Matrix {
        Matrix::from_rows(p, &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = Matrix::identity(2, 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1]);
        assert_eq!(r.rank, 2);

        let z = Matrix::zeros(2, 3, 4);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert!(r.pivots.is_empty());
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn rref_all_ones_over_f2() {
        let r = m(2, &[&[1, 1], &[1, 1]]).rref();
        assert_eq!(r.matrix, m(2, &[&[1, 1], &[0, 0]]));
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn kernel_examples() {
        assert!(Matrix::identity(3, 4).kernel_basis().is_empty());
        let k = Matrix::zeros(5, 3, 3).kernel_basis();
        assert_eq!(k, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(m(2, &[&[1, 1]]).kernel_basis(), vec![vec![1, 1]]);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(7, 3);
        assert_eq!(id.solve(&[3, 5, 6]).unwrap(), Some(vec![3, 5, 6]));
        assert_eq!(Matrix::zeros(2, 2, 2).solve(&[1, 0]).unwrap(), None);
        let a = m(2, &[&[1, 1], &[0, 1]]);
        assert_eq!(a.solve(&[0, 1]).unwrap(), Some(vec![1, 1]));
        assert!(matches!(
            a.solve(&[1, 0, 0]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn inverses() {
        let a = m(5, &[&[2, 1], &[1, 1]]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(5, 2));
        assert!(m(5, &[&[1, 2], &[2, 4]]).inverse().is_none());

        let tall = m(3, &[&[1, 0], &[2, 1], &[0, 1]]);
        let l = tall.left_inverse().unwrap();
        assert_eq!(l.mul(&tall), Matrix::identity(3, 2));
        let wide = tall.transpose();
        assert_eq!(wide.mul(&wide.right_inverse().unwrap()), Matrix::identity(3, 2));
    }

    #[test]
    fn inv_mod_roundtrip() {
        for p in [2, 3, 5, 7, 101, 65521] {
            for a in 1..p.min(200) {
                assert_eq!(a as u64 * inv_mod(a, p) as u64 % p as u64, 1);
            }
        }
    }

    #[test]
    fn char_check() {
        assert!(check_char(2).is_ok());
        assert!(check_char(65521).is_ok());
        assert!(check_char(4).is_err());
        assert!(check_char(65537).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = Matrix> {
        (prop::sample::select(vec![2u32, 3, 5, 7]), 0usize..7, 0usize..7).prop_flat_map(
            |(p, r, c)| {
                prop::collection::vec(0..p, r * c)
                    .prop_map(move |d| Matrix::from_vec(p, r, c, d).unwrap())
            },
        )
    }

    proptest! {
        #[test]
        fn rank_of_transpose(a in arb_matrix()) {
            prop_assert_eq!(a.rank(), a.transpose().rank());
        }

        #[test]
        fn rank_nullity(a in arb_matrix()) {
            let k = a.kernel_basis();
            prop_assert_eq!(a.cols(), a.rank() + k.len());
            for v in &k {
                prop_assert!(a.mul_vec(v).iter().all(|&e| e == 0));
            }
        }

        #[test]
        fn solve_consistent(a in arb_matrix(), seed in prop::collection::vec(0u32..7, 7)) {
            let x0: Vec<u32> = seed[..a.cols()].iter().map(|&e| e % a.p()).collect();
            let b = a.mul_vec(&x0);
            let x = a.solve(&b).unwrap().expect("consistent by construction");
            prop_assert_eq!(a.mul_vec(&x), b);
        }

        #[test]
        fn rref_idempotent(a in arb_matrix()) {
            let once = a.rref().matrix;
            prop_assert_eq!(once.rref().matrix, once.clone());
        }
    }
}
