//! Matrices over a [`Ring`], with the two Kronecker-style products used by
//! the frame calculus.
//!
//! A `Mat<R>` carries its ring handle, so arithmetic can normalize entries
//! and report window/involution errors from the underlying ring.
//!
//! # Kronecker conventions
//!
//! For `A : n₁×n₂` and `B : m₁×m₂` both products produce an
//! `(m₁n₁)×(m₂n₂)` matrix whose entries are the products `a·b` with the
//! `A`-entry as **left** factor (entries need not commute); they differ
//! only in how the index pairs are flattened:
//!
//! * `kron_right` (written `A ▷ B`): entry `a_{ij}·b_{kl}` sits at row
//!   `k·n₁ + i`, column `l·n₂ + j` — the `B` index is the outer (major)
//!   index.
//! * `kron_left` (written `A ◁ B`): entry `a_{ij}·b_{kl}` sits at row
//!   `i·m₁ + k`, column `j·m₂ + l` — the `A` index is the outer index.
//!
//! Both satisfy the mixed-product rule `(A ⋆ B)(C ⋆ D) = (AC) ⋆ (BD)`
//! whenever the plain products are defined, and `dagger` distributes over
//! them when the entry ring is commutative-free of the relevant entries
//! (used only in the frame identities, where it is justified case by case).

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Ring;

/// Dense matrix over a ring, stored row-major.
#[derive(Clone)]
pub struct Mat<R: Ring> {
    ring: R,
    rows: usize,
    cols: usize,
    data: Vec<R::Elem>,
}

impl<R: Ring> fmt::Debug for Mat<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat({}x{})[{}]", self.rows, self.cols, self.display())
    }
}

impl<R: Ring> PartialEq for Mat<R> {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.data == other.data
    }
}

impl<R: Ring> Mat<R> {
    pub fn zero(ring: &R, rows: usize, cols: usize) -> Self {
        Mat {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: &R, n: usize) -> Self {
        let mut m = Self::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Build from a closure over (row, col).
    pub fn from_fn(
        ring: &R,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> R::Elem,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Build from rows of elements; all rows must have equal length.
    pub fn from_rows(ring: &R, rows: Vec<Vec<R::Elem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".to_string()));
        }
        Ok(Mat {
            ring: ring.clone(),
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Single-entry 1×1 matrix.
    pub fn scalar(ring: &R, e: R::Elem) -> Self {
        Mat {
            ring: ring.clone(),
            rows: 1,
            cols: 1,
            data: vec![e],
        }
    }

    /// Column vector from entries.
    pub fn column(ring: &R, entries: Vec<R::Elem>) -> Self {
        let n = entries.len();
        Mat {
            ring: ring.clone(),
            rows: n,
            cols: 1,
            data: entries,
        }
    }

    /// Row vector from entries.
    pub fn row(ring: &R, entries: Vec<R::Elem>) -> Self {
        let n = entries.len();
        Mat {
            ring: ring.clone(),
            rows: 1,
            cols: n,
            data: entries,
        }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &R::Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R::Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.ring.is_zero(e))
    }

    /// The unique entry of a 1×1 matrix.
    pub fn entry(&self) -> Result<&R::Elem> {
        if self.rows == 1 && self.cols == 1 {
            Ok(&self.data[0])
        } else {
            Err(Error::DimensionMismatch(format!(
                "expected 1x1, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    fn check_same_shape(&self, other: &Self, op: &str) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}: {}x{} vs {}x{}",
                op, self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "add")?;
        Ok(Mat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| self.ring.add(a, b))
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other, "sub")?;
        Ok(Mat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| self.ring.sub(a, b))
                .collect(),
        })
    }

    pub fn neg(&self) -> Self {
        Mat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| self.ring.neg(a)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "mul: {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Mat::zero(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = self.ring.zero();
                for k in 0..self.cols {
                    let p = self.ring.mul(self.at(i, k), other.at(k, j))?;
                    acc = self.ring.add(&acc, &p);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    /// Left-multiply every entry by a ring element.
    pub fn scale_left(&self, c: &R::Elem) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for a in &self.data {
            data.push(self.ring.mul(c, a)?);
        }
        Ok(Mat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Right-multiply every entry by a ring element.
    pub fn scale_right(&self, c: &R::Elem) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for a in &self.data {
            data.push(self.ring.mul(a, c)?);
        }
        Ok(Mat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Multiply every entry by a ground scalar.
    pub fn scale_sc(&self, c: &R::Sc) -> Self {
        Mat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| self.ring.scale(c, a)).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = Mat::zero(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    /// Entrywise involution (no transpose).
    pub fn star_entrywise(&self) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for a in &self.data {
            data.push(self.ring.star(a)?);
        }
        Ok(Mat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Conjugate transpose `M† = (M*)ᵗ`.
    pub fn dagger(&self) -> Result<Self> {
        Ok(self.star_entrywise()?.transpose())
    }

    /// Apply a function to every entry.
    pub fn map_entries(&self, mut f: impl FnMut(&R::Elem) -> Result<R::Elem>) -> Result<Self> {
        let mut data = Vec::with_capacity(self.data.len());
        for a in &self.data {
            data.push(f(a)?);
        }
        Ok(Mat {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// `A ▷ B`: Kronecker-style product with the second factor's index
    /// outermost; see the module docs for the exact layout.
    pub fn kron_right(&self, other: &Self) -> Result<Self> {
        let (n1, n2) = (self.rows, self.cols);
        let (m1, m2) = (other.rows, other.cols);
        let mut out = Mat::zero(&self.ring, m1 * n1, m2 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..m1 {
                    for l in 0..m2 {
                        let v = self.ring.mul(self.at(i, j), other.at(k, l))?;
                        out.set(k * n1 + i, l * n2 + j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// `A ◁ B`: Kronecker-style product with the first factor's index
    /// outermost; see the module docs for the exact layout.
    pub fn kron_left(&self, other: &Self) -> Result<Self> {
        let (n1, n2) = (self.rows, self.cols);
        let (m1, m2) = (other.rows, other.cols);
        let mut out = Mat::zero(&self.ring, m1 * n1, m2 * n2);
        for i in 0..n1 {
            for j in 0..n2 {
                for k in 0..m1 {
                    for l in 0..m2 {
                        let v = self.ring.mul(self.at(i, j), other.at(k, l))?;
                        out.set(i * m1 + k, j * m2 + l, v);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Block extension: replace every entry by an `n×n` block computed by
    /// `f`, laying block `(c,d)` at rows `c·n..`, columns `d·n..`. This is
    /// how maps `R → Mₙ(R)` extend to matrices over `R`.
    pub fn block_extend(
        &self,
        n: usize,
        mut f: impl FnMut(&R::Elem) -> Result<Mat<R>>,
    ) -> Result<Self> {
        let mut out = Mat::zero(&self.ring, self.rows * n, self.cols * n);
        for c in 0..self.rows {
            for d in 0..self.cols {
                let block = f(self.at(c, d))?;
                if block.rows != n || block.cols != n {
                    return Err(Error::DimensionMismatch(format!(
                        "block_extend: block is {}x{}, expected {}x{}",
                        block.rows, block.cols, n, n
                    )));
                }
                for a in 0..n {
                    for b in 0..n {
                        out.set(c * n + a, d * n + b, block.at(a, b).clone());
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entrywise equality: same shape and equal entries.
    pub fn same_as(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a == b)
    }

    /// Stack `self` on top of `other` (equal column counts).
    pub fn vstack(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "vstack: {} vs {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Mat {
            ring: self.ring.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Contiguous rows `[from, to)` as a new matrix.
    pub fn row_slice(&self, from: usize, to: usize) -> Result<Self> {
        if from > to || to > self.rows {
            return Err(Error::DimensionMismatch(format!(
                "row_slice {}..{} of {} rows",
                from, to, self.rows
            )));
        }
        Ok(Mat {
            ring: self.ring.clone(),
            rows: to - from,
            cols: self.cols,
            data: self.data[from * self.cols..to * self.cols].to_vec(),
        })
    }

    /// Contiguous columns `[from, to)` as a new matrix.
    pub fn col_slice(&self, from: usize, to: usize) -> Result<Self> {
        if from > to || to > self.cols {
            return Err(Error::DimensionMismatch(format!(
                "col_slice {}..{} of {} cols",
                from, to, self.cols
            )));
        }
        let mut out = Mat::zero(&self.ring, self.rows, to - from);
        for i in 0..self.rows {
            for j in from..to {
                out.set(i, j - from, self.at(i, j).clone());
            }
        }
        Ok(out)
    }

    /// All entries, row-major.
    pub fn entries(&self) -> &[R::Elem] {
        &self.data
    }

    pub fn display(&self) -> String {
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.ring.display(self.at(i, j)))
                .collect();
            rows.push(format!("[{}]", row.join(", ")));
        }
        format!("[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ScalarRing;
    use crate::scalar::{Rat, Scalar};

    fn rm(rows: Vec<Vec<i64>>) -> Mat<ScalarRing<Rat>> {
        let ring = ScalarRing::<Rat>::new();
        Mat::from_rows(
            &ring,
            rows.into_iter()
                .map(|r| r.into_iter().map(Rat::from_i64).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn mul_identity() {
        let a = rm(vec![vec![1, 2], vec![3, 4]]);
        let id = Mat::identity(a.ring(), 2);
        assert_eq!(a.mul(&id).unwrap(), a);
        assert_eq!(id.mul(&a).unwrap(), a);
    }

    /// Oracle: over commutative scalars, `A ◁ B` is the classical
    /// Kronecker product `A ⊗ B`, and `A ▷ B` is `B ⊗ A`.
    #[test]
    fn kron_matches_classical_oracle() {
        let a = rm(vec![vec![1, 2], vec![3, 4]]);
        let b = rm(vec![vec![0, 5], vec![6, 7]]);
        let classical = |x: &Mat<ScalarRing<Rat>>, y: &Mat<ScalarRing<Rat>>| {
            // entry of X ⊗ Y at ((i,k),(j,l)) = x_ij * y_kl, X-major.
            Mat::from_fn(x.ring(), x.rows() * y.rows(), x.cols() * y.cols(), |r, c| {
                let (i, k) = (r / y.rows(), r % y.rows());
                let (j, l) = (c / y.cols(), c % y.cols());
                x.at(i, j).mul(y.at(k, l))
            })
        };
        assert_eq!(a.kron_left(&b).unwrap(), classical(&a, &b));
        assert_eq!(a.kron_right(&b).unwrap(), classical(&b, &a));
    }

    #[test]
    fn kron_mixed_product_rule() {
        let a = rm(vec![vec![1, 2], vec![3, 4]]);
        let b = rm(vec![vec![5], vec![6]]); // 2x1
        let c = rm(vec![vec![2, 0], vec![1, 1]]);
        let d = rm(vec![vec![3, 1]]); // 1x2
        // (A ▷ B)(C ▷ D) = (AC) ▷ (BD)
        let lhs = a
            .kron_right(&b)
            .unwrap()
            .mul(&c.kron_right(&d).unwrap())
            .unwrap();
        let rhs = a
            .mul(&c)
            .unwrap()
            .kron_right(&b.mul(&d).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        // (A ◁ B)(C ◁ D) = (AC) ◁ (BD)
        let lhs = a
            .kron_left(&b)
            .unwrap()
            .mul(&c.kron_left(&d).unwrap())
            .unwrap();
        let rhs = a.mul(&c).unwrap().kron_left(&b.mul(&d).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn transpose_and_dagger_are_involutive() {
        let a = rm(vec![vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(a.transpose().transpose(), a);
        assert_eq!(a.dagger().unwrap().dagger().unwrap(), a);
    }

    #[test]
    fn block_extend_layout() {
        // Extend the map r ↦ diag(r, 2r) over a 1x2 matrix.
        let a = rm(vec![vec![1, 3]]);
        let ring = a.ring().clone();
        let ext = a
            .block_extend(2, |e| {
                let two = Rat::from_i64(2);
                Ok(Mat::from_rows(
                    &ring,
                    vec![
                        vec![e.clone(), Rat::zero()],
                        vec![Rat::zero(), two.mul(e)],
                    ],
                )
                .unwrap())
            })
            .unwrap();
        assert_eq!(ext, rm(vec![vec![1, 0, 3, 0], vec![0, 2, 0, 6]]));
    }
}
