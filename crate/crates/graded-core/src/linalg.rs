//! Exact dense linear algebra over a scalar field.
//!
//! Everything here is plain Gaussian elimination over exact scalars; the
//! systems that arise (center computations, coboundary equations,
//! Chevalley–Eilenberg systems) are small and dense, so no pivoting
//! strategy beyond "first nonzero" is needed.

use crate::scalar::Scalar;

/// Row-major dense matrix of scalars (distinct from the ring-valued
/// matrices in `matrix`; this one only backs the solvers).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarMat<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> ScalarMat<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        ScalarMat { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ScalarMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }
}

/// Outcome of `solve_with_certificate`.
pub enum SolveOutcome<S> {
    /// A solution vector `x` with `A·x = b`.
    Solution(Vec<S>),
    /// A certificate of unsolvability: a row vector `λ` with `λᵀA = 0`
    /// but `λᵀb ≠ 0`.
    Inconsistent(Vec<S>),
}

/// Solve `A·x = b` exactly, returning either one solution (free variables
/// set to zero) or a left-null certificate of inconsistency.
pub fn solve_with_certificate<S: Scalar>(a: &ScalarMat<S>, b: &[S]) -> SolveOutcome<S> {
    assert_eq!(a.rows, b.len(), "rhs length mismatch");
    let (rows, cols) = (a.rows, a.cols);
    // Working copy augmented with b and with an identity block that tracks
    // the row operations, so inconsistent rows yield their combination.
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    let mut trace: Vec<Vec<S>> = (0..rows)
        .map(|i| (0..rows).map(|j| if i == j { S::one() } else { S::zero() }).collect())
        .collect();

    let mut pivot_col_of_row: Vec<Option<usize>> = vec![None; rows];
    let mut row = 0usize;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m.at(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..cols {
                let tmp = m.at(p, j).clone();
                m.set(p, j, m.at(row, j).clone());
                m.set(row, j, tmp);
            }
            rhs.swap(p, row);
            trace.swap(p, row);
        }
        let inv = m.at(row, col).inv().expect("pivot is nonzero");
        for j in 0..cols {
            m.set(row, j, m.at(row, j).mul(&inv));
        }
        rhs[row] = rhs[row].mul(&inv);
        for t in trace[row].iter_mut() {
            *t = t.mul(&inv);
        }
        for r in 0..rows {
            if r != row && !m.at(r, col).is_zero() {
                let f = m.at(r, col).clone();
                for j in 0..cols {
                    let v = m.at(r, j).sub(&f.mul(m.at(row, j)));
                    m.set(r, j, v);
                }
                rhs[r] = rhs[r].sub(&f.mul(&rhs[row]));
                let src = trace[row].clone();
                for (t, s) in trace[r].iter_mut().zip(src.iter()) {
                    *t = t.sub(&f.mul(s));
                }
            }
        }
        pivot_col_of_row[row] = Some(col);
        row += 1;
    }

    // Zero rows of A with nonzero rhs are inconsistencies.
    for r in row..rows {
        if !rhs[r].is_zero() {
            return SolveOutcome::Inconsistent(trace[r].clone());
        }
    }
    let mut x = vec![S::zero(); cols];
    for r in 0..row {
        let col = pivot_col_of_row[r].expect("pivot recorded");
        x[col] = rhs[r].clone();
    }
    SolveOutcome::Solution(x)
}

/// Solve `A·x = b`, discarding the certificate.
pub fn solve<S: Scalar>(a: &ScalarMat<S>, b: &[S]) -> Option<Vec<S>> {
    match solve_with_certificate(a, b) {
        SolveOutcome::Solution(x) => Some(x),
        SolveOutcome::Inconsistent(_) => None,
    }
}

/// Basis of the null space of `A`, one vector per free column.
pub fn kernel_basis<S: Scalar>(a: &ScalarMat<S>) -> Vec<Vec<S>> {
    let (rows, cols) = (a.rows, a.cols);
    let mut m = a.clone();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut row = 0usize;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let Some(p) = (row..rows).find(|&r| !m.at(r, col).is_zero()) else {
            continue;
        };
        if p != row {
            for j in 0..cols {
                let tmp = m.at(p, j).clone();
                m.set(p, j, m.at(row, j).clone());
                m.set(row, j, tmp);
            }
        }
        let inv = m.at(row, col).inv().expect("pivot is nonzero");
        for j in 0..cols {
            m.set(row, j, m.at(row, j).mul(&inv));
        }
        for r in 0..rows {
            if r != row && !m.at(r, col).is_zero() {
                let f = m.at(r, col).clone();
                for j in 0..cols {
                    let v = m.at(r, j).sub(&f.mul(m.at(row, j)));
                    m.set(r, j, v);
                }
            }
        }
        pivots.push((row, col));
        row += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![S::zero(); cols];
        v[free] = S::one();
        for &(r, c) in &pivots {
            v[c] = m.at(r, free).neg();
        }
        basis.push(v);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    fn q(n: i64) -> Rat {
        Rat::from_i64(n)
    }

    #[test]
    fn solves_a_plain_system() {
        // x + 2y = 5, 3x + 4y = 11  →  x = 1, y = 2
        let a = ScalarMat::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(4)]]);
        let x = solve(&a, &[q(5), q(11)]).unwrap();
        assert_eq!(x, vec![q(1), q(2)]);
    }

    #[test]
    fn certificate_on_inconsistent_system() {
        // x + y = 1, 2x + 2y = 3 is inconsistent; λ = (-2, 1) kills A.
        let a = ScalarMat::from_rows(vec![vec![q(1), q(1)], vec![q(2), q(2)]]);
        match solve_with_certificate(&a, &[q(1), q(3)]) {
            SolveOutcome::Inconsistent(lambda) => {
                // λᵀA = 0
                for j in 0..2 {
                    let dot = lambda[0].mul(a.at(0, j)).add(&lambda[1].mul(a.at(1, j)));
                    assert!(dot.is_zero());
                }
                // λᵀb ≠ 0
                let dot = lambda[0].mul(&q(1)).add(&lambda[1].mul(&q(3)));
                assert!(!dot.is_zero());
            }
            SolveOutcome::Solution(_) => panic!("system is inconsistent"),
        }
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let a = ScalarMat::from_rows(vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = v[0].mul(&q(1)).add(&v[1].mul(&q(2))).add(&v[2].mul(&q(3)));
            assert!(dot.is_zero());
        }
    }

    #[test]
    fn underdetermined_system_returns_some_solution() {
        let a = ScalarMat::from_rows(vec![vec![q(1), q(1), q(0)]]);
        let x = solve(&a, &[q(7)]).unwrap();
        let lhs = x[0].add(&x[1]);
        assert_eq!(lhs, q(7));
    }
}
