//! Grading groups.
//!
//! Two carriers cover everything in scope: a finite group presented by its
//! multiplication table, and the integers ℤ restricted to a symmetric
//! enumeration window `[-bound, bound]` (the group itself is infinite; the
//! window only bounds which degrees are tabulated/checked).
//!
//! Group elements are `i64` throughout: indices `0..n` for finite tables,
//! actual integers for ℤ.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupModel {
    /// Finite group on elements `0..size`, `table[a][b] = a·b`, identity 0.
    Finite { size: usize, table: Vec<Vec<usize>> },
    /// ℤ with a symmetric enumeration window `[-bound, bound]`.
    IntegerWindow { bound: i64 },
}

impl GroupModel {
    /// The integers with the given window bound (≥ 1).
    pub fn integers(bound: i64) -> Result<Self> {
        if bound < 1 {
            return Err(Error::BadInput(format!(
                "window bound must be >= 1, got {}",
                bound
            )));
        }
        Ok(GroupModel::IntegerWindow { bound })
    }

    /// Finite group from a multiplication table; verifies the table is a
    /// group with identity 0.
    pub fn finite(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n) {
            return Err(Error::BadInput(
                "multiplication table must be square and nonempty".to_string(),
            ));
        }
        if table.iter().flatten().any(|&x| x >= n) {
            return Err(Error::BadInput(
                "multiplication table entry out of range".to_string(),
            ));
        }
        // identity 0
        for a in 0..n {
            if table[0][a] != a || table[a][0] != a {
                return Err(Error::BadInput(format!(
                    "element 0 is not an identity (fails at {})",
                    a
                )));
            }
        }
        // associativity
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(Error::BadInput(format!(
                            "table is not associative at ({},{},{})",
                            a, b, c
                        )));
                    }
                }
            }
        }
        // inverses
        for a in 0..n {
            if !(0..n).any(|b| table[a][b] == 0 && table[b][a] == 0) {
                return Err(Error::BadInput(format!("element {} has no inverse", a)));
            }
        }
        Ok(GroupModel::Finite { size: n, table })
    }

    /// The cyclic group ℤ/n.
    pub fn cyclic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::BadInput("cyclic group order must be >= 1".into()));
        }
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        GroupModel::finite(table)
    }

    pub fn identity(&self) -> i64 {
        0
    }

    /// Whether `g` is a valid element (finite: index in range; ℤ: inside
    /// the enumeration window).
    pub fn contains(&self, g: i64) -> bool {
        match self {
            GroupModel::Finite { size, .. } => g >= 0 && (g as usize) < *size,
            GroupModel::IntegerWindow { bound } => g.abs() <= *bound,
        }
    }

    fn check_contains(&self, g: i64) -> Result<()> {
        if self.contains(g) {
            Ok(())
        } else {
            match self {
                GroupModel::Finite { size, .. } => Err(Error::BadInput(format!(
                    "group element {} out of range 0..{}",
                    g, size
                ))),
                GroupModel::IntegerWindow { bound } => Err(Error::OutOfWindow(format!(
                    "degree {} outside window [-{}, {}]",
                    g, bound, bound
                ))),
            }
        }
    }

    /// Group product. For ℤ this is plain addition (always defined); the
    /// caller decides whether the result must stay windowed.
    pub fn mul(&self, a: i64, b: i64) -> Result<i64> {
        match self {
            GroupModel::Finite { table, .. } => {
                self.check_contains(a)?;
                self.check_contains(b)?;
                Ok(table[a as usize][b as usize] as i64)
            }
            GroupModel::IntegerWindow { .. } => Ok(a + b),
        }
    }

    pub fn inv(&self, a: i64) -> Result<i64> {
        match self {
            GroupModel::Finite { size, table } => {
                self.check_contains(a)?;
                for b in 0..*size {
                    if table[a as usize][b] == 0 {
                        return Ok(b as i64);
                    }
                }
                unreachable!("validated table has inverses")
            }
            GroupModel::IntegerWindow { .. } => Ok(-a),
        }
    }

    /// All elements (finite) or the full window (ℤ), ascending.
    pub fn elements(&self) -> Vec<i64> {
        match self {
            GroupModel::Finite { size, .. } => (0..*size as i64).collect(),
            GroupModel::IntegerWindow { bound } => (-bound..=*bound).collect(),
        }
    }

    /// Pairs `(g, h)` with `g`, `h`, and `g·h` all inside the carrier;
    /// the domain over which 2-cochain identities are checked.
    pub fn closed_pairs(&self) -> Vec<(i64, i64)> {
        let els = self.elements();
        let mut out = Vec::new();
        for &g in &els {
            for &h in &els {
                if let Ok(p) = self.mul(g, h) {
                    if self.contains(p) {
                        out.push((g, h));
                    }
                }
            }
        }
        out
    }

    /// Triples `(g, h, k)` with all products needed by the cocycle
    /// identity inside the carrier.
    pub fn closed_triples(&self) -> Vec<(i64, i64, i64)> {
        let els = self.elements();
        let mut out = Vec::new();
        for &g in &els {
            for &h in &els {
                for &k in &els {
                    let gh = match self.mul(g, h) {
                        Ok(x) => x,
                        Err(_) => continue,
                    };
                    let hk = match self.mul(h, k) {
                        Ok(x) => x,
                        Err(_) => continue,
                    };
                    let ghk = match self.mul(gh, k) {
                        Ok(x) => x,
                        Err(_) => continue,
                    };
                    if [gh, hk, ghk].iter().all(|&x| self.contains(x)) {
                        out.push((g, h, k));
                    }
                }
            }
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, GroupModel::Finite { .. })
    }

    pub fn describe(&self) -> String {
        match self {
            GroupModel::Finite { size, .. } => format!("finite group of order {}", size),
            GroupModel::IntegerWindow { bound } => {
                format!("integers with window [-{}, {}]", bound, bound)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_group_is_valid() {
        let g = GroupModel::cyclic(4).unwrap();
        assert_eq!(g.mul(3, 2).unwrap(), 1);
        assert_eq!(g.inv(3).unwrap(), 1);
        assert_eq!(g.elements(), vec![0, 1, 2, 3]);
        assert_eq!(g.closed_pairs().len(), 16);
    }

    #[test]
    fn bad_table_rejected() {
        // 0 not an identity
        assert!(GroupModel::finite(vec![vec![1, 0], vec![0, 1]]).is_err());
        // non-associative latin square (order 5 example)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(GroupModel::finite(t).is_err());
    }

    #[test]
    fn integer_window() {
        let g = GroupModel::integers(2).unwrap();
        assert!(g.contains(-2) && g.contains(2) && !g.contains(3));
        assert_eq!(g.mul(2, 2).unwrap(), 4); // product itself is fine
        assert_eq!(g.inv(-2).unwrap(), 2);
        // closed pairs keep the product inside the window
        assert!(g.closed_pairs().contains(&(1, 1)));
        assert!(!g.closed_pairs().contains(&(2, 1)));
    }
}
