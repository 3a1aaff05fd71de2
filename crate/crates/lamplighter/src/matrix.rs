//! Exact integer matrices over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::modular::ModMatrix;

/// A dense row-major matrix over `BigInt`.
///
/// Both dimensions are at least 1. All operations are exact; nothing in this
/// type ever rounds.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    /// Builds a matrix from machine-integer rows.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::Dimension("matrix needs at least one row".into()));
        }
        let cols = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Dimension(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
        }
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|&e| BigInt::from(e)))
            .collect();
        IntMatrix::new(rows.len(), cols, entries)
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        IntMatrix { rows: n, cols: n, entries }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
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

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    fn require_square(&self, what: &str) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "{what} requires a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    fn require_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows == other.rows && self.cols == other.cols {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "shape mismatch: {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.require_same_shape(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(IntMatrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn neg(&self) -> Self {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = vec![BigInt::zero(); self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    entries[i * other.cols + j] += a * other.get(k, j);
                }
            }
        }
        Ok(IntMatrix { rows: self.rows, cols: other.cols, entries })
    }

    /// Applies the matrix to a column vector.
    pub fn apply_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect())
    }

    /// Exact determinant by the Bareiss fraction-free algorithm.
    ///
    /// Every division performed is exact, so the computation stays in the
    /// integers throughout.
    pub fn det(&self) -> Result<BigInt> {
        self.require_square("determinant")?;
        let n = self.rows;
        let mut a = self.entries.clone();
        let at = |a: &[BigInt], i: usize, j: usize| a[i * n + j].clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for r in 0..n.saturating_sub(1) {
            if at(&a, r, r).is_zero() {
                let Some(swap) = (r + 1..n).find(|&i| !at(&a, i, r).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    a.swap(r * n + j, swap * n + j);
                }
                sign = -sign;
            }
            let pivot = at(&a, r, r);
            for i in r + 1..n {
                for j in r + 1..n {
                    let num = &pivot * at(&a, i, j) - at(&a, i, r) * at(&a, r, j);
                    a[i * n + j] = num / &prev;
                }
                a[i * n + r] = BigInt::zero();
            }
            prev = pivot;
        }
        Ok(sign * at(&a, n - 1, n - 1))
    }

    /// Exact inverse, defined only for unimodular matrices (det = +-1).
    ///
    /// Computed as the adjugate divided by the determinant, which keeps the
    /// result integral exactly when the determinant is a unit.
    pub fn inverse_unimodular(&self) -> Result<Self> {
        self.require_square("inverse")?;
        let d = self.det()?;
        if !d.abs().is_one() {
            return Err(Error::NotInvertible(format!(
                "matrix has determinant {d}, need +-1 for an integer inverse"
            )));
        }
        let n = self.rows;
        if n == 1 {
            return IntMatrix::new(1, 1, vec![d]);
        }
        let mut inv = IntMatrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let minor = self.minor(i, j)?.det()?;
                let cofactor = if (i + j) % 2 == 0 { minor } else { -minor };
                // adj(M)[j][i] = cofactor(i, j); dividing by det = +-1 is a sign flip
                inv.set(j, i, &cofactor * &d);
            }
        }
        Ok(inv)
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Result<Self> {
        let mut entries = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in 0..self.rows {
            if i == skip_row {
                continue;
            }
            for j in 0..self.cols {
                if j == skip_col {
                    continue;
                }
                entries.push(self.get(i, j).clone());
            }
        }
        IntMatrix::new(self.rows - 1, self.cols - 1, entries)
    }

    /// Exact `n`-th power by square-and-multiply.
    ///
    /// Negative exponents require a unimodular matrix.
    pub fn pow(&self, n: i64) -> Result<Self> {
        self.require_square("matrix power")?;
        if n < 0 {
            let inv = self.inverse_unimodular()?;
            return inv.pow(n.checked_neg().ok_or_else(|| {
                Error::Parameter("exponent out of range".into())
            })?);
        }
        let mut acc = IntMatrix::identity(self.rows);
        let mut base = self.clone();
        let mut e = n as u64;
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

    /// Least `n >= 1` with `M^n = E`, or `None` if no such `n <= max_order`.
    ///
    /// Requires determinant +-1: no other integer matrix can have finite
    /// multiplicative order.
    pub fn order(&self, max_order: u64) -> Result<Option<u64>> {
        self.require_square("multiplicative order")?;
        let d = self.det()?;
        if !d.abs().is_one() {
            return Err(Error::NotInvertible(format!(
                "matrix has determinant {d}, so no power can be the identity"
            )));
        }
        let e = IntMatrix::identity(self.rows);
        let mut p = self.clone();
        for n in 1..=max_order {
            if p == e {
                return Ok(Some(n));
            }
            p = p.mul(self)?;
        }
        Ok(None)
    }

    /// Entrywise reduction into `[0, q)`.
    pub fn reduce_mod(&self, q: u64) -> Result<ModMatrix> {
        if q < 2 {
            return Err(Error::Parameter(format!("modulus must be >= 2, got {q}")));
        }
        let qi = BigInt::from(q);
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let r = e.mod_floor(&qi);
                u64::try_from(&r).expect("mod_floor result fits the modulus")
            })
            .collect();
        ModMatrix::new(q, self.rows, self.cols, entries)
    }

    /// Block-diagonal sum: `self` in the upper-left corner, `other` in the
    /// lower-right, zeros elsewhere.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let rows = self.rows + other.rows;
        let cols = self.cols + other.cols;
        let mut out = IntMatrix::zero(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.get(i, j).clone());
            }
        }
        out
    }

    /// Row-major copy of the entries.
    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn rejects_empty_dimensions() {
        assert!(IntMatrix::new(0, 3, vec![]).is_err());
        assert!(IntMatrix::new(3, 0, vec![]).is_err());
        assert!(IntMatrix::new(2, 2, vec![BigInt::zero()]).is_err());
    }

    #[test]
    fn det_of_known_matrices() {
        assert_eq!(m(&[vec![1, -1], vec![1, 2]]).det().unwrap(), BigInt::from(3));
        assert_eq!(IntMatrix::identity(5).det().unwrap(), BigInt::one());
        let shift5 = blocks::base_block(5).unwrap();
        let diff = shift5.sub(&IntMatrix::identity(4)).unwrap();
        assert_eq!(diff.det().unwrap().abs(), BigInt::from(5));
    }

    #[test]
    fn det_needs_square() {
        assert!(m(&[vec![1, 2, 3], vec![4, 5, 6]]).det().is_err());
    }

    #[test]
    fn det_with_zero_pivot() {
        assert_eq!(
            m(&[vec![0, 1], vec![1, 0]]).det().unwrap(),
            BigInt::from(-1)
        );
        assert_eq!(
            m(&[vec![0, 0], vec![0, 0]]).det().unwrap(),
            BigInt::zero()
        );
        assert_eq!(
            m(&[vec![0, 2, 1], vec![0, 0, 3], vec![4, 5, 6]])
                .det()
                .unwrap(),
            BigInt::from(24)
        );
    }

    #[test]
    fn power_of_order_three_block_is_identity() {
        let b = blocks::base_block(3).unwrap();
        assert_eq!(b.pow(3).unwrap(), IntMatrix::identity(2));
        assert_eq!(b.pow(0).unwrap(), IntMatrix::identity(2));
    }

    #[test]
    fn negative_powers_need_unimodularity() {
        let doubled = m(&[vec![2, 0], vec![0, 2]]);
        assert!(doubled.pow(-1).is_err());
        let b = blocks::base_block(3).unwrap();
        assert_eq!(b.pow(-1).unwrap(), b.pow(2).unwrap());
        assert_eq!(
            b.pow(-2).unwrap().mul(&b.pow(2).unwrap()).unwrap(),
            IntMatrix::identity(2)
        );
    }

    #[test]
    fn orders_of_witness_base_blocks() {
        assert_eq!(blocks::base_block(3).unwrap().order(100).unwrap(), Some(3));
        assert_eq!(blocks::base_block(5).unwrap().order(100).unwrap(), Some(5));
        assert_eq!(blocks::base_block(7).unwrap().order(100).unwrap(), Some(7));
    }

    #[test]
    fn order_respects_search_limit() {
        let b = blocks::base_block(7).unwrap();
        assert_eq!(b.order(6).unwrap(), None);
        assert!(m(&[vec![2]]).order(10).is_err());
    }

    #[test]
    fn reduce_mod_wraps_negatives() {
        let b = blocks::base_block(3).unwrap();
        let reduced = b.reduce_mod(2).unwrap();
        assert_eq!(reduced.entries(), &[0, 1, 1, 1]);
    }

    #[test]
    fn direct_sum_blocks() {
        let s = m(&[vec![1, 2], vec![3, 4]]).direct_sum(&m(&[vec![5]]));
        assert_eq!(
            s,
            m(&[vec![1, 2, 0], vec![3, 4, 0], vec![0, 0, 5]])
        );
    }

    #[test]
    fn display_round_trips_shape() {
        let b = blocks::base_block(3).unwrap();
        assert_eq!(b.to_string(), "[[0,1],[-1,-1]]");
    }
}
