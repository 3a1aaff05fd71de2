//! Dense matrices over `Z_q` for a word-sized modulus `q >= 2`.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::primes::mod_mul;

/// A row-major matrix with entries reduced into `[0, modulus)`.
///
/// The modulus may be any integer `>= 2`; products are accumulated in 128-bit
/// intermediates and reduced after every step, so the arithmetic is exact for
/// the full `u64` modulus range.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ModMatrix {
    modulus: u64,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

impl ModMatrix {
    pub fn new(modulus: u64, rows: usize, cols: usize, entries: Vec<u64>) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Parameter(format!(
                "modulus must be >= 2, got {modulus}"
            )));
        }
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
        let entries = entries.into_iter().map(|e| e % modulus).collect();
        Ok(ModMatrix { modulus, rows, cols, entries })
    }

    pub fn identity(n: usize, modulus: u64) -> Result<Self> {
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        ModMatrix::new(modulus, n, n, entries)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
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

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// Lifts the entries back to integers in `[0, modulus)`.
    pub fn to_int_matrix(&self) -> IntMatrix {
        IntMatrix::new(
            self.rows,
            self.cols,
            self.entries.iter().map(|&e| BigInt::from(e)).collect(),
        )
        .expect("dimensions already validated")
    }

    fn require_same_modulus(&self, other: &Self) -> Result<()> {
        if self.modulus == other.modulus {
            Ok(())
        } else {
            Err(Error::Parameter(format!(
                "modulus mismatch: {} vs {}",
                self.modulus, other.modulus
            )))
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.require_same_modulus(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let m = self.modulus;
        let mut entries = vec![0u64; self.rows * other.cols];
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cell = &mut entries[i * other.cols + j];
                    *cell = (*cell + mod_mul(a, other.get(k, j), m)) % m;
                }
            }
        }
        ModMatrix::new(m, self.rows, other.cols, entries)
    }

    pub fn apply_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector length {} does not match {} columns",
                v.len(),
                self.cols
            )));
        }
        let m = self.modulus;
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(0u64, |acc, j| {
                    (acc + mod_mul(self.get(i, j), v[j], m)) % m
                })
            })
            .collect())
    }

    pub fn pow(&self, n: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "matrix power requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let mut acc = ModMatrix::identity(self.rows, self.modulus)?;
        let mut base = self.clone();
        let mut e = n;
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

    /// Determinant reduced into `[0, modulus)`, computed exactly over the
    /// integers first.
    pub fn det(&self) -> Result<u64> {
        let d = self.to_int_matrix().det()?;
        let r = d.mod_floor(&BigInt::from(self.modulus));
        Ok(u64::try_from(&r).expect("residue fits the modulus"))
    }

    /// True when the determinant is a unit mod the modulus.
    pub fn is_invertible(&self) -> Result<bool> {
        let d = self.det()?;
        Ok(gcd(d, self.modulus) == 1)
    }

    /// Least `n >= 1` with `M^n = E` mod the modulus, or `None` if no such
    /// `n <= max_order`.
    pub fn order(&self, max_order: u64) -> Result<Option<u64>> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "multiplicative order requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        if !self.is_invertible()? {
            return Err(Error::NotInvertible(format!(
                "determinant {} is not a unit mod {}",
                self.det()?,
                self.modulus
            )));
        }
        let e = ModMatrix::identity(self.rows, self.modulus)?;
        let mut p = self.clone();
        for n in 1..=max_order {
            if p == e {
                return Ok(Some(n));
            }
            p = p.mul(self)?;
        }
        Ok(None)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks;

    #[test]
    fn lamp_block_orders_mod_two() {
        // Characteristic polynomials mod 2: the 2x2 and 3x3 blocks have
        // primitive ones (x^2+x+1 divides x^3-1, x^3+x+1 divides x^7-1), the
        // 4x4 block has x^4+x^3+x^2+x+1 dividing x^5-1, and the 5x5 block has
        // a primitive quintic dividing x^31-1.
        let expected = [(2usize, 3u64), (3, 7), (4, 5), (5, 31)];
        for (d, order) in expected {
            let b = blocks::lamp_block(d).unwrap().reduce_mod(2).unwrap();
            assert_eq!(b.order(100).unwrap(), Some(order), "block size {d}");
        }
    }

    #[test]
    fn order_of_base_block_reduction() {
        let b = blocks::base_block(3).unwrap().reduce_mod(2).unwrap();
        assert_eq!(b.order(100).unwrap(), Some(3));
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let b = blocks::lamp_block(4).unwrap().reduce_mod(8).unwrap();
        let mut acc = ModMatrix::identity(4, 8).unwrap();
        for n in 0..12u64 {
            assert_eq!(b.pow(n).unwrap(), acc);
            acc = acc.mul(&b).unwrap();
        }
    }

    #[test]
    fn invertibility_over_composite_modulus() {
        let even = ModMatrix::new(4, 2, 2, vec![2, 0, 0, 1]).unwrap();
        assert!(!even.is_invertible().unwrap());
        assert!(even.order(10).is_err());
        let odd = ModMatrix::new(4, 2, 2, vec![3, 0, 0, 1]).unwrap();
        assert!(odd.is_invertible().unwrap());
        assert_eq!(odd.order(10).unwrap(), Some(2));
    }

    #[test]
    fn entries_reduced_on_construction() {
        let m = ModMatrix::new(5, 1, 3, vec![7, 10, 4]).unwrap();
        assert_eq!(m.entries(), &[2, 0, 4]);
    }

    #[test]
    fn rejects_tiny_modulus() {
        assert!(ModMatrix::new(1, 1, 1, vec![0]).is_err());
    }
}
