//! Smith normal form and its consumers: cokernel orders and kernel counts.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A diagonalization `U * M * V = S` by unimodular `U` and `V`.
///
/// The diagonal of `S` is nonnegative and each entry divides the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal entries of `S`, of length `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.s.rows().min(self.s.cols());
        (0..n).map(|i| self.s.get(i, i).clone()).collect()
    }
}

/// Either a finite cardinal or a countable infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cardinality {
    Finite(BigUint),
    Infinite,
}

impl fmt::Display for Cardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinality::Finite(n) => write!(f, "{n}"),
            Cardinality::Infinite => write!(f, "infinite"),
        }
    }
}

/// Computes the Smith normal form of `m`.
///
/// Deterministic: the pivot is always the smallest nonzero entry in absolute
/// value of the untouched submatrix, ties broken by lowest (row, col) index,
/// and the diagonal is normalized to be nonnegative. Fixing the strategy
/// makes every downstream certificate reproducible byte for byte.
pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = Work::from_matrix(m);
    let mut u = Work::identity(rows);
    let mut v = Work::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pi, pj)) = pivot_position(&a, t) else {
                // the remaining submatrix is zero
                return finish(a, u, v);
            };
            if pi != t {
                a.swap_rows(t, pi);
                u.swap_rows(t, pi);
            }
            if pj != t {
                a.swap_cols(t, pj);
                v.swap_cols(t, pj);
            }

            let mut clean = true;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = a.get(i, t) / a.get(t, t);
                if !q.is_zero() {
                    a.row_axpy(i, t, &q);
                    u.row_axpy(i, t, &q);
                }
                if !a.get(i, t).is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = a.get(t, j) / a.get(t, t);
                if !q.is_zero() {
                    a.col_axpy(j, t, &q);
                    v.col_axpy(j, t, &q);
                }
                if !a.get(t, j).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // a division left a remainder smaller than the pivot; rescan
                continue;
            }

            if let Some(bad_row) = first_nondivisible_row(&a, t) {
                a.add_row(t, bad_row);
                u.add_row(t, bad_row);
                continue;
            }

            if a.get(t, t).is_negative() {
                a.negate_row(t);
                u.negate_row(t);
            }
            break;
        }
    }
    finish(a, u, v)
}

/// Order of `coker(M) = Z^n / M Z^n` for square `M`: the product of the
/// Smith diagonal when it is free of zeros, infinite otherwise. Equals
/// `|det M|` whenever the determinant is nonzero.
pub fn coker_order(m: &IntMatrix) -> Result<Cardinality> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "cokernel order requires a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let diag = smith_normal_form(m).diagonal();
    if diag.iter().any(|s| s.is_zero()) {
        return Ok(Cardinality::Infinite);
    }
    let product = diag
        .iter()
        .fold(BigUint::one(), |acc, s| acc * s.magnitude());
    Ok(Cardinality::Finite(product))
}

/// Number of `x` in `(Z_q)^d` with `B x = 0 (mod q)`, for square `B` of
/// size `d`.
///
/// Computed from the Smith normal form of the integer matrix: each diagonal
/// entry `s` contributes `gcd(s, q)` solutions (with `gcd(0, q) = q`), and
/// the unimodular transforms preserve the solution count.
pub fn kernel_count_mod(b: &IntMatrix, q: u64) -> Result<BigUint> {
    if !b.is_square() {
        return Err(Error::Dimension(format!(
            "kernel counting requires a square matrix, got {}x{}",
            b.rows(),
            b.cols()
        )));
    }
    if q < 2 {
        return Err(Error::Parameter(format!("modulus must be >= 2, got {q}")));
    }
    let q = BigInt::from(q);
    let count = smith_normal_form(b)
        .diagonal()
        .iter()
        .fold(BigUint::one(), |acc, s| acc * s.gcd(&q).magnitude());
    Ok(count)
}

/// Flat matrix storage for the row/column operations of the reduction.
struct Work {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl Work {
    fn from_matrix(m: &IntMatrix) -> Self {
        Work {
            rows: m.rows(),
            cols: m.cols(),
            entries: m.entries().to_vec(),
        }
    }

    fn identity(n: usize) -> Self {
        let mut entries = vec![BigInt::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = BigInt::one();
        }
        Work { rows: n, cols: n, entries }
    }

    fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[target] -= q * row[source]`
    fn row_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        for j in 0..self.cols {
            let delta = q * self.get(source, j);
            self.entries[target * self.cols + j] -= delta;
        }
    }

    /// `col[target] -= q * col[source]`
    fn col_axpy(&mut self, target: usize, source: usize, q: &BigInt) {
        for i in 0..self.rows {
            let delta = q * self.get(i, source);
            self.entries[i * self.cols + target] -= delta;
        }
    }

    /// `row[target] += row[source]`
    fn add_row(&mut self, target: usize, source: usize) {
        for j in 0..self.cols {
            let delta = self.get(source, j).clone();
            self.entries[target * self.cols + j] += delta;
        }
    }

    fn negate_row(&mut self, row: usize) {
        for j in 0..self.cols {
            let cell = &mut self.entries[row * self.cols + j];
            *cell = -std::mem::take(cell);
        }
    }

    fn into_matrix(self) -> IntMatrix {
        IntMatrix::new(self.rows, self.cols, self.entries)
            .expect("work dimensions are valid by construction")
    }
}

/// Smallest nonzero entry in absolute value of the submatrix starting at
/// `(t, t)`, ties broken by lowest (row, col) in row-major scan order.
fn pivot_position(a: &Work, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows {
        for j in t..a.cols {
            let e = a.get(i, j);
            if e.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= e.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// First entry of the submatrix past `t` that the pivot does not divide,
/// reported by its row.
fn first_nondivisible_row(a: &Work, t: usize) -> Option<usize> {
    let pivot = a.get(t, t);
    for i in t + 1..a.rows {
        for j in t + 1..a.cols {
            if !a.get(i, j).is_multiple_of(pivot) {
                return Some(i);
            }
        }
    }
    None
}

fn finish(a: Work, u: Work, v: Work) -> SmithForm {
    SmithForm {
        u: u.into_matrix(),
        s: a.into_matrix(),
        v: v.into_matrix(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks;

    fn assert_valid_snf(m: &IntMatrix, snf: &SmithForm) {
        let product = snf.u.mul(m).unwrap().mul(&snf.v).unwrap();
        assert_eq!(product, snf.s, "U*M*V must equal S");
        assert_eq!(snf.u.det().unwrap().abs(), BigInt::one());
        assert_eq!(snf.v.det().unwrap().abs(), BigInt::one());
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[0].is_zero() || !w[1].is_zero() {
                assert!(
                    w[1].is_multiple_of(&w[0]) || (w[0].is_zero() && w[1].is_zero()),
                    "divisibility chain broken: {} then {}",
                    w[0],
                    w[1]
                );
            }
        }
        for (i, s) in diag.iter().enumerate() {
            assert!(!s.is_negative(), "diagonal entry {i} is negative");
        }
        for i in 0..snf.s.rows() {
            for j in 0..snf.s.cols() {
                if i != j {
                    assert!(snf.s.get(i, j).is_zero(), "off-diagonal at ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn diag_two_three_normalizes_to_one_six() {
        let m = IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap();
        let snf = smith_normal_form(&m);
        assert_valid_snf(&m, &snf);
        assert_eq!(snf.diagonal(), vec![BigInt::one(), BigInt::from(6)]);
    }

    #[test]
    fn defect_of_order_three_block() {
        let m = IntMatrix::from_rows(&[vec![1, -1], vec![1, 2]]).unwrap();
        let snf = smith_normal_form(&m);
        assert_valid_snf(&m, &snf);
        assert_eq!(snf.diagonal(), vec![BigInt::one(), BigInt::from(3)]);
    }

    #[test]
    fn zero_matrix_stays_zero() {
        let m = IntMatrix::zero(2, 2);
        let snf = smith_normal_form(&m);
        assert_valid_snf(&m, &snf);
        assert_eq!(snf.s, IntMatrix::zero(2, 2));
    }

    #[test]
    fn rectangular_input() {
        let m = IntMatrix::from_rows(&[vec![4, 6, 8], vec![2, 2, 2]]).unwrap();
        let snf = smith_normal_form(&m);
        assert_valid_snf(&m, &snf);
    }

    #[test]
    fn deterministic_output() {
        let m = IntMatrix::from_rows(&[vec![6, 4, -3], vec![0, 5, 9], vec![7, -2, 2]]).unwrap();
        assert_eq!(smith_normal_form(&m), smith_normal_form(&m));
    }

    #[test]
    fn coker_orders() {
        let defect3 = IntMatrix::from_rows(&[vec![1, -1], vec![1, 2]]).unwrap();
        assert_eq!(
            coker_order(&defect3).unwrap(),
            Cardinality::Finite(3u32.into())
        );
        assert_eq!(
            coker_order(&IntMatrix::zero(3, 3)).unwrap(),
            Cardinality::Infinite
        );

        let m = blocks::base_block(5)
            .unwrap()
            .direct_sum(&blocks::base_block(5).unwrap())
            .direct_sum(&blocks::base_block(7).unwrap());
        let defect = IntMatrix::identity(14).sub(&m).unwrap();
        assert_eq!(
            coker_order(&defect).unwrap(),
            Cardinality::Finite(175u32.into())
        );
    }

    #[test]
    fn coker_requires_square() {
        let m = IntMatrix::from_rows(&[vec![1, 2, 3], vec![4, 5, 6]]).unwrap();
        assert!(coker_order(&m).is_err());
    }

    #[test]
    fn kernel_counts() {
        let f2 = blocks::lamp_block(2).unwrap();
        let b = f2.sub(&IntMatrix::identity(2)).unwrap();
        assert_eq!(kernel_count_mod(&b, 2).unwrap(), 1u32.into());

        assert_eq!(
            kernel_count_mod(&IntMatrix::zero(3, 3), 4).unwrap(),
            64u32.into()
        );

        let f3 = blocks::lamp_block(3).unwrap();
        let b = f3.sub(&IntMatrix::identity(3)).unwrap();
        assert_eq!(kernel_count_mod(&b, 8).unwrap(), 1u32.into());
    }

    #[test]
    fn kernel_count_rejects_bad_modulus() {
        assert!(kernel_count_mod(&IntMatrix::identity(2), 1).is_err());
        assert!(kernel_count_mod(&IntMatrix::identity(2), 0).is_err());
    }
}
