//! The fixed matrices from which witness automorphisms are assembled.
//!
//! Witnesses combine two kinds of block. Base blocks are integer matrices of
//! finite multiplicative order n in {3, 5, 7} acting on the lattice part
//! `Z^k`; their key property is `|det(E - B)| = n`, which becomes the
//! Reidemeister number of the induced map on `Z^k`. Lamp blocks are 0/1
//! matrices acting on a homogeneous 2-group component `(Z_{2^r})^d`; their
//! key property is that `B^g - E` is invertible mod 2 for every exponent `g`
//! that can arise as an affine orbit length, so no twisted lamp configuration
//! is fixed.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Integer matrix of multiplicative order `n` with `|det(E - B)| = n`.
///
/// Supported orders are 3, 5 and 7. The order-3 block is
/// `[[0,1],[-1,-1]]`; the order-5 and order-7 blocks are the companion
/// matrices of `1 + x + ... + x^(n-1)`, of size `n - 1`.
pub fn base_block(n: u64) -> Result<IntMatrix> {
    match n {
        3 => IntMatrix::from_rows(&[vec![0, 1], vec![-1, -1]]),
        5 | 7 => {
            let d = (n - 1) as usize;
            let mut m = IntMatrix::zero(d, d);
            for i in 0..d {
                m.set(i, d - 1, (-1i64).into());
                if i > 0 {
                    m.set(i, i - 1, 1i64.into());
                }
            }
            Ok(m)
        }
        _ => Err(Error::Parameter(format!(
            "no base block of order {n}; supported orders are 3, 5, 7"
        ))),
    }
}

/// The 0/1 lamp block of size `d` in {2, 3, 4, 5}.
///
/// Each block is invertible mod 2, and for every divisor `g` of any base
/// block order paired with it, `B^g` fixes only the zero vector mod 2.
pub fn lamp_block(d: usize) -> Result<IntMatrix> {
    let rows: &[Vec<i64>] = match d {
        2 => &[vec![0, 1], vec![1, 1]],
        3 => &[vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]],
        4 => &[
            vec![0, 0, 0, 1],
            vec![1, 0, 0, 1],
            vec![0, 1, 0, 1],
            vec![0, 0, 1, 1],
        ],
        5 => &[
            vec![0, 0, 0, 0, 1],
            vec![0, 0, 0, 1, 1],
            vec![0, 0, 1, 1, 1],
            vec![0, 1, 1, 1, 1],
            vec![1, 1, 1, 1, 1],
        ],
        _ => {
            return Err(Error::Parameter(format!(
                "no lamp block of size {d}; supported sizes are 2 through 5"
            )))
        }
    };
    IntMatrix::from_rows(rows)
}
