//! Exact integer linear algebra: determinants, Smith normal form,
//! cokernel orders, and multiplicative orders.
//!
//! ```sh
//! cargo run --example exact_linalg
//! ```

use lamplighter::blocks::{base_block, lamp_block};
use lamplighter::matrix::IntMatrix;
use lamplighter::snf::{coker_order, kernel_count_mod, smith_normal_form};

fn main() -> lamplighter::Result<()> {
    println!("lattice blocks and their twisted-class counts");
    for n in [3u64, 5, 7] {
        let m = base_block(n)?;
        let defect = IntMatrix::identity(m.rows()).sub(&m)?;
        println!(
            "  order-{n} block ({}x{}): det(E - M) = {}, multiplicative order = {}",
            m.rows(),
            m.cols(),
            defect.det()?,
            m.order(100)?.unwrap()
        );
    }

    println!("\nlamp blocks and their orders mod 2");
    for d in [2usize, 3, 4, 5] {
        let f = lamp_block(d)?;
        println!(
            "  F_{d}: det = {}, order mod 2 = {}",
            f.det()?,
            f.reduce_mod(2)?.order(100)?.unwrap()
        );
    }

    println!("\nfixed points of F_3^gamma mod 2 (1 = fixed-point-free)");
    let f3 = lamp_block(3)?.reduce_mod(2)?;
    for gamma in [1u64, 3] {
        let diff = f3.pow(gamma)?.to_int_matrix().sub(&IntMatrix::identity(3))?;
        println!("  gamma = {gamma}: kernel size {}", kernel_count_mod(&diff, 2)?);
    }

    let m = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]])?;
    let snf = smith_normal_form(&m);
    println!("\nSmith normal form of {m}");
    println!("  diagonal: {:?}", snf.diagonal());
    println!("  U M V = S with U = {}, V = {}", snf.u, snf.v);
    println!("  cokernel order: {}", coker_order(&m)?);

    let defect = IntMatrix::from_rows(&[vec![1, -1], vec![1, 2]])?;
    println!("\ncoker of {defect}: {} twisted classes on Z^2", coker_order(&defect)?);
    Ok(())
}
