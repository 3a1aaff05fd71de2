//! The finite-analogue oracle: twisted classes of a witness on
//! G wr (Z_n)^k, counted by exhaustive union-find and cross-checked
//! against the quotient-plus-restriction sum formula.
//!
//! ```sh
//! cargo run --example lamplighter_oracle
//! ```

use lamplighter::abelian::parse_group;
use lamplighter::classifier::{build_witness, CaseTag};
use lamplighter::oracle::finite_lamplighter_reidemeister;

fn main() -> lamplighter::Result<()> {
    // the Case4 witness for Z_5 lamps descends to G wr (Z_2)^2: a group of
    // 5^4 * 4 = 2500 elements
    let group = parse_group("2^1:3,5^1:1")?;
    let phi = build_witness(&group, 2, CaseTag::Case4)?;
    println!("witness over {group} restricted to the 5-part alone:");

    let group = parse_group("5^1:1")?;
    let phi5 = {
        // reuse the lattice part, keep only the scalar block
        let scalar = phi.blocks().last().unwrap().clone();
        lamplighter::wreath::WreathAutomorphism::new(phi.matrix().clone(), vec![scalar])?
    };
    let report = finite_lamplighter_reidemeister(&phi5, 2, None, 100_000)?;
    println!(
        "  {} wr (Z_2)^2: {} elements, {} twisted class(es)",
        group, report.group_order, report.classes
    );
    for rep in &report.representatives {
        println!("  representative: {rep}");
    }
    if let Some(sf) = &report.sum_formula {
        println!(
            "  sum formula: lattice reps {:?}, summands {:?}, total {} ({})",
            sf.lattice_representatives,
            sf.summands,
            sf.total,
            if sf.matches { "matches" } else { "MISMATCH" }
        );
    }

    // twisting by a pure shift z keeps the count when z lies in the image
    // of (id - M) on the quotient: such twists are conjugate to none at all
    for z in [[1i64, 0], [1, 1]] {
        let twisted = finite_lamplighter_reidemeister(&phi5, 2, Some(&z), 100_000)?;
        println!("  twister {z:?}: {} class(es)", twisted.classes);
    }

    // the identity on Z_2 wr Z_2 is ordinary conjugacy on the dihedral
    // group of order 8
    let group = parse_group("2^1:1")?;
    let id = lamplighter::wreath::WreathAutomorphism::new(
        lamplighter::matrix::IntMatrix::identity(1),
        vec![lamplighter::wreath::ActionBlock {
            component: group.components()[0],
            action: lamplighter::abelian::ComponentAction::Scalar(1),
        }],
    )?;
    let report = finite_lamplighter_reidemeister(&id, 2, None, 100_000)?;
    println!(
        "\nidentity on Z_2 wr Z_2: {} elements, {} conjugacy classes",
        report.group_order, report.classes
    );
    Ok(())
}
