//! Reidemeister numbers on finite abelian groups: the fixed-subgroup count
//! against the brute-force twisted-conjugacy oracle.
//!
//! ```sh
//! cargo run --example abelian_oracle
//! ```

use lamplighter::abelian::{
    parse_group, reidemeister_abelian, twisted_classes_bruteforce, BlockAutomorphism,
    ComponentAction,
};
use lamplighter::blocks::lamp_block;

fn main() -> lamplighter::Result<()> {
    // scalar multipliers: R = prod gcd(m - 1, p^r)^d over components
    for (spec, m) in [("5^1:1", 2u64), ("7^1:2", 3), ("3^2:1,5^1:2", 2)] {
        let group = parse_group(spec)?;
        let actions = group
            .components()
            .iter()
            .map(|_| ComponentAction::Scalar(m))
            .collect();
        let phi = BlockAutomorphism::new(&group, actions)?;
        let symbolic = reidemeister_abelian(&group, &phi)?;
        let (count, reps) = twisted_classes_bruteforce(&group, &phi, 1 << 16)?;
        println!(
            "G = {spec}, multiplier {m}: R = {symbolic} (oracle: {count}, first rep {:?})",
            reps[0].coords
        );
        assert_eq!(symbolic, count.into());
    }

    // a matrix block on (Z_2)^3: F_3 acts without nonzero fixed points
    let group = parse_group("2^1:3")?;
    let f3 = lamp_block(3)?.reduce_mod(2)?;
    let phi = BlockAutomorphism::new(&group, vec![ComponentAction::Matrix(f3)])?;
    let symbolic = reidemeister_abelian(&group, &phi)?;
    let (count, _) = twisted_classes_bruteforce(&group, &phi, 1 << 16)?;
    println!("G = (Z_2)^3 with the 3x3 lamp block: R = {symbolic} (oracle: {count})");

    // identity map: twisted conjugacy degenerates to equality, R = |G|
    let group = parse_group("3^1:1")?;
    let phi = BlockAutomorphism::identity(&group);
    let (count, reps) = twisted_classes_bruteforce(&group, &phi, 1 << 16)?;
    println!(
        "G = Z_3 with the identity: {count} classes, representatives {:?}",
        reps.iter().map(|r| r.coords[0][0]).collect::<Vec<_>>()
    );
    Ok(())
}
