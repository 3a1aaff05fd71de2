//! Randomized structural checks on wreath automorphisms: the translation
//! intertwining law, the homomorphism law, and affine orbit shapes.
//!
//! ```sh
//! cargo run --example equivariance
//! ```

use std::collections::BTreeMap;

use lamplighter::abelian::parse_group;
use lamplighter::classifier::{build_witness, CaseTag};
use lamplighter::wreath::{
    affine_orbit, verify_equivariance, verify_equivariance_with, WreathElement, WreathGroup,
};

fn main() -> lamplighter::Result<()> {
    let group = parse_group("2^1:3,5^1:1")?;
    let phi = build_witness(&group, 2, CaseTag::Case4)?;
    let ambient = WreathGroup::new(phi.shape(), phi.k())?;

    let report = verify_equivariance(&ambient, &phi, 200, 42)?;
    println!(
        "lawful witness: {} after {} trials",
        if report.pass { "pass" } else { "fail" },
        report.trials
    );

    // forgetting to transport lamps along the lattice matrix breaks the
    // intertwining law; the checker finds a counterexample quickly
    let broken = |x: &WreathElement| -> lamplighter::Result<WreathElement> {
        let mut lamps = BTreeMap::new();
        for (site, value) in &x.lamps {
            lamps.insert(site.clone(), phi.lamp_map(value));
        }
        Ok(WreathElement { lamps, shift: x.shift.clone() })
    };
    let report = verify_equivariance_with(&ambient, &broken, phi.matrix(), 200, 42)?;
    println!(
        "broken transport: {} after {} trials",
        if report.pass { "pass" } else { "fail" },
        report.trials
    );
    if let Some(failure) = report.failure {
        println!("  {failure}");
    }

    // orbits of x -> Mx + z partition the lattice into cycles whose
    // lengths divide the order of M
    println!("\naffine orbits under the order-3 lattice block:");
    for (z, x) in [([0, 0], [1, 0]), ([1, 0], [0, 0]), ([0, 0], [0, 0])] {
        let orbit = affine_orbit(phi.matrix(), &z, &x, 100)?;
        println!("  z = {z:?}, start {x:?}: length {} orbit {:?}", orbit.len(), orbit);
    }
    Ok(())
}
