//! Building a witness automorphism and certifying its Reidemeister number.
//!
//! The witness for G = (Z_2)^3 + Z_5 at k = 2 pairs an order-3 lattice
//! matrix with a fixed-point-free lamp block on the 2-part and the
//! multiplier 2 on the 5-part; the certificate pins R = |det(E - M)| = 3.
//!
//! ```sh
//! cargo run --example witness_and_certify
//! ```

use lamplighter::abelian::parse_group;
use lamplighter::certify::certify_finite_reidemeister;
use lamplighter::classifier::{build_witness, CaseTag};
use lamplighter::json::{certificate_to_json, witness_from_json, witness_to_json};

fn main() -> lamplighter::Result<()> {
    let group = parse_group("2^1:3,5^1:1")?;
    let phi = build_witness(&group, 2, CaseTag::Case4)?;

    let wire = witness_to_json(&phi);
    let text = serde_json::to_string_pretty(&wire)?;
    println!("witness JSON:\n{text}\n");

    // the wire form is lossless: certifying the round-trip gives the same R
    let phi = witness_from_json(&wire)?;
    let cert = certify_finite_reidemeister(&phi, 10_000)?;
    println!("lattice matrix order: {}", cert.order);
    println!("lattice twisted classes |det(E - M)|: {}", cert.lattice_classes);
    for check in &cert.checks {
        println!(
            "  gamma = {:>2}, block {}: {}",
            check.gamma,
            check.component,
            if check.ok { "fixed-point-free" } else { "FAILED" }
        );
    }
    println!("certified R = {}", cert.r.as_ref().expect("all checks pass"));

    println!("\nfull certificate JSON:");
    println!("{}", serde_json::to_string(&certificate_to_json(&wire, &cert))?);

    // a Case5 witness at k = 6 uses the order-7 lattice block
    let group = parse_group("2^1:2,3^1:1")?;
    let phi = build_witness(&group, 6, CaseTag::Case5)?;
    let cert = certify_finite_reidemeister(&phi, 10_000)?;
    println!(
        "\nCase5 witness for 2^1:2,3^1:1 at k = 6: order {}, R = {}",
        cert.order,
        cert.r.as_ref().expect("all checks pass")
    );
    Ok(())
}
