//! Classifying G wr Z^k: which lamp groups admit an automorphism with
//! finite Reidemeister number, at which ranks.
//!
//! ```sh
//! cargo run --example classify
//! ```

use lamplighter::abelian::parse_group;
use lamplighter::classifier::{classify, Verdict};
use lamplighter::json::{case_name, verdict_name};

fn main() -> lamplighter::Result<()> {
    let table = [
        ("2^1:1", 3),
        ("3^1:1", 1),
        ("3^1:1", 2),
        ("2^1:2", 4),
        ("2^1:3,5^1:1", 2),
        ("2^1:2,3^1:1", 4),
        ("3^1:1,2^1:2", 2),
        ("2^1:1,3^1:2", 4),
        ("5^1:1,7^2:3", 1),
        ("2^1:2,2^2:3,3^1:1", 4),
    ];

    println!("{:<22} {:>2}  {:<16} {:<9} witness", "group", "k", "verdict", "case");
    for (spec, k) in table {
        let group = parse_group(spec)?;
        let c = classify(&group, k)?;
        println!(
            "{:<22} {:>2}  {:<16} {:<9} {}",
            spec,
            k,
            verdict_name(c.verdict),
            c.case.map(case_name).unwrap_or("-"),
            if c.witness.is_some() { "attached" } else { "-" }
        );
        if c.verdict == Verdict::Unknown {
            println!("{:>29}{}", "", c.reason);
        }
    }

    println!("\nrank sensitivity for G = Z_3 (multiplicity one):");
    for k in 1..=4 {
        let c = classify(&parse_group("3^1:1")?, k)?;
        println!("  k = {k}: {}", verdict_name(c.verdict));
    }
    Ok(())
}
