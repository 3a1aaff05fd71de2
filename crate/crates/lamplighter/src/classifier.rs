//! Decision procedure for the R-infinity property of `G wr Z^k`.
//!
//! The verdict depends only on the prime-power decomposition of `G` and the
//! rank `k`. A multiplicity-one summand `Z_{p^r}` with `p = 2`, or with
//! `p = 3` and `k` odd, forces every automorphism to have infinitely many
//! twisted classes. Five sufficient conditions go the other way, two of
//! them backed by an explicit witness builder; everything else is reported
//! as undecided rather than guessed.

use crate::abelian::{select_m, Component, ComponentAction, PrimePowerDecomposition};
use crate::blocks::{base_block, lamp_block};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::wreath::{ActionBlock, WreathAutomorphism};

/// The three possible answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// Some automorphism has finite Reidemeister number.
    NotRInfinity,
    /// Every automorphism has infinite Reidemeister number.
    RInfinity,
    /// No implemented criterion decides the input.
    Unknown,
}

/// Which criterion produced the verdict. The case numbers are the wire
/// names used in the JSON output.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    /// Multiplicity-one obstruction behind every `RInfinity` verdict.
    MultiplicityOne,
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
}

/// Verdict plus provenance, and the witness when one can be built.
#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: Verdict,
    pub case: Option<CaseTag>,
    pub witness: Option<WreathAutomorphism>,
    pub witness_available: bool,
    pub reason: String,
}

/// The component that triggers the multiplicity-one obstruction, if any:
/// `d = 1` with `p = 2` (any `k`) or `p = 3` and `k` odd.
pub fn multiplicity_one_obstruction(
    group: &PrimePowerDecomposition,
    k: usize,
) -> Option<&Component> {
    group
        .components()
        .iter()
        .find(|c| c.d == 1 && (c.p == 2 || (c.p == 3 && k % 2 == 1)))
}

fn case1_applies(group: &PrimePowerDecomposition, _k: usize) -> bool {
    group
        .components()
        .iter()
        .all(|c| c.p > 3 || c.d >= 2)
}

fn case2_applies(group: &PrimePowerDecomposition, k: usize) -> bool {
    k % 2 == 0 && group.components().iter().all(|c| c.p != 2)
}

fn case3_applies(group: &PrimePowerDecomposition, k: usize) -> bool {
    k % 4 == 0 && group.components().iter().all(|c| c.p != 2 || c.d >= 2)
}

fn case4_applies(group: &PrimePowerDecomposition, k: usize) -> bool {
    k % 2 == 0 && group.components().iter().all(|c| c.p != 2 || c.d >= 3)
}

fn case5_applies(group: &PrimePowerDecomposition, k: usize) -> bool {
    k % 2 == 0
        && k >= 4
        && group
            .components()
            .iter()
            .all(|c| c.p != 2 || (c.d >= 2 && c.d != 3))
}

/// All sufficient conditions for a finite-Reidemeister automorphism, in the
/// order they are tried.
///
/// Any match settles the verdict, so the order only picks the reported tag;
/// the two cases with witness builders come first so that a witness is
/// attached whenever one of them fits.
const CASES: [(CaseTag, fn(&PrimePowerDecomposition, usize) -> bool); 5] = [
    (CaseTag::Case2, case2_applies),
    (CaseTag::Case4, case4_applies),
    (CaseTag::Case5, case5_applies),
    (CaseTag::Case1, case1_applies),
    (CaseTag::Case3, case3_applies),
];

/// Decides the R-infinity status of `G wr Z^k`.
pub fn classify(group: &PrimePowerDecomposition, k: usize) -> Result<Classification> {
    if k == 0 {
        return Err(Error::Parameter("lattice rank k must be at least 1".into()));
    }
    if let Some(c) = multiplicity_one_obstruction(group, k) {
        let why = if c.p == 2 {
            format!("the summand Z_{} appears with multiplicity one and p = 2", c.modulus())
        } else {
            format!(
                "the summand Z_{} appears with multiplicity one, p = 3 and k = {k} is odd",
                c.modulus()
            )
        };
        return Ok(Classification {
            verdict: Verdict::RInfinity,
            case: Some(CaseTag::MultiplicityOne),
            witness: None,
            witness_available: false,
            reason: format!("{why}; every automorphism has infinite Reidemeister number"),
        });
    }
    for (tag, applies) in CASES {
        if applies(group, k) {
            let (witness, witness_available, reason) = match tag {
                CaseTag::Case4 | CaseTag::Case5 => {
                    let w = build_witness(group, k, tag)?;
                    let reason = match tag {
                        CaseTag::Case4 => format!(
                            "every 2-primary component has multiplicity >= 3 and k = {k} is \
                             even; witness uses {} order-3 lattice blocks",
                            k / 2
                        ),
                        _ => format!(
                            "every 2-primary component has multiplicity >= 2 (and != 3) and \
                             k = {k} is even with k >= 4; witness uses order-5 and order-7 \
                             lattice blocks"
                        ),
                    };
                    (Some(w), true, reason)
                }
                _ => {
                    let condition = match tag {
                        CaseTag::Case1 => {
                            "every 2- and 3-primary component has multiplicity >= 2"
                        }
                        CaseTag::Case2 => "the lamp group has odd order and k is even",
                        _ => {
                            "every 2-primary component has multiplicity >= 2 and k is \
                             divisible by 4"
                        }
                    };
                    (
                        None,
                        false,
                        format!(
                            "{condition}; a suitable automorphism exists by previously \
                             published constructions, which this library does not rebuild"
                        ),
                    )
                }
            };
            return Ok(Classification {
                verdict: Verdict::NotRInfinity,
                case: Some(tag),
                witness,
                witness_available,
                reason,
            });
        }
    }
    Ok(Classification {
        verdict: Verdict::Unknown,
        case: None,
        witness: None,
        witness_available: false,
        reason: format!("no implemented criterion decides this decomposition at k = {k}"),
    })
}

/// Splits `d >= 3` into parts from `{3, 4, 5}`: all 3s, with one part
/// upgraded to 4 or 5 to absorb the remainder mod 3. Ascending.
pub fn partition_345(d: usize) -> Result<Vec<usize>> {
    if d < 3 {
        return Err(Error::Parameter(format!(
            "{d} cannot be split into parts of size 3, 4 and 5"
        )));
    }
    let mut parts = match d % 3 {
        0 => vec![3; d / 3],
        1 => {
            let mut v = vec![3; (d - 4) / 3];
            v.push(4);
            v
        }
        _ => {
            let mut v = vec![3; (d - 5) / 3];
            v.push(5);
            v
        }
    };
    parts.sort_unstable();
    Ok(parts)
}

/// Splits `d >= 2`, `d != 3` into parts from `{2, 5}`: all 2s when even,
/// one 5 when odd. Ascending.
pub fn partition_25(d: usize) -> Result<Vec<usize>> {
    if d < 2 || d == 3 {
        return Err(Error::Parameter(format!(
            "{d} cannot be split into parts of size 2 and 5"
        )));
    }
    let mut parts = if d % 2 == 0 {
        vec![2; d / 2]
    } else {
        let mut v = vec![2; (d - 5) / 2];
        v.push(5);
        v
    };
    parts.sort_unstable();
    Ok(parts)
}

/// Builds the finite-Reidemeister witness for `Case4` or `Case5`.
///
/// Case4 uses `k/2` order-3 lattice blocks; 2-primary components split per
/// [`partition_345`] into fixed-point-free lamp blocks, odd components get
/// the multiplier from [`select_m`]. Case5 uses order-5 lattice blocks plus
/// one order-7 block when `k = 2 mod 4`; 2-primary components split per
/// [`partition_25`], odd components get the multiplier `p - 1`.
pub fn build_witness(
    group: &PrimePowerDecomposition,
    k: usize,
    case: CaseTag,
) -> Result<WreathAutomorphism> {
    let applies = match case {
        CaseTag::Case4 => case4_applies(group, k),
        CaseTag::Case5 => case5_applies(group, k),
        _ => {
            return Err(Error::NoWitness(format!(
                "no witness builder for {case:?}"
            )))
        }
    };
    if !applies || multiplicity_one_obstruction(group, k).is_some() {
        return Err(Error::NoWitness(format!(
            "{case:?} does not apply to {group} with k = {k}"
        )));
    }

    let matrix = match case {
        CaseTag::Case4 => repeat_blocks(&[(base_block(3)?, k / 2)]),
        _ => {
            if k % 4 == 0 {
                repeat_blocks(&[(base_block(5)?, k / 4)])
            } else {
                repeat_blocks(&[(base_block(5)?, (k - 6) / 4), (base_block(7)?, 1)])
            }
        }
    };

    let mut action_blocks = Vec::new();
    for c in group.components() {
        if c.p == 2 {
            let parts = match case {
                CaseTag::Case4 => partition_345(c.d)?,
                _ => partition_25(c.d)?,
            };
            for part in parts {
                action_blocks.push(ActionBlock {
                    component: Component::new(2, c.r, part)?,
                    action: ComponentAction::Matrix(
                        lamp_block(part)?.reduce_mod(c.modulus())?,
                    ),
                });
            }
        } else {
            let m = match case {
                CaseTag::Case4 => select_m(c.p, c.r)?,
                _ => c.p - 1,
            };
            for _ in 0..c.d {
                action_blocks.push(ActionBlock {
                    component: Component::new(c.p, c.r, 1)?,
                    action: ComponentAction::Scalar(m),
                });
            }
        }
    }
    WreathAutomorphism::new(matrix, action_blocks)
}

fn repeat_blocks(parts: &[(IntMatrix, usize)]) -> IntMatrix {
    let mut acc: Option<IntMatrix> = None;
    for (block, copies) in parts {
        for _ in 0..*copies {
            acc = Some(match acc {
                None => block.clone(),
                Some(m) => m.direct_sum(block),
            });
        }
    }
    acc.expect("at least one lattice block")
}
