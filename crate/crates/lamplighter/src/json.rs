//! Wire formats: witness, certificate, classification, and oracle reports.
//!
//! Matrices travel as nested arrays of arbitrary-precision JSON numbers, so
//! round-tripping through files never truncates an integer. A witness
//! component carries either a matrix block `F` or a scalar multiplier `m`;
//! scalar entries always describe a single summand.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Number;
use std::str::FromStr;

use crate::abelian::{Component, ComponentAction};
use crate::certify::OrbitCertificate;
use crate::classifier::{CaseTag, Classification, Verdict};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::modular::ModMatrix;
use crate::wreath::{ActionBlock, WreathAutomorphism};

/// A witness automorphism on the wire.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WitnessJson {
    pub k: usize,
    #[serde(rename = "M")]
    pub matrix: Vec<Vec<Number>>,
    pub components: Vec<ComponentJson>,
}

/// One lamp block: matrix form carries `F`, scalar form carries `m` with
/// `d = 1`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentJson {
    pub p: u64,
    pub r: u32,
    pub d: usize,
    #[serde(rename = "F", default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<Vec<Number>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
}

/// Certificate on the wire: the witness echoed back plus the check results.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateJson {
    pub k: usize,
    #[serde(rename = "M")]
    pub matrix: Vec<Vec<Number>>,
    pub components: Vec<ComponentJson>,
    pub order: u64,
    pub checks: Vec<CheckJson>,
    #[serde(rename = "R", default, skip_serializing_if = "Option::is_none")]
    pub r: Option<Number>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckJson {
    pub gamma: u64,
    pub component: usize,
    pub ok: bool,
}

/// Classification on the wire. `case` and `witness` are explicit nulls when
/// absent.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationJson {
    pub verdict: String,
    pub case: Option<String>,
    pub witness: Option<WitnessJson>,
    pub witness_available: bool,
    pub reason: String,
}

pub fn matrix_to_numbers(m: &IntMatrix) -> Vec<Vec<Number>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| bigint_to_number(m.get(i, j))).collect())
        .collect()
}

pub fn numbers_to_matrix(rows: &[Vec<Number>]) -> Result<IntMatrix> {
    if rows.is_empty() {
        return Err(Error::Parse("matrix needs at least one row".into()));
    }
    let cols = rows[0].len();
    let mut entries = Vec::with_capacity(rows.len() * cols);
    for row in rows {
        if row.len() != cols {
            return Err(Error::Parse("matrix rows have unequal lengths".into()));
        }
        for n in row {
            entries.push(number_to_bigint(n)?);
        }
    }
    IntMatrix::new(rows.len(), cols, entries)
}

fn bigint_to_number(v: &BigInt) -> Number {
    Number::from_str(&v.to_string()).expect("integer literal is a valid JSON number")
}

fn number_to_bigint(n: &Number) -> Result<BigInt> {
    let text = n.to_string();
    BigInt::from_str(&text)
        .map_err(|_| Error::Parse(format!("{text} is not an integer")))
}

pub fn witness_to_json(phi: &WreathAutomorphism) -> WitnessJson {
    let components = phi
        .blocks()
        .iter()
        .map(|b| {
            let (f, m) = match &b.action {
                ComponentAction::Matrix(f) => (Some(matrix_to_numbers(&f.to_int_matrix())), None),
                ComponentAction::Scalar(m) => (None, Some(*m)),
            };
            ComponentJson {
                p: b.component.p,
                r: b.component.r,
                d: b.component.d,
                f,
                m,
            }
        })
        .collect();
    WitnessJson {
        k: phi.k(),
        matrix: matrix_to_numbers(phi.matrix()),
        components,
    }
}

pub fn witness_from_json(w: &WitnessJson) -> Result<WreathAutomorphism> {
    let matrix = numbers_to_matrix(&w.matrix)?;
    if matrix.rows() != w.k || matrix.cols() != w.k {
        return Err(Error::Parse(format!(
            "witness declares k = {} but M is {}x{}",
            w.k,
            matrix.rows(),
            matrix.cols()
        )));
    }
    let mut blocks = Vec::with_capacity(w.components.len());
    for c in &w.components {
        let component = Component::new(c.p, c.r, c.d)?;
        let action = match (&c.f, c.m) {
            (Some(rows), None) => {
                let lift = numbers_to_matrix(rows)?;
                ComponentAction::Matrix(reduce_entries(&lift, component.modulus())?)
            }
            (None, Some(m)) => {
                if c.d != 1 {
                    return Err(Error::Parse(format!(
                        "scalar component {}^{} must have d = 1, got {}",
                        c.p, c.r, c.d
                    )));
                }
                ComponentAction::Scalar(m)
            }
            _ => {
                return Err(Error::Parse(
                    "each component needs exactly one of F or m".into(),
                ))
            }
        };
        blocks.push(ActionBlock { component, action });
    }
    WreathAutomorphism::new(matrix, blocks)
}

fn reduce_entries(lift: &IntMatrix, modulus: u64) -> Result<ModMatrix> {
    let entries = lift
        .entries()
        .iter()
        .map(|e| {
            e.mod_floor(&BigInt::from(modulus))
                .to_u64()
                .expect("reduced entry fits u64")
        })
        .collect();
    ModMatrix::new(modulus, lift.rows(), lift.cols(), entries)
}

pub fn certificate_to_json(witness: &WitnessJson, cert: &OrbitCertificate) -> CertificateJson {
    CertificateJson {
        k: witness.k,
        matrix: witness.matrix.clone(),
        components: witness.components.clone(),
        order: cert.order,
        checks: cert
            .checks
            .iter()
            .map(|c| CheckJson {
                gamma: c.gamma,
                component: c.component,
                ok: c.ok,
            })
            .collect(),
        r: cert
            .r
            .as_ref()
            .map(|r| Number::from_str(&r.to_string()).expect("valid number")),
        failure: cert.failure.clone(),
    }
}

pub fn verdict_name(verdict: Verdict) -> &'static str {
    match verdict {
        Verdict::NotRInfinity => "not_r_infinity",
        Verdict::RInfinity => "r_infinity",
        Verdict::Unknown => "unknown",
    }
}

pub fn case_name(case: CaseTag) -> &'static str {
    match case {
        CaseTag::MultiplicityOne => "theorem2",
        CaseTag::Case1 => "case1",
        CaseTag::Case2 => "case2",
        CaseTag::Case3 => "case3",
        CaseTag::Case4 => "case4",
        CaseTag::Case5 => "case5",
    }
}

pub fn classification_to_json(c: &Classification) -> ClassificationJson {
    ClassificationJson {
        verdict: verdict_name(c.verdict).to_string(),
        case: c.case.map(|t| case_name(t).to_string()),
        witness: c.witness.as_ref().map(witness_to_json),
        witness_available: c.witness_available,
        reason: c.reason.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::parse_group;
    use crate::certify::certify_finite_reidemeister;
    use crate::classifier::{build_witness, classify};

    fn case4_witness() -> WreathAutomorphism {
        let group = parse_group("2^1:3,5^1:1").unwrap();
        build_witness(&group, 2, CaseTag::Case4).unwrap()
    }

    #[test]
    fn witness_round_trips() {
        let phi = case4_witness();
        let wire = witness_to_json(&phi);
        let text = serde_json::to_string(&wire).unwrap();
        let back: WitnessJson = serde_json::from_str(&text).unwrap();
        let phi2 = witness_from_json(&back).unwrap();
        assert_eq!(phi2.matrix(), phi.matrix());
        assert_eq!(phi2.blocks().len(), phi.blocks().len());
        assert_eq!(witness_to_json(&phi2).matrix, wire.matrix);
    }

    #[test]
    fn witness_wire_shape_matches_the_schema() {
        let wire = witness_to_json(&case4_witness());
        let v: serde_json::Value = serde_json::to_value(&wire).unwrap();
        assert_eq!(v["k"], 2);
        assert_eq!(v["M"][0][1], serde_json::json!(1));
        let comp = &v["components"][0];
        assert_eq!(comp["p"], 2);
        assert_eq!(comp["d"], 3);
        assert!(comp.get("m").is_none());
        assert_eq!(comp["F"][0].as_array().unwrap().len(), 3);
        let scalar = &v["components"][1];
        assert_eq!(scalar["d"], 1);
        assert_eq!(scalar["m"], 2);
        assert!(scalar.get("F").is_none());
    }

    #[test]
    fn certificate_echoes_witness_and_reports_r() {
        let phi = case4_witness();
        let wire = witness_to_json(&phi);
        let cert = certify_finite_reidemeister(&phi, 10_000).unwrap();
        let cj = certificate_to_json(&wire, &cert);
        let v = serde_json::to_value(&cj).unwrap();
        assert_eq!(v["R"], serde_json::json!(3));
        assert_eq!(v["order"], 3);
        assert_eq!(v["M"], serde_json::to_value(&wire.matrix).unwrap());
        assert!(v["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
        assert!(v.get("failure").is_none());
    }

    #[test]
    fn classification_wire_names() {
        let group = parse_group("2^1:1").unwrap();
        let c = classify(&group, 3).unwrap();
        let v = serde_json::to_value(classification_to_json(&c)).unwrap();
        assert_eq!(v["verdict"], "r_infinity");
        assert_eq!(v["case"], "theorem2");
        assert_eq!(v["witness"], serde_json::Value::Null);
        assert_eq!(v["witness_available"], false);

        let group = parse_group("3^1:1,2^1:2").unwrap();
        let c = classify(&group, 2).unwrap();
        let v = serde_json::to_value(classification_to_json(&c)).unwrap();
        assert_eq!(v["verdict"], "unknown");
        assert_eq!(v["case"], serde_json::Value::Null);
    }

    #[test]
    fn malformed_components_are_rejected() {
        let mut wire = witness_to_json(&case4_witness());
        wire.components[0].m = Some(2);
        assert!(witness_from_json(&wire).is_err());
        let mut wire = witness_to_json(&case4_witness());
        wire.components[0].f = None;
        assert!(witness_from_json(&wire).is_err());
        let mut wire = witness_to_json(&case4_witness());
        wire.components[1].d = 2;
        assert!(witness_from_json(&wire).is_err());
    }

    #[test]
    fn huge_entries_survive_the_wire() {
        let big = BigInt::from_str("123456789012345678901234567890").unwrap();
        let m = IntMatrix::new(1, 1, vec![big.clone()]).unwrap();
        let wire = matrix_to_numbers(&m);
        let back = numbers_to_matrix(&wire).unwrap();
        assert_eq!(back.get(0, 0), &big);
    }

    #[test]
    fn negative_matrix_entries_reduce_into_range() {
        let wire: WitnessJson = serde_json::from_str(
            r#"{"k":1,"M":[[1]],"components":[{"p":5,"r":1,"d":1,"F":[[-1]]}]}"#,
        )
        .unwrap();
        let phi = witness_from_json(&wire).unwrap();
        match &phi.blocks()[0].action {
            ComponentAction::Matrix(f) => assert_eq!(f.get(0, 0), 4),
            _ => panic!("expected matrix block"),
        }
    }
}
