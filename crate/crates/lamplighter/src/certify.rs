//! Certificates of finite Reidemeister number for wreath automorphisms.
//!
//! For an automorphism with lattice matrix `M` of finite order `n` and
//! `det(E - M) != 0`, the lattice quotient contributes `|det(E - M)|`
//! twisted classes, each closing an affine orbit whose length divides `n`.
//! The total count stays at `|det(E - M)|` exactly when, for every divisor
//! `gamma` of `n`, the `gamma`-th power of each lamp block acts without
//! nonzero fixed points; each check below is one such condition, verified
//! by exact kernel counting modulo `p`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::abelian::ComponentAction;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::primes::{divisors, mod_pow};
use crate::snf::kernel_count_mod;
use crate::wreath::WreathAutomorphism;

/// One fixed-point-freeness condition: block `component` raised to the
/// power `gamma`.
#[derive(Clone, Debug)]
pub struct CertificateCheck {
    pub gamma: u64,
    pub component: usize,
    pub ok: bool,
}

/// The full certificate for one automorphism.
#[derive(Clone, Debug)]
pub struct OrbitCertificate {
    /// Multiplicative order of the lattice matrix.
    pub order: u64,
    /// One entry per divisor of `order` and per block, in that order.
    pub checks: Vec<CertificateCheck>,
    /// Twisted class count of the induced map on `Z^k`, `|det(E - M)|`.
    pub lattice_classes: BigUint,
    /// Total Reidemeister number, present when every check passes.
    pub r: Option<BigUint>,
    /// First failing condition, in words.
    pub failure: Option<String>,
}

impl OrbitCertificate {
    pub fn is_valid(&self) -> bool {
        self.r.is_some()
    }
}

/// Builds and evaluates the certificate for `phi`.
///
/// Errs when the lattice matrix has no order up to `max_order` or when
/// `det(E - M) = 0`; in both cases no finite count exists and there is
/// nothing to check. Failing block conditions are not errors: they come
/// back as `ok: false` entries with `r` absent.
pub fn certify_finite_reidemeister(
    phi: &WreathAutomorphism,
    max_order: u64,
) -> Result<OrbitCertificate> {
    let matrix = phi.matrix();
    let order = matrix.order(max_order)?.ok_or_else(|| {
        Error::OrderNotFound(format!(
            "lattice matrix has no multiplicative order up to {max_order}"
        ))
    })?;
    let defect = IntMatrix::identity(matrix.rows()).sub(matrix)?;
    let det = defect.det()?;
    if det.is_zero() {
        return Err(Error::CertificateFailed(
            "det(E - M) = 0, the lattice quotient has infinitely many twisted classes".into(),
        ));
    }
    let lattice_classes = det.magnitude().clone();

    let mut checks = Vec::new();
    let mut failure = None;
    for gamma in divisors(order) {
        for (index, block) in phi.blocks().iter().enumerate() {
            let p = block.component.p;
            let ok = match &block.action {
                ComponentAction::Matrix(f) => {
                    let power = f.pow(gamma)?.to_int_matrix();
                    let diff = power.sub(&IntMatrix::identity(power.rows()))?;
                    kernel_count_mod(&diff, p)?.is_one()
                }
                ComponentAction::Scalar(m) => mod_pow(*m, gamma, p) != 1 % p,
            };
            if !ok && failure.is_none() {
                failure = Some(format!(
                    "power {gamma} of the block on {} has nonzero fixed points",
                    block.component
                ));
            }
            checks.push(CertificateCheck { gamma, component: index, ok });
        }
    }

    let r = if failure.is_none() {
        Some(lattice_classes.clone())
    } else {
        None
    };
    Ok(OrbitCertificate { order, checks, lattice_classes, r, failure })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Component;
    use crate::blocks;
    use crate::modular::ModMatrix;
    use crate::wreath::ActionBlock;

    fn matrix_block(p: u64, r: u32, d: usize) -> ActionBlock {
        ActionBlock {
            component: Component::new(p, r, d).unwrap(),
            action: ComponentAction::Matrix(
                blocks::lamp_block(d).unwrap().reduce_mod(p.pow(r)).unwrap(),
            ),
        }
    }

    fn scalar_block(p: u64, r: u32, m: u64) -> ActionBlock {
        ActionBlock {
            component: Component::new(p, r, 1).unwrap(),
            action: ComponentAction::Scalar(m),
        }
    }

    #[test]
    fn certifies_three_classes_over_the_order_three_block() {
        let phi = WreathAutomorphism::new(
            blocks::base_block(3).unwrap(),
            vec![matrix_block(2, 1, 3), scalar_block(5, 1, 2)],
        )
        .unwrap();
        let cert = certify_finite_reidemeister(&phi, 10_000).unwrap();
        assert_eq!(cert.order, 3);
        // divisors 1 and 3, two blocks each
        assert_eq!(cert.checks.len(), 4);
        assert!(cert.checks.iter().all(|c| c.ok));
        assert_eq!(cert.r, Some(BigUint::from(3u32)));
    }

    #[test]
    fn certifies_five_classes_over_the_order_five_block() {
        let phi = WreathAutomorphism::new(
            blocks::base_block(5).unwrap(),
            vec![matrix_block(2, 1, 2), scalar_block(3, 1, 2)],
        )
        .unwrap();
        let cert = certify_finite_reidemeister(&phi, 10_000).unwrap();
        assert_eq!(cert.order, 5);
        assert_eq!(cert.r, Some(BigUint::from(5u32)));
    }

    #[test]
    fn direct_sums_multiply_the_class_count() {
        let m = blocks::base_block(3).unwrap();
        let phi = WreathAutomorphism::new(
            m.direct_sum(&m),
            vec![matrix_block(2, 1, 3)],
        )
        .unwrap();
        let cert = certify_finite_reidemeister(&phi, 10_000).unwrap();
        assert_eq!(cert.r, Some(BigUint::from(9u32)));
    }

    #[test]
    fn identity_lamp_action_fails_the_first_check() {
        let phi = WreathAutomorphism::new(
            blocks::base_block(3).unwrap(),
            vec![ActionBlock {
                component: Component::new(2, 1, 3).unwrap(),
                action: ComponentAction::Matrix(ModMatrix::identity(3, 2).unwrap()),
            }],
        )
        .unwrap();
        let cert = certify_finite_reidemeister(&phi, 10_000).unwrap();
        assert!(!cert.is_valid());
        assert!(!cert.checks[0].ok);
        assert!(cert.failure.is_some());
        assert_eq!(cert.r, None);
    }

    #[test]
    fn scalar_one_mod_p_fails() {
        // 4^3 = 64 = 1 mod 9 and 4 = 1 mod 3, so gamma = 1 already fails
        let phi = WreathAutomorphism::new(
            blocks::base_block(3).unwrap(),
            vec![scalar_block(3, 2, 4)],
        )
        .unwrap();
        let cert = certify_finite_reidemeister(&phi, 10_000).unwrap();
        assert!(!cert.is_valid());
    }

    #[test]
    fn singular_defect_is_a_hard_error() {
        let phi = WreathAutomorphism::new(
            IntMatrix::identity(2),
            vec![scalar_block(5, 1, 2)],
        )
        .unwrap();
        let r = certify_finite_reidemeister(&phi, 10_000);
        assert!(matches!(r, Err(Error::CertificateFailed(_))));
    }

    #[test]
    fn infinite_order_is_a_hard_error() {
        let phi = WreathAutomorphism::new(
            IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap(),
            vec![scalar_block(5, 1, 2)],
        )
        .unwrap();
        let r = certify_finite_reidemeister(&phi, 50);
        assert!(matches!(r, Err(Error::OrderNotFound(_))));
    }
}
