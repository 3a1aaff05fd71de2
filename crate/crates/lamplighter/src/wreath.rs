//! Elements and automorphisms of the restricted wreath product `G wr Z^k`.
//!
//! An element is a finitely supported lamp assignment `Z^k -> G` together
//! with a shift in `Z^k`; multiplication translates the right factor's lamps
//! by the left factor's shift. The automorphisms handled here leave `Z^k`
//! invariant: they act on the lattice by a unimodular integer matrix `M` and
//! on each lamp value by a block automorphism of `G`, transporting the lamp
//! from site `x` to site `M x`.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::fmt;

use crate::abelian::{AbelianElement, Component, ComponentAction, PrimePowerDecomposition};
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Default search limit for multiplicative orders of lattice matrices.
pub const DEFAULT_MAX_ORDER: u64 = 10_000;

/// The ambient group `G wr Z^k`, fixing the lamp group's shape and the
/// lattice rank. Elements are plain data; all operations live here.
#[derive(Clone, Debug)]
pub struct WreathGroup {
    shape: Vec<Component>,
    k: usize,
}

impl WreathGroup {
    pub fn new(shape: Vec<Component>, k: usize) -> Result<Self> {
        if shape.is_empty() {
            return Err(Error::Shape("lamp group needs at least one component".into()));
        }
        if k == 0 {
            return Err(Error::Parameter("lattice rank k must be at least 1".into()));
        }
        Ok(WreathGroup { shape, k })
    }

    pub fn shape(&self) -> &[Component] {
        &self.shape
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement {
            lamps: BTreeMap::new(),
            shift: vec![0; self.k],
        }
    }

    /// A single lamp at `site` with the given value, no shift.
    pub fn lamp(&self, site: Vec<i64>, value: AbelianElement) -> Result<WreathElement> {
        self.check_site(&site)?;
        let mut lamps = BTreeMap::new();
        if !value.is_zero() {
            lamps.insert(site, value);
        }
        Ok(WreathElement { lamps, shift: vec![0; self.k] })
    }

    /// A pure shift, no lamps.
    pub fn shift(&self, v: Vec<i64>) -> Result<WreathElement> {
        self.check_site(&v)?;
        Ok(WreathElement { lamps: BTreeMap::new(), shift: v })
    }

    fn check_site(&self, site: &[i64]) -> Result<()> {
        if site.len() != self.k {
            return Err(Error::Shape(format!(
                "lattice point has {} coordinates, rank is {}",
                site.len(),
                self.k
            )));
        }
        Ok(())
    }

    fn check_element(&self, x: &WreathElement) -> Result<()> {
        self.check_site(&x.shift)?;
        for (site, value) in &x.lamps {
            self.check_site(site)?;
            if value.coords.len() != self.shape.len() {
                return Err(Error::Shape(format!(
                    "lamp value has {} components, group has {}",
                    value.coords.len(),
                    self.shape.len()
                )));
            }
        }
        Ok(())
    }

    /// `(f, s) * (h, t) = (f + translate(s)(h), s + t)`.
    pub fn multiply(&self, a: &WreathElement, b: &WreathElement) -> Result<WreathElement> {
        self.check_element(a)?;
        self.check_element(b)?;
        let mut lamps = a.lamps.clone();
        for (site, value) in &b.lamps {
            let target: Vec<i64> = site.iter().zip(&a.shift).map(|(y, s)| y + s).collect();
            match lamps.remove(&target) {
                None => {
                    lamps.insert(target, value.clone());
                }
                Some(existing) => {
                    let sum = existing.add(value, &self.shape);
                    if !sum.is_zero() {
                        lamps.insert(target, sum);
                    }
                }
            }
        }
        let shift = a.shift.iter().zip(&b.shift).map(|(x, y)| x + y).collect();
        Ok(WreathElement { lamps, shift })
    }

    /// `(f, s)^-1 = (-translate(-s)(f), -s)`.
    pub fn inverse(&self, a: &WreathElement) -> Result<WreathElement> {
        self.check_element(a)?;
        let mut lamps = BTreeMap::new();
        for (site, value) in &a.lamps {
            let target = site.iter().zip(&a.shift).map(|(y, s)| y - s).collect();
            lamps.insert(target, value.neg(&self.shape));
        }
        Ok(WreathElement {
            lamps,
            shift: a.shift.iter().map(|s| -s).collect(),
        })
    }

    /// Conjugation by a pure shift: lamps move by `m`, the shift part stays.
    pub fn translate(&self, m: &[i64], x: &WreathElement) -> Result<WreathElement> {
        let fwd = self.shift(m.to_vec())?;
        let back = self.shift(m.iter().map(|c| -c).collect())?;
        self.multiply(&self.multiply(&fwd, x)?, &back)
    }
}

/// A group element: finitely many lamps and a shift.
///
/// The lamp map never stores zero values, so equality of elements is
/// equality of the underlying data.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WreathElement {
    pub lamps: BTreeMap<Vec<i64>, AbelianElement>,
    pub shift: Vec<i64>,
}

impl WreathElement {
    pub fn is_identity(&self) -> bool {
        self.lamps.is_empty() && self.shift.iter().all(|&s| s == 0)
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "identity");
        }
        for (site, value) in &self.lamps {
            write!(f, "lamp{:?}={:?} ", site, value.coords)?;
        }
        write!(f, "shift{:?}", self.shift)
    }
}

/// One block of an automorphism's lamp action: a homogeneous component
/// together with the action on it.
#[derive(Clone, Debug)]
pub struct ActionBlock {
    pub component: Component,
    pub action: ComponentAction,
}

/// An automorphism of `G wr Z^k` that restricts to `x -> M x` on the
/// lattice and maps the lamp at `x` with value `a` to the lamp at `M x`
/// with value `F a`.
///
/// The block list refines the lamp group: a component `(Z_{p^r})^d` of `G`
/// may be split across several consecutive blocks whose multiplicities sum
/// to `d`. Scalar blocks always act on a single summand.
#[derive(Clone, Debug)]
pub struct WreathAutomorphism {
    matrix: IntMatrix,
    blocks: Vec<ActionBlock>,
}

impl WreathAutomorphism {
    pub fn new(matrix: IntMatrix, blocks: Vec<ActionBlock>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "lattice matrix must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let det = matrix.det()?;
        if det != BigInt::from(1) && det != BigInt::from(-1) {
            return Err(Error::NotInvertible(format!(
                "lattice matrix has determinant {det}, need +-1 to act on Z^k"
            )));
        }
        if blocks.is_empty() {
            return Err(Error::Shape("automorphism needs at least one block".into()));
        }
        for block in &blocks {
            block.action.validate(&block.component)?;
            if matches!(block.action, ComponentAction::Scalar(_)) && block.component.d != 1 {
                return Err(Error::Shape(format!(
                    "scalar block on {} must act on a single summand",
                    block.component
                )));
            }
        }
        Ok(WreathAutomorphism { matrix, blocks })
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn blocks(&self) -> &[ActionBlock] {
        &self.blocks
    }

    pub fn k(&self) -> usize {
        self.matrix.rows()
    }

    /// The refined component list the lamp values are shaped by.
    pub fn shape(&self) -> Vec<Component> {
        self.blocks.iter().map(|b| b.component).collect()
    }

    /// The underlying lamp group, with split components merged back
    /// together.
    pub fn group(&self) -> Result<PrimePowerDecomposition> {
        let mut merged: Vec<Component> = Vec::new();
        for block in &self.blocks {
            match merged
                .iter_mut()
                .find(|c| c.p == block.component.p && c.r == block.component.r)
            {
                Some(c) => c.d += block.component.d,
                None => merged.push(block.component),
            }
        }
        PrimePowerDecomposition::new(merged)
    }

    /// The lamp-value action `a -> F a` on the refined shape.
    pub fn lamp_map(&self, value: &AbelianElement) -> AbelianElement {
        assert_eq!(
            value.coords.len(),
            self.blocks.len(),
            "lamp value does not match the block structure"
        );
        AbelianElement {
            coords: self
                .blocks
                .iter()
                .zip(&value.coords)
                .map(|(b, v)| b.action.apply(&b.component, v))
                .collect(),
        }
    }

    /// Applies the automorphism: lamps transported along `M` and mapped by
    /// the blocks, shift mapped by `M`.
    pub fn apply(&self, group: &WreathGroup, x: &WreathElement) -> Result<WreathElement> {
        if group.shape() != self.shape().as_slice() {
            return Err(Error::Shape(
                "wreath group shape does not match the automorphism blocks".into(),
            ));
        }
        if group.k() != self.k() {
            return Err(Error::Shape(format!(
                "wreath group rank {} does not match matrix size {}",
                group.k(),
                self.k()
            )));
        }
        group.check_element(x)?;
        let mut lamps = BTreeMap::new();
        for (site, value) in &x.lamps {
            lamps.insert(self.map_site(site)?, self.lamp_map(value));
        }
        Ok(WreathElement {
            lamps,
            shift: self.map_site(&x.shift)?,
        })
    }

    fn map_site(&self, site: &[i64]) -> Result<Vec<i64>> {
        let v: Vec<BigInt> = site.iter().map(|&c| BigInt::from(c)).collect();
        self.matrix
            .apply_vec(&v)?
            .into_iter()
            .map(|c| {
                i64::try_from(&c).map_err(|_| {
                    Error::Parameter(format!("lattice coordinate {c} overflows i64"))
                })
            })
            .collect()
    }
}

/// Outcome of a randomized equivariance check.
#[derive(Clone, Debug)]
pub struct EquivarianceReport {
    pub pass: bool,
    pub trials: u32,
    pub failure: Option<String>,
}

/// Checks on random inputs that `phi` transports lamp translation along its
/// lattice matrix, and that it is multiplicative.
///
/// Deterministic for a fixed seed. A failure is reported with its
/// counterexample, not raised as an error.
pub fn verify_equivariance(
    group: &WreathGroup,
    phi: &WreathAutomorphism,
    trials: u32,
    seed: u64,
) -> Result<EquivarianceReport> {
    verify_equivariance_with(group, &|x| phi.apply(group, x), phi.matrix(), trials, seed)
}

/// Core of [`verify_equivariance`], decoupling the checked map from the
/// lattice matrix so that deliberately broken pairings can be exercised.
///
/// For random lamp assignments `h` and lattice vectors `m` it requires
/// `map(translate(m)(h)) = translate(M m)(map(h))`, and for random element
/// pairs it requires `map(a b) = map(a) map(b)`.
pub fn verify_equivariance_with(
    group: &WreathGroup,
    map: &dyn Fn(&WreathElement) -> Result<WreathElement>,
    matrix: &IntMatrix,
    trials: u32,
    seed: u64,
) -> Result<EquivarianceReport> {
    if matrix.rows() != group.k() || !matrix.is_square() {
        return Err(Error::Shape(format!(
            "lattice matrix is {}x{}, rank is {}",
            matrix.rows(),
            matrix.cols(),
            group.k()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for trial in 0..trials {
        let h = random_lamp_assignment(group, &mut rng)?;
        let m = random_vector(group.k(), &mut rng);
        let lhs = map(&group.translate(&m, &h)?)?;
        let mm = apply_matrix_i64(matrix, &m)?;
        let rhs = group.translate(&mm, &map(&h)?)?;
        if lhs != rhs {
            return Ok(EquivarianceReport {
                pass: false,
                trials: trial + 1,
                failure: Some(format!(
                    "translation intertwining fails at h = {h:?}, m = {m:?}: {lhs:?} != {rhs:?}"
                )),
            });
        }

        let a = random_element(group, &mut rng)?;
        let b = random_element(group, &mut rng)?;
        let lhs = map(&group.multiply(&a, &b)?)?;
        let rhs = group.multiply(&map(&a)?, &map(&b)?)?;
        if lhs != rhs {
            return Ok(EquivarianceReport {
                pass: false,
                trials: trial + 1,
                failure: Some(format!(
                    "multiplicativity fails at a = {a:?}, b = {b:?}: {lhs:?} != {rhs:?}"
                )),
            });
        }
    }
    Ok(EquivarianceReport { pass: true, trials, failure: None })
}

/// Orbit of `x` under the affine map `y -> M y + z`, as the ordered cycle
/// starting at `x`.
///
/// Requires `M` of finite multiplicative order `n`. The map is injective,
/// so the first revisited point is `x` itself; if `x` does not recur within
/// `n` steps it never will, which is reported as an error. When
/// `det(E - M) != 0` every orbit closes and its length divides `n`.
pub fn affine_orbit(
    matrix: &IntMatrix,
    z: &[i64],
    x: &[i64],
    max_order: u64,
) -> Result<Vec<Vec<i64>>> {
    if z.len() != x.len() || matrix.rows() != x.len() {
        return Err(Error::Dimension(format!(
            "matrix is {}x{}, z has {} coordinates, x has {}",
            matrix.rows(),
            matrix.cols(),
            z.len(),
            x.len()
        )));
    }
    let n = matrix.order(max_order)?.ok_or_else(|| {
        Error::OrderNotFound(format!("no multiplicative order up to {max_order}"))
    })?;
    let zb: Vec<BigInt> = z.iter().map(|&c| BigInt::from(c)).collect();
    let start: Vec<BigInt> = x.iter().map(|&c| BigInt::from(c)).collect();
    let mut orbit = Vec::new();
    let mut y = start.clone();
    for _ in 0..n {
        orbit.push(to_i64_vec(&y)?);
        y = matrix
            .apply_vec(&y)?
            .into_iter()
            .zip(&zb)
            .map(|(a, b)| a + b)
            .collect();
        if y == start {
            return Ok(orbit);
        }
    }
    Err(Error::OrbitOpen(format!(
        "orbit of {x:?} under y -> My + {z:?} does not return within order {n}"
    )))
}

fn to_i64_vec(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|c| {
            i64::try_from(c)
                .map_err(|_| Error::Parameter(format!("coordinate {c} overflows i64")))
        })
        .collect()
}

fn apply_matrix_i64(matrix: &IntMatrix, v: &[i64]) -> Result<Vec<i64>> {
    let vb: Vec<BigInt> = v.iter().map(|&c| BigInt::from(c)).collect();
    to_i64_vec(&matrix.apply_vec(&vb)?)
}

fn random_vector(k: usize, rng: &mut ChaCha8Rng) -> Vec<i64> {
    (0..k).map(|_| rng.gen_range(-4..=4)).collect()
}

fn random_value(shape: &[Component], rng: &mut ChaCha8Rng) -> AbelianElement {
    AbelianElement {
        coords: shape
            .iter()
            .map(|c| (0..c.d).map(|_| rng.gen_range(0..c.modulus())).collect())
            .collect(),
    }
}

fn random_lamp_assignment(group: &WreathGroup, rng: &mut ChaCha8Rng) -> Result<WreathElement> {
    let mut acc = group.identity();
    for _ in 0..rng.gen_range(1..=3) {
        let lamp = group.lamp(
            random_vector(group.k(), rng),
            random_value(group.shape(), rng),
        )?;
        acc = group.multiply(&acc, &lamp)?;
    }
    Ok(acc)
}

fn random_element(group: &WreathGroup, rng: &mut ChaCha8Rng) -> Result<WreathElement> {
    let lamps = random_lamp_assignment(group, rng)?;
    let shift = group.shift(random_vector(group.k(), rng))?;
    group.multiply(&lamps, &shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::parse_group;
    use crate::blocks;

    fn z5_group() -> WreathGroup {
        let g = parse_group("5^1:1").unwrap();
        WreathGroup::new(g.components().to_vec(), 2).unwrap()
    }

    fn z5_value(c: u64) -> AbelianElement {
        AbelianElement { coords: vec![vec![c % 5]] }
    }

    fn witness_on_z5() -> WreathAutomorphism {
        WreathAutomorphism::new(
            blocks::base_block(3).unwrap(),
            vec![ActionBlock {
                component: Component::new(5, 1, 1).unwrap(),
                action: ComponentAction::Scalar(2),
            }],
        )
        .unwrap()
    }

    #[test]
    fn identity_is_two_sided() {
        let g = z5_group();
        let e = g.identity();
        let a = g.lamp(vec![1, -2], z5_value(3)).unwrap();
        assert_eq!(g.multiply(&e, &a).unwrap(), a);
        assert_eq!(g.multiply(&a, &e).unwrap(), a);
    }

    #[test]
    fn lamps_at_same_site_accumulate() {
        let g = z5_group();
        let a = g.lamp(vec![0, 0], z5_value(2)).unwrap();
        let b = g.lamp(vec![0, 0], z5_value(3)).unwrap();
        // 2 + 3 = 0 in Z_5, so the lamp disappears
        assert_eq!(g.multiply(&a, &b).unwrap(), g.identity());
    }

    #[test]
    fn conjugation_by_shift_translates_lamps() {
        let g = z5_group();
        let lamp = g.lamp(vec![2, -1], z5_value(4)).unwrap();
        let moved = g.translate(&[3, 5], &lamp).unwrap();
        assert_eq!(moved, g.lamp(vec![5, 4], z5_value(4)).unwrap());
    }

    #[test]
    fn inverses_cancel() {
        let g = z5_group();
        let lamp = g.lamp(vec![1, 1], z5_value(2)).unwrap();
        let shift = g.shift(vec![-2, 3]).unwrap();
        let a = g.multiply(&lamp, &shift).unwrap();
        let inv = g.inverse(&a).unwrap();
        assert!(g.multiply(&a, &inv).unwrap().is_identity());
        assert!(g.multiply(&inv, &a).unwrap().is_identity());
    }

    #[test]
    fn apply_transports_lamps_along_the_matrix() {
        let g = z5_group();
        let phi = witness_on_z5();
        let lamp = g.lamp(vec![1, 0], z5_value(1)).unwrap();
        let image = phi.apply(&g, &lamp).unwrap();
        // site (1,0) maps to M(1,0) = (0,-1), value 1 maps to 2
        assert_eq!(image, g.lamp(vec![0, -1], z5_value(2)).unwrap());

        let shift = g.shift(vec![1, 1]).unwrap();
        let image = phi.apply(&g, &shift).unwrap();
        assert_eq!(image, g.shift(vec![1, -2]).unwrap());
    }

    #[test]
    fn identity_automorphism_fixes_everything() {
        let g = z5_group();
        let id = WreathAutomorphism::new(
            IntMatrix::identity(2),
            vec![ActionBlock {
                component: Component::new(5, 1, 1).unwrap(),
                action: ComponentAction::Scalar(1),
            }],
        )
        .unwrap();
        let a = g
            .multiply(
                &g.lamp(vec![1, 2], z5_value(3)).unwrap(),
                &g.shift(vec![-1, 0]).unwrap(),
            )
            .unwrap();
        assert_eq!(id.apply(&g, &a).unwrap(), a);
    }

    #[test]
    fn scalar_blocks_must_be_single_summands() {
        let r = WreathAutomorphism::new(
            IntMatrix::identity(1),
            vec![ActionBlock {
                component: Component::new(5, 1, 2).unwrap(),
                action: ComponentAction::Scalar(2),
            }],
        );
        assert!(r.is_err());
    }

    #[test]
    fn lattice_matrix_must_be_unimodular() {
        let r = WreathAutomorphism::new(
            IntMatrix::from_rows(&[vec![2, 0], vec![0, 1]]).unwrap(),
            vec![ActionBlock {
                component: Component::new(5, 1, 1).unwrap(),
                action: ComponentAction::Scalar(2),
            }],
        );
        assert!(r.is_err());
    }

    #[test]
    fn split_components_merge_back() {
        let phi = WreathAutomorphism::new(
            blocks::base_block(3).unwrap(),
            vec![
                ActionBlock {
                    component: Component::new(2, 1, 3).unwrap(),
                    action: ComponentAction::Matrix(
                        blocks::lamp_block(3).unwrap().reduce_mod(2).unwrap(),
                    ),
                },
                ActionBlock {
                    component: Component::new(2, 1, 4).unwrap(),
                    action: ComponentAction::Matrix(
                        blocks::lamp_block(4).unwrap().reduce_mod(2).unwrap(),
                    ),
                },
                ActionBlock {
                    component: Component::new(7, 1, 1).unwrap(),
                    action: ComponentAction::Scalar(3),
                },
            ],
        )
        .unwrap();
        assert_eq!(phi.group().unwrap(), parse_group("2^1:7,7^1:1").unwrap());
    }

    #[test]
    fn equivariance_passes_for_lawful_automorphisms() {
        let g = z5_group();
        let phi = witness_on_z5();
        let report = verify_equivariance(&g, &phi, 50, 7).unwrap();
        assert!(report.pass, "{:?}", report.failure);
        assert_eq!(report.trials, 50);
    }

    #[test]
    fn equivariance_catches_wrong_transport() {
        let g = z5_group();
        let phi = witness_on_z5();
        // apply the lamp action without moving lamps, while claiming the
        // lattice matrix of the real automorphism
        let broken = |x: &WreathElement| -> Result<WreathElement> {
            let mut lamps = BTreeMap::new();
            for (site, value) in &x.lamps {
                lamps.insert(site.clone(), phi.lamp_map(value));
            }
            Ok(WreathElement { lamps, shift: x.shift.clone() })
        };
        let report = verify_equivariance_with(&g, &broken, phi.matrix(), 50, 7).unwrap();
        assert!(!report.pass);
        assert!(report.failure.unwrap().contains("translation intertwining"));
    }

    #[test]
    fn affine_orbits_of_the_order_three_block() {
        let m = blocks::base_block(3).unwrap();
        let orbit = affine_orbit(&m, &[0, 0], &[1, 0], 100).unwrap();
        assert_eq!(orbit.len(), 3);
        assert_eq!(orbit[0], vec![1, 0]);

        let orbit = affine_orbit(&m, &[0, 0], &[0, 0], 100).unwrap();
        assert_eq!(orbit, vec![vec![0, 0]]);

        let orbit = affine_orbit(&m, &[1, 0], &[0, 0], 100).unwrap();
        assert_eq!(orbit, vec![vec![0, 0], vec![1, 0], vec![1, -1]]);
    }

    #[test]
    fn open_orbit_is_an_error() {
        let e = IntMatrix::identity(1);
        let r = affine_orbit(&e, &[1], &[0], 100);
        assert!(matches!(r, Err(Error::OrbitOpen(_))));
    }

    #[test]
    fn infinite_order_matrix_is_an_error() {
        let m = IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]]).unwrap();
        let r = affine_orbit(&m, &[0, 0], &[1, 0], 50);
        assert!(matches!(r, Err(Error::OrderNotFound(_))));
    }
}
