//! Finite abelian groups in prime-power form and their block automorphisms.
//!
//! A group is described by its prime-power decomposition: an ordered list of
//! homogeneous components `(Z_{p^r})^d`. Automorphisms are restricted to
//! block form, acting on each component either by an invertible `d x d`
//! matrix over `Z_{p^r}` or by multiplication with a unit scalar. For such a
//! map `phi` on a finite abelian group the Reidemeister number equals the
//! number of fixed points, which this module computes symbolically and,
//! independently, by brute-force twisted-conjugacy enumeration.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::One;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::modular::ModMatrix;
use crate::primes::{is_prime, mod_mul, mod_pow};
use crate::snf::kernel_count_mod;

/// Default element bound for the brute-force oracle.
pub const DEFAULT_BRUTE_BOUND: u64 = 1 << 16;

/// One homogeneous component `(Z_{p^r})^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Component {
    pub p: u64,
    pub r: u32,
    pub d: usize,
}

impl Component {
    pub fn new(p: u64, r: u32, d: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Parse(format!("{p} is not prime")));
        }
        if r == 0 {
            return Err(Error::Parse("exponent r must be at least 1".into()));
        }
        if d == 0 {
            return Err(Error::Parse("multiplicity d must be at least 1".into()));
        }
        if p.checked_pow(r).is_none() {
            return Err(Error::Parse(format!("{p}^{r} does not fit in 64 bits")));
        }
        Ok(Component { p, r, d })
    }

    /// `p^r`, the modulus of each coordinate.
    pub fn modulus(&self) -> u64 {
        self.p.pow(self.r)
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}:{}", self.p, self.r, self.d)
    }
}

/// A finite abelian group `G` as an ordered direct sum of homogeneous
/// components with pairwise distinct `(p, r)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePowerDecomposition {
    components: Vec<Component>,
}

impl PrimePowerDecomposition {
    pub fn new(components: Vec<Component>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Parse("group needs at least one component".into()));
        }
        let mut seen = BTreeSet::new();
        for c in &components {
            if !seen.insert((c.p, c.r)) {
                return Err(Error::Parse(format!(
                    "duplicate component {}^{}",
                    c.p, c.r
                )));
            }
        }
        Ok(PrimePowerDecomposition { components })
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// `|G|` as an arbitrary-precision integer.
    pub fn order(&self) -> BigUint {
        group_order(&self.components)
    }
}

impl FromStr for PrimePowerDecomposition {
    type Err = Error;

    /// Parses the grammar `term ("," term)*` with `term := p "^" r ":" d`.
    fn from_str(spec: &str) -> Result<Self> {
        let mut components = Vec::new();
        for term in spec.split(',') {
            let term = term.trim();
            let (p_part, rest) = term.split_once('^').ok_or_else(|| {
                Error::Parse(format!("component {term:?} is missing '^' (want p^r:d)"))
            })?;
            let (r_part, d_part) = rest.split_once(':').ok_or_else(|| {
                Error::Parse(format!("component {term:?} is missing ':' (want p^r:d)"))
            })?;
            let p = p_part
                .trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad prime in {term:?}: {e}")))?;
            let r = r_part
                .trim()
                .parse::<u32>()
                .map_err(|e| Error::Parse(format!("bad exponent in {term:?}: {e}")))?;
            let d = d_part
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad multiplicity in {term:?}: {e}")))?;
            components.push(Component::new(p, r, d)?);
        }
        PrimePowerDecomposition::new(components)
    }
}

impl fmt::Display for PrimePowerDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Parses a group spec like `"2^1:3,5^1:1"`.
pub fn parse_group(spec: &str) -> Result<PrimePowerDecomposition> {
    spec.parse()
}

/// `prod (p^r)^d` over a component list (which, unlike a full
/// decomposition, may repeat `(p, r)`).
pub fn group_order(shape: &[Component]) -> BigUint {
    shape.iter().fold(BigUint::one(), |acc, c| {
        acc * BigUint::from(c.modulus()).pow(c.d as u32)
    })
}

/// An element of the group described by a component list: one coordinate
/// vector per component, entries reduced mod `p^r`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AbelianElement {
    pub coords: Vec<Vec<u64>>,
}

impl AbelianElement {
    pub fn zero(shape: &[Component]) -> Self {
        AbelianElement {
            coords: shape.iter().map(|c| vec![0; c.d]).collect(),
        }
    }

    /// Builds an element, reducing every coordinate.
    pub fn new(shape: &[Component], coords: Vec<Vec<u64>>) -> Result<Self> {
        if coords.len() != shape.len() {
            return Err(Error::Shape(format!(
                "element has {} component vectors, group has {}",
                coords.len(),
                shape.len()
            )));
        }
        let coords = shape
            .iter()
            .zip(coords)
            .map(|(c, v)| {
                if v.len() != c.d {
                    return Err(Error::Shape(format!(
                        "component {c} wants {} coordinates, got {}",
                        c.d,
                        v.len()
                    )));
                }
                Ok(v.into_iter().map(|x| x % c.modulus()).collect())
            })
            .collect::<Result<_>>()?;
        Ok(AbelianElement { coords })
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|v| v.iter().all(|&x| x == 0))
    }

    pub fn add(&self, other: &Self, shape: &[Component]) -> Self {
        self.zip_with(other, shape, |a, b, q| (a + b) % q)
    }

    pub fn sub(&self, other: &Self, shape: &[Component]) -> Self {
        self.zip_with(other, shape, |a, b, q| (a + q - b) % q)
    }

    pub fn neg(&self, shape: &[Component]) -> Self {
        AbelianElement::zero(shape).sub(self, shape)
    }

    fn zip_with(
        &self,
        other: &Self,
        shape: &[Component],
        f: impl Fn(u64, u64, u64) -> u64,
    ) -> Self {
        assert_eq!(self.coords.len(), shape.len(), "element/shape mismatch");
        assert_eq!(other.coords.len(), shape.len(), "element/shape mismatch");
        let coords = shape
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let q = c.modulus();
                self.coords[i]
                    .iter()
                    .zip(&other.coords[i])
                    .map(|(&a, &b)| f(a, b, q))
                    .collect()
            })
            .collect();
        AbelianElement { coords }
    }
}

/// All elements of the group in ascending lexicographic coordinate order,
/// refused when the group is larger than `bound`.
pub fn enumerate_elements(shape: &[Component], bound: u64) -> Result<Vec<AbelianElement>> {
    let order = group_order(shape);
    let order = u64::try_from(&order)
        .ok()
        .filter(|&n| n <= bound)
        .ok_or_else(|| {
            Error::SizeBound(format!(
                "group has {order} elements, brute force is capped at {bound}"
            ))
        })?;
    let mut out = Vec::with_capacity(order as usize);
    let mut current = AbelianElement::zero(shape);
    loop {
        out.push(current.clone());
        // odometer increment on the last coordinate gives lexicographic order
        let mut bumped = false;
        'outer: for (ci, c) in shape.iter().enumerate().rev() {
            let q = c.modulus();
            for x in current.coords[ci].iter_mut().rev() {
                *x += 1;
                if *x < q {
                    bumped = true;
                    break 'outer;
                }
                *x = 0;
            }
        }
        if !bumped {
            break;
        }
    }
    debug_assert_eq!(out.len() as u64, order);
    Ok(out)
}

/// The action of an automorphism on one homogeneous component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentAction {
    /// An invertible `d x d` matrix over `Z_{p^r}`.
    Matrix(ModMatrix),
    /// Multiplication by a unit scalar.
    Scalar(u64),
}

impl ComponentAction {
    /// Checks that the action is a well-shaped automorphism of `component`.
    pub fn validate(&self, component: &Component) -> Result<()> {
        let q = component.modulus();
        match self {
            ComponentAction::Matrix(m) => {
                if !m.is_square() || m.rows() != component.d {
                    return Err(Error::Shape(format!(
                        "component {component} wants a {d}x{d} block, got {}x{}",
                        m.rows(),
                        m.cols(),
                        d = component.d
                    )));
                }
                if m.modulus() != q {
                    return Err(Error::Shape(format!(
                        "component {component} wants modulus {q}, block has {}",
                        m.modulus()
                    )));
                }
                if !m.is_invertible()? {
                    return Err(Error::NotInvertible(format!(
                        "block on {component} has determinant {} mod {q}",
                        m.det()?
                    )));
                }
                Ok(())
            }
            ComponentAction::Scalar(u) => {
                if (u % component.p) == 0 {
                    return Err(Error::NotInvertible(format!(
                        "scalar {u} is divisible by {} on {component}",
                        component.p
                    )));
                }
                Ok(())
            }
        }
    }

    /// Applies the action to one coordinate vector.
    pub fn apply(&self, component: &Component, coords: &[u64]) -> Vec<u64> {
        let q = component.modulus();
        match self {
            ComponentAction::Matrix(m) => m
                .apply_vec(coords)
                .expect("validated action matches component shape"),
            ComponentAction::Scalar(u) => {
                coords.iter().map(|&c| mod_mul(c, u % q, q)).collect()
            }
        }
    }

    /// Number of fixed points of the action on `(Z_{p^r})^d`.
    pub fn fixed_count(&self, component: &Component) -> Result<BigUint> {
        let q = component.modulus();
        match self {
            ComponentAction::Matrix(m) => {
                let b = m
                    .to_int_matrix()
                    .sub(&IntMatrix::identity(component.d))
                    .map_err(|_| {
                        Error::Shape(format!("block on {component} is not {0}x{0}", component.d))
                    })?;
                kernel_count_mod(&b, q)
            }
            ComponentAction::Scalar(u) => {
                let diff = BigInt::from(u % q) - BigInt::one();
                let per_coord = diff.gcd(&BigInt::from(q)).magnitude().clone();
                Ok(per_coord.pow(component.d as u32))
            }
        }
    }
}

/// A block automorphism of a decomposed finite abelian group: one action per
/// component.
#[derive(Clone, Debug)]
pub struct BlockAutomorphism {
    actions: Vec<ComponentAction>,
}

impl BlockAutomorphism {
    pub fn new(group: &PrimePowerDecomposition, actions: Vec<ComponentAction>) -> Result<Self> {
        if actions.len() != group.components().len() {
            return Err(Error::Shape(format!(
                "{} actions for {} components",
                actions.len(),
                group.components().len()
            )));
        }
        for (component, action) in group.components().iter().zip(&actions) {
            action.validate(component)?;
        }
        Ok(BlockAutomorphism { actions })
    }

    pub fn identity(group: &PrimePowerDecomposition) -> Self {
        BlockAutomorphism {
            actions: group
                .components()
                .iter()
                .map(|_| ComponentAction::Scalar(1))
                .collect(),
        }
    }

    pub fn actions(&self) -> &[ComponentAction] {
        &self.actions
    }

    pub fn apply(&self, group: &PrimePowerDecomposition, x: &AbelianElement) -> AbelianElement {
        assert_eq!(
            x.coords.len(),
            self.actions.len(),
            "element/automorphism mismatch"
        );
        let coords = group
            .components()
            .iter()
            .zip(&self.actions)
            .zip(&x.coords)
            .map(|((c, action), v)| action.apply(c, v))
            .collect();
        AbelianElement { coords }
    }
}

/// `|C(phi)|`, the number of fixed points, multiplicative across components.
pub fn fixed_count(group: &PrimePowerDecomposition, phi: &BlockAutomorphism) -> Result<BigUint> {
    if phi.actions.len() != group.components().len() {
        return Err(Error::Shape(format!(
            "{} actions for {} components",
            phi.actions.len(),
            group.components().len()
        )));
    }
    let mut total = BigUint::one();
    for (component, action) in group.components().iter().zip(&phi.actions) {
        total *= action.fixed_count(component)?;
    }
    Ok(total)
}

/// The Reidemeister number of a block automorphism of a finite abelian
/// group: equal to the number of fixed points.
pub fn reidemeister_abelian(
    group: &PrimePowerDecomposition,
    phi: &BlockAutomorphism,
) -> Result<BigUint> {
    fixed_count(group, phi)
}

/// Brute-force twisted-conjugacy classes of `phi`.
///
/// In an abelian group the relation `x ~ g + x - phi(g)` makes the classes
/// exactly the cosets of the image of `g - phi(g)`, so the class count times
/// the image size recovers `|G|`. Returns the count and the smallest
/// representative of each class in coordinate order.
pub fn twisted_classes_bruteforce(
    group: &PrimePowerDecomposition,
    phi: &BlockAutomorphism,
    bound: u64,
) -> Result<(u64, Vec<AbelianElement>)> {
    let shape = group.components();
    let elements = enumerate_elements(shape, bound)?;
    let image: BTreeSet<AbelianElement> = elements
        .iter()
        .map(|g| g.sub(&phi.apply(group, g), shape))
        .collect();
    let mut visited = BTreeSet::new();
    let mut reps = Vec::new();
    for x in &elements {
        if visited.contains(x) {
            continue;
        }
        reps.push(x.clone());
        for delta in &image {
            visited.insert(x.add(delta, shape));
        }
    }
    let count = reps.len() as u64;
    assert_eq!(
        count as u128 * image.len() as u128,
        elements.len() as u128,
        "classes must partition the group into equal cosets"
    );
    Ok((count, reps))
}

/// The fixed multiplier used by witness constructions on a component with
/// odd `p`: 3 when `p = 7`, otherwise 2.
///
/// The returned `m` always has `m^3` and `1 - m^3` invertible mod `p^r`.
/// No valid multiplier exists for `p = 2` (both `m` and `1 - m^3` would
/// have to be odd).
pub fn select_m(p: u64, r: u32) -> Result<u64> {
    let q = multiplier_modulus(p, r)?;
    let m = if p == 7 { 3 } else { 2 };
    debug_assert!(multiplier_is_valid(m, p, q));
    Ok(m)
}

/// Search variant: the smallest valid multiplier `m >= 2`.
pub fn select_m_search(p: u64, r: u32) -> Result<u64> {
    let q = multiplier_modulus(p, r)?;
    (2..q.max(3))
        .find(|&m| multiplier_is_valid(m, p, q))
        .ok_or_else(|| Error::Parameter(format!("no valid multiplier mod {q}")))
}

fn multiplier_modulus(p: u64, r: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::Parameter(format!("{p} is not prime")));
    }
    if p == 2 {
        return Err(Error::Parameter(
            "no valid multiplier exists for p = 2: m and 1 - m^3 cannot both be odd".into(),
        ));
    }
    if r == 0 {
        return Err(Error::Parameter("exponent r must be at least 1".into()));
    }
    p.checked_pow(r)
        .ok_or_else(|| Error::Parameter(format!("{p}^{r} does not fit in 64 bits")))
}

/// True when `m^3` and `1 - m^3` are both units mod `q = p^r`.
fn multiplier_is_valid(m: u64, p: u64, q: u64) -> bool {
    let m = m % q;
    let cube = mod_pow(m, 3, q);
    m % p != 0 && (cube + q - 1) % p != 0
}
