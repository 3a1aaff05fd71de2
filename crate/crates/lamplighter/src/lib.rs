//! Exact-arithmetic toolkit for twisted conjugacy in lamplighter-type groups.
//!
//! The library works with restricted wreath products `G wr Z^k` where `G` is a
//! finite abelian group. It decides whether such a group has the R-infinity
//! property (every automorphism has infinitely many twisted conjugacy
//! classes), and when it does not, constructs an automorphism with finite
//! Reidemeister number together with a machine-checked certificate of that
//! number. Every symbolic computation is backed by a brute-force oracle on
//! finite instances.
//!
//! All arithmetic is exact: integer matrices use arbitrary precision, modular
//! matrices use checked word arithmetic, and no floating point appears
//! anywhere.
//!
//! The main entry points, by module:
//!
//! - [`matrix`], [`snf`], [`modular`]: exact integer and modular linear
//!   algebra (determinants, Smith normal form, cokernel orders,
//!   multiplicative orders, kernel counting).
//! - [`abelian`]: finite abelian groups in prime-power form, block
//!   automorphisms, fixed-point counts, Reidemeister numbers, and a
//!   twisted-conjugacy brute-force oracle.
//! - [`wreath`]: elements and automorphisms of `G wr Z^k`, equivariance
//!   checking, and affine-orbit analysis.
//! - [`certify`]: certificates of finite Reidemeister number for wreath
//!   automorphisms.
//! - [`oracle`]: a union-find twisted-conjugacy oracle on finite analogues
//!   `G wr (Z_n)^k`, with a sum-formula cross-check.
//! - [`classifier`]: the R-infinity decision procedure and witness builders.
//! - [`json`]: the wire formats used by the CLI.
//! - [`cli`]: the command-line surface (also usable programmatically).
//!
//! Runnable walkthroughs for each capability live in the `examples/`
//! directory; try `cargo run --example classify`.

pub mod abelian;
pub mod blocks;
pub mod certify;
pub mod classifier;
pub mod cli;
pub mod error;
pub mod json;
pub mod matrix;
pub mod modular;
pub mod oracle;
pub mod primes;
pub mod snf;
pub mod wreath;

pub use error::{Error, Result};
