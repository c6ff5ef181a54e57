//! Exact algebra behind theta operators on Ekedahl-Oort strata of unitary
//! Shimura varieties of signature `(n-1, 1)`, at the level of fibers and
//! formal local models over finite fields.

pub mod dieudonne;
pub mod error;
pub mod filtration;
pub mod gf;
pub mod json;
pub mod matrix;
pub mod multilinear;
pub mod ring;
pub mod semilinear;
pub mod subspace;
pub mod theta;
pub mod weyl;

pub use error::{Error, Result};
pub use gf::{Gf, GfElem};
pub use matrix::Matrix;
pub use ring::{Field, Frobenius, Integers, Rationals, Ring};
pub use semilinear::SemilinearMap;
pub use subspace::Subspace;

/// Arbitrary-precision integers.
pub type ZZ = Integers<num_bigint::BigInt>;
/// Arbitrary-precision rationals.
pub type QQ = Rationals<num_bigint::BigInt>;
/// Matrices over a finite field.
pub type GfMatrix = Matrix<GfElem>;
