//! Slice-regular quaternionic polynomials.
//!
//! The crate covers the algebra of regular functions given by polynomials
//! `Σ qⁿ aₙ` (regular product, conjugate, symmetrization, reciprocal), the
//! sphere representation `f(x+yI) = b + I c` with the splitting and extension
//! formulas, a zero-set classifier, and numerical probes for regularity, the
//! modulus principles and open mapping.

pub mod error;
pub mod function;
pub mod quat;
pub mod rational;
pub mod regpoly;
pub mod slicerep;
pub mod verify;
pub mod zeros;

pub use error::{Error, Result};
pub use function::{PointFn, QuatFn};
pub use quat::{decompose, ImaginaryUnit, Quaternion, SliceCoords, SliceUnit};
pub use rational::{reciprocal_eval, transform_tf, RationalExpr};
pub use regpoly::{pointwise_product_formula, RegPoly};
pub use slicerep::{sphere_pair, SphereLocus, SpherePair, SplitPair};
pub use verify::{GridSpec, ProbeReport, Verdict};
pub use zeros::{find_zeros, ZeroEntry, ZeroSet};
