//! Anything that can be evaluated at a quaternion, possibly failing at poles.

use crate::error::Result;
use crate::quat::Quaternion;
use crate::rational::RationalExpr;
use crate::regpoly::RegPoly;

pub trait QuatFn: Sync {
    fn eval_at(&self, q: Quaternion) -> Result<Quaternion>;

    /// The underlying polynomial, when there is one. Probes use it for checks
    /// that need coefficients (degeneracy, zero sets).
    fn as_poly(&self) -> Option<&RegPoly> {
        None
    }
}

impl QuatFn for RegPoly {
    fn eval_at(&self, q: Quaternion) -> Result<Quaternion> {
        Ok(self.eval(q))
    }

    fn as_poly(&self) -> Option<&RegPoly> {
        Some(self)
    }
}

impl QuatFn for RationalExpr {
    fn eval_at(&self, q: Quaternion) -> Result<Quaternion> {
        self.eval(q)
    }

    fn as_poly(&self) -> Option<&RegPoly> {
        match self {
            RationalExpr::Poly(p) => Some(p),
            _ => None,
        }
    }
}

/// Wraps a plain closure, e.g. a non-regular test function such as `q ↦ q̄`.
pub struct PointFn<F>(pub F);

impl<F: Fn(Quaternion) -> Quaternion + Sync> QuatFn for PointFn<F> {
    fn eval_at(&self, q: Quaternion) -> Result<Quaternion> {
        Ok((self.0)(q))
    }
}
