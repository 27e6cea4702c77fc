//! Zero sets of regular polynomials.
//!
//! The symmetrization `f^s = f * f^c` has real coefficients, and a sphere
//! `x + yS` meets the zero set of `f` exactly when `x ± yi` are roots of
//! `f^s`. Real roots of `f^s` are the real zeros of `f`. On each remaining
//! sphere, `f(x+yI) = b + I c` vanishes everywhere (`b = c = 0`) or at the
//! single unit `I = -b c⁻¹`.

mod roots;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::{ImaginaryUnit, Quaternion};
use crate::regpoly::RegPoly;
use crate::slicerep::{sphere_pair, SphereLocus};

pub use roots::{complex_roots_real_poly, durand_kerner, root_clusters, RootCluster};

/// Relative cutoff on `|b|`, `|c|` when classifying a sphere.
pub const CLASSIFY_TOL: f64 = 1e-9;
/// Tolerance on `|Re I|` and `||I| - 1|` for the candidate unit `-b c⁻¹`.
pub const UNIT_CANDIDATE_TOL: f64 = 1e-7;
/// Relative residual accepted when confirming a real zero.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ZeroEntry {
    #[serde(rename = "point")]
    IsolatedPoint { point: Quaternion },
    #[serde(rename = "sphere")]
    SphericalZero { locus: SphereLocus },
    #[serde(rename = "real")]
    RealPoint { point: Quaternion },
}

impl ZeroEntry {
    pub fn locus(&self) -> SphereLocus {
        match *self {
            ZeroEntry::IsolatedPoint { point } | ZeroEntry::RealPoint { point } => {
                SphereLocus::of(point)
            }
            ZeroEntry::SphericalZero { locus } => locus,
        }
    }

    /// Distance from `q` to this zero (to the nearest sphere point for a
    /// spherical zero).
    pub fn distance_to(&self, q: Quaternion) -> f64 {
        match *self {
            ZeroEntry::IsolatedPoint { point } | ZeroEntry::RealPoint { point } => q.dist(&point),
            ZeroEntry::SphericalZero { locus } => {
                let s = SphereLocus::of(q);
                (s.x - locus.x).hypot(s.y - locus.y)
            }
        }
    }
}

/// Serialized as `{"zeros": [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub zeros: Vec<ZeroEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SphereZeroClass {
    /// `f` vanishes on the whole sphere.
    Whole,
    /// `f` vanishes only at `x + yI`.
    Point(ImaginaryUnit),
    NoZero,
}

fn sphere_tol(f: &RegPoly, s: SphereLocus) -> f64 {
    CLASSIFY_TOL * (1.0 + f.magnitude_bound(s.radius()))
}

/// Solves `b + I c = 0` on the sphere `s` (with `y > 0`).
pub fn classify_on_sphere(f: &RegPoly, s: SphereLocus) -> Result<SphereZeroClass> {
    if s.y <= 0.0 {
        return Err(Error::Precondition(format!(
            "classify_on_sphere needs y > 0, got {}",
            s.y
        )));
    }
    let pair = sphere_pair(f, s, ImaginaryUnit::I);
    let tol = sphere_tol(f, s);
    let (nb, nc) = (pair.b.norm(), pair.c.norm());
    if nb <= tol && nc <= tol {
        return Ok(SphereZeroClass::Whole);
    }
    if nc <= tol {
        return Ok(SphereZeroClass::NoZero);
    }
    let candidate = -(pair.b * pair.c.inverse()?);
    Ok(
        match ImaginaryUnit::with_tolerance(candidate, UNIT_CANDIDATE_TOL) {
            Ok(unit) => SphereZeroClass::Point(unit),
            Err(_) => SphereZeroClass::NoZero,
        },
    )
}

/// The complete zero set of a nonzero polynomial.
pub fn find_zeros(f: &RegPoly) -> Result<Vec<ZeroEntry>> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let symm = f.symmetrization_real()?;
    let clusters = root_clusters(&symm)?;

    let mut entries = Vec::new();
    for cluster in clusters.iter().filter(|c| c.value.im >= 0.0) {
        let z = cluster.value;
        if z.im == 0.0 {
            let r = Quaternion::real(z.re);
            let residual = f.eval(r).norm();
            let tol = VERIFY_TOL * (1.0 + f.magnitude_bound(z.re.abs()));
            if residual > tol {
                return Err(Error::InternalInconsistency(format!(
                    "real root {} of f^s is not a zero of f (|f| = {residual:e})",
                    z.re
                )));
            }
            entries.push(ZeroEntry::RealPoint { point: r });
            continue;
        }
        let locus = SphereLocus::new(z.re, z.im)?;
        match classify_on_sphere(f, locus)? {
            SphereZeroClass::Whole => entries.push(ZeroEntry::SphericalZero { locus }),
            SphereZeroClass::Point(unit) => entries.push(ZeroEntry::IsolatedPoint {
                point: locus.point(unit),
            }),
            SphereZeroClass::NoZero => {
                return Err(Error::InternalInconsistency(format!(
                    "f^s vanishes on the sphere ({}, {}) but f has no zero there",
                    locus.x, locus.y
                )))
            }
        }
    }
    Ok(entries)
}

/// Right-hand side of the product zero criterion: `f(q) = 0`, or
/// `g(f(q)⁻¹ q f(q)) = 0`. Both tests use `|·| ≤ tol`.
pub fn product_zero_check(f: &RegPoly, g: &RegPoly, q: Quaternion, tol: f64) -> bool {
    let fq = f.eval(q);
    if fq.norm() <= tol {
        return true;
    }
    match fq.conjugate_by(q) {
        Ok(t) => g.eval(t).norm() <= tol,
        Err(_) => true,
    }
}
