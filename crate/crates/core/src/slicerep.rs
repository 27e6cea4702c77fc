//! Sphere representation, splitting and extension.
//!
//! On each sphere `x + yS` a regular function is affine in the unit:
//! `f(x+yI) = b + I c`, where `b` and `c` come from two evaluations at
//! `x ± yK` for any unit `K`. Restricted to one slice `L_I`, and given a unit
//! `J ⟂ I`, the function splits as `F(z) + G(z) J` with `F`, `G` holomorphic
//! and `L_I`-valued; the regular product and conjugate have closed forms in
//! terms of the split, and the extension formula recovers the whole function
//! from any slice.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::quat::{decompose, ImaginaryUnit, JsonNumber, Quaternion, SliceUnit};
use crate::regpoly::RegPoly;

/// Maximum `|⟨I, J⟩|` accepted for a splitting frame.
pub const FRAME_TOL: f64 = 1e-10;

/// Relative tolerance on `|c|` for calling a sphere degenerate.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// The sphere `x + yS`, or the real point `x` when `y = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(try_from = "LocusRepr")]
pub struct SphereLocus {
    pub x: f64,
    pub y: f64,
}

#[derive(Deserialize)]
struct LocusRepr {
    x: f64,
    y: f64,
}

impl TryFrom<LocusRepr> for SphereLocus {
    type Error = Error;
    fn try_from(r: LocusRepr) -> Result<Self> {
        SphereLocus::new(r.x, r.y)
    }
}

impl Serialize for SphereLocus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SphereLocus", 2)?;
        st.serialize_field("x", &JsonNumber(self.x))?;
        st.serialize_field("y", &JsonNumber(self.y))?;
        st.end()
    }
}

impl SphereLocus {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() || y < 0.0 {
            return Err(Error::Precondition(format!(
                "invalid sphere locus ({x}, {y})"
            )));
        }
        Ok(SphereLocus { x, y })
    }

    /// The locus through `q`.
    pub fn of(q: Quaternion) -> Self {
        let c = decompose(q);
        SphereLocus { x: c.x, y: c.y }
    }

    pub fn point(&self, unit: ImaginaryUnit) -> Quaternion {
        unit.point(self.x, self.y)
    }

    pub fn is_real(&self) -> bool {
        self.y == 0.0
    }

    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// The constants `b`, `c` with `f(x+yI) = b + I c` on one sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePair {
    pub b: Quaternion,
    pub c: Quaternion,
}

impl SpherePair {
    pub fn value_at(&self, unit: ImaginaryUnit) -> Quaternion {
        self.b + unit.quat() * self.c
    }
}

pub fn sphere_pair(f: &RegPoly, s: SphereLocus, probe: ImaginaryUnit) -> SpherePair {
    let k = probe.quat();
    let plus = f.eval(s.point(probe));
    let minus = f.eval(s.point(-probe));
    SpherePair {
        b: (plus + minus) * 0.5,
        c: k * (minus - plus) * 0.5,
    }
}

/// Whether `f` is constant on the sphere, i.e. `|c(x, y)| ≤ tol`. Real points
/// are not part of the degenerate set and are rejected.
pub fn is_degenerate_sphere(f: &RegPoly, s: SphereLocus, tol: f64) -> Result<bool> {
    if s.y <= 0.0 {
        return Err(Error::Precondition(format!(
            "degeneracy is only defined for spheres with y > 0, got y = {}",
            s.y
        )));
    }
    Ok(sphere_pair(f, s, ImaginaryUnit::I).c.norm() <= tol)
}

pub fn default_degeneracy_tol(f: &RegPoly) -> f64 {
    DEGENERACY_TOL * f.coeff_scale()
}

/// Scans a grid of loci `(xs[a], ys[b])` and returns those on which `f` is
/// constant. Loci with `y ≤ 0` are skipped.
pub fn degenerate_loci(f: &RegPoly, xs: &[f64], ys: &[f64], tol: f64) -> Vec<SphereLocus> {
    let loci: Vec<SphereLocus> = xs
        .iter()
        .flat_map(|&x| {
            ys.iter()
                .filter(|&&y| y > 0.0)
                .map(move |&y| SphereLocus { x, y })
        })
        .collect();
    loci.into_par_iter()
        .filter(|&s| is_degenerate_sphere(f, s, tol).unwrap_or(false))
        .collect()
}

/// Spot check that a degenerate locus is not interior to the degenerate set:
/// some locus at distance `radius` in one of the four axis directions is not
/// degenerate.
pub fn has_nondegenerate_neighbor(f: &RegPoly, s: SphereLocus, radius: f64, tol: f64) -> bool {
    [(radius, 0.0), (-radius, 0.0), (0.0, radius), (0.0, -radius)]
        .into_iter()
        .filter(|&(_, dy)| s.y + dy > 0.0)
        .any(|(dx, dy)| {
            let n = SphereLocus {
                x: s.x + dx,
                y: s.y + dy,
            };
            !is_degenerate_sphere(f, n, tol).unwrap_or(true)
        })
}

/// An orthonormal pair of units `I ⟂ J`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    i: ImaginaryUnit,
    j: ImaginaryUnit,
}

impl Frame {
    pub fn new(i: ImaginaryUnit, j: ImaginaryUnit) -> Result<Self> {
        let d = i.dot(&j);
        if d.abs() > FRAME_TOL {
            return Err(Error::FrameNotOrthogonal(d.abs()));
        }
        Ok(Frame { i, j })
    }

    /// Completes `I` to a frame with the coordinate unit most orthogonal to
    /// `I`, Gram-Schmidt projected and normalized.
    pub fn canonical(i: ImaginaryUnit) -> Self {
        let v = i.vector();
        let axis = (0..3)
            .min_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
            .unwrap_or(0);
        let mut e = [0.0; 3];
        e[axis] = 1.0;
        let d = v[axis];
        let proj = [e[0] - d * v[0], e[1] - d * v[1], e[2] - d * v[2]];
        let j = ImaginaryUnit::normalize(proj)
            .expect("a coordinate axis is never parallel to the least-aligned unit");
        Frame { i, j }
    }

    pub fn i(&self) -> ImaginaryUnit {
        self.i
    }

    pub fn j(&self) -> ImaginaryUnit {
        self.j
    }

    /// `I·J`, the third unit of the frame.
    pub fn k(&self) -> Quaternion {
        self.i.quat() * self.j.quat()
    }

    /// Maps `re + im·i` to `re + im·I`.
    pub fn embed(&self, z: Complex64) -> Quaternion {
        self.i.point(z.re, z.im)
    }

    /// Writes `a = α + β J` with `α`, `β` in `L_I`.
    pub fn split_quaternion(&self, a: Quaternion) -> (Complex64, Complex64) {
        let im = a.imag_part();
        let alpha = Complex64::new(a.w, im.dot(&self.i.quat()));
        let beta = Complex64::new(im.dot(&self.j.quat()), im.dot(&self.k()));
        (alpha, beta)
    }

    pub fn join(&self, alpha: Complex64, beta: Complex64) -> Quaternion {
        self.embed(alpha) + self.embed(beta) * self.j.quat()
    }

    fn same_as(&self, other: &Frame) -> bool {
        self.i.quat().max_abs_diff(&other.i.quat()) <= 1e-12
            && self.j.quat().max_abs_diff(&other.j.quat()) <= 1e-12
    }
}

/// A polynomial with coefficients in one complex slice, stored as ordinary
/// complex numbers relative to the slice unit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SlicePoly(pub Vec<Complex64>);

impl SlicePoly {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.0.get(n).copied().unwrap_or_default()
    }

    pub fn mul(&self, other: &SlicePoly) -> SlicePoly {
        if self.0.is_empty() || other.0.is_empty() {
            return SlicePoly::default();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.0.len() + other.0.len() - 1];
        for (k, a) in self.0.iter().enumerate() {
            for (m, b) in other.0.iter().enumerate() {
                out[k + m] += a * b;
            }
        }
        SlicePoly(out)
    }

    pub fn add(&self, other: &SlicePoly) -> SlicePoly {
        let n = self.0.len().max(other.0.len());
        SlicePoly((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn neg(&self) -> SlicePoly {
        SlicePoly(self.0.iter().map(|a| -a).collect())
    }

    /// The polynomial `z ↦ conj(P(z̄))`, i.e. conjugated coefficients.
    pub fn reflect(&self) -> SlicePoly {
        SlicePoly(self.0.iter().map(|a| a.conj()).collect())
    }

    pub fn max_coeff_diff(&self, other: &SlicePoly) -> f64 {
        let n = self.0.len().max(other.0.len());
        (0..n)
            .map(|i| (self.coeff(i) - other.coeff(i)).norm())
            .fold(0.0, f64::max)
    }
}

/// `f_I(z) = F(z) + G(z) J` for a polynomial `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub frame: Frame,
    /// `F`, the `L_I` component.
    pub base: SlicePoly,
    /// `G`, the component multiplying `J`.
    pub j_part: SlicePoly,
}

pub fn split(f: &RegPoly, i: ImaginaryUnit, j: ImaginaryUnit) -> Result<SplitPair> {
    Ok(split_in(f, Frame::new(i, j)?))
}

pub fn split_in(f: &RegPoly, frame: Frame) -> SplitPair {
    let (base, j_part) = f
        .coeffs()
        .iter()
        .map(|&a| frame.split_quaternion(a))
        .unzip();
    SplitPair {
        frame,
        base: SlicePoly(base),
        j_part: SlicePoly(j_part),
    }
}

/// Regular product on the split form:
/// `[F H - G K̄] + [F K + G H̄] J`, where `P̄(z) = conj(P(z̄))`.
pub fn split_mul(fs: &SplitPair, gs: &SplitPair) -> Result<SplitPair> {
    if !fs.frame.same_as(&gs.frame) {
        return Err(Error::FrameMismatch);
    }
    let (f, g) = (&fs.base, &fs.j_part);
    let (h, k) = (&gs.base, &gs.j_part);
    Ok(SplitPair {
        frame: fs.frame,
        base: f.mul(h).add(&g.mul(&k.reflect()).neg()),
        j_part: f.mul(k).add(&g.mul(&h.reflect())),
    })
}

/// Regular conjugate on the split form: `F̄ - G J`.
pub fn split_conjugate(fs: &SplitPair) -> SplitPair {
    SplitPair {
        frame: fs.frame,
        base: fs.base.reflect(),
        j_part: fs.j_part.neg(),
    }
}

impl SplitPair {
    /// The polynomial whose restriction to `L_I` is this split.
    pub fn extend(&self) -> RegPoly {
        let n = self.base.0.len().max(self.j_part.0.len());
        RegPoly::new(
            (0..n)
                .map(|k| self.frame.join(self.base.coeff(k), self.j_part.coeff(k)))
                .collect(),
        )
    }

    pub fn max_coeff_diff(&self, other: &SplitPair) -> f64 {
        self.base
            .max_coeff_diff(&other.base)
            .max(self.j_part.max_coeff_diff(&other.j_part))
    }
}

/// A function known on one slice `L_I`, evaluated at `x + yI`.
pub trait SliceFunction {
    fn slice_unit(&self) -> ImaginaryUnit;
    fn eval_slice(&self, x: f64, y: f64) -> Quaternion;
}

impl SliceFunction for SplitPair {
    fn slice_unit(&self) -> ImaginaryUnit {
        self.frame.i
    }

    fn eval_slice(&self, x: f64, y: f64) -> Quaternion {
        let z = Complex64::new(x, y);
        self.frame.join(self.base.eval(z), self.j_part.eval(z))
    }
}

/// Slice data given by a closure `(x, y) ↦ f_I(x + yI)`.
pub struct SliceFn<F> {
    pub unit: ImaginaryUnit,
    pub func: F,
}

impl<F: Fn(f64, f64) -> Quaternion> SliceFunction for SliceFn<F> {
    fn slice_unit(&self) -> ImaginaryUnit {
        self.unit
    }

    fn eval_slice(&self, x: f64, y: f64) -> Quaternion {
        (self.func)(x, y)
    }
}

/// The restriction of `f` to `L_unit`.
pub fn restrict(f: &RegPoly, unit: ImaginaryUnit) -> SliceFn<impl Fn(f64, f64) -> Quaternion + '_> {
    SliceFn {
        unit,
        func: move |x, y| f.eval(unit.point(x, y)),
    }
}

/// Evaluates the regular extension of slice data at an arbitrary `q`:
/// `f(x+yJ) = ½[f_I(x+yI) + f_I(x-yI)] + J (I/2) [f_I(x-yI) - f_I(x+yI)]`.
pub fn ext_eval<S: SliceFunction + ?Sized>(data: &S, q: Quaternion) -> Quaternion {
    let c = decompose(q);
    let unit = match c.unit {
        SliceUnit::RealAxis => return data.eval_slice(c.x, 0.0),
        SliceUnit::Unit(u) => u,
    };
    let plus = data.eval_slice(c.x, c.y);
    let minus = data.eval_slice(c.x, -c.y);
    let i = data.slice_unit().quat();
    (plus + minus) * 0.5 + unit.quat() * i * (minus - plus) * 0.5
}
