//! Regular reciprocal, the sphere-preserving map `T_f`, and evaluation of
//! expressions assembled from polynomials with sums, regular products,
//! reciprocals and constant shifts.
//!
//! Expressions are kept as trees and evaluated pointwise; regular products
//! inside a tree use `f*g(q) = f(q) g(f(q)⁻¹ q f(q))`, which holds for any
//! pair of regular functions.

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::quat::Quaternion;
use crate::regpoly::{RegPoly, VANISH_TOL};

/// Relative threshold on `|f^s(q)|` (and `|f^c(q)|` for `T_f`) below which `q`
/// is treated as a pole.
pub const POLE_TOL: f64 = 1e-10;

fn pole_threshold(p: &RegPoly) -> f64 {
    POLE_TOL * (1.0 + p.coeff_scale())
}

/// `f^{-*}(q) = f^s(q)⁻¹ f^c(q)`.
pub fn reciprocal_eval(f: &RegPoly, q: Quaternion) -> Result<Quaternion> {
    reciprocal_with(
        f,
        &f.symmetrization(),
        &f.regular_conjugate(),
        q,
        "reciprocal",
    )
}

fn reciprocal_with(
    f: &RegPoly,
    symm: &RegPoly,
    conj: &RegPoly,
    q: Quaternion,
    origin: &str,
) -> Result<Quaternion> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let s = symm.eval(q);
    if s.norm() <= pole_threshold(symm) {
        return Err(Error::Pole {
            at: q,
            origin: origin.to_string(),
        });
    }
    Ok(s.inverse()? * conj.eval(q))
}

/// `T_f(q) = f^c(q)⁻¹ q f^c(q)`.
pub fn transform_tf(f: &RegPoly, q: Quaternion) -> Result<Quaternion> {
    let fc = f.regular_conjugate().eval(q);
    if fc.norm() <= pole_threshold(f) {
        return Err(Error::Pole {
            at: q,
            origin: "T_f: f^c vanishes".into(),
        });
    }
    fc.conjugate_by(q)
}

/// The reciprocal through `1 / f(T_f(q))`.
pub fn reciprocal_via_transform(f: &RegPoly, q: Quaternion) -> Result<Quaternion> {
    let symm = f.symmetrization();
    if symm.eval(q).norm() <= pole_threshold(&symm) {
        return Err(Error::Pole {
            at: q,
            origin: "reciprocal".into(),
        });
    }
    f.eval(transform_tf(f, q)?).inverse()
}

#[derive(Debug, Clone, PartialEq)]
pub enum RationalExpr {
    Poly(RegPoly),
    Sum(Vec<RationalExpr>),
    /// Regular product of the arguments, left to right.
    Star(Vec<RationalExpr>),
    Recip(Reciprocal),
    ConstShift {
        inner: Box<RationalExpr>,
        shift: Quaternion,
    },
}

/// `f^{-*}` for a polynomial leaf, with `f^s` and `f^c` precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct Reciprocal {
    poly: RegPoly,
    symm: RegPoly,
    conj: RegPoly,
}

impl Reciprocal {
    pub fn new(poly: RegPoly) -> Result<Self> {
        if poly.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        Ok(Reciprocal {
            symm: poly.symmetrization(),
            conj: poly.regular_conjugate(),
            poly,
        })
    }

    pub fn poly(&self) -> &RegPoly {
        &self.poly
    }

    /// The symmetrization whose zero set is the pole set.
    pub fn symmetrization(&self) -> &RegPoly {
        &self.symm
    }
}

impl RationalExpr {
    pub fn poly(p: RegPoly) -> Self {
        RationalExpr::Poly(p)
    }

    pub fn recip(p: RegPoly) -> Result<Self> {
        Ok(RationalExpr::Recip(Reciprocal::new(p)?))
    }

    pub fn shift(self, c: Quaternion) -> Self {
        RationalExpr::ConstShift {
            inner: Box::new(self),
            shift: c,
        }
    }

    pub fn sum(terms: Vec<RationalExpr>) -> Self {
        RationalExpr::Sum(terms)
    }

    pub fn star(factors: Vec<RationalExpr>) -> Self {
        RationalExpr::Star(factors)
    }

    /// `q⁻² + 1`, constant on the unit sphere of imaginary units.
    pub fn inverse_square_plus_one() -> Self {
        let q2 = RegPoly::from_real(&[0.0, 0.0, 1.0]);
        RationalExpr::recip(q2)
            .expect("q² is nonzero")
            .shift(Quaternion::ONE)
    }

    pub fn eval(&self, q: Quaternion) -> Result<Quaternion> {
        self.eval_path(q, "$")
    }

    fn eval_path(&self, q: Quaternion, path: &str) -> Result<Quaternion> {
        match self {
            RationalExpr::Poly(p) => Ok(p.eval(q)),
            RationalExpr::Sum(terms) => terms
                .iter()
                .enumerate()
                .map(|(n, t)| t.eval_path(q, &format!("{path}.args[{n}]")))
                .sum(),
            RationalExpr::Star(factors) => star_eval(factors, q, path, 0),
            RationalExpr::Recip(r) => reciprocal_with(
                &r.poly,
                &r.symm,
                &r.conj,
                q,
                &format!("{path} (recip leaf)"),
            ),
            RationalExpr::ConstShift { inner, shift } => {
                Ok(inner.eval_path(q, &format!("{path}.args[0]"))? + *shift)
            }
        }
    }

    /// Largest coefficient magnitude over all polynomial leaves.
    pub fn coeff_scale(&self) -> f64 {
        match self {
            RationalExpr::Poly(p) => p.coeff_scale(),
            RationalExpr::Recip(r) => r.poly.coeff_scale(),
            RationalExpr::Sum(ts) | RationalExpr::Star(ts) => {
                ts.iter().map(RationalExpr::coeff_scale).fold(0.0, f64::max)
            }
            RationalExpr::ConstShift { inner, shift } => inner.coeff_scale().max(shift.norm()),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            RationalExpr::Poly(p) => serde_json::to_value(p).expect("polynomials serialize"),
            RationalExpr::Sum(ts) => {
                json!({"op": "sum", "args": ts.iter().map(RationalExpr::to_json).collect::<Vec<_>>()})
            }
            RationalExpr::Star(ts) => {
                json!({"op": "star", "args": ts.iter().map(RationalExpr::to_json).collect::<Vec<_>>()})
            }
            RationalExpr::Recip(r) => {
                json!({"op": "recip", "args": [serde_json::to_value(&r.poly).expect("polynomials serialize")]})
            }
            RationalExpr::ConstShift { inner, shift } => {
                json!({"op": "const-shift", "args": [inner.to_json()], "shift": serde_json::to_value(shift).expect("quaternions serialize")})
            }
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("rational expression must be a JSON object".into()))?;
        let Some(op) = obj.get("op") else {
            let p: RegPoly = serde_json::from_value(v.clone())
                .map_err(|e| Error::Parse(format!("bad polynomial leaf: {e}")))?;
            return Ok(RationalExpr::Poly(p));
        };
        let op = op
            .as_str()
            .ok_or_else(|| Error::Parse("\"op\" must be a string".into()))?;
        let args = obj
            .get("args")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse(format!("{op}: missing \"args\" array")))?;
        let parsed = || {
            args.iter()
                .map(RationalExpr::from_json)
                .collect::<Result<Vec<_>>>()
        };
        let single = |what: &str| -> Result<&Value> {
            match args.as_slice() {
                [a] => Ok(a),
                _ => Err(Error::Parse(format!(
                    "{what}: expected exactly one argument"
                ))),
            }
        };
        match op {
            "sum" | "star" if args.is_empty() => Err(Error::Parse(format!("{op}: no arguments"))),
            "sum" => Ok(RationalExpr::Sum(parsed()?)),
            "star" => Ok(RationalExpr::Star(parsed()?)),
            "recip" => match RationalExpr::from_json(single("recip")?)? {
                RationalExpr::Poly(p) => RationalExpr::recip(p),
                _ => Err(Error::Parse(
                    "recip: argument must be a polynomial leaf".into(),
                )),
            },
            "const-shift" => {
                let inner = RationalExpr::from_json(single("const-shift")?)?;
                let shift = obj
                    .get("shift")
                    .ok_or_else(|| Error::Parse("const-shift: missing \"shift\"".into()))?;
                let shift: Quaternion = serde_json::from_value(shift.clone())
                    .map_err(|e| Error::Parse(format!("const-shift: bad shift: {e}")))?;
                Ok(inner.shift(shift))
            }
            other => Err(Error::Parse(format!("unknown op {other:?}"))),
        }
    }
}

fn star_eval(
    factors: &[RationalExpr],
    q: Quaternion,
    path: &str,
    offset: usize,
) -> Result<Quaternion> {
    match factors {
        [] => Ok(Quaternion::ONE),
        [only] => only.eval_path(q, &format!("{path}.args[{offset}]")),
        [first, rest @ ..] => {
            let fq = first.eval_path(q, &format!("{path}.args[{offset}]"))?;
            if fq.norm() < VANISH_TOL * (1.0 + first.coeff_scale()) {
                return Ok(Quaternion::ZERO);
            }
            Ok(fq * star_eval(rest, fq.conjugate_by(q)?, path, offset + 1)?)
        }
    }
}

impl Serialize for RationalExpr {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        RationalExpr::from_json(&v).map_err(serde::de::Error::custom)
    }
}
