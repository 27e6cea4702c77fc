use rayon::prelude::*;

use super::{pick_max, GridSpec, ProbeReport, Verdict};
use crate::error::{Error, Result};
use crate::function::QuatFn;
use crate::quat::{decompose, sample_sphere_units, ImaginaryUnit, Quaternion};

pub const DEFAULT_H: f64 = 1e-5;
pub const DEFAULT_TOL: f64 = 1e-5;
const RANDOM_UNITS: usize = 3;
const UNIT_SEED: u64 = 0x5eed;

/// `i`, `j`, `k` followed by a few seeded random units.
pub fn default_units() -> Vec<ImaginaryUnit> {
    let mut units = vec![ImaginaryUnit::I, ImaginaryUnit::J, ImaginaryUnit::K];
    units.extend(sample_sphere_units(RANDOM_UNITS, UNIT_SEED));
    units
}

/// [`check_regular_on`] with [`default_units`].
pub fn check_regular<F: QuatFn + ?Sized>(
    fun: &F,
    region: &GridSpec,
    h: f64,
    tol: f64,
) -> Result<ProbeReport> {
    check_regular_on(fun, region, &default_units(), h, tol)
}

pub(crate) fn eval_checked<F: QuatFn + ?Sized>(fun: &F, q: Quaternion) -> Result<Quaternion> {
    match fun.eval_at(q) {
        Ok(v) if v.is_finite() => Ok(v),
        Ok(_) => Err(Error::Evaluation {
            at: q,
            reason: "non-finite value".into(),
        }),
        Err(e @ (Error::Pole { .. } | Error::Evaluation { .. })) => Err(e),
        Err(e) => Err(Error::Evaluation {
            at: q,
            reason: e.to_string(),
        }),
    }
}

/// Central-difference estimate of `|½(∂x + I∂y) f(x + yI)|`.
fn cauchy_riemann_residual<F: QuatFn + ?Sized>(
    fun: &F,
    q: Quaternion,
    unit: ImaginaryUnit,
    h: f64,
) -> Result<f64> {
    let iq = unit.quat();
    let dx = (eval_checked(fun, q + Quaternion::real(h))?
        - eval_checked(fun, q - Quaternion::real(h))?)
        / (2.0 * h);
    let dy = (eval_checked(fun, q + iq * h)? - eval_checked(fun, q - iq * h)?) / (2.0 * h);
    Ok(((dx + iq * dy) * 0.5).norm())
}

/// Samples `∂̄_I f` on every slice `L_I` for the given units.
///
/// On slice `L_I` the sample points are `x + yI` with `(x, y)` on the
/// `points × points` square of half-width `radius` around the slice
/// coordinates of `region.center`. Passes iff the largest residual is at
/// most `tol`; the witness is where that largest residual occurs.
pub fn check_regular_on<F: QuatFn + ?Sized>(
    fun: &F,
    region: &GridSpec,
    units: &[ImaginaryUnit],
    h: f64,
    tol: f64,
) -> Result<ProbeReport> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::Precondition(format!(
            "finite-difference step must be positive, got {h}"
        )));
    }
    if units.is_empty() {
        return Err(Error::Precondition("no slice units to sample".into()));
    }
    let c = decompose(region.center);
    let n = region.points;
    let tasks: Vec<(ImaginaryUnit, usize, usize)> = units
        .iter()
        .flat_map(|&u| (0..n).flat_map(move |a| (0..n).map(move |b| (u, a, b))))
        .collect();

    let results: Vec<Result<(Quaternion, f64)>> = tasks
        .par_iter()
        .map(|&(unit, a, b)| {
            let q = unit.point(c.x + region.offset(a), c.y + region.offset(b));
            cauchy_riemann_residual(fun, q, unit, h).map(|r| (q, r))
        })
        .collect();

    let mut worst: Option<(Quaternion, f64)> = None;
    for r in results {
        let r = r?;
        worst = Some(match worst {
            Some(w) => pick_max(w, r),
            None => r,
        });
    }
    let (witness, residual) = worst.expect("at least one sample");
    Ok(ProbeReport {
        verdict: Verdict::from_pass(residual <= tol),
        witness,
        residual,
        note: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::PointFn;
    use crate::regpoly::RegPoly;

    fn region() -> GridSpec {
        GridSpec::new(Quaternion::new(0.2, 0.5, 0.0, 0.0), 0.6, 7).unwrap()
    }

    #[test]
    fn polynomial_passes() {
        let f = RegPoly::new(vec![
            Quaternion::new(1.0, -0.5, 0.25, 0.0),
            Quaternion::new(0.0, 0.3, 0.0, -1.0),
            Quaternion::new(0.7, 0.0, 0.2, 0.1),
            Quaternion::new(-0.4, 0.9, 0.0, 0.5),
        ]);
        let r = check_regular(&f, &region(), DEFAULT_H, DEFAULT_TOL).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.residual < 1e-8);
    }

    #[test]
    fn left_multiplication_fails_on_lj() {
        // on L_j: ∂x(iq) = i and ∂y(iq) = ij = k, so ½(i + j k) = i
        let f = PointFn(|q: Quaternion| Quaternion::I * q);
        let r =
            check_regular_on(&f, &region(), &[ImaginaryUnit::J], DEFAULT_H, DEFAULT_TOL).unwrap();
        assert!(!r.passed());
        assert!((r.residual - 1.0).abs() < 1e-6, "{}", r.residual);
        // i q is regular on L_i itself
        let r =
            check_regular_on(&f, &region(), &[ImaginaryUnit::I], DEFAULT_H, DEFAULT_TOL).unwrap();
        assert!(r.passed());
    }

    #[test]
    fn conjugation_fails() {
        let f = PointFn(|q: Quaternion| q.conj());
        let r = check_regular(&f, &region(), DEFAULT_H, DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!((r.residual - 1.0).abs() < 1e-6);
    }

    #[test]
    fn pole_is_reported_with_point() {
        let f = crate::rational::RationalExpr::inverse_square_plus_one();
        let g = GridSpec::new(Quaternion::ZERO, DEFAULT_H, 3).unwrap();
        match check_regular(&f, &g, DEFAULT_H, DEFAULT_TOL) {
            Err(Error::Pole { .. }) | Err(Error::Evaluation { .. }) => {}
            other => panic!("expected an evaluation error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_step() {
        let f = RegPoly::identity();
        assert!(check_regular(&f, &region(), 0.0, 1e-5).is_err());
    }
}
