//! Numerical probes for regularity, the modulus principles and the open
//! mapping property.
//!
//! Everything here samples finitely many points and certifies nothing beyond
//! those samples. Grid work runs in parallel; every reduction orders ties by
//! the lexicographic order of the witness so reports are reproducible.

mod modulus;
mod open;
mod regular;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

pub use modulus::{
    max_modulus_probe, min_modulus_probe, min_modulus_scan, MinimaTally, MinimumScan,
    EXTREMUM_MARGIN,
};
pub use open::{
    counterexample_probe, counterexample_probe_with, near_degenerate, open_mapping_probe,
    open_mapping_probe_with, CounterexampleConfig, CounterexampleOutcome, OpenMappingConfig,
    ATTAIN_TOL, DEGENERACY_CLEARANCE,
};
pub use regular::{check_regular, check_regular_on, default_units, DEFAULT_H, DEFAULT_TOL};

/// An axis-aligned box of `points`⁴ grid points centred at `center` with
/// half-width `radius`.
///
/// `check_regular` reads the same spec in slice coordinates; see there.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridRepr")]
pub struct GridSpec {
    pub center: Quaternion,
    pub radius: f64,
    pub points: usize,
}

#[derive(Deserialize)]
struct GridRepr {
    center: Quaternion,
    radius: f64,
    points: usize,
}

impl TryFrom<GridRepr> for GridSpec {
    type Error = Error;

    fn try_from(r: GridRepr) -> Result<Self> {
        GridSpec::new(r.center, r.radius, r.points)
    }
}

impl GridSpec {
    pub fn new(center: Quaternion, radius: f64, points: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Precondition(format!(
                "grid radius must be positive, got {radius}"
            )));
        }
        if points < 2 {
            return Err(Error::Precondition(format!(
                "grid needs at least 2 points per axis, got {points}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::Precondition("grid center is not finite".into()));
        }
        Ok(GridSpec {
            center,
            radius,
            points,
        })
    }

    pub fn step(&self) -> f64 {
        2.0 * self.radius / (self.points - 1) as f64
    }

    /// Coordinate of index `k` along one axis, as an offset from the centre.
    pub fn offset(&self, k: usize) -> f64 {
        -self.radius + k as f64 * self.step()
    }

    pub fn point(&self, idx: [usize; 4]) -> Quaternion {
        self.center
            + Quaternion::new(
                self.offset(idx[0]),
                self.offset(idx[1]),
                self.offset(idx[2]),
                self.offset(idx[3]),
            )
    }

    pub fn len(&self) -> usize {
        self.points.pow(4)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multi-index of the `n`-th point, last axis fastest.
    pub fn index(&self, mut n: usize) -> [usize; 4] {
        let p = self.points;
        let mut idx = [0; 4];
        for slot in idx.iter_mut().rev() {
            *slot = n % p;
            n /= p;
        }
        idx
    }

    pub fn flat(&self, idx: [usize; 4]) -> usize {
        idx.iter().fold(0, |acc, &k| acc * self.points + k)
    }

    pub fn is_interior(&self, idx: [usize; 4]) -> bool {
        idx.iter().all(|&k| k > 0 && k + 1 < self.points)
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        let tol = 1e-12 * (1.0 + self.radius);
        (q - self.center)
            .to_array()
            .iter()
            .all(|d| d.abs() <= self.radius + tol)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// Outcome of a probe. `witness` is the point that violates the property on
/// failure, or the most informative sampled point on success; `residual` is
/// the probe-specific measured quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub verdict: Verdict,
    pub witness: Quaternion,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

fn lex(a: &Quaternion, b: &Quaternion) -> Ordering {
    a.to_array()
        .iter()
        .zip(b.to_array().iter())
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Larger value wins; equal values go to the lexicographically smaller point.
fn pick_max(a: (Quaternion, f64), b: (Quaternion, f64)) -> (Quaternion, f64) {
    match a.1.total_cmp(&b.1).then_with(|| lex(&b.0, &a.0)) {
        Ordering::Less => b,
        _ => a,
    }
}

/// Smaller value wins; equal values go to the lexicographically smaller point.
fn pick_min(a: (Quaternion, f64), b: (Quaternion, f64)) -> (Quaternion, f64) {
    match a.1.total_cmp(&b.1).then_with(|| lex(&a.0, &b.0)) {
        Ordering::Greater => b,
        _ => a,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_indexing() {
        let g = GridSpec::new(Quaternion::new(1.0, 0.0, 0.0, 0.0), 1.0, 5).unwrap();
        assert_eq!(g.step(), 0.5);
        assert_eq!(g.len(), 625);
        for n in [0, 1, 7, 124, 624] {
            assert_eq!(g.flat(g.index(n)), n);
        }
        assert_eq!(
            g.point([0, 0, 0, 0]),
            Quaternion::new(0.0, -1.0, -1.0, -1.0)
        );
        assert_eq!(g.point([4, 2, 2, 2]), Quaternion::new(2.0, 0.0, 0.0, 0.0));
        assert!(g.is_interior([1, 2, 3, 3]) && !g.is_interior([0, 2, 2, 2]));
        assert!(g.contains(g.point([4, 4, 0, 1])));
        assert!(!g.contains(Quaternion::new(3.1, 0.0, 0.0, 0.0)));
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(Quaternion::ZERO, 0.0, 5).is_err());
        assert!(GridSpec::new(Quaternion::ZERO, 1.0, 1).is_err());
        assert!(
            serde_json::from_str::<GridSpec>(r#"{"center":[0,0,0,0],"radius":-1,"points":4}"#)
                .is_err()
        );
        let g: GridSpec =
            serde_json::from_str(r#"{"center":[0,1,0,0],"radius":0.5,"points":9}"#).unwrap();
        assert_eq!(g.points, 9);
    }

    #[test]
    fn report_json() {
        let r = ProbeReport {
            verdict: Verdict::Pass,
            witness: Quaternion::I,
            residual: 0.25,
            note: None,
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"verdict":"pass","witness":[0,1,0,0],"residual":0.25}"#
        );
        let n = r.clone().with_note("x");
        let back: ProbeReport = serde_json::from_str(&serde_json::to_string(&n).unwrap()).unwrap();
        assert_eq!(back, n);
    }

    #[test]
    fn deterministic_ties() {
        let a = (Quaternion::new(0.0, 1.0, 0.0, 0.0), 1.0);
        let b = (Quaternion::new(0.0, 0.0, 1.0, 0.0), 1.0);
        assert_eq!(pick_max(a, b).0, b.0);
        assert_eq!(pick_max(b, a).0, b.0);
        assert_eq!(pick_min(a, b).0, b.0);
        assert_eq!(pick_min((a.0, 0.5), b).0, a.0);
    }
}
