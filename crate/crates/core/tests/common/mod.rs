//! Random inputs shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use slicereg::{Quaternion, RegPoly};

/// Components uniform in `[-s, s]`.
pub fn quat<R: Rng>(rng: &mut R, s: f64) -> Quaternion {
    Quaternion::new(
        rng.random_range(-s..=s),
        rng.random_range(-s..=s),
        rng.random_range(-s..=s),
        rng.random_range(-s..=s),
    )
}

/// Degree uniform in `0..=max_degree`, coefficient components uniform in `[-1, 1]`.
pub fn poly<R: Rng>(rng: &mut R, max_degree: usize) -> RegPoly {
    let d = rng.random_range(0..=max_degree);
    loop {
        let c: Vec<Quaternion> = (0..=d).map(|_| quat(rng, 1.0)).collect();
        if c[d].norm() > 0.1 {
            return RegPoly::new(c);
        }
    }
}

pub fn poly_of_degree<R: Rng>(rng: &mut R, d: usize) -> RegPoly {
    loop {
        let c: Vec<Quaternion> = (0..=d).map(|_| quat(rng, 1.0)).collect();
        if c[d].norm() > 0.1 {
            return RegPoly::new(c);
        }
    }
}

/// Roots for a product of linear factors: mostly generic quaternions, with
/// some real roots mixed in.
pub fn roots<R: Rng>(rng: &mut R, count: usize) -> Vec<Quaternion> {
    (0..count)
        .map(|_| {
            if rng.random_bool(0.2) {
                Quaternion::real(rng.random_range(-1.0..=1.0))
            } else {
                quat(rng, 1.0)
            }
        })
        .collect()
}

/// A point of `B(0, s)`-ish scale for evaluation.
pub fn point<R: Rng>(rng: &mut R) -> Quaternion {
    quat(rng, 1.0)
}
