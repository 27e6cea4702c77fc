//! Deterministic workloads shared by the benchmarks.

use slicereg::{Quaternion, RegPoly};

/// A dense polynomial of the given degree with coefficients of size about 1.
pub fn dense_poly(degree: usize, salt: u32) -> RegPoly {
    let s = f64::from(salt);
    RegPoly::new(
        (0..=degree)
            .map(|n| {
                let t = n as f64 + 0.37 * s;
                Quaternion::new(
                    t.sin(),
                    (1.3 * t).cos(),
                    (0.7 * t + 1.0).sin(),
                    (2.1 * t).cos(),
                )
            })
            .collect(),
    )
}

/// Evaluation points spread over the unit ball.
pub fn points(count: usize) -> Vec<Quaternion> {
    (0..count)
        .map(|k| {
            let t = k as f64;
            Quaternion::new(
                0.9 * (0.3 * t).sin(),
                0.8 * (0.7 * t).cos(),
                0.6 * (1.1 * t).sin(),
                0.5 * (1.9 * t).cos(),
            )
        })
        .collect()
}
