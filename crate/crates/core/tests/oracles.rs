//! Reference values recomputed by independent means: closed forms, real
//! matrix arithmetic, and brute-force scans that share no code with the
//! library paths they check.

use slicereg::verify::{counterexample_probe, counterexample_probe_with, CounterexampleConfig};
use slicereg::{Quaternion, RegPoly};

/// Left-multiplication matrix of `a`, so that `L(a) b = a b` on `[w, x, y, z]`.
fn left_matrix(a: [f64; 4]) -> [[f64; 4]; 4] {
    let [w, x, y, z] = a;
    [[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]]
}

fn mat_mul(a: [f64; 4], b: [f64; 4]) -> [f64; 4] {
    let m = left_matrix(a);
    std::array::from_fn(|r| (0..4).map(|c| m[r][c] * b[c]).sum())
}

/// Convolution of coefficient lists using the matrix form of the product.
fn convolve(f: &[[f64; 4]], g: &[[f64; 4]]) -> Vec<[f64; 4]> {
    let mut out = vec![[0.0; 4]; f.len() + g.len() - 1];
    for (a, fa) in f.iter().enumerate() {
        for (b, gb) in g.iter().enumerate() {
            let p = mat_mul(*fa, *gb);
            for k in 0..4 {
                out[a + b][k] += p[k];
            }
        }
    }
    out
}

#[test]
fn symmetrization_of_qi_qj_is_q2_plus_1_squared() {
    // (q - i)*(q - j) = q² - (i + j) q + k
    let f = [
        [0.0, 0.0, 0.0, 1.0],
        [0.0, -1.0, -1.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
    ];
    let fc: Vec<[f64; 4]> = f.iter().map(|&[w, x, y, z]| [w, -x, -y, -z]).collect();
    let oracle = convolve(&f, &fc);
    let expected = [1.0, 0.0, 2.0, 0.0, 1.0];
    for (n, c) in oracle.iter().enumerate() {
        assert!((c[0] - expected[n]).abs() < 1e-15 && c[1..].iter().all(|v| v.abs() < 1e-15));
    }

    let lib = RegPoly::new(f.iter().map(|&a| Quaternion::from_array(a)).collect()).symmetrization();
    for (n, c) in oracle.iter().enumerate() {
        assert!(lib.coeff(n).max_abs_diff(&Quaternion::from_array(*c)) < 1e-15);
    }
}

#[test]
fn star_product_matches_matrix_convolution() {
    let f = [
        [0.5, -1.0, 0.25, 2.0],
        [1.0, 0.0, -0.5, 0.75],
        [-0.25, 0.5, 1.0, 0.0],
    ];
    let g = [[1.5, 0.5, 0.0, -1.0], [0.0, 2.0, 1.0, 0.5]];
    let oracle = convolve(&f, &g);
    let lift =
        |c: &[[f64; 4]]| RegPoly::new(c.iter().map(|&a| Quaternion::from_array(a)).collect());
    let lib = lift(&f).star_mul(&lift(&g));
    for (n, c) in oracle.iter().enumerate() {
        assert!(lib.coeff(n).max_abs_diff(&Quaternion::from_array(*c)) < 1e-14);
    }
}

/// Exact infimum of `|q⁻² + 1 - 0.1j|` over `B(i, 1/2)`, from the slice form.
///
/// For `q = x + yI`, `f(q) = 1 + A + B I` with `A = (x² - y²)/r⁴` and
/// `B = -2xy/r⁴`, so `|f - 0.1j|² = (1 + A)² + B² + 0.01 - 0.2 B I_j`. The
/// ball condition reads `I_i ≥ (r² + 3/4) / (2y)`; the best unit puts the
/// rest of its length on `±j`.
fn separation_oracle(n: usize) -> f64 {
    let mut best = f64::INFINITY;
    for a in 0..=n {
        let x = -0.5 + a as f64 / n as f64;
        for b in 0..=n {
            let y = 0.5 + b as f64 / n as f64;
            let r2 = x * x + y * y;
            let c = (r2 + 0.75) / (2.0 * y);
            if c > 1.0 {
                continue;
            }
            let big_a = (x * x - y * y) / (r2 * r2);
            let big_b = -2.0 * x * y / (r2 * r2);
            let d2 = (1.0 + big_a).powi(2) + big_b * big_b + 0.01
                - 0.2 * big_b.abs() * (1.0 - c * c).sqrt();
            best = best.min(d2);
        }
    }
    best.sqrt()
}

#[test]
fn counterexample_separation_matches_oracle() {
    let exact = separation_oracle(3000);
    // recorded by the oracle run
    assert!((exact - 0.08752).abs() < 5e-5, "{exact}");

    let report = counterexample_probe().unwrap();
    assert!(report.passed(), "{report:?}");
    // sampling can only overestimate the infimum
    assert!(report.residual >= exact - 1e-6);
    assert!(
        report.residual <= 1.05 * exact,
        "{} vs {exact}",
        report.residual
    );
    assert!((report.witness - Quaternion::I).norm() <= 0.5);
}

#[test]
fn counterexample_is_reproducible_across_seeds() {
    let bounds: Vec<f64> = (10..14)
        .map(|seed| {
            let cfg = CounterexampleConfig {
                seed,
                samples: 100_000,
                ..CounterexampleConfig::default()
            };
            counterexample_probe_with(&cfg).unwrap().separation
        })
        .collect();
    let lo = bounds.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = bounds.iter().cloned().fold(0.0, f64::max);
    assert!(lo > 0.0 && hi <= 1.1 * lo, "{bounds:?}");
}

#[test]
fn counterexample_image_near_lj_is_real() {
    // a point q = x + yI of the ball has I·i ≥ 0.875, so an image point within
    // δ of L_j has a j-part of at most about 0.55 δ
    let cfg = CounterexampleConfig {
        samples: 400_000,
        slice_tol: 1e-3,
        ..CounterexampleConfig::default()
    };
    let out = counterexample_probe_with(&cfg).unwrap();
    assert!(out.slice_hits > 0);
    assert!(out.slice_max_imag <= 0.56e-3, "{out:?}");
}
