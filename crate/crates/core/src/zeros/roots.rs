//! Complex roots of real polynomials by Durand–Kerner iteration.
//!
//! Multiple roots converge only linearly and to a limited accuracy, so the
//! raw iterates are grouped into clusters whose Weierstrass inclusion discs
//! overlap and each cluster is replaced by its centroid. The centroid of the
//! iterates approximating an `m`-fold root is far more accurate than any
//! single iterate.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 500;
pub const UPDATE_TOL: f64 = 1e-12;
pub const ANGLE_OFFSET: f64 = 0.4;
/// Roots within this (relative) distance of their conjugate are paired.
pub const CONJUGATE_PAIR_TOL: f64 = 1e-8;

/// A root together with the number of iterates that converged to it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCluster {
    pub value: Complex64,
    pub multiplicity: usize,
}

/// Strips trailing zero coefficients; errors on the zero polynomial.
fn effective(coeffs: &[f64]) -> Result<&[f64]> {
    let len = coeffs.iter().rposition(|&c| c != 0.0).map_or(0, |p| p + 1);
    if len == 0 {
        return Err(Error::ZeroPolynomial);
    }
    if coeffs[..len].iter().any(|c| !c.is_finite()) {
        return Err(Error::Precondition(
            "non-finite polynomial coefficient".into(),
        ));
    }
    Ok(&coeffs[..len])
}

fn eval_monic(monic: &[f64], z: Complex64) -> Complex64 {
    monic
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

fn abs_poly(monic: &[f64], r: f64) -> f64 {
    monic.iter().rev().fold(0.0, |acc, &a| acc * r + a.abs())
}

fn weierstrass(monic: &[f64], roots: &[Complex64], k: usize) -> Complex64 {
    let zk = roots[k];
    let mut den = Complex64::new(1.0, 0.0);
    for (j, &zj) in roots.iter().enumerate() {
        if j != k {
            den *= zk - zj;
        }
    }
    if den.norm() == 0.0 {
        den = Complex64::new(f64::EPSILON, 0.0);
    }
    eval_monic(monic, zk) / den
}

/// Raw Durand–Kerner iterates, one per root counted with multiplicity, plus
/// the number of sweeps used.
pub fn durand_kerner(coeffs: &[f64]) -> Result<(Vec<Complex64>, usize)> {
    let c = effective(coeffs)?;
    let n = c.len() - 1;
    if n == 0 {
        return Ok((Vec::new(), 0));
    }
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|&a| a / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|a| a.abs()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, TAU * k as f64 / n as f64 + ANGLE_OFFSET))
        .collect();

    for sweep in 1..=MAX_SWEEPS {
        let mut converged = true;
        for k in 0..n {
            let w = weierstrass(&monic, &z, k);
            z[k] -= w;
            if w.norm() > UPDATE_TOL * z[k].norm().max(1.0) {
                converged = false;
            }
        }
        if converged {
            return Ok((z, sweep));
        }
    }
    Ok((z, MAX_SWEEPS))
}

/// Roots grouped by multiplicity, closed under conjugation.
pub fn root_clusters(coeffs: &[f64]) -> Result<Vec<RootCluster>> {
    let c = effective(coeffs)?;
    let (z, _) = durand_kerner(c)?;
    let n = z.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n];
    let monic: Vec<f64> = c.iter().map(|&a| a / lead).collect();
    // Inclusion radii n·(|p(z)| + rounding bound)/|Π(z - z_j)|; the rounding
    // term keeps iterates of a multiple root from looking separated.
    let radii: Vec<f64> = (0..n)
        .map(|k| {
            let zk = z[k];
            let den: f64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (zk - z[j]).norm())
                .product();
            let rounding = 4.0 * n as f64 * f64::EPSILON * abs_poly(&monic, zk.norm());
            n as f64 * (eval_monic(&monic, zk).norm() + rounding) / den.max(f64::MIN_POSITIVE)
        })
        .collect();

    // single-linkage union of overlapping inclusion discs
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut a: usize) -> usize {
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for a in 0..n {
        for b in a + 1..n {
            let slack = 1e-12 * z[a].norm().max(1.0);
            if (z[a] - z[b]).norm() <= 2.0 * (radii[a] + radii[b]) + slack {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: Vec<(usize, Vec<Complex64>)> = Vec::new();
    for (k, &zk) in z.iter().enumerate() {
        let r = find(&mut parent, k);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(zk),
            None => groups.push((r, vec![zk])),
        }
    }
    let clusters: Vec<RootCluster> = groups
        .into_iter()
        .map(|(_, members)| settle_cluster(c, &members))
        .collect();
    pair_conjugates(clusters)
}

/// Centroid of a cluster, snapped to the real axis when the cluster is its
/// own conjugate, then polished by Newton's method on the derivative of order
/// `m - 1` (where an `m`-fold root is simple).
fn settle_cluster(coeffs: &[f64], members: &[Complex64]) -> RootCluster {
    let m = members.len();
    let mut centroid = members.iter().sum::<Complex64>() / m as f64;
    let spread = members
        .iter()
        .map(|z| (z - centroid).norm())
        .fold(0.0, f64::max);
    let tol = CONJUGATE_PAIR_TOL * (1.0 + centroid.norm());
    if centroid.im.abs() <= spread + tol {
        centroid.im = 0.0;
    }
    let deriv = derivative(coeffs, m - 1);
    let polished = newton(&deriv, centroid);
    let value = match polished {
        Some(p) if (p - centroid).norm() <= (4.0 * spread).max(tol) => p,
        _ => centroid,
    };
    RootCluster {
        value,
        multiplicity: m,
    }
}

fn derivative(coeffs: &[f64], order: usize) -> Vec<f64> {
    let mut d = coeffs.to_vec();
    for _ in 0..order {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| a * k as f64)
            .collect();
    }
    d
}

fn newton(coeffs: &[f64], start: Complex64) -> Option<Complex64> {
    let d1 = derivative(coeffs, 1);
    let mut z = start;
    for _ in 0..50 {
        let p = eval_monic(coeffs, z);
        let dp = eval_monic(&d1, z);
        if dp.norm() == 0.0 {
            return None;
        }
        let step = p / dp;
        z -= step;
        if !z.is_finite() {
            return None;
        }
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z.norm()) {
            return Some(z);
        }
    }
    Some(z)
}

/// Snaps near-real clusters onto the axis and matches every upper-half-plane
/// cluster with its conjugate partner.
fn pair_conjugates(clusters: Vec<RootCluster>) -> Result<Vec<RootCluster>> {
    let tol = |z: Complex64| CONJUGATE_PAIR_TOL * (1.0 + z.norm());
    let mut out = Vec::with_capacity(clusters.len());
    let mut lower: Vec<RootCluster> = Vec::new();
    let mut upper: Vec<RootCluster> = Vec::new();
    for c in clusters {
        if c.value.im.abs() <= tol(c.value) {
            out.push(RootCluster {
                value: Complex64::new(c.value.re, 0.0),
                ..c
            });
        } else if c.value.im > 0.0 {
            upper.push(c);
        } else {
            lower.push(c);
        }
    }
    for u in upper {
        let best = lower
            .iter()
            .enumerate()
            .filter(|(_, l)| l.multiplicity == u.multiplicity)
            .map(|(idx, l)| (idx, (u.value - l.value.conj()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((idx, d)) if d <= tol(u.value) => {
                let l = lower.swap_remove(idx);
                let mean = (u.value + l.value.conj()) * 0.5;
                out.push(RootCluster {
                    value: mean,
                    multiplicity: u.multiplicity,
                });
                out.push(RootCluster {
                    value: mean.conj(),
                    multiplicity: u.multiplicity,
                });
            }
            _ => {
                return Err(Error::InternalInconsistency(format!(
                    "complex root {} has no conjugate partner",
                    u.value
                )))
            }
        }
    }
    if let Some(l) = lower.first() {
        return Err(Error::InternalInconsistency(format!(
            "complex root {} has no conjugate partner",
            l.value
        )));
    }
    out.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(out)
}

/// All complex roots of a real polynomial, repeated by multiplicity.
pub fn complex_roots_real_poly(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    Ok(root_clusters(coeffs)?
        .into_iter()
        .flat_map(|c| std::iter::repeat_n(c.value, c.multiplicity))
        .collect())
}
