use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::regular::eval_checked;
use super::{pick_max, pick_min, ProbeReport, Verdict};
use crate::error::{Error, Result};
use crate::function::QuatFn;
use crate::quat::{decompose, ImaginaryUnit, Quaternion};
use crate::rational::RationalExpr;
use crate::regpoly::RegPoly;
use crate::slicerep::{default_degeneracy_tol, sphere_pair, SphereLocus};

/// A target counts as attained once some grid point maps within this distance.
pub const ATTAIN_TOL: f64 = 1e-4;
/// Minimum distance, in slice coordinates, between `q0` and the degenerate set.
pub const DEGENERACY_CLEARANCE: f64 = 1e-3;
const CLEARANCE_GRID: usize = 21;

#[derive(Debug, Clone, PartialEq)]
pub struct OpenMappingConfig {
    pub targets: usize,
    pub seed: u64,
    /// Points sampled on the boundary sphere `|q - q0| = r`.
    pub boundary_samples: usize,
    /// Grid points per axis at every refinement level (odd).
    pub grid_points: usize,
    pub max_levels: usize,
    /// Targets are drawn within `target_fraction · min |f(∂B) - f(q0)|`.
    pub target_fraction: f64,
}

impl Default for OpenMappingConfig {
    fn default() -> Self {
        OpenMappingConfig {
            targets: 10,
            seed: 0,
            boundary_samples: 2000,
            grid_points: 21,
            max_levels: 10,
            target_fraction: 0.5,
        }
    }
}

fn uniform_direction<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    loop {
        let v = Quaternion::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        );
        let n = v.norm();
        if n > 1e-10 {
            return v / n;
        }
    }
}

/// A uniform point of the 4-ball `B(center, radius)`.
fn uniform_in_ball<R: Rng + ?Sized>(rng: &mut R, center: Quaternion, radius: f64) -> Quaternion {
    let u = uniform_direction(rng);
    let rho = radius * rng.random::<f64>().powf(0.25);
    center + u * rho
}

/// `c(x, y) / y`, whose zeros in `y > 0` are the degenerate spheres.
fn reduced_c(f: &RegPoly, x: f64, y: f64) -> Quaternion {
    sphere_pair(f, SphereLocus { x, y }, ImaginaryUnit::I).c / y
}

/// Whether the degenerate set of `f` passes within [`DEGENERACY_CLEARANCE`]
/// of the sphere through `q0`.
///
/// Samples `c / y` on a fine square around the slice coordinates of `q0`. A
/// zero lies within reach when some sample is below the local Lipschitz bound
/// times the sample spacing, or below the absolute degeneracy tolerance.
pub fn near_degenerate(f: &RegPoly, q0: Quaternion) -> bool {
    let c = decompose(q0);
    let n = CLEARANCE_GRID;
    let d = DEGENERACY_CLEARANCE;
    let h = 2.0 * d / (n - 1) as f64;
    let tol = default_degeneracy_tol(f);
    let mut g = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            let (dx, dy) = (-d + a as f64 * h, -d + b as f64 * h);
            let y = (c.y + dy).abs();
            if dx.hypot(dy) <= d + 1e-15 && y > h {
                g[a * n + b] = Some(reduced_c(f, c.x + dx, y));
            }
        }
    }
    let mut lipschitz: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            if let Some(v) = g[a * n + b] {
                for w in [
                    (a + 1 < n).then(|| g[(a + 1) * n + b]),
                    (b + 1 < n).then(|| g[a * n + b + 1]),
                ] {
                    if let Some(Some(w)) = w {
                        lipschitz = lipschitz.max((v - w).norm() / h);
                    }
                }
            }
        }
    }
    g.iter()
        .flatten()
        .any(|v| v.norm() <= tol.max(lipschitz * h))
}

/// Nested grid search for a point of the closed ball `B(q0, r)` where `fun`
/// comes within [`ATTAIN_TOL`] of `target`.
fn attain<F: QuatFn + ?Sized>(
    fun: &F,
    target: Quaternion,
    q0: Quaternion,
    r: f64,
    cfg: &OpenMappingConfig,
) -> (Quaternion, f64) {
    let n = cfg.grid_points;
    let mut best = (
        q0,
        eval_checked(fun, q0).map_or(f64::INFINITY, |v| (v - target).norm()),
    );
    let mut center = q0;
    let mut half = r;
    for _ in 0..cfg.max_levels {
        if best.1 <= ATTAIN_TOL {
            break;
        }
        let step = 2.0 * half / (n - 1) as f64;
        let level = (0..n.pow(4))
            .into_par_iter()
            .filter_map(|m| {
                let off = [m / (n * n * n), m / (n * n) % n, m / n % n, m % n]
                    .map(|k| -half + k as f64 * step);
                let q = center + Quaternion::from_array(off);
                if (q - q0).norm() > r {
                    return None;
                }
                eval_checked(fun, q).ok().map(|v| (q, (v - target).norm()))
            })
            .reduce_with(pick_min);
        if let Some(found) = level {
            best = pick_min(best, found);
        }
        center = best.0;
        half = 2.0 * step;
    }
    best
}

/// [`open_mapping_probe_with`] with default settings and `targets` targets.
pub fn open_mapping_probe<F: QuatFn + ?Sized>(
    fun: &F,
    q0: Quaternion,
    r: f64,
    targets: usize,
) -> Result<ProbeReport> {
    open_mapping_probe_with(
        fun,
        q0,
        r,
        &OpenMappingConfig {
            targets,
            ..OpenMappingConfig::default()
        },
    )
}

/// Checks that values near `fun(q0)` are attained inside `B(q0, r)`.
///
/// `ε` is `target_fraction` times the smallest sampled distance between
/// `fun(q0)` and the image of the boundary sphere. Each target `p` with
/// `|p - fun(q0)| ≤ ε` is searched for by nested grid refinement (each level
/// zooms in 5× around the best point). Passes iff every target is attained;
/// the residual is the worst remaining `|fun(q) - p|` and the witness its `q`.
pub fn open_mapping_probe_with<F: QuatFn + ?Sized>(
    fun: &F,
    q0: Quaternion,
    r: f64,
    cfg: &OpenMappingConfig,
) -> Result<ProbeReport> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::Precondition(format!(
            "ball radius must be positive, got {r}"
        )));
    }
    if cfg.grid_points < 5 || cfg.grid_points.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "grid_points must be odd and at least 5, got {}",
            cfg.grid_points
        )));
    }
    if let Some(f) = fun.as_poly() {
        if near_degenerate(f, q0) {
            return Err(Error::Precondition(format!(
                "{q0} is within {DEGENERACY_CLEARANCE:e} of the degenerate set"
            )));
        }
    }
    let p0 = eval_checked(fun, q0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let boundary: Vec<Quaternion> = (0..cfg.boundary_samples)
        .map(|_| q0 + uniform_direction(&mut rng) * r)
        .collect();
    let spread = boundary
        .par_iter()
        .filter_map(|&b| eval_checked(fun, b).ok().map(|v| (v - p0).norm()))
        .reduce(|| f64::INFINITY, f64::min);
    let eps = if spread.is_finite() {
        cfg.target_fraction * spread
    } else {
        0.0
    };
    let targets: Vec<Quaternion> = (0..cfg.targets)
        .map(|_| uniform_in_ball(&mut rng, p0, eps))
        .collect();

    let mut worst = (q0, 0.0);
    for &p in &targets {
        worst = pick_max(worst, attain(fun, p, q0, r, cfg));
    }
    let (witness, residual) = worst;
    Ok(ProbeReport {
        verdict: Verdict::from_pass(residual <= ATTAIN_TOL),
        witness,
        residual,
        note: None,
    }
    .with_note(format!("target radius {eps:e}")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleConfig {
    pub samples: usize,
    pub seed: u64,
    pub center: Quaternion,
    pub radius: f64,
    /// A target in `L_j` off the real axis.
    pub target: Quaternion,
    /// Image points this close to `L_j` are checked for being real.
    pub slice_tol: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        CounterexampleConfig {
            samples: 200_000,
            seed: 0,
            center: Quaternion::I,
            radius: 0.5,
            target: Quaternion::new(0.0, 0.0, 0.1, 0.0),
            slice_tol: 1e-6,
        }
    }
}

/// Measurements from sampling `f(q) = q⁻² + 1` on a ball around `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleOutcome {
    /// `|f(center)|`.
    pub value_at_center: f64,
    /// Smallest sampled `|f(q) - target|`: the empirical separation bound.
    pub separation: f64,
    /// The sample attaining `separation`.
    pub closest: Quaternion,
    /// Number of image points within `slice_tol` of `L_j`.
    pub slice_hits: usize,
    /// Largest `|j`-component| among those points.
    pub slice_max_imag: f64,
    pub slice_tol: f64,
}

impl CounterexampleOutcome {
    pub fn passed(&self) -> bool {
        self.value_at_center <= 1e-12
            && self.separation > 0.0
            && self.slice_max_imag <= self.slice_tol
    }

    pub fn report(&self) -> ProbeReport {
        ProbeReport {
            verdict: Verdict::from_pass(self.passed()),
            witness: self.closest,
            residual: self.separation,
            note: Some(format!(
                "|f(center)| = {:e}; {} image samples within {:e} of L_j, largest j-part {:e}",
                self.value_at_center, self.slice_hits, self.slice_tol, self.slice_max_imag
            )),
        }
    }
}

/// Samples `q⁻² + 1` uniformly on `B(center, radius)` and records how close
/// its image comes to `target`, and whether image points near `L_j` are real.
pub fn counterexample_probe_with(cfg: &CounterexampleConfig) -> Result<CounterexampleOutcome> {
    let f = RationalExpr::inverse_square_plus_one();
    let value_at_center = f.eval(cfg.center)?.norm();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<Quaternion> = (0..cfg.samples)
        .map(|_| uniform_in_ball(&mut rng, cfg.center, cfg.radius))
        .collect();
    let values = samples
        .par_iter()
        .map(|&q| f.eval(q).map(|v| (q, v)))
        .collect::<Vec<_>>();

    let mut closest = (cfg.center, f64::INFINITY);
    let mut slice_hits = 0;
    let mut slice_max_imag: f64 = 0.0;
    for r in values {
        let (q, v) = r?;
        closest = pick_min(closest, (q, (v - cfg.target).norm()));
        if v.x.hypot(v.z) <= cfg.slice_tol {
            slice_hits += 1;
            slice_max_imag = slice_max_imag.max(v.y.abs());
        }
    }
    Ok(CounterexampleOutcome {
        value_at_center,
        separation: closest.1,
        closest: closest.0,
        slice_hits,
        slice_max_imag,
        slice_tol: cfg.slice_tol,
    })
}

/// The default non-openness experiment for `q⁻² + 1` on `B(i, 1/2)`.
pub fn counterexample_probe() -> Result<ProbeReport> {
    counterexample_probe_with(&CounterexampleConfig::default()).map(|o| o.report())
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;

    #[test]
    fn identity_is_open() {
        let q0 = Quaternion::new(1.0, 0.0, 1.0, 0.0);
        let r = open_mapping_probe(&RegPoly::identity(), q0, 0.3, 10).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!((r.witness - q0).norm() <= 0.3);
    }

    #[test]
    fn product_is_open_at_two() {
        let f = RegPoly::linear_factor(I).star_mul(&RegPoly::linear_factor(J));
        let r = open_mapping_probe(&f, Quaternion::real(2.0), 0.3, 10).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn degenerate_centre_is_rejected() {
        let f = RegPoly::from_real(&[1.0, 0.0, 1.0]);
        assert!(matches!(
            open_mapping_probe(&f, I, 0.3, 5),
            Err(Error::Precondition(_))
        ));
        // 5e-4 away from the locus x = 0 is still too close; 1e-2 is fine
        assert!(near_degenerate(&f, Quaternion::new(5e-4, 0.0, 1.0, 0.0)));
        assert!(!near_degenerate(&f, Quaternion::new(1e-2, 0.0, 1.0, 0.0)));
        assert!(!near_degenerate(&f, Quaternion::real(2.0)));
    }

    #[test]
    fn unattainable_target_fails() {
        // |q - 1| takes only real values, but the boundary image stays 0.3 away
        let f = crate::function::PointFn(|q: Quaternion| {
            Quaternion::real((q - Quaternion::ONE).norm())
        });
        let cfg = OpenMappingConfig {
            targets: 3,
            max_levels: 3,
            ..OpenMappingConfig::default()
        };
        let r = open_mapping_probe_with(&f, Quaternion::ONE, 0.3, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
    }

    #[test]
    fn counterexample_small_run() {
        let cfg = CounterexampleConfig {
            samples: 20_000,
            ..CounterexampleConfig::default()
        };
        let out = counterexample_probe_with(&cfg).unwrap();
        assert!(out.value_at_center < 1e-15);
        assert!(out.passed(), "{out:?}");
        assert!((out.closest - I).norm() <= 0.5);
        // f(i) = 0 is itself 0.1 away from the target
        assert!(out.separation < 0.1);
    }
}
