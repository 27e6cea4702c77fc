use rayon::prelude::*;

use super::{pick_max, pick_min, GridSpec, ProbeReport, Verdict};
use crate::error::Result;
use crate::quat::Quaternion;
use crate::regpoly::RegPoly;
use crate::zeros::{find_zeros, ZeroEntry};

/// Strictness margin for grid extrema: plateaus never count as extrema.
pub const EXTREMUM_MARGIN: f64 = 1e-12;

/// The 80 nonzero offsets in `{-1, 0, 1}⁴`.
fn neighbor_offsets() -> Vec<[isize; 4]> {
    let mut out = Vec::with_capacity(80);
    for n in 0..81 {
        let d = [n / 27 % 3, n / 9 % 3, n / 3 % 3, n % 3].map(|k| k as isize - 1);
        if d != [0; 4] {
            out.push(d);
        }
    }
    out
}

struct Sampled {
    grid: GridSpec,
    values: Vec<f64>,
}

impl Sampled {
    fn new(f: &RegPoly, grid: &GridSpec) -> Self {
        let values = (0..grid.len())
            .into_par_iter()
            .map(|n| f.eval(grid.point(grid.index(n))).norm())
            .collect();
        Sampled {
            grid: *grid,
            values,
        }
    }

    /// `(min, max)` of `|f|` over the 80 neighbours of an interior index.
    fn neighbor_range(&self, idx: [usize; 4], offsets: &[[isize; 4]]) -> (f64, f64) {
        offsets
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), d| {
                let nb = std::array::from_fn(|a| (idx[a] as isize + d[a]) as usize);
                let v = self.values[self.grid.flat(nb)];
                (lo.min(v), hi.max(v))
            })
    }

    fn interior(&self) -> impl ParallelIterator<Item = [usize; 4]> + '_ {
        (0..self.grid.len())
            .into_par_iter()
            .map(|n| self.grid.index(n))
            .filter(|&idx| self.grid.is_interior(idx))
    }
}

fn constant_report(grid: &GridSpec) -> ProbeReport {
    ProbeReport {
        verdict: Verdict::Pass,
        witness: grid.center,
        residual: 0.0,
        note: None,
    }
    .with_note("constant function: the principle is vacuous")
}

/// Looks for a strict interior maximum of `|f|` on the 4D grid.
///
/// `residual` is the largest interior excess `|f(p)| - max over neighbours`;
/// the probe fails iff that excess reaches [`EXTREMUM_MARGIN`], with the
/// offending point as witness.
pub fn max_modulus_probe(f: &RegPoly, grid: &GridSpec) -> ProbeReport {
    if f.is_constant() {
        return constant_report(grid);
    }
    if grid.points < 3 {
        return ProbeReport {
            verdict: Verdict::Pass,
            witness: grid.center,
            residual: 0.0,
            note: None,
        }
        .with_note("grid has no interior points");
    }
    max_report(&Sampled::new(f, grid))
}

fn max_report(s: &Sampled) -> ProbeReport {
    let grid = &s.grid;
    let offsets = neighbor_offsets();
    let (witness, residual) = s
        .interior()
        .map(|idx| {
            let (_, hi) = s.neighbor_range(idx, &offsets);
            (grid.point(idx), s.values[grid.flat(idx)] - hi)
        })
        .reduce_with(pick_max)
        .expect("interior is non-empty");
    ProbeReport {
        verdict: Verdict::from_pass(residual < EXTREMUM_MARGIN),
        witness,
        residual,
        note: None,
    }
}

/// Checks that every strict interior minimum of `|f|` on the 4D grid is a
/// zero: `|f| ≤ zero_tol` there, or a zero from [`find_zeros`] lies within
/// one grid cell (the cell diagonal, twice the step).
///
/// A coarse grid can show a minimum a few cells away from the zero it belongs
/// to, when `|f|` runs down a shallow valley along a sphere. Such a minimum is
/// followed by local grid refinement inside the box; it is explained if the
/// refined minimum lands within one cell of a zero. A genuine nonzero local
/// minimum would survive refinement and fail the probe. A refinement that
/// runs into a face of the box shows the minimum was not interior after all.
///
/// `residual` is the largest distance from an unexplained minimum to the
/// nearest true zero (0 when every minimum is explained).
pub fn min_modulus_probe(f: &RegPoly, grid: &GridSpec, zero_tol: f64) -> Result<ProbeReport> {
    min_modulus_scan(f, grid, zero_tol).map(|s| s.report)
}

/// How the strict interior grid minima of a minimum-modulus scan were settled.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MinimaTally {
    pub grid_minima: usize,
    /// Within one cell of a zero as sampled.
    pub adjacent: usize,
    /// Within one cell of a zero after refinement.
    pub refined: usize,
    /// Refinement reached a face of the box.
    pub escaped: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimumScan {
    pub report: ProbeReport,
    pub tally: MinimaTally,
}

/// [`min_modulus_probe`] together with the tally of grid minima.
pub fn min_modulus_scan(f: &RegPoly, grid: &GridSpec, zero_tol: f64) -> Result<MinimumScan> {
    if f.is_constant() {
        return Ok(MinimumScan {
            report: constant_report(grid),
            tally: MinimaTally::default(),
        });
    }
    let zeros = find_zeros(f)?;
    let modulus = |q: Quaternion| f.eval(q).norm();
    Ok(min_report(
        &Sampled::new(f, grid),
        &modulus,
        zero_tol,
        &zeros,
    ))
}

const REFINE_POINTS: usize = 5;
const REFINE_ROUNDS: usize = 400;

/// Pattern search for a local minimum of `modulus` inside the grid box,
/// starting at `start` with a window of one grid step.
fn refine(
    modulus: &(dyn Fn(Quaternion) -> f64 + Sync),
    start: Quaternion,
    grid: &GridSpec,
) -> Quaternion {
    let n = REFINE_POINTS;
    let mut best = (start, modulus(start));
    let mut half = grid.step();
    let floor = 1e-10 * (1.0 + grid.radius);
    for _ in 0..REFINE_ROUNDS {
        if half < floor {
            break;
        }
        let h = 2.0 * half / (n - 1) as f64;
        let centre = best.0;
        let found = (0..n.pow(4))
            .into_par_iter()
            .filter_map(|m| {
                let off = [m / (n * n * n), m / (n * n) % n, m / n % n, m % n]
                    .map(|k| -half + k as f64 * h);
                let q = centre + Quaternion::from_array(off);
                grid.contains(q).then(|| (q, modulus(q)))
            })
            .reduce_with(pick_min);
        match found {
            Some(p) if p.1 < best.1 => best = p,
            _ => half *= 0.5,
        }
    }
    best.0
}

/// Whether `q` lies on a face of the grid box.
fn on_boundary(grid: &GridSpec, q: Quaternion) -> bool {
    let tol = 1e-9 * (1.0 + grid.radius);
    (q - grid.center)
        .to_array()
        .iter()
        .any(|d| d.abs() >= grid.radius - tol)
}

fn min_report(
    s: &Sampled,
    modulus: &(dyn Fn(Quaternion) -> f64 + Sync),
    zero_tol: f64,
    zeros: &[ZeroEntry],
) -> MinimumScan {
    let grid = &s.grid;
    let offsets = neighbor_offsets();
    let cell = 2.0 * grid.step();
    let miss = |q: Quaternion, v: f64| {
        if v <= zero_tol {
            0.0
        } else {
            zeros
                .iter()
                .map(|z| z.distance_to(q))
                .fold(f64::INFINITY, f64::min)
        }
    };

    let minima: Vec<Quaternion> = s
        .interior()
        .filter(|&idx| {
            let (lo, _) = s.neighbor_range(idx, &offsets);
            s.values[grid.flat(idx)] <= lo - EXTREMUM_MARGIN
        })
        .map(|idx| grid.point(idx))
        .collect();
    if minima.is_empty() {
        let (witness, _) = (0..grid.len())
            .into_par_iter()
            .map(|n| (grid.point(grid.index(n)), s.values[n]))
            .reduce_with(pick_min)
            .expect("grid is non-empty");
        let report = ProbeReport {
            verdict: Verdict::Pass,
            witness,
            residual: 0.0,
            note: None,
        }
        .with_note("no strict interior minimum");
        return MinimumScan {
            report,
            tally: MinimaTally::default(),
        };
    }

    let mut adjacent = 0;
    let mut refined = 0;
    let mut escaped = 0;
    let mut worst: Option<(Quaternion, f64)> = None;
    for &q in &minima {
        if miss(q, modulus(q)) <= cell {
            adjacent += 1;
            worst = Some(worst.map_or((q, 0.0), |w| pick_max(w, (q, 0.0))));
            continue;
        }
        let r = refine(modulus, q, grid);
        if on_boundary(grid, r) {
            escaped += 1;
            worst = Some(worst.map_or((q, 0.0), |w| pick_max(w, (q, 0.0))));
            continue;
        }
        let d = miss(r, modulus(r));
        if d <= cell {
            refined += 1;
            worst = Some(worst.map_or((q, 0.0), |w| pick_max(w, (q, 0.0))));
        } else {
            worst = Some(worst.map_or((r, d), |w| pick_max(w, (r, d))));
        }
    }
    let (witness, residual) = worst.expect("minima is non-empty");
    let report = ProbeReport { verdict: Verdict::from_pass(residual == 0.0), witness, residual, note: None }
        .with_note(format!(
            "{} grid minima: {adjacent} within one cell of a zero, {refined} reach one by refinement, {escaped} reach the boundary",
            minima.len()
        ));
    MinimumScan {
        report,
        tally: MinimaTally {
            grid_minima: minima.len(),
            adjacent,
            refined,
            escaped,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;

    fn grid(c: Quaternion, r: f64, n: usize) -> GridSpec {
        GridSpec::new(c, r, n).unwrap()
    }

    #[test]
    fn offsets_are_the_80_neighbours() {
        let o = neighbor_offsets();
        assert_eq!(o.len(), 80);
        let mut sorted = o.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 80);
    }

    #[test]
    fn identity_has_no_interior_max() {
        let r = max_modulus_probe(&RegPoly::identity(), &grid(Quaternion::ZERO, 1.0, 9));
        assert!(r.passed(), "{r:?}");
        assert!(r.residual < 0.0);
    }

    #[test]
    fn constant_is_vacuous() {
        let r = max_modulus_probe(
            &RegPoly::constant(Quaternion::real(3.0)),
            &grid(Quaternion::ZERO, 1.0, 5),
        );
        assert!(r.passed());
        assert!(r.note.is_some());
    }

    #[test]
    fn product_has_no_interior_max() {
        let f = RegPoly::linear_factor(I).star_mul(&RegPoly::linear_factor(J));
        let g = grid(Quaternion::ZERO, 2.0, 11);
        let r = max_modulus_probe(&f, &g);
        assert!(r.passed(), "{r:?}");
        // exhaustive scan: the largest |f| sits on the boundary of the box
        let n = g.points;
        let mut best = (0.0, [0; 4]);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let v = f.eval(g.point([a, b, c, d])).norm();
                        if v > best.0 {
                            best = (v, [a, b, c, d]);
                        }
                    }
                }
            }
        }
        assert!(!g.is_interior(best.1));
    }

    #[test]
    fn detects_a_planted_maximum() {
        let g = grid(Quaternion::ZERO, 1.0, 5);
        let values = (0..g.len())
            .map(|n| 5.0 - g.point(g.index(n)).norm_sqr())
            .collect();
        let r = max_report(&Sampled { grid: g, values });
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.witness, Quaternion::ZERO);
        assert!((r.residual - 0.25).abs() < 1e-12);
    }

    #[test]
    fn minimum_next_to_isolated_zero() {
        let f = RegPoly::linear_factor(I);
        let r = min_modulus_probe(&f, &grid(I, 0.5, 9), 1e-12).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.witness.dist(&I) <= 2.0 * 0.125);
    }

    #[test]
    fn minimum_on_boundary() {
        let f = RegPoly::linear_factor(Quaternion::real(5.0));
        let r = min_modulus_probe(&f, &grid(Quaternion::ZERO, 1.0, 7), 1e-12).unwrap();
        assert!(r.passed());
        assert_eq!(r.witness.w, 1.0);
    }

    #[test]
    fn minimum_near_sphere() {
        let f = RegPoly::from_real(&[1.0, 0.0, 1.0]);
        let r = min_modulus_probe(&f, &grid(I, 0.5, 9), 1e-12).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn unexplained_minimum_fails() {
        // |q - 3i| has its minimum at 3i, far from the zero i it is checked against
        let c = Quaternion::new(0.01, 3.0, 0.0, 0.0);
        let g = grid(c, 0.5, 9);
        let s = Sampled::new(
            &RegPoly::linear_factor(Quaternion::new(0.0, 3.0, 0.0, 0.0)),
            &g,
        );
        let zeros = [ZeroEntry::IsolatedPoint { point: I }];
        let three_i = Quaternion::new(0.0, 3.0, 0.0, 0.0);
        let modulus = |q: Quaternion| q.dist(&three_i);
        let r = min_report(&s, &modulus, 1e-12, &zeros).report;
        assert_eq!(r.verdict, Verdict::Fail);
        // refinement walks from the grid point onto 3i itself
        assert!(r.witness.dist(&three_i) < 1e-8, "{r:?}");
        assert!((r.residual - 2.0).abs() < 1e-8);
    }
}
