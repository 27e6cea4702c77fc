//! Polynomials `f(q) = Σ qⁿ aₙ` with quaternion coefficients on the right.
//!
//! These are the slice-regular functions the rest of the crate works with.
//! The regular product `*` is coefficient convolution with the order of the
//! factors preserved, which makes the algebra associative but not
//! commutative.

use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Trailing coefficients below this magnitude are stripped after arithmetic.
pub const TRIM_TOL: f64 = 1e-13;

/// Relative cutoff for the `f(q) = 0` branch of the product formula.
pub const VANISH_TOL: f64 = 1e-13;

/// Imaginary parts of symmetrization coefficients above this (relative to the
/// coefficient scale) indicate a numerical failure.
pub const SYMMETRIZATION_IMAG_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RegPolyRepr")]
pub struct RegPoly {
    coeffs: Vec<Quaternion>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegPolyRepr {
    coeffs: Vec<Quaternion>,
}

impl TryFrom<RegPolyRepr> for RegPoly {
    type Error = Error;
    fn try_from(r: RegPolyRepr) -> Result<Self> {
        Ok(RegPoly::new(r.coeffs))
    }
}

impl RegPoly {
    /// Builds a polynomial from ascending coefficients, dropping trailing
    /// coefficients that are exactly zero.
    pub fn new(coeffs: Vec<Quaternion>) -> Self {
        RegPoly { coeffs }.trimmed(0.0)
    }

    pub fn zero() -> Self {
        RegPoly { coeffs: Vec::new() }
    }

    pub fn constant(a: Quaternion) -> Self {
        RegPoly::new(vec![a])
    }

    /// The identity function `q`.
    pub fn identity() -> Self {
        RegPoly::new(vec![Quaternion::ZERO, Quaternion::ONE])
    }

    /// `q - p`.
    pub fn linear_factor(p: Quaternion) -> Self {
        RegPoly::new(vec![-p, Quaternion::ONE])
    }

    /// Polynomial with real coefficients, ascending.
    pub fn from_real(coeffs: &[f64]) -> Self {
        RegPoly::new(coeffs.iter().map(|&c| Quaternion::real(c)).collect())
    }

    /// Product `(q - p₀) * (q - p₁) * …` of linear factors.
    pub fn from_linear_factors(roots: &[Quaternion]) -> Self {
        roots
            .iter()
            .fold(RegPoly::constant(Quaternion::ONE), |acc, &p| {
                acc.star_mul(&RegPoly::linear_factor(p))
            })
    }

    /// Strips trailing coefficients with magnitude below `tol`.
    pub fn trimmed(mut self, tol: f64) -> Self {
        while let Some(last) = self.coeffs.last() {
            if last.norm() <= tol {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        self
    }

    pub fn coeffs(&self) -> &[Quaternion] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Quaternion> {
        self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Quaternion {
        self.coeffs.get(n).copied().unwrap_or(Quaternion::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Largest coefficient magnitude.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(Quaternion::norm).fold(0.0, f64::max)
    }

    /// Upper bound `Σ |aₙ| rⁿ` for `|f(q)|` on `|q| ≤ r`.
    pub fn magnitude_bound(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, a| acc * r + a.norm())
    }

    /// True if every coefficient is real within `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|a| a.imag_norm() <= tol)
    }

    /// `Σ qⁿ aₙ`, powers on the left of the coefficients.
    pub fn eval(&self, q: Quaternion) -> Quaternion {
        self.coeffs
            .iter()
            .rev()
            .fold(Quaternion::ZERO, |acc, &a| q * acc + a)
    }

    /// Regular product: `cₙ = Σₖ aₖ bₙ₋ₖ` with `f`'s coefficients on the left.
    pub fn star_mul(&self, other: &RegPoly) -> RegPoly {
        self.star_mul_trimmed(other, TRIM_TOL)
    }

    pub fn star_mul_trimmed(&self, other: &RegPoly, trim_tol: f64) -> RegPoly {
        if self.is_zero() || other.is_zero() {
            return RegPoly::zero();
        }
        let mut out = vec![Quaternion::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (k, &a) in self.coeffs.iter().enumerate() {
            for (m, &b) in other.coeffs.iter().enumerate() {
                out[k + m] += a * b;
            }
        }
        RegPoly { coeffs: out }.trimmed(trim_tol)
    }

    /// `f^c = Σ qⁿ āₙ`.
    pub fn regular_conjugate(&self) -> RegPoly {
        RegPoly {
            coeffs: self.coeffs.iter().map(Quaternion::conj).collect(),
        }
    }

    /// `f^s = f * f^c`. The coefficients are real up to rounding; they are
    /// returned unprojected so callers can check that.
    pub fn symmetrization(&self) -> RegPoly {
        self.star_mul(&self.regular_conjugate())
    }

    /// Real coefficients of `f^s`, after checking that the imaginary parts
    /// vanish.
    pub fn symmetrization_real(&self) -> Result<Vec<f64>> {
        let s = self.symmetrization();
        let tol = SYMMETRIZATION_IMAG_TOL * (1.0 + s.coeff_scale());
        let worst = s
            .coeffs
            .iter()
            .map(Quaternion::imag_norm)
            .fold(0.0, f64::max);
        if worst > tol {
            return Err(Error::InternalInconsistency(format!(
                "symmetrization has a coefficient with imaginary part {worst:e}"
            )));
        }
        Ok(s.coeffs.iter().map(|a| a.w).collect())
    }

    /// Threshold below which `|f(q)|` is treated as zero in
    /// [`pointwise_product_formula`].
    pub fn vanish_threshold(&self) -> f64 {
        VANISH_TOL * (1.0 + self.coeff_scale())
    }

    pub fn scale(&self, s: Quaternion) -> RegPoly {
        RegPoly {
            coeffs: self.coeffs.iter().map(|&a| a * s).collect(),
        }
        .trimmed(0.0)
    }

    /// Largest coefficientwise distance between two polynomials.
    pub fn max_coeff_diff(&self, other: &RegPoly) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|i| self.coeff(i).max_abs_diff(&other.coeff(i)))
            .fold(0.0, f64::max)
    }
}

/// Evaluates `f*g` at `q` without forming the product: zero when `f(q)`
/// vanishes, `f(q) · g(f(q)⁻¹ q f(q))` otherwise.
pub fn pointwise_product_formula(f: &RegPoly, g: &RegPoly, q: Quaternion) -> Quaternion {
    let fq = f.eval(q);
    if fq.norm() < f.vanish_threshold() {
        return Quaternion::ZERO;
    }
    match fq.conjugate_by(q) {
        Ok(t) => fq * g.eval(t),
        Err(_) => Quaternion::ZERO,
    }
}

impl Add for &RegPoly {
    type Output = RegPoly;
    fn add(self, rhs: &RegPoly) -> RegPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RegPoly {
            coeffs: (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect(),
        }
        .trimmed(TRIM_TOL)
    }
}

impl Sub for &RegPoly {
    type Output = RegPoly;
    fn sub(self, rhs: &RegPoly) -> RegPoly {
        self + &(-rhs)
    }
}

impl Neg for &RegPoly {
    type Output = RegPoly;
    fn neg(self) -> RegPoly {
        RegPoly {
            coeffs: self.coeffs.iter().map(|&a| -a).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const O: Quaternion = Quaternion::ZERO;
    const ONE: Quaternion = Quaternion::ONE;
    const I: Quaternion = Quaternion::I;
    const J: Quaternion = Quaternion::J;
    const K: Quaternion = Quaternion::K;

    fn q_minus(p: Quaternion) -> RegPoly {
        RegPoly::linear_factor(p)
    }

    // Direct power sum, independent of the Horner loop.
    fn naive_eval(f: &RegPoly, q: Quaternion) -> Quaternion {
        let mut power = ONE;
        let mut acc = O;
        for &a in f.coeffs() {
            acc += power * a;
            power *= q;
        }
        acc
    }

    #[test]
    fn normalization_and_degree() {
        let f = RegPoly::new(vec![ONE, O, O]);
        assert_eq!(f.degree(), Some(0));
        assert_eq!(RegPoly::new(vec![O]).degree(), None);
        assert!(RegPoly::zero().is_zero());
        let g = RegPoly::new(vec![ONE, Quaternion::real(1e-15)]);
        assert_eq!(g.degree(), Some(1));
        assert_eq!(g.trimmed(TRIM_TOL).degree(), Some(0));
    }

    #[test]
    fn eval_examples() {
        let f = RegPoly::from_real(&[1.0, 0.0, 1.0]);
        assert_eq!(f.eval(J), O);

        let f = RegPoly::new(vec![O, I]);
        assert_eq!(f.eval(J), -K);
        assert_eq!(naive_eval(&f, J), -K);

        let f = q_minus(I);
        assert_eq!(f.eval(I * 2.0), I);
    }

    #[test]
    fn eval_matches_power_sum() {
        let f = RegPoly::new(vec![
            Quaternion::new(0.5, -1.0, 0.2, 0.0),
            Quaternion::new(0.0, 0.3, 0.3, -0.9),
            Quaternion::new(1.0, 0.0, -0.4, 0.1),
            Quaternion::new(-0.7, 0.6, 0.0, 0.2),
        ]);
        let q = Quaternion::new(0.4, -0.8, 1.1, 0.3);
        assert!(f.eval(q).max_abs_diff(&naive_eval(&f, q)) < 1e-14);
    }

    #[test]
    fn star_mul_examples() {
        let p = q_minus(I).star_mul(&q_minus(J));
        assert_eq!(p.coeffs(), &[K, -(I + J), ONE]);

        let f = RegPoly::new(vec![I, J, K]);
        assert_eq!(f.star_mul(&RegPoly::constant(ONE)), f);

        let p = q_minus(I).star_mul(&q_minus(-I));
        assert_eq!(p, RegPoly::from_real(&[1.0, 0.0, 1.0]));

        assert!(f.star_mul(&RegPoly::zero()).is_zero());
    }

    #[test]
    fn star_mul_is_not_commutative() {
        let a = q_minus(I).star_mul(&q_minus(J));
        let b = q_minus(J).star_mul(&q_minus(I));
        assert!(a.max_coeff_diff(&b) > 1.0);
    }

    #[test]
    fn product_formula_examples() {
        let f = q_minus(I);
        let g = q_minus(J);
        let direct = f.star_mul(&g).eval(J);
        assert!(direct.max_abs_diff(&(K * 2.0)) < 1e-15);
        assert!(pointwise_product_formula(&f, &g, J).max_abs_diff(&(K * 2.0)) < 1e-15);

        let anything = RegPoly::new(vec![J, K, ONE, I]);
        assert_eq!(pointwise_product_formula(&f, &anything, I), O);

        let two = RegPoly::constant(Quaternion::real(2.0));
        let r = pointwise_product_formula(&two, &RegPoly::identity(), K);
        assert!(r.max_abs_diff(&(K * 2.0)) < 1e-15);
    }

    #[test]
    fn conjugate_examples() {
        let f = RegPoly::new(vec![ONE, I]);
        assert_eq!(f.regular_conjugate(), RegPoly::new(vec![ONE, -I]));
        let r = RegPoly::from_real(&[2.0, -1.0, 3.0]);
        assert_eq!(r.regular_conjugate(), r);
        assert_eq!(q_minus(I).regular_conjugate(), q_minus(-I));
        assert_eq!(f.regular_conjugate().regular_conjugate(), f);
    }

    #[test]
    fn symmetrization_examples() {
        assert_eq!(
            q_minus(I).symmetrization(),
            RegPoly::from_real(&[1.0, 0.0, 1.0])
        );

        let a = Quaternion::new(1.0, 2.0, -2.0, 4.0);
        assert_eq!(
            RegPoly::constant(a).symmetrization(),
            RegPoly::from_real(&[25.0])
        );

        let f = q_minus(I).star_mul(&q_minus(J));
        let expected = RegPoly::from_real(&[1.0, 0.0, 2.0, 0.0, 1.0]);
        let s = f.symmetrization();
        assert!(s.max_coeff_diff(&expected) < 1e-15, "{s:?}");
        assert_eq!(
            f.symmetrization_real().unwrap(),
            vec![1.0, 0.0, 2.0, 0.0, 1.0]
        );
    }

    #[test]
    fn json_format() {
        let f: RegPoly =
            serde_json::from_str(r#"{"coeffs":[[1,0,0,0],[0,0,0,0],[1,0,0,0]]}"#).unwrap();
        assert_eq!(f, RegPoly::from_real(&[1.0, 0.0, 1.0]));
        assert_eq!(
            serde_json::to_string(&RegPoly::identity()).unwrap(),
            r#"{"coeffs":[[0,0,0,0],[1,0,0,0]]}"#
        );
        assert!(serde_json::from_str::<RegPoly>(r#"{"coeffs":[[1,0,0]]}"#).is_err());
        assert!(serde_json::from_str::<RegPoly>(r#"{"coefs":[]}"#).is_err());
    }

    #[test]
    fn add_sub() {
        let f = RegPoly::new(vec![ONE, I]);
        let g = RegPoly::new(vec![J, -I]);
        assert_eq!(&f + &g, RegPoly::new(vec![ONE + J]));
        assert!((&f - &f).is_zero());
    }
}
