//! Dense complex polynomials with an explicit nominal degree.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used by coefficient comparisons unless a caller overrides it.
pub const COEFF_TOL: f64 = 1e-10;

/// A polynomial `sum coeffs[k] z^k` living in the space of degree at most `n`.
///
/// The nominal degree `n` is what `n_inverse`, the rotations and every class
/// test refer to. The exact degree can be smaller.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyJson", into = "PolyJson")]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    n: usize,
    coeffs: Vec<[f64; 2]>,
}

impl TryFrom<PolyJson> for Polynomial {
    type Error = Error;

    fn try_from(j: PolyJson) -> Result<Self> {
        if j.coeffs.len() != j.n + 1 {
            return Err(Error::Parse(format!(
                "expected {} coefficients for n = {}, got {}",
                j.n + 1,
                j.n,
                j.coeffs.len()
            )));
        }
        if j.coeffs.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Parse("non-finite coefficient".into()));
        }
        Ok(Polynomial {
            coeffs: j.coeffs.iter().map(|c| Complex64::new(c[0], c[1])).collect(),
        })
    }
}

impl From<Polynomial> for PolyJson {
    fn from(p: Polynomial) -> Self {
        PolyJson {
            n: p.nominal_degree(),
            coeffs: p.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        }
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial(n={}, {:?})", self.nominal_degree(), self.coeffs)
    }
}

impl Polynomial {
    /// Builds a polynomial of nominal degree `n`; `coeffs` must have length `n + 1`.
    pub fn new(n: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != n + 1 {
            return Err(Error::DegreeMismatch {
                left: n,
                right: coeffs.len().saturating_sub(1),
            });
        }
        Ok(Polynomial { coeffs })
    }

    /// Nominal degree is `coeffs.len() - 1`. Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a polynomial needs at least one coefficient");
        Polynomial { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zero(n: usize) -> Self {
        Polynomial {
            coeffs: vec![Complex64::new(0.0, 0.0); n + 1],
        }
    }

    /// `c z^k` in the space of nominal degree `n`.
    pub fn monomial(n: usize, k: usize, c: Complex64) -> Self {
        assert!(k <= n);
        let mut p = Self::zero(n);
        p.coeffs[k] = c;
        p
    }

    /// `lead * prod (z - r)`, nominal degree = number of roots.
    pub fn from_roots(roots: &[Complex64], lead: Complex64) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); roots.len() + 1];
        c[0] = lead;
        for (i, &r) in roots.iter().enumerate() {
            for k in (1..=i + 1).rev() {
                c[k] = c[k - 1] - r * c[k];
            }
            c[0] = -r * c[0];
        }
        Polynomial { coeffs: c }
    }

    pub fn nominal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    /// Largest `k` with a nonzero coefficient, `None` for the zero polynomial.
    pub fn exact_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.norm() > 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.exact_degree().is_none()
    }

    pub fn max_modulus(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn evaluate(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Coefficientwise derivative; nominal degree drops by one (stays 0 for constants).
    pub fn derivative(&self) -> Self {
        let n = self.nominal_degree();
        if n == 0 {
            return Self::zero(0);
        }
        Polynomial {
            coeffs: (1..=n).map(|k| self.coeffs[k] * k as f64).collect(),
        }
    }

    /// `z^n conj(p(1/conj z))`: coefficient `k` becomes `conj(coeffs[n - k])`.
    pub fn n_inverse(&self) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().rev().map(|c| c.conj()).collect(),
        }
    }

    /// `p(cz)`.
    pub fn scale_argument(&self, c: Complex64) -> Self {
        let mut w = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&a| {
                let out = a * w;
                w *= c;
                out
            })
            .collect();
        Polynomial { coeffs }
    }

    /// `p(e^{i theta} z)`, with exact per-coefficient phases `e^{i k theta}`.
    pub fn rotate(&self, theta: f64) -> Self {
        Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, &a)| a * Complex64::from_polar(1.0, k as f64 * theta))
                .collect(),
        }
    }

    /// `F_+(z) = F(e^{i lambda/2} z)`.
    pub fn rotate_plus(&self, lp: &LambdaParam) -> Self {
        self.rotate(lp.lambda() / 2.0)
    }

    /// `F_-(z) = F(e^{-i lambda/2} z)`.
    pub fn rotate_minus(&self, lp: &LambdaParam) -> Self {
        self.rotate(-lp.lambda() / 2.0)
    }

    pub fn hadamard(&self, other: &Self) -> Result<Self> {
        self.check_same_degree(other)?;
        Ok(Polynomial {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Polynomial {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial {
            coeffs: (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial {
            coeffs: (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect(),
        }
    }

    /// Product; nominal degrees add.
    pub fn mul(&self, other: &Self) -> Self {
        let mut c = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Polynomial { coeffs: c }
    }

    /// Re-embeds into nominal degree `m`. Fails if a nonzero coefficient would be dropped.
    pub fn with_nominal_degree(&self, m: usize) -> Result<Self> {
        if let Some(d) = self.exact_degree() {
            if d > m {
                return Err(Error::DegreeMismatch { left: d, right: m });
            }
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(m + 1, Complex64::new(0.0, 0.0));
        Ok(Polynomial { coeffs })
    }

    /// Max coefficient difference divided by the larger max modulus (0 for two zero polys).
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let len = self.coeffs.len().max(other.coeffs.len());
        let diff = (0..len)
            .map(|k| (self.coeff(k) - other.coeff(k)).norm())
            .fold(0.0, f64::max);
        let scale = self.max_modulus().max(other.max_modulus());
        if scale == 0.0 {
            diff
        } else {
            diff / scale
        }
    }

    /// The unimodular `c` with `arg c` in `[0, pi)` such that `n_inverse(p) = c^2 p`.
    ///
    /// Equivalently `c p` is n-self-inversive.
    pub fn self_inversive_phase(&self, tol: f64) -> Result<Complex64> {
        let n = self.nominal_degree();
        let scale = self.max_modulus();
        if scale == 0.0 {
            return Err(Error::ZeroPolynomial);
        }
        let anchor = (0..=n)
            .max_by(|&i, &j| self.coeffs[i].norm().total_cmp(&self.coeffs[j].norm()))
            .unwrap_or(0);
        let c2 = self.coeffs[n - anchor].conj() / self.coeffs[anchor];
        if (c2.norm() - 1.0).abs() > tol {
            return Err(Error::NotSymmetric);
        }
        let c2 = c2 / c2.norm();
        for k in 0..=n {
            let lhs = self.coeffs[n - k].conj();
            let rhs = c2 * self.coeffs[k];
            if (lhs - rhs).norm() > tol * scale {
                return Err(Error::NotSymmetric);
            }
        }
        let mut arg = c2.arg() / 2.0;
        if arg < 0.0 {
            arg += PI;
        }
        if arg >= PI {
            arg -= PI;
        }
        Ok(Complex64::from_polar(1.0, arg))
    }

    fn check_same_degree(&self, other: &Self) -> Result<()> {
        if self.nominal_degree() != other.nominal_degree() {
            return Err(Error::DegreeMismatch {
                left: self.nominal_degree(),
                right: other.nominal_degree(),
            });
        }
        Ok(())
    }
}

/// Validated pair `(n, lambda)` with `0 <= lambda <= 2 pi / n`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaParam {
    n: usize,
    lambda: f64,
}

impl LambdaParam {
    pub fn new(n: usize, lambda: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::OutOfRange("n must be at least 1".into()));
        }
        let max = Self::max_for(n);
        if !lambda.is_finite() || lambda < 0.0 || lambda > max * (1.0 + 4.0 * f64::EPSILON) {
            return Err(Error::OutOfRange(format!(
                "lambda = {lambda} not in [0, 2pi/{n}]"
            )));
        }
        Ok(LambdaParam {
            n,
            lambda: lambda.min(max),
        })
    }

    /// `2 pi / n`.
    pub fn max_for(n: usize) -> f64 {
        2.0 * PI / n as f64
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn is_zero(&self) -> bool {
        self.lambda == 0.0
    }

    pub fn is_maximal(&self) -> bool {
        self.lambda >= Self::max_for(self.n) * (1.0 - 4.0 * f64::EPSILON)
    }

    /// Errors unless `lambda < 2 pi / n`.
    pub fn require_half_open(&self) -> Result<()> {
        if self.is_maximal() {
            return Err(Error::OutOfRange(format!(
                "lambda = 2pi/{} is excluded here",
                self.n
            )));
        }
        Ok(())
    }

    /// Errors unless `0 < lambda < 2 pi / n`.
    pub fn require_open(&self) -> Result<()> {
        if self.is_zero() {
            return Err(Error::OutOfRange("lambda = 0 is excluded here".into()));
        }
        self.require_half_open()
    }

    /// Same lambda for a different degree, e.g. `n - 1` for the difference operator.
    pub fn with_n(&self, n: usize) -> Result<Self> {
        Self::new(n, self.lambda)
    }
}
