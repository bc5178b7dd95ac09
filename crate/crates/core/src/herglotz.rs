//! Approximating functions of positive real part on the disk by convex
//! combinations of Möbius kernels `(1 + w z) / (1 - w z)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{LambdaParam, Polynomial};

/// Tolerance on the unit-sum identity of the weights.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HerglotzApproximant {
    pub m: usize,
    pub weights: Vec<f64>,
    /// Kernel nodes; each is an `m`-th root of unity.
    pub nodes: Vec<Complex64>,
    /// The self-inversive polynomial of degree `m` the weights were read from.
    pub p: Polynomial,
}

impl HerglotzApproximant {
    /// Checks positivity and the unit sum of the weights.
    pub fn validate(&self) -> Result<()> {
        if self.m < 2 || self.m % 2 != 0 || self.weights.len() != self.m || self.nodes.len() != self.m {
            return Err(Error::BadParams(format!("m = {} with {} weights", self.m, self.weights.len())));
        }
        if let Some((j, &w)) = self.weights.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
            return Err(Error::PositivityLost {
                angle: 2.0 * PI * j as f64 / self.m as f64,
                value: w,
            });
        }
        let sum: f64 = self.weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InternalInconsistency(format!("weights sum to {sum}")));
        }
        Ok(())
    }

    pub fn weight_sum(&self) -> f64 {
        self.weights.iter().sum()
    }
}

/// Coefficients of `S_k(r z) + z^k (S_k(r z))^{*k}`, degree `2k`.
pub fn self_inversive_extension(coeffs: &[Complex64], k: usize, r: f64) -> Result<Polynomial> {
    if coeffs.len() < k + 1 {
        return Err(Error::BadParams(format!("need {} coefficients, got {}", k + 1, coeffs.len())));
    }
    let mut s = Vec::with_capacity(k + 1);
    let mut rj = 1.0;
    for c in &coeffs[..=k] {
        s.push(c * rj);
        rj *= r;
    }
    let mut p = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
    for j in 0..=k {
        p[j] += s[j];
        p[2 * k - j] += s[j].conj();
    }
    Ok(Polynomial::from_coeffs(p))
}

pub fn build_approximant(coeffs: &[Complex64], k: usize, r: f64) -> Result<HerglotzApproximant> {
    if k == 0 {
        return Err(Error::BadParams("k must be positive".into()));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::OutOfRange(format!("r = {r} not in (0,1)")));
    }
    if coeffs.is_empty() || (coeffs[0] - 1.0).norm() > 1e-12 {
        return Err(Error::HypothesisViolated("the constant coefficient must be 1".into()));
    }
    let p = self_inversive_extension(coeffs, k, r)?;
    let m = 2 * k;

    // at the nodes P = 2 Re S_k(r z); S_k itself is checked on a grid four times finer
    let partial = Polynomial::from_coeffs(p.coeffs()[..=k].to_vec());
    let fine = 4 * m;
    for j in 0..fine {
        let angle = 2.0 * PI * j as f64 / fine as f64;
        let value = partial.evaluate(Complex64::from_polar(1.0, angle)).re;
        if !(value > 0.0) {
            return Err(Error::PositivityLost { angle, value });
        }
    }

    let mut weights = Vec::with_capacity(m);
    let mut nodes = Vec::with_capacity(m);
    for j in 0..m {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64);
        weights.push(p.evaluate(w).re / (2 * m) as f64);
        // pairing P(w) with the kernel at conj(w) reproduces the Taylor coefficients
        nodes.push(w.conj());
    }
    let h = HerglotzApproximant { m, weights, nodes, p };
    h.validate()?;
    Ok(h)
}

pub fn evaluate_approximant(h: &HerglotzApproximant, z: Complex64) -> Result<Complex64> {
    if !(z.norm() < 1.0) {
        return Err(Error::OutOfDomain);
    }
    Ok(h
        .weights
        .iter()
        .zip(&h.nodes)
        .map(|(s, w)| *s * (1.0 + w * z) / (1.0 - w * z))
        .sum())
}

/// `(k, r) = (2^j, 1 - 2^{-j/2})` for `j = 1..=steps`.
pub fn default_schedule(steps: usize) -> Vec<(usize, f64)> {
    (1..=steps)
        .map(|j| (1usize << j, 1.0 - 2f64.powf(-(j as f64) / 2.0)))
        .collect()
}

/// Largest `|f(z) - h(z)|` over the disk of the given radius, sampled on
/// `rings` concentric circles of `per_ring` points each.
pub fn sup_error<F>(h: &HerglotzApproximant, f: F, radius: f64, rings: usize, per_ring: usize) -> Result<f64>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut worst: f64 = 0.0;
    for i in 0..=rings {
        let rho = radius * i as f64 / rings.max(1) as f64;
        for j in 0..per_ring.max(1) {
            let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / per_ring.max(1) as f64);
            worst = worst.max((f(z) - evaluate_approximant(h, z)?).norm());
        }
    }
    Ok(worst)
}

/// Checks `Re (p^{*n}(z) - conj(a_0) z^n) / (1 - conj(a_0) z^n) > 1/2` on the
/// circle of radius `1 - 1/grid`, sampled at `grid` points.
pub fn disk_limit_check(p: &Polynomial, lp: &LambdaParam, grid: usize) -> Result<bool> {
    let n = p.nominal_degree();
    if lp.n() != n {
        return Err(Error::DegreeMismatch { left: n, right: lp.n() });
    }
    if (p.coeff(n) - 1.0).norm() > 1e-12 {
        return Err(Error::HypothesisViolated("the leading coefficient must be 1".into()));
    }
    let grid = grid.max(8);
    let rho = 1.0 - 1.0 / grid as f64;
    let inv = p.n_inverse();
    let a0c = p.coeff(0).conj();
    Ok((0..grid).all(|j| {
        let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / grid as f64);
        let zn = z.powu(n as u32);
        ((inv.evaluate(z) - a0c * zn) / (1.0 - a0c * zn)).re > 0.5
    }))
}
