//! The weights `C_k^(n)(lambda)`, the extremal polynomial `Q_n(lambda; z)` and the
//! convolutions built on them.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{LambdaParam, Polynomial};

/// `C_0 .. C_n` for a fixed `(n, lambda)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QCoefficientTable {
    pub n: usize,
    pub lambda: f64,
    pub values: Vec<f64>,
}

impl QCoefficientTable {
    pub fn new(lp: &LambdaParam) -> Self {
        let n = lp.n();
        let values = (0..=n).map(|k| coefficient_unchecked(n, k, lp)).collect();
        QCoefficientTable {
            n,
            lambda: lp.lambda(),
            values,
        }
    }
}

type TableCache = RwLock<HashMap<(usize, u64), Arc<QCoefficientTable>>>;

fn cache() -> &'static TableCache {
    static CACHE: OnceLock<TableCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Cached table for `(n, lambda)`, keyed on the bit pattern of lambda.
pub fn table(lp: &LambdaParam) -> Arc<QCoefficientTable> {
    let key = (lp.n(), lp.lambda().to_bits());
    if let Some(t) = cache().read().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return Arc::clone(t);
    }
    let t = Arc::new(QCoefficientTable::new(lp));
    cache()
        .write()
        .unwrap_or_else(|e| e.into_inner())
        .entry(key)
        .or_insert(t)
        .clone()
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut b = 1u128;
    for j in 0..k {
        b = b * (n - j) as u128 / (j + 1) as u128;
    }
    b as f64
}

fn coefficient_unchecked(n: usize, k: usize, lp: &LambdaParam) -> f64 {
    if lp.is_zero() {
        return binomial(n, k);
    }
    if lp.is_maximal() {
        return if k == 0 || k == n { 1.0 } else { 0.0 };
    }
    let k = k.min(n - k);
    let half = lp.lambda() / 2.0;
    (1..=k).fold(1.0, |acc, j| {
        acc * ((n - k + j) as f64 * half).sin() / (j as f64 * half).sin()
    })
}

/// `C_k^(n)(lambda)`.
pub fn q_coefficient(n: usize, k: usize, lambda: f64) -> Result<f64> {
    let lp = LambdaParam::new(n, lambda)?;
    if k > n {
        return Err(Error::OutOfRange(format!("k = {k} > n = {n}")));
    }
    Ok(table(&lp).values[k])
}

fn product_expansion(n: usize, lambda: f64) -> Vec<Complex64> {
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for j in 1..=n {
        let w = Complex64::from_polar(1.0, (2 * j) as f64 * lambda / 2.0 - (n + 1) as f64 * lambda / 2.0);
        for k in (1..=j).rev() {
            c[k] = c[k] + w * c[k - 1];
        }
    }
    c
}

/// `Q_n(lambda; z) = prod_{j=1}^n (1 + e^{i(2j-n-1)lambda/2} z)`.
///
/// The product is expanded and compared with the coefficient table; the real
/// table values are returned.
pub fn q_extremal(n: usize, lambda: f64) -> Result<Polynomial> {
    let lp = LambdaParam::new(n, lambda)?;
    let t = table(&lp);
    let expanded = product_expansion(n, lp.lambda());
    let scale = t.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for (e, &v) in expanded.iter().zip(&t.values) {
        if (e - Complex64::new(v, 0.0)).norm() > 1e-12 * scale {
            return Err(Error::InternalInconsistency(format!(
                "Q_{n}({lambda}) expansion disagrees with its coefficient table"
            )));
        }
    }
    Ok(Polynomial::from_coeffs(
        t.values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
    ))
}

/// `R_n(q; z) = prod_{j=1}^n (1 + q^{j-1} z)`.
pub fn gauss_product(n: usize, q: Complex64) -> Polynomial {
    let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
    c[0] = Complex64::new(1.0, 0.0);
    let mut w = Complex64::new(1.0, 0.0);
    for j in 1..=n {
        for k in (1..=j).rev() {
            c[k] = c[k] + w * c[k - 1];
        }
        w *= q;
    }
    Polynomial::from_coeffs(c)
}

fn divide_weighted(f: &Polynomial, g: &Polynomial, weights: &[f64]) -> Result<Polynomial> {
    let h = f.hadamard(g)?;
    Ok(Polynomial::from_coeffs(
        h.coeffs().iter().zip(weights).map(|(c, w)| c / *w).collect(),
    ))
}

/// Grace–Szegő convolution: coefficient `k` is `f_k g_k / binom(n, k)`.
pub fn grace_szego(f: &Polynomial, g: &Polynomial) -> Result<Polynomial> {
    let n = f.nominal_degree();
    let weights: Vec<f64> = (0..=n).map(|k| binomial(n, k)).collect();
    divide_weighted(f, g, &weights)
}

/// Coefficient `k` is `f_k g_k / C_k^(n)(lambda)`; `lambda = 2pi/n` is rejected.
pub fn lambda_convolve(f: &Polynomial, g: &Polynomial, lp: &LambdaParam) -> Result<Polynomial> {
    check_degree(f, lp)?;
    lp.require_half_open()?;
    divide_weighted(f, g, &table(lp).values)
}

/// `Delta_lambda^n[F]`, nominal degree `n - 1`; `F'/n` at `lambda = 0`.
pub fn delta(f: &Polynomial, lp: &LambdaParam) -> Result<Polynomial> {
    check_degree(f, lp)?;
    lp.require_half_open()?;
    let n = lp.n();
    if lp.is_zero() {
        return Ok(f.derivative().scale(Complex64::new(1.0 / n as f64, 0.0)));
    }
    let half = lp.lambda() / 2.0;
    let denom = (n as f64 * half).sin();
    let coeffs = (1..=n)
        .map(|k| f.coeff(k) * ((k as f64 * half).sin() / denom))
        .collect();
    Ok(Polynomial::from_coeffs(coeffs))
}

/// `f * Q_n(lambda; .)`.
pub fn pre_lift(f: &Polynomial, lp: &LambdaParam) -> Result<Polynomial> {
    check_degree(f, lp)?;
    lp.require_half_open()?;
    let t = table(lp);
    Ok(Polynomial::from_coeffs(
        f.coeffs().iter().zip(&t.values).map(|(c, w)| c * *w).collect(),
    ))
}

/// Undo [`pre_lift`]: coefficient `k` divided by `C_k`.
pub fn pre_unlift(f: &Polynomial, lp: &LambdaParam) -> Result<Polynomial> {
    check_degree(f, lp)?;
    lp.require_half_open()?;
    let t = table(lp);
    Ok(Polynomial::from_coeffs(
        f.coeffs().iter().zip(&t.values).map(|(c, w)| c / *w).collect(),
    ))
}

fn check_degree(f: &Polynomial, lp: &LambdaParam) -> Result<()> {
    if f.nominal_degree() != lp.n() {
        return Err(Error::DegreeMismatch {
            left: f.nominal_degree(),
            right: lp.n(),
        });
    }
    Ok(())
}
