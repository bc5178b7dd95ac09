use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::classes::{extremal_family, in_d_third, ClassOptions};
use crate::error::{Error, Result};
use crate::poly::{LambdaParam, Polynomial};
use crate::qconv::q_extremal;

const REJECTION_BUDGET: usize = 200;

fn unimodular<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

/// Polynomial with all zeros on the circle and consecutive zero gaps at least
/// `lambda` (strictly larger when `strict`), scaled by a random unimodular constant.
pub fn sample_t<R: Rng + ?Sized>(n: usize, lambda: f64, strict: bool, rng: &mut R) -> Result<Polynomial> {
    let lp = LambdaParam::new(n, lambda)?;
    if strict {
        lp.require_half_open()?;
    }
    let max = LambdaParam::max_for(n);
    let lam = lp.lambda();
    let floor = if strict { lam + 0.1 * (max - lam) } else { lam };
    let spare = (2.0 * PI - n as f64 * floor).max(0.0);
    let theta0 = rng.gen_range(0.0..2.0 * PI);
    let lead = unimodular(rng);
    if spare == 0.0 {
        // equally spaced zeros: lead * (z^n - e^{i n theta0})
        let mut p = Polynomial::monomial(n, n, lead);
        let c0 = -lead * Complex64::from_polar(1.0, n as f64 * theta0);
        p = p.add(&Polynomial::monomial(n, 0, c0));
        return Ok(p);
    }
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = e.iter().sum();
    let mut angle = theta0;
    let mut roots = Vec::with_capacity(n);
    for g in &e {
        roots.push(Complex64::from_polar(1.0, angle));
        angle += floor + spare * g / total;
    }
    Ok(Polynomial::from_roots(&roots, lead))
}

/// Self-inversive polynomial with `n` independent uniform zeros on the circle.
pub fn sample_st<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Polynomial {
    let roots: Vec<Complex64> = (0..n).map(|_| unimodular(rng)).collect();
    Polynomial::from_roots(&roots, unimodular(rng))
}

/// Polynomial of degree `n` with zeros uniform in the unit disk. When `closed`,
/// each zero lands on the circle with probability 1/4.
pub fn sample_disk<R: Rng + ?Sized>(n: usize, closed: bool, rng: &mut R) -> Polynomial {
    let roots: Vec<Complex64> = (0..n)
        .map(|_| {
            let rho = if closed && rng.gen_bool(0.25) {
                1.0
            } else {
                0.999 * rng.gen::<f64>().sqrt()
            };
            Complex64::from_polar(rho, rng.gen_range(0.0..2.0 * PI))
        })
        .collect();
    Polynomial::from_roots(&roots, unimodular(rng) * rng.gen_range(0.5..2.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DStrategy {
    /// `F(rz)` with `F` in the closed T class and `r > 1`.
    ScaledT,
    /// `P - Q_n` from the explicit closed-class family; closed class only.
    Extremal,
    /// Random zeros in the disk accepted by the third characterization.
    Rejection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledD {
    pub poly: Polynomial,
    pub strategy: DStrategy,
}

pub fn sample_d_with<R: Rng + ?Sized>(
    n: usize,
    lambda: f64,
    strategy: DStrategy,
    opts: &ClassOptions,
    rng: &mut R,
) -> Result<Polynomial> {
    let lp = LambdaParam::new(n, lambda)?;
    lp.require_open()?;
    match strategy {
        DStrategy::ScaledT => {
            let f = sample_t(n, lambda, false, rng)?;
            Ok(f.scale_argument(Complex64::new(rng.gen_range(1.02..2.0), 0.0)))
        }
        DStrategy::Extremal => {
            let psi = rng.gen_range(0.1..PI - 0.1) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let c = Complex64::from_polar(1.0, psi);
            let a = -psi.signum() * rng.gen_range(0.2..2.0);
            let b = rng.gen_range(-2.0..2.0);
            let p = extremal_family(n, lambda, a, b, c)?;
            Ok(p.sub(&q_extremal(n, lambda)?))
        }
        DStrategy::Rejection => {
            for _ in 0..REJECTION_BUDGET {
                let reach = rng.gen_range(0.05..1.0);
                let roots: Vec<Complex64> = (0..n)
                    .map(|_| Complex64::from_polar(reach * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI)))
                    .collect();
                let f = Polynomial::from_roots(&roots, unimodular(rng));
                let v = in_d_third(&f, &lp, false, opts)?;
                if v.member && !v.indeterminate {
                    return Ok(f);
                }
            }
            Err(Error::SamplerExhausted)
        }
    }
}

/// Draws a member of the closed D class (any strategy) or, with `open_only`,
/// of the open class (no extremal-family draws). An exhausted rejection budget
/// falls back to the scaled strategy.
pub fn sample_d<R: Rng + ?Sized>(
    n: usize,
    lambda: f64,
    open_only: bool,
    opts: &ClassOptions,
    rng: &mut R,
) -> Result<SampledD> {
    let choices: &[DStrategy] = if open_only {
        &[DStrategy::ScaledT, DStrategy::Rejection]
    } else {
        &[DStrategy::ScaledT, DStrategy::Extremal, DStrategy::Rejection]
    };
    let strategy = choices[rng.gen_range(0..choices.len())];
    match sample_d_with(n, lambda, strategy, opts, rng) {
        Ok(poly) => Ok(SampledD { poly, strategy }),
        Err(Error::SamplerExhausted) => Ok(SampledD {
            poly: sample_d_with(n, lambda, DStrategy::ScaledT, opts, rng)?,
            strategy: DStrategy::ScaledT,
        }),
        Err(e) => Err(e),
    }
}
