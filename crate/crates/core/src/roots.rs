//! Aberth–Ehrlich root finding with multiplicity clustering and unit-circle tags.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;

const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
const LEADING_TRIM: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootOptions {
    pub max_iter: usize,
    /// Largest accepted backward error `|p(z)| / sum |a_k| |z|^k`.
    pub tol: f64,
    pub circle_tol: f64,
    pub cluster_tol: f64,
}

impl Default for RootOptions {
    fn default() -> Self {
        RootOptions {
            max_iter: 1000,
            tol: 1e-10,
            circle_tol: 1e-7,
            cluster_tol: 1e-13,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum CircleTag {
    Inside,
    On,
    Outside,
}

impl CircleTag {
    pub fn classify(z: Complex64, circle_tol: f64) -> Self {
        let r = z.norm();
        if (r - 1.0).abs() <= circle_tol {
            CircleTag::On
        } else if r < 1.0 {
            CircleTag::Inside
        } else {
            CircleTag::Outside
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CircleTag::Inside => "INSIDE",
            CircleTag::On => "ON",
            CircleTag::Outside => "OUTSIDE",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Root {
    pub location: Complex64,
    pub multiplicity: usize,
    pub tag: CircleTag,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<Root>,
    /// Max backward error over simple roots.
    pub residual: f64,
    pub circle_tol: f64,
}

impl RootSet {
    /// Sum of multiplicities.
    pub fn degree(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn count(&self, tag: CircleTag) -> usize {
        self.roots
            .iter()
            .filter(|r| r.tag == tag)
            .map(|r| r.multiplicity)
            .sum()
    }

    pub fn all(&self, tag: CircleTag) -> bool {
        self.roots.iter().all(|r| r.tag == tag)
    }

    pub fn first(&self, tag: CircleTag) -> Option<&Root> {
        self.roots.iter().find(|r| r.tag == tag)
    }

    pub fn max_modulus(&self) -> f64 {
        self.roots.iter().map(|r| r.location.norm()).fold(0.0, f64::max)
    }

    /// Smallest `||z| - 1|` over all roots, infinity for an empty set.
    pub fn min_circle_distance(&self) -> f64 {
        self.roots
            .iter()
            .map(|r| (r.location.norm() - 1.0).abs())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_simple(&self) -> bool {
        self.roots.iter().all(|r| r.multiplicity == 1)
    }

    fn require_on_circle(&self) -> Result<()> {
        match self.roots.iter().find(|r| r.tag != CircleTag::On) {
            Some(r) => Err(Error::NotOnCircle {
                re: r.location.re,
                im: r.location.im,
            }),
            None => Ok(()),
        }
    }

    /// Arguments in `[0, 2pi)` with multiplicity, sorted. Roots must all be ON.
    pub fn arguments(&self) -> Result<Vec<f64>> {
        self.require_on_circle()?;
        let mut a: Vec<f64> = self
            .roots
            .iter()
            .flat_map(|r| std::iter::repeat(r.location.arg().rem_euclid(2.0 * PI)).take(r.multiplicity))
            .collect();
        a.sort_by(f64::total_cmp);
        Ok(a)
    }

    /// Minimum circular gap between consecutive root arguments.
    pub fn arg_separation(&self) -> Result<f64> {
        let a = self.arguments()?;
        if self.roots.iter().any(|r| r.multiplicity > 1) {
            return Ok(0.0);
        }
        Ok(circular_gaps(&a).into_iter().fold(f64::INFINITY, f64::min))
    }
}

fn circular_gaps(sorted: &[f64]) -> Vec<f64> {
    let m = sorted.len();
    if m == 0 {
        return vec![];
    }
    (0..m)
        .map(|i| {
            if i + 1 < m {
                sorted[i + 1] - sorted[i]
            } else {
                sorted[0] + 2.0 * PI - sorted[m - 1]
            }
        })
        .collect()
}

/// Value, derivative-ratio and backward error of a monic-free coefficient vector at `z`.
struct Eval {
    /// `p(z) / p'(z)`, or `None` if `p(z) = 0` exactly.
    newton: Option<Complex64>,
    backward: f64,
}

fn horner_with_derivative(c: &[Complex64], z: Complex64) -> (Complex64, Complex64, f64) {
    let az = z.norm();
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut s = 0.0;
    for &a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        s = s * az + a.norm();
    }
    (p, dp, s)
}

fn eval(c: &[Complex64], z: Complex64) -> Eval {
    let d = c.len() - 1;
    if z.norm() <= 1.0 {
        let (p, dp, s) = horner_with_derivative(c, z);
        let backward = if s > 0.0 { p.norm() / s } else { 0.0 };
        if p.norm() == 0.0 {
            return Eval { newton: None, backward };
        }
        Eval {
            newton: Some(p / dp),
            backward,
        }
    } else {
        // p(z) = z^d r(1/z) with r the reversed polynomial
        let y = z.inv();
        let rev: Vec<Complex64> = c.iter().rev().copied().collect();
        let (r, dr, s) = horner_with_derivative(&rev, y);
        let backward = if s > 0.0 { r.norm() / s } else { 0.0 };
        if r.norm() == 0.0 {
            return Eval { newton: None, backward };
        }
        Eval {
            newton: Some(z * r / (r * d as f64 - y * dr)),
            backward,
        }
    }
}

fn backward_error(c: &[Complex64], z: Complex64) -> f64 {
    eval(c, z).backward
}

/// Taylor coefficient `p^(m)(c) / m!` by repeated synthetic division.
fn taylor_coefficient(c: &[Complex64], at: Complex64, m: usize) -> Complex64 {
    let mut b = c.to_vec();
    let mut out = Complex64::new(0.0, 0.0);
    for step in 0..=m {
        let len = b.len();
        if len == 0 {
            return Complex64::new(0.0, 0.0);
        }
        let mut q = vec![Complex64::new(0.0, 0.0); len.saturating_sub(1)];
        let mut acc = Complex64::new(0.0, 0.0);
        for i in (0..len).rev() {
            acc = acc * at + b[i];
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        if step == m {
            out = acc;
        }
        b = q;
    }
    out
}

fn aberth(c: &[Complex64], opts: &RootOptions) -> Result<Vec<Complex64>> {
    let d = c.len() - 1;
    if d == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    let radius = (c[0].norm() / c[d].norm()).powf(1.0 / d as f64);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, (2.0 * PI * k as f64 + GOLDEN_ANGLE) / d as f64))
        .collect();
    let mut done = vec![false; d];
    for _ in 0..opts.max_iter {
        if done.iter().all(|&x| x) {
            break;
        }
        for i in 0..d {
            if done[i] {
                continue;
            }
            let e = eval(c, z[i]);
            let Some(ratio) = e.newton else {
                done[i] = true;
                continue;
            };
            if e.backward <= 4.0 * f64::EPSILON {
                done[i] = true;
                continue;
            }
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| (z[i] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if !w.re.is_finite() || !w.im.is_finite() {
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            }
        }
    }
    let worst = z.iter().map(|&r| backward_error(c, r)).fold(0.0, f64::max);
    if !(worst <= opts.tol) {
        return Err(Error::NoConvergence { residual: worst });
    }
    Ok(z)
}

fn cluster(c: &[Complex64], z: &[Complex64], opts: &RootOptions) -> Vec<(Complex64, usize)> {
    let d = z.len();
    let mut used = vec![false; d];
    let mut out = Vec::new();
    for i in 0..d {
        if used[i] {
            continue;
        }
        let mut near: Vec<usize> = (0..d).filter(|&j| !used[j] && j != i).collect();
        near.sort_by(|&a, &b| (z[a] - z[i]).norm().total_cmp(&(z[b] - z[i]).norm()));
        let mut chosen = vec![i];
        for m in (2..=near.len() + 1).rev() {
            let members: Vec<usize> = std::iter::once(i).chain(near[..m - 1].iter().copied()).collect();
            let centre: Complex64 = members.iter().map(|&j| z[j]).sum::<Complex64>() / m as f64;
            let spread = members.iter().map(|&j| (z[j] - centre).norm()).fold(0.0, f64::max);
            let t = taylor_coefficient(c, centre, m).norm();
            if t == 0.0 {
                continue;
            }
            let az = centre.norm();
            let s: f64 = c.iter().rev().fold(0.0, |acc, a| acc * az + a.norm());
            let radius = (opts.cluster_tol * s / t).powf(1.0 / m as f64);
            // a genuine cluster also leaves a near-zero value at its centre
            if spread <= radius && backward_error(c, centre) <= 100.0 * opts.cluster_tol {
                chosen = members;
                break;
            }
        }
        for &j in &chosen {
            used[j] = true;
        }
        let m = chosen.len();
        let mut centre = chosen.iter().map(|&j| z[j]).sum::<Complex64>() / m as f64;
        if m > 1 {
            centre = refine_multiple(c, centre, m);
        }
        out.push((centre, m));
    }
    out
}

/// Newton on `p^(m-1)`, which has a simple zero at an m-fold zero of `p`.
fn refine_multiple(c: &[Complex64], mut z: Complex64, m: usize) -> Complex64 {
    for _ in 0..8 {
        let lo = taylor_coefficient(c, z, m - 1);
        let hi = taylor_coefficient(c, z, m);
        if hi.norm() == 0.0 {
            break;
        }
        let step = lo / (hi * m as f64);
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        z -= step;
        if step.norm() <= 4.0 * f64::EPSILON * z.norm().max(1.0) {
            break;
        }
    }
    z
}

fn polish(c: &[Complex64], z: Complex64) -> Complex64 {
    let before = backward_error(c, z);
    let e = eval(c, z);
    match e.newton {
        Some(step) if step.re.is_finite() && step.im.is_finite() => {
            let cand = z - step;
            if backward_error(c, cand) <= before {
                cand
            } else {
                z
            }
        }
        _ => z,
    }
}

/// All roots of `p` with multiplicities, tagged against the unit circle.
pub fn find_roots(p: &Polynomial, opts: &RootOptions) -> Result<RootSet> {
    let scale = p.max_modulus();
    if scale == 0.0 {
        return Err(Error::ZeroPolynomial);
    }
    let mut c: Vec<Complex64> = p.coeffs().to_vec();
    while c.len() > 1 && c[c.len() - 1].norm() <= LEADING_TRIM * scale {
        c.pop();
    }
    let zeros = c.iter().position(|a| a.norm() > 0.0).unwrap_or(0);
    let reduced = &c[zeros..];
    let mut roots = Vec::new();
    if zeros > 0 {
        roots.push(Root {
            location: Complex64::new(0.0, 0.0),
            multiplicity: zeros,
            tag: CircleTag::Inside,
        });
    }
    let mut residual: f64 = 0.0;
    if reduced.len() > 1 {
        let approx = aberth(reduced, opts)?;
        for (loc, m) in cluster(reduced, &approx, opts) {
            let loc = if m == 1 { polish(reduced, loc) } else { loc };
            if m == 1 {
                residual = residual.max(backward_error(reduced, loc));
            }
            roots.push(Root {
                location: loc,
                multiplicity: m,
                tag: CircleTag::classify(loc, opts.circle_tol),
            });
        }
    }
    Ok(RootSet {
        roots,
        residual,
        circle_tol: opts.circle_tol,
    })
}

/// Whether the zeros of `p` and `q` (all on the circle) alternate.
///
/// Closed variant allows shared zeros; `strict` forbids them.
pub fn interspersed(p: &Polynomial, q: &Polynomial, strict: bool, opts: &RootOptions) -> Result<bool> {
    let a = find_roots(p, opts)?.arguments()?;
    let b = find_roots(q, opts)?.arguments()?;
    Ok(alternate(&a, &b, strict, opts.circle_tol))
}

fn alternate(a: &[f64], b: &[f64], strict: bool, tol: f64) -> bool {
    let m = a.len();
    if m != b.len() || m == 0 {
        return false;
    }
    (0..m).any(|shift| {
        (0..m).all(|i| {
            let lo = a[i];
            let hi = if i + 1 < m { a[i + 1] } else { a[0] + 2.0 * PI };
            let mut x = b[(i + shift) % m];
            while x < lo - tol {
                x += 2.0 * PI;
            }
            while x > lo + 2.0 * PI - tol {
                x -= 2.0 * PI;
            }
            if strict {
                x > lo + tol && x < hi - tol
            } else {
                x >= lo - tol && x <= hi + tol
            }
        })
    })
}
