//! Membership tests for the separation classes and their disk extensions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{LambdaParam, Polynomial, COEFF_TOL};
use crate::qconv::{delta, pre_lift, q_extremal};
use crate::roots::{find_roots, interspersed, CircleTag, RootOptions, RootSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassLabel {
    TClosed,
    TOpen,
    DClosed,
    DOpen,
    PtClosed,
    PtOpen,
    PdClosed,
    PdOpen,
    PiOfDomain,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Definition,
    FirstCharSampled,
    SecondCharGrid,
    ThirdChar,
    GridOracle,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Root { location: Complex64, multiplicity: usize },
    DegreeDeficit { exact: Option<usize>, nominal: usize },
    Separation { gap: f64 },
    Zeta { zeta: Complex64, gap: f64 },
    OddRootOfT { location: Complex64, multiplicity: usize },
    RootOfT { location: Complex64 },
    Theta { theta: f64, max_modulus: f64 },
    GridPoint { z: Complex64, value: f64 },
    Coefficient { k: usize, value: Complex64 },
    EmptyClass,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipVerdict {
    pub class: ClassLabel,
    pub member: bool,
    pub method: Method,
    /// Slack in the decisive inequality; never negative for members.
    pub margin: f64,
    pub witness: Option<Witness>,
    /// Set when the instance sits within `margin_tol` of the class boundary or
    /// two internal checks disagree.
    pub indeterminate: bool,
}

impl MembershipVerdict {
    fn new(class: ClassLabel, method: Method, member: bool, raw_margin: f64) -> Self {
        MembershipVerdict {
            class,
            member,
            method,
            margin: if member { raw_margin.max(0.0) } else { raw_margin },
            witness: None,
            indeterminate: false,
        }
    }

    fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    fn relabel(mut self, class: ClassLabel, method: Method) -> Self {
        self.class = class;
        self.method = method;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassOptions {
    pub roots: RootOptions,
    pub coeff_tol: f64,
    /// Distance from a class boundary below which a verdict is flagged indeterminate.
    pub margin_tol: f64,
    /// Tolerance on angular separations.
    pub sep_tol: f64,
    pub zeta_count: usize,
    pub x_grid: usize,
    pub boundary_samples: usize,
    pub exterior_radii: usize,
    pub oracle_tol: f64,
}

impl Default for ClassOptions {
    fn default() -> Self {
        ClassOptions {
            roots: RootOptions::default(),
            coeff_tol: COEFF_TOL,
            margin_tol: 1e-6,
            sep_tol: 1e-9,
            zeta_count: 64,
            x_grid: 181,
            boundary_samples: 256,
            exterior_radii: 64,
            oracle_tol: 1e-9,
        }
    }
}

fn check_nominal(p: &Polynomial, lp: &LambdaParam) -> Result<()> {
    if p.nominal_degree() != lp.n() {
        return Err(Error::DegreeMismatch {
            left: p.nominal_degree(),
            right: lp.n(),
        });
    }
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(())
}

fn root_witness(rs: &RootSet, tag: CircleTag) -> Option<Witness> {
    rs.first(tag).map(|r| Witness::Root {
        location: r.location,
        multiplicity: r.multiplicity,
    })
}

fn off_circle(rs: &RootSet) -> Option<&crate::roots::Root> {
    rs.roots
        .iter()
        .filter(|r| r.tag != CircleTag::On)
        .min_by(|a, b| {
            (a.location.norm() - 1.0)
                .abs()
                .total_cmp(&(b.location.norm() - 1.0).abs())
        })
}

/// Membership in the closed (`closed = true`) or open separation class.
pub fn in_t(p: &Polynomial, lp: &LambdaParam, closed: bool, opts: &ClassOptions) -> Result<MembershipVerdict> {
    check_nominal(p, lp)?;
    let class = if closed { ClassLabel::TClosed } else { ClassLabel::TOpen };
    let n = lp.n();
    let rs = find_roots(p, &opts.roots)?;
    if rs.degree() != n {
        return Ok(MembershipVerdict::new(class, Method::Definition, false, -1.0).with_witness(
            Witness::DegreeDeficit {
                exact: Some(rs.degree()),
                nominal: n,
            },
        ));
    }
    if let Some(r) = off_circle(&rs) {
        let d = (r.location.norm() - 1.0).abs();
        let mut v = MembershipVerdict::new(class, Method::Definition, false, -d).with_witness(Witness::Root {
            location: r.location,
            multiplicity: r.multiplicity,
        });
        v.indeterminate = d < opts.margin_tol;
        return Ok(v);
    }
    let sep = rs.arg_separation()?;
    if !closed && lp.is_maximal() {
        return Ok(MembershipVerdict::new(class, Method::Definition, false, sep - lp.lambda())
            .with_witness(Witness::EmptyClass));
    }
    let raw = sep - lp.lambda();
    let member = if closed {
        raw >= -opts.sep_tol
    } else {
        rs.is_simple() && raw > opts.sep_tol
    };
    let mut v = MembershipVerdict::new(class, Method::Definition, member, raw);
    if !member {
        v = v.with_witness(Witness::Separation { gap: sep });
    }
    // lambda = 0 closed is all of pi_n(T): no boundary to be near
    v.indeterminate = !(closed && lp.is_zero()) && raw.abs() < opts.margin_tol;
    Ok(v)
}

/// Membership in `pi_n(closed disk)` or `pi_n(open disk)` by root location.
pub fn in_disk(p: &Polynomial, closed: bool, opts: &ClassOptions) -> Result<MembershipVerdict> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = p.nominal_degree();
    let rs = find_roots(p, &opts.roots)?;
    if rs.degree() != n {
        return Ok(
            MembershipVerdict::new(ClassLabel::PiOfDomain, Method::Definition, false, -1.0).with_witness(
                Witness::DegreeDeficit {
                    exact: Some(rs.degree()),
                    nominal: n,
                },
            ),
        );
    }
    let tol = opts.roots.circle_tol;
    let raw = 1.0 - rs.max_modulus();
    let member = if closed { raw >= -tol } else { raw > tol };
    let mut v = MembershipVerdict::new(ClassLabel::PiOfDomain, Method::Definition, member, raw);
    if !member {
        let worst = rs
            .roots
            .iter()
            .max_by(|a, b| a.location.norm().total_cmp(&b.location.norm()))
            .copied();
        if let Some(r) = worst {
            v = v.with_witness(Witness::Root {
                location: r.location,
                multiplicity: r.multiplicity,
            });
        }
    }
    v.indeterminate = raw.abs() < opts.margin_tol && n > 0;
    Ok(v)
}

/// `S` (when a split is supplied) and `T`, both of nominal degree `2n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizationPolys {
    pub s: Option<Polynomial>,
    pub t: Polynomial,
}

fn bracket(a: &Polynomial, b: &Polynomial, lp: &LambdaParam) -> Polynomial {
    a.rotate_plus(lp)
        .mul(&b.rotate_minus(lp))
        .sub(&a.rotate_minus(lp).mul(&b.rotate_plus(lp)))
}

pub fn build_char_polys(
    f: &Polynomial,
    lp: &LambdaParam,
    split: Option<(&Polynomial, &Polynomial)>,
) -> Result<CharacterizationPolys> {
    lp.require_open()?;
    check_nominal(f, lp)?;
    let mut t = bracket(f, &f.n_inverse(), lp).into_coeffs();
    // both extreme coefficients cancel identically
    let last = t.len() - 1;
    t[0] = Complex64::new(0.0, 0.0);
    t[last] = Complex64::new(0.0, 0.0);
    let s = split.map(|(p, q)| bracket(p, q, lp));
    Ok(CharacterizationPolys {
        s,
        t: Polynomial::from_coeffs(t),
    })
}

/// `N(t) = -i e^{-int} T(e^{it})`, real for the bracket polynomial `T`.
fn n_of_t(t_poly: &Polynomial, n: usize, angle: f64) -> f64 {
    let z = Complex64::from_polar(1.0, angle);
    let v = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -(n as f64) * angle) * t_poly.evaluate(z);
    v.re
}

/// Canonical decision procedure for `lambda` in `(0, 2pi/n)`.
pub fn in_d_third(f: &Polynomial, lp: &LambdaParam, closed: bool, opts: &ClassOptions) -> Result<MembershipVerdict> {
    lp.require_open()?;
    check_nominal(f, lp)?;
    let class = d_label(closed);
    let rs = find_roots(f, &opts.roots)?;
    if let Some(v) = disk_prefilter(&rs, lp, class, Method::ThirdChar, opts)? {
        return Ok(v);
    }
    if rs.count(CircleTag::On) > 0 {
        return Ok(in_t(f, lp, closed, opts)?.relabel(class, Method::ThirdChar));
    }
    let n = lp.n();
    let t_poly = build_char_polys(f, lp, None)?.t;
    let rt = find_roots(&t_poly, &opts.roots)?;
    let nonzero: Vec<_> = rt.roots.iter().filter(|r| r.location.norm() > 0.0).collect();
    let dist = nonzero
        .iter()
        .map(|r| (r.location.norm() - 1.0).abs())
        .fold(f64::INFINITY, f64::min);
    let on: Vec<_> = nonzero.iter().filter(|r| r.tag == CircleTag::On).collect();
    let ambiguous = nonzero.iter().any(|r| {
        let d = (r.location.norm() - 1.0).abs();
        d > opts.roots.circle_tol && d < opts.margin_tol
    });
    if on.is_empty() {
        let mut v = MembershipVerdict::new(class, Method::ThirdChar, true, dist);
        v.indeterminate = if closed { ambiguous } else { dist < opts.margin_tol };
        return Ok(v);
    }
    let odd = on.iter().find(|r| r.multiplicity % 2 == 1);
    let parity_member = odd.is_none();
    // sign cross-check: N must stay non-negative on the circle
    let scale: f64 = t_poly.coeffs().iter().map(|c| c.norm()).sum();
    let mut args: Vec<f64> = on.iter().map(|r| r.location.arg().rem_euclid(2.0 * PI)).collect();
    args.sort_by(f64::total_cmp);
    let mut probes: Vec<f64> = (0..args.len())
        .map(|i| {
            let next = if i + 1 < args.len() { args[i + 1] } else { args[0] + 2.0 * PI };
            0.5 * (args[i] + next)
        })
        .collect();
    probes.extend((0..16 * n).map(|j| 2.0 * PI * j as f64 / (16 * n) as f64));
    let min_n = probes
        .iter()
        .map(|&a| n_of_t(&t_poly, n, a))
        .fold(f64::INFINITY, f64::min);
    // how far N dips below zero, relative to the size of T
    let slack = (min_n / scale).min(0.0);
    if !closed {
        let mut v = MembershipVerdict::new(class, Method::ThirdChar, false, slack)
            .with_witness(Witness::RootOfT { location: on[0].location });
        v.indeterminate = slack > -opts.margin_tol;
        return Ok(v);
    }
    let sign_member = min_n >= -1e-9 * scale;
    let mut v = MembershipVerdict::new(class, Method::ThirdChar, parity_member, if parity_member { 0.0 } else { slack });
    if let Some(r) = odd {
        v = v.with_witness(Witness::OddRootOfT {
            location: r.location,
            multiplicity: r.multiplicity,
        });
    }
    v.indeterminate = ambiguous || parity_member != sign_member || parity_member;
    Ok(v)
}

fn d_label(closed: bool) -> ClassLabel {
    if closed {
        ClassLabel::DClosed
    } else {
        ClassLabel::DOpen
    }
}

/// Degree and OUTSIDE / mixed-location screening shared by the disk class tests.
fn disk_prefilter(
    rs: &RootSet,
    lp: &LambdaParam,
    class: ClassLabel,
    method: Method,
    opts: &ClassOptions,
) -> Result<Option<MembershipVerdict>> {
    let n = lp.n();
    if rs.degree() != n {
        return Ok(Some(MembershipVerdict::new(class, method, false, -1.0).with_witness(
            Witness::DegreeDeficit {
                exact: Some(rs.degree()),
                nominal: n,
            },
        )));
    }
    if rs.count(CircleTag::Outside) > 0 {
        let d = rs.max_modulus() - 1.0;
        let mut v = MembershipVerdict::new(class, method, false, -d)
            .with_witness(root_witness(rs, CircleTag::Outside).expect("outside root"));
        v.indeterminate = d < opts.margin_tol;
        return Ok(Some(v));
    }
    if rs.count(CircleTag::On) > 0 && rs.count(CircleTag::Inside) > 0 {
        // a disk-class member has all zeros on the circle or all inside
        return Ok(Some(
            MembershipVerdict::new(class, method, false, -0.0)
                .with_witness(root_witness(rs, CircleTag::Inside).expect("inside root")),
        ));
    }
    Ok(None)
}

/// Canonical membership for every `lambda` in `[0, 2pi/n]`: the endpoints use
/// their explicit definitions, the interior uses [`in_d_third`].
pub fn in_d(f: &Polynomial, lp: &LambdaParam, closed: bool, opts: &ClassOptions) -> Result<MembershipVerdict> {
    check_nominal(f, lp)?;
    let class = d_label(closed);
    if lp.is_zero() {
        if closed {
            return Ok(in_disk(f, true, opts)?.relabel(class, Method::Definition));
        }
        let open_disk = in_disk(f, false, opts)?;
        if open_disk.member {
            return Ok(open_disk.relabel(class, Method::Definition));
        }
        let t = in_t(f, lp, false, opts)?;
        if t.member {
            return Ok(t.relabel(class, Method::Definition));
        }
        return Ok(open_disk.relabel(class, Method::Definition));
    }
    if lp.is_maximal() {
        if !closed {
            return Ok(MembershipVerdict::new(class, Method::Definition, false, 0.0).with_witness(Witness::EmptyClass));
        }
        return Ok(maximal_closed(f, lp, opts));
    }
    in_d_third(f, lp, closed, opts)
}

/// `a (z^n - b)` with `|b| <= 1`.
fn maximal_closed(f: &Polynomial, lp: &LambdaParam, opts: &ClassOptions) -> MembershipVerdict {
    let n = lp.n();
    let class = ClassLabel::DClosed;
    let scale = f.max_modulus();
    for k in 1..n {
        if f.coeff(k).norm() > opts.coeff_tol * scale {
            return MembershipVerdict::new(class, Method::Definition, false, -f.coeff(k).norm() / scale)
                .with_witness(Witness::Coefficient { k, value: f.coeff(k) });
        }
    }
    let an = f.coeff(n).norm();
    if an == 0.0 {
        return MembershipVerdict::new(class, Method::Definition, false, -1.0).with_witness(Witness::DegreeDeficit {
            exact: f.exact_degree(),
            nominal: n,
        });
    }
    let raw = 1.0 - f.coeff(0).norm() / an;
    let member = raw >= -opts.roots.circle_tol;
    let mut v = MembershipVerdict::new(class, Method::Definition, member, raw);
    if !member {
        v = v.with_witness(Witness::Coefficient { k: 0, value: f.coeff(0) });
    }
    v
}

/// Samples `F + zeta F^*` over `zeta_count` points of the circle plus one refinement pass.
pub fn in_d_first(
    f: &Polynomial,
    lp: &LambdaParam,
    closed: bool,
    zeta_count: usize,
    opts: &ClassOptions,
) -> Result<MembershipVerdict> {
    lp.require_open()?;
    check_nominal(f, lp)?;
    let class = d_label(closed);
    let rs = find_roots(f, &opts.roots)?;
    if let Some(v) = disk_prefilter(&rs, lp, class, Method::FirstCharSampled, opts)? {
        return Ok(v);
    }
    if rs.count(CircleTag::On) > 0 {
        return Ok(in_t(f, lp, closed, opts)?.relabel(class, Method::FirstCharSampled));
    }
    let fs = f.n_inverse();
    let probe = |angle: f64| -> Result<(f64, MembershipVerdict)> {
        let zeta = Complex64::from_polar(1.0, angle);
        Ok((angle, in_t(&f.add(&fs.scale(zeta)), lp, closed, opts)?))
    };
    let count = zeta_count.max(1);
    let step = 2.0 * PI / count as f64;
    let mut samples = Vec::with_capacity(count + 16);
    for j in 0..count {
        samples.push(probe(step * j as f64)?);
    }
    let worst = samples
        .iter()
        .min_by(|a, b| a.1.margin.total_cmp(&b.1.margin))
        .map(|s| s.0)
        .unwrap_or(0.0);
    for j in 1..=16 {
        let off = step * (j as f64 / 17.0 - 0.5) * 2.0;
        samples.push(probe(worst + off)?);
    }
    let (angle, w) = samples
        .iter()
        .min_by(|a, b| {
            // non-members first, then smallest margin
            (a.1.member, a.1.margin)
                .partial_cmp(&(b.1.member, b.1.margin))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .cloned()
        .expect("at least one sample");
    let mut v = MembershipVerdict::new(class, Method::FirstCharSampled, w.member, w.margin);
    if !w.member {
        let gap = match w.witness {
            Some(Witness::Separation { gap }) => gap,
            _ => 0.0,
        };
        v = v.with_witness(Witness::Zeta {
            zeta: Complex64::from_polar(1.0, angle),
            gap,
        });
    }
    v.indeterminate = samples.iter().any(|s| s.1.indeterminate);
    Ok(v)
}

/// `P = (F - F^*)/2`, `Q = (-F - F^*)/2`, so that `F = P - Q` with self-inversive
/// `P` (phase 1 squared) and `Q` (phase `i` squared).
pub fn split(f: &Polynomial) -> (Polynomial, Polynomial) {
    let fs = f.n_inverse();
    let half = Complex64::new(0.5, 0.0);
    let p = f.sub(&fs).scale(half);
    let q = f.scale(Complex64::new(-1.0, 0.0)).sub(&fs).scale(half);
    (p, q)
}

/// Second characterization over a projective grid `cos t * A - sin t * B`,
/// `A = c_P Delta[P]`, `B = c_Q Delta[Q]`.
pub fn in_d_second(
    p: &Polynomial,
    q: &Polynomial,
    lp: &LambdaParam,
    closed: bool,
    opts: &ClassOptions,
) -> Result<MembershipVerdict> {
    lp.require_half_open()?;
    check_nominal(p, lp)?;
    check_nominal(q, lp)?;
    let class = d_label(closed);
    let cp = p.self_inversive_phase(opts.coeff_tol)?;
    let cq = q.self_inversive_phase(opts.coeff_tol)?;
    if (cp * cp - cq * cq).norm() <= opts.coeff_tol {
        return Err(Error::PhaseCollision);
    }
    for poly in [p, q] {
        let rs = find_roots(poly, &opts.roots)?;
        if let Some(r) = rs.roots.iter().find(|r| r.tag != CircleTag::On) {
            return Err(Error::NotOnCircle {
                re: r.location.re,
                im: r.location.im,
            });
        }
    }
    let f = p.sub(q);
    let rs = find_roots(&f, &opts.roots)?;
    if let Some(v) = disk_prefilter(&rs, lp, class, Method::SecondCharGrid, opts)? {
        return Ok(v);
    }
    if rs.count(CircleTag::On) > 0 {
        return Ok(in_t(&f, lp, closed, opts)?.relabel(class, Method::SecondCharGrid));
    }
    let a = delta(p, lp)?.scale(cp);
    let b = delta(q, lp)?.scale(cq);
    let scale = a.max_modulus().max(b.max_modulus());
    let n1 = lp.n() - 1;
    let margin_at = |theta: f64| -> Result<f64> {
        let g = a.scale(Complex64::new(theta.cos(), 0.0)).sub(&b.scale(Complex64::new(theta.sin(), 0.0)));
        if g.coeff(n1).norm() <= 1e-12 * scale {
            return Ok(f64::NEG_INFINITY);
        }
        if n1 == 0 {
            return Ok(1.0);
        }
        Ok(1.0 - find_roots(&g, &opts.roots)?.max_modulus())
    };
    let grid = opts.x_grid.max(8);
    let step = PI / grid as f64;
    let mut samples = Vec::with_capacity(grid + 16);
    for j in 0..grid {
        let t = step * j as f64;
        samples.push((t, margin_at(t)?));
    }
    let worst = samples
        .iter()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .map(|s| s.0)
        .unwrap_or(0.0);
    for j in 1..=16 {
        let t = worst + step * (j as f64 / 17.0 - 0.5) * 2.0;
        samples.push((t, margin_at(t)?));
    }
    let (theta, m) = samples
        .iter()
        .copied()
        .min_by(|x, y| x.1.total_cmp(&y.1))
        .expect("grid is not empty");
    let tol = opts.roots.circle_tol;
    let member = if closed { m >= -tol } else { m > tol };
    let mut v = MembershipVerdict::new(class, Method::SecondCharGrid, member, m);
    if !member {
        v = v.with_witness(Witness::Theta {
            theta,
            max_modulus: 1.0 - m,
        });
    }
    v.indeterminate = m.abs() < opts.margin_tol;
    Ok(v)
}

/// Direct sampled evaluation of `Im(e^{-in lambda/2} F_+ / F_-)` on the circle and
/// on exterior circles, normalized to `sin(arg)` so the scale of `F` drops out.
///
/// Only meaningful when `F` has no zeros on the circle; the open class part made
/// of `T_n(lambda)` by definition is not detected here.
pub fn grid_oracle(f: &Polynomial, lp: &LambdaParam, closed: bool, opts: &ClassOptions) -> Result<MembershipVerdict> {
    lp.require_open()?;
    check_nominal(f, lp)?;
    let class = d_label(closed);
    let n = lp.n();
    if f.exact_degree() != Some(n) {
        return Ok(MembershipVerdict::new(class, Method::GridOracle, false, -1.0).with_witness(
            Witness::DegreeDeficit {
                exact: f.exact_degree(),
                nominal: n,
            },
        ));
    }
    let fp = f.rotate_plus(lp);
    let fm = f.rotate_minus(lp);
    let phase = Complex64::from_polar(1.0, -(n as f64) * lp.lambda() / 2.0);
    let value = |z: Complex64| -> Option<f64> {
        let v = phase * fp.evaluate(z) * fm.evaluate(z).conj();
        let r = v.norm();
        (r > 0.0).then(|| v.im / r)
    };
    let m = opts.boundary_samples.max(8);
    let radii = opts.exterior_radii.max(1);
    let mut worst = (f64::INFINITY, Complex64::new(1.0, 0.0));
    let mut boundary = Vec::with_capacity(m);
    for j in 0..m {
        let a = 2.0 * PI * j as f64 / m as f64;
        let z = Complex64::from_polar(1.0, a);
        if let Some(s) = value(z) {
            boundary.push((s, a));
            if s < worst.0 {
                worst = (s, z);
            }
        }
        for i in 1..=radii {
            let r = 1.0 / (1.0 - i as f64 / (radii + 1) as f64);
            let z = Complex64::from_polar(r, a);
            if let Some(s) = value(z) {
                if s < worst.0 {
                    worst = (s, z);
                }
            }
        }
    }
    boundary.sort_by(|x, y| x.0.total_cmp(&y.0));
    let h = 2.0 * PI / m as f64;
    for &(_, a) in boundary.iter().take(4) {
        for j in 0..=32 {
            let t = a - h + 2.0 * h * j as f64 / 32.0;
            let z = Complex64::from_polar(1.0, t);
            if let Some(s) = value(z) {
                if s < worst.0 {
                    worst = (s, z);
                }
            }
        }
    }
    let s = worst.0;
    let member = if closed { s >= -opts.oracle_tol } else { s > opts.oracle_tol };
    let mut v = MembershipVerdict::new(class, Method::GridOracle, member, s);
    if !member {
        v = v.with_witness(Witness::GridPoint { z: worst.1, value: s });
    }
    v.indeterminate = s.abs() < opts.margin_tol;
    Ok(v)
}

/// Both routes of the Hermite–Biehler relation; they must agree.
pub fn hermite_biehler(p: &Polynomial, q: &Polynomial, strict: bool, opts: &ClassOptions) -> Result<bool> {
    if p.nominal_degree() != q.nominal_degree() {
        return Err(Error::DegreeMismatch {
            left: p.nominal_degree(),
            right: q.nominal_degree(),
        });
    }
    let cp = p.self_inversive_phase(opts.coeff_tol)?;
    let cq = q.self_inversive_phase(opts.coeff_tol)?;
    if (cp * cp - cq * cq).norm() <= opts.coeff_tol {
        return Err(Error::PhaseCollision);
    }
    let by_roots = match interspersed(p, q, strict, &opts.roots) {
        Ok(b) => b,
        Err(Error::NotOnCircle { .. }) => false,
        Err(e) => return Err(e),
    };
    let f = p.sub(q);
    let closed = !strict;
    let by_disk = in_disk(&f, closed, opts)?.member || in_disk(&f.n_inverse(), closed, opts)?.member;
    if by_roots != by_disk {
        return Err(Error::InternalInconsistency(format!(
            "interspersion says {by_roots}, root location of P - Q says {by_disk}"
        )));
    }
    Ok(by_roots)
}

/// Sampled Hermite–Kakeya test: `cos t P - sin t Q` in the closed (or open)
/// zero-separation class over `x_grid` angles in `[0, pi)`.
pub fn hermite_kakeya(
    p: &Polynomial,
    q: &Polynomial,
    strict: bool,
    x_grid: usize,
    opts: &ClassOptions,
) -> Result<bool> {
    let n = p.nominal_degree();
    if q.nominal_degree() != n {
        return Err(Error::DegreeMismatch { left: n, right: q.nominal_degree() });
    }
    for poly in [p, q] {
        let rs = find_roots(poly, &opts.roots)?;
        if let Some(r) = rs.roots.iter().find(|r| r.tag != CircleTag::On) {
            return Err(Error::NotOnCircle {
                re: r.location.re,
                im: r.location.im,
            });
        }
    }
    let cp = p.self_inversive_phase(opts.coeff_tol)?;
    let cq = q.self_inversive_phase(opts.coeff_tol)?;
    if (cp * cp - cq * cq).norm() > opts.coeff_tol {
        return Err(Error::PhaseMismatch);
    }
    let ratio = p.coeffs().iter().zip(q.coeffs()).find(|(_, b)| b.norm() > 0.0).map(|(a, b)| a / b);
    if let Some(r) = ratio {
        if p.relative_distance(&q.scale(r)) <= opts.coeff_tol {
            return Err(Error::HypothesisViolated("P/Q is constant".into()));
        }
    }
    let lp0 = LambdaParam::new(n, 0.0)?;
    if strict && !in_t(q, &lp0, false, opts)?.member {
        return Ok(false);
    }
    let grid = x_grid.max(8);
    for j in 0..grid {
        let t = PI * j as f64 / grid as f64;
        let g = p.scale(Complex64::new(t.cos(), 0.0)).sub(&q.scale(Complex64::new(t.sin(), 0.0)));
        if g.is_zero() || !in_t(&g, &lp0, !strict, opts)?.member {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HalfPlaneOutcome {
    pub holds: bool,
    /// `min Re(...) - 1/2` over the grid.
    pub margin: f64,
}

/// `Re((f(z) - a_0)/(a_n z^n - a_0)) > 1/2` sampled on the unit circle.
pub fn half_plane_criterion(f: &Polynomial, grid: usize) -> Result<HalfPlaneOutcome> {
    let n = f.nominal_degree();
    let a0 = f.coeff(0);
    let an = f.coeff(n);
    if !(a0.norm() < an.norm()) {
        return Err(Error::HypothesisViolated("|a_0| < |a_n| is required".into()));
    }
    let grid = grid.max(8);
    let margin = (0..grid)
        .map(|j| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / grid as f64);
            ((f.evaluate(z) - a0) / (an * z.powu(n as u32) - a0)).re - 0.5
        })
        .fold(f64::INFINITY, f64::min);
    Ok(HalfPlaneOutcome {
        holds: margin > 0.0,
        margin,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreClass {
    PtClosed,
    PtOpen,
    PdClosed,
    PdOpen,
}

/// Class membership of the lift `f * Q_n(lambda; .)`.
pub fn pre_class_test(f: &Polynomial, lp: &LambdaParam, which: PreClass, opts: &ClassOptions) -> Result<MembershipVerdict> {
    let lifted = pre_lift(f, lp)?;
    let (v, label) = match which {
        PreClass::PtClosed => (in_t(&lifted, lp, true, opts)?, ClassLabel::PtClosed),
        PreClass::PtOpen => (in_t(&lifted, lp, false, opts)?, ClassLabel::PtOpen),
        PreClass::PdClosed => (in_d(&lifted, lp, true, opts)?, ClassLabel::PdClosed),
        PreClass::PdOpen => (in_d(&lifted, lp, false, opts)?, ClassLabel::PdOpen),
    };
    let method = v.method;
    Ok(v.relabel(label, method))
}

/// The polynomial `P` of the explicit boundary family, expanded in closed form:
/// `c (b Q_n + a sum_k w_k (1 + e^{i(n+1)lambda/2} z) prod_{j != k} (1 + e^{i(2j-n-1)lambda/2} z))`
/// with `w_k = e^{i(k-n-1)lambda/2} / sin((k-n-1)lambda/2)`.
pub fn extremal_family(n: usize, lambda: f64, a: f64, b: f64, c: Complex64) -> Result<Polynomial> {
    let lp = LambdaParam::new(n, lambda)?;
    lp.require_open()?;
    if a == 0.0 || !a.is_finite() || !b.is_finite() {
        return Err(Error::BadParams("a must be finite and nonzero, b finite".into()));
    }
    if (c.norm() - 1.0).abs() > 1e-12 || (c * c - 1.0).norm() <= 1e-12 {
        return Err(Error::BadParams("c must be unimodular and not +-1".into()));
    }
    let half = lambda / 2.0;
    let factor = |angle: f64| Polynomial::from_coeffs(vec![Complex64::new(1.0, 0.0), Complex64::from_polar(1.0, angle)]);
    let mut sum = Polynomial::zero(n);
    for k in 1..=n {
        let e = (k as f64 - n as f64 - 1.0) * half;
        let w = Complex64::from_polar(1.0, e) / e.sin();
        let mut term = factor((n + 1) as f64 * half);
        for j in (1..=n).filter(|&j| j != k) {
            term = term.mul(&factor((2.0 * j as f64 - n as f64 - 1.0) * half));
        }
        sum = sum.add(&term.scale(w));
    }
    let q = q_extremal(n, lambda)?;
    Ok(q.scale(Complex64::new(b, 0.0)).add(&sum.scale(Complex64::new(a, 0.0))).scale(c))
}
