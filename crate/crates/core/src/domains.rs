//! Zero domains: Möbius disks and half-planes, limaçon regions, and complements.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::qconv::binomial;
use crate::roots::{find_roots, RootOptions};

pub const BOUNDARY_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainSpec {
    UnitDiskOpen,
    UnitDiskClosed,
    UnitCircle,
    /// Image of the open (or closed) unit disk under `tau z / (1 + gamma z)`.
    Omega { tau: Complex64, gamma: f64, closed: bool },
    /// `|z| + gamma |1 + z| < 1` (or `<=`).
    LimaconI { gamma: f64, closed: bool },
    /// `|z| - gamma |1 + z| > 1` (or `>=`).
    LimaconO { gamma: f64, closed: bool },
    Complement { of: Box<DomainSpec> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Location {
    In,
    Out,
    Boundary,
}

/// `tau z / (1 + gamma z)`.
pub fn mobius(tau: Complex64, gamma: f64, z: Complex64) -> Complex64 {
    tau * z / (1.0 + gamma * z)
}

impl DomainSpec {
    pub fn omega(tau: Complex64, gamma: f64, closed: bool) -> Result<Self> {
        if tau.norm() == 0.0 || !(0.0..=1.0).contains(&gamma) {
            return Err(Error::OutOfRange(format!("omega needs tau != 0, gamma in [0,1]; got {tau}, {gamma}")));
        }
        Ok(DomainSpec::Omega { tau, gamma, closed })
    }

    pub fn limacon_i(gamma: f64, closed: bool) -> Result<Self> {
        Self::check_limacon_gamma(gamma, closed)?;
        Ok(DomainSpec::LimaconI { gamma, closed })
    }

    pub fn limacon_o(gamma: f64, closed: bool) -> Result<Self> {
        Self::check_limacon_gamma(gamma, closed)?;
        Ok(DomainSpec::LimaconO { gamma, closed })
    }

    fn check_limacon_gamma(gamma: f64, closed: bool) -> Result<()> {
        let ok = if closed { (0.0..=1.0).contains(&gamma) } else { (0.0..1.0).contains(&gamma) };
        if !ok {
            return Err(Error::OutOfRange(format!("limacon gamma = {gamma} (closed = {closed})")));
        }
        Ok(())
    }

    pub fn complement(self) -> Self {
        DomainSpec::Complement { of: Box::new(self) }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            DomainSpec::UnitDiskOpen => false,
            DomainSpec::UnitDiskClosed | DomainSpec::UnitCircle => true,
            DomainSpec::Omega { closed, .. }
            | DomainSpec::LimaconI { closed, .. }
            | DomainSpec::LimaconO { closed, .. } => *closed,
            DomainSpec::Complement { of } => !of.is_closed(),
        }
    }

    /// Signed slack of the defining inequality: positive inside, negative outside.
    pub fn defect(&self, z: Complex64) -> f64 {
        match self {
            DomainSpec::UnitDiskOpen | DomainSpec::UnitDiskClosed => 1.0 - z.norm(),
            DomainSpec::UnitCircle => -(z.norm() - 1.0).abs(),
            DomainSpec::Omega { tau, gamma, .. } => (tau - gamma * z).norm() - z.norm(),
            DomainSpec::LimaconI { gamma, .. } => 1.0 - z.norm() - gamma * (1.0 + z).norm(),
            DomainSpec::LimaconO { gamma, .. } => z.norm() - gamma * (1.0 + z).norm() - 1.0,
            DomainSpec::Complement { of } => -of.defect(z),
        }
    }

    pub fn contains(&self, z: Complex64, tol: f64) -> Location {
        match self {
            DomainSpec::UnitCircle => {
                return if (z.norm() - 1.0).abs() <= tol { Location::In } else { Location::Out };
            }
            DomainSpec::LimaconI { gamma, closed: true } if *gamma == 1.0 => {
                let on = z.im.abs() <= tol && z.re >= -1.0 - tol && z.re <= tol;
                return if on { Location::In } else { Location::Out };
            }
            DomainSpec::LimaconO { gamma, closed: true } if *gamma == 1.0 => {
                let on = z.im.abs() <= tol && z.re <= -1.0 + tol;
                return if on { Location::In } else { Location::Out };
            }
            DomainSpec::Complement { of } => {
                return match of.contains(z, tol) {
                    Location::In => Location::Out,
                    Location::Out => Location::In,
                    Location::Boundary => Location::Boundary,
                };
            }
            _ => {}
        }
        let d = self.defect(z);
        if d.abs() <= tol {
            Location::Boundary
        } else if d > 0.0 {
            Location::In
        } else {
            Location::Out
        }
    }

    /// Whether `z` belongs to the set, boundary points counting for closed sets.
    pub fn accepts(&self, z: Complex64, tol: f64) -> bool {
        match self.contains(z, tol) {
            Location::In => true,
            Location::Out => false,
            Location::Boundary => self.is_closed(),
        }
    }

    /// Polyline of the boundary curve with `samples` points.
    pub fn boundary(&self, samples: usize) -> Vec<Complex64> {
        let samples = samples.max(2);
        let angles = (0..samples).map(|j| 2.0 * PI * j as f64 / samples as f64);
        match self {
            DomainSpec::UnitDiskOpen | DomainSpec::UnitDiskClosed | DomainSpec::UnitCircle => {
                angles.map(|t| Complex64::from_polar(1.0, t)).collect()
            }
            DomainSpec::Omega { tau, gamma, .. } => angles
                .map(|t| mobius(*tau, *gamma, Complex64::from_polar(1.0, t)))
                .filter(|w| w.re.is_finite() && w.im.is_finite())
                .collect(),
            DomainSpec::LimaconI { gamma, .. } if *gamma == 1.0 => (0..samples)
                .map(|j| Complex64::new(-(j as f64) / (samples - 1) as f64, 0.0))
                .collect(),
            DomainSpec::LimaconO { gamma, .. } if *gamma == 1.0 => (0..samples)
                .map(|j| Complex64::new(-1.0 - 10.0 * j as f64 / (samples - 1) as f64, 0.0))
                .collect(),
            DomainSpec::LimaconI { gamma, .. } => angles
                .map(|t| Complex64::from_polar(limacon_inner_radius(*gamma, t), t))
                .collect(),
            DomainSpec::LimaconO { gamma, .. } => angles
                .map(|t| Complex64::from_polar(1.0 / limacon_inner_radius(*gamma, t), t))
                .collect(),
            DomainSpec::Complement { of } => of.boundary(samples),
        }
    }
}

/// Smaller root of `(1 - g^2) r^2 - 2 (1 + g^2 cos t) r + (1 - g^2) = 0`,
/// the radius of `|z| + g |1 + z| = 1` in direction `t`. The larger root is its
/// reciprocal and traces `|z| - g |1 + z| = 1`.
pub fn limacon_inner_radius(gamma: f64, t: f64) -> f64 {
    let g2 = gamma * gamma;
    let b = 1.0 + g2 * t.cos();
    let disc = (b * b - (1.0 - g2) * (1.0 - g2)).max(0.0);
    let den = b + disc.sqrt();
    if den == 0.0 {
        return 1.0;
    }
    (1.0 - g2) / den
}

impl fmt::Display for DomainSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffix = |closed: bool| if closed { "-closed" } else { "" };
        match self {
            DomainSpec::UnitDiskOpen => write!(f, "disk"),
            DomainSpec::UnitDiskClosed => write!(f, "disk-closed"),
            DomainSpec::UnitCircle => write!(f, "circle"),
            DomainSpec::Omega { tau, gamma, closed } => {
                write!(f, "omega{}:{}:{}:{}", suffix(*closed), tau.re, tau.im, gamma)
            }
            DomainSpec::LimaconI { gamma, closed } => write!(f, "limacon-i{}:{}", suffix(*closed), gamma),
            DomainSpec::LimaconO { gamma, closed } => write!(f, "limacon-o{}:{}", suffix(*closed), gamma),
            DomainSpec::Complement { of } => write!(f, "not:{of}"),
        }
    }
}

impl FromStr for DomainSpec {
    type Err = Error;

    /// `disk`, `disk-closed`, `circle`, `omega[-closed]:RE:IM:GAMMA`,
    /// `limacon-i[-closed]:GAMMA`, `limacon-o[-closed]:GAMMA`, `not:SPEC`.
    fn from_str(s: &str) -> Result<Self> {
        if let Some(rest) = s.strip_prefix("not:") {
            return Ok(rest.parse::<DomainSpec>()?.complement());
        }
        let mut parts = s.split(':');
        let head = parts.next().unwrap_or_default();
        let nums: Vec<f64> = parts
            .map(|x| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{x}: {e}"))))
            .collect::<Result<_>>()?;
        let (kind, closed) = match head.strip_suffix("-closed") {
            Some(k) => (k, true),
            None => (head, false),
        };
        let want = |k: usize| -> Result<()> {
            if nums.len() != k {
                return Err(Error::Parse(format!("{head} takes {k} numeric fields")));
            }
            Ok(())
        };
        match kind {
            "disk" => {
                want(0)?;
                Ok(if closed { DomainSpec::UnitDiskClosed } else { DomainSpec::UnitDiskOpen })
            }
            "circle" if !closed => {
                want(0)?;
                Ok(DomainSpec::UnitCircle)
            }
            "omega" => {
                want(3)?;
                DomainSpec::omega(Complex64::new(nums[0], nums[1]), nums[2], closed)
            }
            "limacon-i" => {
                want(1)?;
                DomainSpec::limacon_i(nums[0], closed)
            }
            "limacon-o" => {
                want(1)?;
                DomainSpec::limacon_o(nums[0], closed)
            }
            _ => Err(Error::Parse(format!("unknown domain {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainVerdict {
    pub inside: bool,
    /// First offending root.
    pub witness: Option<Complex64>,
    /// Smallest signed defect over the roots (infinity when there are none).
    pub min_defect: f64,
    /// Exact degree found by the root finder.
    pub degree: usize,
}

/// Whether every finite zero of `p` lies in `d`.
pub fn root_set_in(p: &Polynomial, d: &DomainSpec, tol: f64, opts: &RootOptions) -> Result<DomainVerdict> {
    let rs = find_roots(p, opts)?;
    let mut witness = None;
    let mut min_defect = f64::INFINITY;
    for r in &rs.roots {
        min_defect = min_defect.min(d.defect(r.location));
        if witness.is_none() && !d.accepts(r.location, tol) {
            witness = Some(r.location);
        }
    }
    Ok(DomainVerdict {
        inside: witness.is_none(),
        witness,
        min_defect,
        degree: rs.degree(),
    })
}

/// `(1 - z/alpha)^n`.
pub fn counterexample_p(alpha: Complex64, n: usize) -> Result<Polynomial> {
    if alpha.norm() == 0.0 {
        return Err(Error::BadParams("alpha must be nonzero".into()));
    }
    let step = -alpha.inv();
    let mut w = Complex64::new(1.0, 0.0);
    let coeffs = (0..=n)
        .map(|k| {
            let c = w * binomial(n, k);
            w *= step;
            c
        })
        .collect();
    Ok(Polynomial::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qconv::grace_szego;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn contains_examples() {
        let i0 = DomainSpec::limacon_i(0.0, false).unwrap();
        assert_eq!(i0.contains(c(0.5, 0.0), BOUNDARY_TOL), Location::In);
        let i5 = DomainSpec::limacon_i(0.5, false).unwrap();
        assert_eq!(i5.contains(c(-0.5, 0.0), BOUNDARY_TOL), Location::In);
        let i1 = DomainSpec::limacon_i(1.0, true).unwrap();
        assert_eq!(i1.contains(c(-0.5, 0.0), BOUNDARY_TOL), Location::In);
        assert_eq!(i1.contains(c(0.0, 0.1), BOUNDARY_TOL), Location::Out);
        let o1 = DomainSpec::limacon_o(1.0, true).unwrap();
        assert_eq!(o1.contains(c(-3.0, 0.0), BOUNDARY_TOL), Location::In);
        assert_eq!(o1.contains(c(3.0, 0.0), BOUNDARY_TOL), Location::Out);
        assert!(DomainSpec::limacon_i(1.0, false).is_err());
        // beta = 0.5 is outside I_0.5
        assert_eq!(i5.contains(c(0.5, 0.0), BOUNDARY_TOL), Location::Out);
    }

    #[test]
    fn minus_one_is_on_the_inner_boundary() {
        let o = RootOptions::default();
        let p = Polynomial::from_real(&[1.0, 3.0, 3.0, 1.0]);
        for g in [0.0, 0.3, 0.9] {
            let closed = DomainSpec::limacon_i(g, true).unwrap();
            let open = DomainSpec::limacon_i(g, false).unwrap();
            assert!(root_set_in(&p, &closed, BOUNDARY_TOL, &o).unwrap().inside);
            assert!(!root_set_in(&p, &open, BOUNDARY_TOL, &o).unwrap().inside);
        }
        let zn = Polynomial::monomial(4, 4, c(1.0, 0.0));
        let i = DomainSpec::limacon_i(0.6, false).unwrap();
        assert!(root_set_in(&zn, &i, BOUNDARY_TOL, &o).unwrap().inside);
        let circ = Polynomial::from_real(&[1.0, 0.0, 0.0, 1.0]);
        assert!(root_set_in(&circ, &DomainSpec::UnitCircle, BOUNDARY_TOL, &o).unwrap().inside);
    }

    #[test]
    fn mobius_images() {
        let d = DomainSpec::omega(c(2.0, 1.0), 0.5, false).unwrap();
        for k in 0..64 {
            let t = k as f64 * 0.37;
            let inner = Complex64::from_polar(0.9 * (k as f64 / 64.0), t);
            assert_eq!(d.contains(mobius(c(2.0, 1.0), 0.5, inner), BOUNDARY_TOL), Location::In);
            let outer = Complex64::from_polar(1.1 + k as f64 / 10.0, t);
            assert_eq!(d.contains(mobius(c(2.0, 1.0), 0.5, outer), BOUNDARY_TOL), Location::Out);
        }
    }

    #[test]
    fn limacon_boundary_radii() {
        for g in [0.0, 0.25, 0.5, 0.9] {
            let i = DomainSpec::limacon_i(g, true).unwrap();
            let o = DomainSpec::limacon_o(g, true).unwrap();
            for z in i.boundary(90) {
                assert!(i.defect(z).abs() < 1e-12, "g={g} z={z}");
            }
            for z in o.boundary(90) {
                assert!(o.defect(z).abs() < 1e-9 * z.norm().max(1.0), "g={g} z={z}");
            }
        }
    }

    #[test]
    fn complement_flips() {
        let d = DomainSpec::UnitDiskOpen.complement();
        assert_eq!(d.contains(c(2.0, 0.0), BOUNDARY_TOL), Location::In);
        assert_eq!(d.contains(c(0.2, 0.0), BOUNDARY_TOL), Location::Out);
        assert!(d.accepts(c(1.0, 0.0), BOUNDARY_TOL));
    }

    #[test]
    fn parse_round_trip() {
        for s in ["disk", "disk-closed", "circle", "omega:1:0:0.5", "omega-closed:0:2:0.25", "limacon-i:0.5", "limacon-o-closed:1", "not:limacon-i-closed:0.9"] {
            let d: DomainSpec = s.parse().unwrap();
            assert_eq!(d.to_string().parse::<DomainSpec>().unwrap(), d);
        }
        assert!("omega:1:0".parse::<DomainSpec>().is_err());
        assert!("square".parse::<DomainSpec>().is_err());
    }

    #[test]
    fn counterexample_examples() {
        let p = counterexample_p(c(-1.0, 0.0), 3).unwrap();
        assert_eq!(p, Polynomial::from_real(&[1.0, 3.0, 3.0, 1.0]));
        assert!(counterexample_p(c(0.0, 0.0), 3).is_err());
        let alpha = c(0.3, -1.2);
        let q = Polynomial::from_coeffs(vec![c(1.0, 0.5), c(-2.0, 0.0), c(0.0, 1.0), c(0.7, 0.7)]);
        let r = grace_szego(&counterexample_p(alpha, 3).unwrap(), &q).unwrap();
        let z = c(0.4, 0.9);
        assert!((r.evaluate(z) - q.evaluate(-z / alpha)).norm() < 1e-12);
        let rs = find_roots(&counterexample_p(alpha, 4).unwrap(), &RootOptions::default()).unwrap();
        assert_eq!(rs.roots.len(), 1);
        assert_eq!(rs.roots[0].multiplicity, 4);
        assert!((rs.roots[0].location - alpha).norm() < 1e-9);
    }
}
