use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{run_trials, Outcome, TrialReport, INDETERMINATE_MARGIN};
use crate::domains::{counterexample_p, limacon_inner_radius, mobius, root_set_in, DomainSpec, BOUNDARY_TOL};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::qconv::grace_szego;
use crate::roots::{find_roots, RootOptions};

/// Upper limit of the boundary search for the counterexample parameter.
pub const NEGATIVE_ARM_MAX_SAMPLES: usize = 4096;

/// Probability that a sample for a closed set is put on its boundary.
const BOUNDARY_SHARE: f64 = 0.2;

/// Draws a point of `d`. Unbounded sets are sampled out to a few times their
/// boundary so that products of such zeros stay well scaled.
pub fn sample_in_domain<R: Rng + ?Sized>(d: &DomainSpec, rng: &mut R) -> Result<Complex64> {
    let theta = rng.gen_range(0.0..2.0 * PI);
    let on_boundary = d.is_closed() && rng.gen_bool(BOUNDARY_SHARE);
    let inner = |rng: &mut R| if on_boundary { 1.0 } else { 0.999 * rng.gen::<f64>().sqrt() };
    let outer = |rng: &mut R| if on_boundary { 1.0 } else { rng.gen_range(0.2..0.999) };
    match d {
        DomainSpec::UnitDiskOpen | DomainSpec::UnitDiskClosed => Ok(Complex64::from_polar(inner(rng), theta)),
        DomainSpec::Omega { tau, gamma, .. } => Ok(mobius(*tau, *gamma, Complex64::from_polar(inner(rng), theta))),
        DomainSpec::LimaconI { gamma, .. } if *gamma < 1.0 => {
            if on_boundary && rng.gen_bool(0.25) {
                return Ok(Complex64::new(-1.0, 0.0));
            }
            Ok(Complex64::from_polar(limacon_inner_radius(*gamma, theta) * inner(rng), theta))
        }
        DomainSpec::LimaconO { gamma, .. } if *gamma < 1.0 => {
            Ok(Complex64::from_polar(1.0 / (limacon_inner_radius(*gamma, theta) * outer(rng)), theta))
        }
        DomainSpec::Complement { of } => match of.as_ref() {
            DomainSpec::Omega { tau, gamma, .. } => {
                for _ in 0..64 {
                    let u = Complex64::from_polar(1.0 / outer(rng), rng.gen_range(0.0..2.0 * PI));
                    let w = mobius(*tau, *gamma, u);
                    if w.norm() < 1e3 * tau.norm() {
                        return Ok(w);
                    }
                }
                Err(Error::SamplerExhausted)
            }
            DomainSpec::UnitDiskOpen | DomainSpec::UnitDiskClosed => Ok(Complex64::from_polar(1.0 / outer(rng), theta)),
            _ => Err(Error::BadParams(format!("no sampler for {d}"))),
        },
        _ => Err(Error::BadParams(format!("no sampler for {d}"))),
    }
}

fn sample_poly<R: Rng + ?Sized>(d: &DomainSpec, n: usize, exact: bool, rng: &mut R) -> Result<Polynomial> {
    let degree = if exact { n } else { rng.gen_range(n.saturating_sub(2).max(1)..=n) };
    let roots = (0..degree).map(|_| sample_in_domain(d, rng)).collect::<Result<Vec<_>>>()?;
    let lead = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..2.0 * PI));
    Polynomial::from_roots(&roots, lead).with_nominal_degree(n)
}

/// The six invariance statements for the Möbius domain `Omega` and the limaçon
/// regions `I` (inner loop) and `O` (exterior).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimaconPart {
    /// closed Omega times open I lands in open Omega
    ClosedOmegaOpenI,
    /// open Omega times closed I lands in open Omega
    OpenOmegaClosedI,
    /// complement of open Omega times open O lands outside closed Omega
    ComplementOpenO,
    /// complement of closed Omega times closed O lands outside closed Omega
    ComplementClosedO,
    /// closed I times open I lands in open I
    InnerSelf,
    /// closed O times open O lands in open O
    OuterSelf,
}

impl LimaconPart {
    pub const ALL: [LimaconPart; 6] = [
        LimaconPart::ClosedOmegaOpenI,
        LimaconPart::OpenOmegaClosedI,
        LimaconPart::ComplementOpenO,
        LimaconPart::ComplementClosedO,
        LimaconPart::InnerSelf,
        LimaconPart::OuterSelf,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            LimaconPart::ClosedOmegaOpenI => "closed_omega_open_i",
            LimaconPart::OpenOmegaClosedI => "open_omega_closed_i",
            LimaconPart::ComplementOpenO => "complement_open_o",
            LimaconPart::ComplementClosedO => "complement_closed_o",
            LimaconPart::InnerSelf => "inner_self",
            LimaconPart::OuterSelf => "outer_self",
        }
    }

    /// `(P domain, Q domain, target, exact degree)`.
    fn domains(&self, tau: Complex64, gamma: f64) -> Result<(DomainSpec, DomainSpec, DomainSpec, bool)> {
        let omega = |closed| DomainSpec::omega(tau, gamma, closed);
        Ok(match self {
            LimaconPart::ClosedOmegaOpenI => (omega(true)?, DomainSpec::limacon_i(gamma, false)?, omega(false)?, true),
            LimaconPart::OpenOmegaClosedI => (omega(false)?, DomainSpec::limacon_i(gamma, true)?, omega(false)?, true),
            LimaconPart::ComplementOpenO => (
                omega(false)?.complement(),
                DomainSpec::limacon_o(gamma, false)?,
                omega(true)?.complement(),
                false,
            ),
            LimaconPart::ComplementClosedO => (
                omega(true)?.complement(),
                DomainSpec::limacon_o(gamma, true)?,
                omega(true)?.complement(),
                false,
            ),
            LimaconPart::InnerSelf => (
                DomainSpec::limacon_i(gamma, true)?,
                DomainSpec::limacon_i(gamma, false)?,
                DomainSpec::limacon_i(gamma, false)?,
                true,
            ),
            LimaconPart::OuterSelf => (
                DomainSpec::limacon_o(gamma, true)?,
                DomainSpec::limacon_o(gamma, false)?,
                DomainSpec::limacon_o(gamma, false)?,
                false,
            ),
        })
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..1.0).contains(&gamma) {
        return Err(Error::OutOfRange(format!("gamma = {gamma} not in [0,1)")));
    }
    Ok(())
}

/// Positive arm of one part: random `P`, `Q` from the hypothesis domains, the
/// Grace–Szegő convolution must have its zeros in the target domain.
pub fn run_limacon_part(part: LimaconPart, tau: Complex64, gamma: f64, n: usize, trials: usize, seed: u64) -> Result<TrialReport> {
    check_gamma(gamma)?;
    let (dp, dq, target, exact) = part.domains(tau, gamma)?;
    let opts = RootOptions::default();
    Ok(run_trials(part.name(), seed, trials, |_, rng| {
        let p = sample_poly(&dp, n, exact, rng)?;
        let q = sample_poly(&dq, n, exact, rng)?;
        let h = grace_szego(&p, &q)?;
        let v = root_set_in(&h, &target, BOUNDARY_TOL, &opts)?;
        let degree_ok = !exact || v.degree == n;
        // the defect is an absolute distance; measure it relative to the zero size
        let scale = v.witness.map_or(1.0, |w| w.norm().max(1.0));
        Ok(if v.min_defect.abs() < INDETERMINATE_MARGIN * scale {
            Outcome::Indeterminate
        } else if v.inside && degree_ok {
            Outcome::Pass { margin: v.min_defect }
        } else {
            Outcome::fail(
                part.name(),
                format!("zero {:?} outside {target}, degree {}", v.witness, v.degree),
                vec![p, q, h],
            )
        })
    }))
}

/// Negative arm: a `Q` with one zero `beta` outside the inner limaçon loop and
/// `alpha` on the boundary of Omega with `-alpha beta` outside Omega; the
/// convolution with `(1 - z/alpha)^n` must have that zero.
pub fn run_limacon_negative(tau: Complex64, gamma: f64, n: usize, trials: usize, seed: u64) -> Result<TrialReport> {
    check_gamma(gamma)?;
    let omega = DomainSpec::omega(tau, gamma, false)?;
    let inner = DomainSpec::limacon_i(gamma, false)?;
    let opts = RootOptions::default();
    Ok(run_trials("limacon_negative", seed, trials, |_, rng| {
        let theta = rng.gen_range(0.0..2.0 * PI);
        let beta = Complex64::from_polar(limacon_inner_radius(gamma, theta) * rng.gen_range(1.1..2.5), theta);
        let mut roots = vec![beta];
        for _ in 1..n {
            roots.push(sample_in_domain(&inner, rng)?);
        }
        let q = Polynomial::from_roots(&roots, Complex64::new(1.0, 0.0));

        let mut samples = 256;
        let alpha = loop {
            let best = (0..samples)
                .map(|j| mobius(tau, gamma, Complex64::from_polar(1.0, 2.0 * PI * j as f64 / samples as f64)))
                .filter(|a| a.re.is_finite() && a.im.is_finite())
                .min_by(|a, b| omega.defect(-a * beta).total_cmp(&omega.defect(-b * beta)));
            if let Some(a) = best.filter(|a| omega.defect(-a * beta) < -INDETERMINATE_MARGIN) {
                break Some(a);
            }
            if samples >= NEGATIVE_ARM_MAX_SAMPLES {
                break None;
            }
            samples *= 2;
        };
        let Some(alpha) = alpha else {
            return Ok(Outcome::Indeterminate);
        };
        let p = counterexample_p(alpha, n)?;
        let h = grace_szego(&p, &q)?;
        let target = -alpha * beta;
        let rs = find_roots(&h, &opts)?;
        let nearest = rs
            .roots
            .iter()
            .map(|r| r.location)
            .min_by(|a, b| (a - target).norm().total_cmp(&(b - target).norm()));
        Ok(match nearest {
            Some(z) if (z - target).norm() <= 1e-6 * target.norm().max(1.0) && !omega.accepts(z, BOUNDARY_TOL) => {
                Outcome::Pass { margin: -omega.defect(z) }
            }
            _ => Outcome::fail(
                "negative_arm",
                format!("expected a zero at {target} outside {omega}, nearest {nearest:?}"),
                vec![p, q, h],
            ),
        })
    }))
}

/// All six parts plus the negative arm, merged into one report.
pub fn run_limacon_trial(tau: Complex64, gamma: f64, n: usize, trials: usize, seed: u64) -> Result<TrialReport> {
    let mut parts = Vec::new();
    for (i, part) in LimaconPart::ALL.iter().enumerate() {
        parts.push(run_limacon_part(*part, tau, gamma, n, trials, seed.wrapping_add(i as u64))?);
    }
    parts.push(run_limacon_negative(tau, gamma, n, trials, seed.wrapping_add(6))?);
    Ok(TrialReport::merged("limacon", seed, parts))
}
