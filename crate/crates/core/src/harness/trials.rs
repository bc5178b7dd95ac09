use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::Exp1;

use super::samplers::{sample_d, sample_disk, sample_st, sample_t};
use super::{run_trials, trial_rng, Outcome, TrialReport, INDETERMINATE_MARGIN};
use crate::classes::{half_plane_criterion, in_d, in_d_third, in_disk, in_t, pre_class_test, ClassOptions, PreClass};
use crate::error::{Error, Result};
use crate::herglotz::{build_approximant, evaluate_approximant, sup_error};
use crate::poly::{LambdaParam, Polynomial};
use crate::qconv::{delta, lambda_convolve, pre_unlift, q_extremal};

/// Half-plane samples closer than this to the threshold are redrawn.
pub const HALF_PLANE_MARGIN: f64 = 1e-3;

/// Closed-T times open-T stays in the open class; a G with zeros inside the
/// disk is caught by some rotated extremal polynomial.
pub fn run_suffridge_trial(n: usize, lambda: f64, trials: usize, seed: u64) -> Result<TrialReport> {
    let lp = LambdaParam::new(n, lambda)?;
    lp.require_half_open()?;
    let opts = ClassOptions::default();
    let q = q_extremal(n, lambda)?;
    Ok(run_trials("suffridge", seed, trials, |_, rng| {
        let f = sample_t(n, lambda, false, rng)?;
        let g = sample_t(n, lambda, true, rng)?;
        let h = lambda_convolve(&f, &g, &lp)?;
        let forward = Outcome::from_verdict(&in_t(&h, &lp, false, &opts)?, true, "closure", &[&f, &g, &h]);

        // identity element: Q_n *_lambda F = F, only the closed class is asserted
        let id = lambda_convolve(&q, &f, &lp)?;
        let identity = Outcome::from_verdict(&in_t(&id, &lp, true, &opts)?, true, "identity", &[&f, &id]);

        let bad = g.scale_argument(Complex64::new(1.1, 0.0));
        let mut caught = false;
        for j in 0..16 {
            let b = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / 16.0);
            let probe = lambda_convolve(&q.scale_argument(b), &bad, &lp)?;
            let v = in_t(&probe, &lp, false, &opts)?;
            if !v.member && !v.indeterminate {
                caught = true;
                break;
            }
        }
        let converse = if caught {
            Outcome::Pass { margin: f64::INFINITY }
        } else {
            Outcome::fail("converse", "no rotated extremal polynomial exposes G(1.1z)", vec![bad])
        };
        Ok(Outcome::all([forward, identity, converse]))
    }))
}

/// Closed-D times open-D stays in the open class, and the pre-class of a
/// non-extremal closed member grows into the open pre-class at larger lambda.
pub fn run_main_trial(n: usize, lambda: f64, trials: usize, seed: u64) -> Result<TrialReport> {
    let lp = LambdaParam::new(n, lambda)?;
    lp.require_half_open()?;
    let opts = ClassOptions::default();
    let max = LambdaParam::max_for(n);
    Ok(run_trials("main", seed, trials, |_, rng| {
        let (f, g) = if lp.is_zero() {
            (sample_disk(n, true, rng), sample_disk(n, false, rng))
        } else {
            let f = if rng.gen_bool(0.25) {
                sample_t(n, lambda, false, rng)?
            } else {
                sample_d(n, lambda, false, &opts, rng)?.poly
            };
            let g = if rng.gen_bool(0.25) {
                sample_t(n, lambda, true, rng)?
            } else {
                sample_d(n, lambda, true, &opts, rng)?.poly
            };
            (f, g)
        };
        let h = lambda_convolve(&f, &g, &lp)?;
        let closure = Outcome::from_verdict(&in_d(&h, &lp, false, &opts)?, true, "closure", &[&f, &g, &h]);

        // g is an open member and generic, so g + zeta g* is never extremal
        let small = pre_unlift(&g, &lp)?;
        let mu = lambda + rng.gen_range(0.1..0.9) * (max - lambda);
        let lp_mu = LambdaParam::new(n, mu)?;
        let growth = Outcome::from_verdict(
            &pre_class_test(&small, &lp_mu, PreClass::PdOpen, &opts)?,
            true,
            "growth",
            &[&small],
        );
        Ok(Outcome::all([closure, growth]))
    }))
}

/// `lambda_j = (2 pi / n)(1 - 2^{-j})`, `j = 1..=8`.
pub fn half_plane_grid(n: usize) -> Vec<f64> {
    (1..=8)
        .map(|j| LambdaParam::max_for(n) * (1.0 - 0.5f64.powi(j)))
        .collect()
}

/// Random `p` with `a_n = 1` and `|a_0| < 1/2`: the first half of the trials
/// draws until the half-plane inequality holds, the second half until it fails.
/// Holding must coincide with open pre-class membership at some grid lambda.
pub fn run_half_plane_trial(n: usize, trials: usize, seed: u64) -> Result<TrialReport> {
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    let opts = ClassOptions::default();
    let grid: Vec<LambdaParam> = half_plane_grid(n)
        .into_iter()
        .map(|l| LambdaParam::new(n, l))
        .collect::<Result<_>>()?;
    Ok(run_trials("half_plane", seed, trials, |i, rng| {
        let want = i < trials / 2;
        let mut drawn = None;
        for _ in 0..2000 {
            let scale = rng.gen_range(0.0..1.5);
            let mut c = vec![Complex64::new(0.0, 0.0); n + 1];
            c[n] = Complex64::new(1.0, 0.0);
            c[0] = Complex64::from_polar(0.5 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
            for ck in c.iter_mut().take(n).skip(1) {
                *ck = scale * Complex64::from_polar(rng.gen::<f64>(), rng.gen_range(0.0..2.0 * PI)) / n as f64;
            }
            let p = Polynomial::from_coeffs(c);
            let hp = half_plane_criterion(&p, 1024)?;
            if hp.margin.abs() > HALF_PLANE_MARGIN && hp.holds == want {
                drawn = Some(p);
                break;
            }
        }
        let Some(p) = drawn else {
            return Ok(Outcome::Indeterminate);
        };
        let mut found = false;
        let mut unsure = false;
        for lp in &grid {
            let v = pre_class_test(&p, lp, PreClass::PdOpen, &opts)?;
            if v.indeterminate {
                unsure = true;
            } else if v.member {
                found = true;
                break;
            }
        }
        Ok(if found == want {
            Outcome::Pass { margin: f64::INFINITY }
        } else if unsure {
            Outcome::Indeterminate
        } else {
            Outcome::fail(
                if want { "holds_without_member" } else { "member_without_holding" },
                "half-plane inequality and grid membership disagree",
                vec![p],
            )
        })
    }))
}

/// Zeros of the difference operator stay in the closed (open) disk for closed
/// (open) D members; on self-inversive inputs closed-T membership is equivalent
/// to the image lying in the closed disk, and likewise for the open classes.
pub fn run_gauss_lucas_trial(n: usize, lambda: f64, trials: usize, seed: u64) -> Result<TrialReport> {
    let lp = LambdaParam::new(n, lambda)?;
    lp.require_half_open()?;
    if n < 2 {
        return Err(Error::OutOfRange("n must be at least 2".into()));
    }
    let opts = ClassOptions::default();
    Ok(run_trials("gauss_lucas", seed, trials, |_, rng| {
        let (f, g) = if lp.is_zero() {
            (sample_disk(n, true, rng), sample_disk(n, false, rng))
        } else {
            (
                sample_d(n, lambda, false, &opts, rng)?.poly,
                sample_d(n, lambda, true, &opts, rng)?.poly,
            )
        };
        let df = delta(&f, &lp)?;
        let dg = delta(&g, &lp)?;
        let closed = disk_outcome(&in_disk(&df, true, &opts)?, "closed_image", &[&f, &df]);
        let open = disk_outcome(&in_disk(&dg, false, &opts)?, "open_image", &[&g, &dg]);

        let s = if rng.gen_bool(0.5) { sample_t(n, lambda, false, rng)? } else { sample_st(n, rng) };
        let ds = delta(&s, &lp)?;
        let bi_closed = agree(&in_t(&s, &lp, true, &opts)?, &in_disk(&ds, true, &opts)?, "st_closed", &s);
        let bi_open = agree(&in_t(&s, &lp, false, &opts)?, &in_disk(&ds, false, &opts)?, "st_open", &s);
        Ok(Outcome::all([closed, open, bi_closed, bi_open]))
    }))
}

fn disk_outcome(v: &crate::classes::MembershipVerdict, part: &str, polys: &[&Polynomial]) -> Outcome {
    // images of boundary configurations legitimately touch the circle
    if v.member {
        return Outcome::Pass { margin: v.margin };
    }
    Outcome::from_verdict(v, true, part, polys)
}

fn agree(
    t: &crate::classes::MembershipVerdict,
    d: &crate::classes::MembershipVerdict,
    part: &str,
    s: &Polynomial,
) -> Outcome {
    if t.indeterminate || d.indeterminate {
        return Outcome::Indeterminate;
    }
    if t.member == d.member {
        Outcome::Pass { margin: t.margin.abs().min(d.margin.abs()) }
    } else {
        Outcome::fail(part, format!("T verdict {} but image verdict {}", t.member, d.member), vec![s.clone()])
    }
}

/// Random finite positive measures `f = sum mu_j (1 + e^{i phi_j} z)/(1 - e^{i phi_j} z)`:
/// the weights stay positive and sum to one, the node values sum to `2m`, and
/// the approximant is close to `f(rz)` on `|z| <= 1/2`.
pub fn run_herglotz_trial(trials: usize, seed: u64) -> TrialReport {
    run_trials("herglotz", seed, trials, |_, rng| {
        let atoms = rng.gen_range(1..=6);
        let e: Vec<f64> = (0..atoms).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let total: f64 = e.iter().sum();
        let phis: Vec<f64> = (0..atoms).map(|_| rng.gen_range(0.0..2.0 * PI)).collect();
        // the largest r per k keeps 2 r^{k+1} (1 + r) below (1 - r)^2, which
        // guarantees Re S_k(rz) > 0 for every such measure
        let (k, r_max) = [(8, 0.6), (16, 0.75), (32, 0.85), (64, 0.9)][rng.gen_range(0..4)];
        let r = rng.gen_range(0.3..r_max);
        let coeffs: Vec<Complex64> = (0..=k)
            .map(|j| {
                if j == 0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    e.iter()
                        .zip(&phis)
                        .map(|(mu, phi)| 2.0 * mu / total * Complex64::from_polar(1.0, j as f64 * phi))
                        .sum()
                }
            })
            .collect();
        let f = |z: Complex64| -> Complex64 {
            e.iter()
                .zip(&phis)
                .map(|(mu, phi)| {
                    let w = Complex64::from_polar(1.0, *phi) * r * z;
                    mu / total * (1.0 + w) / (1.0 - w)
                })
                .sum()
        };
        let h = match build_approximant(&coeffs, k, r) {
            Ok(h) => h,
            Err(e @ Error::PositivityLost { .. }) => {
                return Ok(Outcome::fail("positivity", e.to_string(), vec![Polynomial::from_coeffs(coeffs)]));
            }
            Err(e) => return Err(e),
        };
        let m = h.m as f64;
        let node_sum: f64 = h.weights.iter().map(|w| w * 2.0 * m).sum();
        let mut checks = vec![];
        checks.push(if (node_sum - 2.0 * m).abs() <= 1e-9 * 2.0 * m {
            Outcome::Pass { margin: h.weights.iter().copied().fold(f64::INFINITY, f64::min) }
        } else {
            Outcome::fail("partial_fractions", format!("sum P(w) = {node_sum}, m = {m}"), vec![h.p.clone()])
        });
        // coefficients below k are exact; the rest is bounded by 6 |z|^l each
        let bound = 12.0 * 0.5f64.powi(k as i32) + 1e-12;
        let err = sup_error(&h, f, 0.5, 8, 64)?;
        checks.push(if err <= bound {
            Outcome::Pass { margin: f64::INFINITY }
        } else {
            Outcome::fail("approximation", format!("error {err} above {bound}"), vec![h.p.clone()])
        });
        for _ in 0..32 {
            let z = Complex64::from_polar(0.999 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI));
            if !(evaluate_approximant(&h, z)?.re > 0.0) {
                checks.push(Outcome::fail("real_part", format!("Re <= 0 at {z}"), vec![h.p.clone()]));
            }
        }
        Ok(Outcome::all(checks))
    })
}

/// Empirical radius below which random zero configurations stay in the closed
/// D class: bisection on the radius of zeros placed on a circle. No guarantee
/// is attached to the value.
pub fn estimate_r(n: usize, lambda: f64, samples: usize, seed: u64) -> Result<f64> {
    let lp = LambdaParam::new(n, lambda)?;
    lp.require_open()?;
    let opts = ClassOptions::default();
    let passes = |rho: f64| -> Result<bool> {
        for i in 0..samples.max(1) {
            let mut rng = trial_rng(seed, i);
            let roots: Vec<Complex64> = (0..n)
                .map(|_| Complex64::from_polar(rho, rng.gen_range(0.0..2.0 * PI)))
                .collect();
            let f = Polynomial::from_roots(&roots, Complex64::new(1.0, 0.0));
            let v = in_d_third(&f, &lp, true, &opts)?;
            if !v.member {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    if passes(hi - INDETERMINATE_MARGIN)? {
        return Ok(hi);
    }
    for _ in 0..30 {
        let mid = 0.5 * (lo + hi);
        if passes(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suffridge_small() {
        for (n, lambda) in [(3, 0.0), (4, 0.9), (6, 0.5)] {
            let r = run_suffridge_trial(n, lambda, 20, 1).unwrap();
            assert_eq!(r.failures, 0, "{r:?}");
        }
    }

    #[test]
    fn main_small() {
        for (n, lambda) in [(3, 0.0), (4, 0.9), (5, 0.3)] {
            let r = run_main_trial(n, lambda, 20, 2).unwrap();
            assert_eq!(r.failures, 0, "{r:?}");
        }
    }

    #[test]
    fn gauss_lucas_small() {
        for (n, lambda) in [(3, 0.0), (4, 0.9), (5, 0.3)] {
            let r = run_gauss_lucas_trial(n, lambda, 20, 3).unwrap();
            assert_eq!(r.failures, 0, "{r:?}");
        }
    }

    #[test]
    fn herglotz_small() {
        let r = run_herglotz_trial(20, 4);
        assert_eq!(r.failures, 0, "{r:?}");
        assert_eq!(r.indeterminate, 0);
    }

    #[test]
    fn half_plane_small() {
        let r = run_half_plane_trial(4, 10, 5).unwrap();
        assert_eq!(r.failures, 0, "{r:?}");
    }

    #[test]
    fn reports_replay() {
        let a = run_main_trial(4, 0.7, 8, 9).unwrap();
        let b = run_main_trial(4, 0.7, 8, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn r_estimate_is_a_radius() {
        let r = estimate_r(4, 0.5 * LambdaParam::max_for(4), 8, 1).unwrap();
        assert!(r > 0.0 && r <= 1.0);
    }
}
