//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines reach stdout. The process
//! exits non-zero if a criterion fails, except criterion 9, whose convergence
//! target is unattainable for the stated parameters (see `herglotz_criterion`).

use std::f64::consts::PI;
use std::time::Instant;

use rand::Rng;
use zeroconv::classes::{
    extremal_family, grid_oracle, in_d, in_d_first, in_d_second, in_d_third, in_t, split, ClassOptions,
    MembershipVerdict,
};
use zeroconv::domains::counterexample_p;
use zeroconv::harness::{
    cell_seed, run_gauss_lucas_trial, run_half_plane_trial, run_herglotz_trial, run_limacon_negative,
    run_limacon_part, run_main_trial, run_suffridge_trial, sample_d, standard_grid, trial_rng, LimaconPart,
    TrialReport,
};
use zeroconv::herglotz::{build_approximant, default_schedule, sup_error};
use zeroconv::qconv::{binomial, grace_szego, lambda_convolve, q_coefficient, q_extremal};
use zeroconv::roots::{find_roots, RootOptions};
use zeroconv::{Complex64, Error, LambdaParam, Polynomial};

const SEED: u64 = 0x5eed_2024;

struct Verdict {
    pass: bool,
    detail: String,
    /// Set for a failure that is documented as unattainable.
    documented: bool,
}

impl Verdict {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Verdict { pass, detail: detail.into(), documented: false }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_poly<R: Rng>(n: usize, rng: &mut R) -> Polynomial {
    Polynomial::from_coeffs((0..=n).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect())
}

fn rel(a: &Polynomial, b: &Polynomial) -> f64 {
    let scale = a.max_modulus().max(b.max_modulus()).max(f64::MIN_POSITIVE);
    (0..=a.nominal_degree().max(b.nominal_degree()))
        .map(|k| (a.coeff(k) - b.coeff(k)).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Expansion of `prod_{j=1}^{n} (1 + e^{i (2j - n - 1) lambda / 2} z)`.
fn product_oracle(n: usize, lambda: f64) -> Vec<Complex64> {
    let mut c = vec![c(1.0, 0.0)];
    for j in 1..=n {
        let w = Complex64::from_polar(1.0, (2.0 * j as f64 - n as f64 - 1.0) * lambda / 2.0);
        let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
        for (k, v) in c.iter().enumerate() {
            next[k] += v;
            next[k + 1] += v * w;
        }
        c = next;
    }
    c
}

fn coefficient_identities() -> Verdict {
    let mut worst: f64 = 0.0;
    let mut binom_ok = true;
    let mut maximal: f64 = 0.0;
    for n in 1..=16usize {
        let max = LambdaParam::max_for(n);
        for j in 0..32 {
            let lambda = max * j as f64 / 32.0;
            let oracle = product_oracle(n, lambda);
            let scale = oracle.iter().fold(0.0_f64, |m, v| m.max(v.norm()));
            for (k, o) in oracle.iter().enumerate() {
                let v = q_coefficient(n, k, lambda).unwrap();
                worst = worst.max((o - v).norm() / scale);
            }
        }
        for k in 0..=n {
            let v = q_coefficient(n, k, 0.0).unwrap();
            binom_ok &= v.round() == v && v == binomial(n, k);
        }
        let q = q_extremal(n, max).unwrap();
        let target = Polynomial::monomial(n, n, c(1.0, 0.0)).add(&Polynomial::monomial(n, 0, c(1.0, 0.0)));
        maximal = maximal.max(rel(&q, &target));
    }
    Verdict::new(
        worst <= 1e-12 && binom_ok && maximal <= 1e-12,
        format!("max rel dev {worst:.2e}, binomials exact {binom_ok}, 1+z^n dev {maximal:.2e}"),
    )
}

fn algebraic_laws() -> Verdict {
    let mut worst = [0.0_f64; 6];
    for i in 0..200 {
        let mut rng = trial_rng(SEED, i);
        let n = rng.gen_range(1..=12usize);
        let lambda = rng.gen_range(0.0..0.999) * LambdaParam::max_for(n);
        let lp = LambdaParam::new(n, lambda).unwrap();
        let (p, q, r) = (random_poly(n, &mut rng), random_poly(n, &mut rng), random_poly(n, &mut rng));
        let cu = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));

        let pq = lambda_convolve(&p, &q, &lp).unwrap();
        worst[0] = worst[0].max(rel(&pq.n_inverse(), &lambda_convolve(&p.n_inverse(), &q.n_inverse(), &lp).unwrap()));

        let lhs = p.scale_argument(cu).n_inverse();
        let rhs = p.n_inverse().scale_argument(cu).scale(cu.conj().powu(n as u32));
        worst[1] = worst[1].max(rel(&lhs, &rhs));

        let left = lambda_convolve(&pq, &r, &lp).unwrap();
        let right = lambda_convolve(&p, &lambda_convolve(&q, &r, &lp).unwrap(), &lp).unwrap();
        worst[2] = worst[2].max(rel(&left, &right));

        let id = lambda_convolve(&q_extremal(n, lambda).unwrap(), &p, &lp).unwrap();
        worst[3] = worst[3].max(rel(&id, &p));

        // z (1 + z)^{n-1} picks out z F'(z) / n
        let kernel = Polynomial::from_roots(&vec![c(-1.0, 0.0); n - 1], c(1.0, 0.0))
            .mul(&Polynomial::from_real(&[0.0, 1.0]));
        let zf = p.derivative().mul(&Polynomial::from_real(&[0.0, 1.0])).scale(c(1.0 / n as f64, 0.0));
        worst[4] = worst[4].max(rel(&grace_szego(&p, &kernel).unwrap(), &zf));

        let lp0 = LambdaParam::new(n, 0.0).unwrap();
        worst[5] = worst[5].max(rel(&lambda_convolve(&p, &q, &lp0).unwrap(), &grace_szego(&p, &q).unwrap()));
    }
    Verdict::new(
        worst.iter().all(|w| *w <= 1e-11),
        format!(
            "inverse {:.1e}, rotation {:.1e}, assoc {:.1e}, identity {:.1e}, derivative {:.1e}, lambda0 {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4], worst[5]
        ),
    )
}

fn grid_reports(f: impl Fn(&LambdaParam) -> TrialReport) -> TrialReport {
    TrialReport::merged("grid", SEED, standard_grid().iter().map(f))
}

fn describe(r: &TrialReport) -> String {
    format!(
        "{} trials, {} failures, {} indeterminate ({:.2}%), worst margin {:.2e}",
        r.trials,
        r.failures,
        r.indeterminate,
        100.0 * r.indeterminate_fraction(),
        r.worst_margin
    )
}

fn suffridge_closure() -> Verdict {
    let r = grid_reports(|lp| run_suffridge_trial(lp.n(), lp.lambda(), 100, cell_seed(SEED, lp)).unwrap());
    Verdict::new(r.passed(0.05), describe(&r))
}

fn main_closure() -> Verdict {
    let r = grid_reports(|lp| run_main_trial(lp.n(), lp.lambda(), 100, cell_seed(SEED, lp)).unwrap());
    // 15 per degree: 105 drawn to hold and 105 drawn to fail
    let hp = TrialReport::merged(
        "half_plane",
        SEED,
        (2..=8).map(|n| run_half_plane_trial(n, 30, SEED + n as u64).unwrap()),
    );
    Verdict::new(
        r.failures == 0 && hp.failures == 0 && hp.indeterminate_fraction() <= 0.05,
        format!("closure: {}; half-plane: {}", describe(&r), describe(&hp)),
    )
}

fn characterization_agreement() -> Verdict {
    let opts = ClassOptions::default();
    let mut compared = 0;
    let mut second = 0;
    let mut disagreements = Vec::new();
    let mut members = 0;
    for i in 0..500 {
        let mut rng = trial_rng(SEED ^ 5, i);
        let n = rng.gen_range(2..=8usize);
        let lambda = rng.gen_range(0.05..0.95) * LambdaParam::max_for(n);
        let lp = LambdaParam::new(n, lambda).unwrap();
        let reach = rng.gen_range(0.2..1.0);
        let roots: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(reach * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let f = Polynomial::from_roots(&roots, Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI)));
        let mut verdicts: Vec<MembershipVerdict> = vec![
            in_d_third(&f, &lp, true, &opts).unwrap(),
            in_d_first(&f, &lp, true, 64, &opts).unwrap(),
            grid_oracle(&f, &lp, true, &opts).unwrap(),
        ];
        let (p, q) = split(&f);
        if let Ok(v) = in_d_second(&p, &q, &lp, true, &opts) {
            verdicts.push(v);
            second += 1;
        }
        if verdicts.iter().any(|v| v.indeterminate || v.margin.abs() <= 1e-6) {
            continue;
        }
        compared += 1;
        members += verdicts[0].member as usize;
        if verdicts.iter().any(|v| v.member != verdicts[0].member) {
            disagreements.push(i);
        }
    }
    Verdict::new(
        disagreements.is_empty() && compared >= 400,
        format!(
            "{compared} of 500 compared ({members} members, second route on {second}), disagreements {:?}",
            disagreements
        ),
    )
}

fn gauss_lucas() -> Verdict {
    let r = grid_reports(|lp| run_gauss_lucas_trial(lp.n(), lp.lambda(), 100, cell_seed(SEED ^ 6, lp)).unwrap());
    Verdict::new(r.failures == 0 && r.indeterminate_fraction() <= 0.05, describe(&r))
}

fn extremal() -> Verdict {
    let opts = ClassOptions::default();
    let roots = RootOptions::default();
    let mut bad = Vec::new();
    let mut worst_circle: f64 = 0.0;
    let mut worst_identity: f64 = 0.0;
    for i in 0..100 {
        let mut rng = trial_rng(SEED ^ 7, i);
        let n = rng.gen_range(2..=8usize);
        let lambda = rng.gen_range(0.02..0.98) * LambdaParam::max_for(n);
        let lp = LambdaParam::new(n, lambda).unwrap();
        let psi = rng.gen_range(0.1..PI - 0.1) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let cu = Complex64::from_polar(1.0, psi);
        let a = -psi.signum() * rng.gen_range(0.1..3.0);
        let b = rng.gen_range(-3.0..3.0);
        let p = extremal_family(n, lambda, a, b, cu).unwrap();
        let rs = find_roots(&p, &roots).unwrap();
        let circle = rs.roots.iter().map(|r| (r.location.norm() - 1.0).abs()).fold(0.0, f64::max);
        worst_circle = worst_circle.max(circle);
        let qn = q_extremal(n, lambda).unwrap();
        let f = p.sub(&qn);
        let identity = f.sub(&f.n_inverse().scale(cu * cu)).sub(&qn.scale(cu * cu - 1.0));
        let dev = (0..=n).map(|k| identity.coeff(k).norm()).fold(0.0, f64::max);
        worst_identity = worst_identity.max(dev);
        let d = in_d_third(&f, &lp, true, &opts).unwrap();
        let t = in_t(&f, &lp, true, &opts).unwrap();
        if rs.degree() != n || circle > 1e-7 || dev > 1e-10 || !d.member || t.member {
            bad.push(i);
        }
    }
    Verdict::new(
        bad.is_empty(),
        format!("max ||root|-1| {worst_circle:.1e}, max identity dev {worst_identity:.1e}, bad instances {bad:?}"),
    )
}

fn limacon() -> Verdict {
    let taus = [c(1.0, 0.0), c(0.0, 2.0)];
    let mut positive = Vec::new();
    let mut negative = Vec::new();
    for (gi, gamma) in [0.0, 0.25, 0.5, 0.9].into_iter().enumerate() {
        for (ti, tau) in taus.into_iter().enumerate() {
            for (pi, part) in LimaconPart::ALL.into_iter().enumerate() {
                for (ni, n) in [3usize, 5, 8].into_iter().enumerate() {
                    let seed = SEED ^ ((gi * 1000 + ti * 100 + pi * 10 + ni) as u64) << 8;
                    let trials = if ni == 0 { 68 } else { 66 };
                    positive.push(run_limacon_part(part, tau, gamma, n, trials, seed).unwrap());
                }
            }
            let seed = SEED ^ ((gi * 10 + ti) as u64) << 24;
            negative.push(run_limacon_negative(tau, gamma, 2 + 3 * ti, 50, seed).unwrap());
        }
    }
    let pos = TrialReport::merged("limacon_positive", SEED, positive);
    let neg = TrialReport::merged("limacon_negative", SEED, negative);
    // each negative trial must end in a verified external zero, not in Indeterminate
    Verdict::new(
        pos.failures == 0 && pos.indeterminate_fraction() <= 0.05 && neg.failures == 0 && neg.indeterminate == 0,
        format!("positive: {}; negative: {}", describe(&pos), describe(&neg)),
    )
}

fn herglotz_criterion() -> Verdict {
    let random = run_herglotz_trial(200, SEED ^ 9);
    let cayley: Vec<Complex64> = (0..=128).map(|j| c(if j == 0 { 1.0 } else { 2.0 }, 0.0)).collect();
    let f = |z: Complex64| (1.0 + z) / (1.0 - z);
    let errors: Vec<f64> = default_schedule(4)
        .into_iter()
        .map(|(k, r)| sup_error(&build_approximant(&cayley, k, r).unwrap(), f, 0.5, 16, 128).unwrap())
        .collect();
    let monotone = errors.windows(2).all(|w| w[1] < w[0]);
    let at_target = build_approximant(&cayley, 64, 0.95);
    let positivity_lost = matches!(at_target, Err(Error::PositivityLost { .. }));
    // the approximant converges to f(rz); its distance from f bounds the error from below
    let floor = (0..=128)
        .map(|j| {
            let z = Complex64::from_polar(0.5, 2.0 * PI * j as f64 / 128.0);
            (f(z) - f(0.95 * z)).norm()
        })
        .fold(0.0, f64::max);
    let attainable_parts = random.failures == 0 && random.indeterminate == 0 && monotone;
    let detail = format!(
        "weights/sums/approximation over random measures: {}; schedule errors {:?} monotone {monotone}; \
         target (k=64, r=0.95) unattainable: positivity lost {positivity_lost}, sup |f - f(0.95z)| on |z|<=0.5 = {floor:.3} > 0.05",
        describe(&random),
        errors.iter().map(|e| format!("{e:.3}")).collect::<Vec<_>>()
    );
    Verdict {
        pass: false,
        detail,
        // documented only while the sub-criteria that can hold do hold
        documented: attainable_parts && positivity_lost && floor > 0.05,
    }
}

fn dichotomy_monotonicity() -> Verdict {
    let opts = ClassOptions::default();
    let mut mixed_accepted = Vec::new();
    let mut chain_violations = Vec::new();
    let mut checked = 0;
    for i in 0..300 {
        let mut rng = trial_rng(SEED ^ 10, i);
        let n = rng.gen_range(2..=8usize);
        let max = LambdaParam::max_for(n);
        let lambda = rng.gen_range(0.05..0.95) * max;
        let lp = LambdaParam::new(n, lambda).unwrap();

        // mixed zero locations: some on the circle, the rest inside
        let on = rng.gen_range(1..n);
        let roots: Vec<Complex64> = (0..n)
            .map(|k| {
                let rho = if k < on { 1.0 } else { rng.gen_range(0.0..0.95) };
                Complex64::from_polar(rho, rng.gen_range(0.0..2.0 * PI))
            })
            .collect();
        let mixed = Polynomial::from_roots(&roots, c(1.0, 0.0));
        if in_d(&mixed, &lp, true, &opts).unwrap().member {
            mixed_accepted.push(i);
        }
        let sampled = sample_d(n, lambda, false, &opts, &mut rng).unwrap().poly;
        let rs = find_roots(&sampled, &opts.roots).unwrap();
        let on_count = rs.roots.iter().filter(|r| r.tag == zeroconv::roots::CircleTag::On).count();
        if in_d(&sampled, &lp, true, &opts).unwrap().member && on_count != 0 && on_count != rs.roots.len() {
            mixed_accepted.push(i);
        }

        // lambda chain: membership may only be lost as lambda grows
        let reach = rng.gen_range(0.2..1.0);
        let roots: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(reach * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..2.0 * PI)))
            .collect();
        let f = Polynomial::from_roots(&roots, c(1.0, 0.0));
        let chain: Vec<Option<bool>> = (1..=8)
            .map(|j| {
                let lp = LambdaParam::new(n, max * j as f64 / 9.0).unwrap();
                let v = in_d(&f, &lp, true, &opts).unwrap();
                (!v.indeterminate && v.margin.abs() > 1e-6).then_some(v.member)
            })
            .collect();
        checked += 1;
        for a in 0..chain.len() {
            for b in a + 1..chain.len() {
                if let (Some(false), Some(true)) = (chain[a], chain[b]) {
                    chain_violations.push(i);
                }
            }
        }
    }
    chain_violations.dedup();
    // (1 - z/alpha)^n with alpha on the circle: a single n-fold zero on the circle
    let probe = counterexample_p(c(0.0, 1.0), 4).unwrap();
    let lp = LambdaParam::new(4, 0.5).unwrap();
    let repeated_rejected = !in_d(&probe, &lp, true, &opts).unwrap().member;
    Verdict::new(
        mixed_accepted.is_empty() && chain_violations.is_empty() && repeated_rejected,
        format!(
            "mixed accepted {mixed_accepted:?}, chains checked {checked}, violations {chain_violations:?}, \
             repeated circle zero rejected {repeated_rejected}"
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Verdict, f64); 10] = [
        ("coefficient identities", coefficient_identities, 1.0),
        ("algebraic laws", algebraic_laws, 5.0),
        ("suffridge closure", suffridge_closure, 60.0),
        ("main-theorem closure", main_closure, 120.0),
        ("characterization agreement", characterization_agreement, f64::INFINITY),
        ("q-Gauss-Lucas", gauss_lucas, f64::INFINITY),
        ("extremal family", extremal, f64::INFINITY),
        ("limacon invariance", limacon, 120.0),
        ("herglotz constructor", herglotz_criterion, f64::INFINITY),
        ("dichotomy and monotonicity", dichotomy_monotonicity, f64::INFINITY),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = run();
        let secs = start.elapsed().as_secs_f64();
        let in_time = secs <= *budget;
        let pass = v.pass && in_time;
        let status = if pass { "PASS" } else { "FAIL" };
        let budget_note = if budget.is_finite() { format!(", budget {budget} s") } else { String::new() };
        println!("criterion {:>2} {status} {name}: {} [{secs:.2} s{budget_note}]", i + 1, v.detail);
        if !pass && v.documented {
            println!("             documented as unattainable for the stated parameters; not counted");
        } else if !pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all attainable criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
