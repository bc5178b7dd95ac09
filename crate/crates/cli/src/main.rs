mod config;

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use zeroconv::classes::{
    grid_oracle, in_d, in_d_first, in_d_second, in_d_third, in_t, pre_class_test, split, ClassOptions, MembershipVerdict,
    PreClass,
};
use zeroconv::domains::{root_set_in, DomainSpec, BOUNDARY_TOL};
use zeroconv::harness::{
    cell_seed, run_gauss_lucas_trial, run_half_plane_trial, run_herglotz_trial, run_limacon_trial, run_main_trial,
    run_suffridge_trial, standard_grid, TrialReport,
};
use zeroconv::herglotz::{build_approximant, evaluate_approximant};
use zeroconv::qconv::{delta, grace_szego, lambda_convolve, q_coefficient, q_extremal};
use zeroconv::roots::{find_roots, RootOptions};
use zeroconv::{Error, LambdaParam, Polynomial};

use config::{Config, OutputFormat};

#[derive(Parser, Debug)]
#[command(name = "zeroconv", version, about = "Convolutions, zero classes and closure checks for complex polynomials")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format; commands without a CSV form always print JSON.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Settings file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    circle_tol: Option<f64>,
    #[arg(long, global = true)]
    coeff_tol: Option<f64>,
    #[arg(long, global = true)]
    margin_tol: Option<f64>,
    /// Print the effective settings and exit.
    #[arg(long)]
    show_config: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Weight C_k^(n)(lambda) of the lambda-convolution.
    Qcoef { n: usize, k: usize, lambda: f64 },
    /// The polynomial Q_n(lambda; z) = sum C_k z^k.
    Qpoly { n: usize, lambda: f64 },
    /// Grace-Szego or lambda-convolution of two polynomials of the same degree.
    Convolve {
        #[arg(long, value_enum)]
        mode: ConvMode,
        /// Required with `--mode lambda`.
        #[arg(long, allow_negative_numbers = true)]
        lambda: Option<f64>,
        left: PathBuf,
        right: PathBuf,
    },
    /// Zeros with multiplicities and their position relative to the unit circle.
    Roots { poly: PathBuf },
    /// Membership in one of the zero classes.
    Classify(ClassifyArgs),
    /// Zero domains: boundary curves, point tests and zero-set inclusion.
    Domain {
        #[command(subcommand)]
        action: DomainAction,
    },
    /// Convex combination of Mobius kernels approximating a function of positive real part.
    Herglotz {
        /// Taylor coefficients a_0 = 1, a_1, ..., a_k as a polynomial file.
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        r: f64,
    },
    /// Randomized closure checks; exits 1 when a check fails.
    Verify {
        #[arg(long, value_enum)]
        theorem: Theorem,
        /// Trials per grid cell (overrides the settings file).
        #[arg(long)]
        trials: Option<usize>,
        /// Restrict grid theorems to one degree.
        #[arg(long)]
        n: Option<usize>,
        /// Restrict grid theorems to one parameter; needs `--n`.
        #[arg(long, requires = "n")]
        lambda: Option<f64>,
    },
    /// The n-inverse z^n conj(p(1/conj z)).
    Inverse {
        poly: PathBuf,
        /// Nominal degree to pad to before inverting.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// The difference operator, lowering the degree by one.
    Delta {
        poly: PathBuf,
        #[arg(long)]
        lambda: f64,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConvMode {
    Gs,
    Lambda,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Theorem {
    Suffridge,
    Main,
    Limacon,
    Gausslucas,
    Herglotz,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ClassName {
    #[value(name = "T")]
    T,
    #[value(name = "Tbar")]
    TBar,
    #[value(name = "D")]
    D,
    #[value(name = "Dbar")]
    DBar,
    #[value(name = "PT")]
    Pt,
    #[value(name = "PTbar")]
    PtBar,
    #[value(name = "PD")]
    Pd,
    #[value(name = "PDbar")]
    PdBar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodName {
    First,
    Second,
    Third,
    Oracle,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Expect {
    Member,
    Nonmember,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    poly: PathBuf,
    #[arg(long, value_enum)]
    class: ClassName,
    #[arg(long)]
    lambda: f64,
    /// Characterization to use for D classes; default picks one.
    #[arg(long, value_enum)]
    method: Option<MethodName>,
    /// Exit 1 unless every verdict agrees.
    #[arg(long, value_enum)]
    expect: Option<Expect>,
}

#[derive(Subcommand, Debug)]
enum DomainAction {
    /// Sampled boundary curve as `re,im` lines (or a JSON array).
    Boundary {
        #[arg(long)]
        spec: DomainSpec,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Location of points given as `re,im`.
    Contains {
        #[arg(long)]
        spec: DomainSpec,
        #[arg(required = true, allow_hyphen_values = true)]
        points: Vec<String>,
    },
    /// Whether every zero of a polynomial lies in the domain.
    RootsIn {
        #[arg(long)]
        spec: DomainSpec,
        poly: PathBuf,
        #[arg(long, value_enum)]
        expect: Option<Expect>,
    },
}

enum CliError {
    Usage(String),
    Verdict(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Verdict(_) => 1,
            CliError::Core(Error::NoConvergence { .. }) => 3,
            CliError::Core(
                Error::Parse(_)
                | Error::DegreeMismatch { .. }
                | Error::OutOfRange(_)
                | Error::BadParams(_)
                | Error::HypothesisViolated(_)
                | Error::ZeroPolynomial,
            ) => 2,
            CliError::Core(_) => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Verdict(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

struct Ctx {
    cfg: Config,
    format: OutputFormat,
    out: Option<PathBuf>,
}

impl Ctx {
    fn class_options(&self) -> ClassOptions {
        self.cfg.class_options()
    }

    fn root_options(&self) -> RootOptions {
        self.class_options().roots
    }

    fn emit(&self, text: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }

    fn emit_json<T: Serialize>(&self, value: &T) -> CliResult<()> {
        let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Usage(e.to_string()))?;
        s.push('\n');
        self.emit(&s)
    }
}

fn read_poly(path: &Path) -> CliResult<Polynomial> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn parse_point(s: &str) -> CliResult<Complex64> {
    let bad = || CliError::Usage(format!("expected a point `re,im`, got {s:?}"));
    let (re, im) = s.split_once(',').ok_or_else(bad)?;
    Ok(Complex64::new(
        re.trim().parse().map_err(|_| bad())?,
        im.trim().parse().map_err(|_| bad())?,
    ))
}

fn check_expect(expect: Option<Expect>, members: &[bool]) -> CliResult<()> {
    match expect {
        Some(Expect::Member) if members.iter().any(|m| !m) => Err(CliError::Verdict("expected a member".into())),
        Some(Expect::Nonmember) if members.iter().any(|m| *m) => Err(CliError::Verdict("expected a non-member".into())),
        _ => Ok(()),
    }
}

fn effective_config(cli: &Cli) -> CliResult<Config> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(CliError::Usage)?,
        None => Config::default(),
    };
    if let Some(v) = cli.seed {
        cfg.rng_seed = v;
    }
    if let Some(v) = cli.circle_tol {
        cfg.circle_tol = v;
    }
    if let Some(v) = cli.coeff_tol {
        cfg.coeff_tol = v;
    }
    if let Some(v) = cli.margin_tol {
        cfg.margin_tol = v;
    }
    if let Some(v) = cli.format {
        cfg.output_format = v;
    }
    if let Some(Command::Verify { trials: Some(t), .. }) = &cli.command {
        cfg.trials = *t;
    }
    cfg.validate().map_err(CliError::Usage)?;
    Ok(cfg)
}

fn classify(ctx: &Ctx, a: &ClassifyArgs) -> CliResult<()> {
    let f = read_poly(&a.poly)?;
    let lp = LambdaParam::new(f.nominal_degree(), a.lambda)?;
    let opts = ctx.class_options();
    let closed = matches!(a.class, ClassName::TBar | ClassName::DBar | ClassName::PtBar | ClassName::PdBar);
    if a.method == Some(MethodName::All) {
        return classify_all(ctx, a, &f, &lp, closed, &opts);
    }
    let verdicts: Vec<MembershipVerdict> = match (a.class, a.method) {
        (ClassName::T | ClassName::TBar, None) => vec![in_t(&f, &lp, closed, &opts)?],
        (ClassName::D | ClassName::DBar, None) => vec![in_d(&f, &lp, closed, &opts)?],
        (ClassName::D | ClassName::DBar, Some(m)) => {
            vec![d_method(m, &f, &lp, closed, &opts)?]
        }
        (ClassName::Pt | ClassName::PtBar | ClassName::Pd | ClassName::PdBar, None) => {
            let which = match a.class {
                ClassName::Pt => PreClass::PtOpen,
                ClassName::PtBar => PreClass::PtClosed,
                ClassName::Pd => PreClass::PdOpen,
                _ => PreClass::PdClosed,
            };
            vec![pre_class_test(&f, &lp, which, &opts)?]
        }
        (_, Some(_)) => return Err(CliError::Usage("--method applies to the D classes only".into())),
    };
    ctx.emit_json(&verdicts[0])?;
    check_expect(a.expect, &[verdicts[0].member])
}

fn d_method(
    m: MethodName,
    f: &Polynomial,
    lp: &LambdaParam,
    closed: bool,
    opts: &ClassOptions,
) -> zeroconv::Result<MembershipVerdict> {
    match m {
        MethodName::First => in_d_first(f, lp, closed, opts.zeta_count, opts),
        MethodName::Second => {
            let (p, q) = split(f);
            in_d_second(&p, &q, lp, closed, opts)
        }
        MethodName::Third => in_d_third(f, lp, closed, opts),
        MethodName::Oracle | MethodName::All => grid_oracle(f, lp, closed, opts),
    }
}

/// One entry per characterization; a method that cannot handle the input
/// reports its error instead of aborting the others.
#[derive(Serialize)]
struct MethodResult {
    method: MethodName,
    #[serde(skip_serializing_if = "Option::is_none")]
    verdict: Option<MembershipVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn classify_all(
    ctx: &Ctx,
    a: &ClassifyArgs,
    f: &Polynomial,
    lp: &LambdaParam,
    closed: bool,
    opts: &ClassOptions,
) -> CliResult<()> {
    if !matches!(a.class, ClassName::D | ClassName::DBar) {
        return Err(CliError::Usage("--method applies to the D classes only".into()));
    }
    let mut results = Vec::new();
    for m in [MethodName::First, MethodName::Second, MethodName::Third, MethodName::Oracle] {
        results.push(match d_method(m, f, lp, closed, opts) {
            Ok(v) => MethodResult { method: m, verdict: Some(v), error: None },
            Err(e @ Error::NoConvergence { .. }) => return Err(e.into()),
            Err(e) => MethodResult { method: m, verdict: None, error: Some(e.to_string()) },
        });
    }
    if results.iter().all(|r| r.verdict.is_none()) {
        return Err(CliError::Verdict("no characterization applies".into()));
    }
    ctx.emit_json(&results)?;
    let members: Vec<bool> = results.iter().filter_map(|r| r.verdict.as_ref().map(|v| v.member)).collect();
    check_expect(a.expect, &members)
}

/// Shortest round-trip form, switching to exponent notation for very small or large magnitudes.
fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || (1e-4..1e16).contains(&a) || !a.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[derive(Serialize)]
struct PointLocation {
    z: Complex64,
    location: zeroconv::domains::Location,
    defect: f64,
}

fn domain(ctx: &Ctx, action: &DomainAction) -> CliResult<()> {
    match action {
        DomainAction::Boundary { spec, samples } => {
            let samples = samples.unwrap_or(ctx.cfg.boundary_samples);
            if samples < 2 {
                return Err(CliError::Usage("--samples must be at least 2".into()));
            }
            let pts = spec.boundary(samples);
            match ctx.format {
                OutputFormat::Json => ctx.emit_json(&pts),
                OutputFormat::Csv => {
                    let mut s = String::from("re,im\n");
                    for z in &pts {
                        let _ = writeln!(s, "{},{}", num(z.re), num(z.im));
                    }
                    ctx.emit(&s)
                }
            }
        }
        DomainAction::Contains { spec, points } => {
            let res = points
                .iter()
                .map(|p| {
                    let z = parse_point(p)?;
                    Ok(PointLocation {
                        z,
                        location: spec.contains(z, BOUNDARY_TOL),
                        defect: spec.defect(z),
                    })
                })
                .collect::<CliResult<Vec<_>>>()?;
            ctx.emit_json(&res)
        }
        DomainAction::RootsIn { spec, poly, expect } => {
            let p = read_poly(poly)?;
            let v = root_set_in(&p, spec, BOUNDARY_TOL, &ctx.root_options())?;
            ctx.emit_json(&v)?;
            check_expect(*expect, &[v.inside])
        }
    }
}

fn herglotz(ctx: &Ctx, coeffs: &Path, k: usize, r: f64) -> CliResult<()> {
    let a = read_poly(coeffs)?;
    if a.nominal_degree() < k {
        return Err(CliError::Usage(format!(
            "--k {k} needs {} coefficients, the file has {}",
            k + 1,
            a.nominal_degree() + 1
        )));
    }
    let h = build_approximant(a.coeffs(), k, r)?;
    match ctx.format {
        OutputFormat::Json => ctx.emit_json(&h),
        OutputFormat::Csv => {
            // distance to the partial sum sum_{j<=k} a_j (r z)^j on circles of growing radius
            let target: Vec<Complex64> = (0..=k).map(|j| a.coeff(j) * r.powi(j as i32)).collect();
            let target = Polynomial::from_coeffs(target);
            let mut s = String::from("radius,sup_error\n");
            for i in 1..=19 {
                let rho = i as f64 / 20.0;
                let mut worst: f64 = 0.0;
                for j in 0..256 {
                    let z = Complex64::from_polar(rho, 2.0 * PI * j as f64 / 256.0);
                    worst = worst.max((evaluate_approximant(&h, z)? - target.evaluate(z)).norm());
                }
                let _ = writeln!(s, "{},{}", num(rho), num(worst));
            }
            ctx.emit(&s)
        }
    }
}

fn verify(ctx: &Ctx, theorem: Theorem, n: Option<usize>, lambda: Option<f64>) -> CliResult<()> {
    let seed = ctx.cfg.rng_seed;
    let trials = ctx.cfg.trials;
    let cells = match (n, lambda) {
        (Some(n), Some(l)) => vec![LambdaParam::new(n, l)?],
        (Some(n), None) => standard_grid().into_iter().filter(|lp| lp.n() == n).collect(),
        _ => standard_grid(),
    };
    if cells.is_empty() {
        return Err(CliError::Usage("no grid cells match --n".into()));
    }
    let grid = |id: &str, run: &dyn Fn(&LambdaParam) -> zeroconv::Result<TrialReport>| -> CliResult<TrialReport> {
        let parts = cells.iter().map(run).collect::<zeroconv::Result<Vec<_>>>()?;
        Ok(TrialReport::merged(id, seed, parts))
    };
    let report = match theorem {
        Theorem::Suffridge => grid("suffridge", &|lp| {
            run_suffridge_trial(lp.n(), lp.lambda(), trials, cell_seed(seed, lp))
        })?,
        Theorem::Main => {
            let mut r = grid("main", &|lp| run_main_trial(lp.n(), lp.lambda(), trials, cell_seed(seed, lp)))?;
            let degrees: Vec<usize> = match n {
                Some(n) => vec![n],
                None => (2..=8).collect(),
            };
            for d in degrees {
                r.merge(run_half_plane_trial(d, trials, seed.wrapping_add(d as u64))?);
            }
            r
        }
        Theorem::Gausslucas => grid("gausslucas", &|lp| {
            run_gauss_lucas_trial(lp.n(), lp.lambda(), trials, cell_seed(seed, lp))
        })?,
        Theorem::Limacon => {
            let mut parts = Vec::new();
            for (gi, gamma) in [0.0, 0.25, 0.5, 0.9].into_iter().enumerate() {
                for (ti, tau) in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)].into_iter().enumerate() {
                    for deg in n.map_or(vec![3, 5, 8], |n| vec![n]) {
                        let s = seed ^ (((gi * 100 + ti * 10) as u64 + deg as u64) << 16);
                        parts.push(run_limacon_trial(tau, gamma, deg, trials, s)?);
                    }
                }
            }
            TrialReport::merged("limacon", seed, parts)
        }
        Theorem::Herglotz => run_herglotz_trial(trials * 10, seed),
    };
    ctx.emit_json(&report)?;
    if report.passed(ctx.cfg.max_indeterminate) {
        Ok(())
    } else {
        Err(CliError::Verdict(format!(
            "{}: {} failures, {} indeterminate of {} trials",
            report.theorem_id, report.failures, report.indeterminate, report.trials
        )))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = effective_config(&cli)?;
    if cli.show_config {
        print!("{}", cfg.to_toml());
        return Ok(());
    }
    let ctx = Ctx {
        format: cfg.output_format,
        out: cli.out.clone(),
        cfg,
    };
    let Some(command) = cli.command else {
        return Err(CliError::Usage("a subcommand is required; see --help".into()));
    };
    match command {
        Command::Qcoef { n, k, lambda } => ctx.emit(&format!("{}\n", q_coefficient(n, k, lambda)?)),
        Command::Qpoly { n, lambda } => ctx.emit_json(&q_extremal(n, lambda)?),
        Command::Convolve { mode, lambda, left, right } => {
            let (f, g) = (read_poly(&left)?, read_poly(&right)?);
            let h = match (mode, lambda) {
                (ConvMode::Gs, None) => grace_szego(&f, &g)?,
                (ConvMode::Gs, Some(_)) => return Err(CliError::Usage("--lambda only applies to --mode lambda".into())),
                (ConvMode::Lambda, Some(l)) => lambda_convolve(&f, &g, &LambdaParam::new(f.nominal_degree(), l)?)?,
                (ConvMode::Lambda, None) => return Err(CliError::Usage("--mode lambda needs --lambda".into())),
            };
            ctx.emit_json(&h)
        }
        Command::Roots { poly } => {
            let rs = find_roots(&read_poly(&poly)?, &ctx.root_options())?;
            match ctx.format {
                OutputFormat::Json => ctx.emit_json(&rs),
                OutputFormat::Csv => {
                    let mut s = String::new();
                    for r in &rs.roots {
                        let _ = writeln!(s, "{},{},{},{}", num(r.location.re), num(r.location.im), r.multiplicity, r.tag.as_str());
                    }
                    ctx.emit(&s)
                }
            }
        }
        Command::Classify(a) => classify(&ctx, &a),
        Command::Domain { action } => domain(&ctx, &action),
        Command::Herglotz { coeffs, k, r } => herglotz(&ctx, &coeffs, k, r),
        Command::Verify { theorem, n, lambda, .. } => verify(&ctx, theorem, n, lambda),
        Command::Inverse { poly, degree } => {
            let mut p = read_poly(&poly)?;
            if let Some(m) = degree {
                p = p.with_nominal_degree(m)?;
            }
            ctx.emit_json(&p.n_inverse())
        }
        Command::Delta { poly, lambda } => {
            let p = read_poly(&poly)?;
            ctx.emit_json(&delta(&p, &LambdaParam::new(p.nominal_degree(), lambda)?)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("zeroconv: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
