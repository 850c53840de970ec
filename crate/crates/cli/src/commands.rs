//! Subcommand implementations. Every command is deterministic given its
//! flags; artifacts land in `--out` (default `.`).

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use permcd::bounds::RateReport;
use permcd::exactpoly;
use permcd::instances;
use permcd::operators;
use permcd::runners::{self, RunConfig, RunTarget};
use permcd::worstcase;
use permcd::{Algorithm, ObjectiveSpec, QuadraticInstance};

use crate::presets::{self, Preset, PresetId};
use crate::svg;

pub enum CmdError {
    VerificationFailed(String),
    Numerical(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for CmdError {
    fn from(e: E) -> Self {
        CmdError::Numerical(e.into())
    }
}

type CmdResult = Result<(), CmdError>;

fn write_artifact(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CmdError> {
    fs::create_dir_all(dir).map_err(|e| CmdError::Numerical(e.into()))?;
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CmdError::Numerical(e.into()))?;
    println!("wrote {}", path.display());
    Ok(path)
}

// ---------------------------------------------------------------- bounds --

pub fn bounds(n: usize, sigma: f64, json: bool) -> CmdResult {
    let report = RateReport::build(n, sigma)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serialization"));
        return Ok(());
    }
    let fmt_opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.12}"));
    println!("rates at n = {n}, sigma = {sigma}");
    println!("{:<34} {:>18}", "quantity", "value");
    println!("{:<34} {:>18.12}", "rcd lower bound (per iter)", report.rcd_lb_per_iter);
    println!("{:<34} {:>18.12}", "rcd pi lower bound (per iter)", report.rcd_lb_pi_per_iter);
    println!("{:<34} {:>18.12}", "rpcd upper bound (per epoch)", report.rpcd_ub_per_epoch);
    println!("{:<34} {:>18}", "taylor T1 quartic at sigma", fmt_opt(report.taylor_t1_ub));
    println!("{:<34} {:>18}", "taylor T2 quartic at sigma", fmt_opt(report.taylor_t2_ub));
    println!("{:<34} {:>18.12}", "reference epoch rate", report.lee_rate_reference);
    println!(
        "{:<34} {:>18}",
        "nonasymptotic K0",
        report.nonasymptotic_k0.map_or("none (sigma = 1)".to_string(), |k| k.to_string())
    );
    Ok(())
}

// ------------------------------------------------------------------- run --

#[derive(Args)]
pub struct RunArgs {
    /// Preset reproducing one of the pinned experiment settings.
    #[arg(long, value_enum)]
    pub preset: Option<PresetId>,
    /// Objective family for explicit runs.
    #[arg(long, value_enum)]
    pub objective: Option<ObjectiveKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Block size for the pi objective (defaults to n).
    #[arg(long)]
    pub k: Option<usize>,
    /// LSE scale for the lse objective.
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    /// Ridge weight for the logistic objective.
    #[arg(long, default_value_t = 0.01)]
    pub lambda: f64,
    /// Sample count for the logistic objective (defaults to n).
    #[arg(long)]
    pub m: Option<usize>,
    /// Steps per run: iterations for rcd, epochs for rpcd/ccd.
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub trials: usize,
    #[arg(long, default_value_t = 10)]
    pub init_points: usize,
    #[arg(long, default_value_t = 2025)]
    pub seed: u64,
    /// Algorithms for explicit runs.
    #[arg(long, value_delimiter = ',', default_values_t = vec![AlgoArg::Rcd, AlgoArg::Rpcd])]
    pub algorithms: Vec<AlgoArg>,
    /// Artifact directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also render an SVG comparison plot.
    #[arg(long)]
    pub svg: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ObjectiveKind {
    Pi,
    Random,
    Lse,
    Logistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum AlgoArg {
    Rcd,
    Rpcd,
    Ccd,
}

impl std::fmt::Display for AlgoArg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AlgoArg::Rcd => write!(f, "rcd"),
            AlgoArg::Rpcd => write!(f, "rpcd"),
            AlgoArg::Ccd => write!(f, "ccd"),
        }
    }
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Rcd => Algorithm::Rcd,
            AlgoArg::Rpcd => Algorithm::Rpcd,
            AlgoArg::Ccd => Algorithm::Ccd,
        }
    }
}

pub fn run(args: &RunArgs) -> CmdResult {
    if let Some(id) = args.preset {
        return run_preset(id, args);
    }
    let n = args.n.ok_or_else(|| anyhow::anyhow!("--n is required without --preset"))?;
    let sigma = args.sigma.unwrap_or(0.5);
    let steps = args.steps.ok_or_else(|| anyhow::anyhow!("--steps is required without --preset"))?;
    let objective = match args.objective.unwrap_or(ObjectiveKind::Pi) {
        ObjectiveKind::Pi => ObjectiveSpec::PiQuadratic { n, sigma, k: args.k.unwrap_or(n) },
        ObjectiveKind::Random => ObjectiveSpec::RandomQuadratic { n, sigma, seed: args.seed },
        ObjectiveKind::Lse => {
            ObjectiveSpec::QuadraticLse { n, sigma, alpha: args.alpha, seed: args.seed }
        }
        ObjectiveKind::Logistic => ObjectiveSpec::Logistic {
            n,
            m: args.m.unwrap_or(n),
            lambda: args.lambda,
            flip_prob: 0.1,
            seed: args.seed,
        },
    };
    let runs: Vec<(Algorithm, usize)> =
        args.algorithms.iter().map(|&a| (a.into(), steps)).collect();
    let preset = presets::TrajectoryPreset {
        name: "run",
        objective,
        runs,
        trials: args.trials,
        init_points: args.init_points,
        seed: args.seed,
    };
    run_trajectories(&preset, &args.out, args.svg)
}

fn run_preset(id: PresetId, args: &RunArgs) -> CmdResult {
    match presets::build(id) {
        Preset::Trajectory(preset) => run_trajectories(&preset, &args.out, args.svg),
        Preset::RhoCurves { name, n_max, grid } => {
            let rho_args = RhoCurvesArgs {
                n_max,
                grid,
                norm_bound: false,
                samples: 0,
                seed: args.seed,
                out: args.out.clone(),
                name: name.to_string(),
            };
            rho_curves(&rho_args)
        }
        Preset::NormCurve { name, n, samples, seed } => {
            let rho_args = RhoCurvesArgs {
                n_max: n,
                grid: 19,
                norm_bound: true,
                samples,
                seed,
                out: args.out.clone(),
                name: name.to_string(),
            };
            rho_curves(&rho_args)
        }
        Preset::ConjectureGrid { name, n_list, sigma_grid, seeds, restarts } => {
            let cells = worstcase::conjecture_scan(&n_list, &sigma_grid, &seeds, restarts)?;
            let csv = worstcase::scan_to_csv(&cells);
            write_artifact(&args.out, &format!("{name}.csv"), &csv)?;
            let violations = cells.iter().filter(|c| !c.search_ok || !c.bound_ok).count();
            println!("{} cells, {} violations", cells.len(), violations);
            Ok(())
        }
        Preset::Sturm => verify_sturm(&args.out),
        Preset::K0Table { name, n_list } => {
            let mut csv = String::from("n,sigma,k0\n");
            for &n in &n_list {
                for j in 1..=9 {
                    let sigma = j as f64 / 10.0;
                    let k0 = permcd::bounds::nonasymptotic_k0(n, sigma)?;
                    let _ = writeln!(csv, "{n},{sigma},{}", k0.map_or(-1i64, |k| k as i64));
                }
            }
            write_artifact(&args.out, &format!("{name}.csv"), &csv)?;
            Ok(())
        }
    }
}

fn run_trajectories(preset: &presets::TrajectoryPreset, out: &Path, emit_svg: bool) -> CmdResult {
    let mut series = Vec::new();
    let n = preset.objective.dim();
    for &(algorithm, steps) in &preset.runs {
        let cfg = RunConfig {
            algorithm,
            steps,
            trials: preset.trials,
            init_points: preset.init_points,
            seed: preset.seed,
        };
        let stats = runners::run_monte_carlo(RunTarget::Objective(&preset.objective), &cfg)?;
        let name = format!("{}_{algorithm}.csv", preset.name);
        write_artifact(out, &name, &stats.to_csv())?;
        println!(
            "{algorithm}: final mean ratio {:.6e} over {} runs",
            stats.final_mean(),
            stats.trials
        );
        // iteration-aligned x axis: epochs scale by n
        let scale = if algorithm.steps_are_epochs() { n as f64 } else { 1.0 };
        let color = match algorithm {
            Algorithm::Rcd => "#1f77b4",
            Algorithm::Rpcd => "#d62728",
            Algorithm::Ccd => "#2ca02c",
        };
        series.push(svg::Series {
            label: format!("{algorithm}"),
            color: color.to_string(),
            points: stats
                .per_step
                .iter()
                .map(|s| (s.step as f64 * scale, s.mean.max(1e-300)))
                .collect(),
            band: Some(
                stats
                    .per_step
                    .iter()
                    .map(|s| (s.step as f64 * scale, s.min.max(1e-300), s.max.max(1e-300)))
                    .collect(),
            ),
        });
    }
    if emit_svg {
        let chart = svg::line_chart_log_y(
            &format!("{} (n = {n})", preset.name),
            "coordinate iterations",
            "|x_k - x*| / |x_0 - x*|",
            &series,
        );
        write_artifact(out, &format!("{}.svg", preset.name), &chart)?;
    }
    Ok(())
}

// ------------------------------------------------------------ rho-curves --

#[derive(Args)]
pub struct RhoCurvesArgs {
    /// Largest dimension for the restricted-operator curves (max 64).
    #[arg(long, default_value_t = 40)]
    pub n_max: usize,
    /// Number of interior sigma grid points.
    #[arg(long, default_value_t = 99)]
    pub grid: usize,
    /// Also estimate the operator-norm bound curve by permutation sampling.
    #[arg(long)]
    pub norm_bound: bool,
    /// Permutation samples per grid point for the norm-bound curve.
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    #[arg(long, default_value_t = 2025)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Artifact base name.
    #[arg(long, default_value = "rho_curves")]
    pub name: String,
}

pub fn rho_curves(args: &RhoCurvesArgs) -> CmdResult {
    if args.n_max > 64 || args.n_max < 2 {
        return Err(anyhow::anyhow!("--n-max must be in 2..=64").into());
    }
    let n = args.n_max;
    let mut csv = String::from("sigma,rho_n,rho_max_k,rpcd_ub,rcd_lb_pi_pow_n");
    if args.norm_bound {
        csv.push_str(",norm_bound,norm_se");
    }
    csv.push('\n');
    for j in 1..=args.grid {
        let sigma = j as f64 / (args.grid + 1) as f64;
        let mut rho_max = 0.0f64;
        let mut rho_n = 0.0f64;
        for k in 2..=n {
            let rho = operators::restricted_rpcd(k, sigma)?.spectral_radius();
            rho_max = rho_max.max(rho);
            if k == n {
                rho_n = rho;
            }
        }
        let ub = permcd::bounds::rpcd_upper_bound(n, sigma)?;
        let lb_pi = permcd::bounds::rcd_lower_bound_pi(n, sigma)?.powi(n as i32);
        let _ = write!(csv, "{sigma},{rho_n},{rho_max},{ub},{lb_pi}");
        if args.norm_bound {
            let inst = instances::make_pi(n, sigma)?;
            let (est, se) = operators::norm_upper_bound_sampled(&inst, args.samples, args.seed)?;
            let _ = write!(csv, ",{est},{se}");
        }
        csv.push('\n');
    }
    write_artifact(&args.out, &format!("{}.csv", args.name), &csv)?;
    Ok(())
}

// ---------------------------------------------------------------- verify --

#[derive(Args)]
pub struct VerifyArgs {
    /// Which suite to run.
    #[arg(value_enum)]
    pub which: VerifyKind,
    /// Dimension for the nonasymptotic check.
    #[arg(long, default_value_t = 25)]
    pub n: usize,
    /// Sigma for the nonasymptotic check.
    #[arg(long, default_value_t = 0.7)]
    pub sigma: f64,
    /// Restarts per cell for the conjecture scan.
    #[arg(long, default_value_t = 5)]
    pub restarts: usize,
    #[arg(long, default_value_t = 2025)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyKind {
    Sturm,
    Operators,
    Conjecture,
    Nonasymptotic,
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    match args.which {
        VerifyKind::Sturm => verify_sturm(&args.out),
        VerifyKind::Operators => verify_operators(&args.out),
        VerifyKind::Conjecture => verify_conjecture(args),
        VerifyKind::Nonasymptotic => verify_nonasymptotic(args),
    }
}

fn verify_sturm(out: &Path) -> CmdResult {
    let certs = match exactpoly::verify_appendix_cases() {
        Ok(certs) => certs,
        Err(e) => return Err(CmdError::VerificationFailed(e.to_string())),
    };
    let mut by_case = [0usize; 4];
    for cert in &certs {
        println!("PASS {}", cert.label());
        by_case[(cert.case - 1) as usize] += 1;
    }
    let example = exactpoly::worked_example()?;
    let ex_ok = example.certificate.root_count == 0
        && example.certificate.variations_a == 3
        && example.certificate.variations_b == 3;
    println!(
        "{} worked example: V(3/5) = {}, V(1) = {}, roots = {}",
        if ex_ok { "PASS" } else { "FAIL" },
        example.certificate.variations_a,
        example.certificate.variations_b,
        example.certificate.root_count
    );
    let report = serde_json::json!({
        "cases": certs.iter().map(|c| c.to_json_view()).collect::<Vec<_>>(),
        "worked_example": example.certificate.to_json_view(),
        "per_case_counts": by_case,
        "all_passed": ex_ok,
    });
    write_artifact(out, "verify_sturm.json", &serde_json::to_string_pretty(&report).unwrap())?;
    if !ex_ok {
        return Err(CmdError::VerificationFailed("worked example mismatch".into()));
    }
    println!("all {} certificates passed", certs.len());
    Ok(())
}

struct Check {
    label: String,
    passed: bool,
}

fn verify_operators(out: &Path) -> CmdResult {
    let mut checks: Vec<Check> = Vec::new();
    // restriction consistency and sign-flip invariance across the family
    let mut rng = permcd::rng::rng_from(7);
    for n in 2..=5usize {
        for j in (1..=9).step_by(2) {
            let sigma = j as f64 / 10.0;
            for k in 2..=n {
                let inst = instances::make_block_pi(n, k, sigma).unwrap();
                let rho_full =
                    operators::spectral_radius(&operators::rpcd_operator_matrix(&inst)?)?;
                let rho_restricted = operators::restricted_rpcd(k, sigma)?.spectral_radius();
                checks.push(Check {
                    label: format!("restriction n={n} k={k} sigma={sigma}"),
                    passed: (rho_full - rho_restricted).abs() <= 1e-8,
                });
                let v = instances::SignPattern::random(n, &mut rng);
                let flipped = instances::apply_sign_flip(&inst, &v)?;
                let rho_flipped =
                    operators::spectral_radius(&operators::rpcd_operator_matrix(&flipped)?)?;
                checks.push(Check {
                    label: format!("sign-flip n={n} k={k} sigma={sigma}"),
                    passed: (rho_full - rho_flipped).abs() <= 1e-9,
                });
            }
        }
    }
    // similar-form symmetry
    for n in 2..=4usize {
        let inst = instances::make_pi(n, 0.6).unwrap();
        for kind in [operators::OperatorKind::Rcd, operators::OperatorKind::Rpcd] {
            let m = operators::operator_matrix_similar(&inst, kind)?;
            checks.push(Check {
                label: format!("similar-symmetry {kind:?} n={n}"),
                passed: permcd::linalg::symmetry_defect(&m) < 1e-9,
            });
        }
    }
    finish_checks(out, "verify_operators.json", checks)
}

fn verify_conjecture(args: &VerifyArgs) -> CmdResult {
    let cells = worstcase::conjecture_scan(&[3], &[0.3, 0.7], &[args.seed], args.restarts)?;
    let checks: Vec<Check> = cells
        .iter()
        .map(|c| Check {
            label: format!("conjecture n={} sigma={} seed={}", c.n, c.sigma, c.seed),
            passed: c.search_ok && c.bound_ok,
        })
        .collect();
    finish_checks(&args.out, "verify_conjecture.json", checks)
}

fn verify_nonasymptotic(args: &VerifyArgs) -> CmdResult {
    let k0 = permcd::bounds::nonasymptotic_k0(args.n, args.sigma)?;
    let checks = match k0 {
        None => vec![Check { label: format!("n={} sigma={}: no finite gap", args.n, args.sigma), passed: true }],
        Some(k) => {
            let at = permcd::bounds::nonasymptotic_slack(args.n, args.sigma, k)?;
            let before = if k > 1 {
                permcd::bounds::nonasymptotic_slack(args.n, args.sigma, k - 1)?
            } else {
                -1.0
            };
            vec![Check {
                label: format!(
                    "n={} sigma={}: K0={k}, slack(K0)={at:.3e}, slack(K0-1)={before:.3e}",
                    args.n, args.sigma
                ),
                passed: at >= 0.0 && before < 0.0,
            }]
        }
    };
    finish_checks(&args.out, "verify_nonasymptotic.json", checks)
}

fn finish_checks(out: &Path, name: &str, checks: Vec<Check>) -> CmdResult {
    let mut failures = 0usize;
    for c in &checks {
        println!("{} {}", if c.passed { "PASS" } else { "FAIL" }, c.label);
        if !c.passed {
            failures += 1;
        }
    }
    let report = serde_json::json!({
        "checks": checks.iter().map(|c| serde_json::json!({"label": c.label, "passed": c.passed})).collect::<Vec<_>>(),
        "failures": failures,
    });
    write_artifact(out, name, &serde_json::to_string_pretty(&report).unwrap())?;
    if failures > 0 {
        return Err(CmdError::VerificationFailed(format!("{failures} checks failed")));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}

// ---------------------------------------------------------- search-worst --

#[derive(Args)]
pub struct SearchWorstArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub sigma: f64,
    /// Seeds, one search per seed.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2025u64])]
    pub seeds: Vec<u64>,
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

pub fn search_worst(args: &SearchWorstArgs) -> CmdResult {
    for &seed in &args.seeds {
        let result = worstcase::search(args.n, args.sigma, seed, args.restarts)?;
        println!(
            "n={} sigma={} seed={seed}: rho={:.12}, family max={:.12}, residual={:.3e}, conjecture_ok={}",
            args.n, args.sigma, result.rho, result.family_max_rho, result.nearest.residual,
            result.conjecture_ok
        );
        let name = format!("search_n{}_s{}_seed{seed}.json", args.n, args.sigma);
        write_artifact(&args.out, &name, &result.to_json())?;
    }
    Ok(())
}

// -------------------------------------------------------------- operator --

pub fn operator(file: &Path, json: bool) -> CmdResult {
    let text = fs::read_to_string(file).map_err(|e| CmdError::Numerical(e.into()))?;
    let inst = QuadraticInstance::from_json(&text)?;
    let n = inst.n;
    let restricted = operators::restricted_rpcd(n, inst.sigma)?;
    let rho_restricted = restricted.spectral_radius();
    let full = if n <= operators::EXACT_PERMUTATION_CAP {
        Some(operators::spectral_radius(&operators::rpcd_operator_matrix(&inst)?)?)
    } else {
        None
    };
    let norm_bound = if n <= operators::EXACT_PERMUTATION_CAP {
        Some(operators::norm_upper_bound(&inst)?)
    } else {
        None
    };
    let thm2 = permcd::bounds::rpcd_upper_bound(n, inst.sigma)?;
    let nearest = worstcase::nearest_family_member(&inst, inst.sigma).ok();
    if json {
        let report = serde_json::json!({
            "n": n,
            "sigma": inst.sigma,
            "rho_full_rpcd": full,
            "rho_restricted_pi": rho_restricted,
            "restricted_matrix": restricted.m,
            "norm_upper_bound": norm_bound,
            "thm2_bound": thm2,
            "nearest_family_residual": nearest.as_ref().map(|m| m.residual),
        });
        println!("{}", serde_json::to_string_pretty(&report).unwrap());
        return Ok(());
    }
    println!("instance: n = {n}, sigma = {}", inst.sigma);
    println!("{:<40} {:>18}", "quantity", "value");
    if let Some(rho) = full {
        println!("{:<40} {:>18.12}", "rho(full rpcd operator)", rho);
    } else {
        println!("{:<40} {:>18}", "rho(full rpcd operator)", "n > 8, skipped");
    }
    println!("{:<40} {:>18.12}", "rho(restricted 2x2, pi family)", rho_restricted);
    println!(
        "{:<40} [[{:.9}, {:.9}], [{:.9}, {:.9}]]",
        "restricted matrix", restricted.m[0][0], restricted.m[0][1], restricted.m[1][0], restricted.m[1][1]
    );
    if let Some(nb) = norm_bound {
        println!("{:<40} {:>18.12}", "norm upper bound", nb);
    }
    println!("{:<40} {:>18.12}", "rpcd upper bound (closed form)", thm2);
    if let Some(m) = nearest {
        println!("{:<40} {:>18.3e}", "distance to nearest family member", m.residual);
    }
    Ok(())
}

// -------------------------------------------------------------- instance --

#[derive(Args)]
pub struct InstanceArgs {
    #[command(subcommand)]
    pub action: InstanceAction,
}

#[derive(clap::Subcommand)]
pub enum InstanceAction {
    /// Generate an instance file.
    Generate {
        #[arg(long, value_enum)]
        kind: InstanceKind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: f64,
        /// Block size for block-pi.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 2025)]
        seed: u64,
        /// Output file.
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate an instance file and print its invariants.
    Inspect { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum InstanceKind {
    Pi,
    BlockPi,
    Random,
}

pub fn instance(args: &InstanceArgs) -> CmdResult {
    match &args.action {
        InstanceAction::Generate { kind, n, sigma, k, seed, out } => {
            let (inst, kind_name, used_seed) = match kind {
                InstanceKind::Pi => (instances::make_pi(*n, *sigma)?, "pi", None),
                InstanceKind::BlockPi => {
                    (instances::make_block_pi(*n, k.unwrap_or(*n), *sigma)?, "block-pi", None)
                }
                InstanceKind::Random => {
                    (instances::random_unit_diag(*n, *sigma, *seed)?, "random", Some(*seed))
                }
            };
            if let Some(dir) = out.parent() {
                if !dir.as_os_str().is_empty() {
                    fs::create_dir_all(dir).map_err(|e| CmdError::Numerical(e.into()))?;
                }
            }
            fs::write(out, inst.to_json(kind_name, used_seed))
                .map_err(|e| CmdError::Numerical(e.into()))?;
            println!("wrote {}", out.display());
            Ok(())
        }
        InstanceAction::Inspect { file } => {
            let text = fs::read_to_string(file).map_err(|e| CmdError::Numerical(e.into()))?;
            let inst = QuadraticInstance::from_json(&text)?;
            let eigs = permcd::linalg::sym_eigenvalues(&inst.hessian);
            println!("n = {}, sigma = {}", inst.n, inst.sigma);
            println!("symmetry defect: {:.3e}", permcd::linalg::symmetry_defect(&inst.hessian));
            println!("lambda_min = {:.12}, lambda_max = {:.12}", eigs[0], eigs[eigs.len() - 1]);
            println!("all invariants hold");
            Ok(())
        }
    }
}

