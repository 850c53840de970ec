//! Trajectory execution and Monte-Carlo contraction estimates.
//!
//! RCD draws a uniform coordinate per iteration, RPCD draws a fresh uniform
//! permutation per epoch, CCD reuses the identity permutation. For quadratics
//! the coordinate update is closed-form; every other objective goes through
//! bracketed scalar minimization of the coordinate restriction.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::QuadraticInstance;
use crate::linalg::Vector;
use crate::objective::{build_objective, Objective, ObjectiveSpec};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Rcd,
    Rpcd,
    Ccd,
}

impl Algorithm {
    /// Whether one recorded step spans a whole epoch (n coordinate updates).
    pub fn steps_are_epochs(self) -> bool {
        !matches!(self, Algorithm::Rcd)
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Algorithm::Rcd => write!(f, "rcd"),
            Algorithm::Rpcd => write!(f, "rpcd"),
            Algorithm::Ccd => write!(f, "ccd"),
        }
    }
}

/// Monte-Carlo run settings. `steps` counts iterations for RCD and epochs for
/// RPCD/CCD; `trials` runs are launched from each of `init_points` starting
/// points, all derived deterministically from `seed`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    pub steps: usize,
    pub trials: usize,
    pub init_points: usize,
    pub seed: u64,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.init_points == 0 {
            return Err(Error::Domain("trials and init_points must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct StepStats {
    pub step: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Distance-ratio statistics `|x_k - x*| / |x_0 - x*|` aggregated over runs.
#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryStats {
    pub per_step: Vec<StepStats>,
    pub trials: usize,
    pub seed_root: u64,
}

impl TrajectoryStats {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,mean,min,max\n");
        for row in &self.per_step {
            out.push_str(&format!("{},{},{},{}\n", row.step, row.mean, row.min, row.max));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stats serialization")
    }

    pub fn final_mean(&self) -> f64 {
        self.per_step.last().map(|s| s.mean).unwrap_or(1.0)
    }
}

/// One exact coordinate-descent step on a quadratic: only coordinate `i`
/// changes, to the minimizer of the coordinate restriction. Afterwards the
/// i-th gradient component is zero.
pub fn rcd_step(a: &QuadraticInstance, x: &Vector, i: usize) -> Result<Vector> {
    if i >= a.n {
        return Err(Error::Domain(format!("coordinate {i} out of range for n = {}", a.n)));
    }
    let mut out = x.clone();
    let gi = a.hessian.row(i).transpose().dot(x);
    out[i] -= gi / a.hessian[(i, i)];
    Ok(out)
}

/// One RPCD epoch as the sequence of exact coordinate steps at
/// `p(1), ..., p(n)` (0-indexed). Agrees with the iteration-matrix route
/// `x -> (I - P Gamma_P^{-1} P^T A) x`.
pub fn rpcd_epoch(a: &QuadraticInstance, x: &Vector, p: &[usize]) -> Result<Vector> {
    if p.len() != a.n || !crate::linalg::is_permutation(p) {
        return Err(Error::InvalidPermutation(p.len()));
    }
    let mut cur = x.clone();
    for &i in p {
        cur = rcd_step(a, &cur, i)?;
    }
    Ok(cur)
}

const SCALAR_EVAL_BUDGET: usize = 200;
const GOLD: f64 = 1.618033988749895;
const CGOLD: f64 = 0.381966011250105;

/// Brent-style bracketed scalar minimization of a strictly convex function.
///
/// `hint` is an initial interval around the expected minimizer; it is
/// expanded downhill until it brackets. At most 200 evaluations.
pub fn coordinate_minimize_scalar<F: Fn(f64) -> f64>(f: F, hint: (f64, f64)) -> Result<f64> {
    let mut evals = 0usize;
    let mut eval = |t: f64| -> Result<f64> {
        if evals >= SCALAR_EVAL_BUDGET {
            return Err(Error::NoConvergence(SCALAR_EVAL_BUDGET));
        }
        evals += 1;
        Ok(f(t))
    };

    // bracket the minimum
    let (mut ax, mut bx) = (hint.0, hint.1);
    if ax == bx {
        bx = ax + 1.0;
    }
    let mut fa = eval(ax)?;
    let mut fb = eval(bx)?;
    if fb > fa {
        std::mem::swap(&mut ax, &mut bx);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut cx = bx + GOLD * (bx - ax);
    let mut fc = eval(cx)?;
    while fb >= fc {
        ax = bx;
        fa = fb;
        bx = cx;
        fb = fc;
        cx = bx + GOLD * (bx - ax);
        fc = eval(cx)?;
    }
    let _ = fa;

    // Brent's method on the bracket
    let (mut lo, mut hi) = if ax < cx { (ax, cx) } else { (cx, ax) };
    let mut x = bx;
    let mut w = bx;
    let mut v = bx;
    let mut fx = fb;
    let mut fw = fb;
    let mut fv = fb;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    let tol = 1e-9;
    loop {
        let xm = 0.5 * (lo + hi);
        let tol1 = tol * x.abs() + 1e-14;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (hi - lo) {
            break;
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            // parabolic fit through (v, w, x)
            let r = (x - w) * (fx - fv);
            let q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            let mut q2 = 2.0 * (q - r);
            if q2 > 0.0 {
                p = -p;
            }
            q2 = q2.abs();
            let etemp = e;
            e = d;
            if p.abs() < (0.5 * q2 * etemp).abs() && p > q2 * (lo - x) && p < q2 * (hi - x) {
                d = p / q2;
                let u = x + d;
                if u - lo < tol2 || hi - u < tol2 {
                    d = if xm > x { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x >= xm { lo - x } else { hi - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + if d > 0.0 { tol1 } else { -tol1 } };
        let fu = eval(u)?;
        if fu <= fx {
            if u >= x {
                lo = x;
            } else {
                hi = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                lo = u;
            } else {
                hi = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    // Function-value comparisons cannot resolve the minimizer below
    // sqrt(eps) * scale: near the vertex the values are numerically flat.
    // Two discrete Newton steps over a wide stencil (where the curvature
    // signal is far above rounding noise) recover the remaining digits; on
    // an exact quadratic the stencil parabola is the function itself.
    for _ in 0..2 {
        let h = 1e-4 * x.abs().max(1.0);
        let f_minus = eval(x - h)?;
        let f_center = eval(x)?;
        let f_plus = eval(x + h)?;
        let curvature = f_plus - 2.0 * f_center + f_minus;
        if curvature <= 0.0 {
            break;
        }
        let step = -0.5 * h * (f_plus - f_minus) / curvature;
        if !step.is_finite() || step.abs() > h {
            break;
        }
        x += step;
    }
    Ok(x)
}

const NEWTON_ITERATION_CAP: usize = 10_000;
const REFERENCE_GRAD_TOL: f64 = 1e-10;

/// Reference minimizer of a strongly convex objective: quadratics return the
/// zero vector directly, everything else runs damped Newton until the
/// gradient norm drops below 1e-10.
pub fn solve_reference(spec: &ObjectiveSpec) -> Result<Vector> {
    let objective = build_objective(spec)?;
    solve_reference_built(&objective)
}

pub fn solve_reference_built(objective: &Objective) -> Result<Vector> {
    let n = objective.dim();
    if objective.as_quadratic().is_some() {
        return Ok(Vector::zeros(n));
    }
    let mut x = Vector::zeros(n);
    for _ in 0..NEWTON_ITERATION_CAP {
        let g = objective.gradient(&x);
        if g.norm() < REFERENCE_GRAD_TOL {
            return Ok(x);
        }
        let h = objective.hessian(&x);
        let dir = h.lu().solve(&(-&g)).ok_or(Error::Eigen(n))?;
        // backtracking line search on the Armijo condition
        let f0 = objective.value(&x);
        let slope = g.dot(&dir);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand = &x + &dir * t;
            if objective.value(&cand) <= f0 + 1e-4 * t * slope {
                x = cand;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            return Err(Error::NoConvergence(NEWTON_ITERATION_CAP));
        }
    }
    Err(Error::NoConvergence(NEWTON_ITERATION_CAP))
}

/// What a Monte-Carlo run operates on.
pub enum RunTarget<'a> {
    Instance(&'a QuadraticInstance),
    Objective(&'a ObjectiveSpec),
}

struct Accumulator {
    sums: Vec<f64>,
    mins: Vec<f64>,
    maxs: Vec<f64>,
    count: usize,
}

impl Accumulator {
    fn new(steps: usize) -> Self {
        Self {
            sums: vec![0.0; steps + 1],
            mins: vec![f64::INFINITY; steps + 1],
            maxs: vec![f64::NEG_INFINITY; steps + 1],
            count: 0,
        }
    }

    fn record(&mut self, ratios: &[f64]) {
        for (k, &r) in ratios.iter().enumerate() {
            self.sums[k] += r;
            self.mins[k] = self.mins[k].min(r);
            self.maxs[k] = self.maxs[k].max(r);
        }
        self.count += 1;
    }

    fn finish(self, seed_root: u64) -> TrajectoryStats {
        let count = self.count as f64;
        let per_step = self
            .sums
            .iter()
            .enumerate()
            .map(|(k, s)| StepStats { step: k, mean: s / count, min: self.mins[k], max: self.maxs[k] })
            .collect();
        TrajectoryStats { per_step, trials: self.count, seed_root }
    }
}

/// Runs the configured algorithm `trials x init_points` times and aggregates
/// per-step distance ratios. Deterministic given `cfg.seed`: the starting
/// point of init `i` and the randomness of trial `(i, t)` come from hashed
/// sub-seeds, and aggregation order is fixed.
pub fn run_monte_carlo(target: RunTarget<'_>, cfg: &RunConfig) -> Result<TrajectoryStats> {
    cfg.validate()?;
    match target {
        RunTarget::Instance(inst) => run_quadratic(inst, cfg),
        RunTarget::Objective(spec) => {
            let objective = build_objective(spec)?;
            match objective.as_quadratic() {
                Some(inst) => {
                    let inst = inst.clone();
                    run_quadratic(&inst, cfg)
                }
                None => {
                    let reference = solve_reference_built(&objective)?;
                    run_general(&objective, &reference, cfg)
                }
            }
        }
    }
}

fn draw_init(n: usize, seed: u64, init: usize) -> Vector {
    let mut r = rng::rng_from(rng::derive_seed(seed, 0xBEEF, init as u64));
    Vector::from_fn(n, |_, _| r.sample::<f64, _>(rand_distr::StandardNormal))
}

fn run_quadratic(inst: &QuadraticInstance, cfg: &RunConfig) -> Result<TrajectoryStats> {
    let n = inst.n;
    let mut acc = Accumulator::new(cfg.steps);
    let mut perm: Vec<usize> = (0..n).collect();
    for init in 0..cfg.init_points {
        let x0 = draw_init(n, cfg.seed, init);
        let norm0 = x0.norm();
        for trial in 0..cfg.trials {
            let mut r = rng::rng_from(rng::derive_seed(cfg.seed, init as u64, trial as u64));
            let mut x = x0.clone();
            let mut ratios = Vec::with_capacity(cfg.steps + 1);
            ratios.push(1.0);
            for _ in 0..cfg.steps {
                match cfg.algorithm {
                    Algorithm::Rcd => {
                        let i = r.gen_range(0..n);
                        x = rcd_step(inst, &x, i)?;
                    }
                    Algorithm::Rpcd => {
                        perm.shuffle(&mut r);
                        x = rpcd_epoch(inst, &x, &perm)?;
                    }
                    Algorithm::Ccd => {
                        for i in 0..n {
                            x = rcd_step(inst, &x, i)?;
                        }
                    }
                }
                ratios.push(x.norm() / norm0);
            }
            acc.record(&ratios);
        }
    }
    Ok(acc.finish(cfg.seed))
}

fn coordinate_update(objective: &Objective, x: &Vector, i: usize) -> Result<Vector> {
    let restricted = objective.restrict(x, i);
    let center = x[i];
    let t = coordinate_minimize_scalar(restricted, (center - 1.0, center + 1.0))?;
    let mut out = x.clone();
    out[i] = t;
    Ok(out)
}

fn run_general(objective: &Objective, reference: &Vector, cfg: &RunConfig) -> Result<TrajectoryStats> {
    let n = objective.dim();
    let mut acc = Accumulator::new(cfg.steps);
    let mut perm: Vec<usize> = (0..n).collect();
    for init in 0..cfg.init_points {
        let x0 = draw_init(n, cfg.seed, init);
        let norm0 = (&x0 - reference).norm();
        for trial in 0..cfg.trials {
            let mut r = rng::rng_from(rng::derive_seed(cfg.seed, init as u64, trial as u64));
            let mut x = x0.clone();
            let mut ratios = Vec::with_capacity(cfg.steps + 1);
            ratios.push(1.0);
            for _ in 0..cfg.steps {
                match cfg.algorithm {
                    Algorithm::Rcd => {
                        let i = r.gen_range(0..n);
                        x = coordinate_update(objective, &x, i)?;
                    }
                    Algorithm::Rpcd => {
                        perm.shuffle(&mut r);
                        for &i in &perm {
                            x = coordinate_update(objective, &x, i)?;
                        }
                    }
                    Algorithm::Ccd => {
                        for i in 0..n {
                            x = coordinate_update(objective, &x, i)?;
                        }
                    }
                }
                ratios.push((&x - reference).norm() / norm0);
            }
            acc.record(&ratios);
        }
    }
    Ok(acc.finish(cfg.seed))
}
