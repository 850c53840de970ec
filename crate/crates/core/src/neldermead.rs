//! Nelder-Mead simplex minimization with dimension-adaptive parameters.
//!
//! Derivative-free; the objectives it drives (spectral radii of operator
//! matrices) are continuous but not smooth at eigenvalue crossings, where
//! gradient-based methods stall. Uses the adaptive coefficient schedule
//! (expansion/contraction/shrink scaled by dimension) plus an optional
//! restart from the best point with a fresh simplex.

use crate::linalg::Vector;

pub struct Options {
    /// Stop when the simplex diameter falls below this.
    pub diameter_tol: f64,
    /// Evaluation budget as a multiple of the dimension.
    pub max_evals_per_dim: usize,
    /// Edge length of the initial simplex.
    pub initial_step: f64,
    /// Number of fresh-simplex polish passes from the incumbent best.
    pub polish_passes: usize,
}

impl Default for Options {
    fn default() -> Self {
        Self { diameter_tol: 1e-10, max_evals_per_dim: 2000, initial_step: 0.5, polish_passes: 1 }
    }
}

pub struct Outcome {
    pub x: Vector,
    pub value: f64,
    pub evaluations: usize,
}

/// Minimizes `f` starting from `x0`.
pub fn minimize<F: FnMut(&Vector) -> f64>(mut f: F, x0: &Vector, opts: &Options) -> Outcome {
    let mut best_x = x0.clone();
    let mut best_val = f(&best_x);
    let mut evals = 1usize;
    let mut step = opts.initial_step;
    for _ in 0..=opts.polish_passes {
        let out = run_simplex(&mut f, &best_x, best_val, step, opts, &mut evals);
        if out.1 < best_val {
            best_x = out.0;
            best_val = out.1;
        }
        step *= 0.1;
    }
    Outcome { x: best_x, value: best_val, evaluations: evals }
}

fn run_simplex<F: FnMut(&Vector) -> f64>(
    f: &mut F,
    x0: &Vector,
    f0: f64,
    step: f64,
    opts: &Options,
    evals: &mut usize,
) -> (Vector, f64) {
    let dim = x0.len();
    // per-pass budget, so a polish pass is never starved by the first pass
    let budget = *evals + opts.max_evals_per_dim * dim;
    // adaptive coefficients
    let alpha = 1.0;
    let beta = 1.0 + 2.0 / dim as f64;
    let gamma = 0.75 - 1.0 / (2.0 * dim as f64);
    let delta = 1.0 - 1.0 / dim as f64;

    let mut points: Vec<(Vector, f64)> = Vec::with_capacity(dim + 1);
    points.push((x0.clone(), f0));
    for i in 0..dim {
        let mut p = x0.clone();
        p[i] += step;
        let v = f(&p);
        *evals += 1;
        points.push((p, v));
    }

    loop {
        points.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diameter = points
            .iter()
            .skip(1)
            .map(|(p, _)| (p - &points[0].0).norm())
            .fold(0.0f64, f64::max);
        if diameter < opts.diameter_tol || *evals >= budget {
            return points.swap_remove(0);
        }

        let worst = points.len() - 1;
        let mut centroid = Vector::zeros(dim);
        for (p, _) in points.iter().take(worst) {
            centroid += p;
        }
        centroid /= worst as f64;

        let reflect = &centroid + (&centroid - &points[worst].0) * alpha;
        let f_reflect = f(&reflect);
        *evals += 1;

        if f_reflect < points[0].1 {
            let expand = &centroid + (&centroid - &points[worst].0) * beta;
            let f_expand = f(&expand);
            *evals += 1;
            points[worst] = if f_expand < f_reflect { (expand, f_expand) } else { (reflect, f_reflect) };
            continue;
        }
        if f_reflect < points[worst - 1].1 {
            points[worst] = (reflect, f_reflect);
            continue;
        }
        // contraction: outside if the reflection improved on the worst
        let (contract, f_contract) = if f_reflect < points[worst].1 {
            let c = &centroid + (&reflect - &centroid) * gamma;
            let v = f(&c);
            *evals += 1;
            (c, v)
        } else {
            let c = &centroid - (&centroid - &points[worst].0) * gamma;
            let v = f(&c);
            *evals += 1;
            (c, v)
        };
        if f_contract < points[worst].1.min(f_reflect) {
            points[worst] = (contract, f_contract);
            continue;
        }
        // shrink toward the best vertex
        let best = points[0].0.clone();
        for entry in points.iter_mut().skip(1) {
            let p = &best + (&entry.0 - &best) * delta;
            let v = f(&p);
            *evals += 1;
            *entry = (p, v);
        }
    }
}
