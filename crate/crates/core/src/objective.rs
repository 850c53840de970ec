//! The four experiment objective families and their derivative oracles.
//!
//! Each objective exposes value, gradient, Hessian, and the restriction of
//! the function to a single coordinate (the 1-D function minimized by a
//! coordinate-descent step).

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instances::{self, QuadraticInstance};
use crate::linalg::{Matrix, Vector};
use crate::rng;

/// Parameter block for one objective family.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ObjectiveSpec {
    /// `f(x) = 1/2 x^T A x` with `A = diag{sigma I_k + (1-sigma) 1 1^T, I}`.
    PiQuadratic { n: usize, sigma: f64, k: usize },
    /// `f(x) = 1/2 x^T A x` with a random unit-diagonal `A`, `lambda_min = sigma`.
    RandomQuadratic { n: usize, sigma: f64, seed: u64 },
    /// `f(x) = 1/2 x^T A x + alpha LSE(Qx)` with `Q` a Haar-random orthogonal matrix.
    QuadraticLse { n: usize, sigma: f64, alpha: f64, seed: u64 },
    /// `f(x) = (1/m) sum log(1 + exp(-b_i a_i^T x)) + (lambda/2) |x|^2`.
    Logistic { n: usize, m: usize, lambda: f64, flip_prob: f64, seed: u64 },
}

impl ObjectiveSpec {
    pub fn dim(&self) -> usize {
        match *self {
            ObjectiveSpec::PiQuadratic { n, .. }
            | ObjectiveSpec::RandomQuadratic { n, .. }
            | ObjectiveSpec::QuadraticLse { n, .. }
            | ObjectiveSpec::Logistic { n, .. } => n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            ObjectiveSpec::PiQuadratic { n, sigma, k } => {
                if !(sigma > 0.0 && sigma <= 1.0) {
                    return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1]")));
                }
                if !(2..=n).contains(&k) {
                    return Err(Error::Domain(format!("k = {k} not in 2..={n}")));
                }
            }
            ObjectiveSpec::RandomQuadratic { sigma, .. } => {
                if !(sigma > 0.0 && sigma < 1.0) {
                    return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1)")));
                }
            }
            ObjectiveSpec::QuadraticLse { sigma, alpha, .. } => {
                if !(sigma > 0.0 && sigma < 1.0) {
                    return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1)")));
                }
                if alpha < 0.0 {
                    return Err(Error::Domain(format!("alpha = {alpha} must be >= 0")));
                }
            }
            ObjectiveSpec::Logistic { lambda, flip_prob, .. } => {
                if lambda <= 0.0 {
                    return Err(Error::Domain(format!("lambda = {lambda} must be > 0")));
                }
                if !(0.0..1.0).contains(&flip_prob) {
                    return Err(Error::Domain(format!("flip_prob = {flip_prob} not in [0, 1)")));
                }
            }
        }
        Ok(())
    }
}

enum Kind {
    Quadratic { a: Matrix },
    QuadraticLse { a: Matrix, q: Matrix, alpha: f64 },
    Logistic { features: Matrix, labels: Vec<f64>, lambda: f64, m: usize },
}

/// A built objective with derivative oracles.
pub struct Objective {
    n: usize,
    kind: Kind,
    /// Present when the objective is a pure quadratic (closed-form steps apply).
    quadratic: Option<QuadraticInstance>,
}

impl Objective {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// The underlying instance when the objective is exactly `1/2 x^T A x`.
    pub fn as_quadratic(&self) -> Option<&QuadraticInstance> {
        self.quadratic.as_ref()
    }

    pub fn value(&self, x: &Vector) -> f64 {
        match &self.kind {
            Kind::Quadratic { a } => 0.5 * x.dot(&(a * x)),
            Kind::QuadraticLse { a, q, alpha } => 0.5 * x.dot(&(a * x)) + alpha * lse(&(q * x)),
            Kind::Logistic { features, labels, lambda, m } => {
                let z = features * x;
                let mut s = 0.0;
                for i in 0..*m {
                    s += log1p_exp(-labels[i] * z[i]);
                }
                s / *m as f64 + 0.5 * lambda * x.norm_squared()
            }
        }
    }

    pub fn gradient(&self, x: &Vector) -> Vector {
        match &self.kind {
            Kind::Quadratic { a } => a * x,
            Kind::QuadraticLse { a, q, alpha } => {
                let s = softmax(&(q * x));
                a * x + q.transpose() * s * *alpha
            }
            Kind::Logistic { features, labels, lambda, m } => {
                let z = features * x;
                let mut g = x * *lambda;
                for i in 0..*m {
                    // d/dt log(1+e^{-t}) = -sigmoid(-t)
                    let coef = -labels[i] * sigmoid(-labels[i] * z[i]) / *m as f64;
                    g += features.row(i).transpose() * coef;
                }
                g
            }
        }
    }

    pub fn hessian(&self, x: &Vector) -> Matrix {
        match &self.kind {
            Kind::Quadratic { a } => a.clone(),
            Kind::QuadraticLse { a, q, alpha } => {
                let s = softmax(&(q * x));
                // alpha Q^T (diag(s) - s s^T) Q
                let mut h = a.clone();
                let qs = q.transpose() * &s;
                for i in 0..self.n {
                    for j in 0..self.n {
                        let mut d = 0.0;
                        for r in 0..self.n {
                            d += q[(r, i)] * s[r] * q[(r, j)];
                        }
                        h[(i, j)] += alpha * (d - qs[i] * qs[j]);
                    }
                }
                h
            }
            Kind::Logistic { features, labels, lambda, m } => {
                let z = features * x;
                let mut h = Matrix::identity(self.n, self.n) * *lambda;
                for i in 0..*m {
                    let t = labels[i] * z[i];
                    let w = sigmoid(t) * sigmoid(-t) / *m as f64;
                    let row = features.row(i);
                    for p in 0..self.n {
                        for q2 in 0..self.n {
                            h[(p, q2)] += w * row[p] * row[q2];
                        }
                    }
                }
                h
            }
        }
    }

    /// Value of `f` along coordinate `i` with all other coordinates frozen at
    /// `x`: `t -> f(x + (t - x_i) e_i)`.
    ///
    /// The returned closure precomputes everything that does not depend on
    /// `t`, so one evaluation costs O(n) (one data pass) instead of a full
    /// objective evaluation.
    pub fn restrict(&self, x: &Vector, i: usize) -> Box<dyn Fn(f64) -> f64 + '_> {
        let xi = x[i];
        match &self.kind {
            Kind::Quadratic { a } => {
                // f(t) = 1/2 a_ii t^2 + g t + c with g the cross term
                let aii = a[(i, i)];
                let cross = a.row(i).transpose().dot(x) - aii * xi;
                let rest = 0.5 * (x.dot(&(a * x)) - 2.0 * xi * cross - aii * xi * xi);
                Box::new(move |t: f64| 0.5 * aii * t * t + cross * t + rest)
            }
            Kind::QuadraticLse { a, q, alpha } => {
                let aii = a[(i, i)];
                let cross = a.row(i).transpose().dot(x) - aii * xi;
                let rest = 0.5 * (x.dot(&(a * x)) - 2.0 * xi * cross - aii * xi * xi);
                let z0 = q * x;
                let qi: Vector = q.column(i).into();
                let alpha = *alpha;
                Box::new(move |t: f64| {
                    let z = &z0 + &qi * (t - xi);
                    0.5 * aii * t * t + cross * t + rest + alpha * lse(&z)
                })
            }
            Kind::Logistic { features, labels, lambda, m } => {
                let z0 = features * x;
                let col: Vector = features.column(i).into();
                let labels = labels.clone();
                let lambda = *lambda;
                let m = *m;
                let norm_rest = x.norm_squared() - xi * xi;
                Box::new(move |t: f64| {
                    let mut s = 0.0;
                    for k in 0..m {
                        s += log1p_exp(-labels[k] * (z0[k] + col[k] * (t - xi)));
                    }
                    s / m as f64 + 0.5 * lambda * (norm_rest + t * t)
                })
            }
        }
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn log1p_exp(t: f64) -> f64 {
    // log(1 + e^t), stable for both tails
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn lse(z: &Vector) -> f64 {
    let m = z.iter().fold(f64::NEG_INFINITY, |acc, &v| acc.max(v));
    m + z.iter().map(|&v| (v - m).exp()).sum::<f64>().ln()
}

fn softmax(z: &Vector) -> Vector {
    let m = z.iter().fold(f64::NEG_INFINITY, |acc, &v| acc.max(v));
    let mut e: Vector = z.map(|v| (v - m).exp());
    let s: f64 = e.iter().sum();
    e /= s;
    e
}

/// Haar-distributed orthogonal matrix: QR of a standard-normal square matrix
/// with the R-diagonal sign fix.
pub fn haar_orthogonal(n: usize, rng: &mut rng::Rng) -> Matrix {
    let g = Matrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(rand_distr::StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Builds the objective, generating any random data from the spec's seed.
///
/// Logistic data is generated in a fixed order from one seeded stream:
/// `x_true` first, then each feature row, then the label flips, so runs are
/// reproducible.
pub fn build_objective(spec: &ObjectiveSpec) -> Result<Objective> {
    spec.validate()?;
    match *spec {
        ObjectiveSpec::PiQuadratic { n, sigma, k } => {
            let inst = instances::make_block_pi(n, k, sigma)?;
            Ok(Objective { n, kind: Kind::Quadratic { a: inst.hessian.clone() }, quadratic: Some(inst) })
        }
        ObjectiveSpec::RandomQuadratic { n, sigma, seed } => {
            let inst = instances::random_unit_diag(n, sigma, seed)?;
            Ok(Objective { n, kind: Kind::Quadratic { a: inst.hessian.clone() }, quadratic: Some(inst) })
        }
        ObjectiveSpec::QuadraticLse { n, sigma, alpha, seed } => {
            let inst = instances::random_unit_diag(n, sigma, seed)?;
            let mut r = rng::rng_from(rng::derive_seed(seed, 0x9e, 0x51));
            let q = haar_orthogonal(n, &mut r);
            Ok(Objective { n, kind: Kind::QuadraticLse { a: inst.hessian.clone(), q, alpha }, quadratic: None })
        }
        ObjectiveSpec::Logistic { n, m, lambda, flip_prob, seed } => {
            let mut r = rng::rng_from(seed);
            let x_true = Vector::from_fn(n, |_, _| r.sample::<f64, _>(rand_distr::StandardNormal));
            let features =
                Matrix::from_fn(m, n, |_, _| r.sample::<f64, _>(rand_distr::StandardNormal));
            let mut labels = Vec::with_capacity(m);
            for i in 0..m {
                let t = features.row(i).transpose().dot(&x_true);
                labels.push(if t >= 0.0 { 1.0 } else { -1.0 });
            }
            for label in labels.iter_mut() {
                if r.gen::<f64>() < flip_prob {
                    *label = -*label;
                }
            }
            Ok(Objective { n, kind: Kind::Logistic { features, labels, lambda, m }, quadratic: None })
        }
    }
}
