//! Problem-instance construction and validation.
//!
//! All instances are symmetric positive-definite Hessians with unit diagonal;
//! `sigma` always denotes the certified smallest eigenvalue. Matrices with
//! non-unit diagonals never cross the API surface: they are rescaled on
//! ingestion by [`rescale_to_unit_diag`].

use nalgebra::DMatrix;
use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::rng;

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const UNIT_DIAG_TOL: f64 = 1e-12;
pub const SIGMA_TOL: f64 = 1e-8;

/// A unit-diagonal symmetric positive-definite Hessian together with its
/// certified smallest eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticInstance {
    pub n: usize,
    pub hessian: Matrix,
    pub sigma: f64,
}

/// A vector of signs used to conjugate an instance: `A -> A .* vv^T`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignPattern {
    signs: Vec<i8>,
}

impl SignPattern {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Domain("sign pattern entries must be +1 or -1".into()));
        }
        Ok(Self { signs })
    }

    pub fn all_ones(n: usize) -> Self {
        Self { signs: vec![1; n] }
    }

    pub fn random(n: usize, rng: &mut rng::Rng) -> Self {
        let signs = (0..n).map(|_| if rng.gen::<bool>() { 1 } else { -1 }).collect();
        Self { signs }
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    pub fn sign(&self, i: usize) -> f64 {
        f64::from(self.signs[i])
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.signs
    }
}

impl QuadraticInstance {
    /// Wraps a matrix after checking every type invariant: symmetry, unit
    /// diagonal, and that `sigma` equals the smallest eigenvalue.
    pub fn new(hessian: Matrix, sigma: f64) -> Result<Self> {
        let n = hessian.nrows();
        if n < 2 || hessian.ncols() != n {
            return Err(Error::Domain(format!("need a square matrix with n >= 2, got {n}x{}", hessian.ncols())));
        }
        if linalg::symmetry_defect(&hessian) > SYMMETRY_TOL {
            return Err(Error::Domain("hessian is not symmetric to within 1e-12".into()));
        }
        for i in 0..n {
            if (hessian[(i, i)] - 1.0).abs() > UNIT_DIAG_TOL {
                return Err(Error::Domain(format!("diagonal entry {i} is {} (must be 1)", hessian[(i, i)])));
            }
        }
        if !(sigma > 0.0 && sigma <= 1.0) {
            return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1]")));
        }
        let lam_min = linalg::sym_eigen_min(&hessian);
        if (lam_min - sigma).abs() > SIGMA_TOL {
            return Err(Error::Domain(format!("lambda_min = {lam_min} does not match sigma = {sigma}")));
        }
        Ok(Self { n, hessian, sigma })
    }

    pub fn lambda_max(&self) -> f64 {
        linalg::sym_eigen_max(&self.hessian)
    }
}

/// `A = sigma I + (1 - sigma) 1 1^T`: the permutation-invariant instance with
/// `lambda_min = sigma` and `lambda_max = n - (n-1) sigma`.
pub fn make_pi(n: usize, sigma: f64) -> Result<QuadraticInstance> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be >= 2")));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1]")));
    }
    let mut h = Matrix::from_element(n, n, 1.0 - sigma);
    for i in 0..n {
        h[(i, i)] = 1.0;
    }
    QuadraticInstance::new(h, sigma)
}

/// Block instance `diag{ sigma I_k + (1-sigma) 1_k 1_k^T, I_{n-k} }`.
pub fn make_block_pi(n: usize, k: usize, sigma: f64) -> Result<QuadraticInstance> {
    if !(2..=n).contains(&k) {
        return Err(Error::Domain(format!("k = {k} must satisfy 2 <= k <= n = {n}")));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1]")));
    }
    let mut h = Matrix::identity(n, n);
    for i in 0..k {
        for j in 0..k {
            if i != j {
                h[(i, j)] = 1.0 - sigma;
            }
        }
    }
    QuadraticInstance::new(h, sigma)
}

/// Conjugates by `diag(v)` with `v` in {-1, +1}^n: `A .* vv^T`. The spectrum
/// and the diagonal are unchanged.
pub fn apply_sign_flip(a: &QuadraticInstance, v: &SignPattern) -> Result<QuadraticInstance> {
    if v.len() != a.n {
        return Err(Error::DimensionMismatch { expected: a.n, got: v.len() });
    }
    let mut h = a.hessian.clone();
    for i in 0..a.n {
        for j in 0..a.n {
            h[(i, j)] *= v.sign(i) * v.sign(j);
        }
    }
    QuadraticInstance::new(h, a.sigma)
}

/// Guard below which the affine spectrum map `Z -> A` becomes singular.
const MU_GUARD: f64 = 1e-10;
const MAX_DRAW_RETRIES: usize = 16;

/// Random unit-diagonal instance with `lambda_min = sigma`.
///
/// Draws a lower-triangular `X` with standard-normal entries (diagonal
/// resampled away from zero), forms `Y = X^T X`, rescales to unit diagonal
/// `Z`, and maps the spectrum affinely so the smallest eigenvalue lands on
/// `sigma`. A draw with `lambda_min(Z)` within 1e-10 of 1 is rejected and
/// redrawn.
pub fn random_unit_diag(n: usize, sigma: f64, seed: u64) -> Result<QuadraticInstance> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be >= 2")));
    }
    if !(sigma > 0.0 && sigma < 1.0) {
        return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1)")));
    }
    let mut rng = rng::rng_from(seed);
    for _ in 0..MAX_DRAW_RETRIES {
        let x = draw_lower_triangular(n, &mut rng);
        match unit_diag_from_factor(&x, n, sigma) {
            Ok(inst) => return Ok(inst),
            Err(Error::SingularMap(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::SingularMap(1.0))
}

fn draw_lower_triangular(n: usize, rng: &mut rng::Rng) -> Matrix {
    let mut x = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut v: f64 = rng.sample(StandardNormal);
            if i == j {
                while v.abs() < 1e-12 {
                    v = rng.sample(StandardNormal);
                }
            }
            x[(i, j)] = v;
        }
    }
    x
}

/// Steps 2-3 shared by `random_unit_diag` and the worst-case search
/// parametrization: `Y = X^T X`, unit-diagonal rescale, then the affine map
/// placing the smallest eigenvalue at `sigma`.
pub(crate) fn unit_diag_from_factor(x: &Matrix, n: usize, sigma: f64) -> Result<QuadraticInstance> {
    let y = x.transpose() * x;
    for i in 0..n {
        if y[(i, i)] <= 0.0 {
            return Err(Error::Domain("factor produced a nonpositive diagonal".into()));
        }
    }
    let d_inv_sqrt: Vec<f64> = (0..n).map(|i| y[(i, i)].powf(-0.5)).collect();
    let mut z = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            z[(i, j)] = y[(i, j)] * d_inv_sqrt[i] * d_inv_sqrt[j];
        }
    }
    // exact unit diagonal and symmetry regardless of rounding
    for i in 0..n {
        z[(i, i)] = 1.0;
        for j in 0..i {
            let avg = 0.5 * (z[(i, j)] + z[(j, i)]);
            z[(i, j)] = avg;
            z[(j, i)] = avg;
        }
    }
    let mu = linalg::sym_eigen_min(&z);
    if 1.0 - mu < MU_GUARD {
        return Err(Error::SingularMap(mu));
    }
    let s = (1.0 - sigma) / (1.0 - mu);
    let t = (sigma - mu) / (1.0 - mu);
    let mut a = z * s;
    for i in 0..n {
        a[(i, i)] += t;
    }
    // the affine map sends diagonals to s + t = 1 exactly in real arithmetic;
    // pin them so the invariant check cannot trip on rounding
    for i in 0..n {
        a[(i, i)] = 1.0;
    }
    QuadraticInstance::new(a, sigma)
}

/// Rescales a symmetric positive-definite matrix to unit diagonal, returning
/// the instance and the diagonal scaling `F = D^{1/2}` that was divided out
/// (`A_unit = F^{-1} A F^{-1}`, trajectories map as `x_scaled = F x`).
pub fn rescale_to_unit_diag(a: &Matrix) -> Result<(QuadraticInstance, Vec<f64>)> {
    let n = a.nrows();
    if n < 2 || a.ncols() != n {
        return Err(Error::Domain("need a square matrix with n >= 2".into()));
    }
    if linalg::symmetry_defect(a) > SYMMETRY_TOL {
        return Err(Error::Domain("input is not symmetric".into()));
    }
    let mut f = Vec::with_capacity(n);
    for i in 0..n {
        let d = a[(i, i)];
        if d <= 0.0 {
            return Err(Error::Domain(format!("diagonal entry {i} = {d} is not positive")));
        }
        f.push(d.sqrt());
    }
    let mut h = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            h[(i, j)] = a[(i, j)] / (f[i] * f[j]);
        }
    }
    for i in 0..n {
        h[(i, i)] = 1.0;
    }
    let sigma = linalg::sym_eigen_min(&h);
    if sigma <= 0.0 {
        return Err(Error::Domain("input is not positive definite".into()));
    }
    let inst = QuadraticInstance::new(h, sigma)?;
    Ok((inst, f))
}

/// Serialized form: row-major entries, shortest-representation decimal floats
/// (bit-exact round trip through JSON).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceFile {
    pub n: usize,
    pub sigma: f64,
    pub kind: String,
    pub seed: Option<u64>,
    pub hessian: Vec<f64>,
}

impl QuadraticInstance {
    pub fn to_file(&self, kind: &str, seed: Option<u64>) -> InstanceFile {
        let mut hessian = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                hessian.push(self.hessian[(i, j)]);
            }
        }
        InstanceFile { n: self.n, sigma: self.sigma, kind: kind.to_string(), seed, hessian }
    }

    pub fn from_file(file: &InstanceFile) -> Result<Self> {
        if file.hessian.len() != file.n * file.n {
            return Err(Error::Malformed(format!(
                "hessian has {} entries, expected {}",
                file.hessian.len(),
                file.n * file.n
            )));
        }
        let h = DMatrix::from_row_slice(file.n, file.n, &file.hessian);
        QuadraticInstance::new(h, file.sigma)
    }

    pub fn to_json(&self, kind: &str, seed: Option<u64>) -> String {
        serde_json::to_string_pretty(&self.to_file(kind, seed)).expect("instance serialization")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: InstanceFile =
            serde_json::from_str(s).map_err(|e| Error::Malformed(format!("instance JSON: {e}")))?;
        Self::from_file(&file)
    }
}
