//! Expectation operators of the random iteration matrices.
//!
//! For an algorithm whose epoch/iteration applies a random matrix `T` to the
//! iterate, the operator `M(X) = E[T^T X T]` drives `E[x_k^T X x_k]`. This
//! module builds `M` for RCD and RPCD as a full `n^2 x n^2` matrix (exact
//! average over indices or all `n!` permutations), as the exact 2x2
//! restriction to span{I, 11^T} at permutation-invariant instances, and
//! provides the spectral-radius and norm machinery used by the rate bounds.

use itertools::Itertools;
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::instances::QuadraticInstance;
use crate::linalg::{self, Matrix, Vector};
use crate::rng;

/// Factorial enumeration cap: the exact permutation average costs O(n^4 n!).
pub const EXACT_PERMUTATION_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    Rcd,
    Rpcd,
}

/// Applies the RCD expectation operator in closed form:
/// `M(X) = (I - A/n)^T X (I - A/n) + A^T (n diag(X) - X) A / n^2`.
pub fn rcd_operator_apply(a: &QuadraticInstance, x: &Matrix) -> Result<Matrix> {
    let n = a.n;
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: x.nrows() });
    }
    if linalg::symmetry_defect(x) > 1e-9 {
        return Err(Error::Domain("operator input must be symmetric".into()));
    }
    let nf = n as f64;
    let shrunk = Matrix::identity(n, n) - &a.hessian / nf;
    let first = shrunk.transpose() * x * &shrunk;
    let mut diag_scaled = -x.clone();
    for i in 0..n {
        diag_scaled[(i, i)] += nf * x[(i, i)];
    }
    let second = a.hessian.transpose() * diag_scaled * &a.hessian / (nf * nf);
    Ok(first + second)
}

/// One-epoch RPCD iteration matrix `T = I - P Gamma_P^{-1} P^T A` with
/// `Gamma_P = tril(P^T A P)`; `p` is 0-indexed.
pub fn rpcd_iteration_matrix(a: &QuadraticInstance, p: &[usize]) -> Result<Matrix> {
    let n = a.n;
    if p.len() != n || !linalg::is_permutation(p) {
        return Err(Error::InvalidPermutation(p.len()));
    }
    // Gamma_P[i][j] = A[p(i)][p(j)] for i >= j; unit diagonal keeps it invertible
    let mut gamma = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            gamma[(i, j)] = a.hessian[(p[i], p[j])];
        }
    }
    debug_assert!((0..n).all(|i| gamma[(i, i)] != 0.0));
    // W solves Gamma W = P^T A, column by column
    let pt_a = Matrix::from_fn(n, n, |i, j| a.hessian[(p[i], j)]);
    let mut w = Matrix::zeros(n, n);
    for col in 0..n {
        let rhs = Vector::from_fn(n, |i, _| pt_a[(i, col)]);
        let sol = linalg::forward_substitute(&gamma, &rhs);
        for i in 0..n {
            w[(i, col)] = sol[i];
        }
    }
    // T = I - P W: row p(i) of PW is row i of W
    let mut t = Matrix::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            t[(p[i], j)] -= w[(i, j)];
        }
    }
    Ok(t)
}

/// Applies `T_{A,p}` to a vector in O(n^2) without forming the matrix.
pub fn rpcd_apply_iteration(a: &QuadraticInstance, p: &[usize], x: &Vector) -> Vector {
    let n = a.n;
    let y = &a.hessian * x;
    // forward substitution against tril(P^T A P) on the fly
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut s = y[p[i]];
        for j in 0..i {
            s -= a.hessian[(p[i], p[j])] * w[j];
        }
        w[i] = s / a.hessian[(p[i], p[i])];
    }
    let mut out = x.clone();
    for i in 0..n {
        out[p[i]] -= w[i];
    }
    out
}

fn check_enumeration_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(Error::TooLarge { n, cap });
    }
    Ok(())
}

/// Full matrix of the RPCD operator: `E_p[T^T (x) T^T]` acting on `vec(X)`
/// (column stacking), exact average over all `n!` permutations.
pub fn rpcd_operator_matrix(a: &QuadraticInstance) -> Result<Matrix> {
    check_enumeration_cap(a.n, EXACT_PERMUTATION_CAP)?;
    let n = a.n;
    let mut acc = Matrix::zeros(n * n, n * n);
    let mut count = 0usize;
    for p in (0..n).permutations(n) {
        let t = rpcd_iteration_matrix(a, &p)?;
        let tt = t.transpose();
        acc += tt.kronecker(&tt);
        count += 1;
    }
    Ok(acc / count as f64)
}

/// Full matrix of the RCD operator: the average over the n index choices of
/// `T_i^T (x) T_i^T` with `T_i = I - E_i A`.
pub fn rcd_operator_matrix(a: &QuadraticInstance) -> Result<Matrix> {
    let n = a.n;
    let mut acc = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        let mut t = Matrix::identity(n, n);
        for j in 0..n {
            t[(i, j)] -= a.hessian[(i, j)] / a.hessian[(i, i)];
        }
        let tt = t.transpose();
        acc += tt.kronecker(&tt);
    }
    Ok(acc / n as f64)
}

/// Full matrix of the similarity-transformed operator built from
/// `T~ = A^{1/2} T A^{-1/2}`; symmetric for both algorithms, which is the
/// numeric face of their diagonalizability.
pub fn operator_matrix_similar(a: &QuadraticInstance, kind: OperatorKind) -> Result<Matrix> {
    let n = a.n;
    let a_half = linalg::spd_power(&a.hessian, 0.5);
    let a_inv_half = linalg::spd_power(&a.hessian, -0.5);
    let mut acc = Matrix::zeros(n * n, n * n);
    let mut count = 0usize;
    match kind {
        OperatorKind::Rcd => {
            for i in 0..n {
                let mut t = Matrix::identity(n, n);
                for j in 0..n {
                    t[(i, j)] -= a.hessian[(i, j)] / a.hessian[(i, i)];
                }
                let ts = &a_half * t * &a_inv_half;
                let tt = ts.transpose();
                acc += tt.kronecker(&tt);
                count += 1;
            }
        }
        OperatorKind::Rpcd => {
            check_enumeration_cap(n, EXACT_PERMUTATION_CAP)?;
            for p in (0..n).permutations(n) {
                let t = rpcd_iteration_matrix(a, &p)?;
                let ts = &a_half * t * &a_inv_half;
                let tt = ts.transpose();
                acc += tt.kronecker(&tt);
                count += 1;
            }
        }
    }
    Ok(acc / count as f64)
}

/// Expected conjugation by a uniform permutation:
/// `E_P[P Q P^T] = tau1 I + tau2 11^T` with
/// `tau2 = (1^T Q 1 - tr Q) / (n(n-1))`, `tau1 = tr Q / n - tau2`.
pub fn expected_permutation_conjugation(q: &Matrix) -> (f64, f64) {
    let n = q.nrows();
    assert!(n >= 2, "needs n >= 2");
    let trace: f64 = (0..n).map(|i| q[(i, i)]).sum();
    let total: f64 = q.iter().sum();
    let tau2 = (total - trace) / (n * (n - 1)) as f64;
    let tau1 = trace / n as f64 - tau2;
    (tau1, tau2)
}

/// Coefficients of the projection of a symmetric `X` onto span{I, 11^T} and
/// the Frobenius norm of the residual.
pub fn span_coefficients(x: &Matrix) -> (f64, f64, f64) {
    let n = x.nrows();
    let trace: f64 = (0..n).map(|i| x[(i, i)]).sum();
    let total: f64 = x.iter().sum();
    let b = (total - trace) / (n * (n - 1)) as f64;
    let a = trace / n as f64 - b;
    let mut proj = Matrix::from_element(n, n, b);
    for i in 0..n {
        proj[(i, i)] += a;
    }
    let residual = linalg::frob_distance(x, &proj);
    (a, b, residual)
}

/// The 2x2 matrix representation of an expectation operator restricted to
/// span{I, 11^T}: column 1 holds the coefficients of `M(I)`, column 2 those
/// of `M(11^T)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Restricted2x2 {
    pub m: [[f64; 2]; 2],
    pub n: usize,
    pub kind: OperatorKind,
}

impl Restricted2x2 {
    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_row_slice(2, 2, &[self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1]])
    }

    /// Closed-form spectral radius (quadratic formula; no iterative noise).
    pub fn spectral_radius(&self) -> f64 {
        linalg::spectral_radius_2x2(self.m[0][0], self.m[0][1], self.m[1][0], self.m[1][1])
    }

    /// Image of `a I + b 11^T` under the operator, as coefficients.
    pub fn apply(&self, a: f64, b: f64) -> (f64, f64) {
        (self.m[0][0] * a + self.m[0][1] * b, self.m[1][0] * a + self.m[1][1] * b)
    }

    /// Row sums `(tau1_row, tau2_row)`; these are `T_i(n, s)/(n(n-1))`.
    pub fn row_sums(&self) -> (f64, f64) {
        (self.m[0][0] + self.m[0][1], self.m[1][0] + self.m[1][1])
    }
}

/// Exact 2x2 restriction of the RPCD operator at the permutation-invariant
/// instance of size `n` with smallest eigenvalue `sigma`.
///
/// Built from the explicit entries of `C = I - Gamma^{-1} A`, summed directly
/// (`alpha = |C 1|^2`, `beta = sum C_ij^2`, `gamma = (1^T C 1)^2`,
/// `delta = |C^T 1|^2`), which is exact at `sigma = 1` where everything
/// vanishes.
pub fn restricted_rpcd(n: usize, sigma: f64) -> Result<Restricted2x2> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be >= 2")));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1]")));
    }
    // powers of sigma up to n
    let mut pow = vec![1.0; n + 1];
    for k in 1..=n {
        pow[k] = pow[k - 1] * sigma;
    }
    let one_minus = 1.0 - sigma;
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut delta = 0.0;
    let mut ones_v = 0.0;
    let mut col_sums = vec![0.0; n];
    for i in 1..=n {
        let mut row_sum = 0.0;
        for j in 1..=n {
            let c = if i < j {
                -one_minus * pow[i - 1]
            } else {
                one_minus * (pow[i - j] - pow[i - 1])
            };
            beta += c * c;
            row_sum += c;
            col_sums[j - 1] += c;
        }
        alpha += row_sum * row_sum;
        ones_v += row_sum;
    }
    for cs in &col_sums {
        delta += cs * cs;
    }
    let gamma = ones_v * ones_v;
    let denom = (n * (n - 1)) as f64;
    let nf = n as f64;
    Ok(Restricted2x2 {
        m: [
            [(nf * beta - alpha) / denom, (nf * delta - gamma) / denom],
            [(alpha - beta) / denom, (gamma - delta) / denom],
        ],
        n,
        kind: OperatorKind::Rpcd,
    })
}

/// Exact 2x2 restriction of the RCD operator at the permutation-invariant
/// instance: `(1/n) [[n-1+(1-s)^2, (1-s)^2 (n-2)], [s^2, s^2 (n-2)]]`.
pub fn restricted_rcd(n: usize, sigma: f64) -> Result<Restricted2x2> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be >= 2")));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1]")));
    }
    let nf = n as f64;
    let u = (1.0 - sigma) * (1.0 - sigma);
    let s2 = sigma * sigma;
    Ok(Restricted2x2 {
        m: [
            [(nf - 1.0 + u) / nf, u * (nf - 2.0) / nf],
            [s2 / nf, s2 * (nf - 2.0) / nf],
        ],
        n,
        kind: OperatorKind::Rcd,
    })
}

/// Spectral radius of an arbitrary square matrix (2x2 closed form, complex
/// Schur otherwise).
pub fn spectral_radius(m: &Matrix) -> Result<f64> {
    linalg::spectral_radius(m)
}

/// Checks the block-reduction identity: the full RPCD operator of
/// `diag{A_k, I_{n-k}}` has the same spectral radius as that of the k x k
/// permutation-invariant instance, within 1e-9.
pub fn block_reduction_check(n: usize, k: usize, sigma: f64) -> Result<bool> {
    check_enumeration_cap(n, 6)?;
    let full = crate::instances::make_block_pi(n, k, sigma)?;
    let small = crate::instances::make_pi(k, sigma)?;
    let rho_full = spectral_radius(&rpcd_operator_matrix(&full)?)?;
    let rho_small = spectral_radius(&rpcd_operator_matrix(&small)?)?;
    Ok((rho_full - rho_small).abs() <= 1e-9)
}

/// Exact norm bound `|A^{-1/2} M^RPCD(A) A^{-1/2}|` (spectral norm),
/// averaging over all n! permutations. An upper bound on `rho(M^RPCD)`.
pub fn norm_upper_bound(a: &QuadraticInstance) -> Result<f64> {
    check_enumeration_cap(a.n, EXACT_PERMUTATION_CAP)?;
    let n = a.n;
    let a_inv_half = linalg::spd_power(&a.hessian, -0.5);
    let mut acc = Matrix::zeros(n, n);
    let mut count = 0usize;
    for p in (0..n).permutations(n) {
        let t = rpcd_iteration_matrix(a, &p)?;
        acc += t.transpose() * &a.hessian * t;
        count += 1;
    }
    let b = &a_inv_half * (acc / count as f64) * &a_inv_half;
    Ok(linalg::sym_eigen_max(&b))
}

/// Monte-Carlo estimate of the norm bound for instances too large for the
/// exact permutation average.
///
/// Two independent phases: the first estimates the averaged matrix and takes
/// its top eigenvector `u`, the second re-samples fresh permutations and
/// averages the quadratic form `u^T B_p u`, whose mean and standard error are
/// returned. Decoupling the eigenvector from the quadratic-form samples
/// removes the upward bias a norm of a noisy matrix average would carry.
pub fn norm_upper_bound_sampled(
    a: &QuadraticInstance,
    samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if samples < 2 {
        return Err(Error::Domain("need at least 2 samples".into()));
    }
    let n = a.n;
    let a_inv_half = linalg::spd_power(&a.hessian, -0.5);
    let mut indices: Vec<usize> = (0..n).collect();

    // phase 1: direction. Accumulate E[T^T A T] and conjugate once.
    let mut rng1 = rng::rng_from(rng::derive_seed(seed, 1, 0));
    let mut acc = Matrix::zeros(n, n);
    for _ in 0..samples {
        indices.shuffle(&mut rng1);
        let t = rpcd_iteration_matrix(a, &indices)?;
        acc += t.transpose() * &a.hessian * t;
    }
    let b_hat = &a_inv_half * (acc / samples as f64) * &a_inv_half;
    let eig = b_hat.symmetric_eigen();
    let mut top = 0usize;
    for (j, lambda) in eig.eigenvalues.iter().enumerate() {
        if *lambda > eig.eigenvalues[top] {
            top = j;
        }
    }
    let u: Vector = eig.eigenvectors.column(top).into();

    // phase 2: quadratic form along u with fresh permutations
    let y = &a_inv_half * &u;
    let mut rng2 = rng::rng_from(rng::derive_seed(seed, 2, 0));
    let mut values = Vec::with_capacity(samples);
    for _ in 0..samples {
        indices.shuffle(&mut rng2);
        let z = rpcd_apply_iteration(a, &indices, &y);
        values.push(z.dot(&(&a.hessian * &z)));
    }
    let mean: f64 = values.iter().sum::<f64>() / samples as f64;
    let var: f64 =
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (samples - 1) as f64;
    Ok((mean, (var / samples as f64).sqrt()))
}

/// Builds the arrow-form matrix `[[1, a 1^T], [a 1, (1-b) I + b 11^T]]`.
pub fn arrow_matrix(n: usize, a: f64, b: f64) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be >= 2")));
    }
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = 1.0;
    }
    for j in 1..n {
        m[(0, j)] = a;
        m[(j, 0)] = a;
    }
    for i in 1..n {
        for j in 1..n {
            if i != j {
                m[(i, j)] = b;
            }
        }
    }
    Ok(m)
}

fn arrow_basis(n: usize) -> [Matrix; 4] {
    let mut v1 = Matrix::zeros(n, n);
    v1[(0, 0)] = 1.0;
    let mut v2 = Matrix::zeros(n, n);
    for j in 1..n {
        v2[(0, j)] = 1.0;
        v2[(j, 0)] = 1.0;
    }
    let mut v3 = Matrix::zeros(n, n);
    for i in 1..n {
        v3[(i, i)] = 1.0;
    }
    let mut v4 = Matrix::zeros(n, n);
    for i in 1..n {
        for j in 1..n {
            v4[(i, j)] = 1.0;
        }
    }
    [v1, v2, v3, v4]
}

fn frobenius_inner(a: &Matrix, b: &Matrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Least-squares residual of projecting `x` onto the span of `basis`.
fn projection_residual(x: &Matrix, basis: &[Matrix]) -> f64 {
    let k = basis.len();
    let mut gram = Matrix::zeros(k, k);
    let mut rhs = Vector::zeros(k);
    for i in 0..k {
        for j in 0..k {
            gram[(i, j)] = frobenius_inner(&basis[i], &basis[j]);
        }
        rhs[i] = frobenius_inner(&basis[i], x);
    }
    let coeffs = gram.lu().solve(&rhs).expect("basis is linearly independent");
    let mut proj = Matrix::zeros(x.nrows(), x.ncols());
    for i in 0..k {
        proj += &basis[i] * coeffs[i];
    }
    linalg::frob_distance(x, &proj)
}

/// Numerical closure check of the RPCD operator on the arrow-form subspace
/// span{V1..V4}: applies the exact operator to each basis matrix and to
/// `trials` random combinations, returning the largest projection residual.
///
/// Inputs must be arrow-form (validated); a well-formed input keeps the
/// residual at rounding level, a generic matrix does not.
pub fn partially_invariant_closure_check(a: &Matrix, trials: usize) -> Result<f64> {
    let n = a.nrows();
    check_enumeration_cap(n, 6)?;
    if n < 3 {
        return Err(Error::Malformed("arrow form needs n >= 3".into()));
    }
    if linalg::symmetry_defect(a) > 1e-12 {
        return Err(Error::Malformed("arrow matrix must be symmetric".into()));
    }
    for i in 0..n {
        if (a[(i, i)] - 1.0).abs() > 1e-12 {
            return Err(Error::Malformed("arrow matrix must have unit diagonal".into()));
        }
    }
    let av = a[(0, 1)];
    let bv = if n > 2 { a[(1, 2)] } else { 0.0 };
    for j in 1..n {
        if (a[(0, j)] - av).abs() > 1e-12 {
            return Err(Error::Malformed("first row must be constant off the diagonal".into()));
        }
    }
    for i in 1..n {
        for j in 1..n {
            if i != j && (a[(i, j)] - bv).abs() > 1e-12 {
                return Err(Error::Malformed("lower block must be constant off the diagonal".into()));
            }
        }
    }
    let sigma = linalg::sym_eigen_min(a);
    if sigma <= 0.0 {
        return Err(Error::Malformed("arrow matrix must be positive definite".into()));
    }
    let inst = QuadraticInstance::new(a.clone(), sigma)?;
    closure_residual(&inst, trials)
}

/// The closure residual computation without arrow-shape validation; used by
/// tests to demonstrate that generic matrices are far from closed.
pub fn closure_residual_unchecked(inst: &QuadraticInstance, trials: usize) -> Result<f64> {
    closure_residual(inst, trials)
}

fn closure_residual(inst: &QuadraticInstance, trials: usize) -> Result<f64> {
    let n = inst.n;
    check_enumeration_cap(n, 6)?;
    let basis = arrow_basis(n);
    let op = rpcd_operator_matrix(inst)?;
    let apply = |x: &Matrix| -> Matrix {
        let v = linalg::vectorize(x);
        linalg::unvectorize(&(&op * v), n)
    };
    let mut worst = 0.0f64;
    for v in &basis {
        worst = worst.max(projection_residual(&apply(v), &basis));
    }
    let mut r = rng::rng_from(0x41_52_52_4f_57); // fixed stream; the check is deterministic
    for _ in 0..trials {
        let mut x = Matrix::zeros(n, n);
        for v in &basis {
            let c: f64 = rand::Rng::sample(&mut r, rand_distr::StandardNormal);
            x += v * c;
        }
        worst = worst.max(projection_residual(&apply(&x), &basis));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{apply_sign_flip, make_block_pi, make_pi, SignPattern};
    use approx::assert_relative_eq;

    /// Brute-force RCD operator: the average over i of (I - E_i A)^T X (I - E_i A).
    fn rcd_apply_bruteforce(a: &QuadraticInstance, x: &Matrix) -> Matrix {
        let n = a.n;
        let mut acc = Matrix::zeros(n, n);
        for i in 0..n {
            let mut t = Matrix::identity(n, n);
            for j in 0..n {
                t[(i, j)] -= a.hessian[(i, j)];
            }
            acc += t.transpose() * x * t;
        }
        acc / n as f64
    }

    #[test]
    fn rcd_apply_identity_instance() {
        let a = make_pi(4, 1.0).unwrap();
        let out = rcd_operator_apply(&a, &Matrix::identity(4, 4)).unwrap();
        let expected = Matrix::identity(4, 4) * (1.0 - 0.25);
        assert_relative_eq!(linalg::frob_distance(&out, &expected), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn rcd_apply_matches_brute_force() {
        let mut r = crate::rng::rng_from(3);
        for n in 2..=6 {
            for _ in 0..5 {
                let a = crate::instances::random_unit_diag(n, 0.33, rand::Rng::gen(&mut r)).unwrap();
                let mut x = Matrix::from_fn(n, n, |_, _| {
                    rand::Rng::sample::<f64, _>(&mut r, rand_distr::StandardNormal)
                });
                x = (&x + x.transpose()) * 0.5;
                let fast = rcd_operator_apply(&a, &x).unwrap();
                let slow = rcd_apply_bruteforce(&a, &x);
                assert_relative_eq!(linalg::frob_distance(&fast, &slow), 0.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn rcd_apply_on_pi_identity_is_closed_formula() {
        // M(I) = I - 2A/n + A^2/n at unit-diagonal instances
        for (n, sigma) in [(3usize, 0.5), (5, 0.2), (4, 0.9)] {
            let a = make_pi(n, sigma).unwrap();
            let out = rcd_operator_apply(&a, &Matrix::identity(n, n)).unwrap();
            let expected = Matrix::identity(n, n) - &a.hessian * (2.0 / n as f64)
                + &a.hessian * &a.hessian / n as f64;
            assert_relative_eq!(linalg::frob_distance(&out, &expected), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn rcd_apply_stays_in_span_at_pi() {
        let a = make_pi(3, 0.5).unwrap();
        let ones = Matrix::from_element(3, 3, 1.0);
        let out = rcd_operator_apply(&a, &ones).unwrap();
        let (_, _, resid) = span_coefficients(&out);
        assert!(resid < 1e-12, "residual {resid}");
    }

    #[test]
    fn iteration_matrix_identity_instance_is_zero() {
        let a = make_pi(3, 1.0).unwrap();
        for p in [[0usize, 1, 2], [2, 0, 1]] {
            let t = rpcd_iteration_matrix(&a, &p).unwrap();
            assert_relative_eq!(t.norm(), 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn iteration_matrix_identity_permutation_is_gauss_seidel() {
        let a = make_pi(3, 0.4).unwrap();
        let t = rpcd_iteration_matrix(&a, &[0, 1, 2]).unwrap();
        let gamma = linalg::tril(&a.hessian);
        let expected = Matrix::identity(3, 3)
            - gamma.lu().solve(&a.hessian.clone()).unwrap();
        assert_relative_eq!(linalg::frob_distance(&t, &expected), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn iteration_matrix_rejects_bad_permutation() {
        let a = make_pi(3, 0.4).unwrap();
        assert!(rpcd_iteration_matrix(&a, &[0, 0, 2]).is_err());
        assert!(rpcd_iteration_matrix(&a, &[0, 1]).is_err());
    }

    #[test]
    fn apply_iteration_matches_matrix_path() {
        let mut r = crate::rng::rng_from(17);
        let a = crate::instances::random_unit_diag(5, 0.4, 2).unwrap();
        for p in (0..5usize).permutations(5).step_by(7) {
            let t = rpcd_iteration_matrix(&a, &p).unwrap();
            let x = Vector::from_fn(5, |_, _| {
                rand::Rng::sample::<f64, _>(&mut r, rand_distr::StandardNormal)
            });
            let via_matrix = &t * &x;
            let via_apply = rpcd_apply_iteration(&a, &p, &x);
            assert_relative_eq!((via_matrix - via_apply).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn operator_matrix_identity_instance_is_zero() {
        let a = make_pi(3, 1.0).unwrap();
        let op = rpcd_operator_matrix(&a).unwrap();
        assert_relative_eq!(op.norm(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn operator_matrix_restriction_matches_restricted_2x2() {
        for (n, sigma) in [(2usize, 0.5), (3, 0.3), (4, 0.7)] {
            let a = make_pi(n, sigma).unwrap();
            let op = rpcd_operator_matrix(&a).unwrap();
            let restricted = restricted_rpcd(n, sigma).unwrap();
            // apply the full operator to I and 11^T, read the span coefficients
            let apply = |x: &Matrix| {
                let v = linalg::vectorize(x);
                linalg::unvectorize(&(&op * v), n)
            };
            let mi = apply(&Matrix::identity(n, n));
            let mo = apply(&Matrix::from_element(n, n, 1.0));
            let (a11, a21, r1) = span_coefficients(&mi);
            let (a12, a22, r2) = span_coefficients(&mo);
            assert!(r1 < 1e-12 && r2 < 1e-12, "operator not closed in span");
            assert_relative_eq!(a11, restricted.m[0][0], epsilon = 1e-12);
            assert_relative_eq!(a21, restricted.m[1][0], epsilon = 1e-12);
            assert_relative_eq!(a12, restricted.m[0][1], epsilon = 1e-12);
            assert_relative_eq!(a22, restricted.m[1][1], epsilon = 1e-12);
        }
    }

    #[test]
    fn operator_matrix_refuses_large_n() {
        let a = make_pi(9, 0.5).unwrap();
        assert!(matches!(rpcd_operator_matrix(&a), Err(Error::TooLarge { n: 9, cap: 8 })));
    }

    #[test]
    fn expected_conjugation_basics() {
        let n = 4;
        assert_eq!(expected_permutation_conjugation(&Matrix::identity(n, n)), (1.0, 0.0));
        assert_eq!(
            expected_permutation_conjugation(&Matrix::from_element(n, n, 1.0)),
            (0.0, 1.0)
        );
        let mut e11 = Matrix::zeros(2, 2);
        e11[(0, 0)] = 1.0;
        assert_eq!(expected_permutation_conjugation(&e11), (0.5, 0.0));
    }

    #[test]
    fn expected_conjugation_matches_enumeration() {
        let mut r = crate::rng::rng_from(23);
        for n in 2..=5usize {
            let q = Matrix::from_fn(n, n, |_, _| {
                rand::Rng::sample::<f64, _>(&mut r, rand_distr::StandardNormal)
            });
            let mut acc = Matrix::zeros(n, n);
            let mut count = 0;
            for p in (0..n).permutations(n) {
                let pm = linalg::permutation_matrix(&p);
                acc += &pm * &q * pm.transpose();
                count += 1;
            }
            acc /= count as f64;
            let (t1, t2) = expected_permutation_conjugation(&q);
            let mut expected = Matrix::from_element(n, n, t2);
            for i in 0..n {
                expected[(i, i)] += t1;
            }
            assert_relative_eq!(linalg::frob_distance(&acc, &expected), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn restricted_rpcd_sigma_one_is_zero() {
        for n in [2usize, 5, 9] {
            let m = restricted_rpcd(n, 1.0).unwrap();
            for row in m.m {
                for v in row {
                    assert_eq!(v, 0.0);
                }
            }
        }
    }

    #[test]
    fn restricted_rpcd_n2_closed_form() {
        // M = (1/2) [[beta, delta], [0, 0]] with beta = (1-s)^2 + (1-s)^4,
        // delta = s^2 (1-s)^2, since alpha = beta and gamma = delta at n = 2
        for sigma in [0.2, 0.5, 0.8] {
            let m = restricted_rpcd(2, sigma).unwrap();
            let u = 1.0 - sigma;
            let beta = u * u + u * u * u * u;
            let delta = sigma * sigma * u * u;
            assert_relative_eq!(m.m[0][0], beta / 2.0, epsilon = 1e-14);
            assert_relative_eq!(m.m[0][1], delta / 2.0, epsilon = 1e-14);
            assert_relative_eq!(m.m[1][0], 0.0, epsilon = 1e-14);
            assert_relative_eq!(m.m[1][1], 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn restricted_rpcd_entries_nonnegative() {
        for n in [2usize, 3, 6, 12] {
            for j in 1..10 {
                let m = restricted_rpcd(n, j as f64 / 10.0).unwrap();
                for row in m.m {
                    for v in row {
                        assert!(v >= -1e-12, "entry {v} at n={n} sigma={}", j as f64 / 10.0);
                    }
                }
            }
        }
    }

    #[test]
    fn restricted_rcd_closed_forms() {
        // n = 2: (1/2) [[1 + (1-s)^2, 0], [s^2, 0]]
        for sigma in [0.25, 0.6] {
            let m = restricted_rcd(2, sigma).unwrap();
            assert_relative_eq!(m.m[0][0], (1.0 + (1.0 - sigma).powi(2)) / 2.0);
            assert_relative_eq!(m.m[0][1], 0.0);
            assert_relative_eq!(m.m[1][0], sigma * sigma / 2.0);
            assert_relative_eq!(m.m[1][1], 0.0);
        }
        // sigma = 1: [[1 - 1/n, 0], [1/n, 1 - 2/n]]
        let m = restricted_rcd(5, 1.0).unwrap();
        assert_relative_eq!(m.m[0][0], 0.8);
        assert_relative_eq!(m.m[0][1], 0.0);
        assert_relative_eq!(m.m[1][0], 0.2);
        assert_relative_eq!(m.m[1][1], 0.6);
    }

    #[test]
    fn restricted_rcd_matches_projected_operator() {
        let n = 3;
        let sigma = 0.5;
        let a = make_pi(n, sigma).unwrap();
        let restricted = restricted_rcd(n, sigma).unwrap();
        let mi = rcd_operator_apply(&a, &Matrix::identity(n, n)).unwrap();
        let mo = rcd_operator_apply(&a, &Matrix::from_element(n, n, 1.0)).unwrap();
        let (a11, a21, r1) = span_coefficients(&mi);
        let (a12, a22, r2) = span_coefficients(&mo);
        assert!(r1 < 1e-12 && r2 < 1e-12);
        assert_relative_eq!(a11, restricted.m[0][0], epsilon = 1e-12);
        assert_relative_eq!(a21, restricted.m[1][0], epsilon = 1e-12);
        assert_relative_eq!(a12, restricted.m[0][1], epsilon = 1e-12);
        assert_relative_eq!(a22, restricted.m[1][1], epsilon = 1e-12);
    }

    #[test]
    fn rcd_spectral_radius_lower_bounded_by_diagonal_entry() {
        // p((M)_11) = -(M)_12 (M)_21 <= 0 forces rho >= 1 - 1/n + (1-s)^2/n
        for n in [2usize, 3, 10, 40] {
            for j in 1..10 {
                let sigma = j as f64 / 10.0;
                let m = restricted_rcd(n, sigma).unwrap();
                let lb = 1.0 - 1.0 / n as f64 + (1.0 - sigma) * (1.0 - sigma) / n as f64;
                assert!(m.spectral_radius() >= lb - 1e-12);
            }
        }
    }

    #[test]
    fn block_reduction_identities() {
        assert!(block_reduction_check(4, 4, 0.5).unwrap());
        assert!(block_reduction_check(5, 3, 0.3).unwrap());
        assert!(block_reduction_check(4, 2, 0.9).unwrap());
        assert!(matches!(block_reduction_check(7, 3, 0.5), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn similar_operator_matrices_are_symmetric() {
        for n in 2..=4usize {
            let a = make_pi(n, 0.6).unwrap();
            for kind in [OperatorKind::Rcd, OperatorKind::Rpcd] {
                let m = operator_matrix_similar(&a, kind).unwrap();
                assert!(linalg::symmetry_defect(&m) < 1e-9, "{kind:?} at n={n}");
            }
        }
    }

    #[test]
    fn complementary_permutation_transposes_the_conjugated_triangle() {
        // G_p = P Gamma_P P^T satisfies G_{p'} = G_p^T when p' runs the update
        // order of p in reverse; consequently T~ for p' is the transpose of
        // T~ for p, which pairs off the permutation sum into a symmetric form.
        for n in 2..=5usize {
            let a = crate::instances::random_unit_diag(n, 0.45, 5).unwrap();
            let a_half = linalg::spd_power(&a.hessian, 0.5);
            let a_inv_half = linalg::spd_power(&a.hessian, -0.5);
            for p in (0..n).permutations(n) {
                let pc: Vec<usize> = p.iter().rev().copied().collect();
                let g = conjugated_triangle(&a, &p);
                let gc = conjugated_triangle(&a, &pc);
                assert_relative_eq!(
                    linalg::frob_distance(&gc, &g.transpose()),
                    0.0,
                    epsilon = 1e-12
                );
                let t_sim = &a_half * rpcd_iteration_matrix(&a, &p).unwrap() * &a_inv_half;
                let tc_sim = &a_half * rpcd_iteration_matrix(&a, &pc).unwrap() * &a_inv_half;
                assert_relative_eq!(
                    linalg::frob_distance(&tc_sim, &t_sim.transpose()),
                    0.0,
                    epsilon = 1e-10
                );
            }
        }
    }

    fn conjugated_triangle(a: &QuadraticInstance, p: &[usize]) -> Matrix {
        let n = a.n;
        let pm = linalg::permutation_matrix(p);
        let gamma = linalg::tril(&(pm.transpose() * &a.hessian * &pm));
        &pm * gamma * pm.transpose()
    }

    #[test]
    fn sign_flip_leaves_full_operator_radius_unchanged() {
        let mut r = crate::rng::rng_from(31);
        let a = make_pi(4, 0.3).unwrap();
        let rho0 = spectral_radius(&rpcd_operator_matrix(&a).unwrap()).unwrap();
        for _ in 0..3 {
            let v = SignPattern::random(4, &mut r);
            let flipped = apply_sign_flip(&a, &v).unwrap();
            let rho1 = spectral_radius(&rpcd_operator_matrix(&flipped).unwrap()).unwrap();
            assert_relative_eq!(rho0, rho1, epsilon = 1e-9);
        }
    }

    #[test]
    fn norm_bound_identity_instance_is_zero() {
        let a = make_pi(3, 1.0).unwrap();
        assert_relative_eq!(norm_upper_bound(&a).unwrap(), 0.0, epsilon = 1e-13);
    }

    #[test]
    fn norm_bound_dominates_spectral_radius() {
        let a = make_pi(4, 0.3).unwrap();
        let bound = norm_upper_bound(&a).unwrap();
        let rho = spectral_radius(&rpcd_operator_matrix(&a).unwrap()).unwrap();
        assert!(bound >= rho - 1e-9, "bound {bound} < rho {rho}");
    }

    #[test]
    fn norm_bound_exact_matches_restricted_route_at_pi() {
        // frozen oracle: exhaustive value at n = 5, sigma = 0.3 is 0.483938778400
        let a = make_pi(5, 0.3).unwrap();
        let exact = norm_upper_bound(&a).unwrap();
        assert_relative_eq!(exact, 0.483938778400, epsilon = 1e-9);
        // restricted route: M(A) stays in span{I, 11^T}
        let m = restricted_rpcd(5, 0.3).unwrap();
        let (ca, cb) = m.apply(0.3, 0.7);
        let l = 5.0 - 4.0 * 0.3;
        let via_span = ((ca + 5.0 * cb) / l).max(ca / 0.3);
        assert_relative_eq!(exact, via_span, epsilon = 1e-12);
    }

    #[test]
    fn norm_bound_sampled_tracks_exact_at_small_n() {
        let a = make_pi(6, 0.4).unwrap();
        let exact = norm_upper_bound(&a).unwrap();
        let (est, se) = norm_upper_bound_sampled(&a, 400, 11).unwrap();
        assert!((est - exact).abs() < 4.0 * se + 1e-3, "est {est} exact {exact} se {se}");
    }

    #[test]
    fn closure_check_pi_case() {
        // a = b collapses the arrow form to the permutation-invariant matrix
        let m = arrow_matrix(4, 0.3, 0.3).unwrap();
        let resid = partially_invariant_closure_check(&m, 4).unwrap();
        assert!(resid < 1e-12, "residual {resid}");
    }

    #[test]
    fn closure_check_arrow_case() {
        let m = arrow_matrix(4, 0.3, 0.5).unwrap();
        let resid = partially_invariant_closure_check(&m, 8).unwrap();
        assert!(resid < 1e-10, "residual {resid}");
    }

    #[test]
    fn closure_check_rejects_generic_matrix_and_probe_shows_leakage() {
        let generic = crate::instances::random_unit_diag(4, 0.4, 40).unwrap();
        assert!(partially_invariant_closure_check(&generic.hessian, 2).is_err());
        // unchecked probe: a generic instance leaks far out of the subspace
        let resid = closure_residual_unchecked(&generic, 4).unwrap();
        assert!(resid > 1e-6, "unexpectedly closed: residual {resid}");
    }
}
