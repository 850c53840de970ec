//! Exact polynomial forms of the restricted-operator row sums.
//!
//! The 2x2 restriction of the RPCD expectation operator to span{I, 11^T} at
//! the permutation-invariant instance has row sums `T_1(m, s) / (m(m-1))` and
//! `T_2(m, s) / (m(m-1))`, polynomials in the smallest eigenvalue `s`. Two
//! independent routes build them:
//!
//! * `coefficients` - the closed-form coefficient case tables for
//!   `t_{1,k}` and `t_{2,k}`;
//! * `symbolic` - assembling `alpha, beta, gamma, delta` from the exact
//!   entries of `C = I - Gamma^{-1} A` as polynomials and combining
//!   `T_1 = m(beta+delta) - (alpha+gamma)`, `T_2 = (alpha+gamma) - (beta+delta)`.
//!
//! Route equality is an exact polynomial identity and is enforced by tests
//! and by the certification harness.

use super::poly::{rat, rat_int, Rational, RationalPolynomial};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TSeries {
    T1,
    T2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuildRoute {
    Coefficients,
    Symbolic,
}

/// Closed-form coefficient `t_{1,k}` of `T_1(n, s) = sum_k t_{1,k} s^k`.
pub fn t1_coefficient(n: i64, k: i64) -> i64 {
    debug_assert!(n >= 2 && (0..=2 * n).contains(&k));
    if k == 0 {
        n * n - n
    } else if k <= n {
        if k % 2 == 1 {
            (n - 1) * k - 2 * n * n - n + 3
        } else {
            -(n + 1) * k + 2 * n * n + 2 * n + 2
        }
    } else if k % 2 == 1 {
        (n + 1) * k - 2 * n * n - 3 * n - 1
    } else {
        -(n - 1) * k + 2 * n * n - 2
    }
}

/// Closed-form coefficient `t_{2,k}` of `T_2(n, s) = sum_k t_{2,k} s^k`.
pub fn t2_coefficient(n: i64, k: i64) -> i64 {
    debug_assert!(n >= 2 && (0..=2 * n).contains(&k));
    if k == 0 {
        n * n - 3 * n + 2
    } else if k < n {
        if k % 2 == 1 {
            -2 * n * n + 6 * n - 4
        } else {
            2 * k + 2 * n * n - 6 * n - 2
        }
    } else if k == n {
        if n % 2 == 1 {
            -2 * n * n + 8 * n - 6
        } else {
            2 * n * n - 2 * n - 4
        }
    } else if k % 2 == 1 {
        -2 * k - 2 * n * n + 6 * n + 2
    } else {
        2 * n * n - 6 * n + 4
    }
}

/// Exact lower-triangular-inverse residual matrix entries as polynomials:
/// `C[i][j]` for 1-indexed `i, j` at the permutation-invariant instance.
fn c_entry(m: usize, i: usize, j: usize) -> RationalPolynomial {
    // C_ij = -(1-s) s^{i-1}            if i < j
    //        (1-s) (s^{i-j} - s^{i-1}) if i >= j
    debug_assert!((1..=m).contains(&i) && (1..=m).contains(&j));
    let one_minus_s = RationalPolynomial::new(vec![rat_int(1), rat_int(-1)]);
    if i < j {
        one_minus_s.mul(&RationalPolynomial::monomial(rat_int(-1), i - 1))
    } else {
        let diff = RationalPolynomial::monomial(rat_int(1), i - j)
            .sub(&RationalPolynomial::monomial(rat_int(1), i - 1));
        one_minus_s.mul(&diff)
    }
}

/// The four scalar building blocks as exact polynomials in `s`:
/// `alpha = v^T v`, `beta = sum C_ij^2`, `gamma = (1^T v)^2`, `delta = w^T w`
/// with `v = C 1` and `w = C^T 1`.
pub fn abgd_polynomials(
    m: usize,
) -> (RationalPolynomial, RationalPolynomial, RationalPolynomial, RationalPolynomial) {
    assert!(m >= 2);
    let mut rows: Vec<RationalPolynomial> = vec![RationalPolynomial::zero(); m];
    let mut cols: Vec<RationalPolynomial> = vec![RationalPolynomial::zero(); m];
    let mut beta = RationalPolynomial::zero();
    for i in 1..=m {
        for j in 1..=m {
            let c = c_entry(m, i, j);
            beta = beta.add(&c.mul(&c));
            rows[i - 1] = rows[i - 1].add(&c);
            cols[j - 1] = cols[j - 1].add(&c);
        }
    }
    let mut alpha = RationalPolynomial::zero();
    let mut delta = RationalPolynomial::zero();
    let mut ones_v = RationalPolynomial::zero();
    for i in 0..m {
        alpha = alpha.add(&rows[i].mul(&rows[i]));
        delta = delta.add(&cols[i].mul(&cols[i]));
        ones_v = ones_v.add(&rows[i]);
    }
    let gamma = ones_v.mul(&ones_v);
    (alpha, beta, gamma, delta)
}

/// Builds `T_i(m, s) / (m(m-1))` by the requested route.
pub fn build_t(m: usize, which: TSeries, route: BuildRoute) -> Result<RationalPolynomial> {
    if m < 2 {
        return Err(Error::Domain(format!("m = {m} must be >= 2")));
    }
    let norm = rat(1, (m * (m - 1)) as i64);
    let poly = match route {
        BuildRoute::Coefficients => {
            let n = m as i64;
            let coeffs: Vec<Rational> = (0..=2 * n)
                .map(|k| {
                    rat_int(match which {
                        TSeries::T1 => t1_coefficient(n, k),
                        TSeries::T2 => t2_coefficient(n, k),
                    })
                })
                .collect();
            RationalPolynomial::new(coeffs)
        }
        BuildRoute::Symbolic => {
            let (alpha, beta, gamma, delta) = abgd_polynomials(m);
            let bd = beta.add(&delta);
            let ag = alpha.add(&gamma);
            match which {
                TSeries::T1 => bd.scale(&rat_int(m as i64)).sub(&ag),
                TSeries::T2 => ag.sub(&bd),
            }
        }
    };
    Ok(poly.scale(&norm))
}

/// The exact quartic upper bounds on `T_i(n, s) / (n(n-1))`:
///
/// `T1`: `1 - (2 + 1/n) s + (2n/(n-1)) s^2 - 2 s^3 + (2(n^2-n-1)/(n(n-1))) s^4`
/// `T2`: `(1-2/n) - 2(1-2/n) s + (2(n^2-3n+1)/(n(n-1))) s^2 - 2(1-2/n) s^3
///        + (2(n^2-3n+3)/(n(n-1))) s^4`
///
/// `T1` dominates on all of `(0, 1]`; `T2` requires `n >= 5` and
/// `s <= min{(n-1)/(n+1), (n-3)/(n-2)}` (which contains `(0, 3/5]`).
pub fn taylor4_polynomial(n: usize, which: TSeries) -> Result<RationalPolynomial> {
    let nn = n as i64;
    match which {
        TSeries::T1 => {
            if n < 2 {
                return Err(Error::Domain(format!("n = {n} must be >= 2")));
            }
            Ok(RationalPolynomial::new(vec![
                rat_int(1),
                -rat(2 * nn + 1, nn),
                rat(2 * nn, nn - 1),
                rat_int(-2),
                rat(2 * (nn * nn - nn - 1), nn * (nn - 1)),
            ]))
        }
        TSeries::T2 => {
            if n < 5 {
                return Err(Error::Domain(format!(
                    "n = {n} must be >= 5 for the T2 quartic's validity window"
                )));
            }
            let one_minus_2n = rat(nn - 2, nn);
            Ok(RationalPolynomial::new(vec![
                one_minus_2n.clone(),
                -(one_minus_2n.clone() + one_minus_2n.clone()),
                rat(2 * (nn * nn - 3 * nn + 1), nn * (nn - 1)),
                -(one_minus_2n.clone() + one_minus_2n),
                rat(2 * (nn * nn - 3 * nn + 3), nn * (nn - 1)),
            ]))
        }
    }
}
