//! Closed-form convergence-rate bounds and the non-asymptotic epoch threshold.
//!
//! Conventions: RCD rates are per iteration, RPCD rates per epoch; `n`
//! iterations of RCD correspond to one epoch of RPCD, so the RPCD bound is
//! exactly the n-th power of the RCD bound.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{rat, rat_int, rat_pow, Rational};

fn check_domain(n: usize, sigma: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be >= 2")));
    }
    if !(sigma > 0.0 && sigma <= 1.0) {
        return Err(Error::Domain(format!("sigma = {sigma} not in (0, 1]")));
    }
    Ok(())
}

/// Per-iteration RCD lower bound `max{1 - 1/n, (1 - sigma/n)^2}` for all
/// positive-definite quadratics.
pub fn rcd_lower_bound(n: usize, sigma: f64) -> Result<f64> {
    check_domain(n, sigma)?;
    let nf = n as f64;
    Ok((1.0 - 1.0 / nf).max((1.0 - sigma / nf).powi(2)))
}

/// Per-epoch RPCD upper bound `max{(1-1/n)^n, (1-sigma/n)^{2n}}` for the
/// permutation-invariant family; the exact n-th power of the RCD bound.
pub fn rpcd_upper_bound(n: usize, sigma: f64) -> Result<f64> {
    Ok(rcd_lower_bound(n, sigma)?.powi(n as i32))
}

/// Stronger per-iteration RCD lower bound `1 - 1/n + (1-sigma)^2/n` on the
/// permutation-invariant family.
pub fn rcd_lower_bound_pi(n: usize, sigma: f64) -> Result<f64> {
    check_domain(n, sigma)?;
    let nf = n as f64;
    Ok(1.0 - 1.0 / nf + (1.0 - sigma) * (1.0 - sigma) / nf)
}

/// The per-epoch reference rate `1 - 2 sigma - 2 sigma/n + 2 sigma^2` quoted
/// for comparison with prior permutation-invariant analyses.
pub fn lee_rate_reference(n: usize, sigma: f64) -> Result<f64> {
    check_domain(n, sigma)?;
    let nf = n as f64;
    Ok(1.0 - 2.0 * sigma - 2.0 * sigma / nf + 2.0 * sigma * sigma)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TaylorSeries {
    T1,
    T2,
}

/// Coefficients (degree 0..=4) of the quartic upper bound on
/// `T_i(n, sigma) / (n(n-1))`.
///
/// The T1 quartic bounds on all of (0, 1]; the T2 quartic needs `n >= 5` and
/// is a bound on `(0, min{(n-1)/(n+1), (n-3)/(n-2)}]`, which contains
/// `(0, 3/5]`.
pub fn taylor4_upper(n: usize, which: TaylorSeries) -> Result<[f64; 5]> {
    let nf = n as f64;
    match which {
        TaylorSeries::T1 => {
            if n < 2 {
                return Err(Error::Domain(format!("n = {n} must be >= 2")));
            }
            Ok([
                1.0,
                -(2.0 + 1.0 / nf),
                2.0 * nf / (nf - 1.0),
                -2.0,
                2.0 * (nf * nf - nf - 1.0) / (nf * (nf - 1.0)),
            ])
        }
        TaylorSeries::T2 => {
            if n < 5 {
                return Err(Error::Domain(format!("n = {n} must be >= 5 for the T2 quartic")));
            }
            let c = 1.0 - 2.0 / nf;
            Ok([
                c,
                -2.0 * c,
                2.0 * (nf * nf - 3.0 * nf + 1.0) / (nf * (nf - 1.0)),
                -2.0 * c,
                2.0 * (nf * nf - 3.0 * nf + 3.0) / (nf * (nf - 1.0)),
            ])
        }
    }
}

pub fn eval_quartic(coeffs: &[f64; 5], sigma: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * sigma + c)
}

/// Log-domain slack of the epoch-count inequality at epoch `k`:
/// positive (or zero) exactly when
/// `(1 - 1/n + (1-sigma)^2/n)^n (1/2)^{1/K}
///  >= max{(1-1/n)^n, (1-sigma/n)^{2n}} (sqrt(2(n^2+1)))^{1/K}`.
pub fn nonasymptotic_slack(n: usize, sigma: f64, k: u64) -> Result<f64> {
    check_domain(n, sigma)?;
    if k == 0 {
        return Err(Error::Domain("epoch count must be >= 1".into()));
    }
    let nf = n as f64;
    let lhs = nf * (1.0 - 1.0 / nf + (1.0 - sigma) * (1.0 - sigma) / nf).ln();
    let rhs = (nf * (1.0 - 1.0 / nf).ln()).max(2.0 * nf * (1.0 - sigma / nf).ln());
    let constant = (2.0 * (2.0 * (nf * nf + 1.0)).sqrt()).ln();
    Ok((lhs - rhs) - constant / k as f64)
}

const K0_SEARCH_CAP: u64 = 1_000_000;

/// Smallest epoch count `K >= 1` from which the RCD lower bound provably
/// exceeds the RPCD upper bound. `None` when `sigma = 1`, where the two
/// bounds coincide and no finite threshold exists.
///
/// The right-hand side of the inequality is decreasing in `K`, so a linear
/// scan's first success is the threshold.
pub fn nonasymptotic_k0(n: usize, sigma: f64) -> Result<Option<u64>> {
    check_domain(n, sigma)?;
    if sigma >= 1.0 {
        return Ok(None);
    }
    for k in 1..=K0_SEARCH_CAP {
        if nonasymptotic_slack(n, sigma, k)? >= 0.0 {
            return Ok(Some(k));
        }
    }
    Err(Error::NoConvergence(K0_SEARCH_CAP as usize))
}

/// All closed-form rates at one `(n, sigma)` cell.
#[derive(Debug, Clone, Serialize)]
pub struct RateReport {
    pub n: usize,
    pub sigma: f64,
    pub rcd_lb_per_iter: f64,
    pub rcd_lb_pi_per_iter: f64,
    pub rpcd_ub_per_epoch: f64,
    /// Quartic bounds evaluated at sigma; populated on their validity window
    /// (sigma <= 3/5, and n >= 5 for T2).
    pub taylor_t1_ub: Option<f64>,
    pub taylor_t2_ub: Option<f64>,
    pub lee_rate_reference: f64,
    pub nonasymptotic_k0: Option<u64>,
}

impl RateReport {
    pub fn build(n: usize, sigma: f64) -> Result<Self> {
        let taylor_window = sigma <= 0.6;
        let taylor_t1_ub = if taylor_window {
            Some(eval_quartic(&taylor4_upper(n, TaylorSeries::T1)?, sigma))
        } else {
            None
        };
        let taylor_t2_ub = if taylor_window && n >= 5 {
            Some(eval_quartic(&taylor4_upper(n, TaylorSeries::T2)?, sigma))
        } else {
            None
        };
        Ok(RateReport {
            n,
            sigma,
            rcd_lb_per_iter: rcd_lower_bound(n, sigma)?,
            rcd_lb_pi_per_iter: rcd_lower_bound_pi(n, sigma)?,
            rpcd_ub_per_epoch: rpcd_upper_bound(n, sigma)?,
            taylor_t1_ub,
            taylor_t2_ub,
            lee_rate_reference: lee_rate_reference(n, sigma)?,
            nonasymptotic_k0: nonasymptotic_k0(n, sigma)?,
        })
    }
}

/// Exact-rational `(1 - 1/n + (1-sigma)^2/n)^n` at a rational sigma.
pub fn rcd_lower_bound_pi_pow_n_exact(n: usize, sigma: &Rational) -> Rational {
    let nn = n as i64;
    let one_minus = rat_int(1) - sigma.clone();
    let base = rat(nn - 1, nn) + &one_minus * &one_minus * rat(1, nn);
    rat_pow(&base, n as u32)
}

/// Exact-rational `max{(1-1/n)^n, (1-sigma/n)^{2n}}` at a rational sigma.
pub fn rpcd_upper_bound_exact(n: usize, sigma: &Rational) -> Rational {
    let nn = n as i64;
    let term1 = rat_pow(&rat(nn - 1, nn), n as u32);
    let term2 = rat_pow(&(rat_int(1) - sigma * rat(1, nn)), 2 * n as u32);
    term1.max(term2)
}
