//! Replay of the four certified inequality families and the worked example.
//!
//! The families, each certified with exact arithmetic:
//!
//! 1. `T_i(m,s)/(m(m-1)) <= (1 - s/n)^{2n}` for `2 <= m <= n <= 6`, `i = 1,2`,
//!    on `(0, 3/5]`. Both sides equal 1 at `s = 0` for `i = 1`, so the exact
//!    root at the open endpoint is deflated before counting roots.
//! 2. `T_1(m,s)/(m(m-1)) <= 1/4` for `2 <= m <= 10` on `[3/5, 4/5]`.
//! 3. `T_1(m,s)/(m(m-1)) <= 1/4` for `2 <= m <= 14` on `[4/5, 1)`.
//! 4. `T_2(m,s)/(m(m-1)) <= 1/4` for `2 <= m <= 10` on `[3/5, 1)`.
//!
//! Nonnegativity on a half-open interval is established by a zero root count
//! on the open interior plus strict positivity at one endpoint. Before any
//! certification the two independent T-polynomial routes are compared for
//! exact equality, so a corrupted coefficient table cannot slip through.

use serde::Serialize;

use super::poly::{rat, rat_int, Rational, RationalPolynomial};
use super::sturm::{count_roots, verify_nonneg, IntervalEnd, NonnegCertificate, SturmCertificate};
use super::tseries::{build_t, BuildRoute, TSeries};
use crate::error::{Error, Result};

/// One certified inequality instance.
#[derive(Debug)]
pub struct CaseCertificate {
    pub case: u8,
    pub outer_n: Option<usize>,
    pub m: usize,
    pub series: TSeries,
    pub interval: (Rational, Rational),
    /// Multiplicity of the exact root deflated at the lower endpoint.
    pub deflated: usize,
    pub result: NonnegCertificate,
}

impl CaseCertificate {
    pub fn passed(&self) -> bool {
        self.result.verified
    }

    pub fn label(&self) -> String {
        let series = match self.series {
            TSeries::T1 => "T1",
            TSeries::T2 => "T2",
        };
        match self.outer_n {
            Some(n) => format!("case{} n={} m={} {}", self.case, n, self.m, series),
            None => format!("case{} m={} {}", self.case, self.m, series),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct CaseCertificateJson {
    pub label: String,
    pub interval: [[String; 2]; 2],
    pub deflated: usize,
    pub root_count: usize,
    pub endpoint_sign: i8,
    pub passed: bool,
}

impl CaseCertificate {
    pub fn to_json_view(&self) -> CaseCertificateJson {
        CaseCertificateJson {
            label: self.label(),
            interval: [
                [self.interval.0.numer().to_string(), self.interval.0.denom().to_string()],
                [self.interval.1.numer().to_string(), self.interval.1.denom().to_string()],
            ],
            deflated: self.deflated,
            root_count: self.result.certificate.root_count,
            endpoint_sign: self.result.endpoint_sign,
            passed: self.result.verified,
        }
    }
}

/// `(1 - s/n)^{2n}` as an exact polynomial.
fn rcd_bound_polynomial(n: usize) -> RationalPolynomial {
    let base = RationalPolynomial::new(vec![rat_int(1), rat(-1, n as i64)]);
    let mut acc = RationalPolynomial::constant(rat_int(1));
    for _ in 0..2 * n {
        acc = acc.mul(&base);
    }
    acc
}

/// Builds `T_i(m,s)/(m(m-1))` through both routes and insists they agree.
fn build_t_checked(m: usize, which: TSeries) -> Result<RationalPolynomial> {
    let a = build_t(m, which, BuildRoute::Coefficients)?;
    let b = build_t(m, which, BuildRoute::Symbolic)?;
    if a != b {
        return Err(Error::Domain(format!(
            "T-polynomial routes disagree at m = {m} ({which:?}); coefficient table corrupted"
        )));
    }
    Ok(a)
}

fn certify(
    case: u8,
    outer_n: Option<usize>,
    m: usize,
    series: TSeries,
    mut diff: RationalPolynomial,
    a: Rational,
    b: Rational,
) -> Result<CaseCertificate> {
    // An exact root at the open lower endpoint (both sides of case 1 equal 1
    // at s = 0) would violate the Sturm precondition; dividing out the factor
    // s^k changes neither the root set nor the sign on (0, b].
    let mut deflated = 0;
    if diff.sign_at(&a) == 0 {
        let (q, mult) = diff.deflate_root(&a);
        diff = q;
        deflated = mult;
    }
    let result = verify_nonneg(&diff, &a, &b, IntervalEnd::Upper)?;
    Ok(CaseCertificate { case, outer_n, m, series, interval: (a, b), deflated, result })
}

fn run_cases(
    build: &dyn Fn(usize, TSeries) -> Result<RationalPolynomial>,
) -> Result<Vec<CaseCertificate>> {
    let mut out = Vec::new();
    let quarter = RationalPolynomial::constant(rat(1, 4));

    // Case 1: against (1 - s/n)^{2n} on (0, 3/5]
    for n in 2..=6usize {
        let bound = rcd_bound_polynomial(n);
        for m in 2..=n {
            for series in [TSeries::T1, TSeries::T2] {
                let diff = bound.sub(&build(m, series)?);
                out.push(certify(1, Some(n), m, series, diff, rat_int(0), rat(3, 5))?);
            }
        }
    }
    // Case 2: T1 <= 1/4 on [3/5, 4/5], m <= 10
    for m in 2..=10usize {
        let diff = quarter.sub(&build(m, TSeries::T1)?);
        out.push(certify(2, None, m, TSeries::T1, diff, rat(3, 5), rat(4, 5))?);
    }
    // Case 3: T1 <= 1/4 on [4/5, 1), m <= 14
    for m in 2..=14usize {
        let diff = quarter.sub(&build(m, TSeries::T1)?);
        out.push(certify(3, None, m, TSeries::T1, diff, rat(4, 5), rat_int(1))?);
    }
    // Case 4: T2 <= 1/4 on [3/5, 1), m <= 10
    for m in 2..=10usize {
        let diff = quarter.sub(&build(m, TSeries::T2)?);
        out.push(certify(4, None, m, TSeries::T2, diff, rat(3, 5), rat_int(1))?);
    }
    Ok(out)
}

/// Runs all four families; any failing certificate aborts with its case id.
pub fn verify_appendix_cases() -> Result<Vec<CaseCertificate>> {
    let certs = run_cases(&build_t_checked)?;
    if let Some(bad) = certs.iter().find(|c| !c.passed()) {
        return Err(Error::Domain(format!("certification failed at {}", bad.label())));
    }
    Ok(certs)
}

/// Test hook: runs the families against an arbitrary T-polynomial builder.
pub fn verify_cases_with(
    build: &dyn Fn(usize, TSeries) -> Result<RationalPolynomial>,
) -> Result<Vec<CaseCertificate>> {
    let certs = run_cases(build)?;
    if let Some(bad) = certs.iter().find(|c| !c.passed()) {
        return Err(Error::Domain(format!("certification failed at {}", bad.label())));
    }
    Ok(certs)
}

/// The fully worked certification example: the displayed degree-6 polynomial
/// `p0 = 1/4 - T_2(3,s)/36` root-counted on `(3/5, 1)`.
pub struct WorkedExample {
    pub p0: RationalPolynomial,
    pub certificate: SturmCertificate,
}

pub fn worked_example() -> Result<WorkedExample> {
    let t2 = build_t_checked(3, TSeries::T2)?;
    let p0 = RationalPolynomial::constant(rat(1, 4)).sub(&t2.scale(&rat(1, 6)));
    let certificate = count_roots(&p0, &rat(3, 5), &rat_int(1))?;
    Ok(WorkedExample { p0, certificate })
}
