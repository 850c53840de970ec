//! Exact rational polynomial arithmetic, Sturm root counting, and the
//! certification harness for the closed-form rate inequalities.

mod poly;
mod sturm;
mod tseries;
mod verify;

pub use poly::{rat, rat_int, rat_pow, rational_to_f64, Rational, RationalPolynomial};
pub use sturm::{
    count_roots, sign_variations, sturm_sequence, verify_nonneg, IntervalEnd, NonnegCertificate,
    SturmCertificate, SturmCertificateJson,
};
pub use tseries::{
    abgd_polynomials, build_t, t1_coefficient, t2_coefficient, taylor4_polynomial, BuildRoute,
    TSeries,
};
pub use verify::{
    verify_appendix_cases, verify_cases_with, worked_example, CaseCertificate,
    CaseCertificateJson, WorkedExample,
};
