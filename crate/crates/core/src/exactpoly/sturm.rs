//! Sturm sequences and exact root counting on intervals.
//!
//! The standard sequence of `f` is `f_0 = f`, `f_1 = f'`, then
//! `f_{i+1} = -(f_{i-1} mod f_i)` until the zero polynomial, which is kept as
//! the final entry. The number of distinct real roots of `f` in the open
//! interval `(a, b)` is `V_a - V_b`, the drop-zeros sign-variation counts of
//! the sequence evaluated at the endpoints; the endpoints themselves must not
//! be roots of `f`.

use serde::Serialize;

use super::poly::{Rational, RationalPolynomial};
use crate::error::{Error, Result};

/// Standard sequence for `f`, including the terminating zero polynomial.
pub fn sturm_sequence(f: &RationalPolynomial) -> Vec<RationalPolynomial> {
    let mut seq = vec![f.clone(), f.derivative()];
    while !seq.last().expect("nonempty").is_zero() {
        let (_, r) = seq[seq.len() - 2]
            .divide_with_remainder(&seq[seq.len() - 1])
            .expect("divisor checked nonzero");
        seq.push(r.neg());
    }
    seq
}

/// Number of sign variations after dropping zeros.
pub fn sign_variations(values: &[Rational]) -> usize {
    use num::traits::{Signed, Zero};
    let mut variations = 0;
    let mut last: i8 = 0;
    for v in values {
        let s: i8 = if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        };
        if s != 0 {
            if last != 0 && s != last {
                variations += 1;
            }
            last = s;
        }
    }
    variations
}

fn signs_of(values: &[Rational]) -> Vec<i8> {
    use num::traits::{Signed, Zero};
    values
        .iter()
        .map(|v| {
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        })
        .collect()
}

/// A replayable record of one root-counting run.
#[derive(Debug, Clone)]
pub struct SturmCertificate {
    pub polynomial: RationalPolynomial,
    pub a: Rational,
    pub b: Rational,
    pub sequence: Vec<RationalPolynomial>,
    pub values_a: Vec<Rational>,
    pub values_b: Vec<Rational>,
    pub signs_a: Vec<i8>,
    pub signs_b: Vec<i8>,
    pub variations_a: usize,
    pub variations_b: usize,
    pub root_count: usize,
}

/// Lossless JSON view: rationals as decimal numerator/denominator strings.
#[derive(Debug, Serialize)]
pub struct SturmCertificateJson {
    pub polynomial: Vec<[String; 2]>,
    pub a: [String; 2],
    pub b: [String; 2],
    pub sequence_degrees: Vec<i64>,
    pub signs_a: Vec<i8>,
    pub signs_b: Vec<i8>,
    pub variations_a: usize,
    pub variations_b: usize,
    pub root_count: usize,
}

fn rational_pair(r: &Rational) -> [String; 2] {
    [r.numer().to_string(), r.denom().to_string()]
}

impl SturmCertificate {
    pub fn to_json_view(&self) -> SturmCertificateJson {
        SturmCertificateJson {
            polynomial: self.polynomial.coeffs().iter().map(rational_pair).collect(),
            a: rational_pair(&self.a),
            b: rational_pair(&self.b),
            sequence_degrees: self
                .sequence
                .iter()
                .map(|p| if p.is_zero() { -1 } else { p.degree() as i64 })
                .collect(),
            signs_a: self.signs_a.clone(),
            signs_b: self.signs_b.clone(),
            variations_a: self.variations_a,
            variations_b: self.variations_b,
            root_count: self.root_count,
        }
    }
}

/// Counts distinct roots of `f` in the open interval `(a, b)`.
///
/// Errors with `EndpointZero` if `f(a) = 0` or `f(b) = 0` (checked exactly).
pub fn count_roots(f: &RationalPolynomial, a: &Rational, b: &Rational) -> Result<SturmCertificate> {
    if f.sign_at(a) == 0 {
        return Err(Error::EndpointZero { which: "a" });
    }
    if f.sign_at(b) == 0 {
        return Err(Error::EndpointZero { which: "b" });
    }
    if f.degree() == 0 {
        // nonzero constant: no roots anywhere
        return Ok(SturmCertificate {
            polynomial: f.clone(),
            a: a.clone(),
            b: b.clone(),
            sequence: vec![f.clone(), RationalPolynomial::zero()],
            values_a: vec![f.evaluate(a)],
            values_b: vec![f.evaluate(b)],
            signs_a: vec![f.sign_at(a)],
            signs_b: vec![f.sign_at(b)],
            variations_a: 0,
            variations_b: 0,
            root_count: 0,
        });
    }
    let sequence = sturm_sequence(f);
    let values_a: Vec<Rational> = sequence.iter().map(|p| p.evaluate(a)).collect();
    let values_b: Vec<Rational> = sequence.iter().map(|p| p.evaluate(b)).collect();
    let variations_a = sign_variations(&values_a);
    let variations_b = sign_variations(&values_b);
    let root_count = variations_a - variations_b;
    Ok(SturmCertificate {
        polynomial: f.clone(),
        a: a.clone(),
        b: b.clone(),
        signs_a: signs_of(&values_a),
        signs_b: signs_of(&values_b),
        sequence,
        values_a,
        values_b,
        variations_a,
        variations_b,
        root_count,
    })
}

/// Certified nonnegativity of `p` on an interval with one closed endpoint.
///
/// `p >= 0` (in fact `> 0`) holds on the interval when `p` has no roots in
/// `(a, b)` and is strictly positive at the designated endpoint; the other
/// endpoint may be excluded from the claim but must still be nonzero for the
/// root count to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalEnd {
    Lower,
    Upper,
}

#[derive(Debug, Clone)]
pub struct NonnegCertificate {
    pub certificate: SturmCertificate,
    pub positive_endpoint: IntervalEnd,
    pub endpoint_sign: i8,
    pub verified: bool,
}

pub fn verify_nonneg(
    p: &RationalPolynomial,
    a: &Rational,
    b: &Rational,
    positive_endpoint: IntervalEnd,
) -> Result<NonnegCertificate> {
    // degenerate constant difference: direct sign test, no Sturm needed
    if p.degree() == 0 || p.is_zero() {
        use num::traits::Signed;
        let c = p.coeff(0);
        let sign: i8 = if c.is_positive() {
            1
        } else if c.is_negative() {
            -1
        } else {
            0
        };
        let cert = SturmCertificate {
            polynomial: p.clone(),
            a: a.clone(),
            b: b.clone(),
            sequence: vec![p.clone(), RationalPolynomial::zero()],
            values_a: vec![p.evaluate(a)],
            values_b: vec![p.evaluate(b)],
            signs_a: vec![sign],
            signs_b: vec![sign],
            variations_a: 0,
            variations_b: 0,
            root_count: 0,
        };
        return Ok(NonnegCertificate {
            certificate: cert,
            positive_endpoint,
            endpoint_sign: sign,
            verified: sign >= 0,
        });
    }
    let certificate = count_roots(p, a, b)?;
    let endpoint_sign = match positive_endpoint {
        IntervalEnd::Lower => p.sign_at(a),
        IntervalEnd::Upper => p.sign_at(b),
    };
    let verified = certificate.root_count == 0 && endpoint_sign > 0;
    Ok(NonnegCertificate { certificate, positive_endpoint, endpoint_sign, verified })
}
