//! Dense univariate polynomials over arbitrary-precision rationals.
//!
//! Every operation is exact; nothing in this module ever rounds. Rationals
//! are kept in lowest terms with positive denominators (the `Ratio` invariant),
//! which is what makes exact sign tests possible.

use std::fmt;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> Rational {
    BigRational::from_integer(BigInt::from(v))
}

/// `base^exp` for a rational base and nonnegative integer exponent.
pub fn rat_pow(base: &Rational, exp: u32) -> Rational {
    let mut acc = Rational::one();
    let mut b = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &b;
        }
        b = &b * &b;
        e >>= 1;
    }
    acc
}

/// A polynomial stored as dense coefficients, index = degree.
///
/// The zero polynomial is represented by an empty coefficient vector; any
/// other representation has a nonzero leading coefficient.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalPolynomial {
    coeffs: Vec<Rational>,
}

impl RationalPolynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) - other.coeff(k));
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// True rational polynomial division: `self = q * divisor + r` with
    /// `deg r < deg divisor`. No pseudo-division; the quotients and
    /// remainders come out exactly as in the reference computation.
    pub fn divide_with_remainder(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::DivisionByZeroPolynomial);
        }
        let dd = divisor.degree();
        let lead = divisor.leading().expect("nonzero divisor").clone();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let qlen = rem.len() - divisor.coeffs.len() + 1;
        let mut q = vec![Rational::zero(); qlen];
        for k in (0..qlen).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, b) in divisor.coeffs.iter().enumerate() {
                    let delta = &c * b;
                    rem[k + j] -= delta;
                }
            }
            q[k] = c;
        }
        rem.truncate(dd);
        Ok((Self::new(q), Self::new(rem)))
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let out = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
            .collect();
        Self::new(out)
    }

    /// Exact evaluation by Horner's rule.
    pub fn evaluate(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of the exact value at `x`: -1, 0, or +1.
    ///
    /// Clears denominators and runs an integer Horner scheme, which avoids
    /// the gcd reductions a full rational evaluation performs at every step.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        if self.is_zero() {
            return 0;
        }
        let d = self.degree();
        // common denominator of the coefficients
        let mut denom_lcm = BigInt::from(1);
        for c in &self.coeffs {
            denom_lcm = num::integer::lcm(denom_lcm, c.denom().clone());
        }
        let p = x.numer();
        let q = x.denom(); // positive by the Ratio invariant
        // N = sum_k c_k * L * p^k * q^{d-k}; sign(N) = sign of the value
        let mut acc = BigInt::from(0);
        let mut qpow = BigInt::from(1);
        for k in (0..=d).rev() {
            acc = acc * p + self.coeff(k).numer() * (&denom_lcm / self.coeff(k).denom()) * &qpow;
            if k > 0 {
                qpow *= q;
            }
        }
        use num::traits::Zero as _;
        if acc.is_zero() {
            0
        } else if acc.sign() == num::bigint::Sign::Plus {
            1
        } else {
            -1
        }
    }

    /// Divides out the factor `(x - root)^multiplicity` where `root` is an
    /// exact root; returns the deflated polynomial and the multiplicity.
    pub fn deflate_root(&self, root: &Rational) -> (Self, usize) {
        let linear = Self::new(vec![-root.clone(), Rational::one()]);
        let mut p = self.clone();
        let mut mult = 0;
        while !p.is_zero() && p.sign_at(root) == 0 {
            let (q, r) = p.divide_with_remainder(&linear).expect("nonzero divisor");
            debug_assert!(r.is_zero());
            p = q;
            mult += 1;
        }
        (p, mult)
    }

    /// Approximate f64 evaluation (for float/exact bridge tests).
    pub fn evaluate_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + rational_to_f64(c);
        }
        acc
    }
}

pub fn rational_to_f64(r: &Rational) -> f64 {
    let num = r.numer();
    let den = r.denom();
    // exact conversion path for small values, ratio of f64s otherwise
    match (num.try_into().ok(), den.try_into().ok()) {
        (Some(n), Some(d)) => {
            let n: i64 = n;
            let d: i64 = d;
            n as f64 / d as f64
        }
        _ => {
            use num::ToPrimitive;
            r.to_f64().unwrap_or(f64::NAN)
        }
    }
}

impl fmt::Debug for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                1 => {
                    if a.is_one() {
                        write!(f, "s")?;
                    } else {
                        write!(f, "{a} s")?;
                    }
                }
                _ => {
                    if a.is_one() {
                        write!(f, "s^{k}")?;
                    } else {
                        write!(f, "{a} s^{k}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_quadratic() {
        // d/ds (s^2 - 1) = 2s
        let p = RationalPolynomial::new(vec![rat_int(-1), rat_int(0), rat_int(1)]);
        let d = p.derivative();
        assert_eq!(d, RationalPolynomial::new(vec![rat_int(0), rat_int(2)]));
    }

    #[test]
    fn division_cubic_by_quadratic() {
        // s^3 / s^2 -> quotient s, remainder 0
        let p = RationalPolynomial::monomial(rat_int(1), 3);
        let d = RationalPolynomial::monomial(rat_int(1), 2);
        let (q, r) = p.divide_with_remainder(&d).unwrap();
        assert_eq!(q, RationalPolynomial::monomial(rat_int(1), 1));
        assert!(r.is_zero());
    }

    #[test]
    fn division_with_remainder_reconstructs() {
        let p = RationalPolynomial::new(vec![rat(1, 3), rat(-2, 5), rat_int(4), rat_int(1), rat(7, 2)]);
        let d = RationalPolynomial::new(vec![rat_int(-1), rat(2, 3), rat_int(1)]);
        let (q, r) = p.divide_with_remainder(&d).unwrap();
        assert!(r.degree() < d.degree());
        assert_eq!(q.mul(&d).add(&r), p);
    }

    #[test]
    fn division_by_zero_polynomial_errors() {
        let p = RationalPolynomial::monomial(rat_int(1), 1);
        assert!(matches!(
            p.divide_with_remainder(&RationalPolynomial::zero()),
            Err(Error::DivisionByZeroPolynomial)
        ));
    }

    #[test]
    fn evaluate_worked_example_at_one() {
        // -s^6/9 + 2 s^5/9 - s^4/9 - s^2/18 + s/9 + 7/36 at s = 1 is 1/4
        let p = RationalPolynomial::new(vec![
            rat(7, 36),
            rat(1, 9),
            rat(-1, 18),
            rat_int(0),
            rat(-1, 9),
            rat(2, 9),
            rat(-1, 9),
        ]);
        assert_eq!(p.evaluate(&rat_int(1)), rat(1, 4));
    }

    #[test]
    fn deflate_removes_exact_roots_only() {
        // s^2 (s - 2): double root at 0
        let p = RationalPolynomial::new(vec![rat_int(0), rat_int(0), rat_int(-2), rat_int(1)]);
        let (q, mult) = p.deflate_root(&rat_int(0));
        assert_eq!(mult, 2);
        assert_eq!(q, RationalPolynomial::new(vec![rat_int(-2), rat_int(1)]));
        let (same, zero_mult) = q.deflate_root(&rat_int(1));
        assert_eq!(zero_mult, 0);
        assert_eq!(same, q);
    }
}
