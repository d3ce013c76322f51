//! Scalar values for the two numeric backends.
//!
//! The float backend uses [`num_complex::Complex64`]. The exact backend uses
//! [`GaussianRational`]: a complex number whose real and imaginary parts are
//! arbitrary-precision rationals. Exact values are normalized after every
//! operation (reduced fractions, positive denominators), which
//! [`num_rational::Ratio`] guarantees by construction.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::matrix::Backend;

/// A complex number with exact rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    /// Real integer value.
    pub fn from_integer(value: i64) -> Self {
        Self {
            re: BigRational::from_integer(BigInt::from(value)),
            im: BigRational::zero(),
        }
    }

    /// Real fraction `numer / denom`. Panics if `denom == 0`.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(numer), BigInt::from(denom)),
            im: BigRational::zero(),
        }
    }

    /// Value `re_n/re_d + (im_n/im_d) i`. Panics if a denominator is 0.
    pub fn from_ratios(re_n: i64, re_d: i64, im_n: i64, im_d: i64) -> Self {
        Self {
            re: BigRational::new(BigInt::from(re_n), BigInt::from(re_d)),
            im: BigRational::new(BigInt::from(im_n), BigInt::from(im_d)),
        }
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn conj(&self) -> Self {
        Self {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Nearest-f64 approximation, for diagnostics and norms only.
    pub fn approx(&self) -> Complex64 {
        Complex64::new(approx_rational(&self.re), approx_rational(&self.im))
    }

    /// Total order by real part, then imaginary part. Used to fix iteration
    /// and report orders; not a meaningful order on complex numbers.
    pub fn sort_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }
}

fn approx_rational(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Zero for GaussianRational {
    fn zero() -> Self {
        Self {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussianRational {
    fn one() -> Self {
        Self {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = &self.re * &rhs.re - &self.im * &rhs.im;
        let im = &self.re * &rhs.im + &self.im * &rhs.re;
        Self { re, im }
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

fn fmt_rational(r: &BigRational, out: &mut String) {
    out.push_str(&r.numer().to_string());
    if !r.denom().is_one() {
        out.push('/');
        out.push_str(&r.denom().to_string());
    }
}

impl fmt::Display for GaussianRational {
    /// Canonical form `p/q+r/si`; parses back via [`FromStr`].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        if self.im.is_zero() {
            fmt_rational(&self.re, &mut s);
        } else if self.re.is_zero() {
            fmt_rational(&self.im, &mut s);
            s.push('i');
        } else {
            fmt_rational(&self.re, &mut s);
            if self.im.is_positive() {
                s.push('+');
            }
            fmt_rational(&self.im, &mut s);
            s.push('i');
        }
        f.write_str(&s)
    }
}

fn parse_rational(text: &str, input: &str) -> Result<BigRational, Error> {
    let err = |reason: &str| Error::ScalarParse {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    let (numer, denom) = match text.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (text, None),
    };
    let numer = BigInt::from_str(numer).map_err(|_| err("invalid numerator"))?;
    let denom = match denom {
        Some(d) => {
            let d = BigInt::from_str(d).map_err(|_| err("invalid denominator"))?;
            if d.is_zero() {
                return Err(err("denominator is zero"));
            }
            if d.is_negative() {
                return Err(err("write the sign on the numerator, not the denominator"));
            }
            d
        }
        None => BigInt::one(),
    };
    Ok(BigRational::new(numer, denom))
}

impl FromStr for GaussianRational {
    type Err = Error;

    /// Parses the forms `p/q`, `r/si`, and `p/q+r/si` (denominators optional,
    /// leading sign allowed, bare `i` meaning `1i`).
    fn from_str(s: &str) -> Result<Self, Error> {
        let input = s;
        let s = s.trim();
        let err = |reason: &str| Error::ScalarParse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        if s.is_empty() {
            return Err(err("empty string"));
        }

        // Any sign past position 0 separates the real and imaginary parts;
        // rational literals carry no interior signs.
        let split = s
            .char_indices()
            .skip(1)
            .find(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i);

        let (re_text, im_text) = match split {
            Some(i) => {
                let (re, im) = s.split_at(i);
                if !im.ends_with('i') {
                    return Err(err("second component must be imaginary (end with 'i')"));
                }
                (Some(re), Some(im))
            }
            None if s.ends_with('i') => (None, Some(s)),
            None => (Some(s), None),
        };

        let re = match re_text {
            Some(t) => parse_rational(t, input)?,
            None => BigRational::zero(),
        };
        let im = match im_text {
            Some(t) => {
                let t = &t[..t.len() - 1];
                match t {
                    "" | "+" => BigRational::one(),
                    "-" => -BigRational::one(),
                    t => {
                        let t = t.strip_prefix('+').unwrap_or(t);
                        parse_rational(t, input)?
                    }
                }
            }
            None => BigRational::zero(),
        };
        Ok(Self { re, im })
    }
}

/// A scalar tagged with its numeric backend.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexScalar {
    Float(Complex64),
    Exact(GaussianRational),
}

impl ComplexScalar {
    pub fn backend(&self) -> Backend {
        match self {
            ComplexScalar::Float(_) => Backend::Float,
            ComplexScalar::Exact(_) => Backend::Exact,
        }
    }

    /// Nearest-f64 view; exact for the float backend, approximate otherwise.
    pub fn approx(&self) -> Complex64 {
        match self {
            ComplexScalar::Float(z) => *z,
            ComplexScalar::Exact(g) => g.approx(),
        }
    }
}

impl From<Complex64> for ComplexScalar {
    fn from(z: Complex64) -> Self {
        ComplexScalar::Float(z)
    }
}

impl From<f64> for ComplexScalar {
    fn from(x: f64) -> Self {
        ComplexScalar::Float(Complex64::new(x, 0.0))
    }
}

impl From<GaussianRational> for ComplexScalar {
    fn from(g: GaussianRational) -> Self {
        ComplexScalar::Exact(g)
    }
}

impl fmt::Display for ComplexScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexScalar::Float(z) => write!(f, "{}{:+}i", z.re, z.im),
            ComplexScalar::Exact(g) => g.fmt(f),
        }
    }
}
