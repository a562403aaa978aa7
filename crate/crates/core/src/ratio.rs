//! Exact rational parameters.
//!
//! Densities, fractions and tolerances are carried as exact rationals so
//! that threshold comparisons never depend on floating point rounding.
//! Tolerances that are roots of rationals (ε^{1/2}, ε^{1/6}, ...) are
//! represented by [`Root`] and compared by raising the other side to the
//! matching integer power.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{One, Pow, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

/// `Rational::new` shorthand.
pub fn rat(numer: i128, denom: i128) -> Rational {
    Rational::new(numer, denom)
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.125`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("not a rational number: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: i128 = p.trim().parse().map_err(|_| bad())?;
        let q: i128 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part
        .chars()
        .chain(frac_part.chars())
        .all(|c| c.is_ascii_digit())
        || frac_part.len() > 30
    {
        return Err(bad());
    }
    let scale = 10i128.pow(frac_part.len() as u32);
    let ip: i128 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let fp: i128 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| bad())?
    };
    let v = Rational::new(ip * scale + fp, scale);
    Ok(if neg { -v } else { v })
}

fn to_big(r: &Rational) -> Ratio<BigInt> {
    Ratio::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// The nonnegative real number `base^(1/index)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Root {
    pub base: Rational,
    pub index: u32,
}

impl Root {
    pub fn new(base: Rational, index: u32) -> Result<Self> {
        if base.is_negative() || index == 0 {
            return Err(Error::InvalidParameter(format!(
                "root of {base} with index {index} is not a nonnegative real"
            )));
        }
        Ok(Root { base, index })
    }

    /// `base^(1/index)` with the same base.
    pub fn exact(base: Rational) -> Self {
        assert!(!base.is_negative(), "negative tolerance {base}");
        Root { base, index: 1 }
    }

    /// Takes a further root: `(base^(1/index))^(1/k)`.
    pub fn nth_root(self, k: u32) -> Self {
        Root {
            base: self.base,
            index: self.index * k,
        }
    }

    /// Compares this root with a rational `x`.
    pub fn cmp_rational(&self, x: &Rational) -> Ordering {
        if x.is_negative() {
            return Ordering::Greater;
        }
        // both sides nonnegative: compare base with x^index
        let lhs = to_big(&self.base);
        let rhs: Ratio<BigInt> = Pow::pow(to_big(x), self.index);
        lhs.cmp(&rhs)
    }

    /// `self < x`
    pub fn lt(&self, x: &Rational) -> bool {
        self.cmp_rational(x) == Ordering::Less
    }

    /// `self <= x`
    pub fn le(&self, x: &Rational) -> bool {
        self.cmp_rational(x) != Ordering::Greater
    }

    /// `self >= x`
    pub fn ge(&self, x: &Rational) -> bool {
        self.cmp_rational(x) != Ordering::Less
    }

    /// `c · self` for a nonnegative integer `c`, as a root of the same index.
    pub fn times(self, c: u32) -> Self {
        let factor = Pow::pow(Rational::from_integer(c as i128), self.index);
        Root {
            base: self.base * factor,
            index: self.index,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero()
    }

    pub fn approx(&self) -> f64 {
        let b = *self.base.numer() as f64 / *self.base.denom() as f64;
        b.powf(1.0 / self.index as f64)
    }
}

impl From<Rational> for Root {
    fn from(r: Rational) -> Self {
        Root::exact(r)
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index == 1 {
            write!(f, "{}", self.base)
        } else {
            write!(f, "({})^(1/{})", self.base, self.index)
        }
    }
}

impl FromStr for Root {
    type Err = Error;

    /// Accepts a rational, optionally followed by `^1/k`.
    fn from_str(s: &str) -> Result<Self> {
        match s.split_once('^') {
            Some((base, exp)) => {
                let exp = exp.trim().trim_start_matches('(').trim_end_matches(')');
                let k = exp
                    .strip_prefix("1/")
                    .and_then(|k| k.trim().parse::<u32>().ok())
                    .ok_or_else(|| {
                        Error::InvalidParameter(format!("bad root exponent in {s:?}"))
                    })?;
                Root::new(parse_rational(base)?, k)
            }
            None => Root::new(parse_rational(s)?, 1),
        }
    }
}

/// Is `count >= t * total` for a rational `t`?
pub fn at_least_fraction(count: usize, t: &Rational, total: usize) -> bool {
    Rational::from_integer(count as i128) >= *t * Rational::from_integer(total as i128)
}

/// Is `count >= (c - r) * total`, where `r` may be irrational?
pub fn at_least_shifted(count: usize, c: &Rational, r: &Root, total: usize) -> bool {
    if total == 0 {
        return true;
    }
    let m = Rational::from_integer(total as i128);
    // count >= (c - r) m  <=>  (c m - count) / m <= r
    let gap = (*c * m - Rational::from_integer(count as i128)) / m;
    gap <= Rational::zero() || r.ge(&gap)
}

/// Is `|x - y| <= r * scale`? The general form of a `(1 ± r)` or `± r`
/// window test.
pub fn within(x: &Rational, y: &Rational, r: &Root, scale: &Rational) -> bool {
    let dev = (*x - *y).abs();
    if dev.is_zero() {
        return true;
    }
    if scale.is_zero() {
        return false;
    }
    r.ge(&(dev / scale.abs()))
}

pub fn one() -> Rational {
    Rational::one()
}
