//! Exact base-`c` positional values in `[0, 1]`.
//!
//! A [`CaryValue`] stores the digits `(a_0; a_1, ..., a_l)` of
//! `sum_k a_k c^-k`, most significant first, in canonical (shortest) form:
//! the last digit is non-zero unless `l = 0`. `M_{c,l}` is the set of values
//! whose canonical length is at most `l`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CaryValue {
    base: u32,
    digits: Vec<u32>,
}

/// Result of [`CaryValue::add_power`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Increment {
    pub value: CaryValue,
    /// Number of consecutive `c-1` digits turned into zeros by the carry.
    pub carry_run: usize,
}

impl Increment {
    pub fn carried(&self) -> bool {
        self.carry_run > 0
    }
}

fn check_base(base: u32) -> Result<()> {
    if base < 2 {
        return Err(Error::input(format!("base must be at least 2, got {base}")));
    }
    Ok(())
}

fn pow(base: u32, exp: usize) -> BigInt {
    num_traits::pow(BigInt::from(base), exp)
}

impl CaryValue {
    /// Builds a value from raw digits, canonicalizing trailing zeros.
    pub fn from_digits(base: u32, mut digits: Vec<u32>) -> Result<Self> {
        check_base(base)?;
        if digits.is_empty() {
            digits.push(0);
        }
        if let Some(d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::input(format!("digit {d} invalid in base {base}")));
        }
        strip(&mut digits);
        match digits[0] {
            0 => {}
            1 if digits.len() == 1 => {}
            _ => {
                return Err(Error::input(format!(
                    "digits {digits:?} exceed 1 in base {base}"
                )))
            }
        }
        Ok(Self { base, digits })
    }

    pub fn zero(base: u32) -> Result<Self> {
        Self::from_digits(base, vec![0])
    }

    pub fn one(base: u32) -> Result<Self> {
        Self::from_digits(base, vec![1])
    }

    /// Canonical expansion of `r`, or `Ok(None)` when `r` has no finite
    /// expansion in this base.
    pub fn from_rational(r: &Rational, base: u32) -> Result<Option<Self>> {
        check_base(base)?;
        if *r < Rational::zero() || *r > Rational::one() {
            return Err(Error::input(format!("{r} is outside [0,1]")));
        }
        let c = BigInt::from(base);
        let mut den = r.denom().clone();
        loop {
            let g = den.gcd(&c);
            if g.is_one() {
                break;
            }
            den /= g;
        }
        if !den.is_one() {
            return Ok(None);
        }
        let mut digits = Vec::new();
        let mut rest = r.clone();
        let whole = rest.to_integer();
        digits.push(whole.to_u32().unwrap_or(0));
        rest -= Rational::from_integer(whole);
        while !rest.is_zero() {
            rest *= Rational::from_integer(c.clone());
            let d = rest.to_integer();
            digits.push(d.to_u32().unwrap_or(0));
            rest -= Rational::from_integer(d);
        }
        Ok(Some(Self { base, digits }))
    }

    /// Element of `M_{c,l}` closest to `z`; ties go to the smaller value.
    pub fn nearest(z: &Rational, base: u32, len: usize) -> Result<Self> {
        check_base(base)?;
        if *z < Rational::zero() || *z > Rational::one() {
            return Err(Error::input(format!("{z} is outside [0,1]")));
        }
        let scale = pow(base, len);
        let scaled = z * Rational::from_integer(scale.clone());
        let below = scaled.floor();
        let above = &below + Rational::one();
        let pick = if &scaled - &below <= &above - &scaled {
            below
        } else {
            above
        };
        let r = pick / Rational::from_integer(scale);
        Ok(Self::from_rational(&r, base)?.expect("k / c^l always has a finite expansion"))
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    /// Digit at position `k`; zero past the end.
    pub fn digit(&self, k: usize) -> u32 {
        self.digits.get(k).copied().unwrap_or(0)
    }

    /// Length `|x|_c` of the shortest expansion.
    pub fn len(&self) -> usize {
        self.digits.len() - 1
    }

    /// The last significant digit `a_l` (0 only for the value 0).
    pub fn last_digit(&self) -> u32 {
        *self.digits.last().expect("digits are never empty")
    }

    pub fn is_zero(&self) -> bool {
        self.digits == [0]
    }

    pub fn value(&self) -> Rational {
        let c = BigInt::from(self.base);
        let mut num = BigInt::zero();
        for &d in &self.digits {
            num = num * &c + BigInt::from(d);
        }
        Rational::new(num, pow(self.base, self.len()))
    }

    /// Drops all digits past position `k`. `k >= len()` returns `self`.
    pub fn truncate(&self, k: usize) -> Self {
        if k >= self.len() {
            return self.clone();
        }
        let mut digits = self.digits[..=k].to_vec();
        strip(&mut digits);
        Self {
            base: self.base,
            digits,
        }
    }

    /// `x + c^-k` with full carry propagation. `k = 0` is only valid for
    /// `x = 0`.
    pub fn add_power(&self, k: usize) -> Result<Increment> {
        let mut digits = self.digits.clone();
        if digits.len() <= k {
            digits.resize(k + 1, 0);
        }
        let mut pos = k;
        let mut carry_run = 0;
        loop {
            if pos == 0 {
                if digits[0] != 0 || digits[1..].iter().any(|&d| d != 0) {
                    return Err(Error::input(format!(
                        "{self} + {}^-{k} exceeds 1",
                        self.base
                    )));
                }
                digits[0] = 1;
                break;
            }
            if digits[pos] + 1 == self.base {
                digits[pos] = 0;
                carry_run += 1;
                pos -= 1;
            } else {
                digits[pos] += 1;
                break;
            }
        }
        if digits[0] == 1 && digits[1..].iter().any(|&d| d != 0) {
            return Err(Error::input(format!(
                "{self} + {}^-{k} exceeds 1",
                self.base
            )));
        }
        strip(&mut digits);
        Ok(Increment {
            value: Self {
                base: self.base,
                digits,
            },
            carry_run,
        })
    }

    /// Every element of `M_{c,l}` in increasing order.
    pub fn enumerate(base: u32, len: usize) -> Result<Vec<Self>> {
        check_base(base)?;
        let scale = pow(base, len);
        let count = scale.to_u64().unwrap_or(u64::MAX);
        (0..=count)
            .map(|k| {
                let r = Rational::new(BigInt::from(k), scale.clone());
                Ok(Self::from_rational(&r, base)?.expect("finite by construction"))
            })
            .collect()
    }
}

fn strip(digits: &mut Vec<u32>) {
    while digits.len() > 1 && *digits.last().unwrap_or(&1) == 0 {
        digits.pop();
    }
}

impl PartialOrd for CaryValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CaryValue {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value()
            .cmp(&other.value())
            .then(self.base.cmp(&other.base))
    }
}

impl fmt::Display for CaryValue {
    /// `a_0;a_1a_2...a_l (base c)`; digits are comma separated above base 10.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.base > 10 { "," } else { "" };
        let frac: Vec<String> = self.digits[1..].iter().map(u32::to_string).collect();
        if frac.is_empty() {
            write!(f, "{} (base {})", self.digits[0], self.base)
        } else {
            write!(f, "{};{} (base {})", self.digits[0], frac.join(sep), self.base)
        }
    }
}

impl FromStr for CaryValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a c-ary value: {s:?}"));
        let (body, base) = s.trim().split_once("(base").ok_or_else(bad)?;
        let base: u32 = base
            .trim()
            .strip_suffix(')')
            .ok_or_else(bad)?
            .trim()
            .parse()
            .map_err(|_| bad())?;
        let body = body.trim();
        let (whole, frac) = body.split_once(';').unwrap_or((body, ""));
        let mut digits = vec![whole.trim().parse::<u32>().map_err(|_| bad())?];
        let frac = frac.trim();
        if base > 10 {
            for d in frac.split(',').filter(|d| !d.trim().is_empty()) {
                digits.push(d.trim().parse().map_err(|_| bad())?);
            }
        } else {
            for ch in frac.chars() {
                digits.push(ch.to_digit(10).ok_or_else(bad)?);
            }
        }
        if digits.len() > 1 && digits.last() == Some(&0) {
            return Err(Error::Parse(format!("{s:?} is not in canonical form")));
        }
        Self::from_digits(base, digits)
    }
}
