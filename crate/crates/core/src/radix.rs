//! Digit strings and their values in rational bases `p/q`.
//!
//! A base `p/q` representation is what the `q`-`p` chip-firing machine
//! leaves behind: `n` dots start in the rightmost box and every group of `p`
//! dots explodes into `q` dots one box to the left. Digits are therefore in
//! `0..p` and every non-negative integer has a finite representation with no
//! radix point. Base `3/2` (the 2-3 machine) is the case the rest of the crate
//! is built on; integer bases are the `q = 1` special case.

use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RadixError {
    #[error("digit {digit} is not valid in base {base}")]
    InvalidDigit { digit: u8, base: RationalBase },
    #[error("invalid base {p}/{q}: need p > q >= 1 and gcd(p, q) = 1")]
    InvalidBase { p: u32, q: u32 },
    #[error("cannot parse digit string {0:?}")]
    Parse(String),
}

/// A rational base `p/q` with `p > q >= 1` and `gcd(p, q) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalBase {
    p: u32,
    q: u32,
}

impl RationalBase {
    pub const THREE_HALVES: RationalBase = RationalBase { p: 3, q: 2 };
    pub const TERNARY: RationalBase = RationalBase { p: 3, q: 1 };

    pub fn new(p: u32, q: u32) -> Result<Self, RadixError> {
        if q == 0 || p <= q || p.gcd(&q) != 1 {
            return Err(RadixError::InvalidBase { p, q });
        }
        Ok(RationalBase { p, q })
    }

    /// An integer base `p/1`.
    pub fn integer(p: u32) -> Result<Self, RadixError> {
        Self::new(p, 1)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }
}

impl fmt::Display for RationalBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 1 {
            write!(f, "{}", self.p)
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl FromStr for RationalBase {
    type Err = RadixError;

    /// Accepts `"p/q"` or a bare integer base `"p"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RadixError::Parse(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p = p.parse().map_err(|_| bad())?;
        let q = q.parse().map_err(|_| bad())?;
        RationalBase::new(p, q)
    }
}

/// A sequence of digits, most significant first.
///
/// The type does not know its base; digit bounds are checked by the
/// operation that interprets it. Non-canonical values (leading zeros, the
/// empty string) are representable because suffix splits produce them, but
/// every constructor that models an integer returns canonical form: no
/// leading zero, and zero itself is `"0"`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DigitString {
    digits: Vec<u8>,
}

impl DigitString {
    /// Wraps raw digits as given, without canonicalizing.
    pub fn from_digits(digits: Vec<u8>) -> Self {
        DigitString { digits }
    }

    pub fn zero() -> Self {
        DigitString { digits: vec![0] }
    }

    pub fn empty() -> Self {
        DigitString { digits: Vec::new() }
    }

    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn into_digits(self) -> Vec<u8> {
        self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// The digit `k` places from the right (`k = 0` is the units digit).
    pub fn digit_from_right(&self, k: usize) -> Option<u8> {
        self.digits.len().checked_sub(k + 1).map(|i| self.digits[i])
    }

    pub fn last_digit(&self) -> Option<u8> {
        self.digits.last().copied()
    }

    pub fn max_digit(&self) -> Option<u8> {
        self.digits.iter().copied().max()
    }

    pub fn is_canonical(&self) -> bool {
        match self.digits.as_slice() {
            [] => false,
            [0] => true,
            [first, ..] => *first != 0,
        }
    }

    /// Strips leading zeros; the empty string and all-zero strings become `"0"`.
    pub fn canonical(&self) -> DigitString {
        let start = self
            .digits
            .iter()
            .position(|&d| d != 0)
            .unwrap_or(self.digits.len());
        if start == self.digits.len() {
            DigitString::zero()
        } else {
            DigitString::from_digits(self.digits[start..].to_vec())
        }
    }

    /// Appends a units digit, keeping canonical form (`"0"` followed by `d`
    /// is just `d`).
    pub fn push_digit(&self, d: u8) -> DigitString {
        if self.digits.is_empty() || self.digits == [0] {
            return DigitString::from_digits(vec![d]);
        }
        let mut digits = self.digits.clone();
        digits.push(d);
        DigitString { digits }
    }

    /// Removes the units digit and canonicalizes what remains.
    pub fn strip_last(&self) -> DigitString {
        let n = self.digits.len().saturating_sub(1);
        DigitString::from_digits(self.digits[..n].to_vec()).canonical()
    }

    /// `overline(self other)`: plain concatenation, no canonicalization.
    pub fn concat(&self, other: &DigitString) -> DigitString {
        let mut digits = self.digits.clone();
        digits.extend_from_slice(&other.digits);
        DigitString { digits }
    }

    /// Value when read in an integer base.
    pub fn value_in_integer_base(&self, base: u32) -> BigUint {
        let mut acc = BigUint::zero();
        for &d in &self.digits {
            acc = acc * base + d;
        }
        acc
    }

    /// Base-3 value, or `None` if it does not fit in a `u64`.
    pub fn ternary_u64(&self) -> Option<u64> {
        self.digits.iter().try_fold(0u64, |acc, &d| {
            acc.checked_mul(3)?.checked_add(u64::from(d))
        })
    }

    /// Canonical digits of `n` in integer base `base` (`base >= 2`).
    pub fn from_u64_radix(mut n: u64, base: u32) -> DigitString {
        let base = u64::from(base);
        if n == 0 {
            return DigitString::zero();
        }
        let mut digits = Vec::new();
        while n > 0 {
            digits.push((n % base) as u8);
            n /= base;
        }
        digits.reverse();
        DigitString { digits }
    }

    /// The `{0,1}` string spelling `j` in binary.
    pub fn binary(j: u64) -> DigitString {
        DigitString::from_u64_radix(j, 2)
    }

    pub fn ternary(n: u64) -> DigitString {
        DigitString::from_u64_radix(n, 3)
    }

    fn check_digits(&self, base: RationalBase) -> Result<(), RadixError> {
        match self.digits.iter().find(|&&d| u32::from(d) >= base.p) {
            Some(&digit) => Err(RadixError::InvalidDigit { digit, base }),
            None => Ok(()),
        }
    }
}

fn digit_char(d: u8) -> char {
    char::from_digit(u32::from(d), 36).unwrap_or('?')
}

impl fmt::Display for DigitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &d in &self.digits {
            write!(f, "{}", digit_char(d))?;
        }
        Ok(())
    }
}

impl FromStr for DigitString {
    type Err = RadixError;

    /// Parses digits `0-9a-z` verbatim. Leading zeros are kept so callers can
    /// decide whether to reject or canonicalize them.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(RadixError::Parse(s.to_string()));
        }
        s.chars()
            .map(|c| c.to_digit(36).map(|d| d as u8))
            .collect::<Option<Vec<u8>>>()
            .map(DigitString::from_digits)
            .ok_or_else(|| RadixError::Parse(s.to_string()))
    }
}

impl Serialize for DigitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An exact, fully reduced fraction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numerator: BigInt, denominator: BigInt) -> Self {
        ExactRational(BigRational::new(numerator, denominator))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.0.numer().clone())
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.to_integer()?.to_u64()
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl From<u64> for ExactRational {
    fn from(n: u64) -> Self {
        ExactRational::from_integer(n)
    }
}

impl Add for ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: Self) -> Self::Output {
        ExactRational(self.0 + rhs.0)
    }
}

impl Add<u64> for ExactRational {
    type Output = ExactRational;
    fn add(self, rhs: u64) -> Self::Output {
        self + ExactRational::from(rhs)
    }
}

impl Sub for ExactRational {
    type Output = ExactRational;
    fn sub(self, rhs: Self) -> Self::Output {
        ExactRational(self.0 - rhs.0)
    }
}

/// `(n)_{p/q}`: run the chip-firing machine on `n` dots.
///
/// Each step keeps `r = n mod p` dots in the current box and moves
/// `q (n - r) / p` dots one box left.
pub fn represent(n: &BigUint, base: RationalBase) -> DigitString {
    if n.is_zero() {
        return DigitString::zero();
    }
    let (p, q) = (BigUint::from(base.p), BigUint::from(base.q));
    let mut digits = Vec::new();
    let mut n = n.clone();
    while !n.is_zero() {
        let (quot, r) = n.div_rem(&p);
        // r < p <= u32::MAX, and digits are < 36 for every base we display,
        // but a u8 digit caps p at 256.
        digits.push(r.to_u8().expect("digit exceeds u8; base too large"));
        n = quot * &q;
    }
    digits.reverse();
    DigitString::from_digits(digits)
}

pub fn represent_u64(n: u64, base: RationalBase) -> DigitString {
    represent(&BigUint::from(n), base)
}

/// `[w]_{p/q} = sum a_i (p/q)^i`, exactly.
pub fn evaluate(w: &DigitString, base: RationalBase) -> Result<ExactRational, RadixError> {
    w.check_digits(base)?;
    let (p, q) = (BigInt::from(base.p), BigInt::from(base.q));
    // Scale by q^(len-1): acc = sum_t d_t p^(len-1-t) q^t, msd first.
    let mut acc = BigInt::zero();
    let mut q_pow = BigInt::one();
    for &d in w.digits() {
        acc = acc * &p + BigInt::from(d) * &q_pow;
        q_pow *= &q;
    }
    let denominator = if w.is_empty() { BigInt::one() } else { q_pow / &q };
    Ok(ExactRational::new(acc, denominator))
}

/// Adds 2 in base 3/2 with the carry rule: every digit from the rightmost
/// zero to the end drops by 1 mod 3. A string without zeros gets a zero
/// prepended first.
pub fn add_two(w: &DigitString) -> Result<DigitString, RadixError> {
    w.check_digits(RationalBase::THREE_HALVES)?;
    let mut digits = w.digits().to_vec();
    let zero_at = match digits.iter().rposition(|&d| d == 0) {
        Some(i) => i,
        None => {
            digits.insert(0, 0);
            0
        }
    };
    for d in &mut digits[zero_at..] {
        *d = (*d + 2) % 3;
    }
    Ok(DigitString::from_digits(digits).canonical())
}

/// Inverse of [`add_two`] on strings that contain a 2: the rightmost 2 and
/// everything after it (all 0s and 1s) rise by 1 mod 3.
///
/// Returns `None` for `{0,1}` strings, which have no predecessor in the grid.
pub fn sub_two(w: &DigitString) -> Option<DigitString> {
    let mut digits = w.digits().to_vec();
    let two_at = digits.iter().rposition(|&d| d == 2)?;
    for d in &mut digits[two_at..] {
        *d = (*d + 1) % 3;
    }
    Some(DigitString::from_digits(digits).canonical())
}
