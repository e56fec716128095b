use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::Rat;
use crate::error::{Error, Result};

/// Largest exponent span accepted when decoding untrusted input.
pub const MAX_DECODE_SPAN: i64 = 1 << 16;

/// Laurent polynomial in `q` with rational coefficients.
///
/// Stored densely from the lowest exponent; the first and last stored
/// coefficients are nonzero, and zero is the empty vector.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(Rat::from_integer(n.into()))
    }

    pub fn monomial(c: Rat, e: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            Self { low: e, coeffs: vec![c] }
        }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(Rat::one(), e)
    }

    /// `q^e - 1`.
    pub fn q_pow_minus_one(e: i64) -> Self {
        Self::q_pow(e) - Self::one()
    }

    /// Dense constructor: `coeffs[i]` is the coefficient of `q^(low+i)`.
    pub fn from_dense(low: i64, coeffs: Vec<Rat>) -> Self {
        let mut p = Self { low, coeffs };
        p.trim();
        p
    }

    pub fn from_int_coeffs(low: i64, coeffs: &[i64]) -> Self {
        Self::from_dense(low, coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect())
    }

    /// Sums the given terms; repeated exponents accumulate.
    pub fn from_terms<I: IntoIterator<Item = (i64, Rat)>>(terms: I) -> Self {
        let terms: Vec<(i64, Rat)> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Self::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![Rat::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Self::from_dense(lo, coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn low_degree(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.low)
    }

    pub fn degree(&self) -> Option<i64> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i64 - 1)
    }

    pub fn coeff(&self, e: i64) -> Rat {
        if e < self.low {
            return Rat::zero();
        }
        self.coeffs.get((e - self.low) as usize).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &Rat)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i64, c))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { low: self.low + k, coeffs: self.coeffs.clone() }
    }

    /// `q -> q^{-1}`.
    pub fn reflect(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self { low: -(self.low + self.coeffs.len() as i64 - 1), coeffs }
    }

    /// Adams operation `q -> q^m`.
    pub fn substitute_power(&self, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidAdamsIndex);
        }
        if m == 1 || self.is_zero() {
            return Ok(self.clone());
        }
        let m = m as usize;
        let mut coeffs = vec![Rat::zero(); (self.coeffs.len() - 1) * m + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * m] = c.clone();
        }
        Ok(Self { low: self.low * m as i64, coeffs })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Value at a rational point; negative exponents at zero are an error.
    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if self.is_zero() {
            return Ok(Rat::zero());
        }
        if x.is_zero() {
            return if self.low < 0 { Err(Error::DivisionByZero) } else { Ok(self.coeff(0)) };
        }
        let mut acc = Rat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        Ok(acc * rat_pow(x, self.low))
    }

    pub fn eval_int(&self, x: i64) -> Result<Rat> {
        self.eval(&Rat::from_integer(x.into()))
    }

    /// True when no negative exponent occurs.
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Dense coefficients starting at [`Self::low_degree`].
    pub fn dense(&self) -> (i64, &[Rat]) {
        (self.low, &self.coeffs)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("polynomial serialization")
    }
}

pub(crate) fn rat_pow(x: &Rat, e: i64) -> Rat {
    let mut base = if e < 0 { x.recip() } else { x.clone() };
    let mut n = e.unsigned_abs();
    let mut acc = Rat::one();
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

fn add_dense(a: &LaurentPoly, b: &LaurentPoly, sign: bool) -> LaurentPoly {
    if b.is_zero() {
        return a.clone();
    }
    if a.is_zero() {
        return if sign { b.clone() } else { -b };
    }
    let lo = a.low.min(b.low);
    let hi = a.degree().unwrap().max(b.degree().unwrap());
    let mut coeffs = vec![Rat::zero(); (hi - lo + 1) as usize];
    for (i, c) in a.coeffs.iter().enumerate() {
        coeffs[(a.low - lo) as usize + i] += c;
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        let slot = &mut coeffs[(b.low - lo) as usize + i];
        if sign {
            *slot += c;
        } else {
            *slot -= c;
        }
    }
    LaurentPoly::from_dense(lo, coeffs)
}

fn mul_dense(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() || b.is_zero() {
        return LaurentPoly::zero();
    }
    let mut coeffs = vec![Rat::zero(); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                coeffs[i + j] += x * y;
            }
        }
    }
    LaurentPoly::from_dense(a.low + b.low, coeffs)
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

macro_rules! forward_binop {
    ($ty:ty, $tr:ident, $method:ident, $body:expr) => {
        impl $tr<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                $body(self, rhs)
            }
        }
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $body(&self, &rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                $body(&self, rhs)
            }
        }
        impl $tr<$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $body(self, &rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

forward_binop!(LaurentPoly, Add, add, |a, b| add_dense(a, b, true));
forward_binop!(LaurentPoly, Sub, sub, |a, b| add_dense(a, b, false));
forward_binop!(LaurentPoly, Mul, mul, mul_dense);

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (e, c)) in self.terms().rev().enumerate() {
            if c.is_negative() {
                f.write_str("-")?;
            } else if k > 0 {
                f.write_str("+")?;
            }
            let a = c.abs();
            if e == 0 {
                write!(f, "{a}")?;
                continue;
            }
            if !a.is_one() {
                if a.is_integer() {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
            }
            f.write_str("q")?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Parses the display syntax, e.g. `q^4 + q^3 + 2 q^2`, `(1/2)q^-1 - 3`.
/// Exponents may be wrapped in braces and `*` may join coefficient and `q`.
impl FromStr for LaurentPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if chars.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let mut pos = 0;
        let mut terms = Vec::new();
        while pos < chars.len() {
            let mut neg = false;
            if chars[pos] == '+' || chars[pos] == '-' {
                neg = chars[pos] == '-';
                pos += 1;
            } else if !terms.is_empty() {
                return Err(Error::Parse(format!("expected sign at offset {pos}")));
            }
            let coeff = parse_coeff(&chars, &mut pos)?;
            if pos < chars.len() && chars[pos] == '*' {
                if coeff.is_none() {
                    return Err(Error::Parse("dangling '*'".into()));
                }
                pos += 1;
                if pos >= chars.len() || chars[pos] != 'q' {
                    return Err(Error::Parse("expected q after '*'".into()));
                }
            }
            let mut exp = 0i64;
            if pos < chars.len() && chars[pos] == 'q' {
                pos += 1;
                exp = 1;
                if pos < chars.len() && chars[pos] == '^' {
                    pos += 1;
                    exp = parse_exponent(&chars, &mut pos)?;
                }
            } else if coeff.is_none() {
                return Err(Error::Parse(format!("expected term at offset {pos}")));
            }
            if exp.abs() > MAX_DECODE_SPAN {
                return Err(Error::Parse("exponent too large".into()));
            }
            let mut c = coeff.unwrap_or_else(Rat::one);
            if neg {
                c = -c;
            }
            terms.push((exp, c));
        }
        let lo = terms.iter().map(|t| t.0).min().unwrap();
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        if hi - lo > MAX_DECODE_SPAN {
            return Err(Error::Parse("exponent span too large".into()));
        }
        Ok(Self::from_terms(terms))
    }
}

fn parse_uint(chars: &[char], pos: &mut usize) -> Option<BigInt> {
    let start = *pos;
    while *pos < chars.len() && chars[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return None;
    }
    let digits: String = chars[start..*pos].iter().collect();
    digits.parse().ok()
}

fn parse_fraction(chars: &[char], pos: &mut usize) -> Result<Option<Rat>> {
    let Some(n) = parse_uint(chars, pos) else {
        return Ok(None);
    };
    if *pos < chars.len() && chars[*pos] == '/' {
        *pos += 1;
        let d = parse_uint(chars, pos).ok_or_else(|| Error::Parse("expected denominator".into()))?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        return Ok(Some(Rat::new(n, d)));
    }
    Ok(Some(Rat::from_integer(n)))
}

fn parse_coeff(chars: &[char], pos: &mut usize) -> Result<Option<Rat>> {
    if *pos < chars.len() && chars[*pos] == '(' {
        *pos += 1;
        let neg = *pos < chars.len() && chars[*pos] == '-';
        if neg {
            *pos += 1;
        }
        let v = parse_fraction(chars, pos)?.ok_or_else(|| Error::Parse("expected number".into()))?;
        if *pos >= chars.len() || chars[*pos] != ')' {
            return Err(Error::Parse("expected ')'".into()));
        }
        *pos += 1;
        return Ok(Some(if neg { -v } else { v }));
    }
    parse_fraction(chars, pos)
}

fn parse_exponent(chars: &[char], pos: &mut usize) -> Result<i64> {
    let braced = *pos < chars.len() && chars[*pos] == '{';
    if braced {
        *pos += 1;
    }
    let neg = *pos < chars.len() && chars[*pos] == '-';
    if neg {
        *pos += 1;
    }
    let n = parse_uint(chars, pos).ok_or_else(|| Error::Parse("expected exponent".into()))?;
    if braced {
        if *pos >= chars.len() || chars[*pos] != '}' {
            return Err(Error::Parse("expected '}'".into()));
        }
        *pos += 1;
    }
    let n: i64 = n.try_into().map_err(|_| Error::Parse("exponent too large".into()))?;
    Ok(if neg { -n } else { n })
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let triples: Vec<(i64, String, String)> =
            self.terms().map(|(e, c)| (e, c.numer().to_string(), c.denom().to_string())).collect();
        triples.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let triples: Vec<(i64, String, String)> = Vec::deserialize(d)?;
        decode_triples(&triples).map_err(D::Error::custom)
    }
}

fn parse_bigint(s: &str) -> Result<BigInt> {
    let body = s.strip_prefix('-').unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("bad integer {s:?}")));
    }
    s.parse().map_err(|_| Error::Parse(format!("bad integer {s:?}")))
}

fn decode_triples(triples: &[(i64, String, String)]) -> Result<LaurentPoly> {
    let mut seen = std::collections::BTreeSet::new();
    let mut terms = Vec::with_capacity(triples.len());
    for (e, n, d) in triples {
        if !seen.insert(*e) {
            return Err(Error::Parse(format!("duplicate exponent {e}")));
        }
        let n = parse_bigint(n)?;
        let d = parse_bigint(d)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        terms.push((*e, Rat::new(n, d)));
    }
    if let (Some(lo), Some(hi)) = (seen.first(), seen.last()) {
        if hi.checked_sub(*lo).is_none_or(|span| span > MAX_DECODE_SPAN) {
            return Err(Error::Parse("exponent span too large".into()));
        }
    }
    Ok(LaurentPoly::from_terms(terms))
}
