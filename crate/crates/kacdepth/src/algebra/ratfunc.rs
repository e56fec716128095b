use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::laurent::forward_binop;
use super::{LaurentPoly, Rat};
use crate::error::{Error, Result};

/// Reduced fraction of Laurent polynomials in `q`.
///
/// Canonical form: the denominator is a polynomial with nonzero constant
/// term and leading coefficient 1, coprime to the numerator. All powers
/// of `q` live in the numerator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

// Dense polynomial helpers; index = exponent, no trailing zeros.

fn trim(v: &mut Vec<Rat>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rem_in_place(a: &mut Vec<Rat>, b: &[Rat]) {
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    while a.len() > db {
        let top = a.len() - 1;
        let f = &a[top] * &lead_inv;
        if !f.is_zero() {
            let off = top - db;
            for (i, c) in b.iter().enumerate() {
                if !c.is_zero() {
                    a[off + i] -= &f * c;
                }
            }
        }
        a.pop();
        trim(a);
    }
}

fn div_exact(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut a = a.to_vec();
    let db = b.len() - 1;
    if a.len() <= db {
        return vec![];
    }
    let lead_inv = b[db].recip();
    let mut quot = vec![Rat::zero(); a.len() - db];
    while a.len() > db {
        let top = a.len() - 1;
        let f = &a[top] * &lead_inv;
        if !f.is_zero() {
            let off = top - db;
            for (i, c) in b.iter().enumerate() {
                if !c.is_zero() {
                    a[off + i] -= &f * c;
                }
            }
            quot[off] = f;
        }
        a.pop();
    }
    trim(&mut quot);
    quot
}

fn make_monic(v: &mut [Rat]) {
    let lead = v.last().unwrap().recip();
    for c in v.iter_mut() {
        *c *= &lead;
    }
}

fn gcd(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let (mut x, mut y) = if a.len() >= b.len() { (a.to_vec(), b.to_vec()) } else { (b.to_vec(), a.to_vec()) };
    while !y.is_empty() {
        rem_in_place(&mut x, &y);
        std::mem::swap(&mut x, &mut y);
        if !y.is_empty() {
            make_monic(&mut y);
        }
    }
    make_monic(&mut x);
    x
}

impl RatFunc {
    /// Builds the canonical form of `num/den`.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        let Some(dlow) = den.low_degree() else {
            return Err(Error::DivisionByZero);
        };
        let Some(nlow) = num.low_degree() else {
            return Ok(Self::zero());
        };
        let (_, nd) = num.dense();
        let (_, dd) = den.dense();
        let offset = nlow - dlow;
        let (mut n, mut d) = if dd.len() == 1 || nd.len() == 1 {
            (nd.to_vec(), dd.to_vec())
        } else {
            let g = gcd(nd, dd);
            if g.len() == 1 {
                (nd.to_vec(), dd.to_vec())
            } else {
                (div_exact(nd, &g), div_exact(dd, &g))
            }
        };
        let lead = d.last().unwrap().recip();
        if !lead.is_one() {
            for c in n.iter_mut().chain(d.iter_mut()) {
                *c *= &lead;
            }
        }
        Ok(Self { num: LaurentPoly::from_dense(offset, n), den: LaurentPoly::from_dense(0, d) })
    }

    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self { num: p, den: LaurentPoly::one() }
    }

    pub fn from_rat(c: Rat) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(n))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The Laurent polynomial this fraction equals, if any.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(&self.num * &other.den, &self.den * &other.num)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        if self.den.is_one() {
            return Self::from_poly(&self.num * p);
        }
        Self::new(&self.num * p, self.den.clone()).expect("nonzero denominator")
    }

    pub fn pow(&self, n: u32) -> Self {
        Self { num: self.num.pow(n), den: self.den.pow(n) }
    }

    /// Adams operation `q -> q^m`; coprimality survives the substitution.
    pub fn substitute_power(&self, m: u32) -> Result<Self> {
        Ok(Self { num: self.num.substitute_power(m)?, den: self.den.substitute_power(m)? })
    }

    /// `q -> q^{-1}`.
    pub fn substitute_inverse(&self) -> Self {
        Self::new(self.num.reflect(), self.den.reflect()).expect("nonzero denominator")
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.eval(x)?;
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(x)? / d)
    }

    pub fn eval_int(&self, x: i64) -> Result<Rat> {
        self.eval(&Rat::from_integer(x.into()))
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("ratfunc serialization")
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

/// Canonical form of `num/den`; the free-function spelling of [`RatFunc::new`].
pub fn ratfunc_normalize(num: LaurentPoly, den: LaurentPoly) -> Result<RatFunc> {
    RatFunc::new(num, den)
}

impl From<LaurentPoly> for RatFunc {
    fn from(p: LaurentPoly) -> Self {
        Self::from_poly(p)
    }
}

fn add(a: &RatFunc, b: &RatFunc, sign: bool) -> RatFunc {
    let combine = |x: LaurentPoly, y: LaurentPoly| if sign { x + y } else { x - y };
    if b.is_zero() {
        return a.clone();
    }
    if a.den == b.den {
        if a.den.is_one() {
            return RatFunc::from_poly(combine(a.num.clone(), b.num.clone()));
        }
        return RatFunc::new(combine(a.num.clone(), b.num.clone()), a.den.clone()).unwrap();
    }
    if b.den.is_one() {
        return RatFunc::new(combine(a.num.clone(), &b.num * &a.den), a.den.clone()).unwrap();
    }
    if a.den.is_one() {
        return RatFunc::new(combine(&a.num * &b.den, b.num.clone()), b.den.clone()).unwrap();
    }
    RatFunc::new(combine(&a.num * &b.den, &b.num * &a.den), &a.den * &b.den).unwrap()
}

fn mul(a: &RatFunc, b: &RatFunc) -> RatFunc {
    if a.is_zero() || b.is_zero() {
        return RatFunc::zero();
    }
    if a.den.is_one() && b.den.is_one() {
        return RatFunc::from_poly(&a.num * &b.num);
    }
    RatFunc::new(&a.num * &b.num, &a.den * &b.den).unwrap()
}

forward_binop!(RatFunc, Add, add, |a, b| add(a, b, true));
forward_binop!(RatFunc, Sub, sub, |a, b| add(a, b, false));
forward_binop!(RatFunc, Mul, mul, mul);

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct RatFuncRepr {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RatFuncRepr { num: self.num.clone(), den: self.den.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = RatFuncRepr::deserialize(d)?;
        let span = |p: &LaurentPoly| p.degree().unwrap_or(0) - p.low_degree().unwrap_or(0);
        // gcd cost grows with degree; decoded fractions stay modest
        if span(&r.num) > 4096 || span(&r.den) > 4096 {
            return Err(D::Error::custom("fraction degree too large"));
        }
        RatFunc::new(r.num, r.den).map_err(D::Error::custom)
    }
}
