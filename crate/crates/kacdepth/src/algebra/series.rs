use std::collections::BTreeMap;


use super::{Rat, RatFunc};
use crate::error::{Error, Result};

/// Multivariate power series in `t_0..t_{n-1}` with [`RatFunc`] coefficients,
/// truncated componentwise: only exponents `r` with `r_i <= bound_i` are kept.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TSeries {
    bound: Vec<u32>,
    terms: BTreeMap<Vec<u32>, RatFunc>,
}

/// All exponent vectors `0 <= r <= bound`, ordered by total degree then lexicographically.
pub fn exponents_up_to(bound: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for &b in bound {
        out = out
            .into_iter()
            .flat_map(|v| {
                (0..=b).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect();
    }
    out.sort_by_key(|v| (v.iter().map(|&x| x as u64).sum::<u64>(), v.clone()));
    out
}

fn total(r: &[u32]) -> u64 {
    r.iter().map(|&x| x as u64).sum()
}

fn le(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn sub_vec(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

impl TSeries {
    pub fn zero(bound: Vec<u32>) -> Self {
        Self { bound, terms: BTreeMap::new() }
    }

    pub fn one(bound: Vec<u32>) -> Self {
        let mut s = Self::zero(bound);
        let z = vec![0; s.bound.len()];
        s.terms.insert(z, RatFunc::one());
        s
    }

    /// Builds a series from terms; terms beyond the bound are discarded,
    /// terms of the wrong arity rejected, repeated exponents summed.
    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, RatFunc)>>(bound: Vec<u32>, terms: I) -> Result<Self> {
        let mut s = Self::zero(bound);
        for (r, c) in terms {
            if r.len() != s.bound.len() {
                return Err(Error::DimensionMismatch(format!("exponent {r:?} for {} variables", s.bound.len())));
            }
            s.add_term(r, c);
        }
        Ok(s)
    }

    /// `c · t^r` (zero if `r` exceeds the bound).
    pub fn monomial(bound: Vec<u32>, r: Vec<u32>, c: RatFunc) -> Result<Self> {
        Self::from_terms(bound, [(r, c)])
    }

    fn add_term(&mut self, r: Vec<u32>, c: RatFunc) {
        if c.is_zero() || !le(&r, &self.bound) {
            return;
        }
        match self.terms.remove(&r) {
            Some(old) => {
                let s = old + c;
                if !s.is_zero() {
                    self.terms.insert(r, s);
                }
            }
            None => {
                self.terms.insert(r, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.bound.len()
    }

    pub fn bound(&self) -> &[u32] {
        &self.bound
    }

    pub fn coeff(&self, r: &[u32]) -> RatFunc {
        self.terms.get(r).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &RatFunc)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> RatFunc {
        self.coeff(&vec![0; self.nvars()])
    }

    fn check_bound(&self, other: &Self) {
        assert_eq!(self.bound, other.bound, "series bounds differ");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_bound(other);
        let mut s = self.clone();
        for (r, c) in &other.terms {
            s.add_term(r.clone(), c.clone());
        }
        s
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self { bound: self.bound.clone(), terms: self.terms.iter().map(|(r, c)| (r.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &RatFunc) -> Self {
        let mut s = Self::zero(self.bound.clone());
        for (r, x) in &self.terms {
            s.add_term(r.clone(), x * c);
        }
        s
    }

    pub fn scale_rat(&self, c: &Rat) -> Self {
        let mut s = Self::zero(self.bound.clone());
        for (r, x) in &self.terms {
            s.add_term(r.clone(), x.scale(c));
        }
        s
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_bound(other);
        let mut acc: BTreeMap<Vec<u32>, RatFunc> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let r: Vec<u32> = a.iter().zip(b).map(|(i, j)| i + j).collect();
                if le(&r, &self.bound) {
                    let e = acc.entry(r).or_insert_with(RatFunc::zero);
                    *e = &*e + &(x * y);
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Self { bound: self.bound.clone(), terms: acc }
    }

    /// Re-expresses the same terms under a (componentwise) smaller bound.
    pub fn truncate(&self, bound: Vec<u32>) -> Self {
        let terms = self.terms.iter().filter(|(r, _)| le(r, &bound)).map(|(r, c)| (r.clone(), c.clone())).collect();
        Self { bound, terms }
    }

    /// Inverse of a series whose constant term is a nonzero fraction.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let c0inv = c0.inv()?;
        let mut out: BTreeMap<Vec<u32>, RatFunc> = BTreeMap::new();
        for r in exponents_up_to(&self.bound) {
            let mut acc = RatFunc::zero();
            if total(&r) == 0 {
                out.insert(r, c0inv.clone());
                continue;
            }
            for (s, f) in &self.terms {
                if total(s) == 0 || !le(s, &r) {
                    continue;
                }
                if let Some(g) = out.get(&sub_vec(&r, s)) {
                    acc = acc + f * g;
                }
            }
            let v = -(acc * &c0inv);
            if !v.is_zero() {
                out.insert(r, v);
            }
        }
        Ok(Self { bound: self.bound.clone(), terms: out })
    }

    pub fn from_json_str(s: &str, bound: Vec<u32>) -> Result<Self> {
        let pairs: Vec<(Vec<u32>, RatFunc)> = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut seen = std::collections::BTreeSet::new();
        for (r, _) in &pairs {
            if r.len() != bound.len() {
                return Err(Error::DimensionMismatch(format!("exponent {r:?} for {} variables", bound.len())));
            }
            if !le(r, &bound) {
                return Err(Error::OutOfRange(format!("exponent {r:?} exceeds bound {bound:?}")));
            }
            if !seen.insert(r.clone()) {
                return Err(Error::Parse(format!("duplicate exponent {r:?}")));
            }
        }
        Self::from_terms(bound, pairs)
    }

    pub fn to_json_string(&self) -> String {
        let pairs: Vec<(&Vec<u32>, &RatFunc)> = self.terms.iter().collect();
        serde_json::to_string(&pairs).expect("series serialization")
    }
}

/// Ordinary exponential of a series with zero constant term.
///
/// Uses the Euler-operator recurrence `|r| G_r = Σ_{0<s<=r} |s| F_s G_{r-s}`.
pub fn series_exp(f: &TSeries) -> Result<TSeries> {
    if !f.constant_term().is_zero() {
        return Err(Error::ExpDomain);
    }
    let mut g: BTreeMap<Vec<u32>, RatFunc> = BTreeMap::new();
    for r in exponents_up_to(&f.bound) {
        let n = total(&r);
        if n == 0 {
            g.insert(r, RatFunc::one());
            continue;
        }
        let mut acc = RatFunc::zero();
        for (s, fs) in &f.terms {
            if !le(s, &r) {
                continue;
            }
            if let Some(gr) = g.get(&sub_vec(&r, s)) {
                acc = acc + fs.scale(&Rat::from_integer(total(s).into())) * gr;
            }
        }
        let v = acc.scale(&Rat::new(1.into(), n.into()));
        if !v.is_zero() {
            g.insert(r, v);
        }
    }
    Ok(TSeries { bound: f.bound.clone(), terms: g })
}

/// Ordinary logarithm of a series with constant term 1.
pub fn series_log(f: &TSeries) -> Result<TSeries> {
    if !f.constant_term().is_one() {
        return Err(Error::LogDomain);
    }
    let mut l: BTreeMap<Vec<u32>, RatFunc> = BTreeMap::new();
    for r in exponents_up_to(&f.bound) {
        let n = total(&r);
        if n == 0 {
            continue;
        }
        let mut acc = f.coeff(&r).scale(&Rat::from_integer(n.into()));
        for (s, ls) in &l {
            if s == &r || !le(s, &r) {
                continue;
            }
            let fr = f.coeff(&sub_vec(&r, s));
            if !fr.is_zero() {
                acc = acc - ls.scale(&Rat::from_integer(total(s).into())) * fr;
            }
        }
        let v = acc.scale(&Rat::new(1.into(), n.into()));
        if !v.is_zero() {
            l.insert(r, v);
        }
    }
    Ok(TSeries { bound: f.bound.clone(), terms: l })
}
