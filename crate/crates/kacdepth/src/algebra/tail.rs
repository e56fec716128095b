use std::collections::BTreeMap;

use num_traits::Zero;

use super::{LaurentPoly, Rat, RatFunc};
use crate::error::{Error, Result};

/// Laurent series in `z^{-1}`, exact for every exponent `>= floor`.
///
/// Terms below the floor are unknown and never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TailSeries {
    floor: i64,
    terms: BTreeMap<i64, Rat>,
}

impl TailSeries {
    pub fn floor(&self) -> i64 {
        self.floor
    }

    pub fn top(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn coeff(&self, e: i64) -> Rat {
        self.terms.get(&e).cloned().unwrap_or_else(Rat::zero)
    }

    /// Known nonzero terms, highest exponent first.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rat)> {
        self.terms.iter().rev().map(|(e, c)| (*e, c))
    }

    pub fn from_poly(p: &LaurentPoly, floor: i64) -> Self {
        let terms = p.terms().filter(|(e, _)| *e >= floor).map(|(e, c)| (e, c.clone())).collect();
        Self { floor, terms }
    }

    /// Expansion of `f` at `z = infinity`.
    pub fn from_ratfunc(f: &RatFunc, floor: i64) -> Self {
        let (num, den) = (f.num(), f.den());
        let Some(ntop) = num.degree() else {
            return Self { floor, terms: BTreeMap::new() };
        };
        let m = den.degree().unwrap();
        // 1/den = z^{-m} Σ_k h_k z^{-k}
        let depth = (ntop - m - floor).max(0) as usize;
        let c: Vec<Rat> = (1..=m).map(|j| den.coeff(m - j)).collect();
        let mut h = vec![Rat::zero(); depth + 1];
        h[0] = Rat::from_integer(1.into());
        for k in 1..=depth {
            let mut acc = Rat::zero();
            for j in 1..=(m as usize).min(k) {
                acc -= &c[j - 1] * &h[k - j];
            }
            h[k] = acc;
        }
        let mut terms: BTreeMap<i64, Rat> = BTreeMap::new();
        for (e, a) in num.terms() {
            for (k, hk) in h.iter().enumerate() {
                let x = e - m - k as i64;
                if x < floor {
                    break;
                }
                if !hk.is_zero() {
                    *terms.entry(x).or_insert_with(Rat::zero) += a * hk;
                }
            }
        }
        terms.retain(|_, v| !v.is_zero());
        Self { floor, terms }
    }

    /// `Σ_{k >= start} z^{-k}`, the expansion of `z^{1-start}/(z-1)`.
    pub fn geometric(start: i64, floor: i64) -> Self {
        let terms = (floor..=-start).map(|e| (e, Rat::from_integer(1.into()))).collect();
        Self { floor, terms }
    }

    pub fn shift(&self, k: i64) -> Self {
        Self { floor: self.floor + k, terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let floor = self.floor.max(other.floor);
        let mut terms = BTreeMap::new();
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            if *e >= floor {
                *terms.entry(*e).or_insert_with(Rat::zero) += c;
            }
        }
        terms.retain(|_, v: &mut Rat| !v.is_zero());
        Self { floor, terms }
    }

    /// Product; the floor shrinks to what both factors determine.
    pub fn mul(&self, other: &Self) -> Self {
        let (Some(ta), Some(tb)) = (self.top(), other.top()) else {
            return Self { floor: self.floor.max(other.floor), terms: BTreeMap::new() };
        };
        let floor = (self.floor + tb).max(other.floor + ta);
        let mut terms = BTreeMap::new();
        for (e, a) in &self.terms {
            for (f, b) in &other.terms {
                if e + f >= floor {
                    *terms.entry(e + f).or_insert_with(Rat::zero) += a * b;
                }
            }
        }
        terms.retain(|_, v: &mut Rat| !v.is_zero());
        Self { floor, terms }
    }

    /// Compares the terms both sides know down to `floor`.
    pub fn agrees_to(&self, other: &Self, floor: i64) -> Result<bool> {
        if self.floor > floor || other.floor > floor {
            return Err(Error::Invalid(format!("expansion not known down to z^{floor}")));
        }
        let a: Vec<_> = self.terms.range(floor..).collect();
        let b: Vec<_> = other.terms.range(floor..).collect();
        Ok(a == b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mod_gm() {
        let f = RatFunc::new(LaurentPoly::one(), "q-1".parse().unwrap()).unwrap();
        let e = TailSeries::from_ratfunc(&f, -10);
        assert!(e.agrees_to(&TailSeries::geometric(1, -10), -10).unwrap());
        assert_eq!(e.top(), Some(-1));
    }

    #[test]
    fn product_matches_expansion() {
        let a = RatFunc::new("q^2".parse().unwrap(), "q^2-1".parse().unwrap()).unwrap();
        let b = RatFunc::new("q+3".parse().unwrap(), "q-1".parse().unwrap()).unwrap();
        let lhs = TailSeries::from_ratfunc(&(&a * &b), -12);
        let rhs = TailSeries::from_ratfunc(&a, -12).mul(&TailSeries::from_ratfunc(&b, -12));
        assert!(rhs.floor() <= -10);
        assert!(lhs.agrees_to(&rhs, -10).unwrap());
    }
}
