//! λ-ring operations on [`TSeries`]: Adams operators, plethystic Exp and Log.

use crate::algebra::{frac, series_exp, series_log, TSeries};
use crate::error::{Error, Result};

/// A [`TSeries`] read as an element of the λ-ring: `q` lives in the
/// coefficients, the `t_i` are the series variables.
pub type PlethSeries = TSeries;

/// `ψ_m`: `q -> q^m` on coefficients and `t^r -> t^{m r}`.
pub fn adams(f: &PlethSeries, m: u32) -> Result<PlethSeries> {
    if m == 0 {
        return Err(Error::InvalidAdamsIndex);
    }
    let terms = f
        .terms()
        .map(|(r, c)| Ok((r.iter().map(|&x| x * m).collect(), c.substitute_power(m)?)))
        .collect::<Result<Vec<_>>>()?;
    TSeries::from_terms(f.bound().to_vec(), terms)
}

fn adams_range(f: &PlethSeries) -> u32 {
    f.bound().iter().sum::<u32>()
}

/// Möbius function.
pub fn mobius(n: u32) -> i64 {
    let (mut n, mut sign, mut d) = (n, 1i64, 2u32);
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// `Exp(F) = exp(Σ_{m>=1} ψ_m(F)/m)`.
pub fn pleth_exp(f: &PlethSeries) -> Result<PlethSeries> {
    if !f.constant_term().is_zero() {
        return Err(Error::ExpDomain);
    }
    let mut h = TSeries::zero(f.bound().to_vec());
    for m in 1..=adams_range(f) {
        h = h.add(&adams(f, m)?.scale_rat(&frac(1, m as i64)));
    }
    series_exp(&h)
}

/// Inverse of [`pleth_exp`]: `Log(F) = Σ_m μ(m)/m · ψ_m(log F)`.
pub fn pleth_log(f: &PlethSeries) -> Result<PlethSeries> {
    let l = series_log(f)?;
    let mut out = TSeries::zero(f.bound().to_vec());
    for m in 1..=adams_range(f) {
        let mu = mobius(m);
        if mu != 0 {
            out = out.add(&adams(&l, m)?.scale_rat(&frac(mu, m as i64)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{LaurentPoly, RatFunc};

    fn rf(s: &str) -> RatFunc {
        RatFunc::from_poly(s.parse::<LaurentPoly>().unwrap())
    }

    fn one_var(bound: u32, coeffs: &[&str]) -> TSeries {
        TSeries::from_terms(vec![bound], coeffs.iter().enumerate().map(|(i, c)| (vec![i as u32], rf(c)))).unwrap()
    }

    #[test]
    fn mobius_values() {
        let got: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(got, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn adams_examples() {
        let qt = one_var(4, &["0", "q"]);
        assert_eq!(adams(&qt, 2).unwrap(), one_var(4, &["0", "0", "q^2"]));
        assert_eq!(adams(&qt, 1).unwrap(), qt);
        assert_eq!(adams(&qt, 0), Err(Error::InvalidAdamsIndex));
        let f = one_var(6, &["0", "q+2", "q^-1"]);
        assert_eq!(adams(&adams(&f, 2).unwrap(), 3).unwrap(), adams(&f, 6).unwrap());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(pleth_exp(&one_var(4, &["0", "1"])).unwrap(), one_var(4, &["1", "1", "1", "1", "1"]));
        assert_eq!(pleth_exp(&one_var(3, &["0", "q"])).unwrap(), one_var(3, &["1", "q", "q^2", "q^3"]));
        let two = TSeries::from_terms(vec![1, 1], [(vec![1, 0], rf("q+3")), (vec![0, 1], rf("q^2"))]).unwrap();
        assert_eq!(pleth_exp(&two).unwrap().coeff(&[1, 1]), rf("q^3+3q^2"));
        assert_eq!(pleth_exp(&TSeries::one(vec![1])), Err(Error::ExpDomain));
    }

    #[test]
    fn log_examples() {
        assert_eq!(pleth_log(&one_var(5, &["1", "1", "1", "1", "1", "1"])).unwrap(), one_var(5, &["0", "1"]));
        let g = one_var(4, &["0", "q", "q^3"]);
        assert_eq!(pleth_log(&pleth_exp(&g).unwrap()).unwrap(), g);
        assert_eq!(pleth_log(&TSeries::zero(vec![2])), Err(Error::LogDomain));
    }
}
