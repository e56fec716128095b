#![allow(dead_code)]

use kacdepth::algebra::{LaurentPoly, Rat, RatFunc, TSeries};
use kacdepth::quiver::Quiver;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

/// Spanning-tree count of the underlying multigraph via the reduced Laplacian.
pub fn kirchhoff(q: &Quiver) -> Rat {
    let n = q.nvertices();
    if n == 1 {
        return Rat::one();
    }
    let mut l = vec![vec![Rat::zero(); n]; n];
    for &(s, t) in q.arrows() {
        if s != t {
            l[s][s] += Rat::one();
            l[t][t] += Rat::one();
            l[s][t] -= Rat::one();
            l[t][s] -= Rat::one();
        }
    }
    let mut m: Vec<Vec<Rat>> = l[1..].iter().map(|r| r[1..].to_vec()).collect();
    let k = n - 1;
    let mut det = Rat::one();
    for c in 0..k {
        let Some(piv) = (c..k).find(|&r| !m[r][c].is_zero()) else {
            return Rat::zero();
        };
        if piv != c {
            m.swap(piv, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for r in c + 1..k {
            let f = &m[r][c] / &m[c][c];
            for j in c..k {
                let d = &f * &m[c][j];
                m[r][j] -= d;
            }
        }
    }
    det
}

pub fn random_quiver<R: Rng>(rng: &mut R, max_vertices: usize, max_arrows: usize) -> Quiver {
    let n = rng.gen_range(1..=max_vertices);
    let m = rng.gen_range(0..=max_arrows);
    let arrows = (0..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect();
    Quiver::new(n, arrows).unwrap()
}

/// Random connected quiver: a random spanning tree plus extra random arrows.
pub fn random_connected_quiver<R: Rng>(rng: &mut R, max_vertices: usize, max_arrows: usize) -> Quiver {
    let n = rng.gen_range(1..=max_vertices);
    let extra = rng.gen_range(0..=max_arrows.saturating_sub(n - 1));
    let mut arrows: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    arrows.extend((0..extra).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
    arrows.shuffle(rng);
    let arrows = arrows.into_iter().map(|(s, t)| if rng.gen_bool(0.5) { (s, t) } else { (t, s) }).collect();
    Quiver::new(n, arrows).unwrap()
}

pub fn random_perm<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn random_laurent<R: Rng>(rng: &mut R, lo: i64, hi: i64, cmax: i64) -> LaurentPoly {
    LaurentPoly::from_terms((lo..=hi).map(|e| (e, Rat::from_integer(rng.gen_range(-cmax..=cmax).into()))))
}

/// Random rational function with a cyclotomic-style denominator.
pub fn random_ratfunc<R: Rng>(rng: &mut R) -> RatFunc {
    let num = random_laurent(rng, -1, 2, 3);
    let den = match rng.gen_range(0..3) {
        0 => LaurentPoly::one(),
        1 => LaurentPoly::q_pow_minus_one(1),
        _ => LaurentPoly::q_pow_minus_one(2),
    };
    RatFunc::new(num, den).unwrap()
}

/// Random series with zero constant term.
pub fn random_series<R: Rng>(rng: &mut R, bound: &[u32]) -> TSeries {
    let mut terms: Vec<(Vec<u32>, RatFunc)> = Vec::new();
    for r in kacdepth::algebra::exponents_up_to(bound) {
        if r.iter().any(|&x| x > 0) && rng.gen_bool(0.6) {
            terms.push((r, random_ratfunc(rng)));
        }
    }
    TSeries::from_terms(bound.to_vec(), terms).unwrap()
}

pub mod strategies {
    use super::*;
    use proptest::prelude::*;

    pub fn laurent() -> impl Strategy<Value = LaurentPoly> {
        (-3i64..=3, proptest::collection::vec(-4i64..=4, 0..5))
            .prop_map(|(low, c)| LaurentPoly::from_int_coeffs(low, &c))
    }

    pub fn nonzero_laurent() -> impl Strategy<Value = LaurentPoly> {
        laurent().prop_filter("nonzero", |p| !p.is_zero())
    }

    pub fn ratfunc() -> impl Strategy<Value = RatFunc> {
        (laurent(), nonzero_laurent()).prop_map(|(n, d)| RatFunc::new(n, d).unwrap())
    }

    pub fn quiver(max_vertices: usize, max_arrows: usize) -> impl Strategy<Value = Quiver> {
        (1..=max_vertices).prop_flat_map(move |n| {
            proptest::collection::vec((0..n, 0..n), 0..=max_arrows).prop_map(move |a| Quiver::new(n, a).unwrap())
        })
    }

    pub fn connected_quiver(max_vertices: usize, max_arrows: usize) -> impl Strategy<Value = Quiver> {
        quiver(max_vertices, max_arrows).prop_filter("connected", |q| q.is_connected())
    }

    /// Quiver together with a permutation of its arrows.
    pub fn quiver_with_perm(max_vertices: usize, max_arrows: usize) -> impl Strategy<Value = (Quiver, Vec<usize>)> {
        connected_quiver(max_vertices, max_arrows).prop_flat_map(|q| {
            let m = q.narrows();
            (Just(q), Just((0..m).collect::<Vec<usize>>()).prop_shuffle())
        })
    }
}
