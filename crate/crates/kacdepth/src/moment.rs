//! Brute-force moment-map fiber counts over `O_α` and the counting
//! identities relating them to Kac polynomials.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{exponents_up_to, LaurentPoly, Rat, RatFunc, TSeries, TailSeries};
use crate::error::{Error, Result};
use crate::finite_ring::{group_order_gl, guard_power, OElem, TruncRing};
use crate::plethysm::pleth_exp;
use crate::quiver::Quiver;
use crate::rank::one_vertex_kac;
use crate::toric::wyss_kac;

/// Per-vertex target of the moment map, each block an `r_i × r_i` matrix
/// stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentTarget {
    p: u32,
    alpha: u32,
    blocks: Vec<Vec<OElem>>,
}

impl MomentTarget {
    pub fn new(p: u32, alpha: u32, ranks: &[u32], blocks: Vec<Vec<OElem>>) -> Result<Self> {
        if blocks.len() != ranks.len() {
            return Err(Error::DimensionMismatch(format!("{} blocks for {} vertices", blocks.len(), ranks.len())));
        }
        for (b, &r) in blocks.iter().zip(ranks) {
            if b.len() != (r * r) as usize {
                return Err(Error::DimensionMismatch(format!("block of {} entries for rank {r}", b.len())));
            }
            if b.iter().any(|e| e.p() != p || e.alpha() != alpha) {
                return Err(Error::DimensionMismatch("target entries over a different ring".into()));
            }
        }
        Ok(Self { p, alpha, blocks })
    }

    pub fn zero(p: u32, alpha: u32, ranks: &[u32]) -> Self {
        let blocks = ranks.iter().map(|&r| vec![OElem::zero(p, alpha); (r * r) as usize]).collect();
        Self { p, alpha, blocks }
    }

    /// `t^{α-1} λ_i · Id` at each vertex.
    pub fn scalar(p: u32, alpha: u32, ranks: &[u32], lambda: &[i64]) -> Result<Self> {
        if lambda.len() != ranks.len() {
            return Err(Error::DimensionMismatch(format!("{} parameters for {} vertices", lambda.len(), ranks.len())));
        }
        let blocks = ranks
            .iter()
            .zip(lambda)
            .map(|(&r, &l)| {
                let r = r as usize;
                (0..r * r)
                    .map(|k| {
                        if k / r == k % r {
                            OElem::monomial(p, alpha, l, alpha - 1)
                        } else {
                            OElem::zero(p, alpha)
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Self { p, alpha, blocks })
    }

    pub fn blocks(&self) -> &[Vec<OElem>] {
        &self.blocks
    }
}

struct Layout {
    /// `(x offset, y offset, rows of x = r_t, cols of x = r_s, s, t)`
    arrows: Vec<(usize, usize, usize, usize, usize, usize)>,
    ranks: Vec<usize>,
    nentries: usize,
}

fn layout(q: &Quiver, ranks: &[u32]) -> Layout {
    let mut off = 0;
    let mut arrows = Vec::new();
    for &(s, t) in q.arrows() {
        let (rs, rt) = (ranks[s] as usize, ranks[t] as usize);
        let xo = off;
        off += rs * rt;
        let yo = off;
        off += rs * rt;
        arrows.push((xo, yo, rt, rs, s, t));
    }
    Layout { arrows, ranks: ranks.iter().map(|&r| r as usize).collect(), nentries: off }
}

/// `acc += sign · a · b` with `a` of shape `n×k`, `b` of shape `k×m`.
fn mul_acc(ring: &TruncRing, acc: &mut [u16], a: &[u16], b: &[u16], n: usize, k: usize, m: usize, negate: bool) {
    for i in 0..n {
        for j in 0..m {
            let mut s = 0u16;
            for l in 0..k {
                s = ring.add(s, ring.mul(a[i * k + l], b[l * m + j]));
            }
            let cell = &mut acc[i * m + j];
            *cell = if negate { ring.sub(*cell, s) } else { ring.add(*cell, s) };
        }
    }
}

fn check_ranks(q: &Quiver, ranks: &[u32]) -> Result<()> {
    if ranks.len() != q.nvertices() {
        return Err(Error::DimensionMismatch(format!("{} ranks for {} vertices", ranks.len(), q.nvertices())));
    }
    Ok(())
}

/// Number of points of the double-quiver representation space with
/// `μ(x, y) = Σ_{t(a)=i} x_a y_a - Σ_{s(a)=i} y_a x_a` equal to `target`.
pub fn brute_moment_fiber(
    q: &Quiver,
    ranks: &[u32],
    p: u32,
    alpha: u32,
    target: &MomentTarget,
    guard: u64,
) -> Result<u64> {
    check_ranks(q, ranks)?;
    if target.p != p || target.alpha != alpha || target.blocks.len() != ranks.len() {
        return Err(Error::DimensionMismatch("target does not match the representation space".into()));
    }
    let ring = TruncRing::new(p, alpha)?;
    let lay = layout(q, ranks);
    guard_power(p, alpha as u64 * lay.nentries as u64, guard)?;
    let want: Vec<Vec<u16>> =
        target.blocks.iter().map(|b| b.iter().map(|e| e.index() as u16).collect()).collect();
    let size = ring.size() as u64;
    let split = lay.nentries.min(3);
    let outer = size.pow(split as u32);
    let count = (0..outer)
        .into_par_iter()
        .map(|head| {
            let mut v = vec![0u16; lay.nentries];
            let mut h = head;
            for cell in v.iter_mut().take(split) {
                *cell = (h % size) as u16;
                h /= size;
            }
            let mut acc: Vec<Vec<u16>> = lay.ranks.iter().map(|&r| vec![0u16; r * r]).collect();
            let mut hits = 0u64;
            loop {
                for blk in acc.iter_mut() {
                    blk.fill(0);
                }
                for &(xo, yo, rt, rs, s, t) in &lay.arrows {
                    let x = &v[xo..xo + rs * rt];
                    let y = &v[yo..yo + rs * rt];
                    mul_acc(&ring, &mut acc[t], x, y, rt, rs, rt, false);
                    mul_acc(&ring, &mut acc[s], y, x, rs, rt, rs, true);
                }
                if acc == want {
                    hits += 1;
                }
                let mut i = split;
                loop {
                    if i == lay.nentries {
                        return hits;
                    }
                    v[i] += 1;
                    if (v[i] as u64) < size {
                        break;
                    }
                    v[i] = 0;
                    i += 1;
                }
            }
        })
        .sum();
    Ok(count)
}

fn rat_pow(p: u32, e: i64) -> Rat {
    let base = Rat::from_integer(BigInt::from(p));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

fn euler(q: &Quiver, ranks: &[u32]) -> Result<i64> {
    let r: Vec<i64> = ranks.iter().map(|&x| x as i64).collect();
    q.euler_form(&r, &r)
}

/// `A_{Q,r,α}` where available: toric ranks, or one-vertex ranks up to 3.
pub fn kac_for_rank(q: &Quiver, ranks: &[u32], alpha: u32) -> Result<LaurentPoly> {
    check_ranks(q, ranks)?;
    if ranks.iter().all(|&r| r <= 1) {
        let support: Vec<usize> = (0..ranks.len()).filter(|&i| ranks[i] == 1).collect();
        if support.is_empty() {
            return Ok(LaurentPoly::zero());
        }
        return wyss_kac(&q.restrict_vertices(&support)?, alpha);
    }
    if q.nvertices() == 1 && ranks[0] <= 3 {
        return one_vertex_kac(q.narrows() as u32, ranks[0], alpha);
    }
    Err(Error::RankOutOfRange)
}

fn one_minus_qinv() -> LaurentPoly {
    LaurentPoly::one() - LaurentPoly::q_pow(-1)
}

/// `Σ_{0 < r ≤ bound} A_{Q,r,α}/(1 - q^{-1}) t^r`.
fn kac_generating_series(q: &Quiver, alpha: u32, bound: &[u32]) -> Result<TSeries> {
    let denom = RatFunc::new(LaurentPoly::one(), one_minus_qinv())?;
    let mut terms = Vec::new();
    for r in exponents_up_to(bound) {
        if r.iter().all(|&x| x == 0) {
            continue;
        }
        let a = kac_for_rank(q, &r, alpha)?;
        terms.push((r, &RatFunc::from_poly(a) * &denom));
    }
    TSeries::from_terms(bound.to_vec(), terms)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityEntry {
    pub rank: Vec<u32>,
    pub fiber_count: u64,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExpIdentityReport {
    pub p: u32,
    pub alpha: u32,
    pub bound: Vec<u32>,
    pub entries: Vec<IdentityEntry>,
    pub holds: bool,
}

/// Compares `q^{α⟨r,r⟩} #μ^{-1}(0) / #GL(r, O_α)` with the coefficients of
/// `Exp(Σ_r A_{Q,r,α}/(1 - q^{-1}) t^r)` at `q = p` for every `r ≤ bound`.
pub fn verify_exp_identity(q: &Quiver, p: u32, alpha: u32, bound: &[u32], guard: u64) -> Result<ExpIdentityReport> {
    check_ranks(q, bound)?;
    let multi_vertex_high = q.nvertices() > 1 && bound.iter().any(|&b| b > 1);
    if multi_vertex_high || bound.iter().any(|&b| b > 3) {
        return Err(Error::RankOutOfRange);
    }
    let rhs_series = pleth_exp(&kac_generating_series(q, alpha, bound)?)?;
    let mut entries = Vec::new();
    for r in exponents_up_to(bound) {
        if r.iter().all(|&x| x == 0) {
            continue;
        }
        let target = MomentTarget::zero(p, alpha, &r);
        let count = brute_moment_fiber(q, &r, p, alpha, &target, guard)?;
        let gl = group_order_gl(&r, alpha).eval_int(p as i64)?;
        let lhs = rat_pow(p, alpha as i64 * euler(q, &r)?) * Rat::from_integer(count.into()) / gl;
        let rhs = rhs_series.coeff(&r).eval_int(p as i64)?;
        entries.push(IdentityEntry { rank: r, fiber_count: count, equal: lhs == rhs, lhs: lhs.to_string(), rhs: rhs.to_string() });
    }
    let holds = entries.iter().all(|e| e.equal);
    Ok(ExpIdentityReport { p, alpha, bound: bound.to_vec(), entries, holds })
}

/// `λ·r = 0` and `λ·r' ≠ 0` for every `0 < r' < r`.
pub fn genericity_check(lambda: &[i64], ranks: &[u32]) -> bool {
    if lambda.len() != ranks.len() {
        return false;
    }
    let dot = |r: &[u32]| r.iter().zip(lambda).map(|(&a, &l)| a as i64 * l).sum::<i64>();
    if dot(ranks) != 0 {
        return false;
    }
    exponents_up_to(ranks)
        .into_iter()
        .filter(|r| r.iter().any(|&x| x > 0) && r.as_slice() != ranks)
        .all(|r| dot(&r) != 0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericFiberReport {
    pub rank: Vec<u32>,
    pub lambda: Vec<i64>,
    pub p: u32,
    pub alpha: u32,
    pub fiber_count: u64,
    pub kac: String,
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
}

/// Compares `#μ^{-1}(t^{α-1}λ) / #GL(r, O_α)` with
/// `q^{-α⟨r,r⟩} A_{Q,r,α}/(1 - q^{-1})` at `q = p`, for `r ≤ 1̲`.
pub fn verify_generic_fiber(
    q: &Quiver,
    ranks: &[u32],
    lambda: &[i64],
    p: u32,
    alpha: u32,
    guard: u64,
) -> Result<GenericFiberReport> {
    check_ranks(q, ranks)?;
    if lambda.len() != ranks.len() {
        return Err(Error::DimensionMismatch(format!("{} parameters for {} vertices", lambda.len(), ranks.len())));
    }
    if ranks.iter().any(|&r| r > 1) || ranks.iter().all(|&r| r == 0) {
        return Err(Error::RankOutOfRange);
    }
    if !genericity_check(lambda, ranks) {
        return Err(Error::LambdaNotGeneric);
    }
    let bound: i64 = lambda.iter().zip(ranks).map(|(l, &r)| l.abs() * r as i64).sum();
    if (p as i64) <= bound {
        return Err(Error::CharacteristicTooSmall(bound));
    }
    let target = MomentTarget::scalar(p, alpha, ranks, lambda)?;
    let count = brute_moment_fiber(q, ranks, p, alpha, &target, guard)?;
    let gl = group_order_gl(ranks, alpha).eval_int(p as i64)?;
    let lhs = Rat::from_integer(count.into()) / gl;
    let a = kac_for_rank(q, ranks, alpha)?;
    let rhs = rat_pow(p, -(alpha as i64) * euler(q, ranks)?) * a.eval_int(p as i64)?
        / one_minus_qinv().eval_int(p as i64)?;
    Ok(GenericFiberReport {
        rank: ranks.to_vec(),
        lambda: lambda.to_vec(),
        p,
        alpha,
        fiber_count: count,
        kac: a.to_string(),
        equal: lhs == rhs,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    })
}

/// `p^{-α(2|Q_1| - |Q_0| + 1)} #μ^{-1}(0)` in rank `1̲`, whose limit in `α`
/// is `B_{μ_Q}` at `q = p`.
pub fn normalized_zero_fiber(q: &Quiver, p: u32, alpha: u32, guard: u64) -> Result<Rat> {
    let ranks = vec![1; q.nvertices()];
    let count = brute_moment_fiber(q, &ranks, p, alpha, &MomentTarget::zero(p, alpha, &ranks), guard)?;
    let e = 2 * q.narrows() as i64 - q.nvertices() as i64 + 1;
    Ok(rat_pow(p, -(alpha as i64) * e) * Rat::from_integer(count.into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FiberMode {
    Zero,
    Generic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ESeriesReport {
    pub mode: FiberMode,
    pub alpha: u32,
    pub floor: i64,
    pub counting_polynomial: String,
    pub lhs: Vec<(i64, String)>,
    pub rhs: Vec<(i64, String)>,
    pub equal: bool,
}

/// All set partitions of `0..n`, blocks in increasing order of least element.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = vec![vec![]];
    for v in 0..n {
        let mut next = Vec::new();
        for part in out {
            for i in 0..part.len() {
                let mut p = part.clone();
                p[i].push(v);
                next.push(p);
            }
            let mut p = part;
            p.push(vec![v]);
            next.push(p);
        }
        out = next;
    }
    out
}

/// `Π_i z^{α r_i^2} (1 - z^{-1}) ⋯ (1 - z^{-r_i})`.
pub fn group_counting_polynomial(ranks: &[u32], alpha: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for &r in ranks {
        let mut f = LaurentPoly::q_pow(alpha as i64 * (r * r) as i64);
        for k in 1..=r as i64 {
            f = f * (LaurentPoly::one() - LaurentPoly::q_pow(-k));
        }
        acc = acc * f;
    }
    acc
}

fn series_pairs(s: &TailSeries, floor: i64) -> Vec<(i64, String)> {
    s.terms().filter(|(e, _)| *e >= floor).map(|(e, c)| (e, c.to_string())).collect()
}

/// E-series of the quotient stack of a rank-`1̲` moment-map fiber in the
/// variable `z`: the counting-polynomial side `P_X(z)/P_G(z)` against the
/// sum over vertex partitions of `A(z) · z · Σ_{k≥1} z^{-k}` terms, compared
/// down to `z^{-order}`.
pub fn stack_e_series(q: &Quiver, alpha: u32, mode: FiberMode, order: i64) -> Result<ESeriesReport> {
    if order < 1 {
        return Err(Error::OutOfRange(format!("truncation order {order} must be at least 1")));
    }
    let n = q.nvertices();
    let ranks = vec![1u32; n];
    let shift = -(alpha as i64) * euler(q, &ranks)?;
    let gl = group_order_gl(&ranks, alpha);
    let (px, rhs_blocks): (RatFunc, Vec<Vec<LaurentPoly>>) = match mode {
        FiberMode::Zero => {
            let series = pleth_exp(&kac_generating_series(q, alpha, &ranks)?)?;
            let coeff = series.coeff(&ranks);
            let px = &RatFunc::from_poly(gl.shift(shift)) * &coeff;
            let blocks = set_partitions(n)
                .into_iter()
                .map(|part| part.iter().map(|b| wyss_kac(&q.restrict_vertices(b)?, alpha)).collect())
                .collect::<Result<_>>()?;
            (px, blocks)
        }
        FiberMode::Generic => {
            let a = wyss_kac(q, alpha)?;
            let px = RatFunc::new(gl.shift(shift) * a.clone(), one_minus_qinv())?;
            (px, vec![vec![a]])
        }
    };
    let counting = match px.as_laurent() {
        Some(p) if p.is_polynomial() && p.has_integer_coeffs() => p.clone(),
        _ => return Err(Error::PolynomialityViolated),
    };
    let floor = -order;
    let e = RatFunc::new(counting.clone(), group_counting_polynomial(&ranks, alpha))?;
    let lhs = TailSeries::from_ratfunc(&e, floor);

    let slack: i64 = rhs_blocks
        .iter()
        .map(|bs| bs.iter().map(|a| a.degree().unwrap_or(0).max(0) + 2).sum::<i64>())
        .max()
        .unwrap_or(0)
        + shift.abs()
        + 2;
    let work = floor - slack;
    let mut rhs = TailSeries::from_poly(&LaurentPoly::zero(), floor);
    for blocks in &rhs_blocks {
        let mut term = TailSeries::from_poly(&LaurentPoly::one(), work);
        for a in blocks {
            let factor = TailSeries::from_poly(a, work).mul(&TailSeries::geometric(1, work)).shift(1);
            term = term.mul(&factor);
        }
        rhs = rhs.add(&term.shift(shift));
    }
    let equal = lhs.agrees_to(&rhs, floor)?;
    Ok(ESeriesReport {
        mode,
        alpha,
        floor,
        counting_polynomial: counting.to_string(),
        lhs: series_pairs(&lhs, floor),
        rhs: series_pairs(&rhs, floor),
        equal,
    })
}
