//! Toric (rank one at every vertex) Kac polynomials over `O_α`.
//!
//! Three routes compute the same count: the chain sum over arrow subsets
//! ([`wyss_kac`]), the sum over valued spanning trees ([`cd_kac`]), and
//! brute-force orbit counting ([`brute_toric_A`]).

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{LaurentPoly, Rat, RatFunc};
use crate::error::{Error, Result};
use crate::finite_ring::{guard_power, OElem, TruncRing};
use crate::quiver::{path_data_from, Quiver, UnionFind, ValuedTree};

/// Largest arrow count for subset-lattice computations.
pub const MAX_SUBSET_ARROWS: usize = 20;

/// Betti number and component count of `Q` restricted to each arrow subset,
/// indexed by bitmask.
pub fn subset_table(q: &Quiver) -> Result<Vec<(u32, u32)>> {
    let m = q.narrows();
    if m > MAX_SUBSET_ARROWS {
        return Err(Error::EnumerationTooLarge);
    }
    let n = q.nvertices();
    Ok((0..1usize << m)
        .map(|mask| {
            let mut uf = UnionFind::new(n);
            let mut merges = 0;
            for (a, &(s, t)) in q.arrows().iter().enumerate() {
                if mask >> a & 1 == 1 && uf.union(s, t) {
                    merges += 1;
                }
            }
            let c = n - merges;
            let e = mask.count_ones() as usize;
            ((c + e - n) as u32, c as u32)
        })
        .collect())
}

fn dense_to_poly(v: &[i128]) -> LaurentPoly {
    LaurentPoly::from_dense(0, v.iter().map(|&c| Rat::from_integer(BigInt::from(c))).collect())
}

fn add_shifted(acc: &mut Vec<i128>, src: &[i128], shift: usize) -> Result<()> {
    if acc.len() < src.len() + shift {
        acc.resize(src.len() + shift, 0);
    }
    for (i, &c) in src.iter().enumerate() {
        acc[i + shift] = acc[i + shift].checked_add(c).ok_or(Error::EnumerationTooLarge)?;
    }
    Ok(())
}

/// Chain-sum formula: the sum over chains `E_1 ⊆ … ⊆ E_α ⊆ Q_1` with
/// `Q|E_α` connected of `(q-1)^{b(E_α)} q^{Σ_{k<α} b(E_k)}`.
///
/// Zero for disconnected quivers.
pub fn wyss_kac(q: &Quiver, alpha: u32) -> Result<LaurentPoly> {
    if alpha == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let table = subset_table(q)?;
    let m = q.narrows();
    let full = 1usize << m;
    // w[E] = Σ over E_1 ⊆ … ⊆ E_{k} = E of q^{Σ_{j<k} b(E_j)}
    let mut w: Vec<Vec<i128>> = vec![vec![1]; full];
    for _ in 1..alpha {
        let mut next: Vec<Vec<i128>> = vec![Vec::new(); full];
        for (e, we) in w.iter().enumerate() {
            add_shifted(&mut next[e], we, table[e].0 as usize)?;
        }
        // zeta transform over subsets
        for bit in 0..m {
            for e in 0..full {
                if e >> bit & 1 == 1 {
                    let (lo, hi) = next.split_at_mut(e);
                    let src = lo[e ^ (1 << bit)].clone();
                    add_shifted(&mut hi[0], &src, 0)?;
                }
            }
        }
        w = next;
    }
    let qm1 = LaurentPoly::from_int_coeffs(0, &[-1, 1]);
    let mut by_betti: Vec<Vec<i128>> = Vec::new();
    for (e, we) in w.iter().enumerate() {
        let (b, c) = table[e];
        if c != 1 {
            continue;
        }
        if by_betti.len() <= b as usize {
            by_betti.resize(b as usize + 1, Vec::new());
        }
        add_shifted(&mut by_betti[b as usize], we, 0)?;
    }
    let mut total = LaurentPoly::zero();
    for (b, v) in by_betti.iter().enumerate() {
        if !v.is_empty() {
            total = total + dense_to_poly(v) * qm1.pow(b as u32);
        }
    }
    Ok(total)
}

/// One stratum of the valued-spanning-tree decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stratum {
    pub tree: Vec<usize>,
    pub valuation: Vec<u32>,
    pub n_t: i64,
}

/// All strata `(T, v, n_T)` for valuations in `0..α`, trees in lexicographic
/// order and valuations in odometer order.
///
/// `n_T = Σ_{a ∉ T, non-loop} (α - v_{T_a} - [a > e_{T_a}]) + α · #loops`.
pub fn cd_census(q: &Quiver, alpha: u32) -> Result<Vec<Stratum>> {
    if alpha == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    if !q.is_connected() {
        return Err(Error::DisconnectedQuiver);
    }
    let trees = q.spanning_trees()?;
    let loops = q.num_loops() as i64;
    let k = q.nvertices() - 1;
    guard_power(alpha, k as u64, u64::MAX / 2)?;
    let mut out = Vec::new();
    for tree in trees {
        let paths: Vec<(usize, Vec<usize>)> = (0..q.narrows())
            .filter(|&a| !q.is_loop(a) && !tree.contains(&a))
            .map(|a| Ok((a, q.tree_path(&tree, a)?)))
            .collect::<Result<_>>()?;
        let mut val = vec![0u32; k];
        loop {
            let vt = ValuedTree::from_parts(tree.clone(), val.clone());
            let mut n_t = alpha as i64 * loops;
            for (a, path) in &paths {
                let d = path_data_from(path.clone(), &vt);
                n_t += alpha as i64 - d.max_valuation as i64 - i64::from(*a > d.critical);
            }
            out.push(Stratum { tree: tree.clone(), valuation: val.clone(), n_t });
            let mut i = k;
            let done = loop {
                if i == 0 {
                    break true;
                }
                i -= 1;
                val[i] += 1;
                if val[i] < alpha {
                    break false;
                }
                val[i] = 0;
            };
            if done {
                break;
            }
        }
    }
    Ok(out)
}

/// Valued-spanning-tree formula `Σ_T q^{n_T}`.
pub fn cd_kac(q: &Quiver, alpha: u32) -> Result<LaurentPoly> {
    Ok(census_polynomial(&cd_census(q, alpha)?))
}

pub fn census_polynomial(strata: &[Stratum]) -> LaurentPoly {
    LaurentPoly::from_terms(strata.iter().map(|s| (s.n_t, Rat::from_integer(1.into()))))
}

/// One move of the contraction-deletion algorithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CdStep {
    /// Largest unit non-loop arrow contracted at the given depth.
    Contract { arrow: usize, depth: u32 },
    /// A loop removed.
    Delete { arrow: usize },
    /// Every remaining value divided by `t`.
    Lower,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simulation {
    pub tree: ValuedTree,
    pub trace: Vec<CdStep>,
}

fn check_assignment(q: &Quiver, x: &[OElem]) -> Result<(u32, u32)> {
    if x.len() != q.narrows() {
        return Err(Error::DimensionMismatch(format!("{} values for {} arrows", x.len(), q.narrows())));
    }
    let (p, alpha) = x.first().map_or((2, 1), |e| (e.p(), e.alpha()));
    if x.iter().any(|e| e.p() != p || e.alpha() != alpha) {
        return Err(Error::DimensionMismatch("values over different rings".into()));
    }
    Ok((p, alpha))
}

fn support_connected(q: &Quiver, x: &[OElem]) -> bool {
    let support: Vec<usize> = (0..x.len()).filter(|&a| !x[a].is_zero()).collect();
    q.restrict_arrows(&support).map(|r| r.is_connected()).unwrap_or(false)
}

/// Runs the contraction-deletion algorithm on a representation with
/// connected support, returning the valued tree it lands in.
pub fn cd_simulate(q: &Quiver, x: &[OElem]) -> Result<Simulation> {
    let (_, alpha) = check_assignment(q, x)?;
    if !support_connected(q, x) {
        return Err(Error::Decomposable);
    }
    let m = q.narrows();
    let val: Vec<u32> = x.iter().map(OElem::valuation).collect();
    let mut uf = UnionFind::new(q.nvertices());
    let mut active = vec![true; m];
    let mut trace = Vec::new();
    let mut pairs = Vec::new();
    let mut depth = 0;
    loop {
        while let Some(a) = (0..m).rev().find(|&a| {
            let (s, t) = q.arrow(a);
            active[a] && val[a] == depth && uf.find(s) != uf.find(t)
        }) {
            let (s, t) = q.arrow(a);
            uf.union(s, t);
            active[a] = false;
            pairs.push((a, depth));
            trace.push(CdStep::Contract { arrow: a, depth });
        }
        for a in (0..m).rev() {
            let (s, t) = q.arrow(a);
            if active[a] && uf.find(s) == uf.find(t) {
                active[a] = false;
                trace.push(CdStep::Delete { arrow: a });
            }
        }
        if !active.iter().any(|&b| b) {
            break;
        }
        depth += 1;
        if depth >= alpha {
            return Err(Error::Decomposable);
        }
        trace.push(CdStep::Lower);
    }
    let tree = ValuedTree::new(q, alpha, pairs)?;
    Ok(Simulation { tree, trace })
}

/// Whether `x` satisfies the defining inequalities of the stratum of `tree`.
pub fn stratum_contains(q: &Quiver, tree: &ValuedTree, x: &[OElem]) -> Result<bool> {
    check_assignment(q, x)?;
    for a in 0..q.narrows() {
        let v = x[a].valuation();
        if let Some(va) = tree.valuation(a) {
            if v != va {
                return Ok(false);
            }
        } else if !q.is_loop(a) {
            let d = crate::quiver::tree_path_data(q, tree, a)?;
            if v < d.max_valuation + u32::from(a > d.critical) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exhaustively compares stratum membership with the simulated tree for
/// every representation with connected support. Returns the
/// representations (as element encodings) where they disagree.
pub fn stratum_counterexamples(q: &Quiver, p: u32, alpha: u32, guard: u64) -> Result<Vec<Vec<u64>>> {
    let ring = TruncRing::new(p, alpha)?;
    let m = q.narrows();
    let total = guard_power(p, alpha as u64 * m as u64, guard)?;
    let strata = cd_census(q, alpha)?;
    let trees: Vec<ValuedTree> =
        strata.iter().map(|s| ValuedTree::from_parts(s.tree.clone(), s.valuation.clone())).collect();
    let size = ring.size() as u64;
    let mut bad = Vec::new();
    for n in 0..total {
        let idx: Vec<u64> = (0..m).map(|a| n / size.pow(a as u32) % size).collect();
        let x: Vec<OElem> = idx.iter().map(|&i| OElem::from_index(p, alpha, i)).collect();
        if !support_connected(q, &x) {
            continue;
        }
        let landed = cd_simulate(q, &x)?.tree;
        for t in &trees {
            if stratum_contains(q, t, &x)? != (*t == landed) {
                bad.push(idx.clone());
                break;
            }
        }
    }
    Ok(bad)
}

/// Number of torus orbits of representations with connected support,
/// counted by keeping the lexicographically smallest orbit element.
#[allow(non_snake_case)]
pub fn brute_toric_A(q: &Quiver, p: u32, alpha: u32, guard: u64) -> Result<u64> {
    let ring = TruncRing::new(p, alpha)?;
    let m = q.narrows();
    let total = guard_power(p, alpha as u64 * m as u64, guard)?;
    if !q.is_connected() {
        return Ok(0);
    }
    let units = ring.units();
    let inv: Vec<u16> = {
        let mut inv = vec![0u16; ring.size()];
        for &u in &units {
            inv[u as usize] = *units.iter().find(|&&w| ring.mul(u, w) == 1).unwrap();
        }
        inv
    };
    let n = q.nvertices();
    // torus elements with u_0 = 1; the diagonal acts trivially
    let mut torus: Vec<Vec<u16>> = vec![vec![1]];
    for _ in 1..n {
        torus = torus
            .into_iter()
            .flat_map(|t| {
                units.iter().map(move |&u| {
                    let mut t = t.clone();
                    t.push(u);
                    t
                })
            })
            .collect();
    }
    let size = ring.size() as u64;
    let arrows = q.arrows().to_vec();
    let count = (0..total)
        .into_par_iter()
        .filter(|&code| {
            let x: Vec<u16> = (0..m).map(|a| (code / size.pow(a as u32) % size) as u16).collect();
            let mut uf = UnionFind::new(n);
            let mut merges = 0;
            for (a, &(s, t)) in arrows.iter().enumerate() {
                if x[a] != 0 && uf.union(s, t) {
                    merges += 1;
                }
            }
            if merges + 1 != n {
                return false;
            }
            torus.iter().all(|u| {
                for (a, &(s, t)) in arrows.iter().enumerate() {
                    let y = ring.mul(ring.mul(u[t], x[a]), inv[u[s] as usize]);
                    if y != x[a] {
                        return y > x[a];
                    }
                }
                true
            })
        })
        .count();
    Ok(count as u64)
}

fn one_minus_qinv() -> RatFunc {
    RatFunc::from_poly(LaurentPoly::one() - LaurentPoly::q_pow(-1))
}

#[allow(non_snake_case)]
/// `A_Q = lim_α q^{-α b(Q)} A_{Q,1,α}` for 2-connected `Q`, via the sum
/// over strict chains `E_1 ⊊ … ⊊ E_s = Q_1` of `Π_{j<s} 1/(q^{b(Q)-b(E_j)} - 1)`.
pub fn asymptotic_A(q: &Quiver) -> Result<RatFunc> {
    if !q.is_two_connected() {
        return Err(Error::NotConvergent);
    }
    let table = subset_table(q)?;
    let full = (1usize << q.narrows()) - 1;
    let b = table[full].0 as i64;
    let weights: Vec<RatFunc> = (0..=b)
        .map(|k| RatFunc::new(LaurentPoly::one(), LaurentPoly::q_pow_minus_one(b - k)).unwrap_or_default())
        .collect();
    // g[E] = Σ over strict chains ending at E of the weights of all but the last member
    let mut g: Vec<RatFunc> = vec![RatFunc::zero(); full + 1];
    for e in 0..=full {
        let mut acc = RatFunc::one();
        let mut sub = e;
        while sub != 0 {
            sub = (sub - 1) & e;
            acc = acc + &g[sub] * &weights[table[sub].0 as usize];
        }
        g[e] = acc;
    }
    Ok(&one_minus_qinv().pow(b as u32) * &g[full])
}

/// `B_{μ_Q} = (1 - q^{-1})^{#Q_0 - 1} A_Q`.
#[allow(non_snake_case)]
pub fn asymptotic_B(q: &Quiver) -> Result<RatFunc> {
    Ok(&one_minus_qinv().pow(q.nvertices() as u32 - 1) * &asymptotic_A(q)?)
}

/// `q^{-α b(Q)} A_{Q,1,α}`, whose limit in α is [`asymptotic_A`].
pub fn normalized_kac(q: &Quiver, alpha: u32) -> Result<LaurentPoly> {
    Ok(wyss_kac(q, alpha)?.shift(-(alpha as i64) * q.betti() as i64))
}
