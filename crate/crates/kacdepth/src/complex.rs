//! Order complex of the proper part of the arrow-subset lattice, its
//! specialized fine Hilbert series, and a shelling-based positivity
//! certificate.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::algebra::{LaurentPoly, Rat, RatFunc};
use crate::error::{Error, Result};
use crate::quiver::Quiver;
use crate::toric::{asymptotic_A, subset_table};

/// Facets are maximal chains `{w_1} ⊊ {w_1,w_2} ⊊ … ⊊ {w_1..w_{m-1}}`,
/// each stored as its insertion word `w`, a permutation of the arrows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderComplex {
    narrows: usize,
    facets: Vec<Vec<usize>>,
}

/// A face is a chain of arrow subsets (bitmasks) of strictly increasing size.
pub type Face = Vec<u32>;

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..m {
        for rest in permutations(m - 1) {
            let mut w = vec![first];
            w.extend(rest.into_iter().map(|x| if x >= first { x + 1 } else { x }));
            out.push(w);
        }
    }
    out
}

/// Largest arrow count for which facets are listed explicitly.
pub const MAX_COMPLEX_ARROWS: usize = 8;

pub fn build_order_complex(q: &Quiver) -> Result<OrderComplex> {
    let m = q.narrows();
    if m > MAX_COMPLEX_ARROWS {
        return Err(Error::EnumerationTooLarge);
    }
    Ok(OrderComplex { narrows: m, facets: permutations(m) })
}

impl OrderComplex {
    pub fn narrows(&self) -> usize {
        self.narrows
    }

    /// `|Q_1| - 2`, or `-1` for the complex `{∅}`.
    pub fn dim(&self) -> i64 {
        self.narrows.max(1) as i64 - 2
    }

    pub fn facet_words(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn facet(&self, i: usize) -> Face {
        word_to_face(&self.facets[i])
    }

    /// Every face, the empty face included, each listed once.
    pub fn faces(&self) -> Vec<Face> {
        let m = self.narrows;
        let full = (1u32 << m) - 1;
        let mut out = vec![vec![]];
        let mut stack: Vec<Face> = (1..full).map(|e| vec![e]).collect();
        while let Some(face) = stack.pop() {
            let top = *face.last().unwrap();
            for e in (top + 1)..full {
                if e & top == top {
                    let mut next = face.clone();
                    next.push(e);
                    stack.push(next);
                }
            }
            out.push(face);
        }
        out.sort();
        out
    }
}

fn word_to_face(w: &[usize]) -> Face {
    let mut mask = 0u32;
    let mut face = Vec::new();
    for &a in w.iter().take(w.len().saturating_sub(1)) {
        mask |= 1 << a;
        face.push(mask);
    }
    face
}

/// Exponents `e_E = b(Q) - b(Q|_E)` for every arrow subset.
fn exponents(q: &Quiver) -> Result<Vec<u32>> {
    if !q.is_two_connected() {
        return Err(Error::SpecializationNotConvergent);
    }
    let table = subset_table(q)?;
    let b = table.last().unwrap().0;
    Ok(table.iter().map(|&(be, _)| b - be).collect())
}

fn x_pow(e: i64) -> LaurentPoly {
    LaurentPoly::q_pow(-e)
}

/// `x^e / (1 - x^e)` in `q`, with `x = q^{-1}`.
fn geometric_term(e: u32) -> RatFunc {
    RatFunc::new(x_pow(e as i64), LaurentPoly::one() - x_pow(e as i64)).expect("nonzero denominator")
}

/// `Σ_{F ∈ Δ} Π_{E ∈ F} u_E/(1 - u_E)` at `u_E = q^{-e_E}`, via a recursion
/// over chain tops.
pub fn hilbert_specialized(q: &Quiver) -> Result<RatFunc> {
    let e = exponents(q)?;
    let full = e.len() - 1;
    let weights: Vec<RatFunc> =
        (0..=e.iter().copied().max().unwrap_or(0)).map(|k| if k == 0 { RatFunc::zero() } else { geometric_term(k) }).collect();
    let mut f = vec![RatFunc::zero(); full + 1];
    let mut total = RatFunc::one();
    for s in 1..full {
        let mut acc = RatFunc::one();
        let mut sub = (s - 1) & s;
        while sub != 0 {
            acc = acc + &f[sub];
            sub = (sub - 1) & s;
        }
        f[s] = &acc * &weights[e[s] as usize];
        total = total + &f[s];
    }
    Ok(total)
}

/// The same sum taken face by face, grouping faces by exponent multiset.
pub fn hilbert_face_sum(q: &Quiver) -> Result<RatFunc> {
    let e = exponents(q)?;
    let delta = build_order_complex(q)?;
    let mut groups: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
    for face in delta.faces() {
        let mut key: Vec<u32> = face.iter().map(|&s| e[s as usize]).collect();
        key.sort_unstable();
        *groups.entry(key).or_default() += 1;
    }
    let mut total = RatFunc::zero();
    for (key, count) in groups {
        let term = key.iter().fold(RatFunc::one(), |acc, &k| &acc * &geometric_term(k));
        total = total + term.scale(&Rat::from_integer(count.into()));
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Thm41Report {
    pub asymptotic: String,
    pub hilbert_side: String,
    pub holds: bool,
}

/// Compares `A_Q` with `(1-q^{-1})^{b(Q)} / (1-q^{-b(Q)}) · Hilb`.
pub fn verify_thm41(q: &Quiver) -> Result<Thm41Report> {
    let hilb = hilbert_specialized(q)?;
    let b = q.betti() as i64;
    let pre = RatFunc::new((LaurentPoly::one() - x_pow(1)).pow(b as u32), LaurentPoly::one() - x_pow(b))?;
    let rhs = &pre * &hilb;
    let lhs = asymptotic_A(q)?;
    Ok(Thm41Report { asymptotic: lhs.to_string(), hilbert_side: rhs.to_string(), holds: lhs == rhs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShellingOrder {
    pub facets: Vec<Face>,
    pub restrictions: Vec<Face>,
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().filter(|x| b.contains(x)).copied().collect()
}

fn is_subset(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| b.contains(x))
}

/// Checks the shelling condition for `facets` in the given order: for each
/// `j < i` some `k < i` has `F_i ∩ F_k` of codimension one containing
/// `F_i ∩ F_j`.
pub fn is_shelling(facets: &[Face]) -> bool {
    let Some(first) = facets.first() else { return true };
    let d = first.len();
    if facets.iter().any(|f| f.len() != d) {
        return false;
    }
    for i in 1..facets.len() {
        let ridges: Vec<Vec<u32>> = (0..i)
            .map(|k| intersect(&facets[i], &facets[k]))
            .filter(|r| r.len() + 1 == d)
            .collect();
        for j in 0..i {
            let meet = intersect(&facets[i], &facets[j]);
            if !ridges.iter().any(|r| is_subset(&meet, r)) {
                return false;
            }
        }
    }
    true
}

/// `R(F_i)`: vertices `v` of `F_i` with `F_i ∖ v` inside an earlier facet.
pub fn restriction_faces(facets: &[Face]) -> Vec<Face> {
    facets
        .iter()
        .enumerate()
        .map(|(i, f)| {
            f.iter()
                .copied()
                .filter(|&v| {
                    let rest: Vec<u32> = f.iter().copied().filter(|&w| w != v).collect();
                    facets[..i].iter().any(|g| is_subset(&rest, g))
                })
                .collect()
        })
        .collect()
}

/// Facets in lexicographic order of insertion words, verified to be a
/// shelling.
pub fn lex_shelling(delta: &OrderComplex) -> Result<ShellingOrder> {
    let facets: Vec<Face> = (0..delta.num_facets()).map(|i| delta.facet(i)).collect();
    if !is_shelling(&facets) {
        return Err(Error::NotAShelling);
    }
    let restrictions = restriction_faces(&facets);
    Ok(ShellingOrder { facets, restrictions })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateTerm {
    pub restriction_exponents: Vec<u32>,
    pub facet_exponents: Vec<u32>,
}

/// `N(x) / (1 - x^L)^k` with `N` having nonnegative integer coefficients,
/// `x = q^{-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SingleDenominator {
    pub numerator_in_x: Vec<String>,
    pub denominator_exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityCertificate {
    pub terms: Vec<CertificateTerm>,
    pub total: String,
    pub matches_hilbert: bool,
    pub single_denominator: SingleDenominator,
    pub single_denominator_matches: bool,
}

impl CertificateTerm {
    pub fn value(&self) -> RatFunc {
        let num = x_pow(self.restriction_exponents.iter().map(|&e| e as i64).sum());
        let den = self.facet_exponents.iter().fold(LaurentPoly::one(), |acc, &e| acc * (LaurentPoly::one() - x_pow(e as i64)));
        RatFunc::new(num, den).expect("nonzero denominator")
    }
}

/// Shelling decomposition `Σ_i u^{R(F_i)} / Π_{E ∈ F_i}(1 - u_E)` of the
/// specialized Hilbert series, checked against the direct sum.
pub fn positivity_certificate(q: &Quiver) -> Result<PositivityCertificate> {
    let e = exponents(q)?;
    let delta = build_order_complex(q)?;
    let shelling = lex_shelling(&delta)?;
    let terms: Vec<CertificateTerm> = shelling
        .facets
        .iter()
        .zip(&shelling.restrictions)
        .map(|(f, r)| CertificateTerm {
            restriction_exponents: r.iter().map(|&s| e[s as usize]).collect(),
            facet_exponents: f.iter().map(|&s| e[s as usize]).collect(),
        })
        .collect();
    let total = terms.iter().fold(RatFunc::zero(), |acc, t| acc + t.value());
    let hilb = hilbert_specialized(q)?;

    // 1/(1-x^e) = (1 + x^e + … + x^{L-e}) / (1-x^L) with L = lcm of all exponents
    let l = terms
        .iter()
        .flat_map(|t| t.facet_exponents.iter())
        .fold(1u32, |acc, &x| acc.lcm(&x));
    let k = terms.first().map_or(0, |t| t.facet_exponents.len());
    let mut numerator = LaurentPoly::zero();
    for t in &terms {
        let mut part = LaurentPoly::monomial(Rat::from_integer(1.into()), t.restriction_exponents.iter().map(|&e| e as i64).sum());
        for &fe in &t.facet_exponents {
            let geo = LaurentPoly::from_terms((0..l / fe).map(|j| ((j * fe) as i64, Rat::from_integer(1.into()))));
            part = part * geo;
        }
        numerator = numerator + part;
    }
    let den = (0..k).fold(LaurentPoly::one(), |acc, _| acc * (LaurentPoly::one() - LaurentPoly::q_pow(l as i64)));
    let in_x = RatFunc::new(numerator.clone(), den)?;
    let in_q = in_x.substitute_inverse();
    let single_denominator = SingleDenominator {
        numerator_in_x: numerator.dense().1.iter().map(|c| c.to_string()).collect(),
        denominator_exponents: vec![l; k],
    };
    Ok(PositivityCertificate {
        matches_hilbert: total == hilb,
        total: total.to_string(),
        single_denominator_matches: in_q == hilb && numerator.has_nonnegative_coeffs(),
        single_denominator,
        terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rf(n: &str, d: &str) -> RatFunc {
        RatFunc::new(n.parse().unwrap(), d.parse().unwrap()).unwrap()
    }

    #[test]
    fn complex_shapes() {
        for (m, facets, dim) in [(1, 1, -1), (2, 2, 0), (3, 6, 1), (4, 24, 2)] {
            let d = build_order_complex(&Quiver::loops(m)).unwrap();
            assert_eq!(d.num_facets(), facets);
            assert_eq!(d.dim(), dim);
        }
        let d = build_order_complex(&Quiver::loops(1)).unwrap();
        assert_eq!(d.faces(), vec![Vec::<u32>::new()]);
        let d = build_order_complex(&Quiver::loops(2)).unwrap();
        assert_eq!(d.faces(), vec![vec![], vec![1], vec![2]]);
    }

    #[test]
    fn hilbert_examples() {
        let k2 = Quiver::kronecker(2);
        assert_eq!(hilbert_specialized(&k2).unwrap(), rf("q+1", "q-1"));
        assert_eq!(hilbert_face_sum(&k2).unwrap(), rf("q+1", "q-1"));
        // 6 vertices and 6 edges, all exponents 1: 1 + 6x/(1-x) + 6x^2/(1-x)^2
        let tri = Quiver::cycle(3);
        let want = rf("q^2+4q+1", "q^2-2q+1");
        assert_eq!(hilbert_specialized(&tri).unwrap(), want);
        assert_eq!(hilbert_face_sum(&tri).unwrap(), want);
        assert_eq!(hilbert_specialized(&Quiver::kronecker(1)), Err(Error::SpecializationNotConvergent));
    }

    #[test]
    fn thm41_examples() {
        for q in [Quiver::kronecker(2), Quiver::cycle(3), Quiver::loops(2), Quiver::loops(1)] {
            let r = verify_thm41(&q).unwrap();
            assert!(r.holds, "{r:?}");
        }
    }

    #[test]
    fn lex_order_shells() {
        for m in 1..=5 {
            let d = build_order_complex(&Quiver::loops(m)).unwrap();
            let s = lex_shelling(&d).unwrap();
            assert_eq!(s.facets.len(), d.num_facets());
            assert!(s.restrictions[0].is_empty());
        }
        // two disjoint edges are not shellable
        assert!(!is_shelling(&[vec![1, 3], vec![2, 6]]));
    }

    #[test]
    fn restriction_faces_partition_the_faces() {
        let d = build_order_complex(&Quiver::loops(4)).unwrap();
        let s = lex_shelling(&d).unwrap();
        let mut covered = Vec::new();
        for (f, r) in s.facets.iter().zip(&s.restrictions) {
            let free: Vec<u32> = f.iter().copied().filter(|v| !r.contains(v)).collect();
            for mask in 0..1u32 << free.len() {
                let mut g: Vec<u32> = r.clone();
                g.extend((0..free.len()).filter(|i| mask >> i & 1 == 1).map(|i| free[i]));
                g.sort_by_key(|x| x.count_ones());
                covered.push(g);
            }
        }
        covered.sort();
        assert_eq!(covered, d.faces());
    }

    #[test]
    fn certificate_examples() {
        let c = positivity_certificate(&Quiver::kronecker(2)).unwrap();
        assert_eq!(c.terms.len(), 2);
        assert!(c.terms[0].restriction_exponents.is_empty());
        assert_eq!(c.terms[1].restriction_exponents, vec![1]);
        assert!(c.matches_hilbert && c.single_denominator_matches);
        let c = positivity_certificate(&Quiver::cycle(3)).unwrap();
        assert_eq!(c.terms.len(), 6);
        assert!(c.matches_hilbert && c.single_denominator_matches);
    }
}
