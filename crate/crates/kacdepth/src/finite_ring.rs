//! Arithmetic over `O_α = F_p[t]/(t^α)` and the groups `GL(r, O_α)`.

use crate::algebra::LaurentPoly;
use crate::error::{Error, Result};

/// Default bound on the size of any exhaustive enumeration.
pub const DEFAULT_GUARD: u64 = 1 << 24;

pub fn is_prime(p: u32) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn check_prime(p: u32) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::Invalid(format!("{p} is not prime")))
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let (mut base, mut e, mut acc) = (a as u64 % p as u64, p as u64 - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

/// `base^exp`, or `None` on overflow.
pub fn checked_pow(base: u64, exp: u64) -> Option<u64> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

/// Fails with "enumeration too large" unless `p^exp <= guard`.
pub fn guard_power(p: u32, exp: u64, guard: u64) -> Result<u64> {
    match checked_pow(p as u64, exp) {
        Some(n) if n <= guard => Ok(n),
        _ => Err(Error::EnumerationTooLarge),
    }
}

/// Element of `F_p[t]/(t^α)`; `coeffs[k]` is the coefficient of `t^k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OElem {
    p: u32,
    alpha: u32,
    coeffs: Vec<u32>,
}

impl OElem {
    /// Reduces `coeffs` mod `p` and pads or truncates to length `alpha`.
    pub fn new(p: u32, alpha: u32, coeffs: &[u32]) -> Result<Self> {
        check_prime(p)?;
        if alpha == 0 {
            return Err(Error::Invalid("depth must be at least 1".into()));
        }
        let mut c: Vec<u32> = coeffs.iter().take(alpha as usize).map(|x| x % p).collect();
        c.resize(alpha as usize, 0);
        Ok(Self { p, alpha, coeffs: c })
    }

    pub fn zero(p: u32, alpha: u32) -> Self {
        Self { p, alpha, coeffs: vec![0; alpha as usize] }
    }

    pub fn one(p: u32, alpha: u32) -> Self {
        Self::constant(p, alpha, 1)
    }

    pub fn constant(p: u32, alpha: u32, c: i64) -> Self {
        let mut e = Self::zero(p, alpha);
        e.coeffs[0] = c.rem_euclid(p as i64) as u32;
        e
    }

    /// `c · t^k` (zero when `k >= alpha`).
    pub fn monomial(p: u32, alpha: u32, c: i64, k: u32) -> Self {
        let mut e = Self::zero(p, alpha);
        if k < alpha {
            e.coeffs[k as usize] = c.rem_euclid(p as i64) as u32;
        }
        e
    }

    /// Inverse of [`Self::index`].
    pub fn from_index(p: u32, alpha: u32, mut idx: u64) -> Self {
        let mut e = Self::zero(p, alpha);
        for c in e.coeffs.iter_mut() {
            *c = (idx % p as u64) as u32;
            idx /= p as u64;
        }
        e
    }

    /// Base-`p` encoding `Σ c_k p^k`.
    pub fn index(&self) -> u64 {
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p as u64 + c as u64)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Smallest `k` with a nonzero coefficient; `alpha` for zero.
    pub fn valuation(&self) -> u32 {
        self.coeffs.iter().position(|&c| c != 0).map_or(self.alpha, |k| k as u32)
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs[0] != 0
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.alpha != other.alpha {
            return Err(Error::DimensionMismatch(format!(
                "O_{} over F_{} vs O_{} over F_{}",
                self.alpha, self.p, other.alpha, other.p
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a + b) % self.p).collect();
        Ok(Self { coeffs, ..*self })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|&a| (self.p - a) % self.p).collect();
        Self { coeffs, ..*self }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.alpha as usize;
        let p = self.p as u64;
        let mut c = vec![0u64; n];
        for i in 0..n {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                c[i + j] = (c[i + j] + self.coeffs[i] as u64 * other.coeffs[j] as u64) % p;
            }
        }
        Ok(Self { coeffs: c.into_iter().map(|x| x as u32).collect(), ..*self })
    }

    /// Inverse of a unit, solving `u·w = 1` coefficient by coefficient.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_unit() {
            return Err(Error::NonUnit);
        }
        let n = self.alpha as usize;
        let p = self.p as u64;
        let c0inv = inv_mod(self.coeffs[0], self.p) as u64;
        let mut w = vec![0u64; n];
        w[0] = c0inv;
        for k in 1..n {
            let mut acc = 0u64;
            for j in 1..=k {
                acc = (acc + self.coeffs[j] as u64 * w[k - j]) % p;
            }
            w[k] = (p - acc) % p * c0inv % p;
        }
        Ok(Self { coeffs: w.into_iter().map(|x| x as u32).collect(), ..*self })
    }
}

/// Lookup tables for fast arithmetic on encoded elements of `O_α`.
#[derive(Clone, Debug)]
pub struct TruncRing {
    p: u32,
    alpha: u32,
    size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    valuation: Vec<u8>,
}

impl TruncRing {
    /// Largest ring for which tables are built.
    pub const MAX_SIZE: usize = 2048;

    pub fn new(p: u32, alpha: u32) -> Result<Self> {
        check_prime(p)?;
        if alpha == 0 {
            return Err(Error::Invalid("depth must be at least 1".into()));
        }
        let size = checked_pow(p as u64, alpha as u64)
            .filter(|&n| n as usize <= Self::MAX_SIZE)
            .ok_or(Error::EnumerationTooLarge)? as usize;
        let elems: Vec<OElem> = (0..size as u64).map(|i| OElem::from_index(p, alpha, i)).collect();
        let mut add = vec![0u16; size * size];
        let mut mul = vec![0u16; size * size];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate() {
                add[i * size + j] = a.add(b).unwrap().index() as u16;
                mul[i * size + j] = a.mul(b).unwrap().index() as u16;
            }
        }
        let neg = elems.iter().map(|a| a.neg().index() as u16).collect();
        let valuation = elems.iter().map(|a| a.valuation() as u8).collect();
        Ok(Self { p, alpha, size, add, mul, neg, valuation })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn alpha(&self) -> u32 {
        self.alpha
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn valuation(&self, a: u16) -> u32 {
        self.valuation[a as usize] as u32
    }

    #[inline]
    pub fn is_unit(&self, a: u16) -> bool {
        (a as u32) % self.p != 0
    }

    pub fn units(&self) -> Vec<u16> {
        (0..self.size as u16).filter(|&a| self.is_unit(a)).collect()
    }

    /// Encoding of `c · t^k`.
    pub fn encode(&self, c: i64, k: u32) -> u16 {
        OElem::monomial(self.p, self.alpha, c, k).index() as u16
    }

    pub fn elem(&self, a: u16) -> OElem {
        OElem::from_index(self.p, self.alpha, a as u64)
    }
}

/// Matrix over `O_α`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<OElem>,
}

impl OMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<OElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!("{} entries for {rows}x{cols}", entries.len())));
        }
        if let Some(first) = entries.first() {
            if entries.iter().any(|e| e.p != first.p || e.alpha != first.alpha) {
                return Err(Error::DimensionMismatch("entries over different rings".into()));
            }
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn zero(rows: usize, cols: usize, p: u32, alpha: u32) -> Self {
        Self { rows, cols, entries: vec![OElem::zero(p, alpha); rows * cols] }
    }

    pub fn identity(n: usize, p: u32, alpha: u32) -> Self {
        let mut m = Self::zero(n, n, p, alpha);
        for i in 0..n {
            m.entries[i * n + i] = OElem::one(p, alpha);
        }
        m
    }

    /// Matrix whose entries have the given encodings, row-major.
    pub fn from_indices(rows: usize, cols: usize, p: u32, alpha: u32, idx: &[u64]) -> Result<Self> {
        Self::new(rows, cols, idx.iter().map(|&i| OElem::from_index(p, alpha, i)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &OElem {
        &self.entries[i * self.cols + j]
    }

    fn ring(&self) -> Option<(u32, u32)> {
        self.entries.first().map(|e| (e.p, e.alpha))
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        match (self.ring(), other.ring()) {
            (Some(a), Some(b)) if a != b => Err(Error::DimensionMismatch("matrices over different rings".into())),
            _ => Ok(()),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch("shapes differ".into()));
        }
        self.same_ring(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a.add(b)).collect::<Result<_>>()?;
        Ok(Self { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&Self { rows: other.rows, cols: other.cols, entries: other.entries.iter().map(OElem::neg).collect() })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.same_ring(other)?;
        let Some((p, alpha)) = self.ring().or(other.ring()) else {
            return Ok(Self { rows: self.rows, cols: other.cols, entries: vec![] });
        };
        let mut out = Self::zero(self.rows, other.cols, p, alpha);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = OElem::zero(p, alpha);
                for k in 0..self.cols {
                    acc = acc.add(&self.get(i, k).mul(other.get(k, j))?)?;
                }
                out.entries[i * other.cols + j] = acc;
            }
        }
        Ok(out)
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Invertible over `O_α` iff the reduction mod `t` is invertible over `F_p`.
    pub fn is_invertible(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        let Some((p, _)) = self.ring() else {
            return true;
        };
        let mut rows: Vec<Vec<u32>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).coeffs[0]).collect()).collect();
        rank_mod_p(&mut rows, p) == self.rows
    }
}

/// Rank over `F_p` by Gaussian elimination (destroys `rows`).
pub fn rank_mod_p(rows: &mut [Vec<u32>], p: u32) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let p64 = p as u64;
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, piv);
        let inv = inv_mod(rows[rank][col], p) as u64;
        for x in rows[rank].iter_mut() {
            *x = (*x as u64 * inv % p64) as u32;
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col] == 0 {
                continue;
            }
            let f = row[col] as u64;
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = ((*x as u64 + p64 * p64 - f * y as u64) % p64) as u32;
            }
        }
        rank += 1;
    }
    rank
}

/// All of `GL(r, O_α)`, in increasing order of the entry encodings.
pub fn enumerate_gl(r: usize, p: u32, alpha: u32, guard: u64) -> Result<impl Iterator<Item = OMatrix>> {
    check_prime(p)?;
    let ring_size = checked_pow(p as u64, alpha as u64).ok_or(Error::EnumerationTooLarge)?;
    let total = guard_power(p, alpha as u64 * (r * r) as u64, guard)?;
    Ok((0..total).filter_map(move |mut n| {
        let idx: Vec<u64> = (0..r * r)
            .map(|_| {
                let d = n % ring_size;
                n /= ring_size;
                d
            })
            .collect();
        let m = OMatrix::from_indices(r, r, p, alpha, &idx).unwrap();
        m.is_invertible().then_some(m)
    }))
}

/// `Π_i q^{α r_i²} Π_{k=1}^{r_i} (1 - q^{-k})`, the order of `GL(r, O_α)` at `q = p`.
pub fn group_order_gl(r: &[u32], alpha: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one();
    for &ri in r {
        acc = acc * LaurentPoly::q_pow(alpha as i64 * (ri * ri) as i64);
        for k in 1..=ri as i64 {
            acc = acc * (LaurentPoly::one() - LaurentPoly::q_pow(-k));
        }
    }
    acc
}

/// `F_p`-dimension of the centralizer of `γ` in `M_r(O_α)`.
pub fn centralizer_dim(gamma: &OMatrix) -> Result<usize> {
    let r = gamma.rows();
    if r != gamma.cols() {
        return Err(Error::DimensionMismatch("centralizer of a non-square matrix".into()));
    }
    let Some((p, alpha)) = gamma.ring() else {
        return Ok(0);
    };
    let a = alpha as usize;
    let n = r * r * a;
    let mut images = Vec::with_capacity(n);
    for i in 0..r {
        for j in 0..r {
            for k in 0..a {
                // γ E_ij t^k - E_ij t^k γ
                let mut img = vec![0u32; n];
                let mut put = |u: usize, v: usize, e: &OElem, sign: bool| {
                    for (l, &c) in e.coeffs.iter().enumerate() {
                        if l + k < a && c != 0 {
                            let slot = &mut img[(u * r + v) * a + l + k];
                            *slot = if sign { (*slot + c) % p } else { (*slot + p - c) % p };
                        }
                    }
                };
                for u in 0..r {
                    put(u, j, gamma.get(u, i), true);
                }
                for v in 0..r {
                    put(i, v, gamma.get(j, v), false);
                }
                images.push(img);
            }
        }
    }
    Ok(n - rank_mod_p(&mut images, p))
}
