//! Quivers as ordered multigraphs with loops.
//!
//! The arrow order is the list order. Restriction and deletion keep it;
//! contraction keeps the relative order of the surviving arrows.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest vertex count accepted from untrusted JSON.
pub const MAX_DECODE_VERTICES: usize = 1 << 12;
/// Largest arrow count accepted from untrusted JSON.
pub const MAX_DECODE_ARROWS: usize = 1 << 14;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QuiverRepr", into = "QuiverRepr")]
pub struct Quiver {
    nvertices: usize,
    arrows: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverRepr {
    vertices: usize,
    arrows: Vec<(usize, usize)>,
}

impl TryFrom<QuiverRepr> for Quiver {
    type Error = Error;
    fn try_from(r: QuiverRepr) -> Result<Self> {
        if r.vertices > MAX_DECODE_VERTICES || r.arrows.len() > MAX_DECODE_ARROWS {
            return Err(Error::Invalid("quiver too large".into()));
        }
        Quiver::new(r.vertices, r.arrows)
    }
}

impl From<Quiver> for QuiverRepr {
    fn from(q: Quiver) -> Self {
        QuiverRepr { vertices: q.nvertices, arrows: q.arrows }
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false if already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

impl Quiver {
    pub fn new(nvertices: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if let Some((i, _)) = arrows.iter().enumerate().find(|(_, (s, t))| *s >= nvertices || *t >= nvertices) {
            return Err(Error::OutOfRange(format!("arrow {i} has an endpoint outside 0..{nvertices}")));
        }
        Ok(Self { nvertices, arrows })
    }

    /// One vertex with `g` loops.
    pub fn loops(g: usize) -> Self {
        Self { nvertices: 1, arrows: vec![(0, 0); g] }
    }

    /// Two vertices with `m` parallel arrows `0 -> 1`.
    pub fn kronecker(m: usize) -> Self {
        Self { nvertices: 2, arrows: vec![(0, 1); m] }
    }

    /// Oriented cycle on `n` vertices.
    pub fn cycle(n: usize) -> Self {
        Self { nvertices: n, arrows: (0..n).map(|i| (i, (i + 1) % n)).collect() }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("quiver serialization")
    }

    pub fn nvertices(&self) -> usize {
        self.nvertices
    }

    pub fn narrows(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn arrow(&self, a: usize) -> (usize, usize) {
        self.arrows[a]
    }

    pub fn is_loop(&self, a: usize) -> bool {
        self.arrows[a].0 == self.arrows[a].1
    }

    pub fn num_loops(&self) -> usize {
        (0..self.narrows()).filter(|&a| self.is_loop(a)).count()
    }

    fn check_arrow(&self, a: usize) -> Result<()> {
        if a >= self.arrows.len() {
            return Err(Error::OutOfRange(format!("arrow {a} of {}", self.arrows.len())));
        }
        Ok(())
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.nvertices);
        for &(s, t) in &self.arrows {
            uf.union(s, t);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..self.nvertices {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        groups.into_values().collect()
    }

    pub fn num_components(&self) -> usize {
        let mut uf = UnionFind::new(self.nvertices);
        let merges = self.arrows.iter().filter(|&&(s, t)| uf.union(s, t)).count();
        self.nvertices - merges
    }

    pub fn is_connected(&self) -> bool {
        self.num_components() == 1
    }

    /// `C - V + E`.
    pub fn betti(&self) -> usize {
        self.num_components() + self.arrows.len() - self.nvertices
    }

    /// Connected, with a cycle, and no arrow is a bridge.
    ///
    /// The arrowless one-vertex quiver is excluded: its Betti number is 0.
    pub fn is_two_connected(&self) -> bool {
        if !self.is_connected() || self.betti() == 0 {
            return false;
        }
        (0..self.narrows()).all(|a| self.is_loop(a) || self.without_arrow(a).is_connected())
    }

    pub fn euler_form(&self, d: &[i64], e: &[i64]) -> Result<i64> {
        if d.len() != self.nvertices || e.len() != self.nvertices {
            return Err(Error::DimensionMismatch(format!(
                "vectors of length {}, {} for {} vertices",
                d.len(),
                e.len(),
                self.nvertices
            )));
        }
        let diag: i64 = d.iter().zip(e).map(|(x, y)| x * y).sum();
        let off: i64 = self.arrows.iter().map(|&(s, t)| d[s] * e[t]).sum();
        Ok(diag - off)
    }

    /// Contracts a non-loop arrow. Returns the new quiver and the map from
    /// old vertices to new ones; the merged vertex takes the smaller label.
    pub fn contract_arrow(&self, a: usize) -> Result<(Quiver, Vec<usize>)> {
        self.check_arrow(a)?;
        let (s, t) = self.arrows[a];
        if s == t {
            return Err(Error::ContractLoop);
        }
        let (keep, gone) = (s.min(t), s.max(t));
        let relabel: Vec<usize> = (0..self.nvertices)
            .map(|v| if v == gone { keep } else if v > gone { v - 1 } else { v })
            .collect();
        let arrows = self
            .arrows
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != a)
            .map(|(_, &(x, y))| (relabel[x], relabel[y]))
            .collect();
        Ok((Quiver { nvertices: self.nvertices - 1, arrows }, relabel))
    }

    fn without_arrow(&self, a: usize) -> Quiver {
        let mut arrows = self.arrows.clone();
        arrows.remove(a);
        Quiver { nvertices: self.nvertices, arrows }
    }

    pub fn delete_arrow(&self, a: usize) -> Result<Quiver> {
        self.check_arrow(a)?;
        Ok(self.without_arrow(a))
    }

    /// Full subquiver on the vertex set `verts` (renumbered in increasing order).
    pub fn restrict_vertices(&self, verts: &[usize]) -> Result<Quiver> {
        let mut index = vec![usize::MAX; self.nvertices];
        let mut sorted = verts.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (k, &v) in sorted.iter().enumerate() {
            if v >= self.nvertices {
                return Err(Error::OutOfRange(format!("vertex {v} of {}", self.nvertices)));
            }
            index[v] = k;
        }
        let arrows = self
            .arrows
            .iter()
            .filter(|&&(s, t)| index[s] != usize::MAX && index[t] != usize::MAX)
            .map(|&(s, t)| (index[s], index[t]))
            .collect();
        Ok(Quiver { nvertices: sorted.len(), arrows })
    }

    /// Keeps every vertex and the arrows listed in `subset`, in arrow order.
    pub fn restrict_arrows(&self, subset: &[usize]) -> Result<Quiver> {
        let mut keep = vec![false; self.arrows.len()];
        for &a in subset {
            self.check_arrow(a)?;
            keep[a] = true;
        }
        let arrows = self.arrows.iter().zip(&keep).filter(|(_, &k)| k).map(|(&x, _)| x).collect();
        Ok(Quiver { nvertices: self.nvertices, arrows })
    }

    /// The same quiver with arrows listed as `perm[0], perm[1], ...`.
    pub fn permute_arrows(&self, perm: &[usize]) -> Result<Quiver> {
        let mut seen = vec![false; self.arrows.len()];
        if perm.len() != self.arrows.len() {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        for &a in perm {
            self.check_arrow(a)?;
            if std::mem::replace(&mut seen[a], true) {
                return Err(Error::Invalid("not a permutation".into()));
            }
        }
        Ok(Quiver { nvertices: self.nvertices, arrows: perm.iter().map(|&a| self.arrows[a]).collect() })
    }

    /// Reverses arrow `a`.
    pub fn reverse_arrow(&self, a: usize) -> Result<Quiver> {
        self.check_arrow(a)?;
        let mut q = self.clone();
        let (s, t) = q.arrows[a];
        q.arrows[a] = (t, s);
        Ok(q)
    }

    /// Spanning trees as sorted arrow-index lists, in lexicographic order.
    pub fn spanning_trees(&self) -> Result<Vec<Vec<usize>>> {
        if !self.is_connected() {
            return Err(Error::NoSpanningTree);
        }
        let candidates: Vec<usize> = (0..self.narrows()).filter(|&a| !self.is_loop(a)).collect();
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.grow_trees(&candidates, 0, &mut chosen, &mut out);
        Ok(out)
    }

    fn grow_trees(&self, cand: &[usize], from: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let need = self.nvertices - 1;
        if chosen.len() == need {
            out.push(chosen.clone());
            return;
        }
        for i in from..cand.len() {
            if cand.len() - i < need - chosen.len() {
                break;
            }
            chosen.push(cand[i]);
            if self.is_forest(chosen) {
                self.grow_trees(cand, i + 1, chosen, out);
            }
            chosen.pop();
        }
    }

    fn is_forest(&self, subset: &[usize]) -> bool {
        let mut uf = UnionFind::new(self.nvertices);
        subset.iter().all(|&a| uf.union(self.arrows[a].0, self.arrows[a].1))
    }

    /// True when `subset` is a spanning tree.
    pub fn is_spanning_tree(&self, subset: &[usize]) -> bool {
        subset.len() + 1 == self.nvertices
            && subset.iter().all(|&a| a < self.narrows() && !self.is_loop(a))
            && self.is_forest(subset)
    }

    /// Arrows of the unique path in the tree joining the endpoints of `a`, sorted.
    pub fn tree_path(&self, tree: &[usize], a: usize) -> Result<Vec<usize>> {
        self.check_arrow(a)?;
        let (s, t) = self.arrows[a];
        if s == t {
            return Err(Error::Invalid(format!("arrow {a} is a loop")));
        }
        if tree.contains(&a) {
            return Err(Error::Invalid(format!("arrow {a} lies in the tree")));
        }
        let mut adj = vec![Vec::new(); self.nvertices];
        for &b in tree {
            let (x, y) = self.arrows[b];
            adj[x].push((y, b));
            adj[y].push((x, b));
        }
        let mut via = vec![None; self.nvertices];
        let mut seen = vec![false; self.nvertices];
        let mut queue = VecDeque::from([s]);
        seen[s] = true;
        while let Some(v) = queue.pop_front() {
            for &(w, b) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    via[w] = Some((v, b));
                    queue.push_back(w);
                }
            }
        }
        if !seen[t] {
            return Err(Error::Invalid("tree does not span the arrow's endpoints".into()));
        }
        let mut path = Vec::new();
        let mut v = t;
        while let Some((u, b)) = via[v] {
            path.push(b);
            v = u;
        }
        path.sort_unstable();
        Ok(path)
    }
}

/// Entrywise sum of a vertex vector along a vertex relabeling.
pub fn pushforward(v: &[i64], relabel: &[usize], n: usize) -> Vec<i64> {
    let mut out = vec![0; n];
    for (i, &x) in v.iter().enumerate() {
        out[relabel[i]] += x;
    }
    out
}

/// A spanning tree with a valuation on each tree arrow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValuedTree {
    arrows: Vec<usize>,
    valuations: Vec<u32>,
}

impl ValuedTree {
    /// Validates that `pairs` (arrow, valuation) form a spanning tree of `q`
    /// with valuations below `alpha`.
    pub fn new(q: &Quiver, alpha: u32, pairs: impl IntoIterator<Item = (usize, u32)>) -> Result<Self> {
        let map: BTreeMap<usize, u32> = pairs.into_iter().collect();
        let arrows: Vec<usize> = map.keys().copied().collect();
        if !q.is_spanning_tree(&arrows) {
            return Err(Error::Invalid(format!("{arrows:?} is not a spanning tree")));
        }
        if map.values().any(|&v| v >= alpha) {
            return Err(Error::Invalid(format!("valuation outside 0..{alpha}")));
        }
        Ok(Self { arrows, valuations: map.into_values().collect() })
    }

    pub(crate) fn from_parts(arrows: Vec<usize>, valuations: Vec<u32>) -> Self {
        Self { arrows, valuations }
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn valuations(&self) -> &[u32] {
        &self.valuations
    }

    pub fn valuation(&self, a: usize) -> Option<u32> {
        self.arrows.binary_search(&a).ok().map(|i| self.valuations[i])
    }

    pub fn contains(&self, a: usize) -> bool {
        self.arrows.binary_search(&a).is_ok()
    }
}

/// Path data for a non-tree, non-loop arrow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathData {
    /// Tree arrows on the path joining the endpoints, sorted.
    pub path: Vec<usize>,
    /// Largest valuation along the path.
    pub max_valuation: u32,
    /// Smallest path arrow attaining `max_valuation`.
    pub critical: usize,
}

pub fn tree_path_data(q: &Quiver, tree: &ValuedTree, a: usize) -> Result<PathData> {
    let path = q.tree_path(tree.arrows(), a)?;
    Ok(path_data_from(path, tree))
}

pub(crate) fn path_data_from(path: Vec<usize>, tree: &ValuedTree) -> PathData {
    let max_valuation = path.iter().map(|&b| tree.valuation(b).unwrap()).max().unwrap();
    let critical = *path.iter().find(|&&b| tree.valuation(b) == Some(max_valuation)).unwrap();
    PathData { path, max_valuation, critical }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Quiver {
        Quiver::cycle(3)
    }

    #[test]
    fn betti_examples() {
        assert_eq!(Quiver::loops(3).betti(), 3);
        assert_eq!(Quiver::kronecker(2).betti(), 1);
        assert_eq!(triangle().betti(), 1);
    }

    #[test]
    fn components_examples() {
        assert_eq!(Quiver::new(2, vec![]).unwrap().components(), vec![vec![0], vec![1]]);
        assert_eq!(triangle().components().len(), 1);
        let q = Quiver::new(4, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(q.components(), vec![vec![0, 1, 2], vec![3]]);
    }

    #[test]
    fn two_connected_examples() {
        assert!(!Quiver::kronecker(1).is_two_connected());
        assert!(Quiver::kronecker(2).is_two_connected());
        assert!(triangle().is_two_connected());
        assert!(Quiver::loops(1).is_two_connected());
        assert!(!Quiver::loops(0).is_two_connected());
        let lollipop = Quiver::new(2, vec![(0, 0), (0, 1)]).unwrap();
        assert!(!lollipop.is_two_connected());
    }

    #[test]
    fn euler_form_examples() {
        assert_eq!(Quiver::loops(4).euler_form(&[1], &[1]).unwrap(), -3);
        assert_eq!(Quiver::kronecker(1).euler_form(&[1, 1], &[1, 1]).unwrap(), 1);
        assert_eq!(triangle().euler_form(&[0, 0, 0], &[5, 1, 2]).unwrap(), 0);
        assert!(triangle().euler_form(&[1], &[1]).is_err());
    }

    #[test]
    fn contraction_examples() {
        let (q, relabel) = triangle().contract_arrow(0).unwrap();
        assert_eq!(q.nvertices(), 2);
        assert_eq!(q.narrows(), 2);
        assert_eq!(q.betti(), 1);
        assert_eq!(relabel, vec![0, 0, 1]);
        let (p, relabel) = Quiver::kronecker(1).contract_arrow(0).unwrap();
        assert_eq!((p.nvertices(), p.narrows()), (1, 0));
        assert_eq!(pushforward(&[1, -1], &relabel, 1), vec![0]);
        assert_eq!(Quiver::loops(1).contract_arrow(0), Err(Error::ContractLoop));
    }

    #[test]
    fn restriction_examples() {
        let q = triangle().restrict_vertices(&[0, 1]).unwrap();
        assert_eq!((q.nvertices(), q.narrows()), (2, 1));
        assert!(!Quiver::kronecker(2).delete_arrow(0).unwrap().is_two_connected());
        let e = triangle().restrict_arrows(&[]).unwrap();
        assert_eq!((e.nvertices(), e.betti()), (3, 0));
        assert!(triangle().restrict_vertices(&[7]).is_err());
        assert!(triangle().delete_arrow(3).is_err());
    }

    #[test]
    fn spanning_tree_examples() {
        assert_eq!(Quiver::kronecker(2).spanning_trees().unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(triangle().spanning_trees().unwrap().len(), 3);
        assert_eq!(Quiver::loops(2).spanning_trees().unwrap(), vec![Vec::<usize>::new()]);
        assert_eq!(Quiver::new(2, vec![]).unwrap().spanning_trees(), Err(Error::NoSpanningTree));
    }

    #[test]
    fn path_data_examples() {
        let k = Quiver::kronecker(2);
        let t = ValuedTree::new(&k, 1, [(0, 0)]).unwrap();
        assert_eq!(tree_path_data(&k, &t, 1).unwrap(), PathData { path: vec![0], max_valuation: 0, critical: 0 });
        let tri = triangle();
        let t = ValuedTree::new(&tri, 2, [(0, 1), (1, 0)]).unwrap();
        let d = tree_path_data(&tri, &t, 2).unwrap();
        assert_eq!((d.max_valuation, d.critical), (1, 0));
        let t = ValuedTree::new(&tri, 2, [(0, 1), (1, 1)]).unwrap();
        assert_eq!(tree_path_data(&tri, &t, 2).unwrap().critical, 0);
        assert!(tree_path_data(&tri, &t, 0).is_err());
    }

    #[test]
    fn json_contract() {
        let q = Quiver::from_json_str(r#"{"vertices": 2, "arrows": [[0,1],[1,0]]}"#).unwrap();
        assert_eq!(q.arrows(), &[(0, 1), (1, 0)]);
        assert_eq!(q.to_json_string(), r#"{"vertices":2,"arrows":[[0,1],[1,0]]}"#);
        assert!(Quiver::from_json_str(r#"{"vertices": 1, "arrows": [[0,1]]}"#).is_err());
        assert!(Quiver::from_json_str(r#"{"vertices": 1}"#).is_err());
    }
}
