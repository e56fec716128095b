use std::collections::BTreeSet;

use crate::quiver::Quiver;

/// Canonical edge multiset: the lexicographically least sorted edge list over all relabelings.
fn canonical(edges: &[(usize, usize)], perms: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let mut best: Option<Vec<(usize, usize)>> = None;
    for p in perms {
        let mut e: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(s, t)| {
                let (a, b) = (p[s], p[t]);
                (a.min(b), a.max(b))
            })
            .collect();
        e.sort_unstable();
        if best.as_ref().is_none_or(|b| e < *b) {
            best = Some(e);
        }
    }
    best.unwrap_or_default()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn multisets(pool: &[(usize, usize)], k: usize, start: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..pool.len() {
        cur.push(pool[i]);
        multisets(pool, k, i, cur, out);
        cur.pop();
    }
}

/// Connected quivers on exactly `n` vertices with exactly `m` arrows, one per
/// isomorphism class of the underlying multigraph, oriented with `s <= t`.
pub fn connected_quivers(n: usize, m: usize) -> Vec<Quiver> {
    if n == 0 || m + 1 < n {
        return Vec::new();
    }
    let pool: Vec<(usize, usize)> = (0..n).flat_map(|s| (s..n).map(move |t| (s, t))).collect();
    let perms = permutations(n);
    let mut all = Vec::new();
    multisets(&pool, m, 0, &mut Vec::new(), &mut all);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for edges in all {
        let q = Quiver::new(n, edges.clone()).expect("edges in range");
        if !q.is_connected() {
            continue;
        }
        let c = canonical(&edges, &perms);
        if seen.insert(c.clone()) {
            out.push(Quiver::new(n, c).expect("edges in range"));
        }
    }
    out
}

/// All connected quivers with `1..=max_vertices` vertices and `0..=max_arrows` arrows.
pub fn catalog(max_vertices: usize, max_arrows: usize) -> Vec<Quiver> {
    let mut out = Vec::new();
    for n in 1..=max_vertices {
        for m in 0..=max_arrows {
            out.extend(connected_quivers(n, m));
        }
    }
    out
}
