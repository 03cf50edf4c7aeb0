//! Greedy computation of the Steiner k-eccentricity.
//!
//! A Steiner k-ecc tree of `v` always contains a Steiner (k−1)-ecc tree of
//! `v`, and all maximizing trees are equally far from the rest of the tree.
//! So `ecc_k(v)` is found by taking a longest path from `v`, contracting it
//! into `v`, and repeating `k − 1` times; the answer is the sum of the path
//! lengths. When the tree has fewer than `k` leaves the whole tree is forced
//! and the answer is `n − 1`.
//!
//! Each round is one depth-first search plus edge moves proportional to the
//! contracted path's incident edges, so a query costs `O(k·n)`.

use serde::Serialize;
use thiserror::Error;

use crate::oracle::check_query;
use crate::tree::{PathDescriptor, Tree, Vertex};
use crate::{QueryError, Rational};

const NONE: usize = usize::MAX;

/// Result of one [`steiner_k_ecc`] query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EccReport {
    pub vertex: Vertex,
    pub k: usize,
    pub ecc: usize,
    /// Lengths of the successive longest paths; empty when the leaf-count
    /// shortcut fired or `k = 1`. Non-increasing.
    pub segment_lengths: Vec<usize>,
    pub shortcut_used: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShrinkError {
    #[error("path does not start at the contraction root {root}")]
    WrongStart { root: Vertex },
    #[error("path is not a path of the working tree: {0}")]
    PathNotInTree(String),
}

/// Working copy of a tree that supports contracting root-anchored paths.
///
/// Contracted vertices are marked dead and keep their ids; the live part is
/// always a tree.
#[derive(Debug, Clone)]
pub struct ShrinkableTree {
    adjacency: Vec<Vec<Vertex>>,
    alive: Vec<bool>,
    live: usize,
    // DFS scratch, reused between rounds.
    parent: Vec<Vertex>,
    height: Vec<usize>,
    best: Vec<Vertex>,
    order: Vec<Vertex>,
    stack: Vec<Vertex>,
}

impl ShrinkableTree {
    pub fn new(tree: &Tree) -> Self {
        let n = tree.order();
        Self {
            adjacency: tree.vertices().map(|v| tree.neighbors(v).to_vec()).collect(),
            alive: vec![true; n],
            live: n,
            parent: vec![NONE; n],
            height: vec![0; n],
            best: vec![NONE; n],
            order: Vec::with_capacity(n),
            stack: Vec::new(),
        }
    }

    /// Number of vertices still present.
    pub fn order(&self) -> usize {
        self.live
    }

    pub fn is_alive(&self, v: Vertex) -> bool {
        self.alive.get(v).copied().unwrap_or(false)
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    /// Live edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        let mut edges: Vec<_> = (0..self.adjacency.len())
            .filter(|&u| self.alive[u])
            .flat_map(|u| {
                self.adjacency[u]
                    .iter()
                    .filter(move |&&w| u < w)
                    .map(move |&w| (u, w))
            })
            .collect();
        edges.sort_unstable();
        edges
    }

    /// A longest path starting at `v`. Among equally long continuations the
    /// child with the smallest id is taken.
    pub fn longest_path_from(&mut self, v: Vertex) -> PathDescriptor {
        debug_assert!(self.alive[v]);
        self.order.clear();
        self.stack.clear();
        self.stack.push(v);
        self.parent[v] = NONE;
        while let Some(u) = self.stack.pop() {
            self.order.push(u);
            self.height[u] = 0;
            self.best[u] = NONE;
            for &w in &self.adjacency[u] {
                if w != self.parent[u] {
                    self.parent[w] = u;
                    self.stack.push(w);
                }
            }
        }
        for &u in self.order.iter().rev() {
            let p = self.parent[u];
            if p == NONE {
                continue;
            }
            let h = self.height[u] + 1;
            if h > self.height[p] || (h == self.height[p] && u < self.best[p]) {
                self.height[p] = h;
                self.best[p] = u;
            }
        }
        let mut path = Vec::with_capacity(self.height[v] + 1);
        let mut w = v;
        while w != NONE {
            path.push(w);
            w = self.best[w];
        }
        PathDescriptor::from_vertices_unchecked(path)
    }

    /// Contracts `path` (which must start at `root`) into `root`: every edge
    /// from a path vertex to a vertex off the path is moved onto `root`.
    pub fn shrink_path(&mut self, root: Vertex, path: &PathDescriptor) -> Result<(), ShrinkError> {
        let p = path.vertices();
        if p[0] != root {
            return Err(ShrinkError::WrongStart { root });
        }
        if let Some(&dead) = p.iter().find(|&&w| !self.is_alive(w)) {
            return Err(ShrinkError::PathNotInTree(format!("vertex {dead} is not present")));
        }
        for pair in p.windows(2) {
            if !self.adjacency[pair[0]].contains(&pair[1]) {
                return Err(ShrinkError::PathNotInTree(format!(
                    "{} and {} are not adjacent",
                    pair[0], pair[1]
                )));
            }
        }
        if p.len() == 1 {
            return Ok(());
        }
        for i in 1..p.len() {
            let w = p[i];
            let prev = p[i - 1];
            let next = p.get(i + 1).copied().unwrap_or(NONE);
            for x in std::mem::take(&mut self.adjacency[w]) {
                if x == prev || x == next {
                    continue;
                }
                let slot = self.adjacency[x]
                    .iter()
                    .position(|&y| y == w)
                    .expect("adjacency is symmetric");
                self.adjacency[x][slot] = root;
                self.adjacency[root].push(x);
            }
            self.alive[w] = false;
        }
        let first = p[1];
        self.adjacency[root].retain(|&x| x != first);
        self.live -= p.len() - 1;
        Ok(())
    }
}

/// Steiner k-eccentricity of `v`.
pub fn steiner_k_ecc(tree: &Tree, v: Vertex, k: usize) -> Result<EccReport, QueryError> {
    check_query(tree, v, k)?;
    let mut report = EccReport {
        vertex: v,
        k,
        ecc: 0,
        segment_lengths: Vec::new(),
        shortcut_used: false,
    };
    if k == 1 {
        return Ok(report);
    }
    if tree.leaf_count() < k {
        report.ecc = tree.size();
        report.shortcut_used = true;
        return Ok(report);
    }
    report.segment_lengths = greedy_segments(tree, v, k - 1);
    report.ecc = report.segment_lengths.iter().sum();
    Ok(report)
}

fn greedy_segments(tree: &Tree, v: Vertex, rounds: usize) -> Vec<usize> {
    let mut work = ShrinkableTree::new(tree);
    let mut segments = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let path = work.longest_path_from(v);
        segments.push(path.length());
        work.shrink_path(v, &path)
            .expect("a longest path from v lies in the working tree");
    }
    segments
}

/// `ecc_k(v)` for every `k = 1..=n` (entry `k − 1`), from one greedy run.
///
/// The greedy rounds do not depend on `k`, so `ecc_k` is a prefix sum of the
/// same segment sequence up to `k = |L(T)|` and `n − 1` beyond it.
pub fn ecc_profile(tree: &Tree, v: Vertex) -> Result<Vec<usize>, QueryError> {
    check_query(tree, v, 1)?;
    let n = tree.order();
    let leaves = tree.leaf_count();
    let mut profile = Vec::with_capacity(n);
    profile.push(0);
    let rounds = leaves.min(n).saturating_sub(1);
    let mut acc = 0;
    for len in greedy_segments(tree, v, rounds) {
        acc += len;
        profile.push(acc);
    }
    profile.resize(n, tree.size());
    Ok(profile)
}

/// Average Steiner k-eccentricity over all vertices, exactly.
pub fn avg_steiner_k_ecc(tree: &Tree, k: usize) -> Result<Rational, QueryError> {
    check_query(tree, 0, k)?;
    let mut total = 0u64;
    for v in tree.vertices() {
        total += steiner_k_ecc(tree, v, k)?.ecc as u64;
    }
    Ok(Rational::new(total, tree.order() as u64))
}

/// Average Steiner k-eccentricity for every `k = 1..=n` (entry `k − 1`).
pub fn avg_profile(tree: &Tree) -> Vec<Rational> {
    let n = tree.order();
    let mut totals = vec![0u64; n];
    for v in tree.vertices() {
        let profile = ecc_profile(tree, v).expect("vertex is in range");
        for (t, e) in totals.iter_mut().zip(profile) {
            *t += e as u64;
        }
    }
    totals
        .into_iter()
        .map(|t| Rational::new(t, n as u64))
        .collect()
}

/// Decimal rendering with up to six places and no trailing zeros.
pub fn format_decimal(value: &Rational) -> String {
    let scaled = (*value.numer() as u128 * 1_000_000 + *value.denom() as u128 / 2)
        / *value.denom() as u128;
    let (whole, frac) = (scaled / 1_000_000, scaled % 1_000_000);
    if frac == 0 {
        return whole.to_string();
    }
    let digits = format!("{frac:06}");
    format!("{whole}.{}", digits.trim_end_matches('0'))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};
    use crate::tree::build_tree;

    fn fam(f: Family, n: usize) -> Tree {
        generate(&f, n, 0).unwrap()
    }

    fn spider321() -> Tree {
        fam(Family::Spider { legs: vec![3, 2, 1] }, 7)
    }

    #[test]
    fn longest_path_examples() {
        let mut w = ShrinkableTree::new(&fam(Family::Path, 4));
        let p = w.longest_path_from(0);
        assert_eq!(p.vertices(), &[0, 1, 2, 3]);
        assert_eq!(p.length(), 3);

        let mut w = ShrinkableTree::new(&fam(Family::Star, 5));
        assert_eq!(w.longest_path_from(0).vertices(), &[0, 1]);

        let mut w = ShrinkableTree::new(&spider321());
        assert_eq!(w.longest_path_from(0).vertices(), &[0, 1, 2, 3]);
    }

    #[test]
    fn shrink_examples() {
        let mut w = ShrinkableTree::new(&fam(Family::Path, 4));
        let p = w.longest_path_from(0);
        w.shrink_path(0, &p).unwrap();
        assert_eq!(w.order(), 1);
        assert!(w.edges().is_empty());

        // Contracting the 3-leg of spider(3,2,1) leaves 5 – 4 – 0 – 6.
        let mut w = ShrinkableTree::new(&spider321());
        let p = w.longest_path_from(0);
        w.shrink_path(0, &p).unwrap();
        assert_eq!(w.order(), 4);
        assert_eq!(w.edges(), vec![(0, 4), (0, 6), (4, 5)]);

        // Spine 0 – 1 – 2 with pendant 3 on 1: contracting the spine moves 3 onto 0.
        let cat = build_tree(&[(0, 1), (1, 2), (1, 3)]).unwrap();
        let mut w = ShrinkableTree::new(&cat);
        let spine = PathDescriptor::new(&cat, vec![0, 1, 2]).unwrap();
        w.shrink_path(0, &spine).unwrap();
        assert_eq!(w.edges(), vec![(0, 3)]);
        assert_eq!(w.order(), 2);
    }

    #[test]
    fn shrink_rejects_bad_paths() {
        let t = fam(Family::Path, 4);
        let mut w = ShrinkableTree::new(&t);
        let p = PathDescriptor::new(&t, vec![1, 2]).unwrap();
        assert_eq!(w.shrink_path(0, &p), Err(ShrinkError::WrongStart { root: 0 }));
        let whole = PathDescriptor::new(&t, vec![0, 1, 2, 3]).unwrap();
        w.shrink_path(0, &whole).unwrap();
        assert!(matches!(
            w.shrink_path(0, &whole),
            Err(ShrinkError::PathNotInTree(_))
        ));
    }

    #[test]
    fn ecc_examples() {
        let r = steiner_k_ecc(&fam(Family::Path, 6), 2, 3).unwrap();
        assert_eq!((r.ecc, r.shortcut_used), (5, true));
        assert!(r.segment_lengths.is_empty());

        let r = steiner_k_ecc(&fam(Family::Star, 5), 0, 3).unwrap();
        assert_eq!((r.ecc, r.shortcut_used), (2, false));
        assert_eq!(r.segment_lengths, vec![1, 1]);

        let r = steiner_k_ecc(&spider321(), 0, 3).unwrap();
        assert_eq!(r.ecc, 5);
        assert_eq!(r.segment_lengths, vec![3, 2]);

        let r = steiner_k_ecc(&Tree::singleton(), 0, 1).unwrap();
        assert_eq!(r.ecc, 0);
    }

    #[test]
    fn ecc_errors() {
        let t = fam(Family::Path, 4);
        assert_eq!(steiner_k_ecc(&t, 0, 5), Err(QueryError::KTooLarge { k: 5, n: 4 }));
        assert_eq!(steiner_k_ecc(&t, 0, 0), Err(QueryError::KTooSmall { k: 0, min: 1 }));
        assert_eq!(
            steiner_k_ecc(&t, 4, 2),
            Err(QueryError::VertexOutOfRange { vertex: 4, n: 4 })
        );
    }

    #[test]
    fn averages() {
        assert_eq!(
            avg_steiner_k_ecc(&fam(Family::Star, 5), 3).unwrap(),
            Rational::new(14, 5)
        );
        assert_eq!(
            avg_steiner_k_ecc(&fam(Family::Path, 6), 3).unwrap(),
            Rational::from_integer(5)
        );
        assert_eq!(
            avg_steiner_k_ecc(&fam(Family::Path, 5), 2).unwrap(),
            Rational::new(16, 5)
        );
    }

    #[test]
    fn profile_matches_single_queries() {
        let t = generate(&Family::RandomPruefer, 15, 3).unwrap();
        for v in t.vertices() {
            let profile = ecc_profile(&t, v).unwrap();
            for k in 1..=t.order() {
                assert_eq!(profile[k - 1], steiner_k_ecc(&t, v, k).unwrap().ecc);
            }
        }
        let avgs = avg_profile(&t);
        for k in 1..=t.order() {
            assert_eq!(avgs[k - 1], avg_steiner_k_ecc(&t, k).unwrap());
        }
    }

    #[test]
    fn decimals() {
        assert_eq!(format_decimal(&Rational::new(14, 5)), "2.8");
        assert_eq!(format_decimal(&Rational::from_integer(5)), "5");
        assert_eq!(format_decimal(&Rational::new(1, 3)), "0.333333");
        assert_eq!(format_decimal(&Rational::new(2, 3)), "0.666667");
    }
}
