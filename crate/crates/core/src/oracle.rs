//! Ground truth by exhaustion: Steiner distance of a vertex set, brute-force
//! Steiner k-eccentricity, enumeration of every maximizing set, and empirical
//! checkers for the structural properties the greedy algorithm relies on.
//!
//! Everything here is exponential in `k` and meant for small trees. The fast
//! path in [`crate::kecc`] is checked against it.

use std::collections::VecDeque;

use thiserror::Error;

use crate::tree::{Tree, TreeError, Vertex, VertexSet};
use crate::QueryError;

/// Work budget used when none is given: refuse searches whose estimated
/// cost `C(candidates, k−1) · n` exceeds this many elementary steps.
pub const DEFAULT_WORK_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Query(#[from] QueryError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error("search would take about {estimate} steps, over the budget of {budget}")]
    BudgetExceeded { estimate: u128, budget: u64 },
    #[error("leaf-only search needs 2 <= k <= |L(T)| (k = {k}, {leaves} leaves)")]
    LeafRestrictionInapplicable { k: usize, leaves: usize },
}

/// The minimal subtree spanning a vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerSubtree {
    /// Edge count, i.e. the Steiner distance of the set.
    pub size: usize,
    /// Edges as `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(Vertex, Vertex)>,
}

/// Brute-force Steiner k-eccentricity of one vertex with its witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerResult {
    pub vertex: Vertex,
    pub k: usize,
    pub value: usize,
    /// Lexicographically smallest maximizing k-set; always contains `vertex`.
    pub witness_set: VertexSet,
    /// Edges of the minimal Steiner tree of `witness_set`.
    pub witness_edges: Vec<(Vertex, Vertex)>,
}

/// Which sets the brute-force search ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchMode {
    /// Leaves only when `2 <= k <= |L(T)|`, all vertices otherwise.
    #[default]
    Auto,
    /// Every k-subset containing the query vertex.
    Full,
    /// Only sets whose other members are leaves. Errors outside `2 <= k <= |L(T)|`.
    LeavesOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleOptions {
    pub mode: SearchMode,
    pub budget: Option<u64>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            mode: SearchMode::Auto,
            budget: None,
        }
    }
}

/// Steiner distance of `set` and the edges of its minimal spanning subtree.
///
/// Repeatedly strips leaves of the current subtree that are not in `set`.
pub fn steiner_distance(tree: &Tree, set: &VertexSet) -> Result<SteinerSubtree, OracleError> {
    for v in set.iter() {
        tree.check_vertex(v)?;
    }
    if set.len() <= 1 {
        return Ok(SteinerSubtree {
            size: 0,
            edges: Vec::new(),
        });
    }
    let n = tree.order();
    let mut keep = vec![false; n];
    for v in set.iter() {
        keep[v] = true;
    }
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = tree.vertices().map(|v| tree.degree(v)).collect();
    let mut queue: VecDeque<Vertex> = tree
        .vertices()
        .filter(|&v| degree[v] <= 1 && !keep[v])
        .collect();
    while let Some(u) = queue.pop_front() {
        alive[u] = false;
        for &w in tree.neighbors(u) {
            if alive[w] {
                degree[w] -= 1;
                if degree[w] == 1 && !keep[w] {
                    queue.push_back(w);
                }
            }
        }
    }
    let edges: Vec<_> = tree
        .edges()
        .into_iter()
        .filter(|&(u, v)| alive[u] && alive[v])
        .collect();
    Ok(SteinerSubtree {
        size: edges.len(),
        edges,
    })
}

pub(crate) fn check_query(tree: &Tree, v: Vertex, k: usize) -> Result<(), QueryError> {
    let n = tree.order();
    if v >= n {
        return Err(QueryError::VertexOutOfRange { vertex: v, n });
    }
    if k < 1 {
        return Err(QueryError::KTooSmall { k, min: 1 });
    }
    if k > n {
        return Err(QueryError::KTooLarge { k, n });
    }
    Ok(())
}

/// `C(n, r)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(x) => x / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn candidates(
    tree: &Tree,
    v: Vertex,
    k: usize,
    mode: SearchMode,
) -> Result<Vec<Vertex>, OracleError> {
    let leaves = tree.leaf_count();
    let leaf_regime = k >= 2 && k <= leaves;
    let leaves_only = match mode {
        SearchMode::Auto => leaf_regime,
        SearchMode::Full => false,
        SearchMode::LeavesOnly if leaf_regime => true,
        SearchMode::LeavesOnly => {
            return Err(OracleError::LeafRestrictionInapplicable { k, leaves })
        }
    };
    Ok(tree
        .vertices()
        .filter(|&w| w != v && (!leaves_only || tree.is_leaf(w)))
        .collect())
}

/// Estimated elementary steps of a brute-force search.
pub fn estimate_work(
    tree: &Tree,
    v: Vertex,
    k: usize,
    mode: SearchMode,
) -> Result<u128, OracleError> {
    check_query(tree, v, k)?;
    let pool = candidates(tree, v, k, mode)?.len();
    Ok(binomial(pool, k - 1).saturating_mul(tree.order() as u128))
}

/// Brute-force Steiner k-eccentricity with default options (leaf pruning
/// where it applies, no budget).
pub fn ecc_k_bruteforce(tree: &Tree, v: Vertex, k: usize) -> Result<SteinerResult, OracleError> {
    ecc_k_bruteforce_with(tree, v, k, &OracleOptions::default())
}

pub fn ecc_k_bruteforce_with(
    tree: &Tree,
    v: Vertex,
    k: usize,
    options: &OracleOptions,
) -> Result<SteinerResult, OracleError> {
    check_query(tree, v, k)?;
    let pool = candidates(tree, v, k, options.mode)?;
    if let Some(budget) = options.budget {
        let estimate = binomial(pool.len(), k - 1).saturating_mul(tree.order() as u128);
        if estimate > budget as u128 {
            return Err(OracleError::BudgetExceeded { estimate, budget });
        }
    }
    let mut spanner = Spanner::new(tree);
    let mut best: Option<(usize, Vec<Vertex>)> = None;
    // Combinations are visited in lexicographic order and inserting `v`
    // preserves that order, so the first maximizer seen is the smallest set.
    for_each_set(&pool, v, k, |set| {
        let d = spanner.distance(set);
        if best.as_ref().is_none_or(|(b, _)| d > *b) {
            best = Some((d, set.to_vec()));
        }
    });
    let (value, witness) = best.expect("at least one k-set contains v");
    let witness_set = VertexSet::from_sorted(witness);
    let witness_edges = steiner_distance(tree, &witness_set)?.edges;
    debug_assert_eq!(witness_edges.len(), value);
    Ok(SteinerResult {
        vertex: v,
        k,
        value,
        witness_set,
        witness_edges,
    })
}

/// Every k-set containing `v` whose Steiner distance equals `ecc_k(v)`, in
/// lexicographic order. Always a full search.
pub fn enumerate_kecc_sets(tree: &Tree, v: Vertex, k: usize) -> Result<Vec<VertexSet>, OracleError> {
    check_query(tree, v, k)?;
    Ok(maximizers(tree, v, k)
        .1
        .into_iter()
        .map(|(set, _)| VertexSet::from_sorted(set))
        .collect())
}

/// For every Steiner k-ecc `v`-tree, checks that it contains (edge-wise) the
/// Steiner tree of at least one (k−1)-ecc `v`-set. Requires `2 <= k <= n`.
pub fn check_containment(tree: &Tree, v: Vertex, k: usize) -> Result<bool, OracleError> {
    check_query(tree, v, k)?;
    if k < 2 {
        return Err(QueryError::KTooSmall { k, min: 2 }.into());
    }
    let (_, upper) = maximizers(tree, v, k);
    let (_, lower) = maximizers(tree, v, k - 1);
    Ok(upper
        .iter()
        .all(|(_, big)| lower.iter().any(|(_, small)| small.is_subset_of(big))))
}

/// Checks that every Steiner k-ecc `v`-tree has the same eccentricity as a
/// subgraph, `max_x d(x, H)`.
pub fn check_ecc_invariance(tree: &Tree, v: Vertex, k: usize) -> Result<bool, OracleError> {
    check_query(tree, v, k)?;
    let (_, found) = maximizers(tree, v, k);
    let mut spanner = Spanner::new(tree);
    let mut hub = Vec::with_capacity(2 * tree.order());
    let mut values = found.iter().map(|(set, edges)| {
        hub.clear();
        spanner.push_subtree_vertices(edges, &mut hub);
        hub.extend_from_slice(set);
        spanner.hub_eccentricity(&hub)
    });
    let first = values.next().expect("at least one maximizer");
    Ok(values.all(|x| x == first))
}

/// `max_x min_{h ∈ hub} d(x, h)` by multi-source breadth-first search.
pub fn subtree_eccentricity(tree: &Tree, hub: &[Vertex]) -> usize {
    let mut dist = vec![usize::MAX; tree.order()];
    let mut queue = VecDeque::new();
    for &h in hub {
        if dist[h] != 0 {
            dist[h] = 0;
            queue.push_back(h);
        }
    }
    let mut far = 0;
    while let Some(u) = queue.pop_front() {
        far = far.max(dist[u]);
        for &w in tree.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    far
}

/// Full search for all maximizing sets with their Steiner-tree edge keys.
fn maximizers(tree: &Tree, v: Vertex, k: usize) -> (usize, Vec<(Vec<Vertex>, EdgeKey)>) {
    let pool: Vec<Vertex> = tree.vertices().filter(|&w| w != v).collect();
    let mut spanner = Spanner::new(tree);
    let mut best = 0;
    let mut found: Vec<(Vec<Vertex>, EdgeKey)> = Vec::new();
    for_each_set(&pool, v, k, |set| {
        let key = spanner.edge_key(set);
        let d = key.len();
        if d > best || found.is_empty() {
            best = d;
            found.clear();
        }
        if d == best {
            found.push((set.to_vec(), key));
        }
    });
    (best, found)
}

/// Calls `visit` with every sorted set `{v} ∪ C` for `C` a (k−1)-combination
/// of `pool` (ascending), in lexicographic order of `C`.
fn for_each_set(pool: &[Vertex], v: Vertex, k: usize, mut visit: impl FnMut(&[Vertex])) {
    let r = k - 1;
    let m = pool.len();
    if r > m {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    let mut set = Vec::with_capacity(k);
    loop {
        set.clear();
        let mut placed = false;
        for &i in &idx {
            let w = pool[i];
            if !placed && v < w {
                set.push(v);
                placed = true;
            }
            set.push(w);
        }
        if !placed {
            set.push(v);
        }
        visit(&set);

        // Next combination in lexicographic order.
        let mut i = r;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] != i + m - r {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Edges of a Steiner tree, each identified by its endpoint farther from
/// vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
enum EdgeKey {
    Mask(u64),
    Children(Vec<Vertex>),
}

impl EdgeKey {
    fn len(&self) -> usize {
        match self {
            EdgeKey::Mask(m) => m.count_ones() as usize,
            EdgeKey::Children(c) => c.len(),
        }
    }

    fn is_subset_of(&self, other: &EdgeKey) -> bool {
        match (self, other) {
            (EdgeKey::Mask(a), EdgeKey::Mask(b)) => a & !b == 0,
            (EdgeKey::Children(a), EdgeKey::Children(b)) => {
                a.iter().all(|c| b.binary_search(c).is_ok())
            }
            _ => unreachable!("edge keys from one tree share a representation"),
        }
    }
}

/// Evaluates Steiner trees of many sets over one tree.
///
/// Up to 64 vertices an edge `(parent(c), c)` lies in the Steiner tree of `S`
/// exactly when `S` meets both sides of the cut it induces, which is a pair of
/// mask tests. Larger trees fall back to leaf pruning.
struct Spanner<'a> {
    tree: &'a Tree,
    parent: Vec<Vertex>,
    /// Bitmask of the subtree below each vertex (rooted at 0).
    below: Option<Vec<u64>>,
    dist: Vec<usize>,
    queue: Vec<Vertex>,
}

impl<'a> Spanner<'a> {
    fn new(tree: &'a Tree) -> Self {
        let n = tree.order();
        let mut parent = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        parent[0] = 0;
        order.push(0);
        let mut head = 0;
        while head < order.len() {
            let u = order[head];
            head += 1;
            for &w in tree.neighbors(u) {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    order.push(w);
                }
            }
        }
        let below = (n <= 64).then(|| {
            let mut below: Vec<u64> = (0..n).map(|v| 1u64 << v).collect();
            for &v in order.iter().rev().filter(|&&v| v != 0) {
                below[parent[v]] |= below[v];
            }
            below
        });
        Self {
            tree,
            parent,
            below,
            dist: vec![usize::MAX; n],
            queue: order,
        }
    }

    fn distance(&mut self, set: &[Vertex]) -> usize {
        match &self.below {
            Some(below) => {
                let mask = set.iter().fold(0u64, |m, &v| m | 1 << v);
                below[1..]
                    .iter()
                    .filter(|&&side| mask & side != 0 && mask & !side != 0)
                    .count()
            }
            None => self.edge_key(set).len(),
        }
    }

    fn edge_key(&mut self, set: &[Vertex]) -> EdgeKey {
        match &self.below {
            Some(below) => {
                let mask = set.iter().fold(0u64, |m, &v| m | 1 << v);
                let mut key = 0u64;
                for (c, &side) in below.iter().enumerate().skip(1) {
                    if mask & side != 0 && mask & !side != 0 {
                        key |= 1 << c;
                    }
                }
                EdgeKey::Mask(key)
            }
            None => {
                let sub = steiner_distance(self.tree, &VertexSet::from_sorted(set.to_vec()))
                    .expect("ids validated by caller");
                let mut children: Vec<Vertex> = sub
                    .edges
                    .iter()
                    .map(|&(a, b)| if self.parent[b] == a { b } else { a })
                    .collect();
                children.sort_unstable();
                EdgeKey::Children(children)
            }
        }
    }

    fn push_subtree_vertices(&self, key: &EdgeKey, out: &mut Vec<Vertex>) {
        match key {
            EdgeKey::Mask(m) => {
                let mut m = *m;
                while m != 0 {
                    let c = m.trailing_zeros() as usize;
                    out.extend([c, self.parent[c]]);
                    m &= m - 1;
                }
            }
            EdgeKey::Children(children) => {
                out.extend(children.iter().flat_map(|&c| [c, self.parent[c]]));
            }
        }
    }

    /// Same as [`subtree_eccentricity`], reusing scratch buffers.
    fn hub_eccentricity(&mut self, hub: &[Vertex]) -> usize {
        self.dist.fill(usize::MAX);
        self.queue.clear();
        for &h in hub {
            if self.dist[h] != 0 {
                self.dist[h] = 0;
                self.queue.push(h);
            }
        }
        let mut head = 0;
        let mut far = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            far = far.max(self.dist[u]);
            for &w in self.tree.neighbors(u) {
                if self.dist[w] == usize::MAX {
                    self.dist[w] = self.dist[u] + 1;
                    self.queue.push(w);
                }
            }
        }
        far
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};
    use crate::tree::build_tree;

    fn p(n: usize) -> Tree {
        generate(&Family::Path, n, 0).unwrap()
    }

    fn s(n: usize) -> Tree {
        generate(&Family::Star, n, 0).unwrap()
    }

    fn spider321() -> Tree {
        generate(&Family::Spider { legs: vec![3, 2, 1] }, 7, 0).unwrap()
    }

    fn set(v: &[Vertex]) -> VertexSet {
        VertexSet::new(v.to_vec())
    }

    /// Smallest connected edge subset containing `set`, by trying every subset
    /// of edges. Independent of the pruning and cut routes.
    fn min_connected_subgraph(tree: &Tree, set: &[Vertex]) -> usize {
        let edges = tree.edges();
        let mut best = usize::MAX;
        for mask in 0u32..1 << edges.len() {
            let chosen: Vec<_> = (0..edges.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| edges[i])
                .collect();
            // Connected and covers `set`: flood-fill from set[0] over chosen edges.
            let mut reach = vec![set[0]];
            let mut changed = true;
            while changed {
                changed = false;
                for &(a, b) in &chosen {
                    let (ia, ib) = (reach.contains(&a), reach.contains(&b));
                    if ia != ib {
                        reach.push(if ia { b } else { a });
                        changed = true;
                    }
                }
            }
            let touched: std::collections::HashSet<_> =
                chosen.iter().flat_map(|&(a, b)| [a, b]).collect();
            let connected = touched.iter().all(|t| reach.contains(t));
            if connected && set.iter().all(|x| reach.contains(x)) {
                best = best.min(chosen.len());
            }
        }
        best
    }

    #[test]
    fn distance_examples() {
        let d = steiner_distance(&p(4), &set(&[0, 3])).unwrap();
        assert_eq!(d.size, 3);
        assert_eq!(d.edges, vec![(0, 1), (1, 2), (2, 3)]);
        let single = steiner_distance(&p(4), &set(&[2])).unwrap();
        assert_eq!(single.size, 0);
        assert!(single.edges.is_empty());
        // Spider legs 3, 2, 1: center 0, tips 3 and 5.
        assert_eq!(min_connected_subgraph(&spider321(), &[0, 3, 5]), 5);
        assert_eq!(steiner_distance(&spider321(), &set(&[0, 3, 5])).unwrap().size, 5);
        assert!(steiner_distance(&p(4), &set(&[0, 7])).is_err());
    }

    #[test]
    fn cut_route_agrees_with_pruning() {
        let t = spider321();
        let mut spanner = Spanner::new(&t);
        for mask in 1u32..1 << 7 {
            let members: Vec<Vertex> = (0..7).filter(|i| mask >> i & 1 == 1).collect();
            let pruned = steiner_distance(&t, &set(&members)).unwrap().size;
            assert_eq!(spanner.distance(&members), pruned, "{members:?}");
            assert_eq!(min_connected_subgraph(&t, &members), pruned, "{members:?}");
        }
    }

    #[test]
    fn bruteforce_examples() {
        for v in 0..4 {
            assert_eq!(ecc_k_bruteforce(&p(4), v, 1).unwrap().value, 0);
        }
        let r = ecc_k_bruteforce(&p(4), 1, 2).unwrap();
        assert_eq!(r.value, 2);
        assert_eq!(r.witness_set, set(&[1, 3]));
        // Star: vertex 1 plus any two other leaves span three edges.
        let r = ecc_k_bruteforce(&s(5), 1, 3).unwrap();
        assert_eq!(r.value, 3);
        assert_eq!(r.witness_set, set(&[1, 2, 3]));
        assert_eq!(r.witness_edges, vec![(0, 1), (0, 2), (0, 3)]);
    }

    #[test]
    fn bruteforce_errors() {
        assert_eq!(
            ecc_k_bruteforce(&p(4), 0, 5),
            Err(OracleError::Query(QueryError::KTooLarge { k: 5, n: 4 }))
        );
        assert_eq!(
            ecc_k_bruteforce(&p(4), 0, 0),
            Err(OracleError::Query(QueryError::KTooSmall { k: 0, min: 1 }))
        );
        assert!(matches!(
            ecc_k_bruteforce_with(
                &p(4),
                0,
                3,
                &OracleOptions {
                    mode: SearchMode::LeavesOnly,
                    budget: None
                }
            ),
            Err(OracleError::LeafRestrictionInapplicable { k: 3, leaves: 2 })
        ));
        let tight = OracleOptions {
            mode: SearchMode::Full,
            budget: Some(10),
        };
        assert!(matches!(
            ecc_k_bruteforce_with(&s(8), 0, 4, &tight),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(enumerate_kecc_sets(&p(4), 0, 2).unwrap(), vec![set(&[0, 3])]);
        assert_eq!(
            enumerate_kecc_sets(&s(5), 0, 2).unwrap(),
            vec![set(&[0, 1]), set(&[0, 2]), set(&[0, 3]), set(&[0, 4])]
        );
        // P_5 middle vertex, k = 3: by exhausting all six 3-sets containing 2,
        // only {0,2,4} spans four edges.
        let sets = enumerate_kecc_sets(&p(5), 2, 3).unwrap();
        assert_eq!(sets, vec![set(&[0, 2, 4])]);
        for w in [0usize, 1, 3, 4] {
            for x in [0usize, 1, 3, 4] {
                if w < x {
                    let d = min_connected_subgraph(&p(5), &[w, 2, x]);
                    assert_eq!(d == 4, (w, x) == (0, 4));
                }
            }
        }
    }

    #[test]
    fn structural_checker_examples() {
        assert!(check_containment(&p(4), 0, 3).unwrap());
        assert!(check_containment(&s(5), 1, 3).unwrap());
        assert!(check_ecc_invariance(&s(5), 0, 2).unwrap());
        for v in 0..5 {
            assert!(check_ecc_invariance(&s(5), v, 1).unwrap());
        }
        assert!(check_containment(&p(4), 0, 1).is_err());
        let t = generate(&Family::RandomPruefer, 9, 7).unwrap();
        for v in t.vertices() {
            assert!(check_containment(&t, v, 4).unwrap());
        }
    }

    #[test]
    fn subtree_eccentricity_of_center() {
        assert_eq!(subtree_eccentricity(&p(5), &[2]), 2);
        assert_eq!(subtree_eccentricity(&p(5), &[1, 2, 3]), 1);
        assert_eq!(subtree_eccentricity(&s(5), &[0]), 1);
    }

    #[test]
    fn large_trees_use_pruning_route() {
        let t = generate(&Family::Path, 70, 0).unwrap();
        let r = ecc_k_bruteforce(&t, 10, 2).unwrap();
        assert_eq!(r.value, 59);
        assert!(check_containment(&t, 35, 2).unwrap());
        assert!(check_ecc_invariance(&t, 35, 2).unwrap());
        let star = build_tree(&(1..70).map(|i| (0, i)).collect::<Vec<_>>()).unwrap();
        assert_eq!(enumerate_kecc_sets(&star, 5, 2).unwrap().len(), 68);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(7, 3), 35);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
        assert_eq!(binomial(500, 250), u128::MAX);
    }
}
