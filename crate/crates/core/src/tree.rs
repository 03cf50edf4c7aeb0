//! Immutable trees over dense vertex ids, plus the vertex-set and path types
//! the rest of the crate passes around.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Dense vertex identifier in `0..n`.
pub type Vertex = usize;

/// Errors raised while building or querying a [`Tree`].
///
/// `index` is the position of the offending edge in the input list.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("edge #{index} ({u}, {v}) closes a cycle")]
    CycleDetected { index: usize, u: Vertex, v: Vertex },
    #[error("vertex {vertex} is not reachable from vertex 0")]
    Disconnected { vertex: Vertex },
    #[error("edge #{index} is a self-loop on vertex {vertex}")]
    SelfLoop { index: usize, vertex: Vertex },
    #[error("edge #{index} ({u}, {v}) appears more than once")]
    DuplicateEdge { index: usize, u: Vertex, v: Vertex },
    #[error("vertex id {vertex} is out of range for a tree on {n} vertices")]
    IdOutOfRange { vertex: Vertex, n: usize },
    #[error("a tree needs at least one vertex")]
    Empty,
}

/// A finite, connected, acyclic, simple undirected graph.
///
/// Neighbor lists are kept strictly ascending so every traversal (and every
/// tie-break built on top of one) is deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree {
    adjacency: Vec<Vec<Vertex>>,
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Tree")
            .field("n", &self.order())
            .field("edges", &self.edges())
            .finish()
    }
}

/// Builds a tree from an edge list; the order is inferred as `edges.len() + 1`.
pub fn build_tree(edges: &[(Vertex, Vertex)]) -> Result<Tree, TreeError> {
    Tree::with_order(edges.len() + 1, edges)
}

impl Tree {
    /// Builds a tree on exactly `n` vertices.
    ///
    /// Edges are checked in input order, so the first offending edge is the
    /// one reported.
    pub fn with_order(n: usize, edges: &[(Vertex, Vertex)]) -> Result<Self, TreeError> {
        if n == 0 {
            return Err(TreeError::Empty);
        }
        let mut dsu = DisjointSets::new(n);
        let mut seen = HashSet::with_capacity(edges.len());
        let mut adjacency = vec![Vec::new(); n];
        for (index, &(u, v)) in edges.iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(TreeError::IdOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(TreeError::SelfLoop { index, vertex: u });
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(TreeError::DuplicateEdge { index, u, v });
            }
            if !dsu.union(u, v) {
                return Err(TreeError::CycleDetected { index, u, v });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        if let Some(vertex) = (1..n).find(|&w| !dsu.same(0, w)) {
            return Err(TreeError::Disconnected { vertex });
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Self { adjacency })
    }

    /// The single-vertex tree.
    pub fn singleton() -> Self {
        Self {
            adjacency: vec![Vec::new()],
        }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.adjacency.len()
    }

    /// Number of edges, always `order() - 1`.
    pub fn size(&self) -> usize {
        self.order() - 1
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adjacency[v].len()
    }

    /// Sorted neighbor list of `v`.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v]
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.order()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        v < self.order()
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<(), TreeError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(TreeError::IdOutOfRange {
                vertex: v,
                n: self.order(),
            })
        }
    }

    /// All edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.vertices()
            .flat_map(|u| {
                self.adjacency[u]
                    .iter()
                    .filter(move |&&v| u < v)
                    .map(move |&v| (u, v))
            })
            .collect()
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.degree(v) <= 1
    }

    /// Pendant vertices. The single vertex of the one-vertex tree counts as a leaf.
    pub fn leaves(&self) -> VertexSet {
        VertexSet(self.vertices().filter(|&v| self.is_leaf(v)).collect())
    }

    pub fn leaf_count(&self) -> usize {
        self.vertices().filter(|&v| self.is_leaf(v)).count()
    }

    /// Degree sequence sorted in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degrees: Vec<usize> = self.vertices().map(|v| self.degree(v)).collect();
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        degrees
    }

    /// True when the tree is isomorphic to the star `S_n` (n ≤ 2 included).
    pub fn is_star(&self) -> bool {
        let n = self.order();
        n <= 2 || self.degree_sequence()[0] == n - 1
    }

    /// True when the tree is isomorphic to the path `P_n`.
    pub fn is_path(&self) -> bool {
        self.vertices().all(|v| self.degree(v) <= 2)
    }

    /// Breadth-first distances from `source`.
    pub fn distances_from(&self, source: Vertex) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.order()];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// BFS parent pointers for the tree rooted at `root`; the root maps to itself.
    pub fn parents_from(&self, root: Vertex) -> Vec<Vertex> {
        let mut parent = vec![usize::MAX; self.order()];
        let mut queue = VecDeque::from([root]);
        parent[root] = root;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adjacency[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// The unique path from `u` to `v`.
    pub fn path_between(&self, u: Vertex, v: Vertex) -> Result<PathDescriptor, TreeError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        let parent = self.parents_from(v);
        let mut vertices = vec![u];
        let mut w = u;
        while w != v {
            w = parent[w];
            vertices.push(w);
        }
        Ok(PathDescriptor(vertices))
    }

    /// Applies a vertex relabeling: vertex `i` becomes `mapping[i]`.
    pub fn relabel(&self, mapping: &[Vertex]) -> Result<Tree, TreeError> {
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (mapping[u], mapping[v]))
            .collect();
        Tree::with_order(self.order(), &edges)
    }
}

struct DisjointSets {
    parent: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Returns false if `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// A strictly ascending set of distinct vertex ids.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    /// Sorts and deduplicates `members`.
    pub fn new(mut members: Vec<Vertex>) -> Self {
        members.sort_unstable();
        members.dedup();
        Self(members)
    }

    /// Like [`VertexSet::new`] but rejects ids that are not vertices of `tree`.
    pub fn for_tree(tree: &Tree, members: Vec<Vertex>) -> Result<Self, TreeError> {
        for &v in &members {
            tree.check_vertex(v)?;
        }
        Ok(Self::new(members))
    }

    pub(crate) fn from_sorted(members: Vec<Vertex>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        Self(members)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }
}

impl From<VertexSet> for Vec<Vertex> {
    fn from(set: VertexSet) -> Self {
        set.0
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// An explicit vertex sequence `v_0, v_1, …, v_ℓ` along a tree path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PathDescriptor(Vec<Vertex>);

impl PathDescriptor {
    /// Wraps `vertices` after checking that they form a simple path in `tree`.
    pub fn new(tree: &Tree, vertices: Vec<Vertex>) -> Result<Self, PathError> {
        if vertices.is_empty() {
            return Err(PathError::Empty);
        }
        for &v in &vertices {
            tree.check_vertex(v).map_err(|_| PathError::NotInTree(v))?;
        }
        let mut seen = HashSet::with_capacity(vertices.len());
        for &v in &vertices {
            if !seen.insert(v) {
                return Err(PathError::Repeated(v));
            }
        }
        for w in vertices.windows(2) {
            if tree.neighbors(w[0]).binary_search(&w[1]).is_err() {
                return Err(PathError::NotAdjacent(w[0], w[1]));
            }
        }
        Ok(Self(vertices))
    }

    pub(crate) fn from_vertices_unchecked(vertices: Vec<Vertex>) -> Self {
        Self(vertices)
    }

    /// Number of edges on the path.
    pub fn length(&self) -> usize {
        self.0.len() - 1
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn start(&self) -> Vertex {
        self.0[0]
    }

    pub fn end(&self) -> Vertex {
        self.0[self.0.len() - 1]
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    /// Vertices strictly between the two endpoints.
    pub fn internal(&self) -> &[Vertex] {
        if self.0.len() <= 2 {
            &[]
        } else {
            &self.0[1..self.0.len() - 1]
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("a path needs at least one vertex")]
    Empty,
    #[error("vertex {0} is not in the tree")]
    NotInTree(Vertex),
    #[error("vertex {0} occurs twice on the path")]
    Repeated(Vertex),
    #[error("consecutive path vertices {0} and {1} are not adjacent")]
    NotAdjacent(Vertex, Vertex),
}
