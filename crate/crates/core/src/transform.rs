//! Branch-relocating transformations between trees of the same order.
//!
//! Take a path `P = u … v` whose internal vertices all have degree 2. Removing
//! the edges of `P` leaves a subtree `X` around `u` and `Y` around `v`. The
//! forward transformation moves every `X`-neighbor of `u` over to `v`, with
//! the path oriented so that `X` is no deeper from `u` than `Y` is from `v`.
//! It never increases the average Steiner k-eccentricity, and repeating it
//! ends at the star. The inverse moves branches from `v` back out to `u` and
//! repeating it ends at the path.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::tree::{PathDescriptor, Tree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("invalid transformation path: {0}")]
    InvalidPath(String),
    #[error("transformation path has no edges")]
    DegeneratePath,
    #[error("vertex {vertex} is not a branch at {at} off the path")]
    InvalidBranch { vertex: Vertex, at: Vertex },
    #[error("malformed trace line: {0}")]
    BadTrace(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Goal {
    Star,
    Path,
}

impl FromStr for Goal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "star" => Ok(Goal::Star),
            "path" => Ok(Goal::Path),
            _ => Err(format!("unknown goal {s:?}, expected star or path")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TransformKind {
    Pi,
    PiInverse,
}

impl TransformKind {
    fn tag(self) -> &'static str {
        match self {
            TransformKind::Pi => "pi",
            TransformKind::PiInverse => "pi-inv",
        }
    }
}

/// One applied transformation.
///
/// `path` runs from `u` to `v`. A forward step moves branches from `u` to
/// `v`; an inverse step moves them from `v` to `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TransformStep {
    pub kind: TransformKind,
    pub path: PathDescriptor,
    pub moved_from: Vertex,
    pub moved_to: Vertex,
    pub moved_neighbors: Vec<Vertex>,
}

impl TransformStep {
    /// Replays this step on `tree`, validating it against that tree.
    pub fn apply(&self, tree: &Tree) -> Result<Tree, TransformError> {
        let path = checked_path(tree, self.path.vertices().to_vec())?;
        let (u, v) = (path.start(), path.end());
        let expected = match self.kind {
            TransformKind::Pi => (u, v),
            TransformKind::PiInverse => (v, u),
        };
        if (self.moved_from, self.moved_to) != expected {
            return Err(TransformError::InvalidPath(format!(
                "moves {} -> {} do not match the path ends",
                self.moved_from, self.moved_to
            )));
        }
        check_branches(tree, &path, self.moved_from, &self.moved_neighbors)?;
        Ok(relocate(tree, self.moved_from, self.moved_to, &self.moved_neighbors))
    }

    /// The same step with every vertex id passed through `f`.
    pub fn map_vertices(&self, f: impl Fn(Vertex) -> Vertex) -> TransformStep {
        TransformStep {
            kind: self.kind,
            path: PathDescriptor::from_vertices_unchecked(
                self.path.vertices().iter().map(|&v| f(v)).collect(),
            ),
            moved_from: f(self.moved_from),
            moved_to: f(self.moved_to),
            moved_neighbors: self.moved_neighbors.iter().map(|&v| f(v)).collect(),
        }
    }
}

fn join(vs: &[Vertex]) -> String {
    vs.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

/// Trace line: `pi path=0,1,2 moved=3,4` (moved may be empty).
impl fmt::Display for TransformStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} path={} moved={}",
            self.kind.tag(),
            join(self.path.vertices()),
            join(&self.moved_neighbors)
        )
    }
}

impl FromStr for TransformStep {
    type Err = TransformError;

    fn from_str(line: &str) -> Result<Self, Self::Err> {
        let bad = || TransformError::BadTrace(line.to_string());
        let mut fields = line.split_whitespace();
        let kind = match fields.next() {
            Some("pi") => TransformKind::Pi,
            Some("pi-inv") => TransformKind::PiInverse,
            _ => return Err(bad()),
        };
        let list = |field: Option<&str>, key: &str| -> Result<Vec<Vertex>, TransformError> {
            let rest = field.and_then(|f| f.strip_prefix(key)).ok_or_else(bad)?;
            if rest.is_empty() {
                return Ok(Vec::new());
            }
            rest.split(',')
                .map(|x| x.parse().map_err(|_| bad()))
                .collect()
        };
        let path = list(fields.next(), "path=")?;
        let moved_neighbors = list(fields.next(), "moved=")?;
        if fields.next().is_some() || path.len() < 2 {
            return Err(bad());
        }
        let (u, v) = (path[0], path[path.len() - 1]);
        let (moved_from, moved_to) = match kind {
            TransformKind::Pi => (u, v),
            TransformKind::PiInverse => (v, u),
        };
        Ok(TransformStep {
            kind,
            path: PathDescriptor::from_vertices_unchecked(path),
            moved_from,
            moved_to,
            moved_neighbors,
        })
    }
}

fn checked_path(tree: &Tree, vertices: Vec<Vertex>) -> Result<PathDescriptor, TransformError> {
    let path = PathDescriptor::new(tree, vertices)
        .map_err(|e| TransformError::InvalidPath(e.to_string()))?;
    if path.length() == 0 {
        return Err(TransformError::DegeneratePath);
    }
    if let Some(&w) = path.internal().iter().find(|&&w| tree.degree(w) != 2) {
        return Err(TransformError::InvalidPath(format!(
            "internal vertex {w} has degree {}",
            tree.degree(w)
        )));
    }
    Ok(path)
}

/// Neighbors of the endpoint `end` that are not on the path.
fn off_path_neighbors(tree: &Tree, path: &PathDescriptor, end: Vertex) -> Vec<Vertex> {
    let p = path.vertices();
    let along = if end == p[0] { p[1] } else { p[p.len() - 2] };
    tree.neighbors(end)
        .iter()
        .copied()
        .filter(|&w| w != along)
        .collect()
}

fn check_branches(
    tree: &Tree,
    path: &PathDescriptor,
    at: Vertex,
    moved: &[Vertex],
) -> Result<(), TransformError> {
    let allowed = off_path_neighbors(tree, path, at);
    match moved.iter().find(|w| !allowed.contains(w)) {
        Some(&vertex) => Err(TransformError::InvalidBranch { vertex, at }),
        None => Ok(()),
    }
}

/// Largest distance from `root` to a vertex reachable without entering `blocked`.
fn depth_avoiding(tree: &Tree, root: Vertex, blocked: Vertex) -> usize {
    let mut dist = vec![usize::MAX; tree.order()];
    dist[root] = 0;
    dist[blocked] = 0;
    let mut queue = VecDeque::from([root]);
    let mut far = 0;
    while let Some(x) = queue.pop_front() {
        far = far.max(dist[x]);
        for &w in tree.neighbors(x) {
            if dist[w] == usize::MAX {
                dist[w] = dist[x] + 1;
                queue.push_back(w);
            }
        }
    }
    far
}

fn relocate(tree: &Tree, from: Vertex, to: Vertex, moved: &[Vertex]) -> Tree {
    let edges: Vec<_> = tree
        .edges()
        .into_iter()
        .map(|(a, b)| {
            if a == from && moved.contains(&b) {
                (to, b)
            } else if b == from && moved.contains(&a) {
                (a, to)
            } else {
                (a, b)
            }
        })
        .collect();
    Tree::with_order(tree.order(), &edges).expect("relocating branches along a path keeps a tree")
}

/// Forward transformation along `path`.
///
/// The path is re-oriented when its start side is strictly deeper than its
/// end side; on a tie the caller's orientation is kept. The step records the
/// orientation actually used.
pub fn pi_transform(tree: &Tree, path: &PathDescriptor) -> Result<(Tree, TransformStep), TransformError> {
    let mut path = checked_path(tree, path.vertices().to_vec())?;
    let p = path.vertices();
    let depth_u = depth_avoiding(tree, p[0], p[1]);
    let depth_v = depth_avoiding(tree, p[p.len() - 1], p[p.len() - 2]);
    if depth_u > depth_v {
        path = path.reversed();
    }
    let (u, v) = (path.start(), path.end());
    let moved = off_path_neighbors(tree, &path, u);
    let next = relocate(tree, u, v, &moved);
    let step = TransformStep {
        kind: TransformKind::Pi,
        path,
        moved_from: u,
        moved_to: v,
        moved_neighbors: moved,
    };
    Ok((next, step))
}

/// Inverse transformation along `path = u … v`, moving the shallowest branch
/// at `v` (smallest id on ties) out to `u`.
pub fn pi_inverse(tree: &Tree, path: &PathDescriptor) -> Result<(Tree, TransformStep), TransformError> {
    let checked = checked_path(tree, path.vertices().to_vec())?;
    let v = checked.end();
    let branch = off_path_neighbors(tree, &checked, v)
        .into_iter()
        .min_by_key(|&w| (depth_avoiding(tree, w, v), w));
    pi_inverse_with(tree, &checked, &branch.into_iter().collect::<Vec<_>>())
}

/// Inverse transformation moving exactly `moved` (neighbors of the path end
/// `v` off the path) to the path start `u`.
pub fn pi_inverse_with(
    tree: &Tree,
    path: &PathDescriptor,
    moved: &[Vertex],
) -> Result<(Tree, TransformStep), TransformError> {
    let path = checked_path(tree, path.vertices().to_vec())?;
    let (u, v) = (path.start(), path.end());
    check_branches(tree, &path, v, moved)?;
    let next = relocate(tree, v, u, moved);
    let mut moved = moved.to_vec();
    moved.sort_unstable();
    let step = TransformStep {
        kind: TransformKind::PiInverse,
        path,
        moved_from: v,
        moved_to: u,
        moved_neighbors: moved,
    };
    Ok((next, step))
}

/// Every site where a step toward `goal` changes the tree up to isomorphism,
/// ordered by `(start, end)`.
///
/// Toward the star: paths with degree-2 interior whose two ends both have a
/// branch off the path (otherwise the oriented move relocates nothing).
/// Toward the path: paths from a leaf `u` to a vertex `v` of degree at least 3
/// with degree-2 interior.
pub fn transform_sites(tree: &Tree, goal: Goal) -> Vec<PathDescriptor> {
    let mut sites = Vec::new();
    for start in tree.vertices() {
        let anchor_ok = match goal {
            Goal::Star => tree.degree(start) >= 2,
            Goal::Path => tree.degree(start) == 1 && tree.order() > 1,
        };
        if !anchor_ok {
            continue;
        }
        for &first in tree.neighbors(start) {
            let mut walk = vec![start, first];
            loop {
                let cur = walk[walk.len() - 1];
                let deg = tree.degree(cur);
                let is_site = match goal {
                    Goal::Star => deg >= 2 && start < cur,
                    Goal::Path => deg >= 3,
                };
                if is_site {
                    sites.push(PathDescriptor::from_vertices_unchecked(walk.clone()));
                }
                if deg != 2 {
                    break;
                }
                let prev = walk[walk.len() - 2];
                let next = tree.neighbors(cur).iter().copied().find(|&w| w != prev).unwrap();
                walk.push(next);
            }
        }
    }
    sites.sort_by_key(|p| (p.start(), p.end()));
    sites
}

/// The first site of [`transform_sites`], or `None` when `tree` is already
/// the star (resp. the path).
pub fn find_transform_path(tree: &Tree, goal: Goal) -> Option<PathDescriptor> {
    transform_sites(tree, goal).into_iter().next()
}

fn internal_vertices(tree: &Tree) -> usize {
    tree.vertices().filter(|&v| tree.degree(v) >= 2).count()
}

/// Applies forward steps until the tree is a star.
///
/// Each step turns one non-leaf endpoint into a leaf, so the number of
/// non-leaf vertices strictly drops and the chain has fewer than `n` steps.
pub fn collapse_to_star(tree: &Tree) -> (Tree, Vec<TransformStep>) {
    run_chain(tree, Goal::Star)
}

/// Applies inverse steps until the tree is a path.
///
/// Each step makes a leaf internal without creating a new leaf, so the leaf
/// count strictly drops.
pub fn stretch_to_path(tree: &Tree) -> (Tree, Vec<TransformStep>) {
    run_chain(tree, Goal::Path)
}

fn run_chain(tree: &Tree, goal: Goal) -> (Tree, Vec<TransformStep>) {
    let potential = |t: &Tree| match goal {
        Goal::Star => internal_vertices(t),
        Goal::Path => t.leaf_count(),
    };
    let cap = tree.order() * tree.order();
    let mut current = tree.clone();
    let mut steps = Vec::new();
    while let Some(site) = find_transform_path(&current, goal) {
        assert!(
            steps.len() < cap,
            "transformation chain exceeded n^2 = {cap} steps; site selection is broken"
        );
        let before = potential(&current);
        let (next, step) = match goal {
            Goal::Star => pi_transform(&current, &site),
            Goal::Path => pi_inverse(&current, &site),
        }
        .expect("selected sites are valid");
        assert!(
            potential(&next) < before,
            "step {step} did not decrease the chain potential"
        );
        current = next;
        steps.push(step);
    }
    (current, steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};
    use crate::kecc::avg_steiner_k_ecc;
    use crate::tree::build_tree;

    fn path_of(tree: &Tree, vs: &[Vertex]) -> PathDescriptor {
        PathDescriptor::new(tree, vs.to_vec()).unwrap()
    }

    #[test]
    fn extremal_trees_have_no_sites() {
        assert_eq!(find_transform_path(&generate(&Family::Star, 5, 0).unwrap(), Goal::Star), None);
        assert_eq!(find_transform_path(&generate(&Family::Path, 6, 0).unwrap(), Goal::Path), None);
        assert_eq!(find_transform_path(&Tree::singleton(), Goal::Star), None);
        assert_eq!(find_transform_path(&Tree::singleton(), Goal::Path), None);
    }

    #[test]
    fn spider_211_collapses_in_one_step() {
        // Center 0, long leg 0 – 1 – 2, short legs 3 and 4.
        let t = generate(&Family::Spider { legs: vec![2, 1, 1] }, 5, 0).unwrap();
        let site = find_transform_path(&t, Goal::Star).unwrap();
        assert_eq!(site.vertices(), &[0, 1]);
        let (next, step) = pi_transform(&t, &site).unwrap();
        assert_eq!(step.moved_neighbors, vec![3, 4]);
        assert!(next.is_star());
        // The outer edge of the long leg ends in a leaf, so moving along it is a no-op.
        let (same, step) = pi_transform(&t, &path_of(&t, &[1, 2])).unwrap();
        assert_eq!(same, t);
        assert!(step.moved_neighbors.is_empty());
    }

    #[test]
    fn forward_step_on_double_broom() {
        // 0 – 1 – 2 with pendant 3 on 0 and pendant 4 on 2; equal depths, so
        // the caller's orientation is kept and 3 moves to 2.
        let t = build_tree(&[(0, 1), (1, 2), (0, 3), (2, 4)]).unwrap();
        let (next, step) = pi_transform(&t, &path_of(&t, &[0, 1, 2])).unwrap();
        assert_eq!(next.edges(), vec![(0, 1), (1, 2), (2, 3), (2, 4)]);
        assert_eq!((step.moved_from, step.moved_to), (0, 2));
        assert_eq!(step.to_string(), "pi path=0,1,2 moved=3");
        let (back, _) = pi_inverse_with(&next, &step.path, &step.moved_neighbors).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn forward_step_reorients_deeper_side() {
        // spider(2,2): 1 – 2 and 3 – 4 hang off 0. Along [0, 1] the 0-side is
        // deeper, so the step runs 1 -> 0 and moves 2.
        let t = generate(&Family::Spider { legs: vec![2, 2] }, 5, 0).unwrap();
        let (next, step) = pi_transform(&t, &path_of(&t, &[0, 1])).unwrap();
        assert_eq!(step.path.vertices(), &[1, 0]);
        assert_eq!(step.moved_neighbors, vec![2]);
        assert_eq!(next.degree_sequence(), vec![3, 2, 1, 1, 1]);
        for k in 3..5 {
            assert!(avg_steiner_k_ecc(&next, k).unwrap() <= avg_steiner_k_ecc(&t, k).unwrap());
        }
        // Along a full leg the tip side is trivial: nothing moves.
        let (same, _) = pi_transform(&t, &path_of(&t, &[0, 1, 2])).unwrap();
        assert_eq!(same, t);
    }

    #[test]
    fn forward_step_errors() {
        let t = generate(&Family::Star, 5, 0).unwrap();
        assert_eq!(
            pi_transform(&t, &path_of(&t, &[2])),
            Err(TransformError::DegeneratePath)
        );
        assert!(matches!(
            pi_transform(&t, &path_of(&t, &[1, 0, 2])),
            Err(TransformError::InvalidPath(_))
        ));
        let p = generate(&Family::Path, 4, 0).unwrap();
        assert!(matches!(
            pi_inverse_with(&p, &path_of(&p, &[0, 1]), &[3]),
            Err(TransformError::InvalidBranch { vertex: 3, at: 1 })
        ));
    }

    #[test]
    fn inverse_moves_shallowest_branch() {
        // Spider(2,1,1): leaf 2 at the end of the long leg; branches 3, 4 at 0.
        let t = generate(&Family::Spider { legs: vec![2, 1, 1] }, 5, 0).unwrap();
        let site = find_transform_path(&t, Goal::Path).unwrap();
        assert_eq!(site.vertices(), &[2, 1, 0]);
        let (next, step) = pi_inverse(&t, &site).unwrap();
        assert_eq!(step.moved_neighbors, vec![3]);
        assert!(next.is_path());
        let (back, _) = pi_transform(&next, &step.path).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn chains_reach_extremes() {
        let p5 = generate(&Family::Path, 5, 0).unwrap();
        let (star, steps) = collapse_to_star(&p5);
        assert!(!steps.is_empty());
        assert_eq!(star.degree_sequence(), vec![4, 1, 1, 1, 1]);

        let s5 = generate(&Family::Star, 5, 0).unwrap();
        let (same, steps) = collapse_to_star(&s5);
        assert!(steps.is_empty());
        assert_eq!(same, s5);

        let (path, steps) = stretch_to_path(&s5);
        assert_eq!(path.degree_sequence(), vec![2, 2, 2, 1, 1]);
        // Replaying the trace reproduces the end point.
        let replayed = steps.iter().try_fold(s5, |t, s| s.apply(&t)).unwrap();
        assert_eq!(replayed, path);
    }

    #[test]
    fn trace_lines_parse() {
        let step: TransformStep = "pi-inv path=4,3,0 moved=7".parse().unwrap();
        assert_eq!(step.kind, TransformKind::PiInverse);
        assert_eq!((step.moved_from, step.moved_to), (0, 4));
        assert_eq!(step.to_string(), "pi-inv path=4,3,0 moved=7");
        let empty: TransformStep = "pi path=1,2 moved=".parse().unwrap();
        assert!(empty.moved_neighbors.is_empty());
        for bad in ["", "rho path=1,2 moved=", "pi path=1 moved=", "pi path=1,x moved=", "pi moved=1 path=1,2"] {
            assert!(bad.parse::<TransformStep>().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn apply_rejects_mismatched_trees() {
        let t = generate(&Family::Path, 4, 0).unwrap();
        let step: TransformStep = "pi path=0,2 moved=".parse().unwrap();
        assert!(step.apply(&t).is_err());
        let step: TransformStep = "pi path=1,2 moved=3".parse().unwrap();
        assert!(matches!(
            step.apply(&t),
            Err(TransformError::InvalidBranch { vertex: 3, at: 1 })
        ));
    }
}
