//! Tree families used as test corpora: stars, paths, spiders, caterpillars,
//! uniformly random labeled trees, and exhaustive enumeration via Prüfer codes.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::tree::{Tree, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("bad generator parameters: {0}")]
    BadParams(String),
}

/// A tree family. Vertex 0 is the hub of stars and spiders and one end of paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Star,
    Path,
    /// Legs of the given lengths joined at vertex 0; leg `i` occupies a
    /// consecutive id range, numbered outward from the center.
    Spider { legs: Vec<usize> },
    /// `legs` legs whose lengths differ by at most one, filling all `n` vertices.
    BalancedSpider { legs: usize },
    /// A spine `0 – 1 – … – spine−1`; the remaining vertices are attached to the
    /// spine round-robin.
    Caterpillar { spine: usize },
    RandomPruefer,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Star => write!(f, "star"),
            Family::Path => write!(f, "path"),
            Family::Spider { legs } => {
                let legs: Vec<String> = legs.iter().map(|l| l.to_string()).collect();
                write!(f, "spider:{}", legs.join(","))
            }
            Family::BalancedSpider { legs } => write!(f, "balanced-spider:{legs}"),
            Family::Caterpillar { spine } => write!(f, "caterpillar:{spine}"),
            Family::RandomPruefer => write!(f, "random"),
        }
    }
}

impl FromStr for Family {
    type Err = GenError;

    /// Accepts `star`, `path`, `random`, `spider:3,2,1`, `balanced-spider:16`
    /// and `caterpillar:5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, arg) = match s.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (s, None),
        };
        let bad = |msg: &str| GenError::BadParams(format!("{s}: {msg}"));
        let number = |a: &str| a.trim().parse::<usize>().map_err(|_| bad("expected an integer"));
        match (name, arg) {
            ("star", None) => Ok(Family::Star),
            ("path", None) => Ok(Family::Path),
            ("random" | "random_pruefer" | "pruefer", None) => Ok(Family::RandomPruefer),
            ("spider", Some(a)) => Ok(Family::Spider {
                legs: a.split(',').map(number).collect::<Result<_, _>>()?,
            }),
            ("balanced-spider", Some(a)) => Ok(Family::BalancedSpider { legs: number(a)? }),
            ("caterpillar", Some(a)) => Ok(Family::Caterpillar { spine: number(a)? }),
            _ => Err(bad("unknown family")),
        }
    }
}

/// Generates a tree of order `n`. `seed` only matters for [`Family::RandomPruefer`].
pub fn generate(family: &Family, n: usize, seed: u64) -> Result<Tree, GenError> {
    if n == 0 {
        return Err(GenError::BadParams("n must be at least 1".into()));
    }
    let edges: Vec<(Vertex, Vertex)> = match family {
        Family::Star => (1..n).map(|i| (0, i)).collect(),
        Family::Path => (1..n).map(|i| (i - 1, i)).collect(),
        Family::Spider { legs } => {
            if legs.contains(&0) {
                return Err(GenError::BadParams("spider legs must be positive".into()));
            }
            if 1 + legs.iter().sum::<usize>() != n {
                return Err(GenError::BadParams(format!(
                    "spider legs {legs:?} give {} vertices, not {n}",
                    1 + legs.iter().sum::<usize>()
                )));
            }
            spider_edges(legs)
        }
        Family::BalancedSpider { legs } => {
            if *legs == 0 || *legs > n.saturating_sub(1).max(1) {
                return Err(GenError::BadParams(format!(
                    "cannot split {} non-center vertices into {legs} legs",
                    n - 1
                )));
            }
            let (q, r) = ((n - 1) / legs, (n - 1) % legs);
            let lengths: Vec<usize> = (0..*legs).map(|i| q + usize::from(i < r)).collect();
            spider_edges(&lengths)
        }
        Family::Caterpillar { spine } => {
            if *spine == 0 || *spine > n {
                return Err(GenError::BadParams(format!(
                    "caterpillar spine {spine} must lie in 1..={n}"
                )));
            }
            let mut edges: Vec<_> = (1..*spine).map(|i| (i - 1, i)).collect();
            edges.extend((*spine..n).map(|w| ((w - spine) % spine, w)));
            edges
        }
        Family::RandomPruefer => {
            if n <= 2 {
                (1..n).map(|i| (0, i)).collect()
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let code: Vec<Vertex> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
                pruefer_edges(&code, n)
            }
        }
    };
    Ok(Tree::with_order(n, &edges).expect("generator produced an invalid tree"))
}

fn spider_edges(legs: &[usize]) -> Vec<(Vertex, Vertex)> {
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in legs {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    edges
}

/// Decodes a Prüfer code over `0..n` (length `n − 2`) into the edges of the
/// labeled tree it encodes. Linear time.
pub fn pruefer_edges(code: &[Vertex], n: usize) -> Vec<(Vertex, Vertex)> {
    assert_eq!(code.len() + 2, n, "a Prüfer code for n vertices has length n - 2");
    let mut degree = vec![1usize; n];
    for &a in code {
        degree[a] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut ptr = (0..n).find(|&i| degree[i] == 1).unwrap();
    let mut leaf = ptr;
    for &a in code {
        edges.push((leaf, a));
        degree[a] -= 1;
        if a < ptr && degree[a] == 1 {
            leaf = a;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf, n - 1));
    edges
}

/// Decodes a Prüfer code into a tree on `code.len() + 2` vertices.
pub fn from_pruefer(code: &[Vertex]) -> Result<Tree, GenError> {
    let n = code.len() + 2;
    if let Some(&bad) = code.iter().find(|&&a| a >= n) {
        return Err(GenError::BadParams(format!("code entry {bad} is not below {n}")));
    }
    Ok(Tree::with_order(n, &pruefer_edges(code, n)).expect("Prüfer decoding yields a tree"))
}

/// Every labeled tree on `n` vertices, one per Prüfer code, in lexicographic
/// code order (`n^(n−2)` trees; `n = 1` and `n = 2` yield one tree each).
pub fn all_labeled_trees(n: usize) -> AllLabeledTrees {
    AllLabeledTrees {
        n,
        code: if n >= 2 { Some(vec![0; n - 2]) } else { None },
        single_done: n >= 2,
    }
}

pub struct AllLabeledTrees {
    n: usize,
    code: Option<Vec<Vertex>>,
    single_done: bool,
}

impl Iterator for AllLabeledTrees {
    type Item = Tree;

    fn next(&mut self) -> Option<Tree> {
        if self.n == 0 {
            return None;
        }
        if self.n == 1 {
            if self.single_done {
                return None;
            }
            self.single_done = true;
            return Some(Tree::singleton());
        }
        let code = self.code.as_mut()?;
        let tree = Tree::with_order(self.n, &pruefer_edges(code, self.n)).expect("valid code");
        // Advance the base-n counter; drop it once it wraps.
        let mut i = code.len();
        loop {
            if i == 0 {
                self.code = None;
                break;
            }
            i -= 1;
            code[i] += 1;
            if code[i] < self.n {
                break;
            }
            code[i] = 0;
        }
        Some(tree)
    }
}

/// `count` random trees of order `n` from one seeded stream.
pub fn random_trees(n: usize, count: usize, seed: u64) -> impl Iterator<Item = Tree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    (0..count).map(move |_| generate(&Family::RandomPruefer, n, rng.gen()).unwrap())
}
