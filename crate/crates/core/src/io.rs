//! Edge-list text format.
//!
//! One edge per line as two whitespace-separated non-negative integer labels.
//! Blank lines and lines starting with `#` are skipped; `\r` is stripped.
//! Labels are remapped to dense ids in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::tree::{Tree, TreeError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    AtLine {
        line: usize,
        #[source]
        source: TreeError,
    },
    #[error("{0}")]
    Tree(#[from] TreeError),
    #[error("input contains no edges")]
    Empty,
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } | ParseError::AtLine { line, .. } => Some(*line),
            _ => None,
        }
    }
}

/// A parsed tree together with the original label of every dense id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    pub tree: Tree,
    /// `labels[id]` is the input label of vertex `id`.
    pub labels: Vec<u64>,
}

impl LabeledTree {
    /// Identity labels.
    pub fn unlabeled(tree: Tree) -> Self {
        let labels = tree.vertices().map(|v| v as u64).collect();
        Self { tree, labels }
    }

    pub fn id_of(&self, label: u64) -> Option<Vertex> {
        self.labels.iter().position(|&l| l == label)
    }

    pub fn label_of(&self, id: Vertex) -> u64 {
        self.labels[id]
    }
}

pub fn parse_edge_list(text: &str) -> Result<LabeledTree, ParseError> {
    let mut ids: HashMap<u64, Vertex> = HashMap::new();
    let mut labels = Vec::new();
    let mut edges = Vec::new();
    let mut lines = Vec::new();
    for (i, raw) in text.split('\n').enumerate() {
        let line_no = i + 1;
        let line = raw.replace('\r', "");
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(ParseError::Syntax {
                line: line_no,
                message: format!("expected two vertex labels, found {}", tokens.len()),
            });
        }
        let mut pair = [0; 2];
        for (slot, token) in pair.iter_mut().zip(&tokens) {
            let label: u64 = token.parse().map_err(|_| ParseError::Syntax {
                line: line_no,
                message: format!("{token:?} is not a non-negative integer"),
            })?;
            *slot = *ids.entry(label).or_insert_with(|| {
                labels.push(label);
                labels.len() - 1
            });
        }
        edges.push((pair[0], pair[1]));
        lines.push(line_no);
    }
    if edges.is_empty() {
        return Err(ParseError::Empty);
    }
    let tree = Tree::with_order(labels.len(), &edges).map_err(|e| match e {
        TreeError::CycleDetected { index, .. }
        | TreeError::SelfLoop { index, .. }
        | TreeError::DuplicateEdge { index, .. } => ParseError::AtLine {
            line: lines[index],
            source: e,
        },
        other => ParseError::Tree(other),
    })?;
    Ok(LabeledTree { tree, labels })
}

/// Writes the edges as `label label` lines, smaller id first, sorted by id.
pub fn format_edge_list(tree: &LabeledTree) -> String {
    let mut out = String::new();
    for (u, v) in tree.tree.edges() {
        writeln!(out, "{} {}", tree.labels[u], tree.labels[v]).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{generate, Family};

    #[test]
    fn parses_path_and_star() {
        let p = parse_edge_list("0 1\n1 2\n").unwrap();
        assert!(p.tree.is_path());
        assert_eq!(p.tree.order(), 3);
        let s = parse_edge_list("# star\n0 1\n0 2\n0 3\n").unwrap();
        assert!(s.tree.is_star());
        assert_eq!(s.tree.order(), 4);
    }

    #[test]
    fn remaps_labels_by_first_appearance() {
        let t = parse_edge_list("10 7\r\n\n7 42\n   \n# trailing comment").unwrap();
        assert_eq!(t.labels, vec![10, 7, 42]);
        assert_eq!(t.tree.edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(t.id_of(42), Some(2));
        assert_eq!(t.id_of(5), None);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_edge_list("0 1\n0 1\n").unwrap_err();
        assert!(matches!(
            err,
            ParseError::AtLine {
                line: 2,
                source: TreeError::DuplicateEdge { .. }
            }
        ));
        let err = parse_edge_list("0 1\n\n1 2\n2 0\n").unwrap_err();
        assert_eq!(err.line(), Some(4));
        let err = parse_edge_list("0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 2, .. }));
        let err = parse_edge_list("0 1 2\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }));
        let err = parse_edge_list("0 -1\n").unwrap_err();
        assert!(matches!(err, ParseError::Syntax { line: 1, .. }));
        let err = parse_edge_list("3 3\n").unwrap_err();
        assert!(matches!(err, ParseError::AtLine { line: 1, source: TreeError::SelfLoop { .. } }));
        assert_eq!(parse_edge_list("# nothing\n\n"), Err(ParseError::Empty));
        assert!(matches!(
            parse_edge_list("0 1\n2 3\n"),
            Err(ParseError::Tree(TreeError::Disconnected { .. }))
        ));
    }

    #[test]
    fn formats_with_labels() {
        let t = generate(&Family::Path, 3, 0).unwrap();
        let labeled = LabeledTree {
            tree: t,
            labels: vec![5, 9, 2],
        };
        assert_eq!(format_edge_list(&labeled), "5 9\n9 2\n");
    }
}
