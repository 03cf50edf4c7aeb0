//! Property sweeps over a corpus of trees: the greedy algorithm against the
//! oracle, the structural checkers, and the average-index bounds.

use serde::Serialize;

use crate::generate::{all_labeled_trees, random_trees};
use crate::kecc::{avg_profile, steiner_k_ecc};
use crate::oracle::{
    binomial, check_containment, check_ecc_invariance, ecc_k_bruteforce_with, OracleError,
    OracleOptions, SearchMode, DEFAULT_WORK_BUDGET,
};
use crate::transform::{find_transform_path, pi_transform, Goal};
use crate::tree::{Tree, Vertex};
use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSelection {
    All,
    One(usize),
}

impl KSelection {
    fn contains(self, k: usize) -> bool {
        match self {
            KSelection::All => true,
            KSelection::One(j) => j == k,
        }
    }

    fn for_order(self, n: usize) -> Vec<usize> {
        (1..=n).filter(|&k| self.contains(k)).collect()
    }
}

#[derive(Debug, Clone)]
pub struct CheckConfig {
    /// Every labeled tree up to this order is checked.
    pub exhaustive_max_n: usize,
    /// Largest order in the corpus; orders above `exhaustive_max_n` get
    /// `random_per_n` seeded random trees each.
    pub max_n: usize,
    pub random_per_n: usize,
    pub seed: u64,
    pub k: KSelection,
    pub budget: u64,
}

impl Default for CheckConfig {
    fn default() -> Self {
        Self {
            exhaustive_max_n: 8,
            max_n: 40,
            random_per_n: 500,
            seed: 0,
            k: KSelection::All,
            budget: DEFAULT_WORK_BUDGET,
        }
    }
}

/// Names of the swept properties, in report order.
pub const PROPERTIES: [&str; 6] = [
    "oracle_equivalence",
    "k2_matches_bfs",
    "containment",
    "ecc_invariance",
    "pi_monotonicity",
    "bounds",
];

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PropertyTally {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub skipped: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub property: &'static str,
    pub edges: Vec<(Vertex, Vertex)>,
    pub vertex: Option<Vertex>,
    pub k: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub trees: u64,
    pub properties: Vec<PropertyTally>,
    pub counterexamples: u64,
    pub first_counterexample: Option<Counterexample>,
}

impl CheckReport {
    fn new() -> Self {
        Self {
            trees: 0,
            properties: PROPERTIES
                .iter()
                .map(|&name| PropertyTally {
                    name,
                    ..Default::default()
                })
                .collect(),
            counterexamples: 0,
            first_counterexample: None,
        }
    }

    pub fn tally(&self, name: &str) -> &PropertyTally {
        self.properties.iter().find(|p| p.name == name).expect("known property")
    }

    fn record(&mut self, index: usize, outcome: Outcome, make: impl FnOnce() -> Counterexample) {
        let tally = &mut self.properties[index];
        match outcome {
            Outcome::Pass => tally.passed += 1,
            Outcome::Skip => tally.skipped += 1,
            Outcome::Fail => {
                tally.failed += 1;
                self.counterexamples += 1;
                if self.first_counterexample.is_none() {
                    self.first_counterexample = Some(make());
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Pass,
    Fail,
    Skip,
}

impl From<bool> for Outcome {
    fn from(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

/// Runs every property over the configured corpus.
pub fn run_check(config: &CheckConfig) -> CheckReport {
    let mut report = CheckReport::new();
    for n in 1..=config.exhaustive_max_n.min(config.max_n) {
        for tree in all_labeled_trees(n) {
            check_tree(&tree, config, true, &mut report);
        }
    }
    for n in config.exhaustive_max_n + 1..=config.max_n {
        for tree in random_trees(n, config.random_per_n, config.seed) {
            check_tree(&tree, config, false, &mut report);
        }
    }
    report
}

/// Checks one tree. The structural checkers need full enumeration and only
/// run when `structural` is set and the search fits the budget.
pub fn check_tree(tree: &Tree, config: &CheckConfig, structural: bool, report: &mut CheckReport) {
    report.trees += 1;
    let n = tree.order();
    let ks = config.k.for_order(n);
    let cx = |property, vertex, k, detail: String| Counterexample {
        property,
        edges: tree.edges(),
        vertex,
        k,
        detail,
    };
    let options = OracleOptions {
        mode: SearchMode::Auto,
        budget: Some(config.budget),
    };
    let full_search_cost = |k: usize| binomial(n - 1, k - 1).saturating_mul(n as u128);

    for v in tree.vertices() {
        for &k in &ks {
            let fast = steiner_k_ecc(tree, v, k).expect("valid query").ecc;
            match ecc_k_bruteforce_with(tree, v, k, &options) {
                Ok(truth) => report.record(0, (fast == truth.value).into(), || {
                    cx(PROPERTIES[0], Some(v), k, format!("fast {fast}, brute force {}", truth.value))
                }),
                Err(OracleError::BudgetExceeded { .. }) => report.record(0, Outcome::Skip, || unreachable!()),
                Err(e) => panic!("oracle failed on a valid query: {e}"),
            }
            if k == 2 {
                let bfs = tree.distances_from(v).into_iter().max().unwrap_or(0);
                report.record(1, (fast == bfs).into(), || {
                    cx(PROPERTIES[1], Some(v), k, format!("fast {fast}, BFS eccentricity {bfs}"))
                });
            }
            let affordable = structural && full_search_cost(k) <= config.budget as u128;
            if k >= 2 {
                let outcome = if affordable {
                    check_containment(tree, v, k).expect("valid query").into()
                } else {
                    Outcome::Skip
                };
                report.record(2, outcome, || {
                    cx(PROPERTIES[2], Some(v), k, "a k-ecc tree contains no (k-1)-ecc tree".into())
                });
            }
            let outcome = if affordable {
                check_ecc_invariance(tree, v, k).expect("valid query").into()
            } else {
                Outcome::Skip
            };
            report.record(3, outcome, || {
                cx(PROPERTIES[3], Some(v), k, "k-ecc trees differ in eccentricity".into())
            });
        }
    }

    let averages = avg_profile(tree);
    let bound_ks: Vec<usize> = ks.iter().copied().filter(|&k| k >= 3 && k < n).collect();
    if let Some(site) = find_transform_path(tree, Goal::Star) {
        let (next, step) = pi_transform(tree, &site).expect("selected sites are valid");
        let after = avg_profile(&next);
        for &k in &bound_ks {
            let ok = after[k - 1] <= averages[k - 1];
            report.record(4, ok.into(), || {
                cx(
                    PROPERTIES[4],
                    None,
                    k,
                    format!("{step}: average rose from {} to {}", averages[k - 1], after[k - 1]),
                )
            });
        }
    }
    for &k in &bound_ks {
        let avg = averages[k - 1];
        let lower = Rational::from_integer(k as u64) - Rational::new(1, n as u64);
        let upper = Rational::from_integer(n as u64 - 1);
        report.record(5, (lower <= avg && avg <= upper).into(), || {
            cx(PROPERTIES[5], None, k, format!("average {avg} outside [{lower}, {upper}]"))
        });
    }
}
