//! Embedding, isomorphism and automorphism search over multiplication tables.

mod backtrack;
mod dedup;
mod degree;
mod twogen;

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use thiserror::Error;

use crate::families::FamilyError;
use crate::invariants::{build_partition, table_profile, ClassPartition, Infeasible, PartitionMode};
use crate::table::CayleyTable;

use backtrack::{Backtrack, Counters, Plan};

pub use dedup::{dedup_images, ImageAction};
pub use degree::{count_embeddings, minimal_degree, EmbeddingCount};
pub use twogen::{two_generated_embeddings, TwoGenHit, TwoGenReport};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("unsupported action: {0}")]
    UnsupportedAction(String),
    #[error("degree {0} is too large for a conjugation action")]
    DegreeTooLarge(usize),
    #[error("building the family at degree {degree} failed: {source}")]
    Family {
        degree: usize,
        #[source]
        source: FamilyError,
    },
}

/// How many solutions to collect.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Limit {
    First(usize),
    All,
}

impl Limit {
    fn reached(self, count: usize) -> bool {
        matches!(self, Limit::First(k) if count >= k)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub limit: Limit,
    /// Restrict candidates to matching invariant classes. Turning this off
    /// keeps the element order but lets every element try every target.
    pub partition: bool,
    /// Worker threads; above 1 the first position's candidates are split
    /// across workers and results are merged in sequential order.
    pub threads: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            limit: Limit::All,
            partition: true,
            threads: 1,
        }
    }
}

impl SearchConfig {
    pub fn first() -> Self {
        Self {
            limit: Limit::First(1),
            ..Self::default()
        }
    }

    pub fn with_limit(mut self, limit: Limit) -> Self {
        self.limit = limit;
        self
    }

    pub fn without_partition(mut self) -> Self {
        self.partition = false;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }
}

/// Which equivalence was used to merge solution images.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DedupMode {
    None,
    Conjugation,
    Automorphism,
}

impl fmt::Display for DedupMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DedupMode::None => "none",
            DedupMode::Conjugation => "conjugation",
            DedupMode::Automorphism => "automorphism",
        })
    }
}

/// Injective homomorphisms, each stored as the list of target indices of
/// source elements `0..m`, with their sorted images.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSet {
    pub maps: Vec<Vec<u32>>,
    pub images: Vec<Vec<u32>>,
    pub dedup: DedupMode,
}

impl SolutionSet {
    pub fn new(maps: Vec<Vec<u32>>) -> Self {
        let images = maps.iter().map(|m| sorted(m.clone())).collect();
        Self {
            maps,
            images,
            dedup: DedupMode::None,
        }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// One line per map, 1-based target indices separated by spaces.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for map in &self.maps {
            let line: Vec<String> = map.iter().map(|t| (t + 1).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

fn sorted(mut v: Vec<u32>) -> Vec<u32> {
    v.sort_unstable();
    v
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchStats {
    /// Size of the candidate space the invariant classes allow.
    pub search_space: BigUint,
    /// Partial maps that passed every check.
    pub nodes: u64,
    /// Candidate extensions tried.
    pub candidates: u64,
    /// Candidate extensions tried at the final position.
    pub leaf_candidates: u64,
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub solutions: SolutionSet,
    pub stats: SearchStats,
    /// Set when the class pre-check ruled out any solution.
    pub infeasible: Option<Infeasible>,
}

/// Checks `map` directly: correct length and range, injective, and
/// `map(i)·map(j) = map(ij)` for every pair.
pub fn verify_embedding(source: &CayleyTable, target: &CayleyTable, map: &[u32]) -> bool {
    let (m, n) = (source.order(), target.order());
    if map.len() != m || map.iter().any(|&t| t as usize >= n) {
        return false;
    }
    let distinct: HashSet<u32> = map.iter().copied().collect();
    if distinct.len() != m {
        return false;
    }
    (0..m).all(|i| {
        (0..m).all(|j| target.get(map[i] as usize, map[j] as usize) == map[source.get(i, j) as usize])
    })
}

fn run_search(
    source: &CayleyTable,
    target: &CayleyTable,
    mode: PartitionMode,
    config: &SearchConfig,
) -> SearchReport {
    let unpartitioned = ClassPartition::unpartitioned(source.order(), target.order(), mode);
    let partition = build_partition(source, target, mode);
    let (candidates, ordering, infeasible) = match (&partition, config.partition) {
        (Ok(p), true) => (p.clone(), p.clone(), None),
        (Ok(p), false) => (unpartitioned.clone(), p.clone(), None),
        (Err(why), true) => {
            return SearchReport {
                solutions: SolutionSet::new(Vec::new()),
                stats: SearchStats {
                    search_space: BigUint::from(0u32),
                    nodes: 0,
                    candidates: 0,
                    leaf_candidates: 0,
                },
                infeasible: Some(why.clone()),
            };
        }
        (Err(_), false) => (unpartitioned.clone(), unpartitioned.clone(), None),
    };
    let search_space = if source.order() > target.order() {
        BigUint::from(0u32)
    } else {
        candidates.search_space_size()
    };
    let plan = Plan::new(source, target.order(), &candidates, &ordering);
    let (maps, counters) = execute(source, target, &plan, config);
    SearchReport {
        solutions: SolutionSet::new(maps),
        stats: SearchStats {
            search_space,
            nodes: counters.nodes,
            candidates: counters.candidates,
            leaf_candidates: counters.leaf_candidates,
        },
        infeasible,
    }
}

fn execute(
    source: &CayleyTable,
    target: &CayleyTable,
    plan: &Plan,
    config: &SearchConfig,
) -> (Vec<Vec<u32>>, Counters) {
    if source.order() > target.order() {
        return (Vec::new(), Counters::default());
    }
    let limit = config.limit;
    let collect = |root: Option<&[u32]>| {
        let mut engine = Backtrack::new(source, target, plan);
        let mut maps = Vec::new();
        if !limit.reached(0) {
            engine.run(root, |phi| {
                maps.push(phi.to_vec());
                !limit.reached(maps.len())
            });
        }
        (maps, engine.counters)
    };

    if config.threads <= 1 {
        return collect(None);
    }
    let first = plan.order[0] as usize;
    let roots = &plan.candidates[first];
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .expect("thread pool");
    let parts: Vec<(Vec<Vec<u32>>, Counters)> =
        pool.install(|| roots.par_iter().map(|&r| collect(Some(&[r]))).collect());
    let mut maps = Vec::new();
    let mut counters = Counters::default();
    for (part, c) in parts {
        counters += c;
        maps.extend(part);
    }
    if let Limit::First(k) = limit {
        maps.truncate(k);
    }
    (maps, counters)
}

/// Injective homomorphisms of `source` into `target`, found by backtrack
/// over index-period classes.
pub fn find_embeddings(source: &CayleyTable, target: &CayleyTable, config: &SearchConfig) -> SearchReport {
    run_search(source, target, PartitionMode::Embedding, config)
}

/// Result of an isomorphism test.
#[derive(Clone, Debug)]
pub struct IsomorphismReport {
    pub map: Option<Vec<u32>>,
    /// Name of the first table-profile field that differs, when the
    /// profiles alone rule out an isomorphism.
    pub profile_difference: Option<&'static str>,
    pub stats: SearchStats,
}

/// An isomorphism `a → b`, if one exists.
pub fn find_isomorphism(a: &CayleyTable, b: &CayleyTable, config: &SearchConfig) -> IsomorphismReport {
    let empty_stats = || SearchStats {
        search_space: BigUint::from(0u32),
        nodes: 0,
        candidates: 0,
        leaf_candidates: 0,
    };
    if config.partition {
        let (pa, pb) = (table_profile(a), table_profile(b));
        if let Some(field) = pa.first_difference(&pb) {
            return IsomorphismReport {
                map: None,
                profile_difference: Some(field),
                stats: empty_stats(),
            };
        }
    } else if a.order() != b.order() {
        return IsomorphismReport {
            map: None,
            profile_difference: Some("order"),
            stats: empty_stats(),
        };
    }
    let config = SearchConfig {
        limit: Limit::First(1),
        ..*config
    };
    let report = run_search(a, b, PartitionMode::Isomorphism, &config);
    IsomorphismReport {
        map: report.solutions.maps.into_iter().next(),
        profile_difference: None,
        stats: report.stats,
    }
}

/// All automorphisms of `table`, as permutations of its indices.
pub fn automorphism_group(table: &CayleyTable) -> SolutionSet {
    automorphism_search(table, &SearchConfig::default()).solutions
}

pub fn automorphism_search(table: &CayleyTable, config: &SearchConfig) -> SearchReport {
    let config = SearchConfig {
        limit: Limit::All,
        ..*config
    };
    run_search(table, table, PartitionMode::Isomorphism, &config)
}

/// True if `maps` (permutations of `0..n`) contain the identity and are
/// closed under composition and inversion.
pub fn is_group(maps: &[Vec<u32>]) -> bool {
    let Some(first) = maps.first() else {
        return false;
    };
    let n = first.len();
    let set: HashSet<&[u32]> = maps.iter().map(Vec::as_slice).collect();
    let identity: Vec<u32> = (0..n as u32).collect();
    if !set.contains(identity.as_slice()) {
        return false;
    }
    maps.iter().all(|g| {
        let mut inverse = vec![0u32; n];
        for (i, &x) in g.iter().enumerate() {
            inverse[x as usize] = i as u32;
        }
        set.contains(inverse.as_slice())
            && maps.iter().all(|h| {
                let composed: Vec<u32> = g.iter().map(|&x| h[x as usize]).collect();
                set.contains(composed.as_slice())
            })
    })
}
