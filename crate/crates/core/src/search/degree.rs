use std::collections::HashSet;

use super::{dedup_images, find_embeddings, ImageAction, Limit, SearchConfig, SearchError, SearchStats, SolutionSet};
use crate::families::{build_family, Family};
use crate::table::CayleyTable;

/// Smallest degree `d ≤ max_degree` such that `source` embeds into
/// `family` at degree `d`.
pub fn minimal_degree(
    source: &CayleyTable,
    family: Family,
    max_degree: usize,
    config: &SearchConfig,
) -> Result<Option<usize>, SearchError> {
    let config = config.with_limit(Limit::First(1));
    for degree in 1..=max_degree {
        if family
            .expected_order(degree)
            .is_some_and(|order| order < source.order() as u128)
        {
            continue;
        }
        let target = build_family(family, degree).map_err(|source| SearchError::Family { degree, source })?;
        if !find_embeddings(source, target.table(), &config).solutions.is_empty() {
            return Ok(Some(degree));
        }
    }
    Ok(None)
}

/// Embeddings of a source into a target, counted three ways.
#[derive(Clone, Debug)]
pub struct EmbeddingCount {
    /// Every injective homomorphism.
    pub embeddings: usize,
    /// Distinct image subsemigroups.
    pub images: usize,
    /// One representative per orbit of the action on images.
    pub classes: SolutionSet,
    pub stats: SearchStats,
}

/// Counts the copies of `source` inside `target` up to `action`.
pub fn count_embeddings(
    source: &CayleyTable,
    target: &CayleyTable,
    action: &ImageAction,
    config: &SearchConfig,
) -> EmbeddingCount {
    let report = find_embeddings(source, target, &config.with_limit(Limit::All));
    let images: HashSet<&Vec<u32>> = report.solutions.images.iter().collect();
    EmbeddingCount {
        embeddings: report.solutions.len(),
        images: images.len(),
        classes: dedup_images(&report.solutions, action),
        stats: report.stats,
    }
}
