use std::collections::BTreeMap;

use rustc_hash::FxHashMap;

use super::{dedup_images, find_embeddings, ImageAction, Limit, SearchConfig, SearchError, SolutionSet};
use crate::families::Element;
use crate::table::{CayleyTable, GeneratedTable};

/// A 2-generated subsemigroup of the target that contains a copy of the
/// source.
#[derive(Clone, Debug)]
pub struct TwoGenHit {
    /// Generating pair, as target indices.
    pub generators: (u32, u32),
    /// Elements of the subsemigroup, sorted target indices.
    pub subsemigroup: Vec<u32>,
    /// All embeddings into the subsemigroup, in target indices.
    pub solutions: SolutionSet,
}

#[derive(Clone, Debug)]
pub struct TwoGenReport {
    /// Distinct subsemigroups generated by a pair of target elements.
    pub closures: usize,
    /// Those at least as large as the source, one per orbit of the action.
    pub candidates: usize,
    /// Candidates that admit an embedding.
    pub hits: Vec<TwoGenHit>,
    /// Images over all hits, one per orbit of the action.
    pub distinct_images: SolutionSet,
}

/// Embeddings of `source` into 2-generated subsemigroups of `target`.
///
/// Every pair `{a, b}` of target elements (including `a = b`) is closed;
/// equal closures are merged, those smaller than the source dropped, and
/// the rest reduced to one per conjugacy class when the target is closed
/// under relabeling of points. Each survivor is then searched exhaustively.
pub fn two_generated_embeddings<E: Element>(
    source: &CayleyTable,
    target: &GeneratedTable<E>,
    config: &SearchConfig,
) -> Result<TwoGenReport, SearchError> {
    let table = target.table();
    let n = table.order() as u32;
    let action = match ImageAction::conjugation(target) {
        Ok(a) => a,
        Err(SearchError::UnsupportedAction(_)) => ImageAction::trivial(table.order()),
        Err(e) => return Err(e),
    };

    let mut closures: FxHashMap<Vec<u32>, (u32, u32)> = FxHashMap::default();
    for a in 0..n {
        for b in a..n {
            let closure = table.subsemigroup_closure(&[a, b]);
            closures.entry(closure).or_insert((a, b));
        }
    }
    let closure_count = closures.len();

    // one closure per orbit: the member whose own key is smallest
    // canonical key -> (own key, closure, generating pair)
    type Entry = (Vec<u32>, Vec<u32>, (u32, u32));
    let mut representatives: BTreeMap<Vec<u32>, Entry> = BTreeMap::new();
    for (set, pair) in closures {
        if set.len() < source.order() {
            continue;
        }
        let canonical = action.canonical_key(&set);
        let own_key = action.identity_key(&set);
        representatives
            .entry(canonical)
            .and_modify(|entry| {
                if (own_key.clone(), pair) < (entry.0.clone(), entry.2) {
                    *entry = (own_key.clone(), set.clone(), pair);
                }
            })
            .or_insert((own_key, set, pair));
    }
    let candidates = representatives.len();

    let config = config.with_limit(Limit::All);
    let mut hits = Vec::new();
    let mut all_maps = Vec::new();
    for (_, (_, set, pair)) in representatives {
        let sub = table.restrict(&set);
        let found = find_embeddings(source, &sub, &config).solutions;
        if found.is_empty() {
            continue;
        }
        let maps: Vec<Vec<u32>> = found
            .maps
            .iter()
            .map(|m| m.iter().map(|&k| set[k as usize]).collect())
            .collect();
        all_maps.extend(maps.iter().cloned());
        hits.push(TwoGenHit {
            generators: pair,
            subsemigroup: set,
            solutions: SolutionSet::new(maps),
        });
    }
    let distinct_images = dedup_images(&SolutionSet::new(all_maps), &action);
    Ok(TwoGenReport {
        closures: closure_count,
        candidates,
        hits,
        distinct_images,
    })
}
