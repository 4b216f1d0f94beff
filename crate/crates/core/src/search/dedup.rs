use std::collections::{BTreeMap, HashMap};

use rustc_hash::FxHashMap;

use super::{automorphism_group, DedupMode, SearchError, SolutionSet};
use crate::families::{permutations, Element};
use crate::table::{CayleyTable, GeneratedTable};

/// Largest degree for which all `d!` relabelings are enumerated.
pub const MAX_CONJUGATION_DEGREE: usize = 8;

/// A finite group acting on target indices, used to merge solution images
/// that are equivalent under it.
#[derive(Clone, Debug)]
pub struct ImageAction {
    mode: DedupMode,
    /// Each group element as a map of target indices.
    group: Vec<Vec<u32>>,
    /// Sort key of each target index; images are compared as sorted key
    /// lists.
    rank: Vec<u32>,
}

impl ImageAction {
    pub fn trivial(target_order: usize) -> Self {
        Self {
            mode: DedupMode::None,
            group: vec![(0..target_order as u32).collect()],
            rank: (0..target_order as u32).collect(),
        }
    }

    /// Relabeling of points by all of `S_d`, acting on the elements of a
    /// generated table. Images are ranked by their canonical element
    /// encodings.
    pub fn conjugation<E: Element>(target: &GeneratedTable<E>) -> Result<Self, SearchError> {
        let elements = target.elements();
        let degree = elements[0].degree();
        if degree > MAX_CONJUGATION_DEGREE {
            return Err(SearchError::DegreeTooLarge(degree));
        }
        let index: FxHashMap<&[u8], u32> = elements
            .iter()
            .enumerate()
            .map(|(k, e)| (e.encoding(), k as u32))
            .collect();
        let mut group = Vec::new();
        for perm in permutations(degree) {
            let moved = elements
                .iter()
                .map(|e| {
                    let c = e.conjugate(&perm);
                    index.get(c.encoding()).copied().ok_or_else(|| {
                        SearchError::UnsupportedAction(format!(
                            "the conjugate of {e} is not in the target"
                        ))
                    })
                })
                .collect::<Result<Vec<u32>, _>>()?;
            group.push(moved);
        }
        let mut by_encoding: Vec<u32> = (0..elements.len() as u32).collect();
        by_encoding.sort_by(|&a, &b| elements[a as usize].encoding().cmp(elements[b as usize].encoding()));
        let mut rank = vec![0u32; elements.len()];
        for (r, &k) in by_encoding.iter().enumerate() {
            rank[k as usize] = r as u32;
        }
        Ok(Self {
            mode: DedupMode::Conjugation,
            group,
            rank,
        })
    }

    /// Conjugation needs element payloads; a bare table cannot supply them.
    pub fn conjugation_for<E: Element>(
        target: &CayleyTable,
        elements: Option<&GeneratedTable<E>>,
    ) -> Result<Self, SearchError> {
        match elements {
            Some(g) if g.table() == target => Self::conjugation(g),
            Some(_) => Err(SearchError::UnsupportedAction(
                "element payloads do not belong to the target table".into(),
            )),
            None => Err(SearchError::UnsupportedAction(
                "conjugation requires a target with element payloads (a generator file or family)".into(),
            )),
        }
    }

    /// The automorphism group of the target table.
    pub fn automorphisms(target: &CayleyTable) -> Self {
        Self::from_group(DedupMode::Automorphism, automorphism_group(target).maps)
    }

    pub fn from_group(mode: DedupMode, group: Vec<Vec<u32>>) -> Self {
        let n = group.first().map_or(0, Vec::len);
        Self {
            mode,
            group,
            rank: (0..n as u32).collect(),
        }
    }

    pub fn mode(&self) -> DedupMode {
        self.mode
    }

    pub fn group_order(&self) -> usize {
        self.group.len()
    }

    fn key(&self, g: &[u32], image: &[u32]) -> Vec<u32> {
        let mut key: Vec<u32> = image.iter().map(|&t| self.rank[g[t as usize] as usize]).collect();
        key.sort_unstable();
        key
    }

    /// Sorted rank list of `image` itself.
    pub fn identity_key(&self, image: &[u32]) -> Vec<u32> {
        let mut key: Vec<u32> = image.iter().map(|&t| self.rank[t as usize]).collect();
        key.sort_unstable();
        key
    }

    /// The orbit-minimal sorted rank list of `image`.
    pub fn canonical_key(&self, image: &[u32]) -> Vec<u32> {
        self.group
            .iter()
            .map(|g| self.key(g, image))
            .min()
            .expect("group is non-empty")
    }

    /// Group elements that carry `image` to its canonical key.
    fn minimizers(&self, image: &[u32]) -> (Vec<u32>, Vec<&[u32]>) {
        let mut best: Option<Vec<u32>> = None;
        let mut which = Vec::new();
        for g in &self.group {
            let key = self.key(g, image);
            match &best {
                Some(b) if key > *b => {}
                Some(b) if key == *b => which.push(g.as_slice()),
                _ => {
                    best = Some(key);
                    which = vec![g.as_slice()];
                }
            }
        }
        (best.expect("group is non-empty"), which)
    }
}

/// Keeps one image per orbit of `action`.
///
/// Each retained image is the orbit member with the smallest sorted rank
/// list; its map is the smallest map over the orbit carried onto that
/// image. The result is sorted by canonical key and does not depend on the
/// order of the input.
pub fn dedup_images(solutions: &SolutionSet, action: &ImageAction) -> SolutionSet {
    // smallest map per distinct image first
    let mut per_image: HashMap<&[u32], &[u32]> = HashMap::new();
    for (map, image) in solutions.maps.iter().zip(&solutions.images) {
        per_image
            .entry(image.as_slice())
            .and_modify(|m| {
                if map.as_slice() < *m {
                    *m = map.as_slice();
                }
            })
            .or_insert(map.as_slice());
    }

    let mut orbits: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
    for (image, map) in per_image {
        let (key, movers) = action.minimizers(image);
        let best = movers
            .into_iter()
            .map(|g| map.iter().map(|&t| g[t as usize]).collect::<Vec<u32>>())
            .min()
            .expect("at least one minimizer");
        orbits
            .entry(key)
            .and_modify(|m| {
                if best < *m {
                    *m = best.clone();
                }
            })
            .or_insert(best);
    }

    let maps: Vec<Vec<u32>> = orbits.into_values().collect();
    let mut set = SolutionSet::new(maps);
    set.dedup = action.mode;
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build_family, Family};
    use crate::search::{find_embeddings, SearchConfig};
    use crate::table::CayleyTable;

    #[test]
    fn idempotents_of_t2_up_to_conjugation() {
        let t2 = build_family(Family::Transformations, 2).unwrap();
        let all = find_embeddings(&CayleyTable::trivial(), t2.table(), &SearchConfig::default()).solutions;
        assert_eq!(all.len(), 3);
        let action = ImageAction::conjugation(&t2).unwrap();
        let classes = dedup_images(&all, &action);
        assert_eq!(classes.len(), 2);
        assert_eq!(classes.dedup, DedupMode::Conjugation);
        // representatives: [1,1] (constant) and [1,2] (identity)
        assert_eq!(classes.maps, vec![vec![0], vec![1]]);
    }

    #[test]
    fn trivial_action_keeps_distinct_images() {
        let t3 = build_family(Family::Transformations, 3).unwrap();
        let z2 = CayleyTable::cyclic_group(2);
        let all = find_embeddings(&z2, t3.table(), &SearchConfig::default()).solutions;
        let kept = dedup_images(&all, &ImageAction::trivial(t3.order()));
        assert_eq!(kept.len(), all.len());
        let mut images = all.images.clone();
        images.sort();
        assert_eq!(kept.images, images);
    }

    #[test]
    fn dedup_is_idempotent_and_order_independent() {
        let t3 = build_family(Family::Transformations, 3).unwrap();
        let t2 = build_family(Family::Transformations, 2).unwrap();
        let all = find_embeddings(t2.table(), t3.table(), &SearchConfig::default()).solutions;
        let action = ImageAction::conjugation(&t3).unwrap();
        let once = dedup_images(&all, &action);
        assert_eq!(dedup_images(&once, &action), once);
        let mut reversed = all.clone();
        reversed.maps.reverse();
        reversed.images.reverse();
        assert_eq!(dedup_images(&reversed, &action), once);
        assert_eq!(once.len(), 3);

        let by_aut = dedup_images(&all, &ImageAction::automorphisms(t3.table()));
        assert_eq!(by_aut.len(), 3);
    }

    #[test]
    fn conjugation_needs_payloads() {
        let t2 = build_family(Family::Transformations, 2).unwrap();
        let err = ImageAction::conjugation_for::<crate::FamilyElement>(t2.table(), None).unwrap_err();
        assert!(matches!(err, SearchError::UnsupportedAction(_)));
        assert!(ImageAction::conjugation_for(t2.table(), Some(&t2)).is_ok());
    }
}
