#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use semiembed::families::{enumerate_family, Transformation};
use semiembed::invariants::{element_profiles, table_profile};
use semiembed::search::{automorphism_group, find_embeddings, is_group, SearchConfig};
use semiembed::{build_family, close_generators, CayleyTable, Element, Family, FamilyElement};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Every associative labeled table of order `n` (small `n` only).
pub fn all_semigroups(n: usize) -> Vec<CayleyTable> {
    let cells = n * n;
    let total = n.pow(cells as u32);
    (0..total)
        .filter_map(|mut code| {
            let mut entries = vec![0u32; cells];
            for e in entries.iter_mut() {
                *e = (code % n) as u32;
                code /= n;
            }
            let t = CayleyTable::from_entries(n, entries).ok()?;
            t.is_associative().then_some(t)
        })
        .collect()
}

/// Sources for the oracle corpus: all semigroups of order at most 3.
pub fn small_sources() -> Vec<CayleyTable> {
    (1..=3).flat_map(all_semigroups).collect()
}

/// Targets for the oracle corpus: family tables, cyclic groups and random
/// transformation semigroups, all of order at most 5.
pub fn small_targets() -> Vec<CayleyTable> {
    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let mut out = Vec::new();
    let mut push = |t: CayleyTable| {
        if t.order() <= 5 && seen.insert(t.entries().to_vec()) {
            out.push(t);
        }
    };
    for family in Family::ALL {
        for degree in 1..=3 {
            if family.expected_order(degree).is_some_and(|n| n <= 5) {
                push(build_family(family, degree).unwrap().table().clone());
            }
        }
    }
    for n in 1..=5 {
        push(CayleyTable::cyclic_group(n));
    }
    push(CayleyTable::cyclic_group(2).direct_product(&CayleyTable::cyclic_group(2)));
    for t in all_semigroups(2) {
        push(t);
    }
    let mut r = rng(7);
    let mut found = 0;
    while found < 60 {
        let degree = r.gen_range(2..=4);
        let gens: Vec<Transformation> = (0..r.gen_range(1..=2))
            .map(|_| Transformation::new((0..degree).map(|_| r.gen_range(0..degree as u8)).collect()).unwrap())
            .collect();
        if let Ok(g) = close_generators(&gens) {
            if g.order() <= 5 {
                let n = g.order();
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut r);
                push(g.table().relabel(&perm));
                found += 1;
            }
        }
    }
    out
}

/// All embeddings found by trying every injective map.
pub fn brute_force(source: &CayleyTable, target: &CayleyTable) -> BTreeSet<Vec<u32>> {
    let m = source.order();
    let n = target.order();
    let mut out = BTreeSet::new();
    if m > n {
        return out;
    }
    let mut map = vec![0u32; m];
    let mut used = vec![false; n];
    fn rec(
        k: usize,
        s: &CayleyTable,
        t: &CayleyTable,
        map: &mut Vec<u32>,
        used: &mut Vec<bool>,
        out: &mut BTreeSet<Vec<u32>>,
    ) {
        if k == map.len() {
            let ok = (0..k).all(|i| {
                (0..k).all(|j| t.get(map[i] as usize, map[j] as usize) == map[s.get(i, j) as usize])
            });
            if ok {
                out.insert(map.clone());
            }
            return;
        }
        for y in 0..t.order() {
            if !used[y] {
                used[y] = true;
                map[k] = y as u32;
                rec(k + 1, s, t, map, used, out);
                used[y] = false;
            }
        }
    }
    rec(0, source, target, &mut map, &mut used, &mut out);
    out
}

fn solution_set(source: &CayleyTable, target: &CayleyTable, config: &SearchConfig) -> BTreeSet<Vec<u32>> {
    find_embeddings(source, target, config).solutions.maps.into_iter().collect()
}

/// Backtracking agrees with brute force on every corpus pair, with and
/// without class pruning.
pub fn check_oracle_corpus() -> Result<usize, String> {
    let sources = small_sources();
    let targets = small_targets();
    let pruned = SearchConfig::default();
    let plain = SearchConfig::default().without_partition();
    let mut pairs = 0;
    for (si, s) in sources.iter().enumerate() {
        for (ti, t) in targets.iter().enumerate() {
            let expected = brute_force(s, t);
            if solution_set(s, t, &pruned) != expected {
                return Err(format!("source {si} into target {ti}: pruned search disagrees with brute force"));
            }
            if solution_set(s, t, &plain) != expected {
                return Err(format!("source {si} into target {ti}: unpruned search disagrees with brute force"));
            }
            pairs += 1;
        }
    }
    Ok(pairs)
}

/// Class pruning never changes the solutions and never visits more nodes.
pub fn check_pruning_on_families() -> Result<(), String> {
    let sources = [
        CayleyTable::cyclic_group(2),
        CayleyTable::cyclic_group(3),
        build_family(Family::Transformations, 2).unwrap().table().clone(),
        build_family(Family::Brauer, 2).unwrap().table().clone(),
        build_family(Family::TemperleyLieb, 3).unwrap().table().clone(),
    ];
    let targets = [
        build_family(Family::Transformations, 3).unwrap(),
        build_family(Family::PartialPermutations, 3).unwrap(),
        build_family(Family::Brauer, 3).unwrap(),
    ];
    for s in &sources {
        for t in &targets {
            let a = find_embeddings(s, t.table(), &SearchConfig::default());
            let b = find_embeddings(s, t.table(), &SearchConfig::default().without_partition());
            let sa: BTreeSet<_> = a.solutions.maps.iter().collect();
            let sb: BTreeSet<_> = b.solutions.maps.iter().collect();
            if sa != sb {
                return Err(format!("order {} into order {}: solution sets differ", s.order(), t.order()));
            }
            if a.stats.nodes > b.stats.nodes {
                return Err(format!(
                    "order {} into order {}: pruned search visited {} nodes, unpruned {}",
                    s.order(),
                    t.order(),
                    a.stats.nodes,
                    b.stats.nodes
                ));
            }
        }
    }
    Ok(())
}

/// Automorphisms of corpus and family tables form groups.
pub fn check_automorphism_groups() -> Result<(), String> {
    let mut tables = small_sources();
    for family in Family::ALL {
        for degree in 1..=3 {
            if family.expected_order(degree).is_some_and(|n| n <= 64) {
                tables.push(build_family(family, degree).unwrap().table().clone());
            }
        }
    }
    for (k, t) in tables.iter().enumerate() {
        let aut = automorphism_group(t);
        if !is_group(&aut.maps) {
            return Err(format!("table {k} (order {}): automorphisms do not form a group", t.order()));
        }
    }
    Ok(())
}

/// Profiles are unchanged by relabeling the elements.
pub fn check_profile_relabeling(trials: usize) -> Result<(), String> {
    let tables = [
        build_family(Family::Transformations, 3).unwrap().table().clone(),
        build_family(Family::Brauer, 3).unwrap().table().clone(),
        build_family(Family::PartialPermutations, 2).unwrap().table().clone(),
        CayleyTable::cyclic_group(6),
    ];
    let mut r = rng(11);
    for trial in 0..trials {
        let t = &tables[trial % tables.len()];
        let mut perm: Vec<usize> = (0..t.order()).collect();
        perm.shuffle(&mut r);
        let moved = t.relabel(&perm);
        if table_profile(t) != table_profile(&moved) {
            return Err(format!("trial {trial}: table profile changed"));
        }
        let before = element_profiles(t);
        let after = element_profiles(&moved);
        if (0..t.order()).any(|k| before[k] != after[perm[k]]) {
            return Err(format!("trial {trial}: an element profile changed"));
        }
    }
    Ok(())
}

/// Enumerated families have the closed-form orders.
pub fn check_order_formulas() -> Result<(), String> {
    for family in Family::ALL {
        for degree in 1..=5 {
            let Some(expected) = family.expected_order(degree) else { continue };
            if expected > 5000 {
                continue;
            }
            let got = enumerate_family(family, degree).map_err(|e| e.to_string())?.len() as u128;
            if got != expected {
                return Err(format!("{family} at degree {degree}: {got} elements, expected {expected}"));
            }
        }
    }
    Ok(())
}

fn associative(a: &FamilyElement, b: &FamilyElement, c: &FamilyElement) -> bool {
    a.compose(b).compose(c) == a.compose(&b.compose(c))
}

/// Composition is associative: all triples at degree at most 2 and random
/// triples at degree at most 4.
pub fn check_composition_associativity(random_triples: usize) -> Result<(), String> {
    let mut r = rng(13);
    for family in Family::ALL {
        for degree in 1..=4 {
            let elements = enumerate_family(family, degree).map_err(|e| e.to_string())?;
            if degree <= 2 {
                for a in &elements {
                    for b in &elements {
                        for c in &elements {
                            if !associative(a, b, c) {
                                return Err(format!("{family}: ({a}{b}){c} differs from {a}({b}{c})"));
                            }
                        }
                    }
                }
            } else {
                for _ in 0..random_triples {
                    let pick = |r: &mut StdRng| &elements[r.gen_range(0..elements.len())];
                    let (a, b, c) = (pick(&mut r), pick(&mut r), pick(&mut r));
                    if !associative(a, b, c) {
                        return Err(format!("{family}: ({a}{b}){c} differs from {a}({b}{c})"));
                    }
                }
            }
        }
    }
    Ok(())
}
