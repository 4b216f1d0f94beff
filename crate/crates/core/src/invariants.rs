//! Element and table fingerprints that embeddings or isomorphisms preserve.
//!
//! An embedding maps every element to one with the same index-period, so
//! index-period classes of the source can only go to the matching classes of
//! the target. An isomorphism additionally preserves every count taken over
//! the whole table, which gives the finer element profile.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::table::CayleyTable;

/// The smallest `(m, r)` with `a^(m+r) = a^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IndexPeriod {
    pub index: u32,
    pub period: u32,
}

impl fmt::Display for IndexPeriod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.index, self.period)
    }
}

/// Index-period of `element`, found by walking `a, a², …` until a power
/// repeats. Panics if `element` is out of range.
pub fn index_period(table: &CayleyTable, element: usize) -> IndexPeriod {
    assert!(element < table.order(), "element {element} out of range");
    let mut first_seen = vec![0u32; table.order()];
    let mut power = element;
    let mut exponent = 1u32;
    loop {
        if first_seen[power] != 0 {
            let m = first_seen[power];
            return IndexPeriod {
                index: m,
                period: exponent - m,
            };
        }
        first_seen[power] = exponent;
        power = table.get(power, element) as usize;
        exponent += 1;
    }
}

pub fn index_periods(table: &CayleyTable) -> Vec<IndexPeriod> {
    (0..table.order()).map(|a| index_period(table, a)).collect()
}

/// Occurrence counts of one element, plus its index-period.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementProfile {
    pub index_period: IndexPeriod,
    /// Occurrences anywhere in the table.
    pub frequency: u64,
    /// Occurrences on the diagonal.
    pub diagonal_frequency: u32,
    /// Occurrences of element `i` in row `i`.
    pub row_frequency: u32,
    /// Occurrences of element `i` in column `i`.
    pub column_frequency: u32,
    pub is_idempotent: bool,
}

impl fmt::Display for ElementProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ip={} freq={} diag={} row={} col={} idem={}",
            self.index_period,
            self.frequency,
            self.diagonal_frequency,
            self.row_frequency,
            self.column_frequency,
            self.is_idempotent as u8
        )
    }
}

/// Profile of a single element. Panics if `element` is out of range.
pub fn element_profile(table: &CayleyTable, element: usize) -> ElementProfile {
    let n = table.order();
    assert!(element < n, "element {element} out of range");
    let e = element as u32;
    let frequency = table.entries().iter().filter(|&&x| x == e).count() as u64;
    let diagonal_frequency = (0..n).filter(|&i| table.get(i, i) == e).count() as u32;
    let row_frequency = table.row(element).iter().filter(|&&x| x == e).count() as u32;
    let column_frequency = (0..n).filter(|&i| table.get(i, element) == e).count() as u32;
    ElementProfile {
        index_period: index_period(table, element),
        frequency,
        diagonal_frequency,
        row_frequency,
        column_frequency,
        is_idempotent: table.is_idempotent(element),
    }
}

/// Profiles of all elements, computed in one pass over the table.
pub fn element_profiles(table: &CayleyTable) -> Vec<ElementProfile> {
    let n = table.order();
    let mut frequency = vec![0u64; n];
    let mut diagonal = vec![0u32; n];
    let mut row = vec![0u32; n];
    let mut column = vec![0u32; n];
    for i in 0..n {
        for (j, &x) in table.row(i).iter().enumerate() {
            let x = x as usize;
            frequency[x] += 1;
            if i == j {
                diagonal[x] += 1;
            }
            if x == i {
                row[x] += 1;
            }
            if x == j {
                column[x] += 1;
            }
        }
    }
    (0..n)
        .map(|a| ElementProfile {
            index_period: index_period(table, a),
            frequency: frequency[a],
            diagonal_frequency: diagonal[a],
            row_frequency: row[a],
            column_frequency: column[a],
            is_idempotent: table.is_idempotent(a),
        })
        .collect()
}

/// Relabeling-invariant summary of a whole table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TableProfile {
    pub order: usize,
    pub sorted_frequencies: Vec<u64>,
    pub sorted_diagonal_frequencies: Vec<u32>,
    pub sorted_row_frequencies: Vec<u32>,
    pub sorted_column_frequencies: Vec<u32>,
    pub idempotent_count: usize,
    pub sorted_idempotent_frequencies: Vec<u64>,
    /// Each distinct element profile with its multiplicity, in key order.
    pub profile_multiset: Vec<(ElementProfile, usize)>,
}

pub fn table_profile(table: &CayleyTable) -> TableProfile {
    let profiles = element_profiles(table);
    let sorted = |f: fn(&ElementProfile) -> u64| {
        let mut v: Vec<u64> = profiles.iter().map(f).collect();
        v.sort_unstable();
        v
    };
    let narrow = |v: Vec<u64>| v.into_iter().map(|x| x as u32).collect::<Vec<u32>>();
    let mut multiset: BTreeMap<ElementProfile, usize> = BTreeMap::new();
    for p in &profiles {
        *multiset.entry(*p).or_default() += 1;
    }
    let mut idempotent_frequencies: Vec<u64> = profiles
        .iter()
        .filter(|p| p.is_idempotent)
        .map(|p| p.frequency)
        .collect();
    idempotent_frequencies.sort_unstable();
    TableProfile {
        order: table.order(),
        sorted_frequencies: sorted(|p| p.frequency),
        sorted_diagonal_frequencies: narrow(sorted(|p| p.diagonal_frequency as u64)),
        sorted_row_frequencies: narrow(sorted(|p| p.row_frequency as u64)),
        sorted_column_frequencies: narrow(sorted(|p| p.column_frequency as u64)),
        idempotent_count: idempotent_frequencies.len(),
        sorted_idempotent_frequencies: idempotent_frequencies,
        profile_multiset: multiset.into_iter().collect(),
    }
}

fn join<T: fmt::Display>(items: &[T]) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

impl TableProfile {
    /// Name of the first field where the profiles differ: `order` if the
    /// orders differ, otherwise the first in report order.
    pub fn first_difference(&self, other: &TableProfile) -> Option<&'static str> {
        if self.order != other.order {
            return Some("order");
        }
        self.fields()
            .into_iter()
            .zip(other.fields())
            .find(|(a, b)| a.1 != b.1)
            .map(|(a, _)| a.0)
    }

    fn fields(&self) -> Vec<(&'static str, String)> {
        let profiles = self
            .profile_multiset
            .iter()
            .map(|(p, k)| format!("\n  {k} x {p}"))
            .collect::<String>();
        vec![
            ("column_frequencies", join(&self.sorted_column_frequencies)),
            ("diagonal_frequencies", join(&self.sorted_diagonal_frequencies)),
            ("element_profiles", profiles),
            ("frequencies", join(&self.sorted_frequencies)),
            ("idempotent_count", self.idempotent_count.to_string()),
            ("idempotent_frequencies", join(&self.sorted_idempotent_frequencies)),
            ("order", self.order.to_string()),
            ("row_frequencies", join(&self.sorted_row_frequencies)),
        ]
    }

    /// Key-sorted text report, one `key: value` line per field.
    pub fn report(&self) -> String {
        let mut out = String::new();
        for (key, value) in self.fields() {
            if value.starts_with('\n') || value.is_empty() {
                let _ = writeln!(out, "{key}:{value}");
            } else {
                let _ = writeln!(out, "{key}: {value}");
            }
        }
        out
    }
}

/// Which equivalence the class partition uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PartitionMode {
    /// Index-period classes; targets may be larger.
    Embedding,
    /// Full element-profile classes; class sizes must agree.
    Isomorphism,
}

/// The invariant a class is keyed by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKey {
    /// Single class holding every element (no pruning).
    All,
    IndexPeriod(IndexPeriod),
    Profile(ElementProfile),
}

impl fmt::Display for ClassKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassKey::All => f.write_str("all"),
            ClassKey::IndexPeriod(ip) => write!(f, "index-period {ip}"),
            ClassKey::Profile(p) => write!(f, "profile [{p}]"),
        }
    }
}

/// Source and target elements sharing one key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedClass {
    pub key: ClassKey,
    pub source: Vec<u32>,
    pub target: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassPartition {
    pub mode: PartitionMode,
    /// Classes in key order; every source element is in exactly one.
    pub classes: Vec<MatchedClass>,
    pub target_only_keys: Vec<ClassKey>,
}

/// Why no embedding or isomorphism can exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Infeasible {
    OrderMismatch { source: usize, target: usize },
    MissingKey(ClassKey),
    ClassTooSmall { key: ClassKey, source: usize, target: usize },
    ClassSizeMismatch { key: ClassKey, source: usize, target: usize },
    TargetOnlyKey(ClassKey),
}

impl fmt::Display for Infeasible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Infeasible::OrderMismatch { source, target } => {
                write!(f, "orders differ: {source} vs {target}")
            }
            Infeasible::MissingKey(key) => write!(f, "target has no element with {key}"),
            Infeasible::ClassTooSmall { key, source, target } => write!(
                f,
                "class {key} has {source} source elements but only {target} target elements"
            ),
            Infeasible::ClassSizeMismatch { key, source, target } => {
                write!(f, "class {key} sizes differ: {source} vs {target}")
            }
            Infeasible::TargetOnlyKey(key) => write!(f, "only the target has {key}"),
        }
    }
}

fn class_keys(table: &CayleyTable, mode: PartitionMode) -> Vec<ClassKey> {
    match mode {
        PartitionMode::Embedding => index_periods(table).into_iter().map(ClassKey::IndexPeriod).collect(),
        PartitionMode::Isomorphism => element_profiles(table).into_iter().map(ClassKey::Profile).collect(),
    }
}

/// Matches source classes to target classes, or explains why the
/// invariants already rule out any solution.
pub fn build_partition(
    source: &CayleyTable,
    target: &CayleyTable,
    mode: PartitionMode,
) -> Result<ClassPartition, Infeasible> {
    let (m, n) = (source.order(), target.order());
    match mode {
        PartitionMode::Embedding if m > n => {
            return Err(Infeasible::OrderMismatch { source: m, target: n })
        }
        PartitionMode::Isomorphism if m != n => {
            return Err(Infeasible::OrderMismatch { source: m, target: n })
        }
        _ => {}
    }
    let mut groups: BTreeMap<ClassKey, (Vec<u32>, Vec<u32>)> = BTreeMap::new();
    for (i, key) in class_keys(source, mode).into_iter().enumerate() {
        groups.entry(key).or_default().0.push(i as u32);
    }
    for (i, key) in class_keys(target, mode).into_iter().enumerate() {
        groups.entry(key).or_default().1.push(i as u32);
    }

    let mut classes = Vec::new();
    let mut target_only_keys = Vec::new();
    for (key, (source, target)) in groups {
        if source.is_empty() {
            if mode == PartitionMode::Isomorphism {
                return Err(Infeasible::TargetOnlyKey(key));
            }
            target_only_keys.push(key);
            continue;
        }
        if target.is_empty() {
            return Err(Infeasible::MissingKey(key));
        }
        let (s, t) = (source.len(), target.len());
        match mode {
            PartitionMode::Embedding if s > t => {
                return Err(Infeasible::ClassTooSmall { key, source: s, target: t })
            }
            PartitionMode::Isomorphism if s != t => {
                return Err(Infeasible::ClassSizeMismatch { key, source: s, target: t })
            }
            _ => {}
        }
        classes.push(MatchedClass { key, source, target });
    }
    Ok(ClassPartition {
        mode,
        classes,
        target_only_keys,
    })
}

impl ClassPartition {
    /// A single class holding everything: the search without pruning.
    pub fn unpartitioned(source_order: usize, target_order: usize, mode: PartitionMode) -> Self {
        Self {
            mode,
            classes: vec![MatchedClass {
                key: ClassKey::All,
                source: (0..source_order as u32).collect(),
                target: (0..target_order as u32).collect(),
            }],
            target_only_keys: Vec::new(),
        }
    }

    /// `∏ |B|! / (|B| - |A|)!` over matched classes `A → B`.
    pub fn search_space_size(&self) -> BigUint {
        search_space_size(self.classes.iter().map(|c| (c.source.len(), c.target.len())))
    }

    /// Class number of each source element.
    pub fn source_class_of(&self, source_order: usize) -> Vec<usize> {
        let mut class_of = vec![usize::MAX; source_order];
        for (k, class) in self.classes.iter().enumerate() {
            for &s in &class.source {
                class_of[s as usize] = k;
            }
        }
        class_of
    }
}

/// Product of falling factorials `t! / (t - s)!` over `(s, t)` class sizes.
pub fn search_space_size(class_sizes: impl IntoIterator<Item = (usize, usize)>) -> BigUint {
    class_sizes
        .into_iter()
        .fold(BigUint::from(1u32), |acc, (s, t)| {
            if s > t {
                return BigUint::from(0u32);
            }
            (t - s + 1..=t).fold(acc, |a, x| a * BigUint::from(x))
        })
}
