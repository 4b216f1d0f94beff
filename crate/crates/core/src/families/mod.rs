//! Concrete semigroup elements and the standard diagram monoid families.
//!
//! Every element type stores a canonical byte encoding, so two elements are
//! equal exactly when their encodings are. Products are read left to right:
//! `s.compose(t)` applies `s` first, then `t`.

mod bipartition;
mod relation;
mod transformation;

use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

use crate::table::{close_generators, GeneratedTable, TableError, DEFAULT_GROWTH_CAP};

pub use bipartition::{compose_bipartitions, Bipartition};
pub use relation::{compose_relations, BinaryRelation, MAX_RELATION_DEGREE};
pub use transformation::{compose_transformations, PartialTransformation, Transformation, UNDEFINED};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },
    #[error("invalid element: {0}")]
    InvalidElement(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{family} at degree {degree} has {order} elements, over the growth cap of {cap}")]
    GrowthCap {
        family: Family,
        degree: usize,
        order: u128,
        cap: usize,
    },
    #[error("degree must be at least 1")]
    ZeroDegree,
    #[error(transparent)]
    Table(#[from] TableError),
}

/// A semigroup element with a canonical encoding and a degree-`d`
/// relabeling action.
pub trait Element: Clone + Eq + fmt::Debug + fmt::Display + Send + Sync {
    fn degree(&self) -> usize;

    /// Canonical bytes; equal iff the elements are equal.
    fn encoding(&self) -> &[u8];

    /// Product `self · other`. Degrees must agree.
    fn compose(&self, other: &Self) -> Self;

    /// Relabels every point `p` as `perm[p]` (0-based permutation of the
    /// degree). This is conjugation `g⁻¹ s g` for `g = perm`.
    fn conjugate(&self, perm: &[u8]) -> Self;
}

pub(crate) fn check_degrees(left: usize, right: usize) -> Result<(), FamilyError> {
    if left == right {
        Ok(())
    } else {
        Err(FamilyError::DegreeMismatch { left, right })
    }
}

/// Parses `[2,-,1]` into 0-based optional images.
pub(crate) fn parse_bracket_list(s: &str) -> Result<Vec<Option<u8>>, FamilyError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| FamilyError::Parse(format!("expected [..], found {s:?}")))?;
    inner
        .split(',')
        .map(|tok| match tok.trim() {
            "-" => Ok(None),
            t => match t.parse::<u16>() {
                Ok(v) if (1..=250).contains(&v) => Ok(Some((v - 1) as u8)),
                _ => Err(FamilyError::Parse(format!("bad image {t:?} in {s:?}"))),
            },
        })
        .collect()
}

/// All permutations of `0..degree` in lexicographic order.
pub fn permutations(degree: usize) -> Vec<Vec<u8>> {
    (0..degree as u8).permutations(degree).collect()
}

/// The standard monoid families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Full transformation monoid.
    Transformations,
    /// Partial transformation monoid.
    PartialTransformations,
    /// Symmetric inverse monoid of partial injections.
    PartialPermutations,
    /// Symmetric group.
    Permutations,
    /// Partition monoid of all bipartitions.
    Partitions,
    Brauer,
    TemperleyLieb,
    /// Dual symmetric inverse monoid (block bijections).
    DualSymmetricInverse,
    /// Monoid of all binary relations.
    BinaryRelations,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::Transformations,
        Family::PartialTransformations,
        Family::PartialPermutations,
        Family::Permutations,
        Family::Partitions,
        Family::Brauer,
        Family::TemperleyLieb,
        Family::DualSymmetricInverse,
        Family::BinaryRelations,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Family::Transformations => "T",
            Family::PartialTransformations => "PT",
            Family::PartialPermutations => "I",
            Family::Permutations => "S",
            Family::Partitions => "P",
            Family::Brauer => "Brauer",
            Family::TemperleyLieb => "TL",
            Family::DualSymmetricInverse => "Istar",
            Family::BinaryRelations => "BinRel",
        }
    }

    /// Element kind used when writing generator files.
    pub fn element_kind(self) -> ElementKind {
        match self {
            Family::Transformations | Family::Permutations => ElementKind::Transformation,
            Family::PartialTransformations | Family::PartialPermutations => ElementKind::PartialTransformation,
            Family::Partitions | Family::Brauer | Family::TemperleyLieb | Family::DualSymmetricInverse => {
                ElementKind::Bipartition
            }
            Family::BinaryRelations => ElementKind::BinaryRelation,
        }
    }

    /// Number of elements at `degree`, or `None` on overflow.
    pub fn expected_order(self, degree: usize) -> Option<u128> {
        let d = degree as u32;
        let factorial = |k: u32| (1..=k as u128).try_fold(1u128, |a, x| a.checked_mul(x));
        match self {
            Family::Transformations => (degree as u128).checked_pow(d),
            Family::PartialTransformations => (degree as u128 + 1).checked_pow(d),
            Family::Permutations => factorial(d),
            Family::PartialPermutations => (0..=d).try_fold(0u128, |acc, k| {
                let c = binomial(d, k)?;
                acc.checked_add(c.checked_mul(c)?.checked_mul(factorial(k)?)?)
            }),
            Family::Partitions => bell(2 * degree),
            Family::Brauer => (1..2 * d).step_by(2).try_fold(1u128, |a, x| a.checked_mul(x as u128)),
            Family::TemperleyLieb => binomial(2 * d, d).map(|c| c / (degree as u128 + 1)),
            Family::DualSymmetricInverse => (1..=d).try_fold(0u128, |acc, k| {
                let s = stirling2(d, k)?;
                acc.checked_add(s.checked_mul(s)?.checked_mul(factorial(k)?)?)
            }),
            Family::BinaryRelations => 2u128.checked_pow(d * d),
        }
    }
}

fn binomial(n: u32, k: u32) -> Option<u128> {
    (0..k).try_fold(1u128, |acc, i| Some(acc.checked_mul((n - i) as u128)? / (i as u128 + 1)))
}

fn bell(n: usize) -> Option<u128> {
    // Bell triangle
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last()?];
        for &x in &row {
            next.push(next.last()?.checked_add(x)?);
        }
        row = next;
    }
    row.first().copied()
}

fn stirling2(n: u32, k: u32) -> Option<u128> {
    let mut table = vec![vec![0u128; k as usize + 1]; n as usize + 1];
    table[0][0] = 1;
    for i in 1..=n as usize {
        for j in 1..=(k as usize).min(i) {
            table[i][j] = (j as u128)
                .checked_mul(table[i - 1][j])?
                .checked_add(table[i - 1][j - 1])?;
        }
    }
    Some(table[n as usize][k as usize])
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Family {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL
            .into_iter()
            .find(|f| f.short_name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                FamilyError::Parse(format!(
                    "unknown family {s:?}; expected one of {}",
                    Family::ALL.iter().map(|f| f.short_name()).join("|")
                ))
            })
    }
}

/// An element of any supported family.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyElement {
    Transformation(Transformation),
    Partial(PartialTransformation),
    Bipartition(Bipartition),
    Relation(BinaryRelation),
}

macro_rules! delegate {
    ($self:ident, $x:ident => $body:expr) => {
        match $self {
            FamilyElement::Transformation($x) => $body,
            FamilyElement::Partial($x) => $body,
            FamilyElement::Bipartition($x) => $body,
            FamilyElement::Relation($x) => $body,
        }
    };
}

impl Element for FamilyElement {
    fn degree(&self) -> usize {
        delegate!(self, x => x.degree())
    }

    fn encoding(&self) -> &[u8] {
        delegate!(self, x => x.encoding())
    }

    fn compose(&self, other: &Self) -> Self {
        match (self, other) {
            (FamilyElement::Transformation(a), FamilyElement::Transformation(b)) => {
                FamilyElement::Transformation(a.compose(b))
            }
            (FamilyElement::Partial(a), FamilyElement::Partial(b)) => {
                FamilyElement::Partial(a.compose(b))
            }
            (FamilyElement::Bipartition(a), FamilyElement::Bipartition(b)) => {
                FamilyElement::Bipartition(a.compose(b))
            }
            (FamilyElement::Relation(a), FamilyElement::Relation(b)) => {
                FamilyElement::Relation(a.compose(b))
            }
            _ => panic!("cannot compose elements of different kinds: {self} and {other}"),
        }
    }

    fn conjugate(&self, perm: &[u8]) -> Self {
        match self {
            FamilyElement::Transformation(x) => FamilyElement::Transformation(x.conjugate(perm)),
            FamilyElement::Partial(x) => FamilyElement::Partial(x.conjugate(perm)),
            FamilyElement::Bipartition(x) => FamilyElement::Bipartition(x.conjugate(perm)),
            FamilyElement::Relation(x) => FamilyElement::Relation(x.conjugate(perm)),
        }
    }
}

impl fmt::Display for FamilyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        delegate!(self, x => fmt::Display::fmt(x, f))
    }
}

impl fmt::Debug for FamilyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Every element of `family` at `degree`, sorted by canonical encoding.
pub fn enumerate_family(family: Family, degree: usize) -> Result<Vec<FamilyElement>, FamilyError> {
    enumerate_family_capped(family, degree, DEFAULT_GROWTH_CAP)
}

pub fn enumerate_family_capped(
    family: Family,
    degree: usize,
    cap: usize,
) -> Result<Vec<FamilyElement>, FamilyError> {
    if degree == 0 {
        return Err(FamilyError::ZeroDegree);
    }
    let order = family.expected_order(degree).unwrap_or(u128::MAX);
    let too_big = FamilyError::GrowthCap {
        family,
        degree,
        order,
        cap,
    };
    if order > cap as u128 {
        return Err(too_big);
    }
    let d = degree;
    let mut elements: Vec<FamilyElement> = match family {
        Family::Transformations => maps(d, false)
            .into_iter()
            .map(|x| FamilyElement::Transformation(Transformation::new(x).expect("in range")))
            .collect(),
        Family::Permutations => permutations(d)
            .into_iter()
            .map(|x| FamilyElement::Transformation(Transformation::new(x).expect("in range")))
            .collect(),
        Family::PartialTransformations | Family::PartialPermutations => maps(d, true)
            .into_iter()
            .map(|x| {
                PartialTransformation::new(
                    x.into_iter()
                        .map(|v| (v as usize != d).then_some(v))
                        .collect(),
                )
                .expect("in range")
            })
            .filter(|p| family == Family::PartialTransformations || p.is_injective())
            .map(FamilyElement::Partial)
            .collect(),
        Family::Partitions | Family::DualSymmetricInverse => set_partitions(2 * d)
            .into_iter()
            .map(|labels| Bipartition::from_labels(&labels).expect("even point count"))
            .filter(|b| family == Family::Partitions || b.is_block_bijection())
            .map(FamilyElement::Bipartition)
            .collect(),
        Family::Brauer | Family::TemperleyLieb => perfect_matchings(2 * d)
            .into_iter()
            .map(|blocks| Bipartition::from_blocks(d, &blocks).expect("matching covers all points"))
            .filter(|b| family == Family::Brauer || b.is_temperley_lieb())
            .map(FamilyElement::Bipartition)
            .collect(),
        Family::BinaryRelations => {
            if d > MAX_RELATION_DEGREE {
                return Err(too_big);
            }
            (0..1u64 << (d * d))
                .map(|bits| {
                    let rows = (0..d)
                        .map(|i| ((bits >> (i * d)) & ((1 << d) - 1)) as u8)
                        .collect();
                    FamilyElement::Relation(BinaryRelation::from_rows(d, rows).expect("in range"))
                })
                .collect()
        }
    };
    elements.sort_by(|a, b| a.encoding().cmp(b.encoding()));
    Ok(elements)
}

/// The full monoid `family` at `degree`, elements in encoding order.
pub fn build_family(family: Family, degree: usize) -> Result<GeneratedTable<FamilyElement>, FamilyError> {
    build_family_capped(family, degree, DEFAULT_GROWTH_CAP)
}

pub fn build_family_capped(
    family: Family,
    degree: usize,
    cap: usize,
) -> Result<GeneratedTable<FamilyElement>, FamilyError> {
    let elements = enumerate_family_capped(family, degree, cap)?;
    Ok(GeneratedTable::tabulate(elements)?)
}

/// A generating set for `family` at `degree`; closing it yields the same
/// element set as [`enumerate_family`]. Binary relations have no small
/// uniform generating set and return `None`.
///
/// - T: cycle, transposition, the rank `d-1` idempotent `2 ↦ 1`
/// - S: cycle, transposition
/// - I: cycle, transposition, the identity undefined at 1
/// - PT: the generators of T and I together
/// - P: permutations, the diagram splitting 1 from 1', the block `{1,2,1',2'}`
/// - Brauer: permutations and the hook `{1,2},{1',2'}`
/// - TL: the hooks `e_i` joining `i, i+1` on both rows
/// - I*: permutations and the block `{1,2,1',2'}`
pub fn standard_generators(family: Family, degree: usize) -> Option<Vec<FamilyElement>> {
    let d = degree;
    let t = |v: Vec<u8>| FamilyElement::Transformation(Transformation::new(v).expect("in range"));
    let p = |v: Vec<Option<u8>>| FamilyElement::Partial(PartialTransformation::new(v).expect("in range"));
    let id: Vec<u8> = (0..d as u8).collect();
    let cycle: Vec<u8> = (0..d as u8).map(|x| (x + 1) % d as u8).collect();
    let mut swap = id.clone();
    if d > 1 {
        swap.swap(0, 1);
    }
    let mut collapse = id.clone();
    if d > 1 {
        collapse[1] = 0;
    }
    let mut drop_first: Vec<Option<u8>> = id.iter().map(|&x| Some(x)).collect();
    drop_first[0] = None;
    let to_partial = |v: &[u8]| v.iter().map(|&x| Some(x)).collect::<Vec<_>>();
    let bip = |blocks: Vec<Vec<usize>>| {
        FamilyElement::Bipartition(Bipartition::from_blocks(d, &blocks).expect("valid blocks"))
    };
    let perm_bip = |v: &[u8]| (0..d).map(|i| vec![i, d + v[i] as usize]).collect::<Vec<_>>();
    // TL/Brauer hook e_i joins i,i+1 on top and i',(i+1)' on the bottom
    let hook = |i: usize| {
        let mut blocks = vec![vec![i, i + 1], vec![d + i, d + i + 1]];
        blocks.extend((0..d).filter(|&k| k != i && k != i + 1).map(|k| vec![k, d + k]));
        blocks
    };

    let mut gens = match family {
        Family::Transformations => vec![t(id.clone()), t(cycle.clone()), t(swap.clone()), t(collapse)],
        Family::Permutations => vec![t(id.clone()), t(cycle.clone()), t(swap.clone())],
        Family::PartialPermutations => {
            vec![p(to_partial(&cycle)), p(to_partial(&swap)), p(drop_first)]
        }
        Family::PartialTransformations => vec![
            p(to_partial(&cycle)),
            p(to_partial(&swap)),
            p(to_partial(&collapse)),
            p(drop_first),
        ],
        Family::Partitions => {
            let mut gens = vec![bip(perm_bip(&cycle)), bip(perm_bip(&swap))];
            // split point 1 from 1'
            let mut split = vec![vec![0], vec![d]];
            split.extend((1..d).map(|k| vec![k, d + k]));
            gens.push(bip(split));
            if d > 1 {
                let mut merge = vec![vec![0, 1, d, d + 1]];
                merge.extend((2..d).map(|k| vec![k, d + k]));
                gens.push(bip(merge));
            }
            if d > 2 {
                let mut shift = vec![vec![0, 1, d], vec![2, d + 1, d + 2]];
                shift.extend((3..d).map(|k| vec![k, d + k]));
                gens.push(bip(shift));
            }
            gens
        }
        Family::Brauer => {
            let mut gens = vec![bip(perm_bip(&cycle)), bip(perm_bip(&swap))];
            if d > 1 {
                gens.push(bip(hook(0)));
            }
            gens
        }
        Family::TemperleyLieb => {
            let mut gens = vec![bip(perm_bip(&id))];
            gens.extend((0..d.saturating_sub(1)).map(|i| bip(hook(i))));
            gens
        }
        Family::DualSymmetricInverse => {
            let mut gens = vec![bip(perm_bip(&cycle)), bip(perm_bip(&swap))];
            if d > 1 {
                let mut merge = vec![vec![0, 1, d, d + 1]];
                merge.extend((2..d).map(|k| vec![k, d + k]));
                gens.push(bip(merge));
            }
            if d > 2 {
                let mut shift = vec![vec![0, 1, d], vec![2, d + 1, d + 2]];
                shift.extend((3..d).map(|k| vec![k, d + k]));
                gens.push(bip(shift));
            }
            gens
        }
        Family::BinaryRelations => return None,
    };
    gens.dedup();
    Some(gens)
}

/// All maps `0..d → 0..d` (or `0..=d` when `partial`, value `d` meaning
/// undefined) as image vectors in lexicographic order.
fn maps(d: usize, partial: bool) -> Vec<Vec<u8>> {
    let range = if partial { d + 1 } else { d };
    (0..d)
        .map(|_| 0..range as u8)
        .multi_cartesian_product()
        .collect()
}

/// Restricted growth strings of length `n`: one per set partition.
fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, max: usize, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for label in 0..=max + 1 {
            prefix.push(label);
            extend(prefix, max.max(label), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        extend(&mut vec![0], 0, n, &mut out);
    }
    out
}

/// Perfect matchings of `0..n` as lists of pairs.
fn perfect_matchings(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn extend(free: &mut Vec<usize>, current: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if free.is_empty() {
            out.push(current.clone());
            return;
        }
        let a = free.remove(0);
        for k in 0..free.len() {
            let b = free.remove(k);
            current.push(vec![a, b]);
            extend(free, current, out);
            current.pop();
            free.insert(k, b);
        }
        free.insert(0, a);
    }
    let mut out = Vec::new();
    extend(&mut (0..n).collect(), &mut Vec::new(), &mut out);
    out
}

/// The kind of elements listed in a generator file.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Transformation,
    PartialTransformation,
    Bipartition,
    BinaryRelation,
}

impl ElementKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ElementKind::Transformation => "transformation",
            ElementKind::PartialTransformation => "partial-transformation",
            ElementKind::Bipartition => "bipartition",
            ElementKind::BinaryRelation => "binary-relation",
        }
    }

    pub fn parse_element(self, text: &str, degree: usize) -> Result<FamilyElement, FamilyError> {
        let element = match self {
            ElementKind::Transformation => FamilyElement::Transformation(text.parse()?),
            ElementKind::PartialTransformation => FamilyElement::Partial(text.parse()?),
            ElementKind::Bipartition => {
                FamilyElement::Bipartition(Bipartition::parse_with_degree(text, degree)?)
            }
            ElementKind::BinaryRelation => FamilyElement::Relation(text.parse()?),
        };
        check_degrees(degree, element.degree())?;
        Ok(element)
    }
}

/// A parsed generator file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorFile {
    pub kind: ElementKind,
    pub degree: usize,
    pub generators: Vec<FamilyElement>,
}

impl GeneratorFile {
    /// True if `text` starts (after comments) with a generator-file header.
    pub fn looks_like(text: &str) -> bool {
        content_lines(text)
            .next()
            .and_then(|(_, l)| l.split_whitespace().next())
            .is_some_and(|w| w.chars().all(|c| c.is_ascii_alphabetic() || c == '-'))
    }

    pub fn close(&self) -> Result<GeneratedTable<FamilyElement>, TableError> {
        close_generators(&self.generators)
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Reads `transformation <degree>` (or `partial-transformation`,
/// `bipartition`, `binary-relation`) followed by one generator per line.
pub fn read_generators(text: &str) -> Result<GeneratorFile, FamilyError> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines
        .next()
        .ok_or_else(|| FamilyError::Parse("empty generator file".into()))?;
    let mut words = header.split_whitespace();
    let kind = match words.next() {
        Some("transformation") => ElementKind::Transformation,
        Some("partial-transformation") => ElementKind::PartialTransformation,
        Some("bipartition") => ElementKind::Bipartition,
        Some("binary-relation") => ElementKind::BinaryRelation,
        other => {
            return Err(FamilyError::Parse(format!(
                "line {line_no}: unknown element kind {other:?}"
            )))
        }
    };
    let degree: usize = words
        .next()
        .and_then(|w| w.parse().ok())
        .filter(|&d| d > 0)
        .ok_or_else(|| FamilyError::Parse(format!("line {line_no}: missing or invalid degree")))?;
    let generators = lines
        .map(|(n, l)| {
            kind.parse_element(l, degree)
                .map_err(|e| FamilyError::Parse(format!("line {n}: {e}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    if generators.is_empty() {
        return Err(FamilyError::Parse("no generators listed".into()));
    }
    Ok(GeneratorFile {
        kind,
        degree,
        generators,
    })
}

/// Writes a generator file readable by [`read_generators`].
pub fn write_generators(file: &GeneratorFile) -> String {
    let mut out = format!("{} {}\n", file.kind.keyword(), file.degree);
    for g in &file.generators {
        out.push_str(&g.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn order_formulas() {
        let expect = |f: Family, orders: &[u128]| {
            for (d, &o) in orders.iter().enumerate() {
                assert_eq!(f.expected_order(d + 1), Some(o), "{f} at degree {}", d + 1);
            }
        };
        expect(Family::Transformations, &[1, 4, 27, 256, 3125]);
        expect(Family::PartialTransformations, &[2, 9, 64, 625]);
        expect(Family::Permutations, &[1, 2, 6, 24, 120]);
        expect(Family::PartialPermutations, &[2, 7, 34, 209]);
        expect(Family::Partitions, &[2, 15, 203, 4140]);
        expect(Family::Brauer, &[1, 3, 15, 105, 945]);
        expect(Family::TemperleyLieb, &[1, 2, 5, 14, 42]);
        expect(Family::DualSymmetricInverse, &[1, 3, 25, 339]);
        expect(Family::BinaryRelations, &[2, 16, 512, 65536]);
    }

    #[test]
    fn enumeration_matches_formulas() {
        for family in Family::ALL {
            for degree in 1..=4 {
                let order = family.expected_order(degree).unwrap();
                if order > 5000 {
                    continue;
                }
                let elements = enumerate_family(family, degree).unwrap();
                assert_eq!(elements.len() as u128, order, "{family} at degree {degree}");
                let distinct: BTreeSet<_> = elements.iter().map(|e| e.encoding().to_vec()).collect();
                assert_eq!(distinct.len(), elements.len());
            }
        }
    }

    #[test]
    fn standard_generators_close_to_full_family() {
        for family in Family::ALL {
            for degree in 1..=4 {
                if family.expected_order(degree).is_some_and(|n| n > 1000) {
                    continue;
                }
                let full: BTreeSet<_> = enumerate_family(family, degree)
                    .unwrap()
                    .iter()
                    .map(|e| e.encoding().to_vec())
                    .collect();
                let Some(gens) = standard_generators(family, degree) else {
                    assert_eq!(family, Family::BinaryRelations);
                    continue;
                };
                let closed = close_generators(&gens).unwrap();
                let closed: BTreeSet<_> = closed.elements().iter().map(|e| e.encoding().to_vec()).collect();
                assert_eq!(closed, full, "{family} at degree {degree}");
            }
        }
    }

    #[test]
    fn transformation_enumeration_is_lexicographic() {
        let t2 = build_family(Family::Transformations, 2).unwrap();
        let names: Vec<String> = t2.elements().iter().map(|e| e.to_string()).collect();
        assert_eq!(names, ["[1,1]", "[1,2]", "[2,1]", "[2,2]"]);
        assert_eq!(
            crate::table::write_table(t2.table()),
            "4\n1 1 4 4\n1 2 3 4\n1 3 2 4\n1 4 1 4\n"
        );
    }

    #[test]
    fn growth_cap_is_reported() {
        let err = build_family_capped(Family::Transformations, 4, 100).unwrap_err();
        assert_eq!(
            err,
            FamilyError::GrowthCap {
                family: Family::Transformations,
                degree: 4,
                order: 256,
                cap: 100
            }
        );
        assert_eq!(build_family(Family::Brauer, 0).unwrap_err(), FamilyError::ZeroDegree);
    }

    #[test]
    fn sorted_closure_reproduces_enumerated_table() {
        for family in Family::ALL {
            for degree in 1..=3 {
                let Some(gens) = standard_generators(family, degree) else { continue };
                let closed = close_generators(&gens).unwrap().sorted_by_encoding();
                let built = build_family(family, degree).unwrap();
                assert_eq!(closed.table(), built.table(), "{family} at degree {degree}");
                assert_eq!(closed.elements(), built.elements());
            }
        }
    }

    #[test]
    fn generator_files() {
        let file = read_generators("# T3 generators\ntransformation 3\n[2,3,1]\n[2,1,3]\n[1,1,3]\n").unwrap();
        assert_eq!(file.kind, ElementKind::Transformation);
        assert_eq!(file.close().unwrap().order(), 27);
        assert_eq!(read_generators(&write_generators(&file)).unwrap(), file);

        let b = read_generators("bipartition 2\n{{1,2},{1',2'}}\n{{1,2'},{2,1'}}\n").unwrap();
        assert_eq!(b.generators.len(), 2);
        let r = read_generators("binary-relation 2\n01|00\n").unwrap();
        assert_eq!(r.close().unwrap().order(), 2);
        let p = read_generators("partial-transformation 3\n[2,-,1]\n").unwrap();
        assert_eq!(p.degree, 3);

        assert!(read_generators("transformation 2\n[1,2,3]\n").is_err());
        assert!(read_generators("matrix 2\n[1,2]\n").is_err());
        assert!(read_generators("transformation\n[1,2]\n").is_err());
        assert!(read_generators("transformation 2\n").is_err());
        assert!(GeneratorFile::looks_like("# c\ntransformation 2\n"));
        assert!(!GeneratorFile::looks_like("2\n1 2\n2 1\n"));
    }

    #[test]
    fn family_names_round_trip() {
        for f in Family::ALL {
            assert_eq!(f.short_name().parse::<Family>().unwrap(), f);
        }
        assert!("Q".parse::<Family>().is_err());
    }
}
