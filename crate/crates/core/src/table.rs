//! Multiplication tables and the generic closure engine.
//!
//! Element indices are 0-based inside the library. The text format and every
//! user-facing report use 1-based indices.

use std::fmt;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::families::Element;

/// Default bound on the number of elements produced by a closure.
pub const DEFAULT_GROWTH_CAP: usize = 100_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("entry {value} at row {row}, column {column} is outside 1..{order}")]
    OutOfRange {
        row: usize,
        column: usize,
        value: u64,
        order: usize,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("empty semigroup: tables must have at least one element")]
    Empty,
    #[error("closure exceeded the growth cap of {cap} elements")]
    GrowthCap { cap: usize },
    #[error("generator list is empty")]
    NoGenerators,
    #[error("generators have mixed degrees ({0} and {1})")]
    MixedDegrees(usize, usize),
}

/// A dense `n × n` multiplication table; `get(i, j)` is the index of `i·j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CayleyTable {
    n: usize,
    entries: Vec<u32>,
}

impl CayleyTable {
    /// Builds a table from 0-based row-major entries, checking ranges.
    pub fn from_entries(n: usize, entries: Vec<u32>) -> Result<Self, TableError> {
        if n == 0 {
            return Err(TableError::Empty);
        }
        if entries.len() != n * n {
            return Err(TableError::Dimension(format!(
                "expected {} entries for order {n}, found {}",
                n * n,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&e| e as usize >= n) {
            return Err(TableError::OutOfRange {
                row: pos / n + 1,
                column: pos % n + 1,
                value: entries[pos] as u64 + 1,
                order: n,
            });
        }
        Ok(Self { n, entries })
    }

    /// Builds a table from 1-based rows, as printed in the literature.
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self, TableError> {
        let n = rows.len();
        if n == 0 {
            return Err(TableError::Empty);
        }
        let mut entries = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(TableError::Dimension(format!(
                    "row {} has {} entries, expected {n}",
                    r + 1,
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                if v == 0 || v as usize > n {
                    return Err(TableError::OutOfRange {
                        row: r + 1,
                        column: c + 1,
                        value: v as u64,
                        order: n,
                    });
                }
                entries.push(v - 1);
            }
        }
        Ok(Self { n, entries })
    }

    /// Tabulates `f` over all pairs of `0..n`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> usize) -> Result<Self, TableError> {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j) as u32);
            }
        }
        Self::from_entries(n, entries)
    }

    /// The trivial one-element semigroup.
    pub fn trivial() -> Self {
        Self {
            n: 1,
            entries: vec![0],
        }
    }

    /// The cyclic group of order `n` (addition mod `n`), identity at index 0.
    pub fn cyclic_group(n: usize) -> Self {
        Self::from_fn(n, |i, j| (i + j) % n).expect("n must be positive")
    }

    /// Direct product; element `(a, b)` sits at index `a * other.order() + b`.
    pub fn direct_product(&self, other: &CayleyTable) -> Self {
        let m = other.n;
        Self::from_fn(self.n * m, |x, y| {
            self.get(x / m, y / m) as usize * m + other.get(x % m, y % m) as usize
        })
        .expect("product of non-empty tables is non-empty")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn is_idempotent(&self, i: usize) -> bool {
        self.get(i, i) as usize == i
    }

    /// True iff `(ij)k = i(jk)` for every triple.
    pub fn is_associative(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| {
            (0..n).all(|j| {
                let ij = self.get(i, j) as usize;
                let row_ij = self.row(ij);
                let row_i = self.row(i);
                let row_j = self.row(j);
                (0..n).all(|k| row_ij[k] == row_i[row_j[k] as usize])
            })
        })
    }

    /// Relabels elements: element `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n, "permutation length must match order");
        let mut entries = vec![0u32; self.n * self.n];
        for i in 0..self.n {
            for j in 0..self.n {
                entries[perm[i] * self.n + perm[j]] = perm[self.get(i, j) as usize] as u32;
            }
        }
        Self { n: self.n, entries }
    }

    /// The table of the subsemigroup on `elements`, which must be closed.
    /// Index `k` of the result corresponds to `elements[k]`.
    pub fn restrict(&self, elements: &[u32]) -> Self {
        let mut position = FxHashMap::default();
        for (k, &e) in elements.iter().enumerate() {
            position.insert(e, k as u32);
        }
        let m = elements.len();
        let mut entries = Vec::with_capacity(m * m);
        for &a in elements {
            for &b in elements {
                let p = self.get(a as usize, b as usize);
                entries.push(*position.get(&p).expect("element set is not closed"));
            }
        }
        Self { n: m, entries }
    }

    /// Closure of `generators` inside this table, returned sorted.
    pub fn subsemigroup_closure(&self, generators: &[u32]) -> Vec<u32> {
        let mut member = vec![false; self.n];
        let mut found: Vec<u32> = Vec::new();
        for &g in generators {
            if !member[g as usize] {
                member[g as usize] = true;
                found.push(g);
            }
        }
        let mut next = 0;
        while next < found.len() {
            let x = found[next] as usize;
            next += 1;
            for &g in generators {
                let p = self.get(x, g as usize);
                if !member[p as usize] {
                    member[p as usize] = true;
                    found.push(p);
                }
            }
        }
        found.sort_unstable();
        found
    }
}

impl fmt::Debug for CayleyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CayleyTable({})", write_table(self).trim_end().replace('\n', "; "))
    }
}

/// Checks associativity; range was validated when the table was built.
pub fn validate_associativity(table: &CayleyTable) -> bool {
    table.is_associative()
}

/// Reads the canonical text format: the order `n`, then `n` rows of `n`
/// space-separated 1-based entries. Lines starting with `#` are skipped.
pub fn read_table(text: &str) -> Result<CayleyTable, TableError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim_start().starts_with('#') && !l.trim().is_empty());

    let (header_line, header) = lines.next().ok_or(TableError::Parse {
        line: 1,
        column: 1,
        message: "missing order line".into(),
    })?;
    let n: usize = header.trim().parse().map_err(|_| TableError::Parse {
        line: header_line,
        column: 1,
        message: format!("expected element count, found {:?}", header.trim()),
    })?;
    if n == 0 {
        return Err(TableError::Empty);
    }

    let mut entries = Vec::with_capacity(n * n);
    let mut rows = 0;
    for (line_no, line) in lines {
        rows += 1;
        if rows > n {
            return Err(TableError::Dimension(format!(
                "more than {n} rows (extra row at line {line_no})"
            )));
        }
        let mut cols = 0;
        for (column, token) in tokens_with_columns(line) {
            cols += 1;
            let value: u64 = token.parse().map_err(|_| TableError::Parse {
                line: line_no,
                column,
                message: format!("expected integer, found {token:?}"),
            })?;
            if value == 0 || value > n as u64 {
                return Err(TableError::OutOfRange {
                    row: rows,
                    column: cols,
                    value,
                    order: n,
                });
            }
            entries.push((value - 1) as u32);
        }
        if cols != n {
            return Err(TableError::Dimension(format!(
                "row {rows} (line {line_no}) has {cols} entries, expected {n}"
            )));
        }
    }
    if rows != n {
        return Err(TableError::Dimension(format!("expected {n} rows, found {rows}")));
    }
    CayleyTable::from_entries(n, entries)
}

fn tokens_with_columns(line: &str) -> impl Iterator<Item = (usize, &str)> {
    line.split(' ')
        .scan(1usize, |col, tok| {
            let start = *col;
            *col += tok.chars().count() + 1;
            Some((start, tok))
        })
        .filter(|(_, t)| !t.is_empty())
}

/// Writes the canonical text format, with a trailing newline.
pub fn write_table(table: &CayleyTable) -> String {
    let n = table.order();
    let mut out = String::with_capacity(n * n * 3 + 8);
    let _ = writeln!(out, "{n}");
    for i in 0..n {
        for (j, v) in table.row(i).iter().enumerate() {
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{}", v + 1);
        }
        out.push('\n');
    }
    out
}

/// A table together with the concrete elements it was generated from.
#[derive(Clone, Debug)]
pub struct GeneratedTable<E> {
    table: CayleyTable,
    elements: Vec<E>,
}

impl<E: Element> GeneratedTable<E> {
    /// Tabulates `elements` (pairwise distinct, closed under composition).
    pub fn tabulate(elements: Vec<E>) -> Result<Self, TableError> {
        if elements.is_empty() {
            return Err(TableError::Empty);
        }
        let mut index = FxHashMap::default();
        for (k, e) in elements.iter().enumerate() {
            index.insert(e.encoding().to_vec(), k as u32);
        }
        let n = elements.len();
        let rows: Vec<Vec<u32>> = {
            use rayon::prelude::*;
            elements
                .par_iter()
                .map(|a| {
                    elements
                        .iter()
                        .map(|b| {
                            let p = a.compose(b);
                            *index.get(p.encoding()).expect("element set is not closed")
                        })
                        .collect()
                })
                .collect()
        };
        let table = CayleyTable::from_entries(n, rows.concat())?;
        Ok(Self { table, elements })
    }

    pub fn table(&self) -> &CayleyTable {
        &self.table
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn into_parts(self) -> (CayleyTable, Vec<E>) {
        (self.table, self.elements)
    }

    /// The same table with elements renumbered in order of their canonical
    /// encodings.
    pub fn sorted_by_encoding(self) -> Self {
        let n = self.elements.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| self.elements[a].encoding().cmp(self.elements[b].encoding()));
        let mut perm = vec![0usize; n];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        let table = self.table.relabel(&perm);
        let mut slots: Vec<Option<E>> = self.elements.into_iter().map(Some).collect();
        let elements = order.iter().map(|&k| slots[k].take().expect("each index once")).collect();
        Self { table, elements }
    }

    /// Index of `element`, if present.
    pub fn index_of(&self, element: &E) -> Option<usize> {
        self.elements
            .iter()
            .position(|e| e.encoding() == element.encoding())
    }
}

/// Closes `generators` under composition with the default growth cap.
pub fn close_generators<E: Element>(generators: &[E]) -> Result<GeneratedTable<E>, TableError> {
    close_generators_capped(generators, DEFAULT_GROWTH_CAP)
}

/// Closes `generators` under composition.
///
/// Elements are numbered in breadth-first discovery order: the distinct
/// generators first, then each discovered element right-multiplied by each
/// generator in turn. Words of length `k` therefore precede words of length
/// `k + 1`, with ties broken by (left factor, right factor).
pub fn close_generators_capped<E: Element>(
    generators: &[E],
    cap: usize,
) -> Result<GeneratedTable<E>, TableError> {
    let first = generators.first().ok_or(TableError::NoGenerators)?;
    if let Some(g) = generators.iter().find(|g| g.degree() != first.degree()) {
        return Err(TableError::MixedDegrees(first.degree(), g.degree()));
    }

    let mut index: FxHashMap<Vec<u8>, u32> = FxHashMap::default();
    let mut elements: Vec<E> = Vec::new();
    let mut gens: Vec<u32> = Vec::new();
    for g in generators {
        let k = match index.get(g.encoding()) {
            Some(&k) => k,
            None => {
                let k = elements.len() as u32;
                index.insert(g.encoding().to_vec(), k);
                elements.push(g.clone());
                k
            }
        };
        if !gens.contains(&k) {
            gens.push(k);
        }
    }
    if elements.len() > cap {
        return Err(TableError::GrowthCap { cap });
    }

    let mut next = 0;
    while next < elements.len() {
        for &g in &gens {
            let p = elements[next].compose(&elements[g as usize]);
            if !index.contains_key(p.encoding()) {
                if elements.len() == cap {
                    return Err(TableError::GrowthCap { cap });
                }
                index.insert(p.encoding().to_vec(), elements.len() as u32);
                elements.push(p);
            }
        }
        next += 1;
    }
    GeneratedTable::tabulate(elements)
}
