use std::fmt;
use std::str::FromStr;

use super::{Element, FamilyError};

/// Largest supported degree; each row is stored as one byte bitmask.
pub const MAX_RELATION_DEGREE: usize = 8;

/// A binary relation on `{1..d}` as a boolean matrix; bit `j` of `rows[i]`
/// is set iff `i` is related to `j`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BinaryRelation {
    rows: Vec<u8>,
}

impl BinaryRelation {
    pub fn from_rows(degree: usize, rows: Vec<u8>) -> Result<Self, FamilyError> {
        if degree == 0 || degree > MAX_RELATION_DEGREE || rows.len() != degree {
            return Err(FamilyError::InvalidElement(format!(
                "binary relations need 1..={MAX_RELATION_DEGREE} rows, got {} rows for degree {degree}",
                rows.len()
            )));
        }
        let mask = if degree == 8 { u8::MAX } else { (1u8 << degree) - 1 };
        if rows.iter().any(|r| r & !mask != 0) {
            return Err(FamilyError::InvalidElement("row has bits beyond the degree".into()));
        }
        Ok(Self { rows })
    }

    pub fn identity(degree: usize) -> Self {
        Self {
            rows: (0..degree).map(|i| 1u8 << i).collect(),
        }
    }

    pub fn related(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }
}

/// Relational product: `i (ab) k` iff `i a j` and `j b k` for some `j`.
pub fn compose_relations(
    a: &BinaryRelation,
    b: &BinaryRelation,
) -> Result<BinaryRelation, FamilyError> {
    super::check_degrees(a.degree(), b.degree())?;
    Ok(a.compose(b))
}

impl Element for BinaryRelation {
    fn degree(&self) -> usize {
        self.rows.len()
    }

    fn encoding(&self) -> &[u8] {
        &self.rows
    }

    fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        let rows = self
            .rows
            .iter()
            .map(|&row| {
                let mut out = 0u8;
                let mut bits = row;
                while bits != 0 {
                    let j = bits.trailing_zeros() as usize;
                    out |= other.rows[j];
                    bits &= bits - 1;
                }
                out
            })
            .collect();
        Self { rows }
    }

    fn conjugate(&self, perm: &[u8]) -> Self {
        let d = self.degree();
        let mut rows = vec![0u8; d];
        for i in 0..d {
            for j in 0..d {
                if self.related(i, j) {
                    rows[perm[i] as usize] |= 1 << perm[j];
                }
            }
        }
        Self { rows }
    }
}

impl fmt::Display for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        for i in 0..d {
            if i > 0 {
                f.write_str("|")?;
            }
            for j in 0..d {
                f.write_str(if self.related(i, j) { "1" } else { "0" })?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BinaryRelation {
    type Err = FamilyError;

    /// Parses row strings such as `01|00`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let rows: Vec<&str> = s.trim().split('|').collect();
        let d = rows.len();
        let rows = rows
            .iter()
            .map(|row| {
                if row.len() != d {
                    return Err(FamilyError::Parse(format!(
                        "relation {s:?} is not square"
                    )));
                }
                row.chars().enumerate().try_fold(0u8, |acc, (j, c)| match c {
                    '0' => Ok(acc),
                    '1' => Ok(acc | 1 << j),
                    _ => Err(FamilyError::Parse(format!("bad matrix entry {c:?} in {s:?}"))),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(d, rows)
    }
}
