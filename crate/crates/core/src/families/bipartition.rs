use std::fmt;
use std::str::FromStr;

use super::{Element, FamilyError};

/// A set partition of the `2d` points `{1..d, 1'..d'}`.
///
/// Points are numbered `0..d` for the top row and `d..2d` for the primed
/// bottom row. `labels[p]` is the block number of point `p`, with blocks
/// numbered in order of their least point, so equal diagrams have equal
/// labels.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    labels: Vec<u8>,
}

impl Bipartition {
    /// Builds a diagram from arbitrary block labels per point.
    pub fn from_labels(labels: &[usize]) -> Result<Self, FamilyError> {
        if labels.is_empty() || !labels.len().is_multiple_of(2) || labels.len() > 250 {
            return Err(FamilyError::InvalidElement(format!(
                "a bipartition needs an even, non-zero number of points, got {}",
                labels.len()
            )));
        }
        Ok(Self {
            labels: canonical_labels(labels.iter().copied()),
        })
    }

    /// Builds a diagram of the given degree from blocks of 0-based points.
    pub fn from_blocks(degree: usize, blocks: &[Vec<usize>]) -> Result<Self, FamilyError> {
        let mut labels = vec![usize::MAX; 2 * degree];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(FamilyError::InvalidElement("empty block".into()));
            }
            for &p in block {
                if p >= 2 * degree {
                    return Err(FamilyError::InvalidElement(format!(
                        "point out of range for degree {degree}"
                    )));
                }
                if labels[p] != usize::MAX {
                    return Err(FamilyError::InvalidElement(format!(
                        "point {} appears in two blocks",
                        point_name(p, degree)
                    )));
                }
                labels[p] = b;
            }
        }
        if let Some(p) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(FamilyError::InvalidElement(format!(
                "point {} is not covered",
                point_name(p, degree)
            )));
        }
        Self::from_labels(&labels)
    }

    pub fn identity(degree: usize) -> Self {
        let labels: Vec<usize> = (0..degree).chain(0..degree).collect();
        Self::from_labels(&labels).expect("degree is positive")
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Blocks as sorted lists of 0-based points, ordered by least point.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let count = self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0);
        let mut blocks = vec![Vec::new(); count];
        for (p, &l) in self.labels.iter().enumerate() {
            blocks[l as usize].push(p);
        }
        blocks
    }

    fn block_sizes(&self) -> Vec<usize> {
        self.blocks().iter().map(Vec::len).collect()
    }

    /// Every block has exactly two points.
    pub fn is_brauer(&self) -> bool {
        self.block_sizes().iter().all(|&s| s == 2)
    }

    /// A Brauer diagram whose arcs do not cross when drawn in a rectangle.
    pub fn is_temperley_lieb(&self) -> bool {
        if !self.is_brauer() {
            return false;
        }
        let d = self.degree();
        // walk the boundary: 1..d along the top, then d'..1' back along the bottom
        let boundary = |p: usize| if p < d { p } else { 3 * d - 1 - p };
        let arcs: Vec<(usize, usize)> = self
            .blocks()
            .iter()
            .map(|b| {
                let (x, y) = (boundary(b[0]), boundary(b[1]));
                (x.min(y), x.max(y))
            })
            .collect();
        arcs.iter().all(|&(a, b)| {
            arcs.iter()
                .all(|&(c, e)| !(a < c && c < b && b < e) && !(c < a && a < e && e < b))
        })
    }

    /// Every block meets both rows.
    pub fn is_block_bijection(&self) -> bool {
        let d = self.degree();
        self.blocks()
            .iter()
            .all(|b| b.iter().any(|&p| p < d) && b.iter().any(|&p| p >= d))
    }

    /// Mirror image swapping the two rows; reverses products,
    /// `(ab)* = b*a*`.
    pub fn flip(&self) -> Self {
        let d = self.degree();
        let swapped = self.labels[d..].iter().chain(&self.labels[..d]).map(|&l| l as usize);
        Self {
            labels: canonical_labels(swapped),
        }
    }
}

fn point_name(p: usize, degree: usize) -> String {
    if p < degree {
        format!("{}", p + 1)
    } else {
        format!("{}'", p - degree + 1)
    }
}

/// Renumbers labels by first appearance.
fn canonical_labels(labels: impl Iterator<Item = usize>) -> Vec<u8> {
    let mut renumber: Vec<(usize, u8)> = Vec::new();
    labels
        .map(|l| match renumber.iter().find(|(old, _)| *old == l) {
            Some(&(_, new)) => new,
            None => {
                let new = renumber.len() as u8;
                renumber.push((l, new));
                new
            }
        })
        .collect()
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Diagram product: `a` stacked above `b`.
pub fn compose_bipartitions(a: &Bipartition, b: &Bipartition) -> Result<Bipartition, FamilyError> {
    super::check_degrees(a.degree(), b.degree())?;
    Ok(a.compose(b))
}

impl Element for Bipartition {
    fn degree(&self) -> usize {
        self.labels.len() / 2
    }

    fn encoding(&self) -> &[u8] {
        &self.labels
    }

    fn compose(&self, other: &Self) -> Self {
        let d = self.degree();
        debug_assert_eq!(d, other.degree());
        // 0..d top of self, d..2d the shared middle row, 2d..3d bottom of other
        let mut parent: Vec<usize> = (0..3 * d).collect();
        let mut first = [usize::MAX; 256];
        for (p, &l) in self.labels.iter().enumerate() {
            let slot = &mut first[l as usize];
            if *slot == usize::MAX {
                *slot = p;
            } else {
                union(&mut parent, *slot, p);
            }
        }
        let mut first = [usize::MAX; 256];
        for (p, &l) in other.labels.iter().enumerate() {
            let q = p + d;
            let slot = &mut first[l as usize];
            if *slot == usize::MAX {
                *slot = q;
            } else {
                union(&mut parent, *slot, q);
            }
        }
        let outer: Vec<usize> = (0..d)
            .chain(2 * d..3 * d)
            .map(|p| find(&mut parent, p))
            .collect();
        Self {
            labels: canonical_labels(outer.into_iter()),
        }
    }

    fn conjugate(&self, perm: &[u8]) -> Self {
        let d = self.degree();
        let mut labels = vec![0usize; 2 * d];
        for i in 0..d {
            labels[perm[i] as usize] = self.labels[i] as usize;
            labels[d + perm[i] as usize] = self.labels[d + i] as usize;
        }
        Self {
            labels: canonical_labels(labels.into_iter()),
        }
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.degree();
        f.write_str("{")?;
        for (k, block) in self.blocks().iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (i, &p) in block.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                f.write_str(&point_name(p, d))?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Bipartition {
    /// Parses `{{1,2'},{2,1'}}` for a diagram of the given degree.
    pub fn parse_with_degree(s: &str, degree: usize) -> Result<Self, FamilyError> {
        let blocks = parse_blocks(s)?;
        let blocks = blocks
            .into_iter()
            .map(|b| {
                b.into_iter()
                    .map(|(point, primed)| {
                        if point == 0 || point > degree {
                            Err(FamilyError::Parse(format!(
                                "point {point} out of range for degree {degree}"
                            )))
                        } else {
                            Ok(point - 1 + if primed { degree } else { 0 })
                        }
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_blocks(degree, &blocks)
    }
}

impl FromStr for Bipartition {
    type Err = FamilyError;

    /// Infers the degree from the largest point mentioned.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let degree = parse_blocks(s)?
            .iter()
            .flatten()
            .map(|&(p, _)| p)
            .max()
            .unwrap_or(0);
        Self::parse_with_degree(s, degree)
    }
}

fn parse_blocks(s: &str) -> Result<Vec<Vec<(usize, bool)>>, FamilyError> {
    let bad = || FamilyError::Parse(format!("malformed bipartition {s:?}"));
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let inner = compact
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(bad)?;
    let mut blocks = Vec::new();
    let mut rest = inner;
    while !rest.is_empty() {
        let body = rest.strip_prefix('{').ok_or_else(bad)?;
        let close = body.find('}').ok_or_else(bad)?;
        let block = body[..close]
            .split(',')
            .map(|tok| {
                let (num, primed) = match tok.strip_suffix('\'') {
                    Some(n) => (n, true),
                    None => (tok, false),
                };
                num.parse::<usize>().map(|p| (p, primed)).map_err(|_| bad())
            })
            .collect::<Result<Vec<_>, _>>()?;
        blocks.push(block);
        rest = &body[close + 1..];
        rest = rest.strip_prefix(',').unwrap_or(rest);
    }
    Ok(blocks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(s: &str, d: usize) -> Bipartition {
        Bipartition::parse_with_degree(s, d).unwrap()
    }

    #[test]
    fn flip_reverses_products() {
        let x = b("{{1,2,1'},{2'}}", 2);
        let y = b("{{1},{2,1',2'}}", 2);
        assert_eq!(x.flip().to_string(), "{{1,1',2'},{2}}");
        assert_eq!(x.flip().flip(), x);
        let xy = compose_bipartitions(&x, &y).unwrap();
        assert_eq!(xy.flip(), compose_bipartitions(&y.flip(), &x.flip()).unwrap());
    }

    #[test]
    fn identity_is_neutral() {
        let x = b("{{1,2'},{2},{1'}}", 2);
        let id = Bipartition::identity(2);
        assert_eq!(compose_bipartitions(&id, &x).unwrap(), x);
        assert_eq!(compose_bipartitions(&x, &id).unwrap(), x);
        assert_eq!(id.to_string(), "{{1,1'},{2,2'}}");
    }

    #[test]
    fn singleton_blocks_persist() {
        let x = b("{{1},{1'}}", 1);
        assert_eq!(x.compose(&x), x);
    }

    #[test]
    fn cup_cap_is_idempotent() {
        let e = b("{{1,2},{1',2'}}", 2);
        assert_eq!(e.compose(&e), e);
        assert!(e.is_temperley_lieb());
        assert!(!e.is_block_bijection());
    }

    #[test]
    fn composition_joins_through_middle_row() {
        // transposition followed by a cap: {1,2} on top survives, bottom splits
        let swap = b("{{1,2'},{2,1'}}", 2);
        let e = b("{{1,2},{1',2'}}", 2);
        assert_eq!(swap.compose(&e), e);
        let x = b("{{1,1'},{2},{2'}}", 2);
        assert_eq!(x.compose(&e).to_string(), "{{1},{2},{1',2'}}");
        assert_eq!(e.compose(&x).to_string(), "{{1,2},{1'},{2'}}");
        assert!(matches!(
            compose_bipartitions(&x, &Bipartition::identity(3)),
            Err(FamilyError::DegreeMismatch { .. })
        ));
    }

    #[test]
    fn planarity() {
        assert!(!b("{{1,2'},{2,1'}}", 2).is_temperley_lieb());
        assert!(b("{{1,1'},{2,2'}}", 2).is_temperley_lieb());
        assert!(b("{{1,2},{3,3'},{1',2'}}", 3).is_temperley_lieb());
        assert!(b("{{1,1'},{2,3},{2',3'}}", 3).is_temperley_lieb());
        assert!(!b("{{1,3},{2,2'},{1',3'}}", 3).is_temperley_lieb());
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(Bipartition::parse_with_degree("{{1,2'}}", 2).is_err());
        assert!(Bipartition::parse_with_degree("{{1,1},{2,1',2'}}", 2).is_err());
        assert!(Bipartition::parse_with_degree("{{1,3'},{2,1',2'}}", 2).is_err());
        assert!(Bipartition::parse_with_degree("{1,2}", 2).is_err());
        let x: Bipartition = "{{2,1'},{1,2'}}".parse().unwrap();
        assert_eq!(x.to_string(), "{{1,2'},{2,1'}}");
    }

    #[test]
    fn conjugation_relabels_both_rows() {
        let x = b("{{1,1'},{2},{2'}}", 2);
        assert_eq!(x.conjugate(&[1, 0]).to_string(), "{{1},{2,2'},{1'}}");
    }
}
