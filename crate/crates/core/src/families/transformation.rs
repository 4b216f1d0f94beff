use std::fmt;
use std::str::FromStr;

use super::{parse_bracket_list, Element, FamilyError};

/// Marker for an undefined image in a [`PartialTransformation`].
pub const UNDEFINED: u8 = u8::MAX;

/// A total map of `{1..d}` to itself, stored 0-based.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transformation {
    images: Vec<u8>,
}

impl Transformation {
    pub fn new(images: Vec<u8>) -> Result<Self, FamilyError> {
        let d = images.len();
        if d == 0 || d > 250 {
            return Err(FamilyError::InvalidElement(format!("unsupported degree {d}")));
        }
        if let Some(&bad) = images.iter().find(|&&x| x as usize >= d) {
            return Err(FamilyError::InvalidElement(format!(
                "image {} out of range 1..{d}",
                bad as usize + 1
            )));
        }
        Ok(Self { images })
    }

    pub fn identity(degree: usize) -> Self {
        Self {
            images: (0..degree as u8).collect(),
        }
    }

    pub fn images(&self) -> &[u8] {
        &self.images
    }

    pub fn apply(&self, point: usize) -> usize {
        self.images[point] as usize
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images
            .iter()
            .all(|&x| !std::mem::replace(&mut seen[x as usize], true))
    }

    pub fn to_partial(&self) -> PartialTransformation {
        PartialTransformation {
            images: self.images.clone(),
        }
    }
}

/// `x ↦ t(s(x))`: apply `s` first, then `t`.
pub fn compose_transformations(
    s: &Transformation,
    t: &Transformation,
) -> Result<Transformation, FamilyError> {
    super::check_degrees(s.degree(), t.degree())?;
    Ok(s.compose(t))
}

impl Element for Transformation {
    fn degree(&self) -> usize {
        self.images.len()
    }

    fn encoding(&self) -> &[u8] {
        &self.images
    }

    fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            images: self.images.iter().map(|&x| other.images[x as usize]).collect(),
        }
    }

    fn conjugate(&self, perm: &[u8]) -> Self {
        let mut images = vec![0u8; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[perm[x] as usize] = perm[y as usize];
        }
        Self { images }
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, x) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", x + 1)?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Transformation {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items = parse_bracket_list(s)?;
        let images = items
            .iter()
            .map(|item| match item {
                Some(v) => Ok(*v),
                None => Err(FamilyError::Parse(format!(
                    "undefined image in total transformation {s:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(images)
    }
}

/// A partial map of `{1..d}` to itself; undefined points hold [`UNDEFINED`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialTransformation {
    images: Vec<u8>,
}

impl PartialTransformation {
    pub fn new(images: Vec<Option<u8>>) -> Result<Self, FamilyError> {
        let d = images.len();
        if d == 0 || d > 250 {
            return Err(FamilyError::InvalidElement(format!("unsupported degree {d}")));
        }
        if let Some(bad) = images.iter().flatten().find(|&&x| x as usize >= d) {
            return Err(FamilyError::InvalidElement(format!(
                "image {} out of range 1..{d}",
                *bad as usize + 1
            )));
        }
        Ok(Self {
            images: images.into_iter().map(|x| x.unwrap_or(UNDEFINED)).collect(),
        })
    }

    pub fn image(&self, point: usize) -> Option<usize> {
        match self.images[point] {
            UNDEFINED => None,
            x => Some(x as usize),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.images.len()];
        self.images
            .iter()
            .filter(|&&x| x != UNDEFINED)
            .all(|&x| !std::mem::replace(&mut seen[x as usize], true))
    }

    pub fn is_total(&self) -> bool {
        !self.images.contains(&UNDEFINED)
    }

    /// The graph of the map as a boolean matrix.
    pub fn to_relation(&self) -> super::BinaryRelation {
        let d = self.images.len();
        let mut rows = vec![0u8; d];
        for (x, row) in rows.iter_mut().enumerate() {
            if let Some(y) = self.image(x) {
                *row = 1 << y;
            }
        }
        super::BinaryRelation::from_rows(d, rows).expect("degree already validated")
    }
}

impl Element for PartialTransformation {
    fn degree(&self) -> usize {
        self.images.len()
    }

    fn encoding(&self) -> &[u8] {
        &self.images
    }

    fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self {
            images: self
                .images
                .iter()
                .map(|&x| if x == UNDEFINED { UNDEFINED } else { other.images[x as usize] })
                .collect(),
        }
    }

    fn conjugate(&self, perm: &[u8]) -> Self {
        let mut images = vec![UNDEFINED; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            if y != UNDEFINED {
                images[perm[x] as usize] = perm[y as usize];
            }
        }
        Self { images }
    }
}

impl fmt::Display for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, &x) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            if x == UNDEFINED {
                f.write_str("-")?;
            } else {
                write!(f, "{}", x + 1)?;
            }
        }
        f.write_str("]")
    }
}

impl fmt::Debug for PartialTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for PartialTransformation {
    type Err = FamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::new(parse_bracket_list(s)?)
    }
}
