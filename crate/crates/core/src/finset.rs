use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite subset of the positive integers, stored strictly increasing.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FinSet(Vec<u32>);

impl FinSet {
    pub fn empty() -> Self {
        FinSet(Vec::new())
    }

    /// Builds from arbitrary elements, sorting and deduplicating.
    /// Rejects 0 (the ground set starts at 1).
    pub fn new(mut elements: Vec<u32>) -> Result<Self> {
        if elements.contains(&0) {
            return Err(Error::Parse("set elements must be positive".into()));
        }
        elements.sort_unstable();
        elements.dedup();
        Ok(FinSet(elements))
    }

    /// Builds from a slice already known to be strictly increasing.
    pub fn from_sorted(elements: Vec<u32>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elements.first().map_or(true, |&e| e >= 1));
        FinSet(elements)
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, n: u32) -> bool {
        self.0.binary_search(&n).is_ok()
    }

    /// The set without its least element; empty stays empty.
    pub fn strip_min(&self) -> FinSet {
        FinSet(self.0.iter().skip(1).copied().collect())
    }

    pub fn insert(&self, n: u32) -> FinSet {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&n) {
            v.insert(pos, n);
        }
        FinSet(v)
    }

    pub fn is_subset(&self, other: &FinSet) -> bool {
        self.0.iter().all(|&e| other.contains(e))
    }

    /// The subset selected by a bitmask over element positions.
    pub fn mask_subset(&self, mask: u64) -> FinSet {
        FinSet(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect(),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl FromStr for FinSet {
    type Err = Error;

    /// Comma-separated positive integers; optional surrounding braces;
    /// the empty string denotes the empty set.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('{').trim_end_matches('}').trim();
        if s.is_empty() {
            return Ok(FinSet::empty());
        }
        let elements: Result<Vec<u32>> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad set element '{}'", t.trim())))
            })
            .collect();
        FinSet::new(elements?)
    }
}

impl Serialize for FinSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FinSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(deserializer)?;
        FinSet::new(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let s: FinSet = "3,5,9".parse().unwrap();
        assert_eq!(s.elements(), &[3, 5, 9]);
        assert_eq!(s.to_string(), "{3,5,9}");
        assert_eq!("".parse::<FinSet>().unwrap(), FinSet::empty());
        assert_eq!("{2,1}".parse::<FinSet>().unwrap().elements(), &[1, 2]);
        assert!("0,1".parse::<FinSet>().is_err());
    }

    #[test]
    fn strip_and_mask() {
        let s: FinSet = "2,4,6".parse().unwrap();
        assert_eq!(s.strip_min().elements(), &[4, 6]);
        assert_eq!(s.mask_subset(0b101).elements(), &[2, 6]);
        assert_eq!(s.mask_subset(0), FinSet::empty());
    }
}
