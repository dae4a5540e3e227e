use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finset::FinSet;

/// A finitely described infinite subset `N = {n_1 < n_2 < ...}` of the
/// positive integers: an explicit strictly increasing prefix followed by
/// an affine tail `n_i = stride * i + offset`. The order isomorphism
/// `i -> n_i` is what the restriction and spreading combinators consume.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IndexMapRepr", into = "IndexMapRepr")]
pub struct IndexMap {
    prefix: Vec<u32>,
    stride: u32,
    offset: i64,
}

#[derive(Serialize, Deserialize)]
struct IndexMapRepr {
    #[serde(default)]
    prefix: Vec<u32>,
    stride: u32,
    #[serde(default)]
    offset: i64,
}

impl TryFrom<IndexMapRepr> for IndexMap {
    type Error = Error;
    fn try_from(r: IndexMapRepr) -> Result<Self> {
        IndexMap::new(r.prefix, r.stride, r.offset)
    }
}

impl From<IndexMap> for IndexMapRepr {
    fn from(m: IndexMap) -> Self {
        IndexMapRepr { prefix: m.prefix, stride: m.stride, offset: m.offset }
    }
}

impl IndexMap {
    pub fn new(prefix: Vec<u32>, stride: u32, offset: i64) -> Result<Self> {
        if stride == 0 {
            return Err(Error::InvalidSpec("index map stride must be at least 1".into()));
        }
        if !prefix.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidSpec("index map prefix must strictly increase".into()));
        }
        if prefix.first().is_some_and(|&p| p == 0) {
            return Err(Error::InvalidSpec("index map elements must be positive".into()));
        }
        let first_tail = stride as i64 * (prefix.len() as i64 + 1) + offset;
        if first_tail < 1 {
            return Err(Error::InvalidSpec("index map tail must start at a positive value".into()));
        }
        if let Some(&last) = prefix.last() {
            if first_tail <= last as i64 {
                return Err(Error::InvalidSpec(
                    "index map tail must continue strictly above the prefix".into(),
                ));
            }
        }
        Ok(IndexMap { prefix, stride, offset })
    }

    /// The identity map `n_i = i`.
    pub fn identity() -> Self {
        IndexMap { prefix: Vec::new(), stride: 1, offset: 0 }
    }

    /// The even numbers `n_i = 2i`.
    pub fn evens() -> Self {
        IndexMap { prefix: Vec::new(), stride: 2, offset: 0 }
    }

    /// `n_i`, indexed from 1.
    pub fn nth(&self, i: usize) -> u32 {
        assert!(i >= 1);
        if i <= self.prefix.len() {
            self.prefix[i - 1]
        } else {
            (self.stride as i64 * i as i64 + self.offset) as u32
        }
    }

    /// Position of `n` in the enumeration, if present (1-based).
    pub fn index_of(&self, n: u32) -> Option<usize> {
        if let Ok(p) = self.prefix.binary_search(&n) {
            return Some(p + 1);
        }
        let i = (n as i64 - self.offset) / self.stride as i64;
        if i >= 1
            && i as usize > self.prefix.len()
            && self.stride as i64 * i + self.offset == n as i64
        {
            Some(i as usize)
        } else {
            None
        }
    }

    pub fn contains(&self, n: u32) -> bool {
        self.index_of(n).is_some()
    }

    pub fn contains_set(&self, set: &FinSet) -> bool {
        set.iter().all(|e| self.contains(e))
    }

    /// Preimage positions of a set contained in the range.
    pub fn preimage(&self, set: &FinSet) -> Option<FinSet> {
        let mut idx = Vec::with_capacity(set.len());
        for e in set.iter() {
            idx.push(self.index_of(e)? as u32);
        }
        Some(FinSet::from_sorted(idx))
    }

    /// Image of a set of positions.
    pub fn image(&self, positions: &FinSet) -> FinSet {
        FinSet::from_sorted(positions.iter().map(|i| self.nth(i as usize)).collect())
    }

    /// `#(N ∩ [1, bound])`.
    pub fn count_up_to(&self, bound: u32) -> usize {
        (1..).map(|i| self.nth(i)).take_while(|&v| v <= bound).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_evens() {
        let id = IndexMap::identity();
        assert_eq!(id.nth(7), 7);
        assert_eq!(id.index_of(7), Some(7));
        let ev = IndexMap::evens();
        assert_eq!(ev.nth(3), 6);
        assert_eq!(ev.index_of(6), Some(3));
        assert_eq!(ev.index_of(5), None);
    }

    #[test]
    fn prefix_then_tail() {
        // Primes up front, then the odd numbers from 13 on.
        let m = IndexMap::new(vec![2, 3, 5, 7, 11], 2, 1).unwrap();
        assert_eq!(m.nth(5), 11);
        assert_eq!(m.nth(6), 13);
        assert_eq!(m.nth(7), 15);
        assert_eq!(m.index_of(13), Some(6));
        assert_eq!(m.index_of(12), None);
        assert_eq!(m.index_of(5), Some(3));
        let set: FinSet = "3,13".parse().unwrap();
        assert_eq!(m.preimage(&set).unwrap().elements(), &[2, 6]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(IndexMap::new(vec![], 0, 5).is_err());
        assert!(IndexMap::new(vec![5, 4], 1, 10).is_err());
        // Tail starts at 3 while the prefix already reached 9.
        assert!(IndexMap::new(vec![9], 1, 1).is_err());
    }

    #[test]
    fn counting() {
        assert_eq!(IndexMap::evens().count_up_to(9), 4);
        assert_eq!(IndexMap::identity().count_up_to(9), 9);
    }
}
