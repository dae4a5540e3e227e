use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{BigRational, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finitely supported vector with exact rational coefficients on the
/// coordinate basis. Zero entries are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VectorQ {
    entries: BTreeMap<u32, BigRational>,
}

impl VectorQ {
    pub fn zero() -> Self {
        VectorQ::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (u32, BigRational)>>(entries: I) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (coord, value) in entries {
            if coord == 0 {
                return Err(Error::Parse("vector coordinates must be positive".into()));
            }
            if !value.is_zero() {
                map.insert(coord, value);
            }
        }
        Ok(VectorQ { entries: map })
    }

    /// Indicator vector of a coordinate set.
    pub fn indicator<I: IntoIterator<Item = u32>>(coords: I) -> Self {
        VectorQ {
            entries: coords
                .into_iter()
                .map(|c| (c, BigRational::from_integer(1.into())))
                .collect(),
        }
    }

    pub fn get(&self, coord: u32) -> BigRational {
        self.entries.get(&coord).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<u32> {
        self.entries.keys().copied().collect()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &BigRational)> {
        self.entries.iter().map(|(&c, v)| (c, v))
    }

    pub fn l1(&self) -> BigRational {
        self.entries.values().map(|v| v.abs()).sum()
    }

    pub fn linf(&self) -> BigRational {
        self.entries
            .values()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Same values carried to new coordinates; `positions` must match
    /// the support size.
    pub fn recoordinate(&self, coords: &[u32]) -> Result<Self> {
        if coords.len() != self.entries.len() {
            return Err(Error::Parse("coordinate list does not match support".into()));
        }
        Self::from_entries(
            self.entries
                .values()
                .cloned()
                .zip(coords.iter().copied())
                .map(|(v, c)| (c, v)),
        )
    }
}

impl fmt::Display for VectorQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (coord, value) in &self.entries {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            write!(f, "{coord}:{value}")?;
        }
        Ok(())
    }
}

impl FromStr for VectorQ {
    type Err = Error;

    /// `coord:value` pairs separated by commas, values as integers or
    /// fractions `p/q`; the empty string is the zero vector.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(VectorQ::zero());
        }
        let mut entries = Vec::new();
        for part in s.split(',') {
            let (coord, value) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected coord:value, got '{part}'")))?;
            let coord: u32 = coord
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coordinate '{coord}'")))?;
            let value: BigRational = value
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rational '{value}'")))?;
            entries.push((coord, value));
        }
        VectorQ::from_entries(entries)
    }
}

impl Serialize for VectorQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<(u32, String)> =
            self.entries.iter().map(|(&c, v)| (c, v.to_string())).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VectorQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<(u32, String)>::deserialize(deserializer)?;
        let entries: std::result::Result<Vec<(u32, BigRational)>, D::Error> = pairs
            .into_iter()
            .map(|(c, s)| {
                s.parse::<BigRational>()
                    .map(|v| (c, v))
                    .map_err(|e| D::Error::custom(format!("bad rational '{s}': {e}")))
            })
            .collect();
        VectorQ::from_entries(entries?).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_norms() {
        let v: VectorQ = "3:1,4:-2/3,5:0".parse().unwrap();
        assert_eq!(v.support(), vec![3, 4]);
        assert_eq!(v.l1().to_string(), "5/3");
        assert_eq!(v.linf().to_string(), "1");
        assert_eq!(v.to_string(), "3:1,4:-2/3");
        assert!("".parse::<VectorQ>().unwrap().is_zero());
        assert!("0:1".parse::<VectorQ>().is_err());
    }

    #[test]
    fn json_roundtrip() {
        let v: VectorQ = "1:2/7,9:-3".parse().unwrap();
        let json = serde_json::to_string(&v).unwrap();
        let back: VectorQ = serde_json::from_str(&json).unwrap();
        assert_eq!(back, v);
    }
}
