use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An ordinal below `w^w` in Cantor normal form: the sum
/// `w^e1*c1 + w^e2*c2 + ... + w^ek*ck` with `e1 > e2 > ... > ek` and all
/// coefficients at least 1. The empty sum is 0. Keeping every exponent a
/// natural number pins the whole universe under `w^w`, which covers all
/// indices the desk-scale computations ever touch while keeping the
/// arithmetic elementary.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ordinal {
    /// `(exponent, coefficient)` pairs, exponents strictly decreasing.
    terms: Vec<(u64, u64)>,
}

/// Case split every transfinite recursion dispatches on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrdinalClass {
    Zero,
    Successor(Ordinal),
    Limit,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { terms: Vec::new() }
    }

    pub fn from_nat(n: u64) -> Self {
        if n == 0 {
            Self::zero()
        } else {
            Ordinal { terms: vec![(0, n)] }
        }
    }

    pub fn omega() -> Self {
        Ordinal { terms: vec![(1, 1)] }
    }

    /// `w^exp * coeff`; `coeff` must be nonzero.
    pub fn omega_pow(exp: u64, coeff: u64) -> Self {
        assert!(coeff >= 1, "coefficient must be at least 1");
        Ordinal { terms: vec![(exp, coeff)] }
    }

    /// Builds from raw CNF terms, validating the invariants.
    pub fn from_terms(terms: Vec<(u64, u64)>) -> Result<Self> {
        for pair in terms.windows(2) {
            if pair[0].0 <= pair[1].0 {
                return Err(Error::Parse(format!(
                    "exponents must strictly decrease, got {} then {}",
                    pair[0].0, pair[1].0
                )));
            }
        }
        if terms.iter().any(|&(_, c)| c == 0) {
            return Err(Error::Parse("zero coefficient in CNF term".into()));
        }
        Ok(Ordinal { terms })
    }

    pub fn terms(&self) -> &[(u64, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value as a natural number, when the ordinal is finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(0, c)] => Some(*c),
            _ => None,
        }
    }

    /// Ordinal addition. Not commutative: terms of `self` below the
    /// leading exponent of `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        let Some(&(lead_exp, lead_coeff)) = rhs.terms.first() else {
            return self.clone();
        };
        let mut terms: Vec<(u64, u64)> = self
            .terms
            .iter()
            .copied()
            .take_while(|&(e, _)| e > lead_exp)
            .collect();
        // A kept term with the same exponent merges with rhs's lead.
        let mut rhs_iter = rhs.terms.iter().copied();
        rhs_iter.next();
        if let Some(&(e, c)) = self.terms.get(terms.len()) {
            if e == lead_exp {
                terms.push((lead_exp, c + lead_coeff));
            } else {
                terms.push((lead_exp, lead_coeff));
            }
        } else {
            terms.push((lead_exp, lead_coeff));
        }
        terms.extend(rhs_iter);
        Ordinal { terms }
    }

    pub fn succ(&self) -> Ordinal {
        self.add(&Ordinal::from_nat(1))
    }

    pub fn classify(&self) -> OrdinalClass {
        match self.terms.last() {
            None => OrdinalClass::Zero,
            Some(&(0, c)) => {
                let mut terms = self.terms.clone();
                if c == 1 {
                    terms.pop();
                } else {
                    terms.last_mut().unwrap().1 = c - 1;
                }
                OrdinalClass::Successor(Ordinal { terms })
            }
            Some(_) => OrdinalClass::Limit,
        }
    }

    /// Canonical fundamental sequence of a limit ordinal: writing
    /// `self = g + w^k*m` with `k >= 1` for the last CNF term, the n-th
    /// value is `g + w^k*(m-1) + w^(k-1)*n`. Strictly increasing in `n`
    /// with supremum `self`.
    pub fn fund_seq(&self, n: u64) -> Result<Ordinal> {
        assert!(n >= 1, "fundamental sequence is indexed from 1");
        let Some(&(k, m)) = self.terms.last() else {
            return Err(Error::NotALimit(self.to_string()));
        };
        if k == 0 {
            return Err(Error::NotALimit(self.to_string()));
        }
        let mut terms: Vec<(u64, u64)> = self.terms[..self.terms.len() - 1].to_vec();
        if m > 1 {
            terms.push((k, m - 1));
        }
        terms.push((k - 1, n));
        Ok(Ordinal { terms })
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordinal {
    /// Lexicographic comparison of CNF term lists; agrees with the
    /// ordinal order because exponents strictly decrease.
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.terms.iter().zip(other.terms.iter()) {
            match a.0.cmp(&b.0).then(a.1.cmp(&b.1)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for &(e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (e, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "w")?,
                (1, c) => write!(f, "w*{c}")?,
                (e, 1) => write!(f, "w^{e}")?,
                (e, c) => write!(f, "w^{e}*{c}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    /// Accepts sums of terms `w^k*c`, `w^k`, `w*c`, `w`, or a bare
    /// natural, joined by `+`. `omega` is a synonym for `w`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty ordinal literal".into()));
        }
        let mut terms: Vec<(u64, u64)> = Vec::new();
        for raw in s.split('+') {
            let t = raw.trim();
            if t.is_empty() {
                return Err(Error::Parse(format!("empty term in ordinal '{s}'")));
            }
            if t == "0" {
                continue;
            }
            let (head, coeff) = match t.split_once('*') {
                Some((h, c)) => {
                    let coeff: u64 = c
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad coefficient in '{t}'")))?;
                    (h.trim(), coeff)
                }
                None => (t, 1),
            };
            let term = if head == "w" || head == "omega" || head == "ω" {
                (1, coeff)
            } else if let Some(exp) = head
                .strip_prefix("w^")
                .or_else(|| head.strip_prefix("omega^"))
                .or_else(|| head.strip_prefix("ω^"))
            {
                let exp: u64 = exp
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{t}'")))?;
                (exp, coeff)
            } else {
                let n: u64 = head
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad ordinal term '{t}'")))?;
                if n == 0 {
                    return Err(Error::Parse(format!("zero term with coefficient in '{t}'")));
                }
                (0, n * coeff)
            };
            if term.1 == 0 {
                return Err(Error::Parse(format!("zero coefficient in '{t}'")));
            }
            terms.push(term);
        }
        // Fold repeated exponents left-to-right with ordinal addition so
        // that e.g. "w + w" parses as w*2 and "1 + w" as w.
        let mut acc = Ordinal::zero();
        for (e, c) in terms {
            acc = acc.add(&Ordinal::omega_pow(e, c));
        }
        Ok(acc)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    /// Accepts the display string or a JSON array of
    /// `[exponent, coefficient]` pairs.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Pairs(Vec<(u64, u64)>),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(D::Error::custom),
            Repr::Pairs(p) => Ordinal::from_terms(p).map_err(D::Error::custom),
        }
    }
}
