use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ordinal::{Ordinal, OrdinalClass};

/// How the finite sets `A_n(a)` approximating a limit ordinal `a` are
/// produced. Every rule must yield finite subsets of `[0, a)` that grow
/// with `n` and whose maxima climb to `a`; `Canonical` realizes this
/// through the fundamental sequence, `MergedPrefix` diagonally unions a
/// list of rules, and `Explicit` is a literal table for driving tests.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ApproxFamilyRule {
    Canonical,
    #[serde(rename = "merged")]
    MergedPrefix { rules: Vec<ApproxFamilyRule> },
    Explicit { table: Vec<ExplicitEntry> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitEntry {
    pub alpha: Ordinal,
    /// `sets[j]` is the approximating set at depth `j + 1`.
    pub sets: Vec<BTreeSet<Ordinal>>,
}

impl ApproxFamilyRule {
    pub fn merged(rules: Vec<ApproxFamilyRule>) -> Result<Self> {
        if rules.is_empty() {
            return Err(Error::InvalidSpec("merged rule needs at least one constituent".into()));
        }
        Ok(ApproxFamilyRule::MergedPrefix { rules })
    }

    pub fn explicit(table: BTreeMap<Ordinal, Vec<BTreeSet<Ordinal>>>) -> Result<Self> {
        let table: Vec<ExplicitEntry> = table
            .into_iter()
            .map(|(alpha, sets)| ExplicitEntry { alpha, sets })
            .collect();
        let rule = ApproxFamilyRule::Explicit { table };
        rule.validate()?;
        Ok(rule)
    }

    /// Checks the statically checkable part of the invariants.
    pub fn validate(&self) -> Result<()> {
        match self {
            ApproxFamilyRule::Canonical => Ok(()),
            ApproxFamilyRule::MergedPrefix { rules } => {
                if rules.is_empty() {
                    return Err(Error::InvalidSpec("merged rule needs at least one constituent".into()));
                }
                rules.iter().try_for_each(|r| r.validate())
            }
            ApproxFamilyRule::Explicit { table } => {
                for entry in table {
                    if entry.alpha.classify() != OrdinalClass::Limit {
                        return Err(Error::InvalidSpec(format!(
                            "explicit table key {} is not a limit ordinal",
                            entry.alpha
                        )));
                    }
                    let mut prev: Option<&BTreeSet<Ordinal>> = None;
                    for set in &entry.sets {
                        if set.is_empty() {
                            return Err(Error::InvalidSpec("explicit approximating set is empty".into()));
                        }
                        if set.iter().any(|b| b >= &entry.alpha) {
                            return Err(Error::InvalidSpec(format!(
                                "explicit approximating set for {} reaches past it",
                                entry.alpha
                            )));
                        }
                        if let Some(p) = prev {
                            if !p.is_subset(set) {
                                return Err(Error::InvalidSpec(format!(
                                    "explicit approximating sets for {} are not nested",
                                    entry.alpha
                                )));
                            }
                        }
                        prev = Some(set);
                    }
                }
                Ok(())
            }
        }
    }

    /// The approximating set `A_n(alpha)` for a limit ordinal.
    pub fn approx_set(&self, alpha: &Ordinal, n: u64) -> Result<BTreeSet<Ordinal>> {
        if alpha.classify() != OrdinalClass::Limit {
            return Err(Error::NotALimit(alpha.to_string()));
        }
        assert!(n >= 1, "approximating sets are indexed from 1");
        match self {
            ApproxFamilyRule::Canonical => {
                (1..=n).map(|i| alpha.fund_seq(i)).collect()
            }
            ApproxFamilyRule::MergedPrefix { rules } => {
                let take = (n as usize).min(rules.len());
                let mut out = BTreeSet::new();
                for rule in &rules[..take] {
                    out.extend(rule.approx_set(alpha, n)?);
                }
                Ok(out)
            }
            ApproxFamilyRule::Explicit { table } => {
                let entry = table
                    .iter()
                    .find(|e| &e.alpha == alpha)
                    .ok_or_else(|| Error::ExplicitDomainMiss { alpha: alpha.to_string(), depth: n })?;
                entry
                    .sets
                    .get(n as usize - 1)
                    .cloned()
                    .ok_or_else(|| Error::ExplicitDomainMiss { alpha: alpha.to_string(), depth: n })
            }
        }
    }
}

impl Default for ApproxFamilyRule {
    fn default() -> Self {
        ApproxFamilyRule::Canonical
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn nats(ns: &[u64]) -> BTreeSet<Ordinal> {
        ns.iter().map(|&n| Ordinal::from_nat(n)).collect()
    }

    #[test]
    fn canonical_sets() {
        let rule = ApproxFamilyRule::Canonical;
        assert_eq!(rule.approx_set(&ord("w"), 3).unwrap(), nats(&[1, 2, 3]));
        let expected: BTreeSet<Ordinal> = [ord("w"), ord("w*2")].into_iter().collect();
        assert_eq!(rule.approx_set(&ord("w^2"), 2).unwrap(), expected);
        let expected: BTreeSet<Ordinal> = [ord("w + 1")].into_iter().collect();
        assert_eq!(rule.approx_set(&ord("w*2"), 1).unwrap(), expected);
        assert!(matches!(rule.approx_set(&ord("w + 1"), 1), Err(Error::NotALimit(_))));
    }

    #[test]
    fn canonical_sets_nest_and_climb() {
        let rule = ApproxFamilyRule::Canonical;
        for alpha in ["w", "w*2", "w^2", "w^2*3 + w"] {
            let alpha = ord(alpha);
            let mut prev_max: Option<Ordinal> = None;
            for n in 1..=20 {
                let a_n = rule.approx_set(&alpha, n).unwrap();
                let a_next = rule.approx_set(&alpha, n + 1).unwrap();
                assert!(a_n.is_subset(&a_next));
                assert!(a_n.iter().all(|b| b < &alpha));
                let max = a_n.iter().max().unwrap().clone();
                if let Some(p) = prev_max {
                    assert!(max > p, "max must strictly increase");
                }
                prev_max = Some(max);
            }
        }
    }

    #[test]
    fn merged_prefix_unions_leading_rules() {
        // Two explicit rules for w with different singleton ladders; the
        // merged rule at depth n unions the first n of them.
        let table_a = ApproxFamilyRule::explicit(
            [(ord("w"), vec![nats(&[1]), nats(&[1, 2])])].into_iter().collect(),
        )
        .unwrap();
        let table_b = ApproxFamilyRule::explicit(
            [(ord("w"), vec![nats(&[5]), nats(&[5, 6])])].into_iter().collect(),
        )
        .unwrap();
        let merged = ApproxFamilyRule::merged(vec![table_a, table_b]).unwrap();
        assert_eq!(merged.approx_set(&ord("w"), 1).unwrap(), nats(&[1]));
        assert_eq!(merged.approx_set(&ord("w"), 2).unwrap(), nats(&[1, 2, 5, 6]));
    }

    #[test]
    fn explicit_misses_are_reported() {
        let rule = ApproxFamilyRule::explicit(
            [(ord("w"), vec![nats(&[1])])].into_iter().collect(),
        )
        .unwrap();
        assert!(matches!(
            rule.approx_set(&ord("w^2"), 1),
            Err(Error::ExplicitDomainMiss { .. })
        ));
        assert!(matches!(
            rule.approx_set(&ord("w"), 2),
            Err(Error::ExplicitDomainMiss { .. })
        ));
    }
}
