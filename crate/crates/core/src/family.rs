use serde::{Deserialize, Serialize};

use crate::approx::ApproxFamilyRule;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::finset::FinSet;
use crate::index_map::IndexMap;
use crate::ordinal::{Ordinal, OrdinalClass};
use crate::trie::Trie;

/// Algebraic description of a hereditary family of finite subsets of
/// the positive integers. `TransfiniteF` is the ordinal-indexed ladder
/// built from an approximating rule: level 0 holds only the empty set,
/// a successor level prepends one element below the minimum, and a
/// limit level defers to the levels named by the approximating set at
/// the minimum element. The remaining nodes are the classical Schreier
/// family and combinators over already-built families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    #[serde(rename = "F")]
    TransfiniteF {
        alpha: Ordinal,
        #[serde(default)]
        rule: ApproxFamilyRule,
    },
    #[serde(rename = "S1")]
    SchreierS1,
    Restrict {
        inner: Box<FamilySpec>,
        set: IndexMap,
    },
    Spread {
        inner: Box<FamilySpec>,
        set: IndexMap,
    },
    Ep {
        inner: Box<FamilySpec>,
    },
    Sqcup {
        left: Box<FamilySpec>,
        right: Box<FamilySpec>,
    },
    Ext {
        members: Trie,
        ground_max: u32,
        #[serde(default)]
        spread_closed: bool,
    },
}

impl FamilySpec {
    pub fn transfinite(alpha: Ordinal) -> Self {
        FamilySpec::TransfiniteF { alpha, rule: ApproxFamilyRule::Canonical }
    }

    pub fn transfinite_nat(n: u64) -> Self {
        Self::transfinite(Ordinal::from_nat(n))
    }

    pub fn expand(inner: FamilySpec) -> Self {
        FamilySpec::Ep { inner: Box::new(inner) }
    }

    pub fn restrict(inner: FamilySpec, set: IndexMap) -> Self {
        FamilySpec::Restrict { inner: Box::new(inner), set }
    }

    pub fn spread_onto(inner: FamilySpec, set: IndexMap) -> Self {
        FamilySpec::Spread { inner: Box::new(inner), set }
    }

    pub fn square_union(left: FamilySpec, right: FamilySpec) -> Self {
        FamilySpec::Sqcup { left: Box::new(left), right: Box::new(right) }
    }

    pub fn extensional<'a, I: IntoIterator<Item = &'a FinSet>>(members: I, ground_max: u32) -> Self {
        FamilySpec::Ext { members: Trie::from_members(members), ground_max, spread_closed: false }
    }

    /// Short description used in error messages.
    fn node_name(&self) -> &'static str {
        match self {
            FamilySpec::TransfiniteF { .. } => "F",
            FamilySpec::SchreierS1 => "S1",
            FamilySpec::Restrict { .. } => "restrict",
            FamilySpec::Spread { .. } => "spread",
            FamilySpec::Ep { .. } => "ep",
            FamilySpec::Sqcup { .. } => "sqcup",
            FamilySpec::Ext { .. } => "ext",
        }
    }
}

/// Decides `set ∈ spec`. Total on every node except `Ext`, which
/// reports [`Error::OutOfGround`] for sets beyond its stored ground
/// (unless the family was declared spread-closed). The ordinal
/// parameter strictly decreases along every recursion path, so the
/// transfinite case terminates.
pub fn member(set: &FinSet, spec: &FamilySpec) -> Result<bool> {
    match spec {
        FamilySpec::TransfiniteF { alpha, rule } => member_transfinite(set.elements(), alpha, rule),
        FamilySpec::SchreierS1 => Ok(schreier_s1(set)),
        FamilySpec::Restrict { inner, set: map } => {
            Ok(map.contains_set(set) && member(set, inner)?)
        }
        FamilySpec::Spread { inner, set: map } => match map.preimage(set) {
            Some(pre) => member(&pre, inner),
            None => Ok(false),
        },
        FamilySpec::Ep { inner } => {
            if set.is_empty() {
                Ok(true)
            } else {
                member(&set.strip_min(), inner)
            }
        }
        FamilySpec::Sqcup { left, right } => {
            // Both factors are hereditary, so a split into a subset and
            // its complement is as general as an arbitrary cover.
            let k = set.len();
            debug_assert!(k < 64);
            let full: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
            for mask in 0..=full {
                if member(&set.mask_subset(mask), left)?
                    && member(&set.mask_subset(full & !mask), right)?
                {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        FamilySpec::Ext { members, ground_max, spread_closed } => {
            match set.max() {
                Some(m) if m > *ground_max => {
                    if *spread_closed {
                        Ok(members.contains_spread_below(set))
                    } else {
                        Err(Error::OutOfGround { ground: *ground_max, element: m })
                    }
                }
                _ => Ok(members.contains(set)),
            }
        }
    }
}

fn schreier_s1(set: &FinSet) -> bool {
    match set.min() {
        None => true,
        Some(min) => set.len() as u32 <= min,
    }
}

fn member_transfinite(elems: &[u32], alpha: &Ordinal, rule: &ApproxFamilyRule) -> Result<bool> {
    if elems.is_empty() {
        return Ok(true);
    }
    match alpha.classify() {
        OrdinalClass::Zero => Ok(false),
        OrdinalClass::Successor(beta) => member_transfinite(&elems[1..], &beta, rule),
        OrdinalClass::Limit => {
            for beta in rule.approx_set(alpha, elems[0] as u64)? {
                if member_transfinite(elems, &beta, rule)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Decides whether `set` together with `tail` pairwise distinct,
/// arbitrarily large extra elements belongs to `spec`. Because the
/// supported families are spreading, membership of `set ∪ {n}` is
/// nondecreasing in `n`, so this symbolic evaluation is exactly the
/// "for all sufficiently large elements" reading. `Ext` and `Sqcup`
/// carry no tail-stability certificate and are refused.
pub fn sym_member(set: &FinSet, tail: u32, spec: &FamilySpec) -> Result<bool> {
    sym_rec(set.elements(), tail, spec)
}

fn sym_rec(elems: &[u32], tail: u32, spec: &FamilySpec) -> Result<bool> {
    if tail == 0 {
        return member(&FinSet::from_sorted(elems.to_vec()), spec);
    }
    match spec {
        FamilySpec::TransfiniteF { alpha, rule } => sym_transfinite(elems, tail, alpha, rule),
        FamilySpec::SchreierS1 => Ok(match elems.first() {
            None => true,
            Some(&min) => elems.len() as u32 + tail <= min,
        }),
        FamilySpec::Restrict { inner, set: map } => {
            let in_range = elems.iter().all(|&e| map.contains(e));
            Ok(in_range && sym_rec(elems, tail, inner)?)
        }
        FamilySpec::Spread { inner, set: map } => {
            match map.preimage(&FinSet::from_sorted(elems.to_vec())) {
                Some(pre) => sym_rec(pre.elements(), tail, inner),
                None => Ok(false),
            }
        }
        FamilySpec::Ep { inner } => match elems.split_first() {
            Some((_, rest)) => sym_rec(rest, tail, inner),
            // Empty concrete part: one symbolic element becomes the
            // minimum and is stripped.
            None => sym_rec(&[], tail - 1, inner),
        },
        FamilySpec::Sqcup { .. } | FamilySpec::Ext { .. } => Err(Error::UnsupportedSpec(format!(
            "symbolic tails are not certified for '{}' nodes",
            spec.node_name()
        ))),
    }
}

fn sym_transfinite(
    elems: &[u32],
    tail: u32,
    alpha: &Ordinal,
    rule: &ApproxFamilyRule,
) -> Result<bool> {
    if elems.is_empty() && tail == 0 {
        return Ok(true);
    }
    match alpha.classify() {
        OrdinalClass::Zero => Ok(false),
        OrdinalClass::Successor(beta) => {
            if elems.is_empty() {
                sym_transfinite(elems, tail - 1, &beta, rule)
            } else {
                sym_transfinite(&elems[1..], tail, &beta, rule)
            }
        }
        OrdinalClass::Limit => {
            if elems.is_empty() {
                // Arbitrarily large elements select arbitrarily high
                // branches, one of which accommodates any finite tail.
                return Ok(true);
            }
            for beta in rule.approx_set(alpha, elems[0] as u64)? {
                if sym_transfinite(elems, tail, &beta, rule)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
    }
}

/// Materializes `spec ∩ [{1..ground}]^(<inf)` as a trie with correct
/// maximal flags. For every node except `Ext` the family is hereditary,
/// so depth-first search only expands members.
pub fn enumerate(spec: &FamilySpec, ground: u32, budget: &Budget) -> Result<Trie> {
    if let FamilySpec::Ext { members, ground_max, spread_closed } = spec {
        if ground <= *ground_max || !*spread_closed {
            if ground > *ground_max {
                // A literal extensional family certifies nothing past
                // its ground; members beyond it would need OutOfGround
                // answers, so the enumeration itself is out of ground.
                return Err(Error::OutOfGround { ground: *ground_max, element: ground });
            }
            let mut t = members.filtered_to_ground(ground);
            t.recompute_maximal();
            return Ok(t);
        }
        // Spread-closed extensional families fall through to the DFS:
        // the closure is hereditary, so pruning is sound.
    }
    let mut trie = Trie::new();
    if !member(&FinSet::empty(), spec)? {
        trie.recompute_maximal();
        return Ok(trie);
    }
    trie.insert(&FinSet::empty());
    let mut stack: Vec<FinSet> = vec![FinSet::empty()];
    while let Some(current) = stack.pop() {
        let start = current.max().map_or(1, |m| m + 1);
        for next in start..=ground {
            let candidate = current.insert(next);
            if member(&candidate, spec)? {
                if trie.node_count() >= budget.max_trie_nodes {
                    return Err(Error::BudgetExceeded(format!(
                        "enumeration exceeded {} trie nodes",
                        budget.max_trie_nodes
                    )));
                }
                trie.insert(&candidate);
                stack.push(candidate);
            }
        }
    }
    trie.recompute_maximal();
    Ok(trie)
}

/// First heredity violation on the ground segment, if any: a member
/// together with a one-element-smaller subset that is not a member.
pub fn check_hereditary(
    spec: &FamilySpec,
    ground: u32,
    budget: &Budget,
) -> Result<Option<(FinSet, FinSet)>> {
    let trie = enumerate(spec, ground, budget)?;
    for m in trie.members() {
        let elems = m.elements();
        for drop in (0..elems.len()).rev() {
            let mut sub = elems.to_vec();
            sub.remove(drop);
            let sub = FinSet::from_sorted(sub);
            if !trie.contains(&sub) {
                return Ok(Some((m, sub)));
            }
        }
    }
    Ok(None)
}

/// First spreading violation on the ground segment, if any: a member
/// `A` with max below `ground` and a pointwise-larger `B` inside the
/// ground that is not a member.
pub fn check_spreading(
    spec: &FamilySpec,
    ground: u32,
    budget: &Budget,
) -> Result<Option<(FinSet, FinSet)>> {
    let trie = enumerate(spec, ground, budget)?;
    for a in trie.members() {
        if a.is_empty() || a.max().unwrap() >= ground {
            continue;
        }
        let elems = a.elements();
        let mut choice: Vec<u32> = Vec::with_capacity(elems.len());
        if let Some(b) = first_spread_violation(&trie, elems, ground, &mut choice) {
            return Ok(Some((a, b)));
        }
    }
    Ok(None)
}

fn first_spread_violation(
    trie: &Trie,
    lower: &[u32],
    ground: u32,
    choice: &mut Vec<u32>,
) -> Option<FinSet> {
    let i = choice.len();
    if i == lower.len() {
        let b = FinSet::from_sorted(choice.clone());
        return if trie.contains(&b) { None } else { Some(b) };
    }
    let floor = lower[i].max(choice.last().map_or(0, |&c| c + 1));
    for b in floor..=ground {
        choice.push(b);
        let hit = first_spread_violation(trie, lower, ground, choice);
        choice.pop();
        if hit.is_some() {
            return hit;
        }
    }
    None
}

/// Smallest shift `m <= m_max` such that, on the ground segment, every
/// member of `F_alpha` with all elements at least `m` is a member of
/// `F_beta`. Exhaustive on `{1..ground}`.
pub fn tail_shift_witness(
    alpha: &Ordinal,
    beta: &Ordinal,
    ground: u32,
    m_max: u32,
    budget: &Budget,
) -> Result<Option<u32>> {
    let fa = enumerate(&FamilySpec::transfinite(alpha.clone()), ground, budget)?;
    let fb = enumerate(&FamilySpec::transfinite(beta.clone()), ground, budget)?;
    let members = fa.members();
    'outer: for m in 1..=m_max {
        for e in &members {
            if e.min().map_or(false, |lo| lo < m) {
                continue;
            }
            if !fb.contains(e) {
                continue 'outer;
            }
        }
        return Ok(Some(m));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FinSet {
        s.parse().unwrap()
    }

    fn ord(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn f(s: &str) -> FamilySpec {
        FamilySpec::transfinite(ord(s))
    }

    #[test]
    fn finite_levels_count_cardinality() {
        // Unrolling the successor step twice: level k holds exactly the
        // sets of size at most k.
        assert!(member(&fs("3,7"), &f("2")).unwrap());
        assert!(!member(&fs("3,7,9"), &f("2")).unwrap());
        assert!(member(&fs(""), &f("0")).unwrap());
        assert!(!member(&fs("1"), &f("0")).unwrap());
    }

    #[test]
    fn level_omega_is_classical_schreier() {
        assert!(!member(&fs("1,2"), &f("w")).unwrap());
        assert!(member(&fs("3,5,9"), &f("w")).unwrap());
        for e in 0u32..1 << 10 {
            let set = FinSet::from_sorted((0..10).filter(|i| e & (1 << i) != 0).map(|i| i + 1).collect());
            assert_eq!(
                member(&set, &f("w")).unwrap(),
                member(&set, &FamilySpec::SchreierS1).unwrap(),
                "disagreement at {set}"
            );
        }
    }

    #[test]
    fn empty_set_is_everywhere() {
        for spec in [
            f("0"),
            f("w*2 + 3"),
            FamilySpec::SchreierS1,
            FamilySpec::expand(f("w")),
            FamilySpec::square_union(f("1"), f("2")),
            FamilySpec::spread_onto(f("w"), IndexMap::evens()),
        ] {
            assert!(member(&FinSet::empty(), &spec).unwrap(), "empty set missing from {spec:?}");
        }
    }

    #[test]
    fn restrict_and_spread() {
        let evens = IndexMap::evens();
        let restricted = FamilySpec::restrict(FamilySpec::SchreierS1, evens.clone());
        assert!(member(&fs("4,6"), &restricted).unwrap());
        assert!(!member(&fs("3,6"), &restricted).unwrap());
        // {2,4} spreads the positions {1,2}, and {1,2} is not Schreier.
        let spread = FamilySpec::spread_onto(FamilySpec::SchreierS1, evens);
        assert!(!member(&fs("2,4"), &spread).unwrap());
        assert!(member(&fs("4,6"), &spread).unwrap()); // positions {2,3}
        assert!(!member(&fs("3,4"), &spread).unwrap()); // 3 off range
    }

    #[test]
    fn square_union_covers_splits() {
        let spec = FamilySpec::square_union(f("1"), f("1"));
        assert!(member(&fs("4,9"), &spec).unwrap());
        assert!(!member(&fs("4,9,11"), &spec).unwrap());
    }

    #[test]
    fn extensional_is_literal() {
        let spec = FamilySpec::extensional([fs(""), fs("1,2")].iter(), 2);
        assert!(member(&fs("1,2"), &spec).unwrap());
        assert!(!member(&fs("1"), &spec).unwrap());
        assert!(matches!(
            member(&fs("3"), &spec),
            Err(Error::OutOfGround { ground: 2, element: 3 })
        ));
    }

    #[test]
    fn extensional_spread_closure() {
        let spec = FamilySpec::Ext {
            members: Trie::from_members(&[fs(""), fs("1"), fs("2,3")]),
            ground_max: 3,
            spread_closed: true,
        };
        assert!(member(&fs("9"), &spec).unwrap());
        assert!(member(&fs("5,11"), &spec).unwrap());
        assert!(!member(&fs("1,4"), &spec).unwrap());
    }

    #[test]
    fn symbolic_membership_examples() {
        assert!(sym_member(&fs(""), 2, &f("2")).unwrap());
        assert!(!sym_member(&fs(""), 3, &f("2")).unwrap());
        assert!(!sym_member(&fs("1"), 1, &f("w")).unwrap());
        assert!(sym_member(&fs(""), 5, &f("w")).unwrap());
        assert!(sym_member(&fs(""), 1, &FamilySpec::SchreierS1).unwrap());
        assert!(matches!(
            sym_member(&fs(""), 1, &FamilySpec::square_union(f("1"), f("1"))),
            Err(Error::UnsupportedSpec(_))
        ));
    }

    #[test]
    fn enumerate_counts() {
        let budget = Budget::default();
        let t = enumerate(&f("2"), 4, &budget).unwrap();
        assert_eq!(t.member_count(), 11);
        let t = enumerate(&FamilySpec::SchreierS1, 3, &budget).unwrap();
        let members = t.members();
        let expect: Vec<FinSet> = ["", "1", "2", "2,3", "3"].iter().map(|s| fs(s)).collect();
        assert_eq!(members, expect);
        let t = enumerate(&f("0"), 10, &budget).unwrap();
        assert_eq!(t.members(), vec![fs("")]);
    }

    #[test]
    fn enumerate_budget() {
        let tiny = Budget::tiny();
        assert!(matches!(
            enumerate(&f("3"), 12, &tiny),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn hereditary_checks() {
        let budget = Budget::default();
        assert_eq!(check_hereditary(&f("w"), 8, &budget).unwrap(), None);
        let bad = FamilySpec::extensional([fs(""), fs("1,2")].iter(), 2);
        assert_eq!(
            check_hereditary(&bad, 2, &budget).unwrap(),
            Some((fs("1,2"), fs("1")))
        );
        assert_eq!(
            check_hereditary(&FamilySpec::square_union(f("1"), f("1")), 6, &budget).unwrap(),
            None
        );
    }

    #[test]
    fn spreading_checks() {
        let budget = Budget::default();
        assert_eq!(check_spreading(&FamilySpec::SchreierS1, 8, &budget).unwrap(), None);
        assert_eq!(check_spreading(&f("w + 1"), 8, &budget).unwrap(), None);
        let bad = FamilySpec::extensional([fs(""), fs("1")].iter(), 3);
        assert_eq!(check_spreading(&bad, 3, &budget).unwrap(), Some((fs("1"), fs("2"))));
    }

    #[test]
    fn tail_shift_witnesses() {
        let budget = Budget::default();
        assert_eq!(
            tail_shift_witness(&ord("1"), &ord("w"), 10, 10, &budget).unwrap(),
            Some(1)
        );
        assert_eq!(
            tail_shift_witness(&ord("2"), &ord("w"), 10, 10, &budget).unwrap(),
            Some(2)
        );
        assert_eq!(
            tail_shift_witness(&ord("3"), &ord("3"), 10, 10, &budget).unwrap(),
            Some(1)
        );
    }

    #[test]
    fn spec_json_tags() {
        let spec = FamilySpec::spread_onto(f("w + 1"), IndexMap::evens());
        let json = serde_json::to_string(&spec).unwrap();
        assert!(json.contains("\"kind\":\"spread\""));
        assert!(json.contains("\"kind\":\"F\""));
        let back: FamilySpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }
}
