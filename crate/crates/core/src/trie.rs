use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::finset::FinSet;

/// Root-anchored storage for a family of finite sets: a root-to-node
/// path spells a set in increasing order. Nodes created only to carry a
/// longer member keep `member = false`, so arbitrary (even
/// non-hereditary) finite families can be represented literally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trie {
    root: Node,
    node_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
struct Node {
    member: bool,
    /// Member with no member strictly above it in the subtree.
    maximal: bool,
    children: BTreeMap<u32, Node>,
}

impl Default for Trie {
    fn default() -> Self {
        Self::new()
    }
}

impl Trie {
    /// An empty trie; note the empty set is not a member until inserted.
    pub fn new() -> Self {
        Trie { root: Node::default(), node_count: 1 }
    }

    pub fn from_members<'a, I: IntoIterator<Item = &'a FinSet>>(members: I) -> Self {
        let mut t = Trie::new();
        for m in members {
            t.insert(m);
        }
        t.recompute_maximal();
        t
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn insert(&mut self, set: &FinSet) {
        let mut node = &mut self.root;
        for e in set.iter() {
            let count = &mut self.node_count;
            node = node.children.entry(e).or_insert_with(|| {
                *count += 1;
                Node::default()
            });
        }
        node.member = true;
    }

    pub fn contains(&self, set: &FinSet) -> bool {
        let mut node = &self.root;
        for e in set.iter() {
            match node.children.get(&e) {
                Some(n) => node = n,
                None => return false,
            }
        }
        node.member
    }

    /// Whether some member is a spread of `set`, i.e. a member
    /// `{a_1 < ... < a_k}` with `k = #set` and `a_i <= s_i` pointwise.
    /// This decides membership in the spreading closure of the family.
    pub fn contains_spread_below(&self, set: &FinSet) -> bool {
        fn walk(node: &Node, rest: &[u32]) -> bool {
            match rest.split_first() {
                None => node.member,
                Some((&cap, tail)) => node
                    .children
                    .range(..=cap)
                    .any(|(_, child)| walk(child, tail)),
            }
        }
        walk(&self.root, set.elements())
    }

    /// Recomputes the maximal flags: a member is maximal when no member
    /// lies strictly above it along its subtree.
    pub fn recompute_maximal(&mut self) {
        fn walk(node: &mut Node) -> bool {
            let mut below = false;
            for child in node.children.values_mut() {
                below |= walk(child);
            }
            node.maximal = node.member && !below;
            node.member || below
        }
        walk(&mut self.root);
    }

    /// All members in lexicographic path order.
    pub fn members(&self) -> Vec<FinSet> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn walk(node: &Node, path: &mut Vec<u32>, out: &mut Vec<FinSet>) {
            if node.member {
                out.push(FinSet::from_sorted(path.clone()));
            }
            for (&e, child) in &node.children {
                path.push(e);
                walk(child, path, out);
                path.pop();
            }
        }
        walk(&self.root, &mut path, &mut out);
        out
    }

    pub fn member_count(&self) -> usize {
        fn walk(node: &Node) -> usize {
            node.member as usize + node.children.values().map(walk).sum::<usize>()
        }
        walk(&self.root)
    }

    pub fn maximal_members(&self) -> Vec<FinSet> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        fn walk(node: &Node, path: &mut Vec<u32>, out: &mut Vec<FinSet>) {
            if node.maximal {
                out.push(FinSet::from_sorted(path.clone()));
            }
            for (&e, child) in &node.children {
                path.push(e);
                walk(child, path, out);
                path.pop();
            }
        }
        walk(&self.root, &mut path, &mut out);
        out
    }

    /// Members restricted to elements `<= ground`.
    pub fn filtered_to_ground(&self, ground: u32) -> Trie {
        let members = self.members();
        Trie::from_members(members.iter().filter(|m| m.max().map_or(true, |x| x <= ground)))
    }

    /// DOT rendering: one node per member, an edge for each
    /// single-element extension between members, maximal members drawn
    /// with a double border. Output is deterministic.
    pub fn to_dot(&self) -> String {
        let members = self.members();
        let maximal: std::collections::BTreeSet<FinSet> =
            self.maximal_members().into_iter().collect();
        let label = |m: &FinSet| {
            if m.is_empty() {
                "{}".to_string()
            } else {
                m.to_string()
            }
        };
        let mut out = String::from("digraph family {\n  rankdir=LR;\n  node [shape=box];\n");
        for m in &members {
            let extra = if maximal.contains(m) { " peripheries=2" } else { "" };
            out.push_str(&format!("  \"{}\" [label=\"{}\"{}];\n", label(m), label(m), extra));
        }
        let member_set: std::collections::BTreeSet<&FinSet> = members.iter().collect();
        for m in &members {
            if m.is_empty() {
                continue;
            }
            for i in 0..m.len() {
                let mut parent = m.elements().to_vec();
                parent.remove(i);
                let parent = FinSet::from_sorted(parent);
                if member_set.contains(&parent) {
                    out.push_str(&format!("  \"{}\" -> \"{}\";\n", label(&parent), label(m)));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl Serialize for Trie {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.members().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Trie {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let members = Vec::<FinSet>::deserialize(deserializer)?;
        Ok(Trie::from_members(&members))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(s: &str) -> FinSet {
        s.parse().unwrap()
    }

    #[test]
    fn insert_contains_members() {
        let t = Trie::from_members(&[fs(""), fs("1"), fs("2"), fs("2,3")]);
        assert!(t.contains(&fs("")));
        assert!(t.contains(&fs("2,3")));
        assert!(!t.contains(&fs("3")));
        assert_eq!(t.member_count(), 4);
        let members = t.members();
        assert_eq!(members, vec![fs(""), fs("1"), fs("2"), fs("2,3")]);
    }

    #[test]
    fn intermediate_nodes_are_not_members() {
        // Deliberately non-hereditary: {1,2} without {1}.
        let t = Trie::from_members(&[fs(""), fs("1,2")]);
        assert!(!t.contains(&fs("1")));
        assert!(t.contains(&fs("1,2")));
    }

    #[test]
    fn maximal_flags() {
        let t = Trie::from_members(&[fs(""), fs("1"), fs("2"), fs("3"), fs("2,3")]);
        assert_eq!(t.maximal_members(), vec![fs("1"), fs("2,3"), fs("3")]);
    }

    #[test]
    fn spread_lookup() {
        let t = Trie::from_members(&[fs(""), fs("1"), fs("2,3")]);
        assert!(t.contains_spread_below(&fs("7")));
        assert!(t.contains_spread_below(&fs("2,9")));
        assert!(t.contains_spread_below(&fs("4,5")));
        assert!(!t.contains_spread_below(&fs("1,2")));
        assert!(!t.contains_spread_below(&fs("2,3,4")));
    }
}
