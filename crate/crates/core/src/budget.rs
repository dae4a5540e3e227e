/// Caps for the search-heavy operations. Every enumeration or
/// vertex-hunting routine takes a `Budget` so callers decide how much
/// work is acceptable; hitting a cap surfaces as
/// [`Error::BudgetExceeded`](crate::Error::BudgetExceeded), never as a
/// silently wrong answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    /// Max trie nodes materialized by a single enumeration.
    pub max_trie_nodes: usize,
    /// Max support size accepted by the Schreier-type norm evaluators.
    pub max_norm_support: usize,
    /// Max support size accepted by the implicit (Tsirelson-type) norm.
    pub max_tsirelson_support: usize,
    /// Max coefficient-space dimension for vertex enumeration.
    pub max_vertex_dim: usize,
    /// Max inequality rows generated for a polyhedral unit ball.
    pub max_ball_rows: usize,
    /// Window width for the stabilization probe backing derivatives.
    pub probe_window: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_trie_nodes: 250_000,
            max_norm_support: 20,
            max_tsirelson_support: 12,
            max_vertex_dim: 6,
            max_ball_rows: 8_192,
            probe_window: 8,
        }
    }
}

impl Budget {
    /// A budget small enough that nontrivial enumerations are refused.
    /// Used to exercise the skipped-with-budget reporting path.
    pub fn tiny() -> Self {
        Budget {
            max_trie_nodes: 24,
            max_norm_support: 3,
            max_tsirelson_support: 3,
            max_vertex_dim: 2,
            max_ball_rows: 16,
            probe_window: 4,
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "tiny" => Some(Self::tiny()),
            "default" => Some(Self::default()),
            _ => None,
        }
    }
}
