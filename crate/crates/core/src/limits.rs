/// Caps on the combinatorial searches.
///
/// Every search that can blow up takes a `Limits` and fails with
/// [`Error::ResourceLimit`](crate::Error::ResourceLimit) rather than running
/// unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of graph maps materialized or visited by one search.
    pub max_maps: usize,
    /// Maximum number of states held by a row search or a counting pass.
    pub max_states: usize,
    /// Widest row the path-homotopy search will try. A negative answer is
    /// only reported after exhausting a search at this width.
    pub max_window: usize,
}

impl Limits {
    pub const DEFAULT_MAX_MAPS: usize = 200_000;

    pub fn with_max_maps(self, max_maps: usize) -> Self {
        Limits { max_maps, ..self }
    }

    pub fn with_max_window(self, max_window: usize) -> Self {
        Limits { max_window, ..self }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_maps: Self::DEFAULT_MAX_MAPS,
            max_states: 4_000_000,
            max_window: 24,
        }
    }
}
