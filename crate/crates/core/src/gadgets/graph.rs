use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::GadgetError;

/// Above this many vertices the subset table no longer fits comfortably in
/// memory, whatever limit the caller passes.
pub const HAM_PATH_HARD_LIMIT: usize = 24;

/// Undirected simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    n: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl SimpleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let edges = edges
            .into_iter()
            .inspect(|&(a, b)| assert!(a < n && b < n && a != b, "bad edge ({a}, {b})"))
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        SimpleGraph { n, edges }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }
}

/// Whether some vertex ordering has every consecutive pair adjacent.
/// Dynamic programming over vertex subsets, `O(2^n n²)`.
pub fn ham_path_exists(g: &SimpleGraph, limit: usize) -> Result<bool, GadgetError> {
    let n = g.len();
    let limit = limit.min(HAM_PATH_HARD_LIMIT);
    if n > limit {
        return Err(GadgetError::LimitExceeded { n, limit });
    }
    if n <= 1 {
        return Ok(true);
    }
    let mut adj = vec![0u32; n];
    for (a, b) in g.edges() {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    // ends[mask]: vertices at which some path covering exactly `mask` ends.
    let full = (1usize << n) - 1;
    let mut ends = vec![0u32; full + 1];
    for v in 0..n {
        ends[1 << v] = 1 << v;
    }
    for mask in 1..=full {
        let e = ends[mask];
        if e == 0 {
            continue;
        }
        for (v, &nb) in adj.iter().enumerate() {
            if e & (1 << v) == 0 {
                continue;
            }
            let mut next = nb & !(mask as u32);
            while next != 0 {
                let x = next.trailing_zeros() as usize;
                next &= next - 1;
                ends[mask | (1 << x)] |= 1 << x;
            }
        }
    }
    Ok(ends[full] != 0)
}
