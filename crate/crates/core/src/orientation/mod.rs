//! Orienting hyperedges so that no node receives more than ℓ of them.
//!
//! An orientation is a cuckoo hash table placement: each key (edge) is
//! stored in one of its buckets (nodes), each bucket holding at most ℓ keys.

mod matching;
mod selfless;

pub use matching::matching_orient;
pub use selfless::{selfless_orient, selfless_orient_reference, selfless_orient_with, TieBreak};

use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    /// The greedy procedure stopped at this step (1-based): every remaining
    /// node had priority above ℓ, or an undirected edge had only saturated
    /// nodes left.
    Stuck {
        step: usize,
    },
    /// No orientation exists; a maximum matching places only this many edges.
    Infeasible {
        max_placed: usize,
    },
}

impl Status {
    pub fn is_success(&self) -> bool {
        matches!(self, Status::Success)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation {
    /// Target node of each edge; `None` for edges left undirected.
    pub assignment: Vec<Option<u32>>,
    pub status: Status,
}

impl Orientation {
    pub fn is_success(&self) -> bool {
        self.status.is_success()
    }

    pub fn placed(&self) -> usize {
        self.assignment.iter().filter(|a| a.is_some()).count()
    }
}

/// Checks a successful orientation: every edge points at one of its own
/// nodes and no node receives more than `ell` edges.
pub fn verify(g: &Hypergraph, o: &Orientation, ell: u32) -> bool {
    if !o.is_success() || o.assignment.len() != g.n() {
        return false;
    }
    let mut indegree = vec![0u32; g.m()];
    for (e, target) in o.assignment.iter().enumerate() {
        let Some(v) = *target else {
            return false;
        };
        if g.edge(e).binary_search(&v).is_err() {
            return false;
        }
        indegree[v as usize] += 1;
        if indegree[v as usize] > ell {
            return false;
        }
    }
    true
}
