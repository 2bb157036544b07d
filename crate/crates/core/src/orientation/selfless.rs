//! The generalized selfless heuristic.
//!
//! Each step works with
//!
//! * `U(v)`: undirected edges at `v`, `I(v)`: edges already directed to `v`;
//! * the weight `ω(e)` of an undirected edge: how many of its nodes are
//!   still unsaturated (`|I| < ℓ`);
//! * the priority `π(v) = Σ_{e∈U(v)} 1/ω(e) + |I(v)|`, the expected load of
//!   `v` if its undirected edges were directed at random, or 0 when
//!   `|U(v)| + |I(v)| ≤ ℓ` so that `v` can simply absorb all of them.
//!
//! A node of minimum priority is picked; if that priority exceeds ℓ the
//! procedure fails, otherwise one of its minimum-weight undirected edges is
//! directed to it. Priority-0 nodes are taken first, so the procedure opens
//! by peeling the (ℓ+1)-core.
//!
//! Priorities are exact: with `D = lcm(1..=k_max)` every `1/ω` is the
//! integer `D/ω`, so comparisons and the `π(v) > ℓ` test never depend on
//! rounding.

use std::collections::BTreeMap;

use rand::Rng as _;

use super::{Orientation, Status};
use crate::hypergraph::Hypergraph;
use crate::rng::{derive, rng_from_seed, stream, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TieBreak {
    /// Uniform among the tied candidates, from the seeded generator.
    Random(u64),
    /// The lowest node id, then the lowest edge id. Makes runs comparable
    /// across implementations.
    LowestId,
}

enum Chooser {
    Random(Box<Rng>),
    LowestId,
}

impl Chooser {
    fn new(ties: TieBreak) -> Self {
        match ties {
            TieBreak::Random(seed) => {
                Chooser::Random(Box::new(rng_from_seed(derive(seed, stream::ORIENT))))
            }
            TieBreak::LowestId => Chooser::LowestId,
        }
    }

    /// Picks from a nonempty candidate list.
    fn pick(&mut self, candidates: &[u32]) -> u32 {
        match self {
            Chooser::Random(rng) => candidates[rng.random_range(0..candidates.len())],
            Chooser::LowestId => *candidates.iter().min().expect("nonempty"),
        }
    }
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `lcm(1..=k)`; fits in u128 for every k up to 88.
fn lcm_upto(k: usize) -> u128 {
    (1..=k as u128).fold(1, |acc, i| acc / gcd(acc, i) * i)
}

/// Runs the selfless procedure with random tie-breaking seeded by `seed`.
pub fn selfless_orient(g: &Hypergraph, ell: u32, seed: u64) -> Orientation {
    selfless_orient_with(g, ell, TieBreak::Random(seed))
}

/// Nodes that can still receive edges, bucketed by priority.
struct PriorityQueue {
    buckets: BTreeMap<u128, Vec<u32>>,
    key: Vec<Option<u128>>,
    pos: Vec<u32>,
}

impl PriorityQueue {
    fn new(m: usize) -> Self {
        PriorityQueue {
            buckets: BTreeMap::new(),
            key: vec![None; m],
            pos: vec![0; m],
        }
    }

    fn remove(&mut self, v: usize) {
        let Some(k) = self.key[v].take() else {
            return;
        };
        let bucket = self.buckets.get_mut(&k).expect("bucket exists");
        let i = self.pos[v] as usize;
        bucket.swap_remove(i);
        if let Some(&moved) = bucket.get(i) {
            self.pos[moved as usize] = i as u32;
        }
        if bucket.is_empty() {
            self.buckets.remove(&k);
        }
    }

    fn set(&mut self, v: usize, key: Option<u128>) {
        if self.key[v] == key {
            return;
        }
        self.remove(v);
        if let Some(k) = key {
            let bucket = self.buckets.entry(k).or_default();
            self.pos[v] = bucket.len() as u32;
            bucket.push(v as u32);
            self.key[v] = Some(k);
        }
    }

    fn min(&self) -> Option<(u128, &[u32])> {
        self.buckets
            .first_key_value()
            .map(|(&k, nodes)| (k, nodes.as_slice()))
    }
}

/// Selfless orientation with the given tie-breaking rule.
///
/// Weights and priorities are maintained incrementally: directing an edge
/// only changes the nodes of that edge, and saturating a node only changes
/// the weights of its remaining undirected edges.
pub fn selfless_orient_with(g: &Hypergraph, ell: u32, ties: TieBreak) -> Orientation {
    let n = g.n();
    let m = g.m();
    let mut assignment = vec![None; n];
    if n == 0 {
        return Orientation {
            assignment,
            status: Status::Success,
        };
    }
    let ell = ell as usize;
    let k_max = g.max_edge_size();
    let denom = lcm_upto(k_max);
    // inv[w] = D / w; a weight of 0 contributes nothing since the run stops.
    let inv: Vec<u128> = (0..=k_max)
        .map(|w| if w == 0 { 0 } else { denom / w as u128 })
        .collect();
    let limit = ell as u128 * denom;

    let mut chooser = Chooser::new(ties);
    let mut undirected: Vec<usize> = (0..m).map(|v| g.degree(v)).collect();
    let mut indegree = vec![0usize; m];
    let mut omega: Vec<usize> = g.edges().map(|e| e.len()).collect();
    let mut weight_sum = vec![0u128; m];
    for e in 0..n {
        for &v in g.edge(e) {
            weight_sum[v as usize] += inv[omega[e]];
        }
    }

    let priority = |v: usize, undirected: &[usize], indegree: &[usize], weight_sum: &[u128]| {
        if undirected[v] == 0 || indegree[v] >= ell {
            None
        } else if undirected[v] + indegree[v] <= ell {
            Some(0)
        } else {
            Some(weight_sum[v] + indegree[v] as u128 * denom)
        }
    };

    let mut queue = PriorityQueue::new(m);
    for v in 0..m {
        queue.set(v, priority(v, &undirected, &indegree, &weight_sum));
    }

    let mut dead_edges = 0usize;
    let mut touched: Vec<u32> = Vec::new();
    let mut candidates: Vec<u32> = Vec::new();

    for step in 1..=n {
        let stuck = || Status::Stuck { step };
        if dead_edges > 0 {
            return Orientation {
                assignment,
                status: stuck(),
            };
        }
        let Some((key, nodes)) = queue.min() else {
            return Orientation {
                assignment,
                status: stuck(),
            };
        };
        if key > limit {
            return Orientation {
                assignment,
                status: stuck(),
            };
        }
        let v = chooser.pick(nodes) as usize;

        let best = g
            .incident(v)
            .iter()
            .filter(|&&e| assignment[e as usize].is_none())
            .map(|&e| omega[e as usize])
            .min()
            .expect("node in queue has an undirected edge");
        candidates.clear();
        candidates.extend(
            g.incident(v)
                .iter()
                .filter(|&&e| assignment[e as usize].is_none() && omega[e as usize] == best),
        );
        let e = chooser.pick(&candidates) as usize;

        assignment[e] = Some(v as u32);
        touched.clear();
        for &u in g.edge(e) {
            let u = u as usize;
            undirected[u] -= 1;
            weight_sum[u] -= inv[omega[e]];
            touched.push(u as u32);
        }
        indegree[v] += 1;
        if indegree[v] == ell {
            for &f in g.incident(v) {
                let f = f as usize;
                if assignment[f].is_some() {
                    continue;
                }
                let old = omega[f];
                omega[f] -= 1;
                if omega[f] == 0 {
                    dead_edges += 1;
                }
                for &u in g.edge(f) {
                    let u = u as usize;
                    weight_sum[u] = weight_sum[u] - inv[old] + inv[omega[f]];
                    touched.push(u as u32);
                }
            }
        }
        for &u in &touched {
            let u = u as usize;
            queue.set(u, priority(u, &undirected, &indegree, &weight_sum));
        }
    }
    Orientation {
        assignment,
        status: Status::Success,
    }
}

/// Direct transcription of the procedure: weights and priorities are
/// recomputed from scratch at every step, and the priority accounting
/// identity is asserted whenever no node has priority 0. For ℓ = 1,
/// saturated nodes get the sentinel priority 2. Quadratic; meant for
/// cross-checking [`selfless_orient_with`] on small instances.
pub fn selfless_orient_reference(g: &Hypergraph, ell: u32, ties: TieBreak) -> Orientation {
    let n = g.n();
    let m = g.m();
    let ell = ell as usize;
    let mut assignment: Vec<Option<u32>> = vec![None; n];
    let mut chooser = Chooser::new(ties);
    let denom = lcm_upto(g.max_edge_size().max(1));
    let limit = ell as u128 * denom;

    for step in 1..=n {
        let mut indegree = vec![0usize; m];
        for v in assignment.iter().flatten() {
            indegree[*v as usize] += 1;
        }
        let undirected_at = |v: usize| -> Vec<u32> {
            g.incident(v)
                .iter()
                .copied()
                .filter(|&e| assignment[e as usize].is_none())
                .collect()
        };
        let mut omega = vec![0usize; n];
        for e in 0..n {
            if assignment[e].is_none() {
                omega[e] = g
                    .edge(e)
                    .iter()
                    .filter(|&&v| indegree[v as usize] < ell)
                    .count();
                if omega[e] == 0 {
                    return Orientation {
                        assignment,
                        status: Status::Stuck { step },
                    };
                }
            }
        }
        let mut priorities: Vec<(u32, u128)> = Vec::new();
        for (v, &load) in indegree.iter().enumerate() {
            let u = undirected_at(v);
            if u.is_empty() {
                continue;
            }
            let sum: u128 = u.iter().map(|&e| denom / omega[e as usize] as u128).sum();
            let pi = if ell == 1 {
                if load > 0 {
                    2 * denom
                } else if u.len() == 1 {
                    0
                } else {
                    sum
                }
            } else if u.len() + load <= ell {
                0
            } else {
                sum + load as u128 * denom
            };
            priorities.push((v as u32, pi));
        }

        if priorities.iter().all(|&(_, p)| p > 0) {
            let open_edges = assignment.iter().filter(|a| a.is_none()).count() as u128;
            let unsaturated = priorities
                .iter()
                .filter(|&&(v, _)| indegree[v as usize] < ell);
            let total: u128 = unsaturated.clone().map(|&(_, p)| p).sum();
            let loads: u128 = unsaturated
                .map(|&(v, _)| indegree[v as usize] as u128)
                .sum();
            assert_eq!(
                total,
                (open_edges + loads) * denom,
                "priority accounting violated at step {step}"
            );
        }

        let min = priorities
            .iter()
            .map(|&(_, p)| p)
            .min()
            .expect("open edges remain");
        if min > limit {
            return Orientation {
                assignment,
                status: Status::Stuck { step },
            };
        }
        let tied: Vec<u32> = priorities
            .iter()
            .filter(|&&(_, p)| p == min)
            .map(|&(v, _)| v)
            .collect();
        let v = chooser.pick(&tied);
        let open = undirected_at(v as usize);
        let best = open.iter().map(|&e| omega[e as usize]).min().unwrap();
        let edges: Vec<u32> = open
            .into_iter()
            .filter(|&e| omega[e as usize] == best)
            .collect();
        let e = chooser.pick(&edges);
        assignment[e as usize] = Some(v);
    }
    Orientation {
        assignment,
        status: Status::Success,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::sample_regular;
    use crate::orientation::verify;

    fn graph(m: usize, edges: &[&[u32]]) -> Hypergraph {
        Hypergraph::new(m, edges.iter().map(|e| e.to_vec())).unwrap()
    }

    #[test]
    fn lcm_values() {
        assert_eq!(lcm_upto(1), 1);
        assert_eq!(lcm_upto(3), 6);
        assert_eq!(lcm_upto(8), 840);
        assert_eq!(lcm_upto(16), 720_720);
        assert!(lcm_upto(64) > u64::MAX as u128);
    }

    #[test]
    fn single_edge_succeeds() {
        let g = graph(3, &[&[0, 1, 2]]);
        let o = selfless_orient(&g, 1, 0);
        assert!(o.is_success());
        let target = o.assignment[0].unwrap();
        assert!(g.edge(0).contains(&target));
    }

    #[test]
    fn pigeonhole_failure() {
        let g = graph(2, &[&[0, 1], &[0, 1], &[0, 1]]);
        for seed in 0..10 {
            let o = selfless_orient(&g, 1, seed);
            assert!(matches!(o.status, Status::Stuck { .. }));
        }
        // Capacity two per node is enough.
        assert!(selfless_orient(&g, 2, 0).is_success());
    }

    #[test]
    fn empty_graph() {
        let g = graph(4, &[]);
        assert!(selfless_orient(&g, 1, 0).is_success());
    }

    #[test]
    fn two_copies_of_a_pair() {
        let g = graph(2, &[&[0, 1], &[0, 1]]);
        let o = selfless_orient(&g, 1, 3);
        assert!(verify(&g, &o, 1));
    }

    #[test]
    fn deterministic_per_seed() {
        let g = sample_regular(2000, 1800, 3, 5).unwrap();
        assert_eq!(selfless_orient(&g, 1, 9), selfless_orient(&g, 1, 9));
    }

    #[test]
    fn incremental_matches_reference() {
        for seed in 0..60u64 {
            let m = 12 + (seed % 9) as usize;
            let k = 2 + (seed % 3) as u32;
            let ell = 1 + (seed % 3) as u32;
            let n = (m as f64 * (0.6 + 0.1 * (seed % 5) as f64) * ell as f64) as usize;
            let g = sample_regular(m, n, k, seed).unwrap();
            let fast = selfless_orient_with(&g, ell, TieBreak::LowestId);
            let slow = selfless_orient_reference(&g, ell, TieBreak::LowestId);
            assert_eq!(fast, slow, "seed={seed} m={m} n={n} k={k} ell={ell}");
        }
    }
}
